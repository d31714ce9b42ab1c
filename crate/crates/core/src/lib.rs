//! Berenstein-Zelevinsky triangles glued along trivalent trees.
//!
//! Lattice points of the glued cone count `sl_m` tensor invariants, and for
//! `sl_3` the cone has explicit generators and quadratic/cubic relations.

pub mod tree;
pub mod liealg;
pub mod lattice;
pub mod bzdiagram;
pub mod quilt;
pub mod presentation;
pub mod gtpattern;
