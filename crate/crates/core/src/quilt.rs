//! Quilts: one BZ triangle per trinode of a trivalent tree, glued along the
//! internal edges.
//!
//! At trinode `v`, side `k + 1` of its triangle faces the `k`-th incident
//! edge in rotation order (the first being the edge towards leaf 1). Across
//! an internal edge the two side weights must be dual: the ω_i coefficient
//! read on one side equals the ω_{m-i} coefficient read on the other.
//!
//! Variables are the triangle entries of every trinode, concatenated in
//! trinode order.

use std::collections::BTreeMap;

use serde_json::json;
use thiserror::Error;

use crate::bzdiagram::{BzDiagram, BzError, BzWeighting};
use crate::lattice::{HilbertBasis, IntegerCone, LatticeError, Point};
use crate::liealg::{DominantWeight, WeightVector};
use crate::tree::{EdgeId, ProperSubtree, Tree, TreeError, VertexId};

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum QuiltError {
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error(transparent)]
    Bz(#[from] BzError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("edge {0} is not an internal edge")]
    NotInternal(EdgeId),
    #[error("vertex {0} is not a trinode")]
    NotTrinode(VertexId),
    #[error("this operation needs m = {expected}, the quilt has m = {got}")]
    WrongRank { expected: usize, got: usize },
    #[error("expected {expected} values, got {got}")]
    WrongLength { expected: usize, got: usize },
    #[error("weighting violates constraint {0}")]
    Violated(usize),
    #[error("boundary weights do not match the quilt: {0}")]
    BadBoundary(String),
    #[error("malformed weighting: {0}")]
    Json(String),
}

#[derive(Clone, Debug)]
pub struct Quilt {
    tree: Tree,
    m: usize,
    diagram: BzDiagram,
    /// Incident edges of each trinode in rotation order; position `k` is
    /// matched with side `k + 1`.
    sides: Vec<[EdgeId; 3]>,
    hexagon_equations: Vec<Vec<i64>>,
    gluing_equations: Vec<Vec<i64>>,
}

/// A point of the quilt cone, by variable index.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuiltWeighting {
    values: Point,
}

impl QuiltWeighting {
    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn into_values(self) -> Point {
        self.values
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0)
    }

    pub fn add(&self, other: &QuiltWeighting) -> QuiltWeighting {
        QuiltWeighting {
            values: self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Quilt {
    pub fn new(tree: Tree, m: usize) -> Result<Self, QuiltError> {
        let diagram = BzDiagram::new(m)?;
        let sides: Vec<[EdgeId; 3]> = tree
            .trinodes()
            .map(|v| {
                tree.incident_edges(v)
                    .try_into()
                    .expect("trinodes have three edges")
            })
            .collect();
        let mut q = Quilt {
            tree,
            m,
            diagram,
            sides,
            hexagon_equations: Vec::new(),
            gluing_equations: Vec::new(),
        };
        let nv = q.num_vars();
        let local = q.diagram.hexagon_constraints();
        for v in q.tree.trinodes() {
            let off = q.offset(v);
            for eq in &local {
                let mut row = vec![0; nv];
                row[off..off + eq.len()].copy_from_slice(eq);
                q.hexagon_equations.push(row);
            }
        }
        for e in q.tree.internal_edges() {
            let (u, v) = q.tree.edge(e);
            let (u, v) = (u.min(v), u.max(v));
            let ru = q.edge_rows(u, e)?;
            let rv = q.edge_rows(v, e)?;
            for i in 0..m - 1 {
                let row: Vec<i64> = ru[i].iter().zip(&rv[m - 2 - i]).map(|(a, b)| a - b).collect();
                q.gluing_equations.push(row);
            }
        }
        Ok(q)
    }

    pub fn tree(&self) -> &Tree {
        &self.tree
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn diagram(&self) -> &BzDiagram {
        &self.diagram
    }

    pub fn num_trinodes(&self) -> usize {
        self.sides.len()
    }

    pub fn num_vars(&self) -> usize {
        self.num_trinodes() * self.diagram.num_entries()
    }

    fn check_trinode(&self, v: VertexId) -> Result<(), QuiltError> {
        if self.tree.trinodes().contains(&v) {
            Ok(())
        } else {
            Err(QuiltError::NotTrinode(v))
        }
    }

    /// First variable index of the triangle at trinode `v`.
    pub fn offset(&self, v: VertexId) -> usize {
        (v - self.tree.leaf_count()) * self.diagram.num_entries()
    }

    /// Side (1, 2 or 3) of the triangle at `v` facing edge `e`.
    pub fn side_of(&self, v: VertexId, e: EdgeId) -> Result<usize, QuiltError> {
        self.check_trinode(v)?;
        self.sides[v - self.tree.leaf_count()]
            .iter()
            .position(|&x| x == e)
            .map(|k| k + 1)
            .ok_or(QuiltError::NotInternal(e))
    }

    /// The edges facing sides 1, 2, 3 of the triangle at `v`.
    pub fn side_edges(&self, v: VertexId) -> Result<[EdgeId; 3], QuiltError> {
        self.check_trinode(v)?;
        Ok(self.sides[v - self.tree.leaf_count()])
    }

    /// Rows reading the ω-coefficients of the side of `v` facing `e`, as
    /// forms on all quilt variables.
    pub fn edge_rows(&self, v: VertexId, e: EdgeId) -> Result<Vec<Vec<i64>>, QuiltError> {
        let side = self.side_of(v, e)?;
        let off = self.offset(v);
        let nv = self.num_vars();
        Ok(self
            .diagram
            .boundary_rows(side)?
            .into_iter()
            .map(|r| {
                let mut row = vec![0; nv];
                row[off..off + r.len()].copy_from_slice(&r);
                row
            })
            .collect())
    }

    fn leaf_trinode(&self, label: usize) -> Result<(VertexId, EdgeId), QuiltError> {
        let leaf = self.tree.leaf_vertex(label)?;
        Ok((self.tree.neighbors(leaf)[0], leaf))
    }

    /// Rows of `π_T` for leaf `label`.
    pub fn leaf_rows(&self, label: usize) -> Result<Vec<Vec<i64>>, QuiltError> {
        let (v, e) = self.leaf_trinode(label)?;
        self.edge_rows(v, e)
    }

    /// Rows of `π_T`, leaf 1 first, `m - 1` rows per leaf.
    pub fn boundary_map_rows(&self) -> Vec<Vec<i64>> {
        (1..=self.tree.leaf_count())
            .flat_map(|l| self.leaf_rows(l).expect("leaf exists"))
            .collect()
    }

    pub fn hexagon_equations(&self) -> &[Vec<i64>] {
        &self.hexagon_equations
    }

    pub fn gluing_equations(&self) -> &[Vec<i64>] {
        &self.gluing_equations
    }

    pub fn equations(&self) -> Vec<Vec<i64>> {
        self.hexagon_equations
            .iter()
            .chain(&self.gluing_equations)
            .cloned()
            .collect()
    }

    /// Total boundary degree: the sum of all ω-coefficients over the leaves.
    pub fn grading(&self) -> Vec<i64> {
        let mut g = vec![0; self.num_vars()];
        for row in self.boundary_map_rows() {
            for (a, b) in g.iter_mut().zip(&row) {
                *a += b;
            }
        }
        g
    }

    pub fn cone(&self) -> IntegerCone {
        IntegerCone::new(self.num_vars(), self.equations())
            .and_then(|c| c.with_grading(self.grading()))
            .expect("quilt equations have matching dimensions")
    }

    fn boundary_target(&self, lambda: &WeightVector) -> Result<Vec<i64>, QuiltError> {
        if lambda.len() != self.tree.leaf_count() || lambda.rank() + 1 != self.m {
            return Err(QuiltError::BadBoundary(format!(
                "need {} weights of rank {}, got {} of rank {}",
                self.tree.leaf_count(),
                self.m - 1,
                lambda.len(),
                lambda.rank()
            )));
        }
        Ok(lambda.flatten())
    }

    /// Number of lattice points with boundary `lambda`.
    pub fn count_fiber(&self, lambda: &WeightVector) -> Result<u64, QuiltError> {
        let target = self.boundary_target(lambda)?;
        Ok(self.cone().count_fiber(&self.boundary_map_rows(), &target)?)
    }

    pub fn fiber(&self, lambda: &WeightVector) -> Result<Vec<QuiltWeighting>, QuiltError> {
        let target = self.boundary_target(lambda)?;
        Ok(self
            .cone()
            .fiber_points(&self.boundary_map_rows(), &target)?
            .into_iter()
            .map(|values| QuiltWeighting { values })
            .collect())
    }

    pub fn hilbert_basis(&self, degree_bound: i64) -> Result<HilbertBasis, QuiltError> {
        Ok(self.cone().hilbert_basis(degree_bound)?)
    }

    pub fn zero(&self) -> QuiltWeighting {
        QuiltWeighting {
            values: vec![0; self.num_vars()],
        }
    }

    /// Validates `values` against sign conditions and all equations.
    pub fn weighting(&self, values: Point) -> Result<QuiltWeighting, QuiltError> {
        if values.len() != self.num_vars() {
            return Err(QuiltError::WrongLength {
                expected: self.num_vars(),
                got: values.len(),
            });
        }
        if let Some(i) = values.iter().position(|&v| v < 0) {
            return Err(QuiltError::Violated(i));
        }
        for (k, eq) in self.equations().iter().enumerate() {
            if crate::lattice::dot(eq, &values) != 0 {
                return Err(QuiltError::Violated(k));
            }
        }
        Ok(QuiltWeighting { values })
    }

    fn read(&self, w: &QuiltWeighting, rows: &[Vec<i64>]) -> DominantWeight {
        DominantWeight::new(
            rows.iter()
                .map(|r| crate::lattice::dot(r, &w.values) as u32)
                .collect(),
        )
    }

    /// `π_T(w)`: the weight on every leaf edge, indexed by leaf label.
    pub fn boundary_map(&self, w: &QuiltWeighting) -> WeightVector {
        WeightVector::new(
            (1..=self.tree.leaf_count())
                .map(|l| self.read(w, &self.leaf_rows(l).expect("leaf exists")))
                .collect(),
        )
        .expect("weights share a rank")
    }

    /// Weights read on the two sides of internal edge `e`, the lower trinode
    /// first.
    pub fn glue_duality_check(
        &self,
        w: &QuiltWeighting,
        e: EdgeId,
    ) -> Result<(DominantWeight, DominantWeight), QuiltError> {
        if !self.tree.is_internal_edge(e) || e >= self.tree.num_edges() {
            return Err(QuiltError::NotInternal(e));
        }
        let (u, v) = self.tree.edge(e);
        let (u, v) = (u.min(v), u.max(v));
        Ok((
            self.read(w, &self.edge_rows(u, e)?),
            self.read(w, &self.edge_rows(v, e)?),
        ))
    }

    /// The weight read on edge `e` from trinode `v`.
    pub fn edge_reading(
        &self,
        w: &QuiltWeighting,
        v: VertexId,
        e: EdgeId,
    ) -> Result<DominantWeight, QuiltError> {
        Ok(self.read(w, &self.edge_rows(v, e)?))
    }

    pub fn restrict_to_trinode(
        &self,
        w: &QuiltWeighting,
        v: VertexId,
    ) -> Result<BzWeighting, QuiltError> {
        self.check_trinode(v)?;
        let off = self.offset(v);
        let len = self.diagram.num_entries();
        Ok(self.diagram.weighting(w.values[off..off + len].to_vec())?)
    }

    /// Keeps the triangles at trinodes of the span of `s` (span-degree at
    /// least 2) and zeroes the rest.
    pub fn restrict_to_subtree(&self, w: &QuiltWeighting, s: &ProperSubtree) -> QuiltWeighting {
        let mut values = vec![0; self.num_vars()];
        let len = self.diagram.num_entries();
        for v in self.tree.trinodes() {
            if s.degree(&self.tree, v) >= 2 {
                let off = self.offset(v);
                values[off..off + len].copy_from_slice(&w.values[off..off + len]);
            }
        }
        QuiltWeighting { values }
    }

    /// Bit mask of the edges with a nonzero side reading at either end.
    pub fn support(&self, w: &QuiltWeighting) -> u64 {
        let mut mask = 0u64;
        for v in self.tree.trinodes() {
            let off = self.offset(v);
            for (k, &e) in self.sides[v - self.tree.leaf_count()].iter().enumerate() {
                let side = &self.diagram.sides()[k];
                if side.iter().any(|&i| w.values[off + i] != 0) {
                    mask |= 1 << e;
                }
            }
        }
        mask
    }

    /// Sum over leaves of the ω2-coefficient of the boundary weight.
    pub fn omega2_functional(&self, w: &QuiltWeighting) -> Result<u64, QuiltError> {
        if self.m != 3 {
            return Err(QuiltError::WrongRank {
                expected: 3,
                got: self.m,
            });
        }
        Ok(self
            .boundary_map(w)
            .entries()
            .iter()
            .map(|l| l.coeffs()[1] as u64)
            .sum())
    }

    /// The form `F` as a row on the quilt variables.
    pub fn omega2_row(&self) -> Result<Vec<i64>, QuiltError> {
        if self.m != 3 {
            return Err(QuiltError::WrongRank {
                expected: 3,
                got: self.m,
            });
        }
        let mut row = vec![0; self.num_vars()];
        for l in 1..=self.tree.leaf_count() {
            let rows = self.leaf_rows(l)?;
            for (a, b) in row.iter_mut().zip(&rows[1]) {
                *a += b;
            }
        }
        Ok(row)
    }

    pub fn to_json(&self, w: &QuiltWeighting) -> serde_json::Value {
        let mut values = BTreeMap::new();
        let len = self.diagram.num_entries();
        for (t, v) in self.tree.trinodes().enumerate() {
            let off = self.offset(v);
            for i in 0..len {
                values.insert(format!("{t}.{}", self.diagram.vertex_id(i)), w.values[off + i]);
            }
        }
        json!({ "tree": self.tree.render(), "m": self.m, "values": values })
    }

    /// Reads a weighting written by [`Quilt::to_json`]; absent keys are zero.
    pub fn from_json(&self, j: &serde_json::Value) -> Result<QuiltWeighting, QuiltError> {
        let bad = |s: &str| QuiltError::Json(s.to_string());
        let tree: Tree = j["tree"].as_str().ok_or_else(|| bad("missing tree"))?.parse()?;
        if tree != self.tree {
            return Err(bad("tree does not match"));
        }
        if j["m"].as_u64() != Some(self.m as u64) {
            return Err(bad("m does not match"));
        }
        let map: BTreeMap<String, i64> = serde_json::from_value(j["values"].clone())
            .map_err(|e| QuiltError::Json(e.to_string()))?;
        let mut values = vec![0; self.num_vars()];
        let len = self.diagram.num_entries();
        for (k, x) in map {
            let (t, id) = k.split_once('.').ok_or_else(|| bad("key without trinode"))?;
            let t: usize = t.parse().map_err(|_| bad("bad trinode index"))?;
            if t >= self.num_trinodes() {
                return Err(bad("trinode index out of range"));
            }
            values[t * len + self.diagram.parse_vertex_id(id)?] = x;
        }
        self.weighting(values)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bzdiagram::Sl3Piece;
    use crate::liealg::invariant_dim;

    fn quilt(s: &str, m: usize) -> Quilt {
        Quilt::new(s.parse().unwrap(), m).unwrap()
    }

    #[test]
    fn sizes() {
        let q = quilt("(1,2,3)", 3);
        assert_eq!((q.num_vars(), q.equations().len()), (9, 3));
        for (n, vars, hex, glue) in [(4, 18, 6, 2), (5, 27, 9, 4), (6, 36, 12, 6)] {
            let q = Quilt::new(Tree::caterpillar(n).unwrap(), 3).unwrap();
            assert_eq!(q.num_vars(), vars);
            assert_eq!(q.hexagon_equations().len(), hex);
            assert_eq!(q.gluing_equations().len(), glue);
        }
        let q = Quilt::new(Tree::caterpillar(5).unwrap(), 4).unwrap();
        assert_eq!(q.gluing_equations().len(), 2 * 3);
    }

    #[test]
    fn single_triangle_pieces() {
        let q = quilt("(1,2,3)", 3);
        let v = q.tree().trinodes().start;
        for p in Sl3Piece::ALL {
            let bz = p.weighting(q.diagram());
            let w = q.weighting(bz.values().to_vec()).unwrap();
            assert_eq!(q.boundary_map(&w), p.boundary());
            assert_eq!(q.restrict_to_trinode(&w, v).unwrap(), bz);
            let f = q.omega2_functional(&w).unwrap();
            assert_eq!(f, match p {
                Sl3Piece::X => 0,
                Sl3Piece::Y => 3,
                Sl3Piece::P(..) => 1,
            });
            if let Sl3Piece::P(i, j) = p {
                let expected = (1u64 << (i - 1)) | (1 << (j - 1));
                assert_eq!(q.support(&w), expected);
            }
        }
        let z = q.zero();
        assert_eq!(q.support(&z), 0);
        assert!(q.boundary_map(&z).entries().iter().all(|l| l.is_zero()));
    }

    #[test]
    fn gluing_reads_dual_weights() {
        let q = Quilt::new(Tree::caterpillar(4).unwrap(), 3).unwrap();
        let e = q.tree().internal_edges().start;
        let hb = q.hilbert_basis(4).unwrap();
        assert!(hb.complete);
        assert_eq!(hb.elements.len(), 22);
        let mut saw_w1 = false;
        for x in hb.elements {
            let w = q.weighting(x).unwrap();
            let (a, b) = q.glue_duality_check(&w, e).unwrap();
            assert_eq!(a.dual(), b);
            saw_w1 |= a == DominantWeight::fundamental(2, 1);
        }
        assert!(saw_w1);
        assert_eq!(q.glue_duality_check(&q.zero(), 0), Err(QuiltError::NotInternal(0)));
    }

    #[test]
    fn sl2_gluing_is_symmetric() {
        let q = Quilt::new(Tree::caterpillar(5).unwrap(), 2).unwrap();
        for x in q.cone().enumerate_at_degree(4).unwrap() {
            let w = q.weighting(x).unwrap();
            for e in q.tree().internal_edges() {
                let (a, b) = q.glue_duality_check(&w, e).unwrap();
                assert_eq!(a, b);
            }
        }
    }

    #[test]
    fn fibers_match_oracle_for_sl4() {
        let q = Quilt::new(Tree::caterpillar(4).unwrap(), 4).unwrap();
        let ws: Vec<DominantWeight> = (0..8u32)
            .map(|k| DominantWeight::new(vec![k & 1, k >> 1 & 1, k >> 2 & 1]))
            .collect();
        for a in &ws {
            for b in &ws {
                for c in &ws {
                    for d in ws.iter().take(4) {
                        let lam =
                            WeightVector::new(vec![a.clone(), b.clone(), c.clone(), d.clone()])
                                .unwrap();
                        assert_eq!(q.count_fiber(&lam).unwrap(), invariant_dim(&lam).unwrap(), "{lam}");
                    }
                }
            }
        }
    }

    #[test]
    fn zero_boundary_forces_zero() {
        for m in 2..=4 {
            for t in Tree::all_labelled(5).unwrap() {
                let q = Quilt::new(t, m).unwrap();
                assert_eq!(q.cone().count_at_degree(0).unwrap(), 1);
            }
        }
    }

    #[test]
    fn json_round_trip() {
        let q = quilt("((1,2),(3,4))", 3);
        for x in q.hilbert_basis(4).unwrap().elements {
            let w = q.weighting(x).unwrap();
            assert_eq!(q.from_json(&q.to_json(&w)).unwrap(), w);
        }
        let other = quilt("((1,3),(2,4))", 3);
        assert!(other.from_json(&q.to_json(&q.zero())).is_err());
    }

    #[test]
    fn rejects_wrong_boundary_shape() {
        let q = quilt("(1,2,3)", 3);
        let lam: WeightVector = "1,0;1,0".parse().unwrap();
        assert!(matches!(q.count_fiber(&lam), Err(QuiltError::BadBoundary(_))));
        let q4 = quilt("(1,2,3)", 4);
        assert!(matches!(q4.omega2_functional(&q4.zero()), Err(QuiltError::WrongRank { .. })));
    }
}
