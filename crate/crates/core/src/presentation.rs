//! Generators and relations of the sl_3 quilt semigroup `Q_T(sl_3)`.
//!
//! Every proper subtree carries two generators. They are built by choosing
//! the reading on the leaf edge of the smallest leaf (ω1 for variant 0, ω2
//! for variant 1) and propagating through the span: a trinode of span-degree
//! 3 repeats its incoming weight on all sides (an `X` or `Y` triangle), a
//! trinode of span-degree 2 passes the dual weight on (a `P_ij` triangle),
//! and a neighbouring triangle always reads the dual of what was written.

use std::collections::{BTreeSet, HashMap};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::bzdiagram::{BzWeighting, Sl3Piece};
use crate::lattice::{
    factorizations, fiber_graph, sums_up_to, BinomialMove, LatticeError, MoveIndex, Point,
};
use crate::liealg::{DominantWeight, WeightVector};
use crate::quilt::{Quilt, QuiltError, QuiltWeighting};
use crate::tree::{EdgeId, ProperSubtree, Tree, VertexId};

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum PresentationError {
    #[error(transparent)]
    Quilt(#[from] QuiltError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("index triple {0:?} is not strictly increasing within 1..={1}")]
    BadTriple([usize; 3], usize),
    #[error("the tree is not a caterpillar")]
    NotCaterpillar,
    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),
}

/// A minimal generator of `Q_T(sl_3)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorTag {
    pub subtree: ProperSubtree,
    /// 0 when the leaf edge of the smallest leaf reads ω1, 1 for the dual.
    pub variant: u8,
    pub weighting: QuiltWeighting,
    /// The triangle at every trinode of the span.
    pub pieces: Vec<(VertexId, Sl3Piece)>,
}

/// The quilt cone of a tree together with its constructed generators.
#[derive(Clone, Debug)]
pub struct Presentation {
    quilt: Quilt,
    generators: Vec<GeneratorTag>,
    index: HashMap<Point, usize>,
    pieces: HashMap<WeightVector, (Sl3Piece, BzWeighting)>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct RelationFamilies {
    /// Degree (2,2): exchange the halves of two generators across an edge
    /// where they read the same weight.
    pub swaps: Vec<BinomialMove>,
    /// Degree (2,3): `X·Y = P12·P23·P31` at a trinode, extended along the
    /// three branches.
    pub cubics: Vec<BinomialMove>,
}

impl RelationFamilies {
    pub fn all(&self) -> Vec<BinomialMove> {
        self.swaps.iter().chain(&self.cubics).cloned().collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiberFailure {
    /// One factorization of the element, as generator indices.
    pub element: Vec<usize>,
    pub factorizations: usize,
    pub components: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PresentationReport {
    pub tree: String,
    pub m: usize,
    pub degree_bound: usize,
    pub elements_checked: usize,
    pub failures: Vec<FiberFailure>,
}

impl PresentationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// An increasing index triple `(i, j, k)`, naming the P-face generator of a
/// caterpillar supported on the leaves `i`, `j`, `k`.
pub type Triple = [usize; 3];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum QuadraticKind {
    /// `w_ijk w_rst = w_rjk w_ist` when both first indices precede both
    /// second indices.
    FirstIndex,
    /// `w_ijk w_rst = w_ijt w_rsk` when both second indices precede both
    /// third indices.
    LastIndex,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct TripleMove {
    pub kind: QuadraticKind,
    pub left: [Triple; 2],
    pub right: [Triple; 2],
}

impl TripleMove {
    fn new(kind: QuadraticKind, mut left: [Triple; 2], mut right: [Triple; 2]) -> Self {
        left.sort();
        right.sort();
        if left > right {
            std::mem::swap(&mut left, &mut right);
        }
        TripleMove { kind, left, right }
    }

    pub fn is_trivial(&self) -> bool {
        self.left == self.right
    }
}

/// The two exchange patterns among the `w_ijk` of a caterpillar with `n`
/// leaves, trivial instances removed.
pub fn caterpillar_quadratics(n: usize) -> Vec<TripleMove> {
    let triples = increasing_triples(n);
    let mut out = BTreeSet::new();
    for (a, &[i, j, k]) in triples.iter().enumerate() {
        for &[r, s, t] in &triples[a + 1..] {
            if i.max(r) < j.min(s) {
                out.insert(TripleMove::new(
                    QuadraticKind::FirstIndex,
                    [[i, j, k], [r, s, t]],
                    [[r, j, k], [i, s, t]],
                ));
            }
            if j.max(s) < k.min(t) {
                out.insert(TripleMove::new(
                    QuadraticKind::LastIndex,
                    [[i, j, k], [r, s, t]],
                    [[i, j, t], [r, s, k]],
                ));
            }
        }
    }
    out.into_iter().filter(|m| !m.is_trivial()).collect()
}

/// All `1 ≤ i < j < k ≤ n`, lexicographically.
pub fn increasing_triples(n: usize) -> Vec<Triple> {
    let mut out = Vec::new();
    for i in 1..=n {
        for j in i + 1..=n {
            for k in j + 1..=n {
                out.push([i, j, k]);
            }
        }
    }
    out
}

impl Presentation {
    pub fn new(tree: Tree) -> Result<Self, PresentationError> {
        let quilt = Quilt::new(tree, 3)?;
        let pieces = Sl3Piece::ALL
            .iter()
            .map(|&p| (p.boundary(), (p, p.weighting(quilt.diagram()))))
            .collect();
        let mut pres = Presentation {
            quilt,
            generators: Vec::new(),
            index: HashMap::new(),
            pieces,
        };
        let mut gens = Vec::new();
        for s in pres.quilt.tree().proper_subtrees() {
            for variant in 0..2 {
                gens.push(pres.propagate(&s, variant)?);
            }
        }
        pres.index = gens
            .iter()
            .enumerate()
            .map(|(i, g)| (g.weighting.values().to_vec(), i))
            .collect();
        if pres.index.len() != gens.len() {
            return Err(PresentationError::Inconsistent("two generators coincide".into()));
        }
        pres.generators = gens;
        Ok(pres)
    }

    pub fn quilt(&self) -> &Quilt {
        &self.quilt
    }

    pub fn tree(&self) -> &Tree {
        self.quilt.tree()
    }

    /// Generators sorted by subtree (size, then leaves) and variant.
    pub fn generators(&self) -> &[GeneratorTag] {
        &self.generators
    }

    pub fn generator_points(&self) -> Vec<Point> {
        self.generators
            .iter()
            .map(|g| g.weighting.values().to_vec())
            .collect()
    }

    /// Index of the generator with these coordinates.
    pub fn lookup(&self, values: &[i64]) -> Option<usize> {
        self.index.get(values).copied()
    }

    fn propagate(&self, s: &ProperSubtree, variant: u8) -> Result<GeneratorTag, PresentationError> {
        let q = &self.quilt;
        let tree = q.tree();
        let w1 = DominantWeight::fundamental(2, 1);
        let start = if variant == 0 { w1.clone() } else { w1.dual() };
        let leaf = tree.leaf_vertex(s.min_leaf()).map_err(QuiltError::from)?;
        let mut values = vec![0; q.num_vars()];
        let mut pieces = Vec::new();
        let mut stack: Vec<(VertexId, EdgeId, DominantWeight)> =
            vec![(tree.neighbors(leaf)[0], leaf, start)];
        while let Some((v, e_in, r_in)) = stack.pop() {
            let deg = s.degree(tree, v);
            let edges = q.side_edges(v)?;
            let sides: Vec<DominantWeight> = edges
                .iter()
                .map(|&e| {
                    if e == e_in {
                        r_in.clone()
                    } else if !s.contains_edge(e) {
                        DominantWeight::zero(2)
                    } else if deg == 3 {
                        r_in.clone()
                    } else {
                        r_in.dual()
                    }
                })
                .collect();
            let boundary = WeightVector::new(sides.clone()).expect("rank 2");
            let (piece, bz) = self.pieces.get(&boundary).ok_or_else(|| {
                PresentationError::Inconsistent(format!("no triangle with boundary {boundary}"))
            })?;
            let off = q.offset(v);
            values[off..off + bz.values().len()].copy_from_slice(bz.values());
            pieces.push((v, *piece));
            for (k, &e) in edges.iter().enumerate() {
                if e == e_in || !s.contains_edge(e) {
                    continue;
                }
                let (a, b) = tree.edge(e);
                let u = if a == v { b } else { a };
                if !tree.is_leaf(u) {
                    stack.push((u, e, sides[k].dual()));
                }
            }
        }
        pieces.sort();
        let weighting = q.weighting(values)?;
        Ok(GeneratorTag {
            subtree: s.clone(),
            variant,
            weighting,
            pieces,
        })
    }

    /// The trinodes on each side of internal edge `e`, as a mask over
    /// variables (true on the side of the lower-numbered endpoint).
    fn side_mask(&self, e: EdgeId) -> (VertexId, Vec<bool>) {
        let q = &self.quilt;
        let tree = q.tree();
        let (a, b) = tree.edge(e);
        let u = a.min(b);
        let mut mask = vec![false; q.num_vars()];
        let len = q.diagram().num_entries();
        for v in tree.component_without_edge(e, u) {
            if !tree.is_leaf(v) {
                let off = q.offset(v);
                mask[off..off + len].iter_mut().for_each(|x| *x = true);
            }
        }
        (u, mask)
    }

    fn find(&self, values: &[i64], what: &str) -> Result<usize, PresentationError> {
        self.lookup(values)
            .ok_or_else(|| PresentationError::Inconsistent(format!("{what} is not a generator")))
    }

    /// Swap and cubic moves, each checked to be a relation.
    pub fn relation_families(&self) -> Result<RelationFamilies, PresentationError> {
        let q = &self.quilt;
        let tree = q.tree();
        let pts = self.generator_points();
        let mut swaps = BTreeSet::new();
        for e in tree.internal_edges() {
            let (u, on_u) = self.side_mask(e);
            let mut by_reading: HashMap<DominantWeight, Vec<usize>> = HashMap::new();
            for (i, g) in self.generators.iter().enumerate() {
                let r = q.edge_reading(&g.weighting, u, e)?;
                if !r.is_zero() {
                    by_reading.entry(r).or_default().push(i);
                }
            }
            for group in by_reading.values() {
                for (x, &a) in group.iter().enumerate() {
                    for &b in &group[x + 1..] {
                        let mix = |p: usize, r: usize| -> Vec<i64> {
                            (0..pts[p].len())
                                .map(|k| if on_u[k] { pts[p][k] } else { pts[r][k] })
                                .collect()
                        };
                        let h1 = self.find(&mix(a, b), "swapped half")?;
                        let h2 = self.find(&mix(b, a), "swapped half")?;
                        let mv = BinomialMove::new(vec![a, b], vec![h1, h2]);
                        if !mv.is_trivial() {
                            swaps.insert(mv);
                        }
                    }
                }
            }
        }

        let mut cubics = BTreeSet::new();
        let len = q.diagram().num_entries();
        for v in tree.trinodes() {
            let edges = q.side_edges(v)?;
            let off = q.offset(v);
            let branch_masks: Vec<Vec<bool>> = edges
                .iter()
                .map(|&e| {
                    let (a, b) = tree.edge(e);
                    let u = if a == v { b } else { a };
                    let mut mask = vec![false; q.num_vars()];
                    for w in tree.component_without_edge(e, u) {
                        if !tree.is_leaf(w) {
                            let o = q.offset(w);
                            mask[o..o + len].iter_mut().for_each(|x| *x = true);
                        }
                    }
                    mask
                })
                .collect();
            let piece_at = |g: &GeneratorTag| g.pieces.iter().find(|(w, _)| *w == v).map(|p| p.1);
            let xs: Vec<usize> = (0..self.generators.len())
                .filter(|&i| piece_at(&self.generators[i]) == Some(Sl3Piece::X))
                .collect();
            let ys: Vec<usize> = (0..self.generators.len())
                .filter(|&i| piece_at(&self.generators[i]) == Some(Sl3Piece::Y))
                .collect();
            for &gx in &xs {
                for &gy in &ys {
                    let mut right = Vec::with_capacity(3);
                    for (i, j) in [(1u8, 2u8), (2, 3), (3, 1)] {
                        let p = self.pieces[&Sl3Piece::P(i, j).boundary()].1.values();
                        let (bi, bj) = (&branch_masks[i as usize - 1], &branch_masks[j as usize - 1]);
                        let mut h: Vec<i64> = (0..q.num_vars())
                            .map(|k| {
                                if bi[k] {
                                    pts[gx][k]
                                } else if bj[k] {
                                    pts[gy][k]
                                } else {
                                    0
                                }
                            })
                            .collect();
                        h[off..off + len].copy_from_slice(p);
                        right.push(self.find(&h, "cubic factor")?);
                    }
                    cubics.insert(BinomialMove::new(vec![gx, gy], right));
                }
            }
        }
        let fams = RelationFamilies {
            swaps: swaps.into_iter().collect(),
            cubics: cubics.into_iter().collect(),
        };
        if let Some(bad) = fams.all().iter().find(|m| !m.holds(&pts)) {
            return Err(PresentationError::Inconsistent(format!("{bad:?} is not a relation")));
        }
        Ok(fams)
    }

    /// Checks that every element which is a sum of at most `degree_bound`
    /// generators has a connected factorization graph under `moves`.
    pub fn verify_with(
        &self,
        degree_bound: usize,
        moves: &[BinomialMove],
    ) -> Result<PresentationReport, PresentationError> {
        let gens = self.generator_points();
        let index = MoveIndex::new(moves);
        let elements = sums_up_to(&gens, degree_bound);
        let results: Vec<Option<FiberFailure>> = elements
            .par_iter()
            .map(|x| -> Result<Option<FiberFailure>, LatticeError> {
                let g = fiber_graph(x, &gens, &index)?;
                Ok((!g.is_connected()).then(|| FiberFailure {
                    element: g.factorizations[0].0.clone(),
                    factorizations: g.factorizations.len(),
                    components: g.num_components,
                }))
            })
            .collect::<Result<_, _>>()?;
        Ok(PresentationReport {
            tree: self.tree().render(),
            m: 3,
            degree_bound,
            elements_checked: elements.len(),
            failures: results.into_iter().flatten().collect(),
        })
    }

    /// [`Presentation::verify_with`] using both relation families.
    pub fn verify_presentation(
        &self,
        degree_bound: usize,
    ) -> Result<PresentationReport, PresentationError> {
        self.verify_with(degree_bound, &self.relation_families()?.all())
    }

    pub fn omega2(&self, g: &GeneratorTag) -> u64 {
        self.quilt
            .omega2_functional(&g.weighting)
            .expect("sl_3 quilt")
    }

    /// Indices of the generators on the face `F = 0`.
    pub fn p_face_generators(&self) -> Vec<usize> {
        (0..self.generators.len())
            .filter(|&i| self.omega2(&self.generators[i]) == 0)
            .collect()
    }

    /// Index of `w_ijk`: the P-face generator on the leaves `i, j, k`.
    pub fn w_generator(&self, t: Triple) -> Result<usize, PresentationError> {
        let n = self.tree().leaf_count();
        if !(1 <= t[0] && t[0] < t[1] && t[1] < t[2] && t[2] <= n) {
            return Err(PresentationError::BadTriple(t, n));
        }
        let mask: u64 = t.iter().map(|&l| 1u64 << (l - 1)).sum();
        self.p_face_generators()
            .into_iter()
            .find(|&i| self.generators[i].subtree.leaf_mask() == mask)
            .ok_or_else(|| PresentationError::Inconsistent(format!("no P-face generator on {t:?}")))
    }

    /// Transports a triple move to generator indices, checking that it is a
    /// relation.
    pub fn triple_move(&self, m: &TripleMove) -> Result<BinomialMove, PresentationError> {
        let side = |s: &[Triple; 2]| -> Result<Vec<usize>, PresentationError> {
            s.iter().map(|&t| self.w_generator(t)).collect()
        };
        let mv = BinomialMove::new(side(&m.left)?, side(&m.right)?);
        if !mv.holds(&self.generator_points()) {
            return Err(PresentationError::Inconsistent(format!("{m:?} does not hold")));
        }
        Ok(mv)
    }
}

/// Number of factorizations of the sum of the listed generators.
pub fn factorization_count(p: &Presentation, idx: &[usize]) -> Result<usize, PresentationError> {
    let gens = p.generator_points();
    let target = crate::lattice::Factorization::new(idx.to_vec()).evaluate(&gens, p.quilt().num_vars());
    Ok(factorizations(&target, &gens)?.len())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pres(s: &str) -> Presentation {
        Presentation::new(s.parse().unwrap()).unwrap()
    }

    #[test]
    fn three_leaves() {
        let p = pres("(1,2,3)");
        assert_eq!(p.generators().len(), 8);
        let names: BTreeSet<Sl3Piece> =
            p.generators().iter().map(|g| g.pieces[0].1).collect();
        assert_eq!(names.len(), 8);
        let fams = p.relation_families().unwrap();
        assert!(fams.swaps.is_empty());
        assert_eq!(fams.cubics.len(), 1);
        let gx = p.generators().iter().position(|g| g.pieces[0].1 == Sl3Piece::X).unwrap();
        let gy = p.generators().iter().position(|g| g.pieces[0].1 == Sl3Piece::Y).unwrap();
        let mut left = vec![gx, gy];
        left.sort();
        assert_eq!(fams.cubics[0].left, left);
        assert!(p.verify_presentation(4).unwrap().passed());
        let swaps_only = p.verify_with(3, &fams.swaps).unwrap();
        assert!(swaps_only
            .failures
            .iter()
            .any(|f| f.factorizations == 2 && f.components == 2));
    }

    #[test]
    fn generator_counts() {
        for (s, count) in [
            ("((1,2),(3,4))", 22),
            ("((1,3),(2,4))", 22),
            ("((1,2),3,(4,5))", 52),
            ("((1,2),(3,4),(5,6))", 114),
            ("(((1,2),3),4,(5,6))", 114),
        ] {
            let p = pres(s);
            assert_eq!(p.generators().len(), count, "{s}");
            for g in p.generators() {
                assert_eq!(p.quilt().support(&g.weighting), g.subtree.edge_mask());
            }
        }
    }

    #[test]
    fn variants_are_dual() {
        let p = pres("((1,2),3,(4,5))");
        for pair in p.generators().chunks(2) {
            let a = p.quilt().boundary_map(&pair[0].weighting);
            let b = p.quilt().boundary_map(&pair[1].weighting);
            assert_eq!(a.dual(), b);
            let first = pair[0].subtree.min_leaf() - 1;
            assert_eq!(a.entries()[first], DominantWeight::fundamental(2, 1));
        }
    }

    #[test]
    fn four_leaves_presentation() {
        let p = pres("((1,2),(3,4))");
        let fams = p.relation_families().unwrap();
        assert!(!fams.swaps.is_empty());
        assert!(fams.swaps.iter().all(|m| m.degrees() == (2, 2)));
        assert!(fams.cubics.iter().all(|m| m.degrees() == (2, 3)));
        assert!(p.verify_presentation(3).unwrap().passed());
    }

    #[test]
    fn p_face_matches_odd_subtrees() {
        for s in ["((1,2),(3,4))", "((1,2),3,(4,5))", "(((1,2),3),4,(5,6))"] {
            let p = pres(s);
            let face: Vec<usize> = p.p_face_generators();
            let odd: Vec<usize> = (0..p.generators().len())
                .filter(|&i| {
                    let g = &p.generators()[i];
                    p.tree().is_odd_subtree(&g.subtree)
                        && g.subtree.leaf_set().iter().all(|&l| {
                            p.quilt().boundary_map(&g.weighting).entries()[l - 1]
                                == DominantWeight::fundamental(2, 1)
                        })
                })
                .collect();
            assert_eq!(face, odd, "{s}");
        }
    }

    #[test]
    fn caterpillar_exchange_patterns() {
        assert!(caterpillar_quadratics(4).is_empty());
        let q6 = caterpillar_quadratics(6);
        let first = TripleMove::new(
            QuadraticKind::FirstIndex,
            [[1, 3, 5], [2, 4, 6]],
            [[2, 3, 5], [1, 4, 6]],
        );
        let last = TripleMove::new(
            QuadraticKind::LastIndex,
            [[1, 3, 5], [2, 4, 6]],
            [[1, 3, 6], [2, 4, 5]],
        );
        assert!(q6.contains(&first));
        assert!(q6.contains(&last));
        for n in 4..=6 {
            let p = Presentation::new(Tree::caterpillar(n).unwrap()).unwrap();
            assert_eq!(p.p_face_generators().len(), increasing_triples(n).len());
            for m in caterpillar_quadratics(n) {
                p.triple_move(&m).unwrap();
            }
        }
    }
}
