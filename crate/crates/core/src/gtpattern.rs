//! Gel'fand-Tsetlin patterns of shape `(λ, λ, λ, 0, …, 0)` for GL_n, and
//! their comparison with the P-face of the caterpillar quilt.
//!
//! A pattern is stored as its full triangular array, top row first: row `r`
//! (counted from the bottom, `1 ≤ r ≤ n`) has entries `x_{r,1} … x_{r,r}`
//! with `x_{r+1,j} ≥ x_{r,j} ≥ x_{r+1,j+1}`. Only three diagonals are free;
//! `a_{k,c} = x_{n-3+c-k, c}` for `1 ≤ k ≤ n-3`, `c = 1, 2, 3`.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lattice::{fiber_graph, sums_up_to, BinomialMove, MoveIndex};
use crate::liealg::gl_dim_omega3;
use crate::presentation::{
    caterpillar_quadratics, increasing_triples, Presentation, PresentationError, Triple, TripleMove,
};
use crate::tree::Tree;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum GtError {
    #[error("n must be at least 3, got {0}")]
    TooSmall(usize),
    #[error("index triple {0:?} is not strictly increasing within 1..={1}")]
    BadTriple(Triple, usize),
    #[error("pattern violates interlacing at row {row}, entry {col}")]
    Interlacing { row: usize, col: usize },
    #[error("pattern has the wrong shape")]
    Shape,
    #[error(transparent)]
    Presentation(#[from] PresentationError),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GtPattern {
    n: usize,
    lambda: u32,
    /// `rows[0]` is row `n`; `rows[n - r]` is row `r`.
    rows: Vec<Vec<u32>>,
}

impl GtPattern {
    /// Validates shape, top row and interlacing.
    pub fn new(rows: Vec<Vec<u32>>) -> Result<Self, GtError> {
        let n = rows.len();
        if n < 3 {
            return Err(GtError::TooSmall(n));
        }
        if rows.iter().enumerate().any(|(i, r)| r.len() != n - i) {
            return Err(GtError::Shape);
        }
        let lambda = rows[0][0];
        let top_ok = rows[0]
            .iter()
            .enumerate()
            .all(|(j, &x)| x == if j < 3 { lambda } else { 0 });
        if !top_ok {
            return Err(GtError::Shape);
        }
        for i in 1..n {
            for j in 0..rows[i].len() {
                let x = rows[i][j];
                if !(rows[i - 1][j] >= x && x >= rows[i - 1][j + 1]) {
                    return Err(GtError::Interlacing { row: n - i, col: j + 1 });
                }
            }
        }
        Ok(GtPattern { n, lambda, rows })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn lambda(&self) -> u32 {
        self.lambda
    }

    pub fn rows(&self) -> &[Vec<u32>] {
        &self.rows
    }

    /// `x_{r,j}` with `1 ≤ j ≤ r ≤ n`.
    pub fn entry(&self, r: usize, j: usize) -> u32 {
        self.rows[self.n - r][j - 1]
    }

    /// `a_{k,c}` for `1 ≤ k ≤ n-3`, `c ∈ {1,2,3}`.
    pub fn diagonal(&self, k: usize, c: usize) -> u32 {
        self.entry(self.n - 3 + c - k, c)
    }

    /// Entrywise sum; the result has top row `λ1 + λ2`.
    pub fn add(&self, other: &GtPattern) -> GtPattern {
        assert_eq!(self.n, other.n);
        GtPattern {
            n: self.n,
            lambda: self.lambda + other.lambda,
            rows: self
                .rows
                .iter()
                .zip(&other.rows)
                .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect())
                .collect(),
        }
    }
}

/// All patterns with top row `(λ, λ, λ, 0, …, 0)`, sorted.
pub fn enumerate_patterns(n: usize, lambda: u32) -> Result<Vec<GtPattern>, GtError> {
    if n < 3 {
        return Err(GtError::TooSmall(n));
    }
    let mut top = vec![0; n];
    top[..3].iter_mut().for_each(|x| *x = lambda);
    let mut rows = vec![top];
    let mut out = Vec::new();
    fill(n, lambda, &mut rows, &mut Vec::new(), &mut out);
    out.sort();
    Ok(out)
}

fn fill(n: usize, lambda: u32, rows: &mut Vec<Vec<u32>>, cur: &mut Vec<u32>, out: &mut Vec<GtPattern>) {
    if rows.len() == n {
        out.push(GtPattern {
            n,
            lambda,
            rows: rows.clone(),
        });
        return;
    }
    let above = rows.last().expect("top row present").clone();
    let j = cur.len();
    if j == above.len() - 1 {
        rows.push(std::mem::take(cur));
        fill(n, lambda, rows, &mut Vec::new(), out);
        *cur = rows.pop().expect("just pushed");
        return;
    }
    for x in above[j + 1]..=above[j] {
        cur.push(x);
        fill(n, lambda, rows, cur, out);
        cur.pop();
    }
}

fn check_triple(n: usize, t: Triple) -> Result<(), GtError> {
    if 1 <= t[0] && t[0] < t[1] && t[1] < t[2] && t[2] <= n {
        Ok(())
    } else {
        Err(GtError::BadTriple(t, n))
    }
}

/// The λ = 1 pattern with `a_{k,3} = 1` exactly for `k ≤ i-1`, `a_{k,2} = 1`
/// exactly for `k ≤ j-2` and `a_{k,1} = 1` exactly for `k ≤ k0-3`.
pub fn embed_generator(n: usize, t: Triple) -> Result<GtPattern, GtError> {
    check_triple(n, t)?;
    let [i, j, k] = t;
    let ones = [k - 3, j - 2, i - 1];
    let rows: Vec<Vec<u32>> = (0..n)
        .map(|idx| {
            let r = n - idx;
            (1..=r)
                .map(|c| {
                    if c > 3 {
                        0
                    } else if c + n - r <= 3 {
                        1
                    } else {
                        // diagonal index of x_{r,c}
                        let kk = n - 3 + c - r;
                        u32::from(kk <= ones[c - 1])
                    }
                })
                .collect()
        })
        .collect();
    GtPattern::new(rows)
}

/// Componentwise minimum and maximum of two triples.
pub fn wedge_vee(a: Triple, b: Triple) -> (Triple, Triple) {
    (
        [a[0].min(b[0]), a[1].min(b[1]), a[2].min(b[2])],
        [a[0].max(b[0]), a[1].max(b[1]), a[2].max(b[2])],
    )
}

/// A move `{t1, t2} ↔ {t1 ∧ t2, t1 ∨ t2}` among index triples.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct WedgeVeeMove {
    pub left: [Triple; 2],
    pub right: [Triple; 2],
}

/// The wedge/vee move of two increasing triples; `None` when the pair is
/// already comparable (the move is the identity).
pub fn wedge_vee_move(n: usize, a: Triple, b: Triple) -> Result<Option<WedgeVeeMove>, GtError> {
    check_triple(n, a)?;
    check_triple(n, b)?;
    let (w, v) = wedge_vee(a, b);
    check_triple(n, w)?;
    check_triple(n, v)?;
    let mut left = [a, b];
    left.sort();
    if left == [w, v] {
        return Ok(None);
    }
    Ok(Some(WedgeVeeMove { left, right: [w, v] }))
}

/// Every nontrivial wedge/vee move on triples from `1..=n`.
pub fn all_wedge_vee_moves(n: usize) -> Vec<WedgeVeeMove> {
    let ts = increasing_triples(n);
    let mut out = BTreeSet::new();
    for (x, &a) in ts.iter().enumerate() {
        for &b in &ts[x + 1..] {
            if let Some(m) = wedge_vee_move(n, a, b).expect("increasing triples") {
                out.insert(m);
            }
        }
    }
    out.into_iter().collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdealReport {
    pub n: usize,
    pub degree_bound: usize,
    pub wedge_vee_moves: usize,
    pub quadratic_moves: usize,
    pub elements_checked: usize,
    /// Wedge/vee moves that are not relations among the quilt generators.
    pub invalid_wedge_vee: Vec<WedgeVeeMove>,
    /// Quadratics that change the wedge or the vee of the pair.
    pub lattice_violations: Vec<TripleMove>,
    /// Elements (as one factorization into triples) whose factorization
    /// graphs have different components under the two move sets.
    pub component_mismatches: Vec<Vec<Triple>>,
}

impl IdealReport {
    pub fn passed(&self) -> bool {
        self.invalid_wedge_vee.is_empty()
            && self.lattice_violations.is_empty()
            && self.component_mismatches.is_empty()
    }
}

/// Compares the caterpillar quadratics with the wedge/vee moves on the
/// P-face of the caterpillar with `n` leaves.
pub fn ideal_equality_check(n: usize, degree_bound: usize) -> Result<IdealReport, GtError> {
    ideal_equality_check_with(n, degree_bound, &caterpillar_quadratics(n))
}

/// [`ideal_equality_check`] against an arbitrary list of quadratics.
pub fn ideal_equality_check_with(
    n: usize,
    degree_bound: usize,
    quadratics: &[TripleMove],
) -> Result<IdealReport, GtError> {
    if n < 3 {
        return Err(GtError::TooSmall(n));
    }
    let pres = Presentation::new(Tree::caterpillar(n).map_err(|e| PresentationError::Quilt(e.into()))?)?;
    let triples = increasing_triples(n);
    let all_points = pres.generator_points();
    let gens: Vec<_> = triples
        .iter()
        .map(|&t| pres.w_generator(t).map(|i| all_points[i].clone()))
        .collect::<Result<_, _>>()?;
    let pos = |t: Triple| triples.binary_search(&t).expect("increasing triple");

    let wv = all_wedge_vee_moves(n);
    let wv_moves: Vec<BinomialMove> = wv
        .iter()
        .map(|m| BinomialMove::new(m.left.map(pos).to_vec(), m.right.map(pos).to_vec()))
        .collect();
    let invalid_wedge_vee = wv
        .iter()
        .zip(&wv_moves)
        .filter(|(_, b)| !b.holds(&gens))
        .map(|(m, _)| m.clone())
        .collect();
    let lattice_violations = quadratics
        .iter()
        .filter(|m| wedge_vee(m.left[0], m.left[1]) != wedge_vee(m.right[0], m.right[1]))
        .cloned()
        .collect();
    let q_moves: Vec<BinomialMove> = quadratics
        .iter()
        .map(|m| BinomialMove::new(m.left.map(pos).to_vec(), m.right.map(pos).to_vec()))
        .collect();

    let wv_index = MoveIndex::new(&wv_moves);
    let q_index = MoveIndex::new(&q_moves);
    let elements = sums_up_to(&gens, degree_bound);
    let mut component_mismatches = Vec::new();
    for x in &elements {
        let a = fiber_graph(x, &gens, &wv_index).map_err(PresentationError::from)?;
        let b = fiber_graph(x, &gens, &q_index).map_err(PresentationError::from)?;
        if a.component != b.component {
            component_mismatches.push(a.factorizations[0].0.iter().map(|&i| triples[i]).collect());
        }
    }
    Ok(IdealReport {
        n,
        degree_bound,
        wedge_vee_moves: wv_moves.len(),
        quadratic_moves: q_moves.len(),
        elements_checked: elements.len(),
        invalid_wedge_vee,
        lattice_violations,
        component_mismatches,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HilbertRow {
    pub d: u64,
    /// P-face points of boundary degree `3d`.
    pub face_points: u64,
    pub patterns: u64,
    pub weyl_dimension: u128,
}

impl HilbertRow {
    pub fn agrees(&self) -> bool {
        self.face_points == self.patterns && self.patterns as u128 == self.weyl_dimension
    }
}

/// Three independent counts for each degree `d ≤ degree_bound`.
pub fn hilbert_function_compare(n: usize, degree_bound: u64) -> Result<Vec<HilbertRow>, GtError> {
    if n < 3 {
        return Err(GtError::TooSmall(n));
    }
    let pres = Presentation::new(Tree::caterpillar(n).map_err(|e| PresentationError::Quilt(e.into()))?)?;
    let q = pres.quilt();
    let face = q
        .cone()
        .with_extra_equations(&[q.omega2_row().map_err(PresentationError::from)?])
        .map_err(PresentationError::from)?;
    (0..=degree_bound)
        .map(|d| {
            Ok(HilbertRow {
                d,
                face_points: face.count_at_degree(3 * d as i64).map_err(PresentationError::from)?,
                patterns: enumerate_patterns(n, d as u32)?.len() as u64,
                weyl_dimension: gl_dim_omega3(n, d),
            })
        })
        .collect()
}
