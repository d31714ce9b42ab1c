//! Exact integer machinery for cones `{x ∈ Z^N : x ≥ 0, A x = 0}`.
//!
//! Lattice points are found by depth-first search with interval propagation:
//! every equality row bounds each of its variables from the current bounds of
//! the others, and the search branches on the narrowest open interval.
//! Hilbert bases are built degree by degree (a point is decomposable iff it
//! dominates a smaller basis element, because the cone is cut out by
//! equations and sign conditions only) and certified complete with the
//! Contejean-Devie completion procedure.

use std::collections::{HashMap, HashSet};
use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type Point = Vec<i64>;

/// Cap on the number of factorizations explored for a single element.
pub const MAX_FACTORIZATIONS: usize = 1_000_000;

/// Default node budget for the completeness certificate.
pub const DEFAULT_CERTIFICATE_BUDGET: usize = 4_000_000;

const INF: i128 = i64::MAX as i128;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("expected a vector of length {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("grading coefficients must be nonnegative")]
    NegativeGrading,
    #[error("variable {0} is unbounded in this search; the grading or fiber does not bound the cone")]
    Unbounded(usize),
    #[error("resource limit exceeded: more than {limit} {what}")]
    ResourceLimit { what: &'static str, limit: usize },
    #[error("target is not in the semigroup generated by the given generators")]
    NotInSemigroup,
    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

/// Nonnegative integer solutions of a homogeneous system, graded by a
/// nonnegative linear functional.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegerCone {
    num_vars: usize,
    equations: Vec<Vec<i64>>,
    grading: Vec<i64>,
}

/// Result of [`IntegerCone::hilbert_basis`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HilbertBasis {
    /// Indecomposable points of degree at most `degree_bound`, sorted by
    /// degree and then lexicographically.
    pub elements: Vec<Point>,
    pub degree_bound: i64,
    /// True when the completion procedure finished within budget and found
    /// no indecomposable point above `degree_bound`.
    pub complete: bool,
}

impl IntegerCone {
    /// Cone with the default grading (sum of all variables).
    pub fn new(num_vars: usize, equations: Vec<Vec<i64>>) -> Result<Self, LatticeError> {
        for eq in &equations {
            if eq.len() != num_vars {
                return Err(LatticeError::DimensionMismatch {
                    expected: num_vars,
                    got: eq.len(),
                });
            }
        }
        Ok(IntegerCone {
            num_vars,
            equations,
            grading: vec![1; num_vars],
        })
    }

    pub fn with_grading(mut self, grading: Vec<i64>) -> Result<Self, LatticeError> {
        self.check_len(&grading)?;
        if grading.iter().any(|&g| g < 0) {
            return Err(LatticeError::NegativeGrading);
        }
        self.grading = grading;
        Ok(self)
    }

    /// The same cone cut by additional equations (a face, when the extra
    /// forms are nonnegative on the cone).
    pub fn with_extra_equations(&self, extra: &[Vec<i64>]) -> Result<Self, LatticeError> {
        let mut c = self.clone();
        for eq in extra {
            c.check_len(eq)?;
            c.equations.push(eq.clone());
        }
        Ok(c)
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn equations(&self) -> &[Vec<i64>] {
        &self.equations
    }

    pub fn grading(&self) -> &[i64] {
        &self.grading
    }

    fn check_len(&self, v: &[i64]) -> Result<(), LatticeError> {
        if v.len() != self.num_vars {
            Err(LatticeError::DimensionMismatch {
                expected: self.num_vars,
                got: v.len(),
            })
        } else {
            Ok(())
        }
    }

    pub fn contains(&self, x: &[i64]) -> bool {
        x.len() == self.num_vars
            && x.iter().all(|&v| v >= 0)
            && self.equations.iter().all(|eq| dot(eq, x) == 0)
    }

    pub fn degree(&self, x: &[i64]) -> i64 {
        dot(&self.grading, x)
    }

    fn solver(&self, extra: &[(Vec<i64>, i64)]) -> Solver {
        let mut rows: Vec<Row> = self
            .equations
            .iter()
            .map(|eq| Row::new(eq, 0))
            .collect();
        rows.extend(extra.iter().map(|(f, rhs)| Row::new(f, *rhs)));
        Solver::new(self.num_vars, rows)
    }

    /// All cone points of degree `d`, sorted lexicographically.
    pub fn enumerate_at_degree(&self, d: i64) -> Result<Vec<Point>, LatticeError> {
        let solver = self.solver(&[(self.grading.clone(), d)]);
        let mut out = Vec::new();
        solver.search(&|_| false, &mut |x| {
            out.push(x.to_vec());
            ControlFlow::Continue(())
        })?;
        out.sort();
        Ok(out)
    }

    pub fn count_at_degree(&self, d: i64) -> Result<u64, LatticeError> {
        let solver = self.solver(&[(self.grading.clone(), d)]);
        let mut count = 0u64;
        solver.search(&|_| false, &mut |_| {
            count += 1;
            ControlFlow::Continue(())
        })?;
        Ok(count)
    }

    fn fiber_solver(&self, pi: &[Vec<i64>], target: &[i64]) -> Result<Solver, LatticeError> {
        if pi.len() != target.len() {
            return Err(LatticeError::DimensionMismatch {
                expected: pi.len(),
                got: target.len(),
            });
        }
        for row in pi {
            self.check_len(row)?;
        }
        let extra: Vec<(Vec<i64>, i64)> = pi
            .iter()
            .cloned()
            .zip(target.iter().copied())
            .collect();
        Ok(self.solver(&extra))
    }

    /// Cone points `x` with `pi x = target`, sorted lexicographically.
    pub fn fiber_points(&self, pi: &[Vec<i64>], target: &[i64]) -> Result<Vec<Point>, LatticeError> {
        let solver = self.fiber_solver(pi, target)?;
        let mut out = Vec::new();
        solver.search(&|_| false, &mut |x| {
            out.push(x.to_vec());
            ControlFlow::Continue(())
        })?;
        out.sort();
        Ok(out)
    }

    /// Number of cone points `x` with `pi x = target`.
    pub fn count_fiber(&self, pi: &[Vec<i64>], target: &[i64]) -> Result<u64, LatticeError> {
        let solver = self.fiber_solver(pi, target)?;
        let mut count = 0u64;
        solver.search(&|_| false, &mut |_| {
            count += 1;
            ControlFlow::Continue(())
        })?;
        Ok(count)
    }

    /// Indecomposable points up to `degree_bound`, with a completeness flag
    /// from [`IntegerCone::minimal_solutions`].
    pub fn hilbert_basis(&self, degree_bound: i64) -> Result<HilbertBasis, LatticeError> {
        self.hilbert_basis_with_budget(degree_bound, DEFAULT_CERTIFICATE_BUDGET)
    }

    pub fn hilbert_basis_with_budget(
        &self,
        degree_bound: i64,
        budget: usize,
    ) -> Result<HilbertBasis, LatticeError> {
        let elements = self.graded_indecomposables(degree_bound)?;
        let complete = match self.minimal_solutions(budget)? {
            None => false,
            Some(all) => {
                let mut low: Vec<Point> = all
                    .iter()
                    .filter(|x| self.degree(x) <= degree_bound)
                    .cloned()
                    .collect();
                low.sort_by(|a, b| self.degree(a).cmp(&self.degree(b)).then_with(|| a.cmp(b)));
                if low != elements {
                    return Err(LatticeError::Internal(
                        "graded enumeration and completion disagree".into(),
                    ));
                }
                all.len() == low.len()
            }
        };
        Ok(HilbertBasis {
            elements,
            degree_bound,
            complete,
        })
    }

    /// Indecomposable points of degree `1..=degree_bound`, found degree by
    /// degree while pruning every branch whose lower bounds already dominate
    /// a known basis element.
    pub fn graded_indecomposables(&self, degree_bound: i64) -> Result<Vec<Point>, LatticeError> {
        let mut basis: Vec<Point> = Vec::new();
        for d in 1..=degree_bound {
            let solver = self.solver(&[(self.grading.clone(), d)]);
            let mut found = Vec::new();
            let known = &basis;
            solver.search(&|lo| known.iter().any(|b| dominates(lo, b)), &mut |x| {
                if x.iter().any(|&v| v != 0) {
                    found.push(x.to_vec());
                }
                ControlFlow::Continue(())
            })?;
            found.sort();
            basis.extend(found);
        }
        Ok(basis)
    }

    /// All minimal nonzero solutions (the full Hilbert basis) by the
    /// Contejean-Devie procedure: grow candidate vectors one unit at a time
    /// in directions `e_j` with `<A x, A e_j> < 0`, discarding candidates that
    /// dominate a solution. Returns `None` if more than `budget` candidates
    /// would be generated.
    pub fn minimal_solutions(&self, budget: usize) -> Result<Option<Vec<Point>>, LatticeError> {
        let n = self.num_vars;
        // gram[k][j] = <A e_k, A e_j>, so <A x, A e_j> = sum_k x_k gram[k][j].
        let gram: Vec<Vec<i64>> = (0..n)
            .map(|k| {
                (0..n)
                    .map(|j| self.equations.iter().map(|eq| eq[k] * eq[j]).sum())
                    .collect()
            })
            .collect();
        let is_solution = |x: &[u16]| {
            self.equations
                .iter()
                .all(|eq| eq.iter().zip(x).map(|(a, &b)| a * b as i64).sum::<i64>() == 0)
        };
        let mut solutions: Vec<Box<[u16]>> = Vec::new();
        let mut frontier: Vec<Box<[u16]>> = (0..n)
            .map(|j| {
                let mut x = vec![0u16; n];
                x[j] = 1;
                x.into_boxed_slice()
            })
            .collect();
        let mut generated = n;
        while !frontier.is_empty() {
            let (done, open): (Vec<_>, Vec<_>) = frontier.into_iter().partition(|x| is_solution(x));
            solutions.extend(done);
            let mut next: HashSet<Box<[u16]>> = HashSet::new();
            for x in open {
                let support: Vec<(usize, i64)> = x
                    .iter()
                    .enumerate()
                    .filter(|(_, &v)| v != 0)
                    .map(|(k, &v)| (k, v as i64))
                    .collect();
                for j in 0..n {
                    let s: i64 = support.iter().map(|&(k, v)| v * gram[k][j]).sum();
                    if s >= 0 {
                        continue;
                    }
                    let mut y = x.clone();
                    let Some(yj) = y[j].checked_add(1) else {
                        return Ok(None);
                    };
                    y[j] = yj;
                    if next.contains(&y)
                        || solutions.iter().any(|t| y.iter().zip(t.iter()).all(|(a, b)| a >= b))
                    {
                        continue;
                    }
                    generated += 1;
                    if generated > budget {
                        return Ok(None);
                    }
                    next.insert(y);
                }
            }
            frontier = next.into_iter().collect();
        }
        let mut solutions: Vec<Point> = solutions
            .into_iter()
            .map(|x| x.iter().map(|&v| v as i64).collect())
            .collect();
        solutions.sort_by(|a, b| self.degree(a).cmp(&self.degree(b)).then_with(|| a.cmp(b)));
        for s in &solutions {
            if !self.contains(s) {
                return Err(LatticeError::Internal("completion produced a non-solution".into()));
            }
        }
        Ok(Some(solutions))
    }
}

pub fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `x ≥ y` componentwise.
pub fn dominates(x: &[i64], y: &[i64]) -> bool {
    x.iter().zip(y).all(|(a, b)| a >= b)
}

pub fn add_points(a: &[i64], b: &[i64]) -> Point {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

struct Row {
    terms: Vec<(usize, i64)>,
    rhs: i64,
}

impl Row {
    fn new(coeffs: &[i64], rhs: i64) -> Self {
        Row {
            terms: coeffs
                .iter()
                .enumerate()
                .filter(|(_, &c)| c != 0)
                .map(|(j, &c)| (j, c))
                .collect(),
            rhs,
        }
    }
}

fn floor_div(a: i128, b: i128) -> i128 {
    let q = a / b;
    if (a % b != 0) && ((a < 0) != (b < 0)) {
        q - 1
    } else {
        q
    }
}

fn ceil_div(a: i128, b: i128) -> i128 {
    -floor_div(-a, b)
}

struct Solver {
    n: usize,
    rows: Vec<Row>,
    var_rows: Vec<Vec<usize>>,
}

impl Solver {
    fn new(n: usize, rows: Vec<Row>) -> Self {
        let mut var_rows = vec![Vec::new(); n];
        for (r, row) in rows.iter().enumerate() {
            for &(j, _) in &row.terms {
                var_rows[j].push(r);
            }
        }
        Solver { n, rows, var_rows }
    }

    /// Tightens bounds to a fixpoint. Returns false on infeasibility.
    fn propagate(&self, lo: &mut [i128], hi: &mut [i128]) -> bool {
        let mut queued = vec![true; self.rows.len()];
        let mut queue: Vec<usize> = (0..self.rows.len()).collect();
        while let Some(r) = queue.pop() {
            queued[r] = false;
            let row = &self.rows[r];
            if row.terms.is_empty() {
                if row.rhs != 0 {
                    return false;
                }
                continue;
            }
            // Finite parts and counts of infinite contributions.
            let (mut min_fin, mut min_inf, mut max_fin, mut max_inf) = (0i128, 0, 0i128, 0);
            for &(j, a) in &row.terms {
                let a = a as i128;
                if a > 0 {
                    min_fin += a * lo[j];
                    if hi[j] >= INF {
                        max_inf += 1;
                    } else {
                        max_fin += a * hi[j];
                    }
                } else {
                    max_fin += a * lo[j];
                    if hi[j] >= INF {
                        min_inf += 1;
                    } else {
                        min_fin += a * hi[j];
                    }
                }
            }
            let rhs = row.rhs as i128;
            for &(j, a) in &row.terms {
                let a = a as i128;
                let hi_inf = hi[j] >= INF;
                let (own_min, own_min_inf, own_max, own_max_inf) = if a > 0 {
                    (a * lo[j], false, if hi_inf { 0 } else { a * hi[j] }, hi_inf)
                } else {
                    (if hi_inf { 0 } else { a * hi[j] }, hi_inf, a * lo[j], false)
                };
                let rest_min = if min_inf - own_min_inf as i32 > 0 {
                    None
                } else {
                    Some(min_fin - own_min)
                };
                let rest_max = if max_inf - own_max_inf as i32 > 0 {
                    None
                } else {
                    Some(max_fin - own_max)
                };
                // a x_j ∈ [rhs - rest_max, rhs - rest_min]
                let (mut new_lo, mut new_hi) = (lo[j], hi[j]);
                if a > 0 {
                    if let Some(m) = rest_min {
                        new_hi = new_hi.min(floor_div(rhs - m, a));
                    }
                    if let Some(m) = rest_max {
                        new_lo = new_lo.max(ceil_div(rhs - m, a));
                    }
                } else {
                    if let Some(m) = rest_min {
                        new_lo = new_lo.max(ceil_div(rhs - m, a));
                    }
                    if let Some(m) = rest_max {
                        new_hi = new_hi.min(floor_div(rhs - m, a));
                    }
                }
                if new_lo > new_hi {
                    return false;
                }
                if new_lo != lo[j] || new_hi != hi[j] {
                    lo[j] = new_lo;
                    hi[j] = new_hi;
                    for &r2 in &self.var_rows[j] {
                        if r2 != r && !queued[r2] {
                            queued[r2] = true;
                            queue.push(r2);
                        }
                    }
                    // The bounds used for this row changed; revisit it.
                    if !queued[r] {
                        queued[r] = true;
                        queue.push(r);
                    }
                }
            }
        }
        true
    }

    /// Visits every nonnegative solution. `prune` sees the lower bounds after
    /// propagation and may cut the branch.
    fn search(
        &self,
        prune: &dyn Fn(&[i64]) -> bool,
        visit: &mut dyn FnMut(&[i64]) -> ControlFlow<()>,
    ) -> Result<(), LatticeError> {
        let lo = vec![0i128; self.n];
        let hi = vec![INF; self.n];
        self.recurse(lo, hi, prune, visit).map(|_| ())
    }

    fn recurse(
        &self,
        mut lo: Vec<i128>,
        mut hi: Vec<i128>,
        prune: &dyn Fn(&[i64]) -> bool,
        visit: &mut dyn FnMut(&[i64]) -> ControlFlow<()>,
    ) -> Result<ControlFlow<()>, LatticeError> {
        if !self.propagate(&mut lo, &mut hi) {
            return Ok(ControlFlow::Continue(()));
        }
        let lo64: Vec<i64> = lo.iter().map(|&v| v as i64).collect();
        if prune(&lo64) {
            return Ok(ControlFlow::Continue(()));
        }
        // Most constrained open variable; ties go to the lowest index.
        let mut pick: Option<(i128, usize)> = None;
        let mut open_unbounded = None;
        for j in 0..self.n {
            if lo[j] == hi[j] {
                continue;
            }
            if hi[j] >= INF {
                open_unbounded.get_or_insert(j);
                continue;
            }
            let w = hi[j] - lo[j];
            if pick.is_none_or(|(bw, _)| w < bw) {
                pick = Some((w, j));
            }
        }
        let Some((_, j)) = pick else {
            if let Some(j) = open_unbounded {
                return Err(LatticeError::Unbounded(j));
            }
            debug_assert!(self.rows.iter().all(|row| {
                row.terms.iter().map(|&(k, a)| a * lo64[k]).sum::<i64>() == row.rhs
            }));
            return Ok(visit(&lo64));
        };
        for v in lo[j]..=hi[j] {
            let mut lo2 = lo.clone();
            let mut hi2 = hi.clone();
            lo2[j] = v;
            hi2[j] = v;
            if self.recurse(lo2, hi2, prune, visit)?.is_break() {
                return Ok(ControlFlow::Break(()));
            }
        }
        Ok(ControlFlow::Continue(()))
    }
}

/// A multiset of generator indices, kept sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Factorization(pub Vec<usize>);

impl Factorization {
    pub fn new(mut idx: Vec<usize>) -> Self {
        idx.sort_unstable();
        Factorization(idx)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn evaluate(&self, gens: &[Point], dim: usize) -> Point {
        let mut s = vec![0; dim];
        for &i in &self.0 {
            for (a, b) in s.iter_mut().zip(&gens[i]) {
                *a += b;
            }
        }
        s
    }

    fn contains(&self, sub: &[usize]) -> bool {
        let (mut i, mut k) = (0, 0);
        while k < sub.len() {
            while i < self.0.len() && self.0[i] < sub[k] {
                i += 1;
            }
            if i == self.0.len() || self.0[i] != sub[k] {
                return false;
            }
            i += 1;
            k += 1;
        }
        true
    }

    /// `self - remove + add`, assuming `remove` is a sub-multiset.
    fn replace(&self, remove: &[usize], add: &[usize]) -> Factorization {
        let mut out = Vec::with_capacity(self.0.len() + add.len());
        let mut k = 0;
        for &x in &self.0 {
            if k < remove.len() && remove[k] == x {
                k += 1;
            } else {
                out.push(x);
            }
        }
        out.extend_from_slice(add);
        Factorization::new(out)
    }
}

/// A binomial relation `prod left = prod right` among generators, written
/// additively: the two multisets have equal sums.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BinomialMove {
    pub left: Vec<usize>,
    pub right: Vec<usize>,
}

impl BinomialMove {
    /// Sorts both sides and orders them so that `left <= right`.
    pub fn new(mut left: Vec<usize>, mut right: Vec<usize>) -> Self {
        left.sort_unstable();
        right.sort_unstable();
        if (left.len(), &left) > (right.len(), &right) {
            std::mem::swap(&mut left, &mut right);
        }
        BinomialMove { left, right }
    }

    pub fn is_trivial(&self) -> bool {
        self.left == self.right
    }

    pub fn degrees(&self) -> (usize, usize) {
        (self.left.len(), self.right.len())
    }

    /// True when both sides sum to the same point.
    pub fn holds(&self, gens: &[Point]) -> bool {
        let dim = gens.first().map_or(0, |g| g.len());
        Factorization::new(self.left.clone()).evaluate(gens, dim)
            == Factorization::new(self.right.clone()).evaluate(gens, dim)
    }
}

/// Every primitive relation of total size at most `d` per side: pairs of
/// distinct multisets with equal sums and disjoint supports.
pub fn relations_up_to_degree(gens: &[Point], d: usize) -> Vec<BinomialMove> {
    let dim = gens.first().map_or(0, |g| g.len());
    let mut by_sum: HashMap<Point, Vec<Vec<usize>>> = HashMap::new();
    let mut stack: Vec<(Vec<usize>, Point)> = vec![(Vec::new(), vec![0; dim])];
    while let Some((ms, sum)) = stack.pop() {
        if !ms.is_empty() {
            by_sum.entry(sum.clone()).or_default().push(ms.clone());
        }
        if ms.len() == d {
            continue;
        }
        let start = ms.last().copied().unwrap_or(0);
        for i in start..gens.len() {
            let mut next = ms.clone();
            next.push(i);
            stack.push((next, add_points(&sum, &gens[i])));
        }
    }
    let mut moves = Vec::new();
    for group in by_sum.values() {
        for (a, left) in group.iter().enumerate() {
            for right in &group[a + 1..] {
                if left.iter().all(|g| !right.contains(g)) {
                    moves.push(BinomialMove::new(left.clone(), right.clone()));
                }
            }
        }
    }
    moves.sort();
    moves
}

/// All ways of writing `target` as a sum of generators, sorted.
pub fn factorizations(target: &[i64], gens: &[Point]) -> Result<Vec<Factorization>, LatticeError> {
    fn go(
        rem: &mut Point,
        gens: &[Point],
        start: usize,
        cur: &mut Vec<usize>,
        out: &mut Vec<Factorization>,
    ) -> Result<(), LatticeError> {
        if rem.iter().all(|&v| v == 0) {
            if out.len() >= MAX_FACTORIZATIONS {
                return Err(LatticeError::ResourceLimit {
                    what: "factorizations",
                    limit: MAX_FACTORIZATIONS,
                });
            }
            out.push(Factorization(cur.clone()));
            return Ok(());
        }
        for i in start..gens.len() {
            if !dominates(rem, &gens[i]) {
                continue;
            }
            for (r, g) in rem.iter_mut().zip(&gens[i]) {
                *r -= g;
            }
            cur.push(i);
            go(rem, gens, i, cur, out)?;
            cur.pop();
            for (r, g) in rem.iter_mut().zip(&gens[i]) {
                *r += g;
            }
        }
        Ok(())
    }
    if gens.iter().any(|g| g.iter().all(|&v| v == 0)) {
        return Err(LatticeError::Internal("zero generator".into()));
    }
    let mut out = Vec::new();
    go(&mut target.to_vec(), gens, 0, &mut Vec::new(), &mut out)?;
    out.sort();
    Ok(out)
}

/// Factorizations of one element with their connected components under a
/// set of moves.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberGraph {
    pub factorizations: Vec<Factorization>,
    /// Component label of each factorization, numbered by first occurrence.
    pub component: Vec<usize>,
    pub num_components: usize,
}

impl FiberGraph {
    pub fn is_connected(&self) -> bool {
        self.num_components <= 1
    }
}

/// Moves indexed by the smallest generator of each side.
pub struct MoveIndex<'a> {
    moves: &'a [BinomialMove],
    by_first: HashMap<usize, Vec<(usize, bool)>>,
}

impl<'a> MoveIndex<'a> {
    pub fn new(moves: &'a [BinomialMove]) -> Self {
        let mut by_first: HashMap<usize, Vec<(usize, bool)>> = HashMap::new();
        for (k, m) in moves.iter().enumerate() {
            if m.is_trivial() {
                continue;
            }
            if let Some(&g) = m.left.first() {
                by_first.entry(g).or_default().push((k, true));
            }
            if let Some(&g) = m.right.first() {
                by_first.entry(g).or_default().push((k, false));
            }
        }
        MoveIndex { moves, by_first }
    }

    /// Factorizations reachable from `f` by one move.
    fn neighbours(&self, f: &Factorization) -> Vec<Factorization> {
        let mut out = Vec::new();
        let mut last = None;
        for &g in &f.0 {
            if last == Some(g) {
                continue;
            }
            last = Some(g);
            let Some(list) = self.by_first.get(&g) else { continue };
            for &(k, from_left) in list {
                let m = &self.moves[k];
                let (from, to) = if from_left {
                    (&m.left, &m.right)
                } else {
                    (&m.right, &m.left)
                };
                if f.contains(from) {
                    out.push(f.replace(from, to));
                }
            }
        }
        out
    }
}

pub fn fiber_graph(
    target: &[i64],
    gens: &[Point],
    index: &MoveIndex<'_>,
) -> Result<FiberGraph, LatticeError> {
    let facts = factorizations(target, gens)?;
    if facts.is_empty() {
        return Err(LatticeError::NotInSemigroup);
    }
    let pos: HashMap<&Factorization, usize> =
        facts.iter().enumerate().map(|(i, f)| (f, i)).collect();
    let mut parent: Vec<usize> = (0..facts.len()).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for (i, f) in facts.iter().enumerate() {
        for g in index.neighbours(f) {
            let j = *pos
                .get(&g)
                .ok_or_else(|| LatticeError::Internal("move does not preserve the sum".into()))?;
            let (a, b) = (find(&mut parent, i), find(&mut parent, j));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut label: HashMap<usize, usize> = HashMap::new();
    let mut component = Vec::with_capacity(facts.len());
    for i in 0..facts.len() {
        let r = find(&mut parent, i);
        let next = label.len();
        component.push(*label.entry(r).or_insert(next));
    }
    Ok(FiberGraph {
        num_components: label.len(),
        factorizations: facts,
        component,
    })
}

/// True iff all factorizations of `target` are linked by `moves`.
pub fn fiber_graph_connected(
    target: &[i64],
    gens: &[Point],
    moves: &[BinomialMove],
) -> Result<bool, LatticeError> {
    Ok(fiber_graph(target, gens, &MoveIndex::new(moves))?.is_connected())
}

/// Distinct sums of between 1 and `max_terms` generators, sorted.
pub fn sums_up_to(gens: &[Point], max_terms: usize) -> Vec<Point> {
    let dim = gens.first().map_or(0, |g| g.len());
    let mut seen: HashSet<Point> = HashSet::new();
    let mut layer: HashSet<Point> = HashSet::from([vec![0; dim]]);
    for _ in 0..max_terms {
        let mut next = HashSet::new();
        for p in &layer {
            for g in gens {
                let s = add_points(p, g);
                if seen.insert(s.clone()) {
                    next.insert(s);
                }
            }
        }
        layer = next;
    }
    let mut out: Vec<Point> = seen.into_iter().collect();
    out.sort();
    out
}
