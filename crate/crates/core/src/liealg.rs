//! Weight arithmetic for `sl_m` and an invariant-dimension oracle.
//!
//! Weights are written in the basis of fundamental weights. Irreducible
//! characters come from Freudenthal's recursion and tensor products are
//! split with the Klimyk (Racah-Speiser) formula. None of this touches the
//! polyhedral machinery in [`crate::lattice`], which is what it is used to
//! check.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest rank the oracle accepts (`sl_5`).
pub const MAX_ORACLE_RANK: usize = 4;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum LieError {
    #[error("rank {0} is not supported by the oracle (max {MAX_ORACLE_RANK})")]
    UnsupportedRank(usize),
    #[error("weights of different rank: {0} and {1}")]
    RankMismatch(usize, usize),
    #[error("cannot parse weight: {0}")]
    Parse(String),
    #[error("weight vector is empty")]
    Empty,
}

/// A dominant weight `sum c_i ω_i` of `sl_{rank+1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DominantWeight {
    coeffs: Vec<u32>,
}

impl DominantWeight {
    pub fn new(coeffs: Vec<u32>) -> Self {
        DominantWeight { coeffs }
    }

    pub fn zero(rank: usize) -> Self {
        DominantWeight {
            coeffs: vec![0; rank],
        }
    }

    /// `ω_i`, with `i` counted from 1.
    pub fn fundamental(rank: usize, i: usize) -> Self {
        assert!(i >= 1 && i <= rank, "fundamental weight index out of range");
        let mut coeffs = vec![0; rank];
        coeffs[i - 1] = 1;
        DominantWeight { coeffs }
    }

    pub fn rank(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    /// Sum of the coefficients.
    pub fn degree(&self) -> u64 {
        self.coeffs.iter().map(|&c| c as u64).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// Zero or a single `ω_i`.
    pub fn is_fundamental_or_zero(&self) -> bool {
        self.degree() <= 1
    }

    /// Highest weight of the dual representation: the coefficient list
    /// reversed.
    pub fn dual(&self) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.reverse();
        DominantWeight { coeffs }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.rank(), other.rank());
        DominantWeight {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    fn labels(&self) -> Vec<i64> {
        self.coeffs.iter().map(|&c| c as i64).collect()
    }
}

impl fmt::Display for DominantWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

impl FromStr for DominantWeight {
    type Err = LieError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let coeffs = s
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<u32>()
                    .map_err(|_| LieError::Parse(s.to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(DominantWeight { coeffs })
    }
}

/// One dominant weight per leaf, all of the same rank.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct WeightVector {
    entries: Vec<DominantWeight>,
}

impl WeightVector {
    pub fn new(entries: Vec<DominantWeight>) -> Result<Self, LieError> {
        let first = entries.first().ok_or(LieError::Empty)?;
        if let Some(w) = entries.iter().find(|w| w.rank() != first.rank()) {
            return Err(LieError::RankMismatch(first.rank(), w.rank()));
        }
        Ok(WeightVector { entries })
    }

    pub fn entries(&self) -> &[DominantWeight] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn rank(&self) -> usize {
        self.entries[0].rank()
    }

    pub fn dual(&self) -> Self {
        WeightVector {
            entries: self.entries.iter().map(|w| w.dual()).collect(),
        }
    }

    /// Coefficients of every entry, concatenated.
    pub fn flatten(&self) -> Vec<i64> {
        self.entries
            .iter()
            .flat_map(|w| w.coeffs.iter().map(|&c| c as i64))
            .collect()
    }
}

impl fmt::Display for WeightVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(|w| w.to_string()).collect();
        f.write_str(&parts.join(";"))
    }
}

impl FromStr for WeightVector {
    type Err = LieError;
    /// `1,0;1,0;1,0` is `(ω1, ω1, ω1)` for `sl_3`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let entries = s
            .split(';')
            .map(DominantWeight::from_str)
            .collect::<Result<Vec<_>, _>>()?;
        WeightVector::new(entries)
    }
}

/// Root data of `A_rank`, with weights in Dynkin labels.
struct RootSystem {
    rank: usize,
    /// Dynkin labels of the simple roots (rows of the Cartan matrix).
    simple: Vec<Vec<i64>>,
    /// Positive roots `α_a + ... + α_{b-1}` as `(a, b, labels)`.
    positive: Vec<(usize, usize, Vec<i64>)>,
    /// `(rank + 1)` times the inverse Cartan matrix.
    scaled_inverse: Vec<Vec<i64>>,
}

impl RootSystem {
    fn new(rank: usize) -> Self {
        let simple: Vec<Vec<i64>> = (0..rank)
            .map(|i| {
                (0..rank)
                    .map(|j| match i.abs_diff(j) {
                        0 => 2,
                        1 => -1,
                        _ => 0,
                    })
                    .collect()
            })
            .collect();
        let mut positive = Vec::new();
        for a in 0..rank {
            for b in a + 1..=rank {
                let mut labels = vec![0; rank];
                for row in &simple[a..b] {
                    for (l, r) in labels.iter_mut().zip(row) {
                        *l += r;
                    }
                }
                positive.push((a, b, labels));
            }
        }
        let h = rank as i64 + 1;
        let scaled_inverse = (0..rank)
            .map(|i| {
                (0..rank)
                    .map(|j| {
                        let (i1, j1) = (i as i64 + 1, j as i64 + 1);
                        i1.min(j1) * (h - i1.max(j1))
                    })
                    .collect()
            })
            .collect();
        RootSystem {
            rank,
            simple,
            positive,
            scaled_inverse,
        }
    }

    /// `(rank + 1) * (x, y)`.
    fn scaled_form(&self, x: &[i64], y: &[i64]) -> i64 {
        let mut s = 0;
        for i in 0..self.rank {
            for j in 0..self.rank {
                s += x[i] * self.scaled_inverse[i][j] * y[j];
            }
        }
        s
    }

    /// Simple-root coordinates of `x` scaled by `rank + 1`.
    fn scaled_root_coords(&self, x: &[i64]) -> Vec<i64> {
        (0..self.rank)
            .map(|i| (0..self.rank).map(|j| self.scaled_inverse[i][j] * x[j]).sum())
            .collect()
    }

    /// Multiplicities of all weights of the irreducible module with highest
    /// weight `top`, by Freudenthal's formula.
    fn character(&self, top: &[i64]) -> HashMap<Vec<i64>, u64> {
        let r = self.rank;
        let rho = vec![1i64; r];
        let shift = |x: &[i64]| -> Vec<i64> { x.iter().zip(&rho).map(|(a, b)| a + b).collect() };
        let top_rho = shift(top);
        let top_norm = self.scaled_form(&top_rho, &top_rho);

        // weight -> (multiplicity, level below the top)
        let mut mult: HashMap<Vec<i64>, (u64, usize)> = HashMap::new();
        mult.insert(top.to_vec(), (1, 0));
        let mut layer = vec![top.to_vec()];
        let mut level = 0;
        while !layer.is_empty() {
            level += 1;
            let mut candidates: Vec<Vec<i64>> = Vec::new();
            for mu in &layer {
                for alpha in &self.simple {
                    let next: Vec<i64> = mu.iter().zip(alpha).map(|(a, b)| a - b).collect();
                    if !mult.contains_key(&next) && !candidates.contains(&next) {
                        candidates.push(next);
                    }
                }
            }
            let mut next_layer = Vec::new();
            for mu in candidates {
                let mu_rho = shift(&mu);
                let denom = top_norm - self.scaled_form(&mu_rho, &mu_rho);
                let mut numer: i64 = 0;
                for (a, b, alpha) in &self.positive {
                    let height = b - a;
                    let mut k = 1;
                    while k * height <= level {
                        let w: Vec<i64> = mu
                            .iter()
                            .zip(alpha)
                            .map(|(x, y)| x + k as i64 * y)
                            .collect();
                        if let Some(&(m, _)) = mult.get(&w) {
                            let pairing: i64 = w[*a..*b].iter().sum();
                            numer += pairing * m as i64;
                        }
                        k += 1;
                    }
                }
                // Numerator carries the same (rank + 1) scale as the denominator.
                let numer = 2 * numer * (r as i64 + 1);
                if numer == 0 {
                    continue;
                }
                debug_assert!(denom > 0 && numer % denom == 0);
                let m = (numer / denom) as u64;
                mult.insert(mu.clone(), (m, level));
                next_layer.push(mu);
            }
            layer = next_layer;
        }
        mult.into_iter().map(|(k, (m, _))| (k, m)).collect()
    }

    /// Reflects `v` (already shifted by ρ) into the dominant chamber.
    /// Returns `None` when `v` lies on a wall.
    fn dominant_reflection(&self, mut v: Vec<i64>) -> Option<(Vec<i64>, i64)> {
        let mut sign = 1;
        loop {
            if v.contains(&0) {
                return None;
            }
            match v.iter().position(|&x| x < 0) {
                None => return Some((v, sign)),
                Some(i) => {
                    let c = v[i];
                    for (x, a) in v.iter_mut().zip(&self.simple[i]) {
                        *x -= c * a;
                    }
                    sign = -sign;
                }
            }
        }
    }
}

fn check_rank(rank: usize) -> Result<(), LieError> {
    if rank == 0 || rank > MAX_ORACLE_RANK {
        Err(LieError::UnsupportedRank(rank))
    } else {
        Ok(())
    }
}

/// Weight multiplicities of `V(w)`, keyed by Dynkin labels.
pub fn weight_multiplicities(w: &DominantWeight) -> Result<HashMap<Vec<i64>, u64>, LieError> {
    check_rank(w.rank())?;
    Ok(RootSystem::new(w.rank()).character(&w.labels()))
}

/// Dimension of `V(w)` by the Weyl dimension formula.
pub fn weyl_dimension(w: &DominantWeight) -> u128 {
    let r = w.rank();
    let mut num = BigUint::from(1u32);
    let mut den = BigUint::from(1u32);
    for a in 0..r {
        for b in a + 1..=r {
            let s: u64 = w.coeffs[a..b].iter().map(|&c| c as u64 + 1).sum();
            num *= s;
            den *= (b - a) as u64;
        }
    }
    let q = num / den;
    u128::try_from(q).expect("dimension fits in u128")
}

/// Decomposes `V(a) ⊗ V(b)` into irreducibles.
pub fn tensor_decompose(
    a: &DominantWeight,
    b: &DominantWeight,
) -> Result<BTreeMap<DominantWeight, u64>, LieError> {
    if a.rank() != b.rank() {
        return Err(LieError::RankMismatch(a.rank(), b.rank()));
    }
    check_rank(a.rank())?;
    let rs = RootSystem::new(a.rank());
    // Iterate over the character of the smaller factor.
    let (big, small) = if weyl_dimension(a) >= weyl_dimension(b) {
        (a, b)
    } else {
        (b, a)
    };
    let chi = rs.character(&small.labels());
    Ok(klimyk(&rs, &big.labels(), &chi))
}

fn klimyk(
    rs: &RootSystem,
    top: &[i64],
    chi: &HashMap<Vec<i64>, u64>,
) -> BTreeMap<DominantWeight, u64> {
    let mut acc: HashMap<Vec<i64>, i64> = HashMap::new();
    for (mu, &m) in chi {
        let v: Vec<i64> = top.iter().zip(mu).map(|(x, y)| x + y + 1).collect();
        if let Some((dom, sign)) = rs.dominant_reflection(v) {
            let hw: Vec<i64> = dom.iter().map(|x| x - 1).collect();
            *acc.entry(hw).or_insert(0) += sign * m as i64;
        }
    }
    acc.into_iter()
        .filter(|&(_, m)| m != 0)
        .map(|(k, m)| {
            assert!(m > 0, "negative multiplicity in Klimyk sum");
            (
                DominantWeight::new(k.iter().map(|&x| x as u32).collect()),
                m as u64,
            )
        })
        .collect()
}

/// `dim (V(λ_1) ⊗ ... ⊗ V(λ_n))^G`.
pub fn invariant_dim(lambdas: &WeightVector) -> Result<u64, LieError> {
    let rank = lambdas.rank();
    check_rank(rank)?;
    let entries = lambdas.entries();
    let n = entries.len();
    if n == 1 {
        return Ok(entries[0].is_zero() as u64);
    }
    let rs = RootSystem::new(rank);
    let h = rank as i64 + 1;

    // Highest weights still reachable: a summand ν can pair with the rest only
    // if dual(ν) lies below the sum of the remaining highest weights.
    let mut tail_sum = vec![vec![0i64; rank]; n + 1];
    for i in (0..n).rev() {
        tail_sum[i] = tail_sum[i + 1]
            .iter()
            .zip(entries[i].labels())
            .map(|(a, b)| a + b)
            .collect();
    }
    let reachable = |nu: &DominantWeight, from: usize| -> bool {
        let diff: Vec<i64> = tail_sum[from]
            .iter()
            .zip(nu.dual().labels())
            .map(|(a, b)| a - b)
            .collect();
        rs.scaled_root_coords(&diff)
            .iter()
            .all(|&c| c >= 0 && c % h == 0)
    };

    let mut chars: HashMap<&DominantWeight, HashMap<Vec<i64>, u64>> = HashMap::new();
    let mut current: BTreeMap<DominantWeight, u64> = BTreeMap::new();
    current.insert(entries[0].clone(), 1);
    for (i, w) in entries.iter().enumerate().take(n - 1).skip(1) {
        let chi = chars
            .entry(w)
            .or_insert_with(|| rs.character(&w.labels()));
        let mut next: BTreeMap<DominantWeight, u64> = BTreeMap::new();
        for (nu, &m) in &current {
            for (rho, k) in klimyk(&rs, &nu.labels(), chi) {
                if reachable(&rho, i + 1) {
                    *next.entry(rho).or_insert(0) += m * k;
                }
            }
        }
        current = next;
    }
    Ok(current.get(&entries[n - 1].dual()).copied().unwrap_or(0))
}

/// Dimension of the `GL_n` irreducible with highest weight `(d, d, d, 0, ..., 0)`,
/// which is the degree-`d` piece of the Plücker algebra of `Gr_3(C^n)`.
pub fn gl_dim_omega3(n: usize, d: u64) -> u128 {
    assert!(n >= 3, "need n >= 3");
    let part: Vec<u64> = (0..n).map(|i| if i < 3 { d } else { 0 }).collect();
    gl_dimension(&part)
}

/// Weyl dimension of the `GL_n` irreducible with partition `part`.
pub fn gl_dimension(part: &[u64]) -> u128 {
    let n = part.len();
    let mut num = BigUint::from(1u32);
    let mut den = BigUint::from(1u32);
    for i in 0..n {
        for j in i + 1..n {
            num *= part[i] - part[j] + (j - i) as u64;
            den *= (j - i) as u64;
        }
    }
    u128::try_from(num / den).expect("dimension fits in u128")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> DominantWeight {
        s.parse().unwrap()
    }

    fn wv(s: &str) -> WeightVector {
        s.parse().unwrap()
    }

    /// Weight multiplicities of an `sl_3` irreducible by counting
    /// Gel'fand-Tsetlin patterns of the `GL_3` shape `(a+b, b, 0)`.
    fn gt_character(c: &DominantWeight) -> HashMap<Vec<i64>, u64> {
        let (a, b) = (c.coeffs()[0] as i64, c.coeffs()[1] as i64);
        let top = [a + b, b, 0];
        let mut out = HashMap::new();
        for x in top[1]..=top[0] {
            for y in top[2]..=top[1] {
                for z in y..=x {
                    // GL_3 weight (z, x+y-z, |top|-x-y) as content of rows.
                    let e = [z, x + y - z, top.iter().sum::<i64>() - x - y];
                    let labels = vec![e[0] - e[1], e[1] - e[2]];
                    *out.entry(labels).or_insert(0) += 1;
                }
            }
        }
        out
    }

    /// Decomposition by repeatedly peeling off the highest remaining weight.
    fn peel(a: &DominantWeight, b: &DominantWeight) -> BTreeMap<DominantWeight, u64> {
        let ca = gt_character(a);
        let cb = gt_character(b);
        let mut prod: HashMap<Vec<i64>, i64> = HashMap::new();
        for (x, m) in &ca {
            for (y, k) in &cb {
                let s = vec![x[0] + y[0], x[1] + y[1]];
                *prod.entry(s).or_insert(0) += (m * k) as i64;
            }
        }
        let mut out = BTreeMap::new();
        loop {
            // Highest dominant weight with positive multiplicity, by height.
            let height = |v: &Vec<i64>| 2 * v[0] + v[1] + v[0] + 2 * v[1];
            let best = prod
                .iter()
                .filter(|(v, &m)| m > 0 && v[0] >= 0 && v[1] >= 0)
                .max_by_key(|(v, _)| (height(v), v[0]))
                .map(|(v, &m)| (v.clone(), m));
            let Some((top, m)) = best else { break };
            let hw = DominantWeight::new(vec![top[0] as u32, top[1] as u32]);
            for (v, k) in gt_character(&hw) {
                *prod.get_mut(&v).unwrap() -= m * k as i64;
            }
            out.insert(hw, m as u64);
        }
        assert!(prod.values().all(|&m| m == 0));
        out
    }

    #[test]
    fn dual_reverses() {
        assert_eq!(w("1,0").dual(), w("0,1"));
        assert_eq!(w("1,1").dual(), w("1,1"));
        assert_eq!(w("0,1,0,0").dual(), w("0,0,1,0"));
    }

    #[test]
    fn small_decompositions() {
        let d = tensor_decompose(&w("1,0"), &w("1,0")).unwrap();
        assert_eq!(d, BTreeMap::from([(w("2,0"), 1), (w("0,1"), 1)]));
        assert_eq!(d, peel(&w("1,0"), &w("1,0")));
        let d = tensor_decompose(&w("1,0"), &w("0,1")).unwrap();
        assert_eq!(d, BTreeMap::from([(w("1,1"), 1), (w("0,0"), 1)]));
        let d = tensor_decompose(&w("0,0"), &w("3,1")).unwrap();
        assert_eq!(d, BTreeMap::from([(w("3,1"), 1)]));
    }

    #[test]
    fn klimyk_matches_peeling() {
        for a0 in 0..=3 {
            for a1 in 0..=3 {
                for b0 in 0..=3 {
                    for b1 in 0..=3 {
                        let a = DominantWeight::new(vec![a0, a1]);
                        let b = DominantWeight::new(vec![b0, b1]);
                        assert_eq!(tensor_decompose(&a, &b).unwrap(), peel(&a, &b), "{a} x {b}");
                    }
                }
            }
        }
    }

    #[test]
    fn freudenthal_matches_gt_counts() {
        for a in 0..=5 {
            for b in 0..=5 {
                let c = DominantWeight::new(vec![a, b]);
                assert_eq!(weight_multiplicities(&c).unwrap(), gt_character(&c));
            }
        }
    }

    #[test]
    fn dimensions_add_up() {
        for rank in 2..=3 {
            let max = if rank == 2 { 4 } else { 2 };
            let weights: Vec<DominantWeight> = (0..(max + 1u32).pow(rank as u32))
                .map(|mut k| {
                    DominantWeight::new(
                        (0..rank)
                            .map(|_| {
                                let c = k % (max + 1);
                                k /= max + 1;
                                c
                            })
                            .collect(),
                    )
                })
                .collect();
            for a in &weights {
                let chi: u64 = weight_multiplicities(a).unwrap().values().sum();
                assert_eq!(chi as u128, weyl_dimension(a));
                for b in weights.iter().step_by(if rank == 2 { 1 } else { 7 }) {
                    let d = tensor_decompose(a, b).unwrap();
                    let total: u128 = d.iter().map(|(c, &m)| m as u128 * weyl_dimension(c)).sum();
                    assert_eq!(total, weyl_dimension(a) * weyl_dimension(b), "{a} x {b}");
                    assert_eq!(d, tensor_decompose(b, a).unwrap());
                }
            }
        }
    }

    #[test]
    fn invariant_dims() {
        assert_eq!(invariant_dim(&wv("1,0;1,0;1,0")).unwrap(), 1);
        assert_eq!(invariant_dim(&wv("1,0;0,1")).unwrap(), 1);
        assert_eq!(invariant_dim(&wv("1,1;1,1;1,1")).unwrap(), 2);
        assert_eq!(invariant_dim(&wv("1,0;0,0;0,0")).unwrap(), 0);
        assert_eq!(invariant_dim(&wv("0,0")).unwrap(), 1);
        assert_eq!(invariant_dim(&wv("1,0")).unwrap(), 0);
        // 6 ⊗ 6 ⊗ 15 for sl_4 contains one invariant.
        assert_eq!(invariant_dim(&wv("0,1,0;0,1,0;1,0,1")).unwrap(), 1);
    }

    #[test]
    fn schur_orthogonality() {
        for a in 0..=3 {
            for b in 0..=3 {
                let l = DominantWeight::new(vec![a, b]);
                let v = WeightVector::new(vec![l.clone(), l.dual()]).unwrap();
                assert_eq!(invariant_dim(&v).unwrap(), 1);
            }
        }
    }

    #[test]
    fn invariant_dim_symmetries() {
        let base = ["1,0", "1,1", "0,2", "2,1"];
        let perms = [[0, 1, 2, 3], [3, 2, 1, 0], [1, 3, 0, 2], [2, 0, 3, 1]];
        let reference = invariant_dim(&wv(&base.join(";"))).unwrap();
        assert!(reference > 0);
        for p in perms {
            let v: Vec<&str> = p.iter().map(|&i| base[i]).collect();
            let v = wv(&v.join(";"));
            assert_eq!(invariant_dim(&v).unwrap(), reference);
            assert_eq!(invariant_dim(&v.dual()).unwrap(), reference);
        }
    }

    #[test]
    fn gl_dimensions() {
        assert_eq!(gl_dim_omega3(6, 1), 20);
        assert_eq!(gl_dim_omega3(4, 1), 4);
        for n in 3..9 {
            assert_eq!(gl_dim_omega3(n, 0), 1);
        }
        // Gr(3,5) = Gr(2,5): degree-2 piece is 50-dimensional.
        assert_eq!(gl_dim_omega3(5, 2), 50);
    }

    #[test]
    fn parse_errors() {
        assert!(matches!("1,x".parse::<DominantWeight>(), Err(LieError::Parse(_))));
        assert!(matches!(
            "1,0;1".parse::<WeightVector>(),
            Err(LieError::RankMismatch(2, 1))
        ));
        assert!(matches!(
            tensor_decompose(&w("1,0,0,0,0"), &w("1,0,0,0,0")),
            Err(LieError::UnsupportedRank(5))
        ));
    }
}
