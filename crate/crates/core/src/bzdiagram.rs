//! BZ triangles for sl_m.
//!
//! Entries sit on the interior edges of a triangle subdivided into `m²`
//! small triangles. Grid points are barycentric triples `(a, b, c)` with
//! `a + b + c = m`; the big corners are `P0 = (m,0,0)`, `P1 = (0,m,0)`,
//! `P2 = (0,0,m)`, in counter-clockwise order. Every interior grid point
//! carries a hexagon formed by its six incident edges, and neighbouring
//! hexagons share an entry. The three edges cutting off the big corners are
//! the corner entries.
//!
//! Side `s` (numbered `s + 1` externally) runs from `P_s` to `P_{s+1}`. Its
//! reading lists, for each boundary point strictly between the two corners,
//! the two interior edges pointing into the triangle.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lattice::{IntegerCone, LatticeError, Point};
use crate::liealg::{DominantWeight, WeightVector};

pub type GridPoint = [u32; 3];

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum BzError {
    #[error("m must be at least 2, got {0}")]
    RankTooSmall(usize),
    #[error("side must be 1, 2 or 3, got {0}")]
    BadSide(usize),
    #[error("expected {expected} values, got {got}")]
    WrongLength { expected: usize, got: usize },
    #[error("negative value at entry {0}")]
    Negative(String),
    #[error("hexagon condition fails at hexagon {0}")]
    Hexagon(usize),
    #[error("unknown vertex id {0:?}")]
    UnknownVertex(String),
    #[error("malformed weighting: {0}")]
    Json(String),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BzDiagram {
    m: usize,
    edges: Vec<[GridPoint; 2]>,
    index: HashMap<[GridPoint; 2], usize>,
    hexagons: Vec<[usize; 6]>,
    centers: Vec<GridPoint>,
    corners: [usize; 3],
    sides: [Vec<usize>; 3],
}

fn shift(p: GridPoint, plus: usize, minus: usize) -> Option<GridPoint> {
    let mut q = p;
    q[minus] = q[minus].checked_sub(1)?;
    q[plus] += 1;
    Some(q)
}

fn edge_key(p: GridPoint, q: GridPoint) -> [GridPoint; 2] {
    if p < q {
        [p, q]
    } else {
        [q, p]
    }
}

/// Directions `e_plus - e_minus` around a grid point, counter-clockwise.
const HEX_DIRECTIONS: [(usize, usize); 6] = [(2, 1), (0, 1), (0, 2), (1, 2), (1, 0), (2, 0)];

impl BzDiagram {
    pub fn new(m: usize) -> Result<Self, BzError> {
        if m < 2 {
            return Err(BzError::RankTooSmall(m));
        }
        let mu = m as u32;
        let mut points = Vec::new();
        for a in (0..=mu).rev() {
            for b in (0..=mu - a).rev() {
                points.push([a, b, mu - a - b]);
            }
        }
        let mut edges = Vec::new();
        for &p in &points {
            for (plus, minus) in [(1, 0), (2, 0), (2, 1)] {
                let Some(q) = shift(p, plus, minus) else { continue };
                let on_boundary = (0..3).any(|k| p[k] == 0 && q[k] == 0);
                if !on_boundary {
                    edges.push(edge_key(p, q));
                }
            }
        }
        edges.sort_by(|x, y| y.cmp(x));
        let index: HashMap<[GridPoint; 2], usize> =
            edges.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let at = |p: GridPoint, q: GridPoint| index[&edge_key(p, q)];

        let mut hexagons = Vec::new();
        let mut centers = Vec::new();
        for &v in &points {
            if v.iter().all(|&c| c >= 1) {
                let hex = HEX_DIRECTIONS.map(|(plus, minus)| at(v, shift(v, plus, minus).unwrap()));
                hexagons.push(hex);
                centers.push(v);
            }
        }

        let sides: [Vec<usize>; 3] = std::array::from_fn(|s| {
            let (s0, s1, s2) = (s, (s + 1) % 3, (s + 2) % 3);
            let mut reading = Vec::with_capacity(2 * (m - 1));
            for t in 1..mu {
                let mut b = [0; 3];
                b[s0] = mu - t;
                b[s1] = t;
                let mut q1 = [0; 3];
                q1[s0] = mu - t;
                q1[s1] = t - 1;
                q1[s2] = 1;
                let mut q2 = [0; 3];
                q2[s0] = mu - t - 1;
                q2[s1] = t;
                q2[s2] = 1;
                reading.push(at(b, q1));
                reading.push(at(b, q2));
            }
            reading
        });
        let corners = std::array::from_fn(|s| sides[s][0]);
        Ok(BzDiagram {
            m,
            edges,
            index,
            hexagons,
            centers,
            corners,
            sides,
        })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn num_entries(&self) -> usize {
        self.edges.len()
    }

    pub fn hexagons(&self) -> &[[usize; 6]] {
        &self.hexagons
    }

    /// Interior grid point at the centre of each hexagon.
    pub fn hexagon_centers(&self) -> &[GridPoint] {
        &self.centers
    }

    /// Corner entry at `P_s`, for `s = 0, 1, 2`.
    pub fn corners(&self) -> [usize; 3] {
        self.corners
    }

    /// Counter-clockwise reading of side `side` (1, 2 or 3).
    pub fn side(&self, side: usize) -> Result<&[usize], BzError> {
        match side {
            1..=3 => Ok(&self.sides[side - 1]),
            _ => Err(BzError::BadSide(side)),
        }
    }

    pub fn sides(&self) -> &[Vec<usize>; 3] {
        &self.sides
    }

    pub fn edge(&self, id: usize) -> [GridPoint; 2] {
        self.edges[id]
    }

    pub fn vertex_id(&self, id: usize) -> String {
        let [p, q] = self.edges[id];
        format!("{}_{}_{}-{}_{}_{}", p[0], p[1], p[2], q[0], q[1], q[2])
    }

    pub fn parse_vertex_id(&self, s: &str) -> Result<usize, BzError> {
        let bad = || BzError::UnknownVertex(s.to_string());
        let parse_point = |t: &str| -> Result<GridPoint, BzError> {
            let v: Vec<u32> = t
                .split('_')
                .map(|x| x.parse().map_err(|_| bad()))
                .collect::<Result<_, _>>()?;
            v.try_into().map_err(|_| bad())
        };
        let (a, b) = s.split_once('-').ok_or_else(bad)?;
        let key = edge_key(parse_point(a)?, parse_point(b)?);
        self.index.get(&key).copied().ok_or_else(bad)
    }

    /// Three equations per hexagon: opposite pairs of adjacent entries have
    /// equal sums.
    pub fn hexagon_constraints(&self) -> Vec<Vec<i64>> {
        let mut out = Vec::with_capacity(3 * self.hexagons.len());
        for hex in &self.hexagons {
            for k in 0..3 {
                let mut eq = vec![0; self.num_entries()];
                eq[hex[k]] += 1;
                eq[hex[k + 1]] += 1;
                eq[hex[k + 3]] -= 1;
                eq[hex[(k + 4) % 6]] -= 1;
                out.push(eq);
            }
        }
        out
    }

    /// Rows of the linear map from entries to the ω-coefficients of side
    /// `side` (1, 2 or 3).
    pub fn boundary_rows(&self, side: usize) -> Result<Vec<Vec<i64>>, BzError> {
        let reading = self.side(side)?;
        Ok(reading
            .chunks(2)
            .map(|pair| {
                let mut row = vec![0; self.num_entries()];
                row[pair[0]] += 1;
                row[pair[1]] += 1;
                row
            })
            .collect())
    }

    /// Total boundary degree: each entry weighted by the number of side
    /// readings it appears in.
    pub fn boundary_grading(&self) -> Vec<i64> {
        let mut g = vec![0; self.num_entries()];
        for side in &self.sides {
            for &e in side {
                g[e] += 1;
            }
        }
        g
    }

    /// The cone of BZ triangles, graded by total boundary degree.
    pub fn cone(&self) -> IntegerCone {
        IntegerCone::new(self.num_entries(), self.hexagon_constraints())
            .and_then(|c| c.with_grading(self.boundary_grading()))
            .expect("diagram constraints have matching dimensions")
    }

    /// Rows of the boundary map, side 1 first.
    pub fn boundary_map_rows(&self) -> Vec<Vec<i64>> {
        (1..=3)
            .flat_map(|s| self.boundary_rows(s).expect("valid side"))
            .collect()
    }

    /// All BZ triangles with the given boundary weights.
    pub fn fiber(&self, boundary: &WeightVector) -> Result<Vec<BzWeighting>, BzError> {
        let target = self.boundary_target(boundary)?;
        Ok(self
            .cone()
            .fiber_points(&self.boundary_map_rows(), &target)?
            .into_iter()
            .map(|values| BzWeighting { m: self.m, values })
            .collect())
    }

    pub fn count_fiber(&self, boundary: &WeightVector) -> Result<u64, BzError> {
        let target = self.boundary_target(boundary)?;
        Ok(self.cone().count_fiber(&self.boundary_map_rows(), &target)?)
    }

    fn boundary_target(&self, boundary: &WeightVector) -> Result<Vec<i64>, BzError> {
        if boundary.len() != 3 || boundary.rank() != self.m - 1 {
            return Err(BzError::WrongLength {
                expected: 3 * (self.m - 1),
                got: boundary.flatten().len(),
            });
        }
        Ok(boundary.flatten())
    }

    pub fn zero(&self) -> BzWeighting {
        BzWeighting {
            m: self.m,
            values: vec![0; self.num_entries()],
        }
    }

    pub fn weighting(&self, values: Vec<i64>) -> Result<BzWeighting, BzError> {
        if values.len() != self.num_entries() {
            return Err(BzError::WrongLength {
                expected: self.num_entries(),
                got: values.len(),
            });
        }
        if let Some(i) = values.iter().position(|&v| v < 0) {
            return Err(BzError::Negative(self.vertex_id(i)));
        }
        let w = BzWeighting { m: self.m, values };
        for (h, hex) in self.hexagons.iter().enumerate() {
            let x = |k: usize| w.values[hex[k % 6]];
            if (0..3).any(|k| x(k) + x(k + 1) != x(k + 3) + x(k + 4)) {
                return Err(BzError::Hexagon(h));
            }
        }
        Ok(w)
    }

    /// The first indecomposable triangle, in degree-then-lexicographic order
    /// up to `max_degree`, with a side weight that is neither zero nor
    /// fundamental.
    pub fn nonfundamental_generator(&self, max_degree: i64) -> Result<Option<BzWeighting>, BzError> {
        let cone = self.cone();
        for x in cone.graded_indecomposables(max_degree)? {
            let w = BzWeighting { m: self.m, values: x };
            if w.boundary(self).entries().iter().any(|l| !l.is_fundamental_or_zero()) {
                return Ok(Some(w));
            }
        }
        Ok(None)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let ids = |v: &[usize]| v.iter().map(|&i| self.vertex_id(i)).collect::<Vec<_>>();
        serde_json::json!({
            "m": self.m,
            "vertices": (0..self.num_entries()).map(|i| self.vertex_id(i)).collect::<Vec<_>>(),
            "hexagons": self.hexagons.iter().map(|h| ids(h)).collect::<Vec<_>>(),
            "corners": ids(&self.corners),
            "sides": self.sides.iter().map(|s| ids(s)).collect::<Vec<_>>(),
        })
    }
}

impl fmt::Display for BzDiagram {
    /// Text picture: one line per row of grid points, listing the entry ids
    /// of the edges leaving each point towards the next row.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BZ diagram for sl_{}: {} entries, {} hexagons", self.m, self.num_entries(), self.hexagons.len())?;
        for (s, side) in self.sides.iter().enumerate() {
            let ids: Vec<String> = side.iter().map(|&i| i.to_string()).collect();
            writeln!(f, "side {}: {}", s + 1, ids.join(" "))?;
        }
        for (h, hex) in self.hexagons.iter().enumerate() {
            let c = self.centers[h];
            let ids: Vec<String> = hex.iter().map(|&i| i.to_string()).collect();
            writeln!(f, "hexagon at ({},{},{}): {}", c[0], c[1], c[2], ids.join(" "))?;
        }
        Ok(())
    }
}

/// Nonnegative integer weighting of the entries of a BZ diagram.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BzWeighting {
    m: usize,
    values: Point,
}

impl BzWeighting {
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn into_values(self) -> Point {
        self.values
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0)
    }

    pub fn add(&self, other: &BzWeighting) -> BzWeighting {
        assert_eq!(self.m, other.m);
        BzWeighting {
            m: self.m,
            values: self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect(),
        }
    }

    /// Side weight with ω_i coefficient `a_{2i-1} + a_{2i}`.
    pub fn boundary_weight(&self, d: &BzDiagram, side: usize) -> Result<DominantWeight, BzError> {
        let reading = d.side(side)?;
        Ok(DominantWeight::new(
            reading
                .chunks(2)
                .map(|p| (self.values[p[0]] + self.values[p[1]]) as u32)
                .collect(),
        ))
    }

    pub fn boundary(&self, d: &BzDiagram) -> WeightVector {
        WeightVector::new(
            (1..=3)
                .map(|s| self.boundary_weight(d, s).expect("valid side"))
                .collect(),
        )
        .expect("side weights share a rank")
    }

    pub fn to_json(&self, d: &BzDiagram) -> serde_json::Value {
        let map: BTreeMap<String, i64> = self
            .values
            .iter()
            .enumerate()
            .map(|(i, &v)| (d.vertex_id(i), v))
            .collect();
        serde_json::to_value(map).expect("string keys")
    }

    /// Reads a vertex-id map. Missing ids count as zero.
    pub fn from_json(d: &BzDiagram, v: &serde_json::Value) -> Result<Self, BzError> {
        let map: BTreeMap<String, i64> =
            serde_json::from_value(v.clone()).map_err(|e| BzError::Json(e.to_string()))?;
        let mut values = vec![0; d.num_entries()];
        for (k, x) in map {
            values[d.parse_vertex_id(&k)?] = x;
        }
        d.weighting(values)
    }
}

/// The eight indecomposable sl_3 triangles.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sl3Piece {
    /// Boundary `(ω1, ω1, ω1)`.
    X,
    /// Boundary `(ω2, ω2, ω2)`.
    Y,
    /// ω1 on side `i`, ω2 on side `j`, zero on the third side (1-based).
    P(u8, u8),
}

impl Sl3Piece {
    pub const ALL: [Sl3Piece; 8] = [
        Sl3Piece::X,
        Sl3Piece::Y,
        Sl3Piece::P(1, 2),
        Sl3Piece::P(2, 3),
        Sl3Piece::P(3, 1),
        Sl3Piece::P(2, 1),
        Sl3Piece::P(3, 2),
        Sl3Piece::P(1, 3),
    ];

    pub fn boundary(self) -> WeightVector {
        let w1 = DominantWeight::fundamental(2, 1);
        let w2 = DominantWeight::fundamental(2, 2);
        let z = DominantWeight::zero(2);
        let sides = match self {
            Sl3Piece::X => vec![w1.clone(), w1.clone(), w1],
            Sl3Piece::Y => vec![w2.clone(), w2.clone(), w2],
            Sl3Piece::P(i, j) => {
                let mut v = vec![z.clone(), z.clone(), z];
                v[i as usize - 1] = w1;
                v[j as usize - 1] = w2;
                v
            }
        };
        WeightVector::new(sides).expect("rank 2")
    }

    /// The unique triangle with this boundary.
    pub fn weighting(self, d: &BzDiagram) -> BzWeighting {
        assert_eq!(d.m(), 3, "sl_3 pieces live on the sl_3 diagram");
        let mut fiber = d.fiber(&self.boundary()).expect("rank matches");
        assert_eq!(fiber.len(), 1, "{self} has a unique triangle");
        fiber.pop().expect("nonempty")
    }

    /// Identifies a nonzero indecomposable sl_3 triangle by its boundary.
    pub fn classify(d: &BzDiagram, w: &BzWeighting) -> Option<Sl3Piece> {
        let b = w.boundary(d);
        Sl3Piece::ALL
            .into_iter()
            .find(|p| p.boundary() == b && p.weighting(d) == *w)
    }
}

impl fmt::Display for Sl3Piece {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sl3Piece::X => write!(f, "X"),
            Sl3Piece::Y => write!(f, "Y"),
            Sl3Piece::P(i, j) => write!(f, "P{i}{j}"),
        }
    }
}
