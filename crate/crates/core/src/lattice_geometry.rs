//! Newton polygons, lattice-point sets of graded pieces, Ehrhart counts and
//! edge-chain selection.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact_algebra::{ratio, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeometryError {
    #[error("degenerate support: the convex hull is {0}")]
    DegenerateSupport(&'static str),
    #[error("edge selection violates the chain assumption: {0}")]
    AssumptionViolated(String),
}

/// Integer point. Ordered lexicographically by `(y, x)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LatticePoint {
    pub x: i64,
    pub y: i64,
}

impl LatticePoint {
    pub const fn new(x: i64, y: i64) -> Self {
        Self { x, y }
    }

    pub fn dot(&self, eta: (i64, i64)) -> i64 {
        self.x * eta.0 + self.y * eta.1
    }

    pub fn add(&self, o: &LatticePoint) -> LatticePoint {
        LatticePoint::new(self.x + o.x, self.y + o.y)
    }

    pub fn sub(&self, o: &LatticePoint) -> LatticePoint {
        LatticePoint::new(self.x - o.x, self.y - o.y)
    }
}

impl Ord for LatticePoint {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.y, self.x).cmp(&(other.y, other.x))
    }
}

impl PartialOrd for LatticePoint {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl std::fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

pub fn pt(x: i64, y: i64) -> LatticePoint {
    LatticePoint::new(x, y)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    /// Primitive inner normal.
    pub eta: (i64, i64),
    /// `Q = { m : <m, eta> >= -offset }`.
    pub offset: i64,
    pub length: i64,
    #[serde(skip)]
    pub start: LatticePoint,
    #[serde(skip)]
    pub end: LatticePoint,
}

impl Edge {
    pub fn contains(&self, p: &LatticePoint) -> bool {
        p.dot(self.eta) == -self.offset
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polygon {
    vertices: Vec<LatticePoint>,
    edges: Vec<Edge>,
}

fn cross(o: &LatticePoint, a: &LatticePoint, b: &LatticePoint) -> i64 {
    (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x)
}

impl Polygon {
    /// Convex hull of a point set; vertices counterclockwise starting from the
    /// `(y, x)`-smallest vertex.
    pub fn hull(points: &[LatticePoint]) -> Result<Polygon, GeometryError> {
        let mut pts: Vec<LatticePoint> = points.to_vec();
        pts.sort_by_key(|p| (p.x, p.y));
        pts.dedup();
        if pts.len() < 3 {
            return Err(GeometryError::DegenerateSupport(if pts.len() == 1 {
                "a point"
            } else {
                "a segment"
            }));
        }
        let mut lower: Vec<LatticePoint> = Vec::new();
        for p in &pts {
            while lower.len() >= 2 && cross(&lower[lower.len() - 2], &lower[lower.len() - 1], p) <= 0 {
                lower.pop();
            }
            lower.push(*p);
        }
        let mut upper: Vec<LatticePoint> = Vec::new();
        for p in pts.iter().rev() {
            while upper.len() >= 2 && cross(&upper[upper.len() - 2], &upper[upper.len() - 1], p) <= 0 {
                upper.pop();
            }
            upper.push(*p);
        }
        lower.pop();
        upper.pop();
        let mut v: Vec<LatticePoint> = lower.into_iter().chain(upper).collect();
        if v.len() < 3 {
            return Err(GeometryError::DegenerateSupport("a segment"));
        }
        let start = (0..v.len()).min_by_key(|&i| v[i]).unwrap();
        v.rotate_left(start);
        Ok(Polygon::from_ccw(v))
    }

    fn from_ccw(vertices: Vec<LatticePoint>) -> Polygon {
        let n = vertices.len();
        let edges = (0..n)
            .map(|i| {
                let a = vertices[i];
                let b = vertices[(i + 1) % n];
                let (dx, dy) = (b.x - a.x, b.y - a.y);
                let g = dx.gcd(&dy);
                let eta = (-dy / g, dx / g);
                Edge {
                    eta,
                    offset: -a.dot(eta),
                    length: g,
                    start: a,
                    end: b,
                }
            })
            .collect();
        Polygon { vertices, edges }
    }

    pub fn vertices(&self) -> &[LatticePoint] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Twice the Euclidean area (the normalized area).
    pub fn area2(&self) -> i64 {
        let n = self.vertices.len();
        (0..n)
            .map(|i| {
                let (a, b) = (self.vertices[i], self.vertices[(i + 1) % n]);
                a.x * b.y - a.y * b.x
            })
            .sum()
    }

    /// Euclidean area `A`.
    pub fn area(&self) -> Rational {
        ratio(self.area2(), 2)
    }

    /// Boundary lattice-point count `B`.
    pub fn boundary(&self) -> i64 {
        self.edges.iter().map(|e| e.length).sum()
    }

    pub fn contains(&self, p: &LatticePoint) -> bool {
        self.edges.iter().all(|e| p.dot(e.eta) >= -e.offset)
    }

    pub fn translate(&self, by: &LatticePoint) -> Polygon {
        Polygon::from_ccw(self.vertices.iter().map(|v| v.add(by)).collect())
    }

    pub fn lattice_points(&self) -> Vec<LatticePoint> {
        DegreeSpec::scaled(self, 1).basis().to_vec()
    }

    pub fn interior_points(&self) -> Vec<LatticePoint> {
        DegreeSpec::interior(self, 1).basis().to_vec()
    }

    pub fn to_json(&self) -> PolygonJson {
        PolygonJson {
            vertices: self.vertices.iter().map(|v| (v.x, v.y)).collect(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeJson {
                    eta: e.eta,
                    offset: e.offset,
                    length: e.length,
                })
                .collect(),
            area2: self.area2(),
            boundary: self.boundary(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeJson {
    pub eta: (i64, i64),
    pub offset: i64,
    pub length: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolygonJson {
    pub vertices: Vec<(i64, i64)>,
    pub edges: Vec<EdgeJson>,
    pub area2: i64,
    pub boundary: i64,
}

pub fn newton_polygon(supports: &[Vec<LatticePoint>]) -> Result<Polygon, GeometryError> {
    let all: Vec<LatticePoint> = supports.iter().flatten().copied().collect();
    if all.is_empty() {
        return Err(GeometryError::DegenerateSupport("empty"));
    }
    Polygon::hull(&all)
}

/// A graded piece: all lattice points with `<m, eta_i> >= -b_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeSpec {
    offsets: Vec<i64>,
    basis: Vec<LatticePoint>,
}

impl DegreeSpec {
    pub fn new(q: &Polygon, offsets: Vec<i64>) -> DegreeSpec {
        assert_eq!(offsets.len(), q.edges.len());
        let basis = enumerate(q, &offsets);
        DegreeSpec { offsets, basis }
    }

    /// `kQ`.
    pub fn scaled(q: &Polygon, k: i64) -> DegreeSpec {
        DegreeSpec::new(q, q.edges.iter().map(|e| k * e.offset).collect())
    }

    /// `int(kQ)`: every edge pushed in by one.
    pub fn interior(q: &Polygon, k: i64) -> DegreeSpec {
        DegreeSpec::new(q, q.edges.iter().map(|e| k * e.offset - 1).collect())
    }

    /// `kQ \ E_I`: the selected edges pushed in by one.
    pub fn pushed(q: &Polygon, k: i64, selected: &[usize]) -> DegreeSpec {
        let offsets = q
            .edges
            .iter()
            .enumerate()
            .map(|(i, e)| k * e.offset - i64::from(selected.contains(&i)))
            .collect();
        DegreeSpec::new(q, offsets)
    }

    pub fn offsets(&self) -> &[i64] {
        &self.offsets
    }

    pub fn basis(&self) -> &[LatticePoint] {
        &self.basis
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }
}

/// Lattice points of the graded piece, ordered by `(y, x)`.
pub fn lattice_points(spec: &DegreeSpec) -> Vec<LatticePoint> {
    spec.basis.clone()
}

fn enumerate(q: &Polygon, offsets: &[i64]) -> Vec<LatticePoint> {
    // Every vertex of the region is an intersection of two edge lines, so the
    // hull of all pairwise intersections bounds it.
    let lines: Vec<((i64, i64), i64)> = q
        .edges
        .iter()
        .zip(offsets)
        .map(|(e, &b)| (e.eta, -b))
        .collect();
    let (mut xmin, mut xmax, mut ymin, mut ymax) = (i64::MAX, i64::MIN, i64::MAX, i64::MIN);
    for i in 0..lines.len() {
        for j in i + 1..lines.len() {
            let ((a1, b1), c1) = lines[i];
            let ((a2, b2), c2) = lines[j];
            let det = a1 * b2 - a2 * b1;
            if det == 0 {
                continue;
            }
            let xn = c1 * b2 - c2 * b1;
            let yn = a1 * c2 - a2 * c1;
            let floor = |n: i64| Integer::div_floor(&n, &det);
            let ceil = |n: i64| -Integer::div_floor(&-n, &det);
            xmin = xmin.min(floor(xn));
            xmax = xmax.max(ceil(xn));
            ymin = ymin.min(floor(yn));
            ymax = ymax.max(ceil(yn));
        }
    }
    let mut out = Vec::new();
    if xmin > xmax {
        return out;
    }
    for y in ymin..=ymax {
        for x in xmin..=xmax {
            let p = pt(x, y);
            if lines.iter().all(|(eta, c)| p.dot(*eta) >= *c) {
                out.push(p);
            }
        }
    }
    out
}

/// Ehrhart counts of `kQ` by formula: `(total, boundary, interior)`.
pub fn ehrhart_counts(q: &Polygon, k: i64) -> (i64, i64, i64) {
    let (a2, b) = (q.area2(), q.boundary());
    let total = (a2 * k * k + b * k) / 2 + 1;
    let interior = (a2 * k * k - b * k) / 2 + 1;
    (total, b * k, interior)
}

/// Ehrhart counts of `kQ` by enumeration.
pub fn enumerate_counts(q: &Polygon, k: i64) -> (i64, i64, i64) {
    let total = DegreeSpec::scaled(q, k).len() as i64;
    let interior = DegreeSpec::interior(q, k).len() as i64;
    (total, total - interior, interior)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EdgeSelection {
    pub edges: Vec<usize>,
    pub b_i: i64,
}

fn chain(n: usize, start: usize, len: usize) -> Vec<usize> {
    (0..len).map(|j| (start + j) % n).collect()
}

fn is_connected_chain(n: usize, set: &BTreeSet<usize>) -> bool {
    (0..n).any(|start| {
        let c: BTreeSet<usize> = chain(n, start, set.len()).into_iter().collect();
        c == *set
    })
}

/// Choose `E_I`: a connected edge chain maximizing `B_I` subject to
/// `B >= 2 B_I`, or validate an explicit choice.
pub fn select_edge_set(
    q: &Polygon,
    override_edges: Option<&[usize]>,
) -> Result<EdgeSelection, GeometryError> {
    let n = q.edges.len();
    let b = q.boundary();
    let len_of = |set: &[usize]| set.iter().map(|&i| q.edges[i].length).sum::<i64>();
    if let Some(given) = override_edges {
        let set: BTreeSet<usize> = given.iter().copied().collect();
        if set.is_empty() || set.len() >= n || set.iter().any(|&i| i >= n) {
            return Err(GeometryError::AssumptionViolated(format!(
                "{given:?} is not a nonempty proper subset of the {n} edges"
            )));
        }
        if !is_connected_chain(n, &set) {
            return Err(GeometryError::AssumptionViolated(format!(
                "edges {given:?} do not form a connected chain"
            )));
        }
        let edges: Vec<usize> = set.into_iter().collect();
        let b_i = len_of(&edges);
        if b < 2 * b_i {
            return Err(GeometryError::AssumptionViolated(format!(
                "B = {b} < 2 B_I = {}",
                2 * b_i
            )));
        }
        return Ok(EdgeSelection { edges, b_i });
    }
    Ok(edge_set_candidates(q)
        .into_iter()
        .next()
        .expect("the shortest edge always satisfies B >= 2 B_I"))
}

/// Every connected chain with `B >= 2 B_I`, longest `B_I` first.
pub fn edge_set_candidates(q: &Polygon) -> Vec<EdgeSelection> {
    let n = q.edges.len();
    let b = q.boundary();
    let mut out: Vec<EdgeSelection> = Vec::new();
    for start in 0..n {
        for len in 1..n {
            let mut edges = chain(n, start, len);
            let b_i: i64 = edges.iter().map(|&i| q.edges[i].length).sum();
            edges.sort_unstable();
            if 2 * b_i <= b && !out.iter().any(|e| e.edges == edges) {
                out.push(EdgeSelection { edges, b_i });
            }
        }
    }
    out.sort_by_key(|e| std::cmp::Reverse(e.b_i));
    out
}

/// Genericity test: every edge of `Q` must contain a point of
/// at least two of the supports. Returns the first violating edge index.
pub fn basepoint_free_check(supports: &[Vec<LatticePoint>]) -> Result<(bool, Option<usize>), GeometryError> {
    let q = newton_polygon(supports)?;
    for (i, e) in q.edges.iter().enumerate() {
        let hits = supports
            .iter()
            .filter(|s| s.iter().any(|p| e.contains(p)))
            .count();
        if hits < 2 {
            return Ok((false, Some(i)));
        }
    }
    Ok((true, None))
}

/// `deg_phi * deg_P == 2A - basepoint_degree`.
pub fn degree_formula_check(q: &Polygon, deg_p: i64, deg_phi: i64, basepoint_degree: i64) -> bool {
    deg_phi * deg_p == q.area2() - basepoint_degree
}
