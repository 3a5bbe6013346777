//! Hybrid Chow-form matrix `[[B, L], [L~, 0]]` for `f_i = x_i - X_i x_4`
//! and implicitization through its determinant or maximal minors.

mod weights;

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

pub use weights::{bracket_weights, BracketWeights, WeightTerm};

use crate::error::{Error, Result};
use crate::exact_algebra::{gcd_all, poly_gcd, AlgebraError, Polynomial, Rational};
use crate::exact_linalg::{
    det_poly, generic_rank, maximal_minor, LinalgError, Matrix, MinorLabel, PolyMatrix,
};
use crate::lattice_geometry::{GeometryError, LatticePoint, Polygon};
use crate::moving_surfaces::{implicitize_mq, MqDiagnostics};
use crate::oracle::{sample_surface, verify_vanishing};
use crate::surface::{st_coefficients, Surface};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ChowLabel {
    Bezout(LatticePoint),
    Sylvester(usize),
    Point(LatticePoint),
    Pair(usize, LatticePoint),
}

impl MinorLabel for ChowLabel {
    fn removable(&self) -> bool {
        matches!(self, ChowLabel::Bezout(_) | ChowLabel::Point(_))
    }
}

fn write_st(f: &mut fmt::Formatter<'_>, p: &LatticePoint) -> fmt::Result {
    match (p.x, p.y) {
        (0, 0) => f.write_str("1"),
        (x, 0) => write_pow(f, "s", x),
        (0, y) => write_pow(f, "t", y),
        (x, y) => {
            write_pow(f, "s", x)?;
            write_pow(f, "t", y)
        }
    }
}

fn write_pow(f: &mut fmt::Formatter<'_>, v: &str, e: i64) -> fmt::Result {
    if e == 1 {
        f.write_str(v)
    } else {
        write!(f, "{v}^{e}")
    }
}

impl fmt::Display for ChowLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChowLabel::Bezout(b) => write!(f, "bezout{b}"),
            ChowLabel::Sylvester(i) => write!(f, "f{}", i + 1),
            ChowLabel::Point(a) => write_st(f, a),
            ChowLabel::Pair(i, a) => {
                write_st(f, a)?;
                write!(f, "*f{}", i + 1)
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct ChowMatrix {
    pub matrix: PolyMatrix<ChowLabel>,
    /// Exponent of the monomial divided out of the input.
    pub translation: LatticePoint,
    pub polygon: Polygon,
}

impl ChowMatrix {
    pub fn size(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn sylvester_rows(&self) -> Vec<ChowLabel> {
        (0..3).map(ChowLabel::Sylvester).collect()
    }

    pub fn pair_cols(&self) -> Vec<ChowLabel> {
        self.matrix
            .col_labels()
            .iter()
            .copied()
            .filter(|l| matches!(l, ChowLabel::Pair(..)))
            .collect()
    }
}

fn det3(m: [[&Polynomial; 3]; 3]) -> Polynomial {
    let minor = |a: usize, b: usize, c: usize, d: usize| {
        m[1][a] * m[2][b] - m[1][c] * m[2][d]
    };
    let mut out = Polynomial::zero();
    if !m[0][0].is_zero() {
        out += &(m[0][0] * &minor(1, 2, 2, 1));
    }
    if !m[0][1].is_zero() {
        out -= &(m[0][1] * &minor(0, 2, 2, 0));
    }
    if !m[0][2].is_zero() {
        out += &(m[0][2] * &minor(0, 1, 1, 0));
    }
    out
}

/// Bezout rows (`int(2Q)`) against Point columns (`Q`) for polynomials
/// `f_1, f_2, f_3` in `s, t` with coefficients in `X`.
pub fn bezout_block(f: &[Polynomial; 3], q: &Polygon) -> Result<PolyMatrix<ChowLabel>> {
    let w = bracket_weights(q)?;
    let coeffs = f.each_ref().map(st_coefficients);
    for c in &coeffs {
        if let Some(p) = c.keys().find(|p| !q.contains(p)) {
            return Err(GeometryError::AssumptionViolated(format!(
                "support point {p} lies outside the polygon"
            ))
            .into());
        }
    }
    let zero = Polynomial::zero();
    let coeff = |i: usize, p: &LatticePoint| coeffs[i].get(p).unwrap_or(&zero);
    let mut brackets: HashMap<[usize; 3], Polynomial> = HashMap::new();
    let mut block = Matrix::filled(
        Polynomial::zero(),
        w.int2.iter().map(|&b| ChowLabel::Bezout(b)).collect(),
        w.points.iter().map(|&a| ChowLabel::Point(a)).collect(),
    );
    for term in &w.terms {
        let br = brackets.entry(term.tri).or_insert_with(|| {
            let pts = term.tri.map(|k| &w.points[k]);
            det3([0, 1, 2].map(|i| pts.map(|p| coeff(i, p))))
        });
        if br.is_zero() {
            continue;
        }
        let add = br.scale(&Rational::from_integer(term.weight.clone()));
        *block.get_mut(term.beta, term.alpha) += &add;
    }
    Ok(block)
}

/// Assemble the square hybrid matrix for the parameterization.
pub fn build_chow_matrix(surface: &Surface) -> Result<ChowMatrix> {
    let q = surface.polygon();
    let f = surface.fs();
    let block = bezout_block(&f, q)?;
    let w = bracket_weights(q)?;
    let coeffs = f.each_ref().map(st_coefficients);
    let mut rows: Vec<ChowLabel> = block.row_labels().to_vec();
    rows.extend((0..3).map(ChowLabel::Sylvester));
    let mut cols: Vec<ChowLabel> = block.col_labels().to_vec();
    for a in &w.interior {
        cols.extend((0..3).map(|i| ChowLabel::Pair(i, *a)));
    }
    if rows.len() != cols.len() {
        return Err(GeometryError::AssumptionViolated(format!(
            "hybrid matrix is {} x {}",
            rows.len(),
            cols.len()
        ))
        .into());
    }
    let mut m = Matrix::filled(Polynomial::zero(), rows.clone(), cols.clone());
    for (r, row) in rows.iter().enumerate() {
        for (c, col) in cols.iter().enumerate() {
            let entry = match (row, col) {
                (ChowLabel::Bezout(_), ChowLabel::Point(_)) => block.get(r, c).clone(),
                (ChowLabel::Bezout(b), ChowLabel::Pair(i, a)) => {
                    coeffs[*i].get(&b.sub(a)).cloned().unwrap_or_else(Polynomial::zero)
                }
                (ChowLabel::Sylvester(i), ChowLabel::Point(a)) => {
                    coeffs[*i].get(a).cloned().unwrap_or_else(Polynomial::zero)
                }
                _ => continue,
            };
            m.set(r, c, entry);
        }
    }
    Ok(ChowMatrix {
        matrix: m,
        translation: surface.removed_content(),
        polygon: q.clone(),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct MinorRecord {
    pub dropped_rows: Vec<String>,
    pub dropped_cols: Vec<String>,
    pub det_degree: i32,
}

#[derive(Clone, Debug, Serialize)]
pub struct ChowDiagnostics {
    pub size: usize,
    pub generic_rank: usize,
    pub basepoint_degree: usize,
    pub sylvester_complete: bool,
    pub extraneous: Option<String>,
    pub seed: u64,
    pub minors: Vec<MinorRecord>,
    pub cross_checked: bool,
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "method", rename_all = "lowercase")]
pub enum Diagnostics {
    Chow(ChowDiagnostics),
    Mq(MqDiagnostics),
    Cross { sources: Vec<Diagnostics> },
}

#[derive(Clone, Debug, Serialize)]
pub struct ImplicitResult {
    /// Normalized implicit equation in `X1, X2, X3`.
    pub implicit: Polynomial,
    pub exponent_d: u32,
    pub extraneous: Option<Polynomial>,
    pub basepoint_degree: usize,
    /// The determinant or minor gcd the result was extracted from.
    pub candidate: Polynomial,
    pub diagnostics: Diagnostics,
}

impl ImplicitResult {
    pub fn degree(&self) -> i32 {
        self.implicit.total_degree()
    }
}

/// Split `c * P^d` into `(P, d)`. When the candidate is not a perfect power
/// the squarefree part is returned with the largest exponent dividing it.
pub(crate) fn extract_root(candidate: &Polynomial) -> Result<(Polynomial, u32)> {
    match candidate.power_root(None) {
        Ok(found) => Ok(found),
        Err(AlgebraError::NotPerfectPower) => {
            let root = candidate.squarefree_part()?;
            let mut rest = candidate.clone();
            let mut d = 0;
            while let Ok(q) = rest.exact_div(&root) {
                rest = q;
                d += 1;
            }
            Ok((root, d.max(1)))
        }
        Err(e) => Err(e.into()),
    }
}

/// The nonconstant part of `candidate / root^d`, if any.
pub(crate) fn cofactor(candidate: &Polynomial, root: &Polynomial, d: u32) -> Option<Polynomial> {
    let rest = candidate.exact_div(&root.pow(d)).ok()?;
    (!rest.is_constant()).then(|| rest.normalize())
}

fn record(m: &PolyMatrix<ChowLabel>, rows: &[usize], cols: &[usize], det: &Polynomial) -> MinorRecord {
    let dropped = |labels: &[ChowLabel], keep: &[usize]| {
        (0..labels.len())
            .filter(|i| !keep.contains(i))
            .map(|i| labels[i].to_string())
            .collect()
    };
    MinorRecord {
        dropped_rows: dropped(m.row_labels(), rows),
        dropped_cols: dropped(m.col_labels(), cols),
        det_degree: det.total_degree(),
    }
}

/// Determinants of Sylvester-row-complete minors, each leaving out one
/// required Sylvester column.
pub fn minors_without_each_pair(cm: &ChowMatrix, seed: u64) -> Vec<(ChowLabel, Polynomial, MinorRecord)> {
    let rows = cm.sylvester_rows();
    let pairs = cm.pair_cols();
    let mut out = Vec::new();
    for drop in &pairs {
        let cols: Vec<ChowLabel> = pairs.iter().copied().filter(|l| l != drop).collect();
        if let Ok(minor) = maximal_minor(&cm.matrix, &rows, &cols, seed) {
            let rec = record(&cm.matrix, &minor.rows, &minor.cols, &minor.det);
            out.push((*drop, minor.det, rec));
        }
    }
    out
}

pub fn implicitize_chow(surface: &Surface, seed: u64) -> Result<ImplicitResult> {
    let cm = build_chow_matrix(surface)?;
    let m = &cm.matrix;
    let n = cm.size();
    let rank = generic_rank(m, 3, seed);
    let mut diag = ChowDiagnostics {
        size: n,
        generic_rank: rank,
        basepoint_degree: n - rank,
        sylvester_complete: true,
        extraneous: None,
        seed,
        minors: Vec::new(),
        cross_checked: false,
    };
    let candidate = if rank == n {
        let det = det_poly(m)?;
        diag.minors.push(record(m, &(0..n).collect::<Vec<_>>(), &(0..n).collect::<Vec<_>>(), &det));
        det
    } else {
        let rows = cm.sylvester_rows();
        let cols = cm.pair_cols();
        let mut dets = Vec::new();
        match maximal_minor(m, &rows, &cols, seed) {
            Ok(minor) => {
                diag.minors.push(record(m, &minor.rows, &minor.cols, &minor.det));
                dets.push(minor.det);
            }
            Err(LinalgError::NoSuchMinor) => {
                diag.sylvester_complete = false;
                for (_, det, rec) in minors_without_each_pair(&cm, seed) {
                    diag.minors.push(rec);
                    dets.push(det);
                }
                if dets.is_empty() {
                    for (r, c) in [(rows.clone(), Vec::new()), (Vec::new(), Vec::new())] {
                        if let Ok(minor) = maximal_minor(m, &r, &c, seed) {
                            diag.minors.push(record(m, &minor.rows, &minor.cols, &minor.det));
                            dets.push(minor.det);
                            break;
                        }
                    }
                }
            }
            Err(e) => return Err(e.into()),
        }
        if dets.is_empty() {
            return Err(Error::NotImplicitizable("no nonsingular maximal minor".into()));
        }
        gcd_all(&dets)?
    };
    if candidate.is_zero() {
        return Err(Error::NotImplicitizable("hybrid determinant vanishes".into()));
    }
    let candidate = candidate.normalize();
    let (mut implicit, mut d) = extract_root(&candidate)?;
    let mut extraneous = None;
    if rank < n {
        // other minors share any extraneous factor, so compare with the
        // moving-surface determinant instead
        if let Ok(mq) = implicitize_mq(surface, seed) {
            let g = poly_gcd(&candidate, &mq.candidate)?;
            if !g.is_constant() {
                let (root, e) = extract_root(&g)?;
                if verify_vanishing(&root, surface.x(), 4) {
                    diag.cross_checked = true;
                    extraneous = cofactor(&candidate, &root, e);
                    implicit = root;
                    d = e;
                }
            }
        }
    }
    if !verify_vanishing(&implicit, surface.x(), 4) {
        return Err(Error::VerificationFailed(format!(
            "chow candidate {implicit} does not vanish on the parameterization"
        )));
    }
    diag.extraneous = extraneous.as_ref().map(ToString::to_string);
    Ok(ImplicitResult {
        implicit,
        exponent_d: d,
        extraneous,
        basepoint_degree: n - rank,
        candidate,
        diagnostics: Diagnostics::Chow(diag),
    })
}

/// Combine two results for the same surface: the root of the gcd of their
/// candidates, checked at 20 random parameter points.
pub fn cross_gcd(a: &ImplicitResult, b: &ImplicitResult, surface: &Surface, seed: u64) -> Result<ImplicitResult> {
    let g = poly_gcd(&a.candidate, &b.candidate)?;
    if g.is_constant() {
        return Err(Error::VerificationFailed("candidates are coprime".into()));
    }
    let (implicit, d) = extract_root(&g)?;
    let samples = sample_surface(surface.x(), 20, seed)?;
    for s in &samples {
        let v = implicit.eval_rational(&s.affine_binding())?;
        if !num_traits::Zero::is_zero(&v) {
            return Err(Error::VerificationFailed(format!(
                "gcd does not vanish at (s, t) = ({}, {})",
                s.s, s.t
            )));
        }
    }
    let extraneous = [a, b]
        .iter()
        .filter_map(|r| cofactor(&r.candidate, &implicit, d))
        .next();
    Ok(ImplicitResult {
        implicit,
        exponent_d: d,
        extraneous,
        basepoint_degree: a.basepoint_degree,
        candidate: g,
        diagnostics: Diagnostics::Cross {
            sources: vec![a.diagnostics.clone(), b.diagnostics.clone()],
        },
    })
}
