//! Moving planes and quadrics of degree `Q \ E_I`.
//!
//! `psi1` sends four elements of `S_{Q\E_I}` to `sum p_i x_i` in
//! `S_{2Q\E_I}`, `psi2` sends ten of them to `sum A_ij x_i x_j` in
//! `S_{3Q\E_I}`. Planes are the kernel of `psi1`; quadrics are a complement
//! of the planes' `X`-multiples inside the kernel of `psi2`.

use std::collections::HashMap;

use serde::Serialize;

use crate::chowform::{cofactor, extract_root, Diagnostics, ImplicitResult};
use crate::error::{Error, Result};
use crate::exact_algebra::{gcd_all, Monomial, Polynomial, Rational, Var};
use crate::exact_linalg::{
    det_poly, generic_rank, kernel_basis, maximal_minor, rank, Matrix, MinorLabel, PolyMatrix,
    RationalMatrix,
};
use crate::lattice_geometry::{edge_set_candidates, select_edge_set, DegreeSpec, EdgeSelection, GeometryError, LatticePoint};
use crate::oracle::verify_vanishing;
use crate::surface::{st_coefficients, Surface};

/// Index pairs `(i, j)`, `i <= j`, of the quadratic monomials `X_i X_j`.
pub const QUADRATIC_PAIRS: [(usize, usize); 10] = [
    (0, 0),
    (0, 1),
    (0, 2),
    (0, 3),
    (1, 1),
    (1, 2),
    (1, 3),
    (2, 2),
    (2, 3),
    (3, 3),
];

fn pair_index(i: usize, j: usize) -> usize {
    let (a, b) = if i <= j { (i, j) } else { (j, i) };
    QUADRATIC_PAIRS.iter().position(|&p| p == (a, b)).unwrap()
}

#[derive(Clone, Debug, PartialEq)]
pub struct MovingPlane {
    /// `A_1..A_4` over the basis of `S_{Q\E_I}`.
    pub coeffs: [Vec<Rational>; 4],
}

#[derive(Clone, Debug, PartialEq)]
pub struct MovingQuadric {
    /// One vector per entry of [`QUADRATIC_PAIRS`].
    pub coeffs: Vec<Vec<Rational>>,
}

fn x_var(i: usize) -> Polynomial {
    Polynomial::var(Var::XS[i])
}

impl MovingPlane {
    /// Coefficient of `x^alpha` as a linear form in `X1..X4`.
    pub fn form(&self, alpha: usize) -> Polynomial {
        let mut out = Polynomial::zero();
        for (i, a) in self.coeffs.iter().enumerate() {
            out += &x_var(i).scale(&a[alpha]);
        }
        out
    }

    /// Coordinates of `X_j` times this plane as a quadric.
    pub fn times_x(&self, j: usize) -> MovingQuadric {
        let n = self.coeffs[0].len();
        let mut coeffs = vec![vec![Rational::from_integer(0.into()); n]; 10];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (k, v) in a.iter().enumerate() {
                coeffs[pair_index(i, j)][k] += v;
            }
        }
        MovingQuadric { coeffs }
    }
}

impl MovingQuadric {
    /// Coefficient of `x^alpha` as a quadratic form in `X1..X4`.
    pub fn form(&self, alpha: usize) -> Polynomial {
        let mut out = Polynomial::zero();
        for (k, &(i, j)) in QUADRATIC_PAIRS.iter().enumerate() {
            out += &(&x_var(i) * &x_var(j)).scale(&self.coeffs[k][alpha]);
        }
        out
    }

    fn flat(&self) -> Vec<Rational> {
        self.coeffs.concat()
    }
}

fn index_of(basis: &[LatticePoint]) -> HashMap<LatticePoint, usize> {
    basis.iter().enumerate().map(|(i, &p)| (p, i)).collect()
}

fn products(surface: &Surface) -> Vec<Vec<(LatticePoint, Rational)>> {
    let x = surface.x();
    QUADRATIC_PAIRS
        .iter()
        .map(|&(i, j)| flat_support(&(&x[i] * &x[j])))
        .collect()
}

fn flat_support(p: &Polynomial) -> Vec<(LatticePoint, Rational)> {
    st_coefficients(p)
        .into_iter()
        .map(|(q, c)| (q, c.constant_term()))
        .collect()
}

/// Matrix of `(p_k) -> sum p_k g_k` from copies of `source` into `target`.
fn multiplication_matrix(
    gens: &[Vec<(LatticePoint, Rational)>],
    source: &[LatticePoint],
    target: &[LatticePoint],
) -> Result<RationalMatrix> {
    let tindex = index_of(target);
    let n = source.len();
    let zero = Rational::from_integer(0.into());
    let mut m = Matrix::filled(
        zero,
        (0..target.len()).collect(),
        (0..gens.len() * n).collect(),
    );
    for (k, g) in gens.iter().enumerate() {
        for (a, alpha) in source.iter().enumerate() {
            for (q, c) in g {
                let Some(&row) = tindex.get(&alpha.add(q)) else {
                    return Err(GeometryError::AssumptionViolated(format!(
                        "product monomial {} leaves the target degree",
                        alpha.add(q)
                    ))
                    .into());
                };
                *m.get_mut(row, k * n + a) += c;
            }
        }
    }
    Ok(m)
}

/// Degree pieces used by both maps.
pub struct MqSpaces {
    pub selection: EdgeSelection,
    pub basis: Vec<LatticePoint>,
    pub double: Vec<LatticePoint>,
    pub triple: Vec<LatticePoint>,
}

impl MqSpaces {
    pub fn new(surface: &Surface, edges: Option<&[usize]>) -> Result<MqSpaces> {
        let q = surface.polygon();
        let selection = select_edge_set(q, edges)?;
        let piece = |k| DegreeSpec::pushed(q, k, &selection.edges).basis().to_vec();
        Ok(MqSpaces {
            basis: piece(1),
            double: piece(2),
            triple: piece(3),
            selection,
        })
    }
}

pub fn build_psi1(surface: &Surface, spaces: &MqSpaces) -> Result<RationalMatrix> {
    let gens: Vec<_> = surface.x().iter().map(flat_support).collect();
    multiplication_matrix(&gens, &spaces.basis, &spaces.double)
}

pub fn build_psi2(surface: &Surface, spaces: &MqSpaces) -> Result<RationalMatrix> {
    multiplication_matrix(&products(surface), &spaces.basis, &spaces.triple)
}

pub fn moving_planes(surface: &Surface, spaces: &MqSpaces) -> Result<Vec<MovingPlane>> {
    let n = spaces.basis.len();
    Ok(kernel_basis(&build_psi1(surface, spaces)?)
        .into_iter()
        .map(|v| MovingPlane {
            coeffs: std::array::from_fn(|i| v[i * n..(i + 1) * n].to_vec()),
        })
        .collect())
}

/// Quadrics completing the `X`-multiples of `planes` to a basis of the
/// kernel of `psi2`. The flag reports whether those multiples were
/// independent.
pub fn moving_quadrics_complement(
    surface: &Surface,
    spaces: &MqSpaces,
    planes: &[MovingPlane],
) -> Result<(Vec<MovingQuadric>, bool)> {
    let n = spaces.basis.len();
    let image: Vec<Vec<Rational>> = planes
        .iter()
        .flat_map(|p| (0..4).map(move |j| p.times_x(j).flat()))
        .collect();
    let injective = image.is_empty() || rank(&Matrix::from_rows(image.clone())) == image.len();
    let kernel = kernel_basis(&build_psi2(surface, spaces)?);
    let mut stacked = image;
    let mut current = if stacked.is_empty() { 0 } else { rank(&Matrix::from_rows(stacked.clone())) };
    let mut out = Vec::new();
    for v in kernel {
        stacked.push(v.clone());
        let r = rank(&Matrix::from_rows(stacked.clone()));
        if r > current {
            current = r;
            out.push(MovingQuadric {
                coeffs: (0..10).map(|k| v[k * n..(k + 1) * n].to_vec()).collect(),
            });
        } else {
            stacked.pop();
        }
    }
    Ok((out, injective))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum MqLabel {
    Plane(usize),
    Quadric(usize),
    Monomial(LatticePoint),
}

impl MinorLabel for MqLabel {
    fn removable(&self) -> bool {
        matches!(self, MqLabel::Quadric(_))
    }
}

#[derive(Clone, Debug)]
pub struct MqMatrix {
    /// Affine entries (`X4 = 1`).
    pub matrix: PolyMatrix<MqLabel>,
    pub basis: Vec<LatticePoint>,
    pub planes: Vec<MovingPlane>,
    pub quadrics: Vec<MovingQuadric>,
}

impl MqMatrix {
    /// Row forms in `X1..X4` before dehomogenization.
    pub fn homogeneous_row(&self, r: usize) -> Vec<Polynomial> {
        let n = self.basis.len();
        match self.matrix.row_labels()[r] {
            MqLabel::Plane(k) => (0..n).map(|a| self.planes[k].form(a)).collect(),
            MqLabel::Quadric(k) => (0..n).map(|a| self.quadrics[k].form(a)).collect(),
            MqLabel::Monomial(_) => unreachable!("rows are planes or quadrics"),
        }
    }

    pub fn row_degrees(&self) -> Vec<u32> {
        self.matrix
            .row_labels()
            .iter()
            .map(|l| if matches!(l, MqLabel::Plane(_)) { 1 } else { 2 })
            .collect()
    }

    /// Whether `sum_alpha row[alpha](x) s^alpha` vanishes for every row.
    pub fn annihilates(&self, x: &[Polynomial; 4]) -> bool {
        (0..self.matrix.nrows()).all(|r| {
            let mut total = Polynomial::zero();
            for (a, form) in self.homogeneous_row(r).iter().enumerate() {
                let subs: Vec<(Var, Polynomial)> =
                    Var::XS.into_iter().zip(x.iter().cloned()).collect();
                let m = Monomial::st(self.basis[a].x as i32, self.basis[a].y as i32);
                total += &form.substitute(&subs).mul_monomial(&m);
            }
            total.is_zero()
        })
    }
}

pub fn assemble_mq_matrix(
    planes: Vec<MovingPlane>,
    quadrics: Vec<MovingQuadric>,
    basis: &[LatticePoint],
) -> MqMatrix {
    let mut rows: Vec<MqLabel> = (0..planes.len()).map(MqLabel::Plane).collect();
    rows.extend((0..quadrics.len()).map(MqLabel::Quadric));
    let cols: Vec<MqLabel> = basis.iter().map(|&p| MqLabel::Monomial(p)).collect();
    let mut m = Matrix::filled(Polynomial::zero(), rows, cols);
    for (k, p) in planes.iter().enumerate() {
        for a in 0..basis.len() {
            m.set(k, a, p.form(a).dehomogenize_x4());
        }
    }
    for (k, q) in quadrics.iter().enumerate() {
        for a in 0..basis.len() {
            m.set(planes.len() + k, a, q.form(a).dehomogenize_x4());
        }
    }
    MqMatrix {
        matrix: m,
        basis: basis.to_vec(),
        planes,
        quadrics,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct MqDiagnostics {
    pub edge_set: Vec<usize>,
    #[serde(rename = "B_I")]
    pub b_i: i64,
    pub planes: usize,
    pub quadrics: usize,
    pub predicted_planes: i64,
    pub predicted_quadrics: i64,
    pub square: bool,
    pub mp_max_rank: bool,
    pub injective: bool,
    pub generic_rank: usize,
    pub minors: usize,
    pub seed: u64,
}

/// Moving-surface matrix for a surface with the given (or automatic) edge
/// set, plus its diagnostics.
pub fn build_mq(surface: &Surface, edges: Option<&[usize]>, seed: u64) -> Result<(MqMatrix, MqDiagnostics)> {
    let spaces = MqSpaces::new(surface, edges)?;
    let q = surface.polygon();
    let planes = moving_planes(surface, &spaces)?;
    let (quadrics, injective) = moving_quadrics_complement(surface, &spaces, &planes)?;
    let b = q.boundary();
    let b_i = spaces.selection.b_i;
    let predicted_planes = b - 2 * b_i;
    let mp_max_rank = planes.len() as i64 == predicted_planes;
    let mq = assemble_mq_matrix(planes, quadrics, &spaces.basis);
    let diag = MqDiagnostics {
        edge_set: spaces.selection.edges.clone(),
        b_i,
        planes: mq.planes.len(),
        quadrics: mq.quadrics.len(),
        predicted_planes,
        predicted_quadrics: (q.area2() - b) / 2 + b_i,
        square: mq.matrix.is_square(),
        mp_max_rank,
        injective,
        generic_rank: 0,
        minors: 0,
        seed,
    };
    Ok((mq, diag))
}

/// `build_mq` on the preferred edge chain. If its planes fall short of the
/// predicted rank or the matrix is not square, the other admissible chains
/// are tried in order and the first well-shaped one wins.
pub fn choose_mq(surface: &Surface, seed: u64) -> Result<(MqMatrix, MqDiagnostics)> {
    let first = build_mq(surface, None, seed)?;
    if first.1.square && first.1.mp_max_rank {
        return Ok(first);
    }
    for sel in edge_set_candidates(surface.polygon()).iter().skip(1) {
        if let Ok(found) = build_mq(surface, Some(&sel.edges), seed) {
            if found.1.square && found.1.mp_max_rank {
                return Ok(found);
            }
        }
    }
    Ok(first)
}

const MAX_MINORS: usize = 4;

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    if k > n {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut c: Vec<usize> = (0..k).collect();
    loop {
        out.push(c.clone());
        let Some(i) = (0..k).rev().find(|&i| c[i] != i + n - k) else {
            return out;
        };
        c[i] += 1;
        for j in i + 1..k {
            c[j] = c[j - 1] + 1;
        }
    }
}

/// Nonzero maximal-minor determinants, keeping all plane rows when possible.
fn minor_determinants(mq: &MqMatrix, r: usize, seed: u64) -> Result<Vec<Polynomial>> {
    let m = &mq.matrix;
    let np = mq.planes.len();
    let all_cols: Vec<usize> = (0..m.ncols()).collect();
    let mut dets = Vec::new();
    if np <= r {
        for combo in combinations(mq.quadrics.len(), r - np) {
            let rows: Vec<usize> = (0..np).chain(combo.iter().map(|&k| np + k)).collect();
            let sub = m.submatrix(&rows, &all_cols);
            let det = if sub.is_square() {
                det_poly(&sub)?
            } else {
                let labels = sub.row_labels().to_vec();
                match maximal_minor(&sub, &labels, &[], seed) {
                    Ok(minor) => minor.det,
                    Err(_) => continue,
                }
            };
            if !det.is_zero() {
                dets.push(det);
                if dets.len() == MAX_MINORS {
                    break;
                }
            }
        }
    }
    if dets.is_empty() {
        for k in 0..MAX_MINORS as u64 {
            if let Ok(minor) = maximal_minor(m, &[], &[], seed.wrapping_add(k)) {
                if !dets.contains(&minor.det) {
                    dets.push(minor.det);
                }
            }
        }
    }
    Ok(dets)
}

pub fn implicitize_mq(surface: &Surface, seed: u64) -> Result<ImplicitResult> {
    implicitize_mq_with(surface, None, seed)
}

pub fn implicitize_mq_with(surface: &Surface, edges: Option<&[usize]>, seed: u64) -> Result<ImplicitResult> {
    let (mq, mut diag) = match edges {
        Some(e) => build_mq(surface, Some(e), seed)?,
        None => choose_mq(surface, seed)?,
    };
    let m = &mq.matrix;
    if m.nrows() == 0 || m.ncols() == 0 {
        return Err(Error::NotImplicitizable("no moving planes or quadrics".into()));
    }
    let r = generic_rank(m, 3, seed);
    diag.generic_rank = r;
    let full = m.is_square() && r == m.nrows();
    let candidate = if full {
        diag.minors = 1;
        det_poly(m)?
    } else {
        let dets = minor_determinants(&mq, r, seed)?;
        diag.minors = dets.len();
        if dets.is_empty() {
            return Err(Error::NotImplicitizable("every maximal minor vanishes".into()));
        }
        gcd_all(&dets)?
    };
    if candidate.is_zero() || candidate.is_constant() {
        return Err(Error::NotImplicitizable("moving-surface determinant is constant".into()));
    }
    let candidate = candidate.normalize();
    let (implicit, d) = extract_root(&candidate)?;
    if !verify_vanishing(&implicit, surface.x(), 4) {
        return Err(Error::VerificationFailed(format!(
            "moving-surface candidate {implicit} does not vanish on the parameterization"
        )));
    }
    let extraneous = cofactor(&candidate, &implicit, d);
    let bp = surface.polygon().area2() - i64::from(d) * i64::from(implicit.total_degree());
    Ok(ImplicitResult {
        implicit,
        exponent_d: d,
        extraneous,
        basepoint_degree: bp.max(0) as usize,
        candidate,
        diagnostics: Diagnostics::Mq(diag),
    })
}
