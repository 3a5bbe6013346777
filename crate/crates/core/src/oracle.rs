//! Independent implicitization by iterated Sylvester resultants, plus exact
//! vanishing checks and surface sampling.
//!
//! `R1 = Res_s(f_i, f_j)` and `R2 = Res_s(f_i, f_k)` are computed
//! symbolically. `Res_t(R1, R2)` is obtained by evaluating its Sylvester
//! determinant at integer points of a lower set of exponents bounded by the
//! resultant degree bounds and interpolating in the Newton basis.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exact_algebra::{gcd_all, Monomial, Polynomial, Rational, Var};
use crate::exact_linalg::{det_poly, Matrix};
use crate::surface::Surface;

#[derive(Clone, Debug, PartialEq)]
pub struct SurfaceSample {
    pub s: Rational,
    pub t: Rational,
    /// `(x1, x2, x3, x4)` at `(s, t)`.
    pub image: [Rational; 4],
}

impl SurfaceSample {
    pub fn affine(&self) -> [Rational; 3] {
        std::array::from_fn(|i| &self.image[i] / &self.image[3])
    }

    pub fn affine_binding(&self) -> Vec<(Var, Rational)> {
        let a = self.affine();
        (0..3).map(|i| (Var::XS[i], a[i].clone())).collect()
    }
}

/// Evaluate the parameterization; `None` where it is undefined or `x4 = 0`.
pub fn sample_at(x: &[Polynomial; 4], s: &Rational, t: &Rational) -> Option<SurfaceSample> {
    let binding = [(Var::S, s.clone()), (Var::T, t.clone())];
    let mut image: [Rational; 4] = Default::default();
    for (v, p) in image.iter_mut().zip(x) {
        *v = p.eval_rational(&binding).ok()?;
    }
    if image[3].is_zero() {
        return None;
    }
    Some(SurfaceSample {
        s: s.clone(),
        t: t.clone(),
        image,
    })
}

const MAX_REJECTIONS: usize = 200;

/// `n` exact samples from a seeded stream of small rationals.
pub fn sample_surface(x: &[Polynomial; 4], n: usize, seed: u64) -> Result<Vec<SurfaceSample>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n);
    let mut misses = 0;
    while out.len() < n {
        let mut draw = || Rational::new(rng.gen_range(-30i64..=30).into(), rng.gen_range(1i64..=11).into());
        let (s, t) = (draw(), draw());
        match sample_at(x, &s, &t) {
            Some(sample) => {
                out.push(sample);
                misses = 0;
            }
            None => {
                misses += 1;
                if misses >= MAX_REJECTIONS {
                    return Err(Error::SamplingExhausted(misses));
                }
            }
        }
    }
    Ok(out)
}

/// Substitute `X_i -> x_i` into the homogenization of `p`.
pub fn compose_homogeneous(p: &Polynomial, x: &[Polynomial; 4]) -> Polynomial {
    let h = p.homogenize_x4();
    let d = h.total_degree().max(0) as usize;
    let powers: Vec<Vec<Polynomial>> = x
        .iter()
        .map(|xi| {
            let mut v = vec![Polynomial::one()];
            for k in 1..=d {
                let next = &v[k - 1] * xi;
                v.push(next);
            }
            v
        })
        .collect();
    let mut out = Polynomial::zero();
    for (m, c) in h.terms() {
        let mut term = Polynomial::constant(c.clone());
        for (i, v) in Var::XS.into_iter().enumerate() {
            let e = m.exp(v) as usize;
            if e > 0 {
                term = &term * &powers[i][e];
            }
        }
        out += &term;
    }
    out
}

/// Whether `p` vanishes on the parameterization. `trials` random points are
/// tried first; the answer is decided by exact symbolic substitution. The
/// zero polynomial counts as vanishing.
pub fn verify_vanishing(p: &Polynomial, x: &[Polynomial; 4], trials: usize) -> bool {
    if p.is_zero() {
        return true;
    }
    if let Ok(samples) = sample_surface(x, trials.max(1), 0x00dd_5eed) {
        for s in samples {
            match p.eval_rational(&s.affine_binding()) {
                Ok(v) if v.is_zero() => {}
                _ => return false,
            }
        }
    }
    compose_homogeneous(p, x).is_zero()
}

fn sylvester(a: &[Polynomial], b: &[Polynomial]) -> Matrix<Polynomial> {
    let (m, n) = (a.len() - 1, b.len() - 1);
    let size = m + n;
    let mut rows = vec![vec![Polynomial::zero(); size]; size];
    for i in 0..n {
        for (k, c) in a.iter().rev().enumerate() {
            rows[i][i + k] = c.clone();
        }
    }
    for i in 0..m {
        for (k, c) in b.iter().rev().enumerate() {
            rows[n + i][i + k] = c.clone();
        }
    }
    Matrix::from_rows(rows)
}

/// `Res_v(a, b)` as the determinant of the Sylvester matrix.
pub fn resultant(a: &Polynomial, b: &Polynomial, v: Var) -> Result<Polynomial> {
    let (ca, cb) = (a.coefficients_in(v), b.coefficients_in(v));
    if ca.is_empty() || cb.is_empty() {
        return Ok(Polynomial::zero());
    }
    if ca.len() + cb.len() == 2 {
        return Ok(Polynomial::one());
    }
    Ok(det_poly(&sylvester(&ca, &cb))?)
}

fn rename(p: &Polynomial, from: Var, to: Var) -> Polynomial {
    Polynomial::from_terms(p.terms().map(|(m, c)| {
        let e = m.exp(from);
        (m.with_exp(from, 0).with_exp(to, e), c.clone())
    }))
}

/// Divide out the `t`-only content of a polynomial in `t, X1..X3`.
fn strip_t_content(p: &Polynomial) -> Result<Polynomial> {
    let mut groups: HashMap<Monomial, Polynomial> = HashMap::new();
    for (m, c) in p.terms() {
        let key = m.with_exp(Var::T, 0);
        groups
            .entry(key)
            .or_insert_with(Polynomial::zero)
            .add_term(Monomial::var(Var::X4, m.exp(Var::T)), c.clone());
    }
    let content = gcd_all(groups.values())?;
    let content = rename(&content, Var::X4, Var::T);
    Ok(p.exact_div(&content)?.normalize())
}

/// Integer polynomial in up to three variables, ready for fast evaluation.
struct IntPoly {
    terms: Vec<([usize; 3], BigInt)>,
}

impl IntPoly {
    fn new(p: &Polynomial, vars: [Var; 3]) -> IntPoly {
        IntPoly {
            terms: p
                .terms()
                .map(|(m, c)| {
                    debug_assert!(c.is_integer());
                    (vars.map(|v| m.exp(v) as usize), c.numer().clone())
                })
                .collect(),
        }
    }

    fn eval(&self, pw: &[Vec<BigInt>; 3]) -> BigInt {
        self.terms.iter().fold(BigInt::zero(), |acc, (e, c)| {
            acc + c * &pw[0][e[0]] * &pw[1][e[1]] * &pw[2][e[2]]
        })
    }
}

fn det_int(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) else {
            return BigInt::zero();
        };
        if p != k {
            a.swap(p, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (&a[k][k] * &a[i][j] - &a[i][k] * &a[k][j]) / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

fn falling_factorial(v: Var, k: usize) -> Polynomial {
    (0..k).fold(Polynomial::one(), |acc, i| {
        &acc * &(&Polynomial::var(v) - &Polynomial::int(i as i64))
    })
}

/// `Res_t(r1, r2)` where `r1` involves `t, X_a, X_b` and `r2` involves
/// `t, X_a, X_c`.
fn resultant_t_interpolated(r1: &Polynomial, r2: &Polynomial, vars: [Var; 3]) -> Result<Polynomial> {
    let c1 = r1.coefficients_in(Var::T);
    let c2 = r2.coefficients_in(Var::T);
    let (d1, d2) = (c1.len() - 1, c2.len() - 1);
    if d1 + d2 == 0 {
        return Ok(Polynomial::one());
    }
    let deg = |p: &Polynomial, v: Var| p.degree_in(v).max(0) as usize;
    let bounds = [
        d2 * deg(r1, vars[0]) + d1 * deg(r2, vars[0]),
        d2 * deg(r1, vars[1]) + d1 * deg(r2, vars[1]),
        d2 * deg(r1, vars[2]) + d1 * deg(r2, vars[2]),
    ];
    let total = d2 * r1.x_degree().max(0) as usize + d1 * r2.x_degree().max(0) as usize;
    let i1: Vec<IntPoly> = c1.iter().map(|p| IntPoly::new(p, vars)).collect();
    let i2: Vec<IntPoly> = c2.iter().map(|p| IntPoly::new(p, vars)).collect();
    let size = d1 + d2;
    let dims = bounds.map(|b| b + 1);
    let idx = |a: usize, b: usize, c: usize| (a * dims[1] + b) * dims[2] + c;
    let inside = |a: usize, b: usize, c: usize| a + b + c <= total;
    let mut vals: Vec<BigInt> = vec![BigInt::zero(); dims[0] * dims[1] * dims[2]];
    let powers = |x: usize, n: usize| -> Vec<BigInt> {
        let mut v = vec![BigInt::one()];
        for k in 1..=n {
            let next = &v[k - 1] * BigInt::from(x);
            v.push(next);
        }
        v
    };
    let max_e = |ps: &[IntPoly], k: usize| {
        ps.iter()
            .flat_map(|p| p.terms.iter().map(move |(e, _)| e[k]))
            .max()
            .unwrap_or(0)
    };
    let emax: [usize; 3] = std::array::from_fn(|k| max_e(&i1, k).max(max_e(&i2, k)));
    for a in 0..dims[0] {
        let pa = powers(a, emax[0]);
        for b in 0..dims[1] {
            let pb = powers(b, emax[1]);
            for c in 0..dims[2] {
                if !inside(a, b, c) {
                    break;
                }
                let pw = [pa.clone(), pb.clone(), powers(c, emax[2])];
                let e1: Vec<BigInt> = i1.iter().map(|p| p.eval(&pw)).collect();
                let e2: Vec<BigInt> = i2.iter().map(|p| p.eval(&pw)).collect();
                let mut m = vec![vec![BigInt::zero(); size]; size];
                for i in 0..d2 {
                    for (k, v) in e1.iter().rev().enumerate() {
                        m[i][i + k] = v.clone();
                    }
                }
                for i in 0..d1 {
                    for (k, v) in e2.iter().rev().enumerate() {
                        m[d2 + i][i + k] = v.clone();
                    }
                }
                vals[idx(a, b, c)] = det_int(m);
            }
        }
    }
    // forward differences along each axis over the lower set
    for axis in 0..3 {
        for a in 0..dims[0] {
            for b in 0..dims[1] {
                for c in 0..dims[2] {
                    let fixed = [a, b, c];
                    if fixed[axis] != 0 || !inside(a, b, c) {
                        continue;
                    }
                    let len = (0..dims[axis])
                        .take_while(|&k| {
                            let mut p = fixed;
                            p[axis] = k;
                            inside(p[0], p[1], p[2])
                        })
                        .count();
                    let at = |k: usize| {
                        let mut p = fixed;
                        p[axis] = k;
                        idx(p[0], p[1], p[2])
                    };
                    for order in 1..len {
                        for k in (order..len).rev() {
                            let v = &vals[at(k)] - &vals[at(k - 1)];
                            vals[at(k)] = v;
                        }
                    }
                }
            }
        }
    }
    let fact: Vec<BigInt> = (0..=total.max(bounds.iter().copied().max().unwrap_or(0)))
        .scan(BigInt::one(), |f, k| {
            if k > 0 {
                *f *= BigInt::from(k);
            }
            Some(f.clone())
        })
        .collect();
    let ff: [Vec<Polynomial>; 3] = std::array::from_fn(|k| (0..dims[k]).map(|e| falling_factorial(vars[k], e)).collect());
    let mut out = Polynomial::zero();
    for a in 0..dims[0] {
        for b in 0..dims[1] {
            let mut inner = Polynomial::zero();
            for c in 0..dims[2] {
                if !inside(a, b, c) {
                    break;
                }
                let v = &vals[idx(a, b, c)];
                if v.is_zero() {
                    continue;
                }
                let coef = Rational::new(v.clone(), &fact[a] * &fact[b] * &fact[c]);
                inner += &ff[2][c].scale(&coef);
            }
            if !inner.is_zero() {
                out += &(&(&ff[0][a] * &ff[1][b]) * &inner);
            }
        }
    }
    Ok(out)
}

/// `Res_t(Res_s(f_i, f_j), Res_s(f_i, f_k))` with the `t`-only content of
/// the inner resultants removed.
pub fn iterated_resultant(surface: &Surface, (i, j, k): (usize, usize, usize)) -> Result<Polynomial> {
    iterated_resultant_of(&surface.fs(), (i, j, k), [Var::XS[i], Var::XS[j], Var::XS[k]])
}

fn iterated_resultant_of(
    f: &[Polynomial; 3],
    (i, j, k): (usize, usize, usize),
    vars: [Var; 3],
) -> Result<Polynomial> {
    let r1 = resultant(&f[i], &f[j], Var::S)?;
    let r2 = resultant(&f[i], &f[k], Var::S)?;
    if r1.is_zero() || r2.is_zero() {
        return Err(Error::EliminationCollapse);
    }
    let r1 = strip_t_content(&r1)?;
    let r2 = strip_t_content(&r2)?;
    let r = resultant_t_interpolated(&r1, &r2, vars)?;
    if r.is_zero() || r.is_constant() {
        return Err(Error::EliminationCollapse);
    }
    Ok(r.normalize())
}

const PAIRINGS: [(usize, usize, usize); 3] = [(0, 1, 2), (1, 0, 2), (2, 0, 1)];

/// Unimodular exponent changes tried after a collapse.
const CHANGES: [[[i32; 2]; 2]; 4] = [[[1, 0], [0, 1]], [[0, 1], [1, 0]], [[1, 1], [0, 1]], [[1, 0], [1, 1]]];

const MIN_RESULTANTS: usize = 3;
const MIX_ATTEMPTS: usize = 6;

fn change_parameters(x: &[Polynomial; 4], m: [[i32; 2]; 2]) -> [Polynomial; 4] {
    x.each_ref().map(|p| {
        Polynomial::from_terms(p.terms().map(|(mono, c)| {
            let (a, b) = (mono.exp(Var::S), mono.exp(Var::T));
            let e = Monomial::st(m[0][0] * a + m[0][1] * b, m[1][0] * a + m[1][1] * b);
            (mono.with_exp(Var::S, 0).with_exp(Var::T, 0).mul(&e), c.clone())
        }))
    })
}

/// A random invertible integer combination of `f`. It has the same common
/// zeros but rarely a factor shared by two of its members.
fn mix(f: &[Polynomial; 3], rng: &mut ChaCha8Rng) -> [Polynomial; 3] {
    loop {
        let c: [[i64; 3]; 3] = std::array::from_fn(|_| std::array::from_fn(|_| rng.gen_range(-3..=3)));
        let det = c[0][0] * (c[1][1] * c[2][2] - c[1][2] * c[2][1])
            - c[0][1] * (c[1][0] * c[2][2] - c[1][2] * c[2][0])
            + c[0][2] * (c[1][0] * c[2][1] - c[1][1] * c[2][0]);
        if det != 0 {
            return c.map(|row| {
                let mut g = Polynomial::zero();
                for (cj, fj) in row.iter().zip(f) {
                    g += &fj.scale(&Rational::from_integer((*cj).into()));
                }
                g
            });
        }
    }
}

/// Squarefree implicit equation by elimination, independent of the toric
/// constructions. The gcd is taken over the three pairings and, when some
/// of them collapse, over resultants of random combinations of the `f_i`.
pub fn elim_implicitize(x: &[Polynomial; 4]) -> Result<Polynomial> {
    for change in CHANGES {
        let surface = Surface::new(change_parameters(x, change))?;
        let f = surface.fs();
        let mut rs = Vec::new();
        for pairing in PAIRINGS {
            match iterated_resultant(&surface, pairing) {
                Ok(r) => rs.push(r),
                Err(Error::EliminationCollapse) => {}
                Err(e) => return Err(e),
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(0x05ee_de11);
        for _ in 0..MIX_ATTEMPTS {
            if rs.len() >= MIN_RESULTANTS {
                break;
            }
            match iterated_resultant_of(&mix(&f, &mut rng), (0, 1, 2), Var::XS[..3].try_into().unwrap()) {
                Ok(r) => rs.push(r),
                Err(Error::EliminationCollapse) => {}
                Err(e) => return Err(e),
            }
        }
        if rs.is_empty() {
            continue;
        }
        let g = gcd_all(&rs)?;
        let p = g.squarefree_part()?;
        if p.is_constant() || !verify_vanishing(&p, x, 4) {
            return Err(Error::VerificationFailed(format!(
                "elimination gcd {p} does not vanish on the parameterization"
            )));
        }
        return Ok(p.normalize());
    }
    Err(Error::EliminationCollapse)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(src: [&str; 4]) -> [Polynomial; 4] {
        src.map(|s| s.parse().unwrap())
    }

    #[test]
    fn monomial_surface() {
        let p = elim_implicitize(&x(["s", "t", "st", "1"])).unwrap();
        assert_eq!(p, "X1*X2 - X3".parse::<Polynomial>().unwrap().normalize());
    }

    #[test]
    fn plane() {
        let p = elim_implicitize(&x(["1 + s + t", "s", "t", "1"])).unwrap();
        assert_eq!(p, "X1 - X2 - X3 - 1".parse::<Polynomial>().unwrap().normalize());
    }

    #[test]
    fn vanishing_checks() {
        let par = x(["s", "t", "st", "1"]);
        assert!(verify_vanishing(&"X1*X2 - X3".parse().unwrap(), &par, 3));
        assert!(!verify_vanishing(&"X1".parse().unwrap(), &par, 3));
        assert!(verify_vanishing(&Polynomial::zero(), &par, 3));
    }

    #[test]
    fn samples_are_deterministic_and_exact() {
        let par = x(["s", "t", "st", "1"]);
        let a = sample_surface(&par, 3, 9).unwrap();
        assert_eq!(a, sample_surface(&par, 3, 9).unwrap());
        for s in &a {
            assert_eq!(s.image[2], &s.s * &s.t);
            assert!(s.image[3].is_one());
        }
    }

    #[test]
    fn base_point_is_rejected() {
        let par = x([
            "1 + s - t + st - s^2t - st^2",
            "1 + s - t - st + s^2t - st^2",
            "1 - s + t - st - s^2t + st^2",
            "1 - s - t + st - s^2t + st^2",
        ]);
        assert!(sample_at(&par, &Rational::one(), &Rational::one()).is_none());
    }

    #[test]
    fn x4_zero_exhausts_sampling() {
        let par = x(["s", "t", "1", "s - s"]);
        assert!(matches!(sample_surface(&par, 1, 1), Err(Error::SamplingExhausted(_))));
    }

    #[test]
    fn interpolated_resultant_matches_symbolic() {
        let r1: Polynomial = "t^2*X1 - t + X2 + 3".parse().unwrap();
        let r2: Polynomial = "t*X3 + X1^2 - 2".parse().unwrap();
        let direct = resultant(&r1, &r2, Var::T).unwrap();
        let interp = resultant_t_interpolated(&r1, &r2, [Var::X1, Var::X2, Var::X3]).unwrap();
        assert_eq!(direct, interp);
    }
}
