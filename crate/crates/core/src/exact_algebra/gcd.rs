//! Multivariate gcd. The heuristic evaluation gcd is tried first; recursive
//! subresultant remainder sequences (first present `X` variable as main
//! variable) are the fallback.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::{AlgebraError, Monomial, Polynomial, Rational, Var};

type Upoly = Vec<Polynomial>;

fn deg(u: &Upoly) -> isize {
    u.len() as isize - 1
}

fn trim(u: &mut Upoly) {
    while u.last().is_some_and(|c| c.is_zero()) {
        u.pop();
    }
}

fn lc(u: &Upoly) -> &Polynomial {
    u.last().expect("leading coefficient of zero polynomial")
}

/// `lc(b)^(deg a - deg b + 1) * a  mod  b`.
fn prem(a: &Upoly, b: &Upoly) -> Upoly {
    let n = deg(b);
    let lcb = lc(b).clone();
    let mut r = a.clone();
    let mut e = deg(a) - n + 1;
    while deg(&r) >= n {
        let d = deg(&r);
        let lr = lc(&r).clone();
        for c in r.iter_mut() {
            *c = &*c * &lcb;
        }
        let off = (d - n) as usize;
        for (j, bj) in b.iter().enumerate() {
            r[j + off] -= &(&lr * bj);
        }
        trim(&mut r);
        e -= 1;
    }
    if e > 0 {
        let f = lcb.pow(e as u32);
        for c in r.iter_mut() {
            *c = &*c * &f;
        }
    }
    r
}

fn subresultant_gcd(a: Upoly, b: Upoly) -> Result<Upoly, AlgebraError> {
    let (mut a, mut b) = if deg(&a) >= deg(&b) { (a, b) } else { (b, a) };
    let mut g = Polynomial::one();
    let mut h = Polynomial::one();
    loop {
        let delta = (deg(&a) - deg(&b)) as u32;
        let r = prem(&a, &b);
        if r.is_empty() {
            return Ok(b);
        }
        if deg(&r) == 0 {
            return Ok(vec![Polynomial::one()]);
        }
        let divisor = &g * &h.pow(delta);
        a = b;
        b = r
            .iter()
            .map(|c| c.exact_div(&divisor))
            .collect::<Result<_, _>>()?;
        g = lc(&a).clone();
        h = match delta {
            0 => h,
            1 => g.clone(),
            _ => g.pow(delta).exact_div(&h.pow(delta - 1))?,
        };
    }
}

fn main_var(a: &Polynomial, b: &Polynomial) -> Option<Var> {
    Var::XS.into_iter().find(|&v| a.contains(v) || b.contains(v))
}

/// Gcd of the coefficients of `p` viewed as a polynomial in `v`.
fn content_in(p: &Polynomial, v: Var) -> Result<Polynomial, AlgebraError> {
    let mut g = Polynomial::zero();
    for c in p.coefficients_in(v) {
        if c.is_zero() {
            continue;
        }
        g = gcd_rec(&g, &c)?.normalize();
        if g.is_constant() {
            return Ok(Polynomial::one());
        }
    }
    Ok(g)
}

fn int_content(p: &Polynomial) -> BigInt {
    p.terms.values().fold(BigInt::zero(), |g, c| g.gcd(c.numer()))
}

fn max_norm(p: &Polynomial) -> BigInt {
    p.terms.values().map(|c| c.numer().abs()).max().unwrap_or_default()
}

fn div_int(p: &Polynomial, d: &BigInt) -> Polynomial {
    Polynomial {
        terms: p
            .terms
            .iter()
            .map(|(m, c)| (*m, Rational::from_integer(c.numer() / d)))
            .collect(),
    }
}

fn eval_at(p: &Polynomial, v: Var, xi: &BigInt) -> Polynomial {
    let mut out = Polynomial::zero();
    for (m, c) in &p.terms {
        let e = m.exp(v) as u32;
        out.add_term(m.with_exp(v, 0), c * Rational::from_integer(xi.pow(e)));
    }
    out
}

/// Symmetric `xi`-adic expansion of `g` as a polynomial in `v`.
fn xi_adic(g: &Polynomial, v: Var, xi: &BigInt) -> Polynomial {
    let half = xi / 2;
    let mut rest = g.clone();
    let mut out = Polynomial::zero();
    let mut i = 0;
    while !rest.is_zero() {
        let mut digit = Polynomial::zero();
        for (m, c) in &rest.terms {
            let mut r = c.numer().mod_floor(xi);
            if r > half {
                r -= xi;
            }
            digit.add_term(*m, Rational::from_integer(r));
        }
        rest = div_int(&(&rest - &digit), xi);
        out += &digit.mul_monomial(&Monomial::var(v, i));
        i += 1;
    }
    out
}

const HEU_TRIES: usize = 6;
const HEU_MAX_BITS: u64 = 1 << 20;

/// Gcd over `Z` of two integer polynomials, or `None` when the evaluation
/// points keep failing.
fn heu_gcd(a: &Polynomial, b: &Polynomial) -> Option<Polynomial> {
    if a.is_zero() || b.is_zero() {
        let g = if a.is_zero() { b } else { a };
        return Some(if g.leading_coeff().is_negative() { -g } else { g.clone() });
    }
    let (ca, cb) = (int_content(a), int_content(b));
    let c = ca.gcd(&cb);
    let Some(v) = main_var(a, b) else {
        return Some(Polynomial::constant(Rational::from_integer(c)));
    };
    let (a, b) = (div_int(a, &ca), div_int(b, &cb));
    let degree = a.degree_in(v).max(b.degree_in(v)).max(1) as u64;
    let mut xi: BigInt = 2 * max_norm(&a).min(max_norm(&b)) + 29;
    for _ in 0..HEU_TRIES {
        if xi.bits() * degree > HEU_MAX_BITS {
            return None;
        }
        let (av, bv) = (eval_at(&a, v, &xi), eval_at(&b, v, &xi));
        if !av.is_zero() && !bv.is_zero() {
            let g = heu_gcd(&av, &bv)?;
            let big = xi_adic(&g, v, &xi);
            if !big.is_zero() {
                let big = div_int(&big, &int_content(&big));
                if a.exact_div(&big).is_ok() && b.exact_div(&big).is_ok() {
                    return Some(big.scale(&Rational::from_integer(c)));
                }
            }
        }
        xi = xi * 73794 / 27011;
    }
    None
}

fn gcd_rec(a: &Polynomial, b: &Polynomial) -> Result<Polynomial, AlgebraError> {
    if a.is_zero() || b.is_zero() || a.is_constant() || b.is_constant() {
        return prs_gcd(a, b);
    }
    match heu_gcd(&a.normalize(), &b.normalize()) {
        Some(g) => Ok(g.normalize()),
        None => prs_gcd(a, b),
    }
}

fn prs_gcd(a: &Polynomial, b: &Polynomial) -> Result<Polynomial, AlgebraError> {
    if a.is_zero() {
        return Ok(b.clone());
    }
    if b.is_zero() {
        return Ok(a.clone());
    }
    if a.is_constant() || b.is_constant() {
        return Ok(Polynomial::one());
    }
    let v = main_var(a, b).expect("nonconstant X-only polynomial");
    if !a.contains(v) {
        return gcd_rec(a, &content_in(b, v)?);
    }
    if !b.contains(v) {
        return gcd_rec(&content_in(a, v)?, b);
    }
    let ca = content_in(a, v)?;
    let cb = content_in(b, v)?;
    let pa = a.exact_div(&ca)?.normalize();
    let pb = b.exact_div(&cb)?.normalize();
    let c = gcd_rec(&ca, &cb)?;
    let g = subresultant_gcd(pa.coefficients_in(v), pb.coefficients_in(v))?;
    let g = Polynomial::from_coefficients(v, &g);
    let g = g.exact_div(&content_in(&g, v)?)?;
    Ok((&c * &g).normalize())
}

fn check_x_only(p: &Polynomial) -> Result<(), AlgebraError> {
    for v in [Var::S, Var::T] {
        if p.contains(v) {
            return Err(AlgebraError::UnsupportedVariables(v));
        }
    }
    Ok(())
}

/// Normalized gcd of two X-only polynomials.
pub fn poly_gcd(a: &Polynomial, b: &Polynomial) -> Result<Polynomial, AlgebraError> {
    check_x_only(a)?;
    check_x_only(b)?;
    if a.is_zero() && b.is_zero() {
        return Err(AlgebraError::DegenerateInput("gcd(0, 0)"));
    }
    Ok(gcd_rec(a, b)?.normalize())
}

pub fn gcd_all<'a, I: IntoIterator<Item = &'a Polynomial>>(
    items: I,
) -> Result<Polynomial, AlgebraError> {
    let mut items: Vec<&Polynomial> = items.into_iter().collect();
    items.sort_by_key(|p| p.terms.len());
    let mut g = Polynomial::zero();
    for p in items {
        check_x_only(p)?;
        if !g.is_zero() && p.exact_div(&g).is_ok() {
            continue;
        }
        g = gcd_rec(&g, p)?.normalize();
    }
    if g.is_zero() {
        return Err(AlgebraError::DegenerateInput("gcd of zero polynomials"));
    }
    Ok(g)
}

/// Product of the distinct irreducible factors (up to a constant).
pub fn squarefree_part(p: &Polynomial) -> Result<Polynomial, AlgebraError> {
    check_x_only(p)?;
    if p.is_zero() {
        return Err(AlgebraError::DegenerateInput("squarefree part of zero"));
    }
    if p.is_constant() {
        return Ok(Polynomial::one());
    }
    let v = main_var(p, p).unwrap();
    let c = content_in(p, v)?;
    let q = p.exact_div(&c)?;
    let g = gcd_rec(&q, &q.derivative(v))?;
    let r = q.exact_div(&g)?;
    Ok((&r * &squarefree_part(&c)?).normalize())
}

/// Recover `(P, d)` from `p = c * P^d`.
pub fn poly_power_root(
    p: &Polynomial,
    hint: Option<u32>,
) -> Result<(Polynomial, u32), AlgebraError> {
    check_x_only(p)?;
    if p.is_constant() {
        return Err(AlgebraError::DegenerateInput("constant polynomial has no root"));
    }
    let v = main_var(p, p).unwrap();
    let mut cur = p.normalize();
    loop {
        let g = gcd_rec(&cur, &cur.derivative(v))?;
        if g.is_constant() {
            break;
        }
        cur = cur.exact_div(&g)?.normalize();
    }
    let (dp, dr) = (p.total_degree(), cur.total_degree());
    if dp % dr != 0 {
        return Err(AlgebraError::NotPerfectPower);
    }
    let d = (dp / dr) as u32;
    if hint.is_some_and(|h| h != d) || !cur.pow(d).is_associate(p) {
        return Err(AlgebraError::NotPerfectPower);
    }
    Ok((cur, d))
}
