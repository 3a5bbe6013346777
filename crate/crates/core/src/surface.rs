//! A parameterization `(x1, x2, x3, x4)` in `s, t` after monomial content
//! removal, with its supports and Newton polygon.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::exact_algebra::{AlgebraError, Monomial, Polynomial, Var};
use crate::lattice_geometry::{newton_polygon, LatticePoint, Polygon};

#[derive(Clone, Debug)]
pub struct Surface {
    x: [Polynomial; 4],
    removed: LatticePoint,
    supports: [Vec<LatticePoint>; 4],
    polygon: Polygon,
}

fn exponent(m: &Monomial) -> LatticePoint {
    LatticePoint::new(i64::from(m.exp(Var::S)), i64::from(m.exp(Var::T)))
}

/// Group the terms of `p` by their `(s, t)` exponent; the values are the
/// remaining `X` parts.
pub fn st_coefficients(p: &Polynomial) -> BTreeMap<LatticePoint, Polynomial> {
    let mut out: BTreeMap<LatticePoint, Polynomial> = BTreeMap::new();
    for (m, c) in p.terms() {
        let rest = m.with_exp(Var::S, 0).with_exp(Var::T, 0);
        out.entry(exponent(m))
            .or_insert_with(Polynomial::zero)
            .add_term(rest, c.clone());
    }
    out
}

impl Surface {
    /// Divide out the common monomial factor so that all exponents are
    /// nonnegative with zero minima in both `s` and `t`.
    pub fn new(x: [Polynomial; 4]) -> Result<Surface> {
        for p in &x {
            if let Some(v) = p.variables().into_iter().find(|v| !v.is_param()) {
                return Err(AlgebraError::UnsupportedVariables(v).into());
            }
        }
        if x[3].is_zero() {
            return Err(AlgebraError::DegenerateInput("x4 is identically zero").into());
        }
        let mut min = [i32::MAX; 2];
        for p in x.iter().filter(|p| !p.is_zero()) {
            let m = p.min_monomial();
            min[0] = min[0].min(m.exp(Var::S));
            min[1] = min[1].min(m.exp(Var::T));
        }
        let shift = Monomial::st(min[0], min[1]);
        let x = x.map(|p| p.mul_monomial(&Monomial::st(-min[0], -min[1])));
        let supports = x
            .each_ref()
            .map(|p| p.monomials().map(exponent).collect::<Vec<_>>());
        let polygon = newton_polygon(&supports).map_err(Error::from)?;
        Ok(Surface {
            x,
            removed: exponent(&shift),
            supports,
            polygon,
        })
    }

    /// Parse four expressions in `s, t`.
    pub fn from_strs(src: [&str; 4]) -> Result<Surface> {
        let mut x = Vec::with_capacity(4);
        for s in src {
            x.push(crate::exact_algebra::parse_polynomial_in(s, &[Var::S, Var::T])?);
        }
        Surface::new(x.try_into().unwrap())
    }

    pub fn x(&self) -> &[Polynomial; 4] {
        &self.x
    }

    /// The monomial `s^a t^b` divided out of every component.
    pub fn removed_content(&self) -> LatticePoint {
        self.removed
    }

    pub fn supports(&self) -> &[Vec<LatticePoint>; 4] {
        &self.supports
    }

    pub fn polygon(&self) -> &Polygon {
        &self.polygon
    }

    /// `f_i = x_i - X_i x_4` for `i = 0, 1, 2`.
    pub fn f(&self, i: usize) -> Polynomial {
        &self.x[i] - &(&Polynomial::var(Var::XS[i]) * &self.x[3])
    }

    pub fn fs(&self) -> [Polynomial; 3] {
        [self.f(0), self.f(1), self.f(2)]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice_geometry::pt;

    #[test]
    fn content_is_removed() {
        let s = Surface::from_strs(["s^2t", "s t^2", "s^-1 t", "s t"]).unwrap();
        assert_eq!(s.removed_content(), pt(-1, 1));
        assert_eq!(s.x()[2], "1".parse().unwrap());
        assert_eq!(s.polygon().area2(), 3);
    }

    #[test]
    fn f_has_x_coefficients() {
        let s = Surface::from_strs(["s", "t", "s t", "1"]).unwrap();
        let c = st_coefficients(&s.f(2));
        assert_eq!(c[&pt(0, 0)], "-X3".parse().unwrap());
        assert_eq!(c[&pt(1, 1)], Polynomial::one());
    }

    #[test]
    fn rejects_target_variables() {
        let x = ["s", "X1", "t", "1"].map(|s| s.parse::<Polynomial>().unwrap());
        assert!(Surface::new(x).is_err());
    }
}
