//! Exact rationals and sparse polynomials over the fixed variable set
//! `s, t, X1, X2, X3, X4`.
//!
//! `s` and `t` may carry negative exponents (Laurent); the `X` variables are
//! ordinary polynomial variables. Terms are kept in a `BTreeMap` keyed by
//! graded-lex order so the greatest key is the leading term.

mod gcd;
mod text;

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub use text::{parse_polynomial, parse_polynomial_in, ParseFailure};

pub type Rational = BigRational;

pub const NVARS: usize = 6;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("division by zero while evaluating a negative power of {0}")]
    DivisionByZero(Var),
    #[error("polynomial is not divisible by the given divisor")]
    NotDivisible,
    #[error("operation requires X-only polynomials but {0} occurs")]
    UnsupportedVariables(Var),
    #[error("degenerate input: {0}")]
    DegenerateInput(&'static str),
    #[error("polynomial is not a constant multiple of a perfect power")]
    NotPerfectPower,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    S,
    T,
    X1,
    X2,
    X3,
    X4,
}

impl Var {
    pub const ALL: [Var; NVARS] = [Var::S, Var::T, Var::X1, Var::X2, Var::X3, Var::X4];
    pub const XS: [Var; 4] = [Var::X1, Var::X2, Var::X3, Var::X4];

    pub fn index(self) -> usize {
        self as usize
    }

    /// `X_i` for `i` in 1..=4.
    pub fn x(i: usize) -> Var {
        Var::XS[i - 1]
    }

    pub fn is_param(self) -> bool {
        matches!(self, Var::S | Var::T)
    }

    pub fn name(self) -> &'static str {
        match self {
            Var::S => "s",
            Var::T => "t",
            Var::X1 => "X1",
            Var::X2 => "X2",
            Var::X3 => "X3",
            Var::X4 => "X4",
        }
    }

    pub fn from_name(name: &str) -> Option<Var> {
        Var::ALL.into_iter().find(|v| v.name() == name)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Exponent vector over `(s, t, X1, X2, X3, X4)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    exps: [i32; NVARS],
}

impl Monomial {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn new(exps: [i32; NVARS]) -> Self {
        Self { exps }
    }

    pub fn var(v: Var, e: i32) -> Self {
        let mut m = Self::default();
        m.exps[v.index()] = e;
        m
    }

    /// `s^a t^b`.
    pub fn st(a: i32, b: i32) -> Self {
        Self::new([a, b, 0, 0, 0, 0])
    }

    pub fn exps(&self) -> &[i32; NVARS] {
        &self.exps
    }

    pub fn exp(&self, v: Var) -> i32 {
        self.exps[v.index()]
    }

    pub fn with_exp(mut self, v: Var, e: i32) -> Self {
        self.exps[v.index()] = e;
        self
    }

    pub fn total_degree(&self) -> i32 {
        self.exps.iter().sum()
    }

    pub fn x_degree(&self) -> i32 {
        self.exps[2..].iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut exps = self.exps;
        for (e, o) in exps.iter_mut().zip(other.exps.iter()) {
            *e += o;
        }
        Monomial { exps }
    }

    /// `self / other`, allowing negative results in every slot.
    pub fn div_laurent(&self, other: &Monomial) -> Monomial {
        let mut exps = self.exps;
        for (e, o) in exps.iter_mut().zip(other.exps.iter()) {
            *e -= o;
        }
        Monomial { exps }
    }

    /// Exact division in the polynomial sense: every exponent must stay >= 0.
    pub fn divide(&self, other: &Monomial) -> Option<Monomial> {
        let q = self.div_laurent(other);
        q.exps.iter().all(|&e| e >= 0).then_some(q)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.exps.cmp(&other.exps))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse polynomial with exact rational coefficients. Zero coefficients are
/// never stored, so structural equality is mathematical equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, Rational>,
}

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

impl Polynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::term(Monomial::one(), c)
    }

    pub fn int(c: i64) -> Self {
        Self::constant(rat(c))
    }

    pub fn var(v: Var) -> Self {
        Self::term(Monomial::var(v, 1), Rational::one())
    }

    /// `X_i` for `i` in 1..=4.
    pub fn x(i: usize) -> Self {
        Self::var(Var::x(i))
    }

    pub fn term(m: Monomial, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Self { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, Rational)>>(it: I) -> Self {
        let mut p = Self::zero();
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.is_one())
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.coeff(&Monomial::one()).is_one()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in increasing graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn monomials(&self) -> impl Iterator<Item = &Monomial> {
        self.terms.keys()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> Rational {
        self.coeff(&Monomial::one())
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coeff(&self) -> Rational {
        self.leading_term()
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Rational::zero)
    }

    /// Total degree; `-1` for the zero polynomial.
    pub fn total_degree(&self) -> i32 {
        self.terms.keys().map(|m| m.total_degree()).max().unwrap_or(-1)
    }

    /// Total degree in `X1..X4`; `-1` for the zero polynomial.
    pub fn x_degree(&self) -> i32 {
        self.terms.keys().map(|m| m.x_degree()).max().unwrap_or(-1)
    }

    pub fn degree_in(&self, v: Var) -> i32 {
        self.terms.keys().map(|m| m.exp(v)).max().unwrap_or(-1)
    }

    pub fn min_degree_in(&self, v: Var) -> i32 {
        self.terms.keys().map(|m| m.exp(v)).min().unwrap_or(0)
    }

    pub fn contains(&self, v: Var) -> bool {
        self.terms.keys().any(|m| m.exp(v) != 0)
    }

    pub fn variables(&self) -> Vec<Var> {
        Var::ALL.into_iter().filter(|&v| self.contains(v)).collect()
    }

    /// True when every term is free of `s` and `t`.
    pub fn is_x_only(&self) -> bool {
        !self.contains(Var::S) && !self.contains(Var::T)
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial {
            terms: self.terms.iter().map(|(m, v)| (*m, v * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, mono: &Monomial) -> Polynomial {
        Polynomial {
            terms: self.terms.iter().map(|(m, v)| (m.mul(mono), v.clone())).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut acc = Polynomial::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Substitute rational values for some variables; the rest stay symbolic.
    pub fn eval(&self, binding: &[(Var, Rational)]) -> Result<Polynomial, AlgebraError> {
        let mut out: HashMap<Monomial, Rational> = HashMap::new();
        for (m, c) in &self.terms {
            let mut coef = c.clone();
            let mut mono = *m;
            for (v, val) in binding {
                let e = m.exp(*v);
                if e == 0 {
                    continue;
                }
                if e < 0 && val.is_zero() {
                    return Err(AlgebraError::DivisionByZero(*v));
                }
                coef *= rat_pow(val, e);
                mono = mono.with_exp(*v, 0);
            }
            if coef.is_zero() {
                continue;
            }
            *out.entry(mono).or_insert_with(Rational::zero) += coef;
        }
        Ok(Polynomial::from_map(out))
    }

    /// Evaluate completely; every variable appearing must be bound.
    pub fn eval_rational(&self, binding: &[(Var, Rational)]) -> Result<Rational, AlgebraError> {
        let p = self.eval(binding)?;
        if let Some(v) = p.variables().first() {
            return Err(AlgebraError::UnsupportedVariables(*v));
        }
        Ok(p.constant_term())
    }

    /// Substitute polynomials for variables (simultaneously). Negative
    /// exponents of substituted variables are not supported.
    pub fn substitute(&self, subs: &[(Var, Polynomial)]) -> Polynomial {
        let mut cache: HashMap<(Var, i32), Polynomial> = HashMap::new();
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            let mut mono = *m;
            let mut prod = Polynomial::one();
            for (v, q) in subs {
                let e = m.exp(*v);
                if e == 0 {
                    continue;
                }
                assert!(e > 0, "substitution into a negative power of {v}");
                mono = mono.with_exp(*v, 0);
                let pw = cache.entry((*v, e)).or_insert_with(|| q.pow(e as u32));
                prod = &prod * &*pw;
            }
            out += &prod.mul_monomial(&mono).scale(c);
        }
        out
    }

    pub fn derivative(&self, v: Var) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            let e = m.exp(v);
            if e != 0 {
                out.add_term(m.with_exp(v, e - 1), c * rat(e as i64));
            }
        }
        out
    }

    /// Multiply by `v^k` (k may be negative for `s`, `t`).
    pub fn shift(&self, v: Var, k: i32) -> Polynomial {
        self.mul_monomial(&Monomial::var(v, k))
    }

    /// Monomial with the minimal exponent of each variable over all terms.
    pub fn min_monomial(&self) -> Monomial {
        let mut exps = [0i32; NVARS];
        for (i, e) in exps.iter_mut().enumerate() {
            *e = self.terms.keys().map(|m| m.exps[i]).min().unwrap_or(0);
        }
        Monomial::new(exps)
    }

    /// Exact quotient `self / b`. Laurent inputs are first translated so all
    /// exponents are nonnegative, the translation is undone on the quotient.
    pub fn exact_div(&self, b: &Polynomial) -> Result<Polynomial, AlgebraError> {
        if b.is_zero() {
            return Err(AlgebraError::DegenerateInput("division by the zero polynomial"));
        }
        if self.is_zero() {
            return Ok(Polynomial::zero());
        }
        // s and t may carry negative exponents, so shift both to start at 0
        let (sa, sb) = (self.min_st(), b.min_st());
        let a0 = self.mul_monomial(&Monomial::one().div_laurent(&sa));
        let b0 = b.mul_monomial(&Monomial::one().div_laurent(&sb));
        Ok(a0.div_nonneg(&b0)?.mul_monomial(&sa.div_laurent(&sb)))
    }

    /// Componentwise minimum of the `s, t` exponents.
    fn min_st(&self) -> Monomial {
        let m = self.min_monomial();
        Monomial::st(m.exp(Var::S), m.exp(Var::T))
    }

    fn div_nonneg(&self, b: &Polynomial) -> Result<Polynomial, AlgebraError> {
        let (lm_b, lc_b) = b.leading_term().map(|(m, c)| (*m, c.clone())).unwrap();
        if b.terms.len() == 1 {
            let mut q = BTreeMap::new();
            for (m, c) in &self.terms {
                let qm = m.divide(&lm_b).ok_or(AlgebraError::NotDivisible)?;
                q.insert(qm, c / &lc_b);
            }
            return Ok(Polynomial { terms: q });
        }
        let mut r = self.clone();
        let mut q = Polynomial::zero();
        let tail: Vec<(Monomial, Rational)> = b
            .terms
            .iter()
            .rev()
            .skip(1)
            .map(|(m, c)| (*m, c.clone()))
            .collect();
        while let Some((lm_r, lc_r)) = r.terms.pop_last() {
            let qm = lm_r.divide(&lm_b).ok_or(AlgebraError::NotDivisible)?;
            let qc = lc_r / &lc_b;
            for (m, c) in &tail {
                r.add_term(m.mul(&qm), -(c * &qc));
            }
            q.terms.insert(qm, qc);
        }
        Ok(q)
    }

    /// Integer-primitive associate with positive leading coefficient.
    pub fn normalize(&self) -> Polynomial {
        if self.is_zero() {
            return Polynomial::zero();
        }
        let mut den = BigInt::one();
        for c in self.terms.values() {
            den = den.lcm(c.denom());
        }
        let mut g = BigInt::zero();
        for c in self.terms.values() {
            g = g.gcd(&(c.numer() * (&den / c.denom())));
        }
        let mut factor = Rational::new(den, g);
        if self.leading_coeff().is_negative() {
            factor = -factor;
        }
        self.scale(&factor)
    }

    /// True when `self = c * other` for a nonzero rational `c`.
    pub fn is_associate(&self, other: &Polynomial) -> bool {
        if self.is_zero() || other.is_zero() {
            return self.is_zero() && other.is_zero();
        }
        self.normalize() == other.normalize()
    }

    /// The `v`-coefficients: `self = sum_k out[k] * v^k`. Requires
    /// nonnegative exponents of `v`.
    pub fn coefficients_in(&self, v: Var) -> Vec<Polynomial> {
        let d = self.degree_in(v);
        if d < 0 {
            return Vec::new();
        }
        let mut out = vec![Polynomial::zero(); d as usize + 1];
        for (m, c) in &self.terms {
            let e = m.exp(v);
            assert!(e >= 0, "negative power of {v} in coefficients_in");
            out[e as usize].terms.insert(m.with_exp(v, 0), c.clone());
        }
        out
    }

    pub fn from_coefficients(v: Var, coeffs: &[Polynomial]) -> Polynomial {
        let mut out = Polynomial::zero();
        for (k, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                out += &c.shift(v, k as i32);
            }
        }
        out
    }

    /// Replace `X4` by one and record nothing else.
    pub fn dehomogenize_x4(&self) -> Polynomial {
        self.eval(&[(Var::X4, Rational::one())]).expect("X4 exponents are nonnegative")
    }

    /// Homogenize an X-only polynomial with `X4` to its total X-degree.
    pub fn homogenize_x4(&self) -> Polynomial {
        let d = self.x_degree();
        Polynomial {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let e = m.exp(Var::X4) + d - m.x_degree();
                    (m.with_exp(Var::X4, e), c.clone())
                })
                .collect(),
        }
    }

    fn from_map(map: HashMap<Monomial, Rational>) -> Polynomial {
        Polynomial {
            terms: map.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn gcd(&self, other: &Polynomial) -> Result<Polynomial, AlgebraError> {
        gcd::poly_gcd(self, other)
    }

    pub fn power_root(&self, hint: Option<u32>) -> Result<(Polynomial, u32), AlgebraError> {
        gcd::poly_power_root(self, hint)
    }

    pub fn squarefree_part(&self) -> Result<Polynomial, AlgebraError> {
        gcd::squarefree_part(self)
    }
}

pub use gcd::{gcd_all, poly_gcd, poly_power_root, squarefree_part};

fn rat_pow(base: &Rational, e: i32) -> Rational {
    if e >= 0 {
        num_traits::pow(base.clone(), e as usize)
    } else {
        num_traits::pow(base.recip(), (-e) as usize)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        text::write_polynomial(self, f)
    }
}

impl std::str::FromStr for Polynomial {
    type Err = ParseFailure;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_polynomial(s)
    }
}

/// Serialized in canonical text form.
impl serde::Serialize for Polynomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for Polynomial {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

impl From<i64> for Polynomial {
    fn from(n: i64) -> Self {
        Polynomial::int(n)
    }
}

impl From<Var> for Polynomial {
    fn from(v: Var) -> Self {
        Polynomial::var(v)
    }
}

impl AddAssign<&Polynomial> for Polynomial {
    fn add_assign(&mut self, rhs: &Polynomial) {
        for (m, c) in &rhs.terms {
            self.add_term(*m, c.clone());
        }
    }
}

impl SubAssign<&Polynomial> for Polynomial {
    fn sub_assign(&mut self, rhs: &Polynomial) {
        for (m, c) in &rhs.terms {
            self.add_term(*m, -c.clone());
        }
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut acc: HashMap<Monomial, Rational> =
            HashMap::with_capacity(self.terms.len() * rhs.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let prod = ca * cb;
                match acc.entry(ma.mul(mb)) {
                    std::collections::hash_map::Entry::Occupied(mut e) => *e.get_mut() += prod,
                    std::collections::hash_map::Entry::Vacant(e) => {
                        e.insert(prod);
                    }
                }
            }
        }
        Polynomial::from_map(acc)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            terms: self.terms.iter().map(|(m, c)| (*m, -c.clone())).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr for Polynomial {
            type Output = Polynomial;
            fn $f(self, rhs: Polynomial) -> Polynomial {
                (&self).$f(&rhs)
            }
        }
        impl $tr<&Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $f(self, rhs: &Polynomial) -> Polynomial {
                (&self).$f(rhs)
            }
        }
        impl $tr<Polynomial> for &Polynomial {
            type Output = Polynomial;
            fn $f(self, rhs: Polynomial) -> Polynomial {
                self.$f(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}
