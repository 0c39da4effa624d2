//! Integer Laurent polynomials in `d` commuting variables `u1, ..., ud`.
//!
//! Terms are kept in a `BTreeMap` keyed by exponent vectors in lexicographic
//! order, so iteration, equality and printing are deterministic. Coefficients
//! are arbitrary-precision integers; zero coefficients are never stored.

mod parse;
pub(crate) mod univariate;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

pub use parse::ParsePolyError;
pub use univariate::uni_gcd;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LaurentError {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("division is not exact")]
    NotExact,
    #[error("variable u{0} is zero but appears with a negative exponent")]
    ZeroCoordinate(usize),
    #[error("operation requires a univariate polynomial, got {0} variables")]
    NotUnivariate(usize),
}

/// Natural log of `|x|` from the bit length and the leading 64 bits.
/// Returns `-inf` for zero.
pub fn ln_abs(x: &BigInt) -> f64 {
    let bits = x.bits();
    if bits == 0 {
        return f64::NEG_INFINITY;
    }
    if bits <= 64 {
        return x.abs().to_f64().unwrap_or(f64::NAN).ln();
    }
    let shift = bits - 64;
    let top = (x.abs() >> shift).to_u64().expect("64 leading bits");
    (top as f64).ln() + shift as f64 * std::f64::consts::LN_2
}

/// Exponents of `u1 ... ud` in a single monomial.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Exponents(pub Vec<i64>);

impl Exponents {
    pub fn zero(dim: usize) -> Self {
        Exponents(vec![0; dim])
    }

    pub fn unit(dim: usize, var: usize) -> Self {
        let mut e = vec![0; dim];
        e[var] = 1;
        Exponents(e)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    fn plus(&self, other: &Exponents) -> Exponents {
        Exponents(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    fn minus(&self, other: &Exponents) -> Exponents {
        Exponents(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }
}

impl From<Vec<i64>> for Exponents {
    fn from(v: Vec<i64>) -> Self {
        Exponents(v)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    dim: usize,
    terms: BTreeMap<Exponents, BigInt>,
}

impl LaurentPoly {
    pub fn zero(dim: usize) -> Self {
        LaurentPoly { dim, terms: BTreeMap::new() }
    }

    pub fn one(dim: usize) -> Self {
        Self::constant(dim, 1)
    }

    pub fn constant(dim: usize, c: impl Into<BigInt>) -> Self {
        Self::monomial(dim, Exponents::zero(dim), c)
    }

    /// The variable `u_{var+1}` (zero-based index).
    pub fn var(dim: usize, var: usize) -> Self {
        assert!(var < dim, "variable index {var} out of range for {dim} variables");
        Self::monomial(dim, Exponents::unit(dim, var), 1)
    }

    pub fn monomial(dim: usize, exps: impl Into<Exponents>, c: impl Into<BigInt>) -> Self {
        let exps = exps.into();
        assert_eq!(exps.len(), dim, "exponent vector length must equal dim");
        let c = c.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps, c);
        }
        LaurentPoly { dim, terms }
    }

    /// Builds a polynomial from (exponents, coefficient) pairs, summing repeats.
    pub fn from_terms<E, C, I>(dim: usize, terms: I) -> Self
    where
        E: Into<Exponents>,
        C: Into<BigInt>,
        I: IntoIterator<Item = (E, C)>,
    {
        let mut p = LaurentPoly::zero(dim);
        for (e, c) in terms {
            let e = e.into();
            assert_eq!(e.len(), dim, "exponent vector length must equal dim");
            p.add_term(e, c.into());
        }
        p
    }

    /// Univariate polynomial from ascending coefficients `c0 + c1 t + ...`.
    pub fn from_coeffs<C: Into<BigInt> + Clone>(coeffs: &[C]) -> Self {
        Self::from_terms(1, coeffs.iter().enumerate().map(|(k, c)| (vec![k as i64], c.clone())))
    }

    fn add_term(&mut self, e: Exponents, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.iter().all(|(e, c)| c.is_one() && e.0.iter().all(|&x| x == 0))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending lexicographic exponent order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Exponents, &BigInt)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exps: &[i64]) -> BigInt {
        self.terms.get(&Exponents(exps.to_vec())).cloned().unwrap_or_default()
    }

    /// Lexicographically largest term.
    pub fn leading_term(&self) -> Option<(&Exponents, &BigInt)> {
        self.terms.iter().next_back()
    }

    /// True for `±u^a`.
    pub fn is_unit(&self) -> bool {
        self.terms.len() == 1 && self.terms.values().all(|c| c.abs().is_one())
    }

    /// gcd of all coefficients (zero for the zero polynomial).
    pub fn content(&self) -> BigInt {
        self.terms.values().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    pub fn min_exponents(&self) -> Option<Vec<i64>> {
        self.fold_exponents(i64::min)
    }

    pub fn max_exponents(&self) -> Option<Vec<i64>> {
        self.fold_exponents(i64::max)
    }

    fn fold_exponents(&self, f: fn(i64, i64) -> i64) -> Option<Vec<i64>> {
        let mut it = self.terms.keys();
        let first = it.next()?.0.clone();
        Some(it.fold(first, |acc, e| acc.iter().zip(&e.0).map(|(&a, &b)| f(a, b)).collect()))
    }

    pub fn scale(&self, c: &BigInt) -> LaurentPoly {
        if c.is_zero() {
            return LaurentPoly::zero(self.dim);
        }
        LaurentPoly { dim: self.dim, terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect() }
    }

    /// Multiplies by the monomial `u^shift`.
    pub fn shift(&self, shift: &[i64]) -> LaurentPoly {
        assert_eq!(shift.len(), self.dim);
        let s = Exponents(shift.to_vec());
        LaurentPoly { dim: self.dim, terms: self.terms.iter().map(|(e, c)| (e.plus(&s), c.clone())).collect() }
    }

    fn check_dim(&self, other: &LaurentPoly) -> Result<(), LaurentError> {
        if self.dim == other.dim {
            Ok(())
        } else {
            Err(LaurentError::DimensionMismatch(self.dim, other.dim))
        }
    }

    pub fn checked_add(&self, other: &LaurentPoly) -> Result<LaurentPoly, LaurentError> {
        self.check_dim(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &LaurentPoly) -> Result<LaurentPoly, LaurentError> {
        self.check_dim(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), -c);
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &LaurentPoly) -> Result<LaurentPoly, LaurentError> {
        self.check_dim(other)?;
        let mut out = LaurentPoly::zero(self.dim);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                out.add_term(ea.plus(eb), ca * cb);
            }
        }
        Ok(out)
    }

    pub fn arith(op: ArithOp, f: &LaurentPoly, g: &LaurentPoly) -> Result<LaurentPoly, LaurentError> {
        match op {
            ArithOp::Add => f.checked_add(g),
            ArithOp::Sub => f.checked_sub(g),
            ArithOp::Mul => f.checked_mul(g),
        }
    }

    pub fn pow(&self, n: u32) -> LaurentPoly {
        let mut acc = LaurentPoly::one(self.dim);
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Exact quotient `self / g` in the Laurent ring.
    ///
    /// Long division on lex-leading terms. Every candidate quotient monomial
    /// must stay inside the box `[min(f) - min(g), max(f) - max(g)]`, which any
    /// exact quotient satisfies, so the loop terminates on non-divisible input.
    pub fn exact_div(&self, g: &LaurentPoly) -> Result<LaurentPoly, LaurentError> {
        self.check_dim(g)?;
        if g.is_zero() {
            return Err(LaurentError::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(LaurentPoly::zero(self.dim));
        }
        let lo: Vec<i64> =
            (self.min_exponents().unwrap().iter()).zip(g.min_exponents().unwrap()).map(|(a, b)| a - b).collect();
        let hi: Vec<i64> =
            (self.max_exponents().unwrap().iter()).zip(g.max_exponents().unwrap()).map(|(a, b)| a - b).collect();
        let (g_lead_e, g_lead_c) = g.leading_term().map(|(e, c)| (e.clone(), c.clone())).unwrap();
        let mut rem = self.clone();
        let mut quot = LaurentPoly::zero(self.dim);
        while let Some((e, c)) = rem.leading_term() {
            let (q, r) = c.div_rem(&g_lead_c);
            if !r.is_zero() {
                return Err(LaurentError::NotExact);
            }
            let qe = e.minus(&g_lead_e);
            if qe.0.iter().zip(lo.iter().zip(&hi)).any(|(x, (l, h))| x < l || x > h) {
                return Err(LaurentError::NotExact);
            }
            for (ge, gc) in &g.terms {
                rem.add_term(qe.plus(ge), -(gc * &q));
            }
            quot.add_term(qe, q);
        }
        Ok(quot)
    }

    /// Evaluates at a complex point. Coordinates may be zero only for
    /// variables that never appear with a negative exponent.
    pub fn eval(&self, point: &[Complex64]) -> Result<Complex64, LaurentError> {
        if point.len() != self.dim {
            return Err(LaurentError::DimensionMismatch(self.dim, point.len()));
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for (e, c) in &self.terms {
            let mut term = Complex64::new(c.to_f64().unwrap_or(f64::NAN), 0.0);
            for (k, (&x, z)) in e.0.iter().zip(point).enumerate() {
                if x < 0 && z.norm_sqr() == 0.0 {
                    return Err(LaurentError::ZeroCoordinate(k + 1));
                }
                if x != 0 {
                    term *= z.powi(x as i32);
                }
            }
            acc += term;
        }
        Ok(acc)
    }

    /// Canonical representative of `{±u^a f}`: shift so every variable's
    /// minimum exponent is zero, then make the coefficient of the
    /// lexicographically smallest exponent vector positive.
    pub fn normalize(&self) -> LaurentPoly {
        let Some(min) = self.min_exponents() else {
            return self.clone();
        };
        let neg: Vec<i64> = min.iter().map(|x| -x).collect();
        let shifted = self.shift(&neg);
        let negative = shifted.terms.values().next().is_some_and(|c| c.is_negative());
        if negative {
            -&shifted
        } else {
            shifted
        }
    }

    /// Replaces each `u_i` by the monomial `u'^{images[i]}` in `new_dim` variables.
    pub fn substitute(&self, images: &[Vec<i64>], new_dim: usize) -> Result<LaurentPoly, LaurentError> {
        if images.len() != self.dim {
            return Err(LaurentError::DimensionMismatch(self.dim, images.len()));
        }
        if let Some(bad) = images.iter().find(|v| v.len() != new_dim) {
            return Err(LaurentError::DimensionMismatch(new_dim, bad.len()));
        }
        let mut out = LaurentPoly::zero(new_dim);
        for (e, c) in &self.terms {
            let mut ne = vec![0i64; new_dim];
            for (&a, img) in e.0.iter().zip(images) {
                for (slot, &b) in ne.iter_mut().zip(img) {
                    *slot += a * b;
                }
            }
            out.add_term(Exponents(ne), c.clone());
        }
        Ok(out)
    }

    /// Univariate ascending dense coefficients after dividing out the
    /// lowest power of `t`. Returns `(lowest exponent, coefficients)`.
    pub fn to_dense_univariate(&self) -> Result<(i64, Vec<BigInt>), LaurentError> {
        if self.dim != 1 {
            return Err(LaurentError::NotUnivariate(self.dim));
        }
        let Some(lo) = self.min_exponents().map(|v| v[0]) else {
            return Ok((0, Vec::new()));
        };
        let hi = self.max_exponents().unwrap()[0];
        let mut coeffs = vec![BigInt::zero(); (hi - lo + 1) as usize];
        for (e, c) in &self.terms {
            coeffs[(e.0[0] - lo) as usize] = c.clone();
        }
        Ok((lo, coeffs))
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.checked_add(rhs).expect("dimension mismatch in add")
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.checked_sub(rhs).expect("dimension mismatch in sub")
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.checked_mul(rhs).expect("dimension mismatch in mul")
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly { dim: self.dim, terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect() }
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

impl fmt::Display for LaurentPoly {
    /// Terms in descending lex order, e.g. `u1^2 - 3*u1 + 1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.terms.iter().rev().enumerate() {
            let mag = c.abs();
            if k == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let factors: Vec<String> =
                e.0.iter()
                    .enumerate()
                    .filter(|(_, &x)| x != 0)
                    .map(|(i, &x)| if x == 1 { format!("u{}", i + 1) } else { format!("u{}^{}", i + 1, x) })
                    .collect();
            if factors.is_empty() {
                write!(f, "{mag}")?;
            } else {
                if !mag.is_one() {
                    write!(f, "{mag}*")?;
                }
                write!(f, "{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}
