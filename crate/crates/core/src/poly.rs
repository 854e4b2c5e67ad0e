//! Exact sparse polynomials over the Gaussian rationals.
//!
//! Coordinates are indexed from zero in the API; the text format and all
//! user-facing output use `z1, z2, ...`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact complex rational coefficient.
pub type Coeff = Complex<BigRational>;

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn coeff(re: i64) -> Coeff {
    Complex::new(rat(re, 1), BigRational::zero())
}

pub fn coeff_c(re: BigRational, im: BigRational) -> Coeff {
    Complex::new(re, im)
}

pub fn coeff_is_zero(c: &Coeff) -> bool {
    c.re.is_zero() && c.im.is_zero()
}

pub fn coeff_to_f64(c: &Coeff) -> Complex64 {
    Complex64::new(
        c.re.to_f64().unwrap_or(f64::NAN),
        c.im.to_f64().unwrap_or(f64::NAN),
    )
}

pub fn coeff_conj(c: &Coeff) -> Coeff {
    Complex::new(c.re.clone(), -c.im.clone())
}

/// Multi-index `a = (a_1, ..., a_n)` of a monomial `z^a`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExponentVector(pub Vec<u32>);

impl ExponentVector {
    pub fn new(e: Vec<u32>) -> Self {
        ExponentVector(e)
    }

    pub fn zero(n: usize) -> Self {
        ExponentVector(vec![0; n])
    }

    /// The exponent vector of the single coordinate `z_i`.
    pub fn unit(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        ExponentVector(e)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Indices `i` with `a_i > 0`.
    pub fn support(&self) -> Vec<usize> {
        (0..self.0.len()).filter(|&i| self.0[i] > 0).collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        ExponentVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn get(&self, i: usize) -> u32 {
        self.0[i]
    }

    pub fn eval(&self, z: &[Complex64]) -> Complex64 {
        let mut v = Complex64::new(1.0, 0.0);
        for (zi, &e) in z.iter().zip(&self.0) {
            if e > 0 {
                v *= zi.powu(e);
            }
        }
        v
    }
}

impl fmt::Display for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, e) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

/// A sparse polynomial in `n` variables with exact coefficients.
///
/// Zero coefficients are never stored, so structural equality is
/// mathematical equality.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparsePoly {
    n: usize,
    terms: BTreeMap<ExponentVector, Coeff>,
}

impl SparsePoly {
    pub fn zero(n: usize) -> Self {
        SparsePoly { n, terms: BTreeMap::new() }
    }

    pub fn constant(n: usize, c: Coeff) -> Self {
        Self::monomial(n, ExponentVector::zero(n), c)
    }

    pub fn one(n: usize) -> Self {
        Self::constant(n, coeff(1))
    }

    pub fn monomial(n: usize, e: ExponentVector, c: Coeff) -> Self {
        assert_eq!(e.dim(), n, "exponent vector length must equal dimension");
        let mut p = Self::zero(n);
        if !coeff_is_zero(&c) {
            p.terms.insert(e, c);
        }
        p
    }

    /// The coordinate function `z_i`.
    pub fn var(n: usize, i: usize) -> Self {
        Self::monomial(n, ExponentVector::unit(n, i), coeff(1))
    }

    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = (ExponentVector, Coeff)>) -> Self {
        let mut p = Self::zero(n);
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ExponentVector, &Coeff)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn add_term(&mut self, e: ExponentVector, c: Coeff) {
        assert_eq!(e.dim(), self.n);
        if coeff_is_zero(&c) {
            return;
        }
        let remove = match self.terms.get_mut(&e) {
            Some(existing) => {
                *existing = &*existing + &c;
                coeff_is_zero(existing)
            }
            None => {
                self.terms.insert(e.clone(), c);
                false
            }
        };
        if remove {
            self.terms.remove(&e);
        }
    }

    pub fn scale(&self, c: &Coeff) -> Self {
        if coeff_is_zero(c) {
            return Self::zero(self.n);
        }
        SparsePoly {
            n: self.n,
            terms: self.terms.iter().map(|(e, a)| (e.clone(), a * c)).collect(),
        }
    }

    /// Partial derivative with respect to `z_i`.
    pub fn derivative(&self, i: usize) -> Self {
        let mut out = Self::zero(self.n);
        for (e, c) in &self.terms {
            let k = e.0[i];
            if k == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2.0[i] -= 1;
            out.add_term(e2, c * coeff(k as i64));
        }
        out
    }

    /// Substitutes `z_i := 0` for every `i` in `idx`.
    pub fn set_zero(&self, idx: &[usize]) -> Self {
        SparsePoly {
            n: self.n,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| idx.iter().all(|&i| e.0[i] == 0))
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    /// True iff `z_i` divides every term (vacuously true for zero).
    pub fn divisible_by_var(&self, i: usize) -> bool {
        self.terms.keys().all(|e| e.0[i] > 0)
    }

    /// Exact division by `z_i`; fails on the first term not divisible.
    pub fn div_var(&self, i: usize) -> Result<Self> {
        let mut out = Self::zero(self.n);
        for (e, c) in &self.terms {
            if e.0[i] == 0 {
                return Err(Error::Precondition(format!(
                    "term {} not divisible by z{}",
                    e,
                    i + 1
                )));
            }
            let mut e2 = e.clone();
            e2.0[i] -= 1;
            out.add_term(e2, c.clone());
        }
        Ok(out)
    }

    /// Exact division by the monomial `z^m`, if every term is divisible.
    pub fn div_monomial(&self, m: &ExponentVector) -> Option<Self> {
        let mut out = Self::zero(self.n);
        for (e, c) in &self.terms {
            if e.0.iter().zip(&m.0).any(|(a, b)| a < b) {
                return None;
            }
            let e2 = ExponentVector(e.0.iter().zip(&m.0).map(|(a, b)| a - b).collect());
            out.add_term(e2, c.clone());
        }
        Some(out)
    }

    pub fn mul_monomial(&self, m: &ExponentVector) -> Self {
        SparsePoly {
            n: self.n,
            terms: self.terms.iter().map(|(e, c)| (e.add(m), c.clone())).collect(),
        }
    }

    /// Substitutes each variable by a polynomial in `images[0].dim()` new variables.
    pub fn compose(&self, images: &[SparsePoly]) -> Result<Self> {
        if images.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: images.len() });
        }
        let m = images.first().map(|p| p.n).unwrap_or(0);
        let mut out = Self::zero(m);
        for (e, c) in &self.terms {
            let mut t = Self::constant(m, c.clone());
            for (i, &k) in e.0.iter().enumerate() {
                for _ in 0..k {
                    t = &t * &images[i];
                }
            }
            out = &out + &t;
        }
        Ok(out)
    }

    /// Coefficient-wise complex conjugate (as a polynomial in the same symbols).
    pub fn conj_coeffs(&self) -> Self {
        SparsePoly {
            n: self.n,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), coeff_conj(c))).collect(),
        }
    }

    pub fn eval(&self, z: &[Complex64]) -> Complex64 {
        self.terms.iter().map(|(e, c)| coeff_to_f64(c) * e.eval(z)).sum()
    }

    /// Floating point copy of the terms, for numeric kernels.
    pub fn to_numeric(&self) -> Vec<(Vec<u32>, Complex64)> {
        self.terms.iter().map(|(e, c)| (e.0.clone(), coeff_to_f64(c))).collect()
    }

    pub fn max_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.degree()).max().unwrap_or(0)
    }
}

impl Add for &SparsePoly {
    type Output = SparsePoly;
    fn add(self, rhs: &SparsePoly) -> SparsePoly {
        assert_eq!(self.n, rhs.n);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Sub for &SparsePoly {
    type Output = SparsePoly;
    fn sub(self, rhs: &SparsePoly) -> SparsePoly {
        self + &(-rhs)
    }
}

impl Neg for &SparsePoly {
    type Output = SparsePoly;
    fn neg(self) -> SparsePoly {
        SparsePoly {
            n: self.n,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c.clone())).collect(),
        }
    }
}

impl Mul for &SparsePoly {
    type Output = SparsePoly;
    fn mul(self, rhs: &SparsePoly) -> SparsePoly {
        assert_eq!(self.n, rhs.n);
        let mut out = SparsePoly::zero(self.n);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                out.add_term(e1.add(e2), c1 * c2);
            }
        }
        out
    }
}

pub(crate) fn fmt_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Formats a coefficient as `a`, `a*i`, or `(a+b*i)`.
pub fn fmt_coeff(c: &Coeff) -> String {
    match (c.re.is_zero(), c.im.is_zero()) {
        (_, true) => fmt_rational(&c.re),
        (true, false) => format!("{}*i", fmt_rational(&c.im)),
        (false, false) => {
            let sign = if c.im.is_negative() { "-" } else { "+" };
            format!("({}{}{}*i)", fmt_rational(&c.re), sign, fmt_rational(&c.im.abs()))
        }
    }
}

impl fmt::Display for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{}*z^{}", fmt_coeff(c), e)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivative_product_rule() {
        let n = 2;
        let z1 = SparsePoly::var(n, 0);
        let z2 = SparsePoly::var(n, 1);
        let p = &(&z1 * &z1) * &z2;
        assert_eq!(p.derivative(0), (&z1 * &z2).scale(&coeff(2)));
        assert_eq!(p.derivative(1), &z1 * &z1);
    }

    #[test]
    fn cancellation_leaves_no_zero_terms() {
        let z1 = SparsePoly::var(1, 0);
        let d = &z1 - &z1;
        assert!(d.is_zero());
        assert_eq!(d.num_terms(), 0);
    }

    #[test]
    fn divisibility_by_exponent_inspection() {
        let n = 2;
        let z1 = SparsePoly::var(n, 0);
        let z2 = SparsePoly::var(n, 1);
        let p = &(&z1 * &z2) + &z1;
        assert!(p.divisible_by_var(0));
        assert!(!p.divisible_by_var(1));
        assert_eq!(p.div_var(0).unwrap(), &z2 + &SparsePoly::one(n));
        assert!(p.div_var(1).is_err());
    }

    #[test]
    fn compose_with_blowup_chart() {
        // x3 -> z2 z3
        let x3 = SparsePoly::var(3, 2);
        let images = vec![
            SparsePoly::var(3, 0),
            SparsePoly::var(3, 1),
            &SparsePoly::var(3, 1) * &SparsePoly::var(3, 2),
        ];
        let p = x3.compose(&images).unwrap();
        assert_eq!(p, images[2]);
    }
}
