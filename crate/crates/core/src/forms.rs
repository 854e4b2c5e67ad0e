//! Holomorphic k-forms with polynomial coefficients.
//!
//! A form is stored as a map from strictly increasing index sets `K` to the
//! coefficient of `dz_K`. Zero coefficients are dropped, so two forms are
//! equal exactly when their maps are equal.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::poly::{coeff, fmt_coeff, Coeff, ExponentVector, SparsePoly};

/// Sign of the permutation sorting the concatenation `a ++ b`, or `None`
/// when the two index sets intersect.
pub fn merge_sign(a: &[usize], b: &[usize]) -> Option<(i32, Vec<usize>)> {
    let mut inversions = 0usize;
    for &x in a {
        for &y in b {
            if x == y {
                return None;
            }
            if x > y {
                inversions += 1;
            }
        }
    }
    let mut merged: Vec<usize> = a.iter().chain(b).copied().collect();
    merged.sort_unstable();
    Some((if inversions % 2 == 0 { 1 } else { -1 }, merged))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExteriorForm {
    n: usize,
    k: usize,
    comps: BTreeMap<Vec<usize>, SparsePoly>,
}

impl ExteriorForm {
    pub fn zero(n: usize, k: usize) -> Self {
        ExteriorForm { n, k, comps: BTreeMap::new() }
    }

    /// The 0-form given by a polynomial.
    pub fn function(p: SparsePoly) -> Self {
        let mut f = Self::zero(p.dim(), 0);
        f.add_component(vec![], p);
        f
    }

    /// `dz_i` (zero-based index).
    pub fn dz(n: usize, i: usize) -> Self {
        Self::basis(n, &[i])
    }

    /// `dz_{i1} ∧ ... ∧ dz_{ik}` in the given order, sign normalized.
    pub fn basis(n: usize, idx: &[usize]) -> Self {
        let mut f = Self::zero(n, idx.len());
        let mut sorted: Vec<usize> = Vec::with_capacity(idx.len());
        let mut sign = 1;
        for &i in idx {
            assert!(i < n, "index out of range");
            match merge_sign(&sorted, &[i]) {
                None => return f,
                Some((s, m)) => {
                    sign *= s;
                    sorted = m;
                }
            }
        }
        f.add_component(sorted, SparsePoly::constant(n, coeff(sign as i64)));
        f
    }

    /// `p dz_K` for an already sorted index set.
    pub fn term(p: SparsePoly, k_set: Vec<usize>) -> Self {
        let n = p.dim();
        let mut f = Self::zero(n, k_set.len());
        f.add_component(k_set, p);
        f
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.k
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    pub fn components(&self) -> impl Iterator<Item = (&Vec<usize>, &SparsePoly)> {
        self.comps.iter()
    }

    pub fn component(&self, k_set: &[usize]) -> Option<&SparsePoly> {
        self.comps.get(k_set)
    }

    pub fn add_component(&mut self, k_set: Vec<usize>, p: SparsePoly) {
        assert_eq!(k_set.len(), self.k, "component degree must match form degree");
        assert!(k_set.windows(2).all(|w| w[0] < w[1]), "index set must be increasing");
        assert_eq!(p.dim(), self.n);
        if p.is_zero() {
            return;
        }
        let sum = match self.comps.get(&k_set) {
            Some(q) => q + &p,
            None => p,
        };
        if sum.is_zero() {
            self.comps.remove(&k_set);
        } else {
            self.comps.insert(k_set, sum);
        }
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: other.n });
        }
        if self.k != other.k && !(self.is_zero() || other.is_zero()) {
            return Err(Error::Precondition(format!(
                "cannot add forms of degree {} and {}",
                self.k, other.k
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        if self.is_zero() {
            return Ok(other.clone());
        }
        let mut out = self.clone();
        for (k, p) in &other.comps {
            out.add_component(k.clone(), p.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale_poly(&SparsePoly::constant(self.n, coeff(-1)))
    }

    pub fn scale_poly(&self, p: &SparsePoly) -> Self {
        let mut out = Self::zero(self.n, self.k);
        for (k, q) in &self.comps {
            out.add_component(k.clone(), q * p);
        }
        out
    }

    pub fn scale(&self, c: &Coeff) -> Self {
        self.scale_poly(&SparsePoly::constant(self.n, c.clone()))
    }

    /// Exterior product with exact sign bookkeeping.
    pub fn wedge(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: other.n });
        }
        let mut out = Self::zero(self.n, self.k + other.k);
        for (ka, pa) in &self.comps {
            for (kb, pb) in &other.comps {
                if let Some((s, merged)) = merge_sign(ka, kb) {
                    let prod = (pa * pb).scale(&coeff(s as i64));
                    out.add_component(merged, prod);
                }
            }
        }
        Ok(out)
    }

    /// Exterior derivative `d = Σ_i ∂_i dz_i ∧ ·`.
    pub fn exterior_d(&self) -> Self {
        let mut out = Self::zero(self.n, self.k + 1);
        for (kset, p) in &self.comps {
            for i in 0..self.n {
                let dp = p.derivative(i);
                if dp.is_zero() {
                    continue;
                }
                if let Some((s, merged)) = merge_sign(&[i], kset) {
                    out.add_component(merged, dp.scale(&coeff(s as i64)));
                }
            }
        }
        out
    }

    /// Pulls back to `V_J = {z_j = 0, j ∈ J}` and extends constantly:
    /// sets `z_j = 0` and `dz_j = 0` for all `j ∈ J`.
    pub fn restrict_extend(&self, idx: &[usize]) -> Self {
        let mut out = Self::zero(self.n, self.k);
        for (kset, p) in &self.comps {
            if kset.iter().any(|i| idx.contains(i)) {
                continue;
            }
            out.add_component(kset.clone(), p.set_zero(idx));
        }
        out
    }

    /// Vanishing on the normal crossings divisor of a monomial: the pullback
    /// to every hyperplane `z_i = 0` with `a_i > 0` is zero.
    pub fn vanishes_on(&self, d: &DivisorSpec) -> bool {
        d.components().iter().all(|&i| self.restrict_extend(&[i]).is_zero())
    }

    /// Divisibility form of the same test: every component without `dz_i`
    /// has coefficient divisible by `z_i`.
    pub fn vanishes_on_divisibility(&self, d: &DivisorSpec) -> bool {
        d.components().iter().all(|&i| {
            self.comps
                .iter()
                .filter(|(k, _)| !k.contains(&i))
                .all(|(_, p)| p.divisible_by_var(i))
        })
    }

    /// `(dz_i / z_i) ∧ self` when it has polynomial coefficients.
    pub fn dlog_wedge(&self, i: usize) -> Option<Self> {
        let w = Self::dz(self.n, i).wedge(self).ok()?;
        let mut out = Self::zero(self.n, w.k);
        for (k, p) in &w.comps {
            out.add_component(k.clone(), p.div_var(i).ok()?);
        }
        Some(out)
    }

    /// Exact division of every coefficient by `z^m`.
    pub fn div_monomial(&self, m: &ExponentVector) -> Option<Self> {
        let mut out = Self::zero(self.n, self.k);
        for (k, p) in &self.comps {
            out.add_component(k.clone(), p.div_monomial(m)?);
        }
        Some(out)
    }

    pub fn pullback(&self, m: &MonomialMap) -> Result<Self> {
        if m.n_target != self.n {
            return Err(Error::DimensionMismatch { expected: m.n_target, found: self.n });
        }
        let images = m.image_polys();
        let dimages: Vec<ExteriorForm> =
            images.iter().map(|p| ExteriorForm::function(p.clone()).exterior_d()).collect();
        let mut out = Self::zero(m.n_source, self.k);
        for (kset, p) in &self.comps {
            let mut acc = ExteriorForm::function(p.compose(&images)?);
            for &i in kset {
                acc = acc.wedge(&dimages[i])?;
            }
            out = out.add(&acc)?;
        }
        out.k = self.k;
        Ok(out)
    }

    /// Coefficient-wise complex conjugation, used to build `ϕ̄`.
    pub fn conj_coeffs(&self) -> Self {
        let mut out = Self::zero(self.n, self.k);
        for (k, p) in &self.comps {
            out.add_component(k.clone(), p.conj_coeffs());
        }
        out
    }

    /// Relabels coordinates: variable `i` becomes `perm[i]`.
    pub fn permute(&self, perm: &[usize]) -> Self {
        let mut out = Self::zero(self.n, self.k);
        for (kset, p) in &self.comps {
            let q = SparsePoly::from_terms(
                self.n,
                p.terms().map(|(e, c)| {
                    let mut e2 = vec![0; self.n];
                    for (i, &x) in e.0.iter().enumerate() {
                        e2[perm[i]] = x;
                    }
                    (ExponentVector(e2), c.clone())
                }),
            );
            let mapped: Vec<usize> = kset.iter().map(|&i| perm[i]).collect();
            let b = Self::basis(self.n, &mapped);
            out = out.add(&b.scale_poly(&q)).expect("same dimension");
        }
        out.k = self.k;
        out
    }

    pub fn max_degree(&self) -> u32 {
        self.comps.values().map(|p| p.max_degree()).max().unwrap_or(0)
    }
}

/// `{z^a = 0}`, the union of the hyperplanes `z_i = 0` with `a_i > 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisorSpec {
    monomial: ExponentVector,
}

impl DivisorSpec {
    pub fn new(monomial: ExponentVector) -> Result<Self> {
        if monomial.support().is_empty() {
            return Err(Error::Precondition("divisor monomial has no positive entry".into()));
        }
        Ok(DivisorSpec { monomial })
    }

    /// The reduced divisor `∪_{i ∈ idx} {z_i = 0}`.
    pub fn from_indices(n: usize, idx: &[usize]) -> Result<Self> {
        let mut e = vec![0; n];
        for &i in idx {
            if i >= n {
                return Err(Error::IndexOutOfRange { index: i, dim: n });
            }
            e[i] = 1;
        }
        Self::new(ExponentVector(e))
    }

    pub fn monomial(&self) -> &ExponentVector {
        &self.monomial
    }

    pub fn components(&self) -> Vec<usize> {
        self.monomial.support()
    }
}

/// Indices `k` such that exactly one of the monomials has `a_k > 0`.
pub fn simple_factors(monomials: &[ExponentVector]) -> Vec<usize> {
    let n = monomials.first().map(|m| m.dim()).unwrap_or(0);
    (0..n)
        .filter(|&k| monomials.iter().filter(|m| m.get(k) > 0).count() == 1)
        .collect()
}

/// A map whose components are single monomials `c_i z^{e_i}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialMap {
    pub n_source: usize,
    pub n_target: usize,
    pub images: Vec<(ExponentVector, Coeff)>,
}

impl MonomialMap {
    pub fn new(n_source: usize, images: Vec<(ExponentVector, Coeff)>) -> Result<Self> {
        for (e, _) in &images {
            if e.dim() != n_source {
                return Err(Error::DimensionMismatch { expected: n_source, found: e.dim() });
            }
        }
        Ok(MonomialMap { n_source, n_target: images.len(), images })
    }

    /// Unit-coefficient monomial map from exponent rows.
    pub fn from_exponents(n_source: usize, rows: &[Vec<u32>]) -> Result<Self> {
        Self::new(
            n_source,
            rows.iter().map(|r| (ExponentVector(r.clone()), coeff(1))).collect(),
        )
    }

    pub fn identity(n: usize) -> Self {
        Self::new(n, (0..n).map(|i| (ExponentVector::unit(n, i), coeff(1))).collect())
            .expect("identity is well formed")
    }

    pub fn image_polys(&self) -> Vec<SparsePoly> {
        self.images
            .iter()
            .map(|(e, c)| SparsePoly::monomial(self.n_source, e.clone(), c.clone()))
            .collect()
    }

    /// `self ∘ inner`: first apply `inner`, then `self`.
    pub fn compose(&self, inner: &MonomialMap) -> Result<MonomialMap> {
        if inner.n_target != self.n_source {
            return Err(Error::DimensionMismatch { expected: self.n_source, found: inner.n_target });
        }
        let inner_polys = inner.image_polys();
        let mut images = Vec::with_capacity(self.n_target);
        for (e, c) in &self.images {
            let p = SparsePoly::monomial(self.n_source, e.clone(), c.clone()).compose(&inner_polys)?;
            let mut it = p.terms();
            let (e2, c2) = it.next().expect("product of monomials is a monomial");
            images.push((e2.clone(), c2.clone()));
        }
        MonomialMap::new(inner.n_source, images)
    }

    /// Evaluates the map at a numeric point.
    pub fn apply(&self, z: &[num_complex::Complex64]) -> Vec<num_complex::Complex64> {
        self.images
            .iter()
            .map(|(e, c)| crate::poly::coeff_to_f64(c) * e.eval(z))
            .collect()
    }
}

// ---------------------------------------------------------------------------
// Text format: `coef*z^(e1,...,en) dz{K}` terms joined by `+`.

impl fmt::Display for ExteriorForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (kset, p) in &self.comps {
            for (e, c) in p.terms() {
                if !first {
                    write!(f, " + ")?;
                }
                first = false;
                let ks: Vec<String> = kset.iter().map(|i| (i + 1).to_string()).collect();
                write!(f, "{}*z^{} dz{{{}}}", fmt_coeff(c), e, ks.join(","))?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

pub use crate::parse::parse_form;
