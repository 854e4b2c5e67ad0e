//! Smooth test forms built from one-variable profiles.
//!
//! A [`TestForm`] of bidegree `(n, q)` is a sum of summands
//! `c · z^a · z̄^b · ∏ f_i(u_i(z)) · dz_1∧…∧dz_n ∧ dz̄_K` where each `f_i` is a
//! [`Profile`] (possibly differentiated) evaluated at a holomorphic
//! polynomial argument `u_i`. The family is closed under `∂̄` and under
//! pullback by monomial maps.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::forms::{merge_sign, ExteriorForm, MonomialMap};
use crate::jet::Jet;
use crate::poly::{ExponentVector, SparsePoly};

/// Radial shape `R(t)` of a profile, `t = |u - u0|² / r²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Radial {
    /// `exp(-t)`, treated as supported in `t ≤ 64`.
    Gaussian,
    /// `exp(1 - 1/(1 - t))` on `t < 1`, zero outside.
    Bump,
    /// 1 for `√t ≤ inner`, 0 for `√t ≥ outer`, smooth in between.
    Plateau { inner: f64, outer: f64 },
    /// `1 - Plateau(1/t)`: the partner of `Plateau` under `u ↦ 1/u`.
    InvertedPlateau { inner: f64, outer: f64 },
    /// Identically 1; support comes from the quadrature truncation.
    Constant,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProfileKind {
    Gaussian,
    PolynomialGaussian,
    Bump,
    Plateau,
    InvertedPlateau,
    Constant,
}

/// `f(u) = c · P(w, w̄) · R(|w|²/r²)` with `w = u - u0`.
#[derive(Debug, Clone, PartialEq)]
pub struct Profile {
    pub radial: Radial,
    pub center: Complex64,
    pub radius: f64,
    pub scale: Complex64,
    /// Terms `(i, j, c)` of `P = Σ c w^i w̄^j`; empty means `P = 1`.
    pub poly: Vec<(u32, u32, Complex64)>,
}

pub(crate) fn smoothstep_jet(x: &Jet) -> Jet {
    // h(x) = g(x) / (g(x) + g(1-x)), g(x) = exp(-1/x)
    let order = x.order();
    let x0 = x.value();
    if x0 <= 0.0 {
        return Jet::constant(0.0, order);
    }
    if x0 >= 1.0 {
        return Jet::constant(1.0, order);
    }
    let g = |y: &Jet| y.recip().scale(-1.0).exp();
    let a = g(x);
    let b = g(&x.scale(-1.0).add_const(1.0));
    a.div(&(&a + &b))
}

fn binom(n: u32, k: u32) -> f64 {
    let mut r = 1.0;
    for i in 0..k {
        r = r * (n - i) as f64 / (i + 1) as f64;
    }
    r
}

fn falling(n: u32, k: u32) -> f64 {
    (0..k).map(|i| (n - i) as f64).product()
}

impl Profile {
    pub fn gaussian(center: Complex64, radius: f64, value: Complex64) -> Self {
        Profile { radial: Radial::Gaussian, center, radius, scale: value, poly: vec![] }
    }

    /// `Σ c w^i w̄^j · exp(-|w|²/r²)`.
    pub fn poly_gaussian(center: Complex64, radius: f64, poly: Vec<(u32, u32, Complex64)>) -> Self {
        Profile { radial: Radial::Gaussian, center, radius, scale: Complex64::new(1.0, 0.0), poly }
    }

    pub fn bump(center: Complex64, radius: f64, value: Complex64) -> Self {
        Profile { radial: Radial::Bump, center, radius, scale: value, poly: vec![] }
    }

    pub fn plateau(inner: f64, outer: f64) -> Self {
        Profile {
            radial: Radial::Plateau { inner, outer },
            center: Complex64::new(0.0, 0.0),
            radius: 1.0,
            scale: Complex64::new(1.0, 0.0),
            poly: vec![],
        }
    }

    pub fn inverted_plateau(inner: f64, outer: f64) -> Self {
        Profile { radial: Radial::InvertedPlateau { inner, outer }, ..Self::plateau(inner, outer) }
    }

    pub fn constant(c: Complex64) -> Self {
        Profile {
            radial: Radial::Constant,
            center: Complex64::new(0.0, 0.0),
            radius: 1.0,
            scale: c,
            poly: vec![],
        }
    }

    pub fn kind(&self) -> ProfileKind {
        match self.radial {
            Radial::Gaussian if self.poly.is_empty() => ProfileKind::Gaussian,
            Radial::Gaussian => ProfileKind::PolynomialGaussian,
            Radial::Bump => ProfileKind::Bump,
            Radial::Plateau { .. } => ProfileKind::Plateau,
            Radial::InvertedPlateau { .. } => ProfileKind::InvertedPlateau,
            Radial::Constant => ProfileKind::Constant,
        }
    }

    /// Radius in the `u` plane outside of which the profile is zero (or
    /// below `e^-64` relative, for Gaussians).
    pub fn support_radius(&self) -> Option<f64> {
        let r = match self.radial {
            Radial::Gaussian => {
                let deg = self.poly.iter().map(|(i, j, _)| i + j).max().unwrap_or(0);
                8.0 * self.radius * (1.0 + deg as f64 / 16.0)
            }
            Radial::Bump => self.radius,
            Radial::Plateau { outer, .. } => outer * self.radius,
            Radial::InvertedPlateau { inner, .. } => self.radius / inner,
            Radial::Constant => return None,
        };
        Some(self.center.norm() + r)
    }

    /// The value at the center, `c · P(0, 0) · R(0)`.
    pub fn center_value(&self) -> Complex64 {
        let p0 = if self.poly.is_empty() {
            Complex64::new(1.0, 0.0)
        } else {
            self.poly.iter().filter(|(i, j, _)| *i == 0 && *j == 0).map(|t| t.2).sum()
        };
        self.scale * p0 * self.radial_jet(0.0, 0).value()
    }

    fn radial_jet(&self, t: f64, order: usize) -> Jet {
        match self.radial {
            Radial::Gaussian => {
                let e = (-t).exp();
                Jet((0..=order)
                    .scan(e, |acc, k| {
                        let v = *acc;
                        *acc = -*acc / (k as f64 + 1.0);
                        Some(v)
                    })
                    .collect())
            }
            Radial::Bump => {
                if t >= 1.0 {
                    return Jet::constant(0.0, order);
                }
                let s = Jet::variable(t, order).scale(-1.0).add_const(1.0).recip();
                s.scale(-1.0).add_const(1.0).exp()
            }
            Radial::Plateau { inner, outer } => {
                let (a, b) = (inner * inner, outer * outer);
                let x = Jet::variable(t, order).add_const(-a).scale(1.0 / (b - a));
                smoothstep_jet(&x).scale(-1.0).add_const(1.0)
            }
            Radial::InvertedPlateau { inner, outer } => {
                let (a, b) = (inner * inner, outer * outer);
                // R(t) = h((1/t - a)/(b - a)); zero for t ≥ 1/a
                if t <= 1.0 / b {
                    return Jet::constant(1.0, order);
                }
                if t >= 1.0 / a {
                    return Jet::constant(0.0, order);
                }
                let y = Jet::variable(t, order).recip();
                smoothstep_jet(&y.add_const(-a).scale(1.0 / (b - a)))
            }
            Radial::Constant => Jet::constant(1.0, order),
        }
    }

    /// Mixed Wirtinger derivative `∂_u^p ∂_ū^q f` at `u`.
    pub fn derivative(&self, p: u32, q: u32, u: Complex64) -> Complex64 {
        let w = u - self.center;
        let x = w.norm_sqr();
        let r2 = self.radius * self.radius;
        let order = (p + q) as usize;
        // F^(j)(x) for F(x) = R(x / r²)
        let mut buf = [0.0f64; 16];
        let heap: Vec<f64>;
        let fj: &[f64] = if self.radial == Radial::Gaussian && order < buf.len() {
            let mut e = (-x / r2).exp();
            for b in buf.iter_mut().take(order + 1) {
                *b = e;
                e *= -1.0 / r2;
            }
            &buf[..=order]
        } else {
            let jet = self.radial_jet(x / r2, order);
            heap = (0..=order).map(|j| jet.derivative(j) / r2.powi(j as i32)).collect();
            &heap
        };
        if fj.iter().all(|v| *v == 0.0) {
            return Complex64::new(0.0, 0.0);
        }
        let wb = w.conj();
        // ∂^a ∂̄^b of F(w w̄)
        let radial_part = |a: u32, b: u32| -> Complex64 {
            let mut s = Complex64::new(0.0, 0.0);
            for k in 0..=a.min(b) {
                let c = binom(a, k) * falling(b, k);
                s += c * w.powu(b - k) * wb.powu(a - k) * fj[(a + b - k) as usize];
            }
            s
        };
        let total = if self.poly.is_empty() {
            radial_part(p, q)
        } else {
            let mut s = Complex64::new(0.0, 0.0);
            for &(i, j, c) in &self.poly {
                for a in 0..=p.min(i) {
                    for b in 0..=q.min(j) {
                        let dpoly = c * falling(i, a) * falling(j, b) * w.powu(i - a) * wb.powu(j - b);
                        s += binom(p, a) * binom(q, b) * dpoly * radial_part(p - a, q - b);
                    }
                }
            }
            s
        };
        self.scale * total
    }

    pub fn value(&self, u: Complex64) -> Complex64 {
        self.derivative(0, 0, u)
    }
}

/// A profile, differentiated `dp` times in `u` and `dq` times in `ū`,
/// evaluated at the holomorphic polynomial `arg`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProfileFactor {
    pub profile: Arc<Profile>,
    pub dp: u32,
    pub dq: u32,
    pub arg: SparsePoly,
}

impl ProfileFactor {
    pub fn new(profile: Arc<Profile>, arg: SparsePoly) -> Self {
        ProfileFactor { profile, dp: 0, dq: 0, arg }
    }

    /// The same profile in coordinate `i` of `ℂ^n`.
    pub fn in_var(profile: Arc<Profile>, n: usize, i: usize) -> Self {
        Self::new(profile, SparsePoly::var(n, i))
    }

    /// The `∂/∂ū`-derivative of the profile, kept structurally.
    pub fn dbar_of(mut self) -> Self {
        self.dq += 1;
        self
    }

    pub fn eval(&self, z: &[Complex64]) -> Complex64 {
        self.profile.derivative(self.dp, self.dq, self.arg.eval(z))
    }

    fn key(&self) -> String {
        format!("{:?}|{}|{}|{}", self.profile, self.arg, self.dp, self.dq)
    }
}

/// One summand `c z^a z̄^b ∏ f_i · dz ∧ dz̄_K`.
#[derive(Debug, Clone, PartialEq)]
pub struct Summand {
    pub coef: Complex64,
    pub zpow: Vec<u32>,
    pub zbar: Vec<u32>,
    pub factors: Vec<ProfileFactor>,
    /// Sorted anti-holomorphic indices `K`.
    pub anti: Vec<usize>,
}

impl Summand {
    pub fn scalar(&self, z: &[Complex64]) -> Complex64 {
        let mut v = self.coef;
        for (k, zk) in z.iter().enumerate() {
            if self.zpow[k] > 0 {
                v *= zk.powu(self.zpow[k]);
            }
            if self.zbar[k] > 0 {
                v *= zk.conj().powu(self.zbar[k]);
            }
        }
        for f in &self.factors {
            if v == Complex64::new(0.0, 0.0) {
                break;
            }
            v *= f.eval(z);
        }
        v
    }

    fn key(&self) -> String {
        let mut fk: Vec<String> = self.factors.iter().map(|f| f.key()).collect();
        fk.sort();
        format!("{:?}{:?}{:?}{}", self.zpow, self.zbar, self.anti, fk.join(";"))
    }
}

/// A test form of bidegree `(n, q)`; the holomorphic part is always
/// `dz_1 ∧ … ∧ dz_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct TestForm {
    pub n: usize,
    pub q: usize,
    pub summands: Vec<Summand>,
}

fn conj_monomials(p: &SparsePoly) -> Vec<(Vec<u32>, Complex64)> {
    p.to_numeric().into_iter().map(|(e, c)| (e, c.conj())).collect()
}

impl TestForm {
    pub fn zero(n: usize, q: usize) -> Self {
        TestForm { n, q, summands: vec![] }
    }

    /// `c · ∏ factors · dz ∧ dz̄_K`.
    pub fn product(n: usize, coef: Complex64, factors: Vec<ProfileFactor>, anti: Vec<usize>) -> Result<Self> {
        let mut anti = anti;
        anti.sort_unstable();
        anti.dedup();
        if let Some(&k) = anti.iter().find(|&&k| k >= n) {
            return Err(Error::IndexOutOfRange { index: k, dim: n });
        }
        for f in &factors {
            if f.arg.dim() != n {
                return Err(Error::DimensionMismatch { expected: n, found: f.arg.dim() });
            }
        }
        let q = anti.len();
        Ok(TestForm {
            n,
            q,
            summands: vec![Summand { coef, zpow: vec![0; n], zbar: vec![0; n], factors, anti }],
        })
    }

    pub fn bidegree(&self) -> (usize, usize) {
        (self.n, self.q)
    }

    pub fn is_zero(&self) -> bool {
        self.summands.is_empty()
    }

    pub fn add(&self, other: &TestForm) -> Result<TestForm> {
        if self.n != other.n || self.q != other.q {
            return Err(Error::Bidegree(format!(
                "cannot add ({}, {}) and ({}, {})",
                self.n, self.q, other.n, other.q
            )));
        }
        let mut s = self.clone();
        s.summands.extend(other.summands.iter().cloned());
        Ok(s.simplified())
    }

    pub fn scale(&self, c: Complex64) -> TestForm {
        let mut s = self.clone();
        for t in &mut s.summands {
            t.coef *= c;
        }
        s.simplified()
    }

    /// Multiplies every summand by `∏ factors`.
    pub fn mul_factors(&self, factors: &[ProfileFactor]) -> TestForm {
        let mut s = self.clone();
        for t in &mut s.summands {
            t.factors.extend(factors.iter().cloned());
        }
        s
    }

    /// Merges summands with identical structure and drops zero ones.
    pub fn simplified(&self) -> TestForm {
        let mut map: BTreeMap<String, Summand> = BTreeMap::new();
        for t in &self.summands {
            let mut t = t.clone();
            t.factors.sort_by_key(|f| f.key());
            map.entry(t.key())
                .and_modify(|e| e.coef += t.coef)
                .or_insert(t);
        }
        TestForm {
            n: self.n,
            q: self.q,
            summands: map.into_values().filter(|t| t.coef.norm() > 0.0).collect(),
        }
    }

    /// Numeric coefficients of `dz ∧ dz̄_K` at a point.
    pub fn evaluate(&self, z: &[Complex64]) -> Result<BTreeMap<Vec<usize>, Complex64>> {
        if z.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: z.len() });
        }
        let mut out = BTreeMap::new();
        for t in &self.summands {
            *out.entry(t.anti.clone()).or_insert(Complex64::new(0.0, 0.0)) += t.scalar(z);
        }
        Ok(out)
    }

    /// `∂̄` applied termwise with the chain rule through profile arguments.
    pub fn dbar(&self) -> Result<TestForm> {
        if self.q >= self.n {
            return Err(Error::Bidegree(format!("dbar of a ({}, {}) form", self.n, self.q)));
        }
        let n = self.n;
        // ∂̄_k g dz̄_k ∧ dz ∧ dz̄_K = (-1)^n ∂̄_k g dz ∧ dz̄_k ∧ dz̄_K
        let base_sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        let mut out = TestForm::zero(n, self.q + 1);
        for t in &self.summands {
            for k in 0..n {
                let Some((s, anti)) = merge_sign(&[k], &t.anti) else { continue };
                for mut d in dbar_scalar(t, k) {
                    d.coef *= base_sign * s as f64;
                    d.anti = anti.clone();
                    out.summands.push(d);
                }
            }
        }
        Ok(out.simplified())
    }

    /// Pullback by a monomial map with `n_source = n_target = n`.
    pub fn pullback(&self, m: &MonomialMap) -> Result<TestForm> {
        if m.n_target != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: m.n_target });
        }
        if m.n_source != m.n_target {
            return Err(Error::DimensionMismatch { expected: m.n_target, found: m.n_source });
        }
        let n = self.n;
        let images = m.image_polys();
        let all: Vec<usize> = (0..n).collect();
        let jac = ExteriorForm::basis(n, &all).pullback(m)?;
        let jac_terms = jac.component(&all).map(|p| p.to_numeric()).unwrap_or_default();
        let mut out = TestForm::zero(n, self.q);
        for t in &self.summands {
            // scalar part
            let mono = SparsePoly::monomial(n, ExponentVector(t.zpow.clone()), crate::poly::coeff(1))
                .compose(&images)?
                .to_numeric();
            let mono_bar = conj_monomials(
                &SparsePoly::monomial(n, ExponentVector(t.zbar.clone()), crate::poly::coeff(1))
                    .compose(&images)?,
            );
            let factors = t
                .factors
                .iter()
                .map(|f| Ok(ProfileFactor { arg: f.arg.compose(&images)?, ..f.clone() }))
                .collect::<Result<Vec<_>>>()?;
            let anti = ExteriorForm::basis(n, &t.anti).pullback(m)?;
            for (k_set, p) in anti.components() {
                for (eb, cb) in conj_monomials(p) {
                    for (ej, cj) in &jac_terms {
                        for (em, cm) in &mono {
                            for (emb, cmb) in &mono_bar {
                                let zpow: Vec<u32> = (0..n).map(|i| ej[i] + em[i]).collect();
                                let zbar: Vec<u32> = (0..n).map(|i| eb[i] + emb[i]).collect();
                                out.summands.push(Summand {
                                    coef: t.coef * cb * cj * cm * cmb,
                                    zpow,
                                    zbar,
                                    factors: factors.clone(),
                                    anti: k_set.clone(),
                                });
                            }
                        }
                    }
                }
            }
        }
        Ok(out.simplified())
    }

    /// Support radius of each coordinate implied by profiles whose argument
    /// confines it; `None` where no profile does.
    pub fn support_radii(&self) -> Vec<Option<f64>> {
        let lists: Vec<&[ProfileFactor]> = self.summands.iter().map(|t| t.factors.as_slice()).collect();
        support_radii(self.n, &lists)
    }
}

/// Per-coordinate support radius over a sum of products: a coordinate is
/// bounded when every product contains a factor confining it.
pub(crate) fn support_radii(n: usize, lists: &[&[ProfileFactor]]) -> Vec<Option<f64>> {
    let mut radii: Vec<Option<f64>> = vec![None; n];
    if lists.is_empty() {
        return radii;
    }
    for _ in 0..n + 1 {
        let mut next = vec![None; n];
        for (k, slot) in next.iter_mut().enumerate() {
            let mut worst: Option<f64> = Some(0.0);
            for factors in lists {
                let b = factors
                    .iter()
                    .filter_map(|f| confinement(f, k, &radii))
                    .fold(None, |acc: Option<f64>, x| Some(acc.map_or(x, |a| a.min(x))));
                worst = match (worst, b) {
                    (Some(w), Some(b)) => Some(w.max(b)),
                    _ => None,
                };
            }
            *slot = worst;
        }
        if next == radii {
            break;
        }
        radii = next;
    }
    radii
}

/// Bound on `|z_k|` forced by `f(arg) ≠ 0`, when `arg` has a pure power
/// `c z_k^e` and every other monomial avoids `z_k` and has bounded variables.
fn confinement(f: &ProfileFactor, k: usize, radii: &[Option<f64>]) -> Option<f64> {
    let b = f.profile.support_radius()?;
    let mut lead: Option<(f64, u32)> = None;
    let mut rest = 0.0;
    for (e, c) in f.arg.to_numeric() {
        if e[k] > 0 {
            if e.iter().enumerate().any(|(i, &x)| i != k && x > 0) || lead.is_some() {
                return None;
            }
            lead = Some((c.norm(), e[k]));
        } else {
            let mut m = c.norm();
            for (i, &x) in e.iter().enumerate() {
                if x > 0 {
                    m *= radii[i]?.powi(x as i32);
                }
            }
            rest += m;
        }
    }
    let (c, e) = lead?;
    Some(((b + rest) / c).powf(1.0 / e as f64))
}

/// `∂/∂z̄_k` of the scalar part of a summand, as a list of summands.
pub(crate) fn dbar_scalar(t: &Summand, k: usize) -> Vec<Summand> {
    let mut out = Vec::new();
    if t.zbar[k] > 0 {
        let mut d = t.clone();
        d.coef *= t.zbar[k] as f64;
        d.zbar[k] -= 1;
        out.push(d);
    }
    for (i, f) in t.factors.iter().enumerate() {
        let da = f.arg.derivative(k);
        if da.is_zero() {
            continue;
        }
        for (e, c) in conj_monomials(&da) {
            let mut d = t.clone();
            d.factors[i].dq += 1;
            d.coef *= c;
            for (j, x) in e.iter().enumerate() {
                d.zbar[j] += x;
            }
            out.push(d);
        }
    }
    out
}

/// `φ̃ ∧ ϕ̄` for a smooth `(n, 0)` form `φ̃` and a holomorphic
/// `(n-2)`-form `ϕ`.
pub fn product_split(phi_tilde: &TestForm, phi: &ExteriorForm) -> Result<TestForm> {
    let n = phi_tilde.n;
    if phi_tilde.q != 0 {
        return Err(Error::Bidegree(format!("expected an (n, 0) form, found ({}, {})", n, phi_tilde.q)));
    }
    if phi.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, found: phi.dim() });
    }
    if n < 2 || phi.degree() != n - 2 {
        return Err(Error::Bidegree(format!(
            "expected a holomorphic {}-form, found degree {}",
            n.saturating_sub(2),
            phi.degree()
        )));
    }
    let mut out = TestForm::zero(n, n - 2);
    for t in &phi_tilde.summands {
        for (k_set, p) in phi.components() {
            for (e, c) in conj_monomials(p) {
                let mut s = t.clone();
                s.coef *= c;
                for (j, x) in e.iter().enumerate() {
                    s.zbar[j] += x;
                }
                s.anti = k_set.clone();
                out.summands.push(s);
            }
        }
    }
    Ok(out.simplified())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_form;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn gaussian_value_at_center() {
        let p = Profile::gaussian(c(0.0, 0.0), 0.3, c(2.0, 0.0));
        assert_eq!(p.value(c(0.0, 0.0)), c(2.0, 0.0));
        assert_eq!(p.center_value(), c(2.0, 0.0));
    }

    fn check_fd(p: &Profile, pts: &[Complex64], five_point: bool) {
        let h = 1e-4;
        let i = c(0.0, 1.0);
        for &u in pts {
            for (dp, dq) in [(0, 0), (1, 0), (0, 1), (1, 1), (2, 1)] {
                let f = |v: Complex64| p.derivative(dp, dq, v);
                let diff = |e: Complex64| {
                    if five_point {
                        (8.0 * (f(u + e * h) - f(u - e * h)) - (f(u + e * 2.0 * h) - f(u - e * 2.0 * h)))
                            / (12.0 * h)
                    } else {
                        (f(u + e * h) - f(u - e * h)) / (2.0 * h)
                    }
                };
                let (dx, dy) = (diff(c(1.0, 0.0)), diff(i));
                let du = 0.5 * (dx - i * dy);
                let dub = 0.5 * (dx + i * dy);
                let exact = p.derivative(dp + 1, dq, u);
                assert!((du - exact).norm() < 1e-6 * (1.0 + exact.norm()), "{p:?} {u} {dp} {dq}");
                let exact = p.derivative(dp, dq + 1, u);
                assert!((dub - exact).norm() < 1e-6 * (1.0 + exact.norm()), "{p:?} {u} {dp} {dq}");
            }
        }
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let pts = [c(0.3, 0.2), c(-0.4, 0.1), c(0.7, 0.3), c(0.55, -0.1)];
        for p in [
            Profile::gaussian(c(0.2, -0.1), 0.7, c(1.0, 0.5)),
            Profile::poly_gaussian(c(0.0, 0.0), 0.8, vec![(0, 0, c(1.0, 0.0)), (2, 1, c(0.5, -1.0))]),
            Profile::bump(c(0.1, 0.0), 1.2, c(1.0, 0.0)),
        ] {
            check_fd(&p, &pts, false);
        }
        // the partition profiles have a steep transition; a five-point
        // stencil keeps the truncation error below the tolerance
        let pts = [c(1.7, 0.3), c(0.2, 0.6), c(0.55, -0.1), c(1.2, 1.1)];
        check_fd(&Profile::plateau(1.5, 2.0), &pts, true);
        check_fd(&Profile::inverted_plateau(1.5, 2.0), &pts, true);
    }

    #[test]
    fn dbar_of_one_variable_form() {
        let p = Arc::new(Profile::gaussian(c(0.1, 0.0), 1.0, c(1.0, 0.0)));
        let t = TestForm::product(1, c(1.0, 0.0), vec![ProfileFactor::in_var(p.clone(), 1, 0)], vec![]).unwrap();
        let d = t.dbar().unwrap();
        assert_eq!(d.bidegree(), (1, 1));
        // dz̄ ∧ dz = -dz ∧ dz̄
        let z = [c(0.3, 0.4)];
        let v = d.evaluate(&z).unwrap()[&vec![0]];
        assert!((v + p.derivative(0, 1, z[0])).norm() < 1e-15);
        assert!(d.dbar().is_err());
    }

    #[test]
    fn product_split_with_zero_form_is_zero() {
        let p = Arc::new(Profile::gaussian(c(0.0, 0.0), 1.0, c(1.0, 0.0)));
        let t = TestForm::product(3, c(1.0, 0.0), vec![ProfileFactor::in_var(p, 3, 0)], vec![]).unwrap();
        let zero = ExteriorForm::zero(3, 1);
        assert!(product_split(&t, &zero).unwrap().is_zero());
        let dz1 = parse_form("dz1", Some(3)).unwrap();
        let s = product_split(&t, &dz1).unwrap();
        assert_eq!(s.bidegree(), (3, 1));
        assert_eq!(s.summands[0].anti, vec![0]);
    }
}
