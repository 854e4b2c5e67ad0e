//! Quadrature over `ℂ^n` for kernels `|z|^{2λ} z^{-k} z̄^m`, the
//! Cauchy-Pompeiu check, and torus integrals for diagonal monomials.
//!
//! Each complex variable is integrated in polar coordinates: the trapezoid
//! rule in the angle and composite Gauss-Legendre on geometrically graded
//! panels in the radius. Error estimates compare against a coarser rule.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::integrand::{evaluate_terms, Evaluation, Term};
use crate::lambda::AffineForm;
use crate::quadrature::{radial_rule, trapezoid_angles};
use crate::testforms::{Profile, ProfileFactor, TestForm};

/// Parameters of the polar product rule.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureSpec {
    /// Gauss-Legendre order per radial panel.
    pub nodes_per_panel: usize,
    pub outer_panels: usize,
    /// Panels shrinking geometrically toward `r = 0`.
    pub graded_panels: usize,
    pub ratio: f64,
    /// Trapezoid nodes per circle.
    pub angular: usize,
    /// Per-coordinate truncation radius; `None` means "from the profiles".
    pub truncation: Vec<Option<f64>>,
    pub tol: f64,
    /// Cap on integrand evaluations, both rules counted.
    pub budget: u64,
    pub estimate_error: bool,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            nodes_per_panel: 10,
            outer_panels: 6,
            graded_panels: 20,
            ratio: 0.3,
            angular: 32,
            truncation: vec![],
            tol: 1e-8,
            budget: 200_000_000,
            estimate_error: true,
        }
    }
}

impl QuadratureSpec {
    /// A cheaper rule for three coupled variables.
    pub fn coarse() -> Self {
        QuadratureSpec {
            nodes_per_panel: 6,
            outer_panels: 5,
            graded_panels: 8,
            ratio: 0.25,
            angular: 24,
            tol: 1e-4,
            ..Self::default()
        }
    }

    pub fn with_truncation(mut self, t: Vec<Option<f64>>) -> Self {
        self.truncation = t;
        self
    }

    /// Doubles the resolution in every direction.
    pub fn refined(&self) -> Self {
        QuadratureSpec {
            nodes_per_panel: self.nodes_per_panel + 4,
            outer_panels: self.outer_panels * 2,
            graded_panels: self.graded_panels + self.graded_panels / 2,
            angular: self.angular * 2,
            ..self.clone()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.nodes_per_panel < 4 || self.angular < 4 {
            return Err(Error::Precondition(format!(
                "quadrature orders must be at least 4 (radial {}, angular {})",
                self.nodes_per_panel, self.angular
            )));
        }
        if !(self.ratio > 0.0 && self.ratio < 1.0) {
            return Err(Error::Precondition(format!("panel ratio {} not in (0, 1)", self.ratio)));
        }
        if self.truncation.iter().flatten().any(|r| !(*r > 0.0)) {
            return Err(Error::Precondition("truncation radii must be positive".into()));
        }
        Ok(())
    }

    /// Evaluation count of one fine plus one coarse rule in one variable.
    pub fn nodes_per_variable(&self) -> u64 {
        let fine = (self.nodes_per_panel * (self.outer_panels + self.graded_panels) * self.angular) as u64;
        if self.estimate_error {
            let coarse =
                ((self.nodes_per_panel - 2) * (self.outer_panels + self.graded_panels) * (self.angular * 3 / 4).max(4)) as u64;
            fine + coarse
        } else {
            fine
        }
    }
}

/// `|z|^{2λ} z^{-k} z̄^m` on `ℂ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingularKernel1D {
    pub lambda: Complex64,
    pub k: u32,
    pub mbar: u32,
}

impl SingularKernel1D {
    pub fn new(lambda: Complex64, k: u32, mbar: u32) -> Self {
        SingularKernel1D { lambda, k, mbar }
    }

    /// Locally integrable iff `2 Re λ - k + m > -2`.
    pub fn is_integrable(&self) -> bool {
        2.0 * self.lambda.re - self.k as f64 + self.mbar as f64 > -2.0
    }
}

/// `ε = (ε_1, …, ε_m)` in the closed first octant.
#[derive(Debug, Clone, PartialEq)]
pub struct EpsPoint(pub Vec<f64>);

impl EpsPoint {
    pub fn new(eps: Vec<f64>) -> Result<Self> {
        if let Some(e) = eps.iter().find(|e| !(**e >= 0.0) || !e.is_finite()) {
            return Err(Error::Precondition(format!("ε entries must be finite and ≥ 0, got {e}")));
        }
        Ok(EpsPoint(eps))
    }

    pub fn is_interior(&self) -> bool {
        self.0.iter().all(|&e| e > 0.0)
    }
}

fn within_tol(e: &Evaluation, tol: f64) -> bool {
    e.err <= tol * e.value.norm().max(1.0)
}

/// Evaluates, refining up to twice until the error estimate meets `tol`
/// (relative to `max(|value|, 1)`).
fn evaluate_refined(terms: &[Term], lam: &[Complex64], spec: &QuadratureSpec) -> Result<Evaluation> {
    let mut s = spec.clone();
    let mut last = None;
    for _ in 0..3 {
        let e = evaluate_terms(terms, lam, &[], &s)?;
        if !s.estimate_error || within_tol(&e, spec.tol) {
            return Ok(e);
        }
        last = Some(e);
        s = s.refined();
    }
    let e = last.unwrap();
    Err(Error::Tolerance { tol: spec.tol, estimate: format!("{}", e.value), err: e.err })
}

/// `∫_ℂ |z|^{2λ} z^{-k} z̄^m f(z) dA`.
///
/// ```
/// use num_complex::Complex64;
/// use residue_core::integrate::{quad1d, QuadratureSpec, SingularKernel1D};
/// use residue_core::testforms::Profile;
///
/// let disk = Profile::constant(Complex64::new(1.0, 0.0));
/// let spec = QuadratureSpec::default().with_truncation(vec![Some(1.0)]);
/// let v = quad1d(&SingularKernel1D::new(Complex64::new(1.0, 0.0), 0, 0), &disk, &spec).unwrap();
/// assert!((v.value.re - std::f64::consts::PI / 2.0).abs() < 1e-10);
/// ```
pub fn quad1d(kernel: &SingularKernel1D, data: &Profile, spec: &QuadratureSpec) -> Result<Evaluation> {
    if !kernel.is_integrable() {
        return Err(Error::NonIntegrable {
            p: -(kernel.k as i32),
            q: kernel.mbar as i32,
            reason: format!("2Re λ - k + m = {} ≤ -2", 2.0 * kernel.lambda.re - kernel.k as f64 + kernel.mbar as f64),
        });
    }
    let mut t = Term::plain(1, 1, Complex64::new(1.0, 0.0), vec![ProfileFactor::in_var(Arc::new(data.clone()), 1, 0)]);
    t.s = vec![AffineForm::lambda(1, 0)];
    t.p = vec![-(kernel.k as i32)];
    t.q = vec![kernel.mbar as i32];
    evaluate_refined(&[t], &[kernel.lambda], spec)
}

/// `∫ (∂ψ/∂z̄)(1/z) dz ∧ dz̄`, which equals `2πi ψ(0)`.
///
/// ```
/// use num_complex::Complex64;
/// use residue_core::integrate::{cauchy_pompeiu, QuadratureSpec};
/// use residue_core::testforms::Profile;
///
/// let psi = Profile::gaussian(Complex64::new(0.0, 0.0), 1.0, Complex64::new(1.0, 0.0));
/// let v = cauchy_pompeiu(&psi, &QuadratureSpec::default()).unwrap();
/// assert!((v.value - Complex64::new(0.0, 2.0 * std::f64::consts::PI)).norm() < 1e-9);
/// ```
pub fn cauchy_pompeiu(psi: &Profile, spec: &QuadratureSpec) -> Result<Evaluation> {
    let f = ProfileFactor::in_var(Arc::new(psi.clone()), 1, 0).dbar_of();
    let mut t = Term::plain(1, 0, Complex64::new(0.0, -2.0), vec![f]);
    t.p = vec![-1];
    evaluate_refined(&[t], &[], spec)
}

/// Nested polar quadrature of an arbitrary integrand over the polydisc
/// given by `spec.truncation`, which must be set for every coordinate.
pub fn quad_nested(
    n: usize,
    integrand: &(dyn Fn(&[Complex64]) -> Complex64 + Sync),
    spec: &QuadratureSpec,
) -> Result<Evaluation> {
    spec.validate()?;
    let radii: Vec<f64> = (0..n)
        .map(|k| {
            spec.truncation
                .get(k)
                .copied()
                .flatten()
                .ok_or_else(|| Error::Precondition(format!("quad_nested needs a truncation radius for z{}", k + 1)))
        })
        .collect::<Result<_>>()?;
    let per = spec.nodes_per_variable();
    let total = (0..n).try_fold(1u64, |acc, _| acc.checked_mul(per)).unwrap_or(u64::MAX);
    if total > spec.budget {
        return Err(Error::Budget { requested: total, budget: spec.budget });
    }
    let grid = |coarse: bool| -> Vec<Vec<(Complex64, f64)>> {
        let (m, a) = if coarse {
            (spec.nodes_per_panel - 2, (spec.angular * 3 / 4).max(4))
        } else {
            (spec.nodes_per_panel, spec.angular)
        };
        radii
            .iter()
            .map(|&r| {
                let rr = radial_rule(r, spec.outer_panels, spec.graded_panels, spec.ratio, m);
                let ang = trapezoid_angles(a);
                let mut v = Vec::with_capacity(rr.len() * ang.len());
                for (&x, &w) in rr.nodes.iter().zip(&rr.weights) {
                    for &(th, wt) in &ang {
                        v.push((Complex64::from_polar(x, th), w * wt * x));
                    }
                }
                v
            })
            .collect()
    };
    fn rec(
        g: &[Vec<(Complex64, f64)>],
        level: usize,
        z: &mut Vec<Complex64>,
        w: f64,
        f: &(dyn Fn(&[Complex64]) -> Complex64 + Sync),
    ) -> Complex64 {
        if level == g.len() {
            return w * f(z);
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for &(zk, wk) in &g[level] {
            z[level] = zk;
            acc += rec(g, level + 1, z, w * wk, f);
        }
        acc
    }
    let mut z = vec![Complex64::new(0.0, 0.0); n];
    let fine = rec(&grid(false), 0, &mut z, 1.0, integrand);
    let err = if spec.estimate_error {
        (fine - rec(&grid(true), 0, &mut z, 1.0, integrand)).norm()
    } else {
        0.0
    };
    Ok(Evaluation { value: fine, err, nodes: total })
}

/// `∫_{T_ε} φ / (f_1 ⋯ f_n)` for `f_j = z_j^{a_j}` on the torus
/// `|z_j| = ε_j^{1/(2 a_j)}`; `φ` must be of bidegree `(n, 0)`.
pub fn tube_residue_diagonal(exponents: &[Vec<u32>], t: &TestForm, eps: &EpsPoint, spec: &QuadratureSpec) -> Result<Complex64> {
    let n = t.n;
    if exponents.len() != n || eps.0.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: exponents.len().min(eps.0.len()) });
    }
    if t.q != 0 {
        return Err(Error::Bidegree(format!("tube integrals need an (n, 0) form, got (n, {})", t.q)));
    }
    let mut power = vec![0u32; n];
    for (j, a) in exponents.iter().enumerate() {
        let supp: Vec<usize> = (0..a.len()).filter(|&k| a[k] > 0).collect();
        if a.len() != n || supp.len() != 1 || power[supp[0]] != 0 {
            return Err(Error::Precondition(format!(
                "f{} is not a power of its own coordinate; use the Mellin or cutoff route",
                j + 1
            )));
        }
        power[supp[0]] = a[supp[0]];
    }
    if !eps.is_interior() {
        return Err(Error::Precondition("the tube degenerates when some ε_j = 0".into()));
    }
    let radius: Vec<f64> = (0..n)
        .map(|k| {
            let j = exponents.iter().position(|a| a[k] > 0).unwrap();
            eps.0[j].powf(1.0 / (2.0 * power[k] as f64))
        })
        .collect();
    let ang = trapezoid_angles(spec.angular.max(4));
    let total = (ang.len() as u64).saturating_pow(n as u32);
    if total > spec.budget {
        return Err(Error::Budget { requested: total, budget: spec.budget });
    }
    // dz_k = i z_k dθ_k
    let mut acc = Complex64::new(0.0, 0.0);
    let mut idx = vec![0usize; n];
    let mut z = vec![Complex64::new(0.0, 0.0); n];
    loop {
        let mut w = Complex64::new(1.0, 0.0);
        for k in 0..n {
            let (th, wt) = ang[idx[k]];
            z[k] = Complex64::from_polar(radius[k], th);
            w *= Complex64::new(0.0, wt) * z[k].powi(1 - power[k] as i32);
        }
        let g: Complex64 = t.summands.iter().map(|s| s.scalar(&z)).sum();
        acc += w * g;
        let mut k = 0;
        while k < n {
            idx[k] += 1;
            if idx[k] < ang.len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
        if k == n {
            break;
        }
    }
    Ok(acc)
}

/// `(2πi)^n`.
pub fn two_pi_i_pow(n: u32) -> Complex64 {
    Complex64::new(0.0, 2.0 * PI).powu(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integrability_boundary() {
        assert!(SingularKernel1D::new(Complex64::new(0.0, 0.0), 1, 0).is_integrable());
        assert!(!SingularKernel1D::new(Complex64::new(0.0, 0.0), 2, 0).is_integrable());
        assert!(SingularKernel1D::new(Complex64::new(0.1, 0.0), 2, 0).is_integrable());
    }

    #[test]
    fn radial_data_kills_odd_modes() {
        let g = Profile::gaussian(Complex64::new(0.0, 0.0), 1.0, Complex64::new(1.0, 0.0));
        let v = quad1d(&SingularKernel1D::new(Complex64::new(0.0, 0.0), 1, 0), &g, &QuadratureSpec::default()).unwrap();
        assert!(v.value.norm() < 1e-12);
    }
}
