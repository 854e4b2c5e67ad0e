//! Regularization by cutoff functions: `χ(|z^a|²/ε)` families, evaluation
//! of the regularized integrals on the closed first octant, ε-path sweeps
//! with extrapolation, and Hölder exponent fits.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::integrand::{evaluate_terms, reduce_cutoff, Evaluation, Term};
use crate::integrate::{EpsPoint, QuadratureSpec};
use crate::jet::Jet;
use crate::mellin::{detect_resonance, expand, ChartSpec};
use crate::testforms::{smoothstep_jet, TestForm};

type Scalar = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
pub enum CutoffKind {
    /// `t / (1 + t)`
    Rational,
    /// `1 - e^{-t}`
    Exponential,
    /// Smooth step from 0 at `t0` to 1 at `t1`.
    Smoothstep { t0: f64, t1: f64 },
    /// User supplied `χ` and `χ̃`.
    Custom { name: String, chi: Scalar, chi_tilde: Scalar },
}

impl fmt::Debug for CutoffKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CutoffKind::Rational => write!(f, "rational"),
            CutoffKind::Exponential => write!(f, "exponential"),
            CutoffKind::Smoothstep { t0, t1 } => write!(f, "smoothstep({t0}, {t1})"),
            CutoffKind::Custom { name, .. } => write!(f, "custom({name})"),
        }
    }
}

/// A cutoff `χ` with `χ(0) = 0`, `χ(∞) = 1`, and its companion
/// `χ̃(t) = t χ'(t)`.
#[derive(Clone, Debug)]
pub struct CutoffSpec {
    pub kind: CutoffKind,
}

impl CutoffSpec {
    pub fn chi(&self, t: f64) -> f64 {
        match &self.kind {
            CutoffKind::Rational => t / (1.0 + t),
            CutoffKind::Exponential => -(-t).exp_m1(),
            CutoffKind::Smoothstep { t0, t1 } => smoothstep_jet(&Jet::variable((t - t0) / (t1 - t0), 0)).value(),
            CutoffKind::Custom { chi, .. } => chi(t),
        }
    }

    pub fn chi_tilde(&self, t: f64) -> f64 {
        match &self.kind {
            CutoffKind::Rational => t / ((1.0 + t) * (1.0 + t)),
            CutoffKind::Exponential => t * (-t).exp(),
            CutoffKind::Smoothstep { t0, t1 } => {
                let j = smoothstep_jet(&Jet::variable((t - t0) / (t1 - t0), 1));
                t * j.derivative(1) / (t1 - t0)
            }
            CutoffKind::Custom { chi_tilde, .. } => chi_tilde(t),
        }
    }

    pub fn name(&self) -> String {
        format!("{:?}", self.kind)
    }
}

/// Builds a cutoff and checks `χ(0) = 0`, `χ(10^8) ≈ 1` and that `χ̃` is
/// bounded with `χ̃(0) = 0` on a log grid over `[1e-8, 1e8]`.
pub fn make_cutoff(kind: CutoffKind) -> Result<CutoffSpec> {
    if let CutoffKind::Smoothstep { t0, t1 } = kind {
        if !(t0 >= 0.0 && t1 > t0) {
            return Err(Error::Cutoff(format!("smoothstep needs 0 ≤ t0 < t1, got ({t0}, {t1})")));
        }
    }
    let c = CutoffSpec { kind };
    if c.chi(0.0).abs() > 1e-12 {
        return Err(Error::Cutoff(format!("χ(0) = {} ≠ 0", c.chi(0.0))));
    }
    if (c.chi(1e8) - 1.0).abs() > 1e-7 {
        return Err(Error::Cutoff(format!("χ(1e8) = {} is not within 1e-7 of 1", c.chi(1e8))));
    }
    if c.chi_tilde(0.0).abs() > 1e-12 {
        return Err(Error::Cutoff("χ̃(0) ≠ 0".into()));
    }
    let mut max = 0.0f64;
    for k in 0..=1600 {
        let t = 10f64.powf(-8.0 + k as f64 * 0.01);
        let v = c.chi_tilde(t);
        if !v.is_finite() {
            return Err(Error::Cutoff(format!("χ̃({t:e}) is not finite")));
        }
        max = max.max(v.abs());
    }
    // tχ'(t) → 0 at both ends of the grid
    let tail = c.chi_tilde(1e8).abs().max(c.chi_tilde(1e-8).abs());
    if max > 1e3 || tail > 1e-4 {
        return Err(Error::Cutoff(format!("χ̃ is not bounded and decaying (max {max:e}, tail {tail:e})")));
    }
    Ok(c)
}

/// The regularized integral as reduced terms at a fixed `ε`.
pub fn reduce_regularized(chart: &ChartSpec, t: &TestForm, eps: &EpsPoint) -> Result<Vec<Term>> {
    let terms = reduce_cutoff(expand(chart, t, Some(&eps.0))?)?;
    for term in &terms {
        for k in 0..term.n {
            let cut = term.cutoffs.iter().any(|c| c.mono[k] > 0);
            if !cut && term.p[k] + term.q[k] <= -2 {
                return Err(Error::NonIntegrable {
                    p: term.p[k],
                    q: term.q[k],
                    reason: format!("z{} is not regularized by any cutoff at this ε", k + 1),
                });
            }
        }
    }
    Ok(terms)
}

/// `∫ ∏_{j∉D} χ_j(|f_j|²/ε_j) ∧_{j∈D} ∂̄χ_j(|f_j|²/ε_j) / (f_1 ⋯ f_m) ∧ φ`
/// on the chart, for `ε` in the closed first octant. Entries `ε_j = 0`
/// give the continuous extension: plain factors become 1 and `∂̄`-factors
/// are integrated by parts first.
pub fn reg_integral(
    chart: &ChartSpec,
    t: &TestForm,
    cutoffs: &[CutoffSpec],
    eps: &EpsPoint,
    spec: &QuadratureSpec,
) -> Result<Evaluation> {
    if cutoffs.len() != chart.m() {
        return Err(Error::DimensionMismatch { expected: chart.m(), found: cutoffs.len() });
    }
    let terms = reduce_regularized(chart, t, eps)?;
    evaluate_terms(&terms, &[], cutoffs, spec)
}

#[derive(Debug, Clone, PartialEq)]
pub enum PathKind {
    /// `ε(δ) = (δ^{b_1}, …, δ^{b_m})`
    Parabolic(Vec<f64>),
    /// Iterated limits, innermost index first: `ε_{order[0]} → 0` at fixed
    /// outer entries, then `ε_{order[1]}`, and so on. Entries not listed stay
    /// at `base`.
    Iterated { order: Vec<usize>, base: Vec<f64> },
    /// `ε(δ) = target + δ (start - target)`
    Line { start: Vec<f64>, target: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct EpsPath {
    pub kind: PathKind,
    pub deltas: Vec<f64>,
}

impl EpsPath {
    pub fn new(kind: PathKind, deltas: Vec<f64>) -> Result<Self> {
        if deltas.len() < 3 {
            return Err(Error::Path("a δ-grid needs at least 3 points".into()));
        }
        if deltas.windows(2).any(|w| !(w[1] < w[0])) || deltas.iter().any(|d| !(*d > 0.0)) {
            return Err(Error::Path("δ-grid must be positive and strictly decreasing".into()));
        }
        match &kind {
            PathKind::Parabolic(b) if b.iter().any(|x| !(*x > 0.0)) => {
                return Err(Error::Path("parabolic exponents must be positive".into()))
            }
            PathKind::Iterated { order, base } => {
                let mut o = order.clone();
                o.sort_unstable();
                o.dedup();
                if o.len() != order.len() || order.iter().any(|&j| j >= base.len()) {
                    return Err(Error::Path("iterated order must list distinct factor indices".into()));
                }
            }
            PathKind::Line { start, target } => {
                if start.len() != target.len() || target.iter().chain(start).any(|x| !(*x >= 0.0)) {
                    return Err(Error::Path("line endpoints must lie in the closed octant".into()));
                }
            }
            _ => {}
        }
        Ok(EpsPath { kind, deltas })
    }

    /// Geometric grid `δ_0 q^i`, `i < count`.
    pub fn geometric(start: f64, q: f64, count: usize) -> Vec<f64> {
        (0..count).map(|i| start * q.powi(i as i32)).collect()
    }

    fn limit_point(&self, m: usize) -> Vec<f64> {
        match &self.kind {
            PathKind::Line { target, .. } => target.clone(),
            PathKind::Iterated { order, base } => {
                let mut e = base.clone();
                for &j in order {
                    e[j] = 0.0;
                }
                e
            }
            PathKind::Parabolic(_) => vec![0.0; m],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub delta: f64,
    pub eps: Vec<f64>,
    pub value: Complex64,
    pub err: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Extrapolation {
    pub limit: Complex64,
    pub err: f64,
}

/// Limit of `v(δ_i)` on a geometric grid by Wynn's ε-algorithm. On such a
/// grid each power `δ^γ` is a geometric sequence in `i`, and column `2k`
/// of the table is exact for `k` of them (column 2 is Aitken's Δ²). The
/// even column whose last two entries agree best is reported, with their
/// difference plus the quadrature noise as the error. Returns `None` when
/// the increments do not shrink.
pub fn extrapolate(values: &[Complex64], errs: &[f64]) -> Option<Extrapolation> {
    let n = values.len();
    if n < 3 {
        return None;
    }
    let noise = errs.iter().rev().take(3).fold(0.0f64, |a, &b| a.max(b));
    let last = values[n - 1];
    let d2 = (values[n - 1] - values[n - 2]).norm();
    let d1 = (values[n - 2] - values[n - 3]).norm();
    if d2 <= noise.max(1e-15 * last.norm()) {
        return Some(Extrapolation { limit: last, err: noise });
    }
    if d2 >= d1 {
        return None;
    }
    // cols[k][j] = ε_k^{(j)}
    let zero = Complex64::new(0.0, 0.0);
    let mut prev: Vec<Complex64> = vec![zero; n + 1];
    let mut cur: Vec<Complex64> = values.to_vec();
    let mut best: Option<Extrapolation> = None;
    let mut k = 0;
    while cur.len() >= 2 {
        let mut next = Vec::with_capacity(cur.len() - 1);
        for j in 0..cur.len() - 1 {
            let d = cur[j + 1] - cur[j];
            if d.norm() <= 1e-300 {
                return best.or(Some(Extrapolation { limit: last, err: d2 + noise }));
            }
            next.push(prev[j + 1] + d.inv());
        }
        prev = cur;
        cur = next;
        k += 1;
        if k % 2 == 0 && cur.len() >= 2 {
            let (a, b) = (cur[cur.len() - 2], cur[cur.len() - 1]);
            let e = (b - a).norm() + noise;
            if b.is_finite() && best.as_ref().is_none_or(|x| e < x.err) {
                best = Some(Extrapolation { limit: b, err: e });
            }
        }
    }
    best.or(Some(Extrapolation { limit: last, err: d2 + noise }))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub points: Vec<SweepPoint>,
    pub limit: Option<Extrapolation>,
    pub holder: Option<HolderFit>,
    /// Integer dependency of the exponent vectors, when the chart is resonant.
    pub resonance: Option<Vec<i64>>,
}

/// Evaluates along the path and extrapolates to `δ → 0`.
pub fn sweep(
    chart: &ChartSpec,
    t: &TestForm,
    cutoffs: &[CutoffSpec],
    path: &EpsPath,
    spec: &QuadratureSpec,
) -> Result<SweepResult> {
    let m = chart.m();
    let eval = |e: Vec<f64>, delta: f64| -> Result<SweepPoint> {
        let v = reg_integral(chart, t, cutoffs, &EpsPoint::new(e.clone())?, spec)?;
        Ok(SweepPoint { delta, eps: e, value: v.value, err: v.err })
    };
    let mut points = Vec::new();
    let limit = match &path.kind {
        PathKind::Parabolic(b) => {
            if b.len() != m {
                return Err(Error::DimensionMismatch { expected: m, found: b.len() });
            }
            for &d in &path.deltas {
                points.push(eval(b.iter().map(|x| d.powf(*x)).collect(), d)?);
            }
            extrapolate(&points.iter().map(|p| p.value).collect::<Vec<_>>(), &points.iter().map(|p| p.err).collect::<Vec<_>>())
        }
        PathKind::Line { start, target } => {
            if start.len() != m {
                return Err(Error::DimensionMismatch { expected: m, found: start.len() });
            }
            for &d in &path.deltas {
                points.push(eval(target.iter().zip(start).map(|(t, s)| t + d * (s - t)).collect(), d)?);
            }
            extrapolate(&points.iter().map(|p| p.value).collect::<Vec<_>>(), &points.iter().map(|p| p.err).collect::<Vec<_>>())
        }
        PathKind::Iterated { order, base } => {
            if base.len() != m {
                return Err(Error::DimensionMismatch { expected: m, found: base.len() });
            }
            iterated(order, base.clone(), &path.deltas, &mut points, &eval)?
        }
    };
    let star = path.limit_point(m);
    let holder = limit.as_ref().and_then(|l| {
        let dist: Vec<f64> =
            points.iter().map(|p| p.eps.iter().zip(&star).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt()).collect();
        let vals: Vec<Complex64> = points.iter().map(|p| p.value).collect();
        let errs: Vec<f64> = points.iter().map(|p| p.err + l.err).collect();
        holder_estimate(&dist, &vals, l.limit, Some(&errs)).ok()
    });
    let res = detect_resonance(chart);
    Ok(SweepResult { points, limit, holder, resonance: res.certificate })
}

fn iterated(
    order: &[usize],
    base: Vec<f64>,
    deltas: &[f64],
    points: &mut Vec<SweepPoint>,
    eval: &dyn Fn(Vec<f64>, f64) -> Result<SweepPoint>,
) -> Result<Option<Extrapolation>> {
    // outermost index last in `order`; recurse from the outside in
    let Some((&outer, inner)) = order.split_last() else {
        let p = eval(base, 0.0)?;
        let e = Extrapolation { limit: p.value, err: p.err };
        points.push(p);
        return Ok(Some(e));
    };
    let mut vals = Vec::new();
    let mut errs = Vec::new();
    for &d in deltas {
        let mut e = base.clone();
        e[outer] = d;
        match iterated(inner, e, deltas, points, eval)? {
            Some(x) => {
                vals.push(x.limit);
                errs.push(x.err);
            }
            None => return Ok(None),
        }
    }
    Ok(extrapolate(&vals, &errs).map(|x| Extrapolation { limit: x.limit, err: x.err + errs.iter().cloned().fold(0.0, f64::max) }))
}

/// Fitted `|I(ε) - I(ε*)| ≈ C |ε - ε*|^γ`.
#[derive(Debug, Clone, PartialEq)]
pub struct HolderFit {
    pub gamma: f64,
    /// Half-width of a two-standard-error interval on γ.
    pub ci: f64,
    /// RMS residual of the log-log fit.
    pub residual: f64,
    pub samples: usize,
    /// Range of `|ε - ε*|` actually used.
    pub range: (f64, f64),
    /// Local slopes drift across the range, as from a logarithmic factor.
    pub log_warning: bool,
}

fn lsq(x: &[f64], y: &[f64]) -> (f64, f64, f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let icpt = my - slope * mx;
    let ss: f64 = x.iter().zip(y).map(|(a, b)| (b - icpt - slope * a).powi(2)).sum();
    let rms = (ss / n).sqrt();
    let se = if x.len() > 2 { (ss / (n - 2.0) / sxx).sqrt() } else { f64::INFINITY };
    (slope, icpt, rms, se)
}

/// Least-squares slope of `log|I - I*|` against `log|ε - ε*|`. Samples whose
/// deviation is within `errs` of zero are dropped. Needs at least 8 usable
/// samples spanning 3 decades.
pub fn holder_estimate(dist: &[f64], values: &[Complex64], reference: Complex64, errs: Option<&[f64]>) -> Result<HolderFit> {
    let mut x = Vec::new();
    let mut y = Vec::new();
    for (i, (&d, v)) in dist.iter().zip(values).enumerate() {
        let dev = (v - reference).norm();
        let floor = errs.map_or(0.0, |e| e[i]);
        if d > 0.0 && dev > 2.0 * floor && dev > 0.0 {
            x.push(d.ln());
            y.push(dev.ln());
        }
    }
    if x.len() < 8 {
        return Err(Error::NonConvergent(format!("{} usable samples, need 8", x.len())));
    }
    let lo = x.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = x.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if (hi - lo) / std::f64::consts::LN_10 < 3.0 {
        return Err(Error::NonConvergent(format!(
            "samples span {:.2} decades, need 3",
            (hi - lo) / std::f64::consts::LN_10
        )));
    }
    let (gamma, _, residual, se) = lsq(&x, &y);
    // compare slopes on the lower and upper halves of the range
    let mut idx: Vec<usize> = (0..x.len()).collect();
    idx.sort_by(|&a, &b| x[a].total_cmp(&x[b]));
    let half = idx.len() / 2;
    let part = |ids: &[usize]| {
        let xs: Vec<f64> = ids.iter().map(|&i| x[i]).collect();
        let ys: Vec<f64> = ids.iter().map(|&i| y[i]).collect();
        lsq(&xs, &ys).0
    };
    let drift = (part(&idx[..half]) - part(&idx[half..])).abs();
    Ok(HolderFit {
        gamma,
        ci: 2.0 * se,
        residual,
        samples: x.len(),
        range: (lo.exp(), hi.exp()),
        log_warning: drift > 0.02,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_forms() {
        let r = make_cutoff(CutoffKind::Rational).unwrap();
        assert_eq!(r.chi(1.0), 0.5);
        assert_eq!(r.chi_tilde(1.0), 0.25);
        let e = make_cutoff(CutoffKind::Exponential).unwrap();
        assert!((e.chi_tilde(1.0) - (-1f64).exp()).abs() < 1e-16);
        let s = make_cutoff(CutoffKind::Smoothstep { t0: 0.0, t1: 1.0 }).unwrap();
        assert_eq!(s.chi(2.0), 1.0);
        for c in [r, e, s] {
            assert_eq!(c.chi(0.0), 0.0);
            assert!(c.chi(1e8) > 1.0 - 1e-7);
        }
    }

    #[test]
    fn unbounded_companion_is_rejected() {
        let bad = CutoffKind::Custom {
            name: "oscillating".into(),
            chi: Arc::new(|t: f64| t / (1.0 + t) + 0.1 * (t.sin() / (1.0 + t))),
            chi_tilde: Arc::new(|t: f64| 0.1 * t * t.cos()),
        };
        assert!(matches!(make_cutoff(bad), Err(Error::Cutoff(_))));
    }
}
