//! Canned end-to-end experiments.
//!
//! The blow-up example in `ℂ³`, complete-intersection instances with
//! known iterated residues, and a resonant chart in `ℂ²`.

use std::f64::consts::PI;
use std::sync::Arc;
use std::time::Instant;

use num_complex::Complex64;

use crate::forms::MonomialMap;
use crate::integrand::{evaluate_terms, Evaluation, Term};
use crate::integrate::{EpsPoint, QuadratureSpec};
use crate::lambda::AffineForm;
use crate::mellin::{continue_eval, reduce_chart, ChartSpec, LambdaPoint, MeromorphicValue};
use crate::poly::{coeff, ExponentVector, SparsePoly};
use crate::regularize::{
    holder_estimate, make_cutoff, reg_integral, sweep, CutoffKind, CutoffSpec, EpsPath, PathKind,
};
use crate::testforms::{Profile, ProfileFactor, TestForm};
use crate::{Error, Result};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Radius of the blow-up example's Gaussian profiles.
pub const SECTION3_RADIUS: f64 = 0.3;

/// `ϕ, φ₂, φ₃`: centred Gaussians with values 1, 1, 2 at the origin.
pub fn section3_profiles() -> [Arc<Profile>; 3] {
    let g = |v: f64| Arc::new(Profile::gaussian(c(0.0, 0.0), SECTION3_RADIUS, c(v, 0.0)));
    [g(1.0), g(1.0), g(2.0)]
}

/// `∂ϕ/∂x̄₁ · φ₂(x₂) φ₃(x₃) dx ∧ dx̄₁` on `ℂ³`.
pub fn section3_form() -> TestForm {
    let [phi, phi2, phi3] = section3_profiles();
    let factors = vec![
        ProfileFactor::in_var(phi, 3, 0).dbar_of(),
        ProfileFactor::in_var(phi2, 3, 1),
        ProfileFactor::in_var(phi3, 3, 2),
    ];
    TestForm::product(3, c(1.0, 0.0), factors, vec![0]).expect("valid product form")
}

/// The coordinate chart: `f = (x₁, x₂, x₃)` with `∂̄` on the last two.
pub fn section3_identity_chart() -> ChartSpec {
    ChartSpec::new(vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]], vec![false, true, true]).expect("valid chart")
}

/// `-(2πi)³ ϕ(0) φ₂(0) φ₃(0)`.
pub fn section3_expected() -> Complex64 {
    let [phi, phi2, phi3] = section3_profiles();
    -c(0.0, 2.0 * PI).powu(3) * phi.center_value() * phi2.center_value() * phi3.center_value()
}

/// The integral after moving `∂̄` onto `φ₂` and `φ₃`:
/// `-8i ∏_j ∫ |x_j|^{2λ_j} x_j^{-1} g_j dA` with `g = (∂̄ϕ, ∂̄φ₂, ∂̄φ₃)`.
/// Entire for `Re λ_j > -1/2`.
pub fn section3_direct(lam: &LambdaPoint, spec: &QuadratureSpec) -> Result<Evaluation> {
    if lam.0.len() != 3 {
        return Err(Error::DimensionMismatch { expected: 3, found: lam.0.len() });
    }
    if let Some(j) = lam.0.iter().position(|l| l.re <= -0.5) {
        return Err(Error::NonConvergent(format!("Re λ{} ≤ -1/2 in the separable integral", j + 1)));
    }
    let factors = section3_profiles()
        .into_iter()
        .enumerate()
        .map(|(j, p)| ProfileFactor::in_var(p, 3, j).dbar_of())
        .collect();
    let mut t = Term::plain(3, 3, c(0.0, -8.0), factors);
    t.s = (0..3).map(|j| AffineForm::lambda(3, j)).collect();
    t.p = vec![-1; 3];
    evaluate_terms(&[t], &lam.0, &[], spec)
}

/// `ρ₁`: 1 for `|z₃| ≤ 1.5`, 0 for `|z₃| ≥ 2`.
pub fn rho_z() -> Arc<Profile> {
    Arc::new(Profile::plateau(1.5, 2.0))
}

/// `ρ₂ = 1 - ρ₁(1/ζ₃)`.
pub fn rho_zeta() -> Arc<Profile> {
    Arc::new(Profile::inverted_plateau(1.5, 2.0))
}

/// One chart of a resolution together with the pulled-back, localized form.
#[derive(Debug, Clone)]
pub struct ChartPiece {
    pub name: String,
    pub map: MonomialMap,
    pub chart: ChartSpec,
    pub form: TestForm,
}

/// The two charts of the blow-up along `x₂ = x₃ = 0`:
/// `(z₁, z₂, z₂z₃)` localized by `ρ₁(z₃)` and `(ζ₁, ζ₂ζ₃, ζ₂)` by `ρ₂(ζ₃)`.
pub fn section3_pieces() -> Result<[ChartPiece; 2]> {
    let t = section3_form();
    let piece = |name: &str, rows: Vec<Vec<u32>>, rho: Arc<Profile>| -> Result<ChartPiece> {
        let map = MonomialMap::from_exponents(3, &rows)?;
        let form = t.pullback(&map)?.mul_factors(&[ProfileFactor::in_var(rho, 3, 2)]);
        let chart = ChartSpec::new(rows, vec![false, true, true])?;
        Ok(ChartPiece { name: name.to_string(), map, chart, form })
    };
    Ok([
        piece("z", vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 1, 1]], rho_z())?,
        piece("zeta", vec![vec![1, 0, 0], vec![0, 1, 1], vec![0, 1, 0]], rho_zeta())?,
    ])
}

/// Reduced terms of both charts, ready for repeated evaluation.
pub fn section3_chart_terms() -> Result<[Vec<Term>; 2]> {
    let [z, zeta] = section3_pieces()?;
    Ok([reduce_chart(&z.chart, &z.form)?, reduce_chart(&zeta.chart, &zeta.form)?])
}

/// `(term_z, term_ζ)` at `λ`.
pub fn section3_charts(lam: &LambdaPoint, spec: &QuadratureSpec) -> Result<(MeromorphicValue, MeromorphicValue)> {
    let [tz, tzeta] = section3_chart_terms()?;
    Ok((continue_eval(&tz, lam, spec)?, continue_eval(&tzeta, lam, spec)?))
}

/// Largest `|ρ₁(z) + ρ₂(1/z) - 1|` over the given points.
pub fn partition_defect(points: &[Complex64]) -> f64 {
    let (a, b) = (rho_z(), rho_zeta());
    points
        .iter()
        .filter(|z| z.norm() > 0.0)
        .map(|&z| (a.value(z) + b.value(z.inv()) - 1.0).norm())
        .fold(0.0, f64::max)
}

/// `Σ_j c_j z^{e_j}` as a polynomial in `n` variables.
fn poly(n: usize, terms: &[(Vec<u32>, i64)]) -> SparsePoly {
    let mut p = SparsePoly::zero(n);
    for (e, k) in terms {
        p.add_term(ExponentVector(e.clone()), coeff(*k));
    }
    p
}

/// Quadrature used by the canned scenarios: more outer panels than the
/// default, fewer graded ones.
pub fn scenario_spec() -> QuadratureSpec {
    QuadratureSpec { nodes_per_panel: 8, outer_panels: 12, graded_panels: 10, ratio: 0.25, angular: 24, ..QuadratureSpec::default() }
}

/// The shipped complete intersections in `ℂ³`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Instance {
    /// `f = (z₁, z₂, z₃)`.
    Diagonal,
    /// `f = (z₁², z₂³, z₃)`.
    Weighted,
    /// `f = (z₁, z₂, z₃ + z₁z₂)`, in the coordinates `w₃ = z₃ + z₁z₂`.
    Coupled,
}

impl Instance {
    pub const ALL: [Instance; 3] = [Instance::Diagonal, Instance::Weighted, Instance::Coupled];

    pub fn name(self) -> &'static str {
        match self {
            Instance::Diagonal => "diagonal",
            Instance::Weighted => "weighted",
            Instance::Coupled => "coupled",
        }
    }

    pub fn from_name(s: &str) -> Result<Self> {
        Self::ALL.into_iter().find(|i| i.name() == s).ok_or_else(|| Error::UnknownScenario(s.to_string()))
    }
}

/// A chart, a `(3, 1)` test form on it and the iterated residue it should
/// produce at the origin.
#[derive(Debug, Clone)]
pub struct Demo {
    pub instance: Instance,
    pub chart: ChartSpec,
    pub form: TestForm,
    pub expected: Complex64,
    pub spec: QuadratureSpec,
}

/// `-(2πi)³ a₁ a₂ a₃`.
fn iterated(a: [Complex64; 3]) -> Complex64 {
    -c(0.0, 2.0 * PI).powu(3) * a[0] * a[1] * a[2]
}

pub fn demo(instance: Instance) -> Demo {
    let rows = |a: u32, b: u32| vec![vec![a, 0, 0], vec![0, b, 0], vec![0, 0, 1]];
    let flags = vec![false, true, true];
    match instance {
        Instance::Diagonal => {
            let p = [
                Profile::bump(c(0.1, 0.05), 0.6, c(1.0, 0.0)),
                Profile::bump(c(-0.05, 0.1), 0.5, c(1.5, -0.5)),
                Profile::bump(c(0.0, -0.1), 0.7, c(2.0, 0.0)),
            ];
            let expected = iterated([p[0].value(c(0.0, 0.0)), p[1].value(c(0.0, 0.0)), p[2].value(c(0.0, 0.0))]);
            Demo {
                instance,
                chart: ChartSpec::new(rows(1, 1), flags).expect("valid chart"),
                form: dbar_first(p.map(Arc::new), None),
                expected,
                spec: scenario_spec(),
            }
        }
        Instance::Weighted => {
            // ∂ϕ(0) = 2, ∂²φ₂(0)/2 = 3, φ₃(0) = 2
            let r = SECTION3_RADIUS;
            let p = [
                Profile::poly_gaussian(c(0.0, 0.0), r, vec![(0, 0, c(1.0, 0.0)), (1, 0, c(2.0, 0.0))]),
                Profile::poly_gaussian(c(0.0, 0.0), r, vec![(0, 0, c(1.0, 0.0)), (2, 0, c(3.0, 0.0))]),
                Profile::gaussian(c(0.0, 0.0), r, c(2.0, 0.0)),
            ];
            Demo {
                instance,
                chart: ChartSpec::new(rows(2, 3), flags).expect("valid chart"),
                form: dbar_first(p.map(Arc::new), None),
                expected: iterated([c(2.0, 0.0), c(3.0, 0.0), c(2.0, 0.0)]),
                spec: scenario_spec(),
            }
        }
        Instance::Coupled => {
            let r = SECTION3_RADIUS;
            let p = [
                Profile::gaussian(c(0.0, 0.0), r, c(1.0, 0.0)),
                Profile::gaussian(c(0.0, 0.0), r, c(1.0, 0.0)),
                Profile::gaussian(c(0.05, 0.0), r, c(2.0, 0.0)),
            ];
            let expected = iterated([p[0].value(c(0.0, 0.0)), p[1].value(c(0.0, 0.0)), p[2].value(c(0.0, 0.0))]);
            // z₃ = w₃ - w₁w₂
            let arg = poly(3, &[(vec![0, 0, 1], 1), (vec![1, 1, 0], -1)]);
            let spec = QuadratureSpec {
                nodes_per_panel: 5,
                outer_panels: 2,
                graded_panels: 3,
                ratio: 0.25,
                angular: 10,
                ..QuadratureSpec::default()
            }
            .with_truncation(vec![Some(6.0 * r), Some(6.0 * r), Some(0.05 + 8.0 * r)]);
            Demo {
                instance,
                chart: ChartSpec::new(rows(1, 1), flags).expect("valid chart"),
                form: dbar_first(p.map(Arc::new), Some(arg)),
                expected,
                spec,
            }
        }
    }
}

/// `∂̄g₁(z₁) g₂(z₂) g₃(a) dz ∧ dz̄₁` with `a = z₃` unless given.
fn dbar_first(g: [Arc<Profile>; 3], third: Option<SparsePoly>) -> TestForm {
    let [g1, g2, g3] = g;
    let f3 = match third {
        Some(a) => ProfileFactor::new(g3, a),
        None => ProfileFactor::in_var(g3, 3, 2),
    };
    let factors = vec![ProfileFactor::in_var(g1, 3, 0).dbar_of(), ProfileFactor::in_var(g2, 3, 1), f3];
    TestForm::product(3, c(1.0, 0.0), factors, vec![0]).expect("valid product form")
}

/// A named comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub expected: Complex64,
    pub observed: Complex64,
    /// Combined quadrature / extrapolation error estimate.
    pub err: f64,
    pub tol: f64,
    pub pass: bool,
    pub seconds: f64,
}

impl Check {
    /// `|observed - expected| ≤ tol · |expected|`.
    pub fn relative(name: &str, expected: Complex64, observed: Complex64, err: f64, tol: f64) -> Self {
        let pass = (observed - expected).norm() <= tol * expected.norm();
        Check { name: name.into(), expected, observed, err, tol, pass, seconds: 0.0 }
    }

    /// `observed > bound` for a real quantity.
    pub fn above(name: &str, bound: f64, observed: f64, err: f64) -> Self {
        Check {
            name: name.into(),
            expected: c(bound, 0.0),
            observed: c(observed, 0.0),
            err,
            tol: 0.0,
            pass: observed > bound,
            seconds: 0.0,
        }
    }

    pub fn failed(name: &str, why: &Error) -> Self {
        Check {
            name: format!("{name}: {why}"),
            expected: c(f64::NAN, 0.0),
            observed: c(f64::NAN, 0.0),
            err: f64::NAN,
            tol: 0.0,
            pass: false,
            seconds: 0.0,
        }
    }

    fn timed(mut self, t: Instant) -> Self {
        self.seconds = t.elapsed().as_secs_f64();
        self
    }
}

/// One evaluated point of a sweep or grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Record {
    pub check: String,
    /// `λ=(…)` or `ε=(…)`.
    pub point: String,
    pub value: Complex64,
    pub err: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Report {
    pub scenario: String,
    pub checks: Vec<Check>,
    pub records: Vec<Record>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

fn fmt_point(tag: &str, v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| format!("{x:e}")).collect();
    format!("{tag}=({})", parts.join(";"))
}

/// What `complete_intersection_demo` evaluates.
#[derive(Debug, Clone)]
pub struct DemoPlan {
    /// Approach directions for `λ = δ t`.
    pub directions: Vec<Vec<f64>>,
    /// `δ` values along each direction, decreasing by a constant ratio.
    pub lambda_deltas: Vec<f64>,
    pub cutoff: CutoffKind,
    pub alt_cutoff: CutoffKind,
    /// Parabolic exponents; the first path is the reference.
    pub parabolic: Vec<Vec<f64>>,
    pub deltas: Vec<f64>,
    /// Innermost index first.
    pub iterated_order: Vec<usize>,
    pub iterated_deltas: Vec<f64>,
    /// `ε = s · pattern` for each scale and pattern, boundary patterns
    /// included.
    pub holder_scales: Vec<f64>,
    pub holder_patterns: Vec<Vec<f64>>,
    pub direction_tol: f64,
    pub limit_tol: f64,
    pub gamma_min: f64,
}

impl Default for DemoPlan {
    fn default() -> Self {
        DemoPlan {
            directions: vec![vec![1.0, 1.0, 1.0], vec![1.0, 2.0, 3.0], vec![3.0, 1.0, 2.0], vec![0.5, 2.0, 1.0]],
            lambda_deltas: vec![1e-2, 1e-3, 1e-4],
            cutoff: CutoffKind::Rational,
            alt_cutoff: CutoffKind::Exponential,
            parabolic: vec![vec![1.0, 1.0, 1.0], vec![1.0, 2.0, 3.0], vec![2.0, 1.0, 1.5]],
            deltas: EpsPath::geometric(1e-3, 0.1, 8),
            iterated_order: vec![0, 1, 2],
            iterated_deltas: EpsPath::geometric(1e-3, 0.1, 8),
            holder_scales: (0..7).map(|i| 10f64.powf(-1.0 - 0.5 * i as f64)).collect(),
            holder_patterns: vec![
                vec![1.0, 1.0, 1.0],
                vec![1.0, 0.0, 0.0],
                vec![0.0, 1.0, 0.0],
                vec![0.0, 0.0, 1.0],
                vec![1.0, 2.0, 0.0],
            ],
            direction_tol: 1e-4,
            limit_tol: 1e-3,
            gamma_min: 0.05,
        }
    }
}

impl DemoPlan {
    /// The default plan, with a shorter iterated grid for the coupled
    /// instance, whose every point is a full three-dimensional quadrature.
    pub fn for_instance(instance: Instance) -> Self {
        let mut p = DemoPlan::default();
        if instance == Instance::Coupled {
            p.iterated_deltas = EpsPath::geometric(1e-3, 0.1, 5);
        }
        p
    }
}

/// Runs the Mellin and regularization pipelines on one instance and
/// collects the consistency checks. Sub-failures become failed checks.
pub fn complete_intersection_demo(instance: Instance, plan: &DemoPlan) -> Report {
    let d = demo(instance);
    let mut rep = Report { scenario: format!("ci-{}", instance.name()), ..Report::default() };
    let m = d.chart.m();

    // Mellin side
    let t0 = Instant::now();
    let origin = reduce_chart(&d.chart, &d.form).and_then(|terms| {
        let at0 = continue_eval(&terms, &LambdaPoint::real(&vec![0.0; m]), &d.spec)?;
        Ok((terms, at0.value()?, at0.value_err()))
    });
    let (terms, mellin0, mellin_err) = match origin {
        Ok(x) => x,
        Err(e) => {
            rep.checks.push(Check::failed("mellin-origin", &e));
            return rep;
        }
    };
    rep.records.push(Record { check: "mellin".into(), point: fmt_point("lambda", &vec![0.0; m]), value: mellin0, err: mellin_err });
    rep.checks.push(Check::relative("mellin-origin", d.expected, mellin0, mellin_err, plan.limit_tol).timed(t0));
    for (i, t) in plan.directions.iter().enumerate() {
        let t0 = Instant::now();
        let name = format!("direction-{}", i + 1);
        let along = plan
            .lambda_deltas
            .iter()
            .map(|&s| {
                let lam: Vec<f64> = t.iter().map(|x| s * x).collect();
                let v = continue_eval(&terms, &LambdaPoint::real(&lam), &d.spec)?;
                rep.records.push(Record { check: name.clone(), point: fmt_point("lambda", &lam), value: v.value()?, err: v.value_err() });
                Ok((v.value()?, v.value_err()))
            })
            .collect::<Result<Vec<_>>>();
        match along {
            Ok(v) => {
                let (lim, err) = linear_limit(&plan.lambda_deltas, &v);
                rep.checks.push(Check::relative(&name, mellin0, lim, err, plan.direction_tol).timed(t0));
            }
            Err(e) => rep.checks.push(Check::failed(&name, &e)),
        }
    }

    // regularization side
    let cut = |k: &CutoffKind| make_cutoff(k.clone()).map(|c| vec![c; m]);
    let (cuts, alt) = match (cut(&plan.cutoff), cut(&plan.alt_cutoff)) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(e), _) | (_, Err(e)) => {
            rep.checks.push(Check::failed("cutoff", &e));
            return rep;
        }
    };
    let mut run = |name: &str, kind: PathKind, deltas: &[f64], cuts: &[CutoffSpec]| -> Option<(Complex64, f64)> {
        let t0 = Instant::now();
        let res = EpsPath::new(kind, deltas.to_vec()).and_then(|p| sweep(&d.chart, &d.form, cuts, &p, &d.spec));
        match res {
            Ok(s) => {
                for p in &s.points {
                    rep.records.push(Record { check: name.into(), point: fmt_point("eps", &p.eps), value: p.value, err: p.err });
                }
                match s.limit {
                    Some(l) => {
                        rep.checks.push(Check::relative(name, mellin0, l.limit, l.err, plan.limit_tol).timed(t0));
                        Some((l.limit, l.err))
                    }
                    None => {
                        rep.checks.push(Check::failed(name, &Error::NonConvergent("no extrapolated limit".into())));
                        None
                    }
                }
            }
            Err(e) => {
                rep.checks.push(Check::failed(name, &e));
                None
            }
        }
    };
    let mut reference = None;
    for (i, b) in plan.parabolic.iter().enumerate() {
        let r = run(&format!("parabolic-{}", i + 1), PathKind::Parabolic(b.clone()), &plan.deltas, &cuts);
        if i == 0 {
            reference = r;
        }
    }
    let halved: Vec<f64> = plan.deltas.iter().map(|x| x / 2.0).collect();
    let refined = run("parabolic-1-refined", PathKind::Parabolic(plan.parabolic[0].clone()), &halved, &cuts);
    run(
        "iterated",
        PathKind::Iterated { order: plan.iterated_order.clone(), base: vec![0.0; m] },
        &plan.iterated_deltas,
        &cuts,
    );
    let other = run("alt-cutoff", PathKind::Parabolic(plan.parabolic[0].clone()), &plan.deltas, &alt);
    if let (Some(a), Some(b)) = (reference, other) {
        rep.checks.push(Check::relative("cutoff-independence", a.0, b.0, a.1 + b.1, plan.limit_tol));
    }
    if let (Some(a), Some(b)) = (reference, refined) {
        rep.checks.push(Check::relative("grid-refinement", a.0, b.0, a.1 + b.1, plan.limit_tol));
    }

    // Hölder fit over a grid touching the octant boundary
    let t0 = Instant::now();
    let grid = (|| -> Result<(Vec<f64>, Vec<Complex64>, Vec<f64>, Evaluation)> {
        let at0 = reg_integral(&d.chart, &d.form, &cuts, &EpsPoint::new(vec![0.0; m])?, &d.spec)?;
        let (mut dist, mut vals, mut errs) = (vec![], vec![], vec![]);
        for pat in &plan.holder_patterns {
            for &s in &plan.holder_scales {
                let e: Vec<f64> = pat.iter().map(|x| s * x).collect();
                let v = reg_integral(&d.chart, &d.form, &cuts, &EpsPoint::new(e.clone())?, &d.spec)?;
                rep.records.push(Record { check: "holder-grid".into(), point: fmt_point("eps", &e), value: v.value, err: v.err });
                dist.push(e.iter().map(|x| x * x).sum::<f64>().sqrt());
                vals.push(v.value);
                errs.push(v.err + at0.err);
            }
        }
        Ok((dist, vals, errs, at0))
    })();
    match grid {
        Ok((dist, vals, errs, at0)) => {
            rep.records.push(Record { check: "holder-grid".into(), point: fmt_point("eps", &vec![0.0; m]), value: at0.value, err: at0.err });
            rep.checks.push(Check::relative("regularized-origin", mellin0, at0.value, at0.err, plan.limit_tol));
            match holder_estimate(&dist, &vals, at0.value, Some(&errs)) {
                Ok(fit) => rep.checks.push(Check::above("holder-gamma", plan.gamma_min, fit.gamma, fit.ci).timed(t0)),
                Err(e) => rep.checks.push(Check::failed("holder-gamma", &e)),
            }
        }
        Err(e) => rep.checks.push(Check::failed("holder-grid", &e)),
    }
    rep
}

/// `v(δ) ≈ L + C δ` from the last two points of a geometric grid.
fn linear_limit(deltas: &[f64], v: &[(Complex64, f64)]) -> (Complex64, f64) {
    let n = v.len();
    if n < 2 {
        return v.last().copied().unwrap_or((c(f64::NAN, 0.0), f64::NAN));
    }
    let q = deltas[n - 1] / deltas[n - 2];
    let (a, b) = (v[n - 2].0, v[n - 1].0);
    let lim = b + (b - a) * q / (1.0 - q);
    (lim, v[n - 1].1 + v[n - 2].1 + (lim - b).norm())
}

impl Check {
    /// A yes/no property; `observed` carries an optional witness number.
    pub fn holds(name: &str, pass: bool, witness: f64) -> Self {
        Check {
            name: name.into(),
            expected: c(1.0, 0.0),
            observed: c(witness, 0.0),
            err: 0.0,
            tol: 0.0,
            pass,
            seconds: 0.0,
        }
    }
}

/// The blow-up integrand before any integration by parts, at `Re λ_j`
/// large enough for plain quadrature:
/// `-8i λ₂λ₃ |x₁|^{2λ₁}|x₂|^{2λ₂}|x₃|^{2λ₃} ∂̄ϕ φ₂ φ₃ / (x₁ |x₂|² |x₃|²)`.
pub fn section3_nested(lam: &LambdaPoint, spec: &QuadratureSpec) -> Result<Evaluation> {
    if lam.0.len() != 3 {
        return Err(Error::DimensionMismatch { expected: 3, found: lam.0.len() });
    }
    if lam.0[1..].iter().any(|l| l.re <= 0.5) || lam.0[0].re <= 0.0 {
        return Err(Error::NonConvergent("plain quadrature needs Re λ₁ > 0 and Re λ₂, Re λ₃ > 1/2".into()));
    }
    let [phi, phi2, phi3] = section3_profiles();
    let l = lam.0.clone();
    let f = move |x: &[Complex64]| -> Complex64 {
        let r: Vec<f64> = x.iter().map(|z| z.norm_sqr()).collect();
        if r.iter().any(|v| *v == 0.0) {
            return c(0.0, 0.0);
        }
        let pw = |v: f64, s: Complex64| (s * v.ln()).exp();
        c(0.0, -8.0) * l[1] * l[2] * pw(r[0], l[0]) * pw(r[1], l[1] - 1.0) * pw(r[2], l[2] - 1.0) / x[0]
            * phi.derivative(0, 1, x[0])
            * phi2.value(x[1])
            * phi3.value(x[2])
    };
    let trunc = vec![Some(8.0 * SECTION3_RADIUS); 3];
    crate::integrate::quad_nested(3, &f, &spec.clone().with_truncation(trunc))
}

/// Quadrature for [`section3_nested`]: a full product grid in three variables.
pub fn section3_nested_spec() -> QuadratureSpec {
    QuadratureSpec { nodes_per_panel: 6, outer_panels: 3, graded_panels: 3, ratio: 0.25, angular: 8, ..QuadratureSpec::default() }
}

/// `λ_j ∈ {0.05, 0.175, 0.3}`: the 27-point grid of the chart-sum check.
pub fn section3_grid() -> Vec<LambdaPoint> {
    let v = [0.05, 0.175, 0.3];
    let mut out = Vec::new();
    for a in v {
        for b in v {
            for d in v {
                out.push(LambdaPoint::real(&[a, b, d]));
            }
        }
    }
    out
}

/// Direct value at the origin and at `(1,1,1)`, the chart pole factors,
/// the directional witness, and the chart sum over `grid`.
pub fn section3_report(grid: &[LambdaPoint]) -> Report {
    let mut rep = Report { scenario: "section3".into(), ..Report::default() };
    let spec = scenario_spec();
    let expected = section3_expected();
    let t0 = Instant::now();
    match section3_direct(&LambdaPoint::real(&[0.0; 3]), &QuadratureSpec::default()) {
        Ok(v) => rep.checks.push(Check::relative("direct-origin", expected, v.value, v.err, 1e-5).timed(t0)),
        Err(e) => rep.checks.push(Check::failed("direct-origin", &e)),
    }
    let t0 = Instant::now();
    let one = LambdaPoint::real(&[1.0; 3]);
    match (section3_direct(&one, &QuadratureSpec::default()), section3_nested(&one, &section3_nested_spec())) {
        (Ok(a), Ok(b)) => rep.checks.push(Check::relative("direct-vs-nested", a.value, b.value, a.err + b.err, 1e-5).timed(t0)),
        (Err(e), _) | (_, Err(e)) => rep.checks.push(Check::failed("direct-vs-nested", &e)),
    }
    let s = |x: &[f64]| fmt_point("lambda", x);
    let terms = match section3_chart_terms() {
        Ok(t) => t,
        Err(e) => {
            rep.checks.push(Check::failed("charts", &e));
            return rep;
        }
    };
    let (fz, _) = crate::mellin::common_factor(&terms[0]);
    rep.checks.push(Check::holds("z-factor", fz.to_string() == "λ2/(λ2+λ3)", f64::NAN));
    // I(0): term_z without its factor
    let t0 = Instant::now();
    match continue_eval(&terms[0], &LambdaPoint::real(&[0.0; 3]), &spec) {
        Ok(v) => rep.checks.push(Check::relative("z-entire-origin", expected, v.entire, v.err, 1e-4).timed(t0)),
        Err(e) => rep.checks.push(Check::failed("z-entire-origin", &e)),
    }
    // directional limits of term_z: λ₂/(λ₂+λ₃) → 1/2 and 1/3
    let t0 = Instant::now();
    let dirs = [[0.0, 1.0, 1.0], [0.0, 1.0, 2.0]];
    let lims: Result<Vec<Complex64>> = dirs
        .iter()
        .map(|t| {
            let lam: Vec<f64> = t.iter().map(|x| 1e-6 * x).collect();
            let v = continue_eval(&terms[0], &LambdaPoint::real(&lam), &spec)?;
            rep.records.push(Record { check: "z-direction".into(), point: s(&lam), value: v.value()?, err: v.value_err() });
            v.value()
        })
        .collect();
    match lims {
        Ok(l) => rep.checks.push(Check::relative("z-direction-ratio", c(1.5, 0.0), l[0] / l[1], 0.0, 1e-3 / 1.5).timed(t0)),
        Err(e) => rep.checks.push(Check::failed("z-direction-ratio", &e)),
    }
    // chart sum over the grid
    let t0 = Instant::now();
    let mut worst: Option<Check> = None;
    for lam in grid {
        let pt: Vec<f64> = lam.0.iter().map(|z| z.re).collect();
        let r = (|| -> Result<Check> {
            let a = continue_eval(&terms[0], lam, &spec)?;
            let b = continue_eval(&terms[1], lam, &spec)?;
            let d = section3_direct(lam, &QuadratureSpec::default())?;
            let sum = a.value()? + b.value()?;
            rep.records.push(Record { check: "chart-sum".into(), point: s(&pt), value: sum, err: a.value_err() + b.value_err() });
            rep.records.push(Record { check: "direct".into(), point: s(&pt), value: d.value, err: d.err });
            Ok(Check::relative("chart-sum", d.value, sum, a.value_err() + b.value_err() + d.err, 1e-4))
        })();
        match r {
            Ok(ch) => {
                let rel = |c: &Check| (c.observed - c.expected).norm() / c.expected.norm();
                if worst.as_ref().is_none_or(|w| rel(&ch) > rel(w)) {
                    worst = Some(ch);
                }
            }
            Err(e) => {
                worst = Some(Check::failed("chart-sum", &e));
                break;
            }
        }
    }
    if let Some(w) = worst {
        rep.checks.push(w.timed(t0));
    }
    let ring: Vec<Complex64> = (0..400).map(|k| Complex64::from_polar(0.5 + 2.0 * k as f64 / 400.0, 0.37 * k as f64)).collect();
    let defect = partition_defect(&ring);
    rep.checks.push(Check::holds("partition", defect <= 1e-10, defect));
    rep
}

/// Chart `(z₁, z₂, z₁z₂)` in `ℂ²` with a generic test form.
pub fn resonance_chart(dbar: Vec<bool>) -> Result<ChartSpec> {
    ChartSpec::new(vec![vec![1, 0], vec![0, 1], vec![1, 1]], dbar)
}

fn resonance_form(anti: Vec<usize>) -> Result<TestForm> {
    let p = [
        Arc::new(Profile::gaussian(c(0.2, 0.1), 0.5, c(1.0, 0.0))),
        Arc::new(Profile::gaussian(c(-0.1, 0.2), 0.5, c(1.0, 0.0))),
    ];
    TestForm::product(2, c(1.0, 0.0), vec![ProfileFactor::in_var(p[0].clone(), 2, 0), ProfileFactor::in_var(p[1].clone(), 2, 1)], anti)
}

/// Hölder continuity of the χ-product on the resonant chart, next to the
/// Mellin side, where `∂̄` on the resonant factor gives a pole through 0.
pub fn resonance_report() -> Report {
    let mut rep = Report { scenario: "resonance".into(), ..Report::default() };
    let r = (|| -> Result<()> {
        let plain = resonance_chart(vec![false; 3])?;
        let t = resonance_form(vec![0, 1])?;
        let res = crate::mellin::detect_resonance(&plain);
        rep.checks.push(Check::holds("certificate", res.certificate == Some(vec![1, 1, -1]), res.rank as f64));

        let t0 = Instant::now();
        let spec = QuadratureSpec::coarse();
        let cuts = vec![make_cutoff(CutoffKind::Rational)?; 3];
        let i0 = reg_integral(&plain, &t, &cuts, &EpsPoint::new(vec![0.0; 3])?, &spec)?;
        let path = EpsPath::new(PathKind::Parabolic(vec![1.0; 3]), EpsPath::geometric(1e-1, 10f64.powf(-0.5), 9))?;
        let s = sweep(&plain, &t, &cuts, &path, &spec)?;
        for p in &s.points {
            rep.records.push(Record { check: "chi-product".into(), point: fmt_point("eps", &p.eps), value: p.value, err: p.err });
        }
        let dist: Vec<f64> = s.points.iter().map(|p| p.eps.iter().map(|e| e * e).sum::<f64>().sqrt()).collect();
        let vals: Vec<Complex64> = s.points.iter().map(|p| p.value).collect();
        let errs: Vec<f64> = s.points.iter().map(|p| p.err + i0.err).collect();
        let fit = holder_estimate(&dist, &vals, i0.value, Some(&errs))?;
        rep.checks.push(Check::above("holder-gamma", 0.05, fit.gamma, fit.ci).timed(t0));

        let through0 = |ch: &ChartSpec, t: &TestForm| -> Result<(bool, Vec<Term>)> {
            let terms = reduce_chart(ch, t)?;
            let (f, _) = crate::mellin::common_factor(&terms);
            Ok((f.hyperplanes().iter().any(|h| h.passes_through_origin()), terms))
        };
        let (p0, _) = through0(&plain, &t)?;
        rep.checks.push(Check::holds("chi-product-analytic", !p0, f64::NAN));
        let flagged = resonance_chart(vec![false, false, true])?;
        let (p1, terms) = through0(&flagged, &resonance_form(vec![0])?)?;
        rep.checks.push(Check::holds("dbar-pole-through-origin", p1, f64::NAN));
        // λ₃/(λ₂+λ₃): 1/2 along (1,1,1), 2/3 along (1,1,2)
        let t0 = Instant::now();
        let spec = scenario_spec();
        let at = |t: [f64; 3]| -> Result<Complex64> {
            continue_eval(&terms, &LambdaPoint::real(&t.map(|x| 1e-6 * x)), &spec)?.value()
        };
        let ratio = at([1.0, 1.0, 1.0])? / at([1.0, 1.0, 2.0])?;
        rep.checks.push(Check::relative("dbar-direction-ratio", c(0.75, 0.0), ratio, 0.0, 1e-3 / 0.75).timed(t0));
        Ok(())
    })();
    if let Err(e) = r {
        rep.checks.push(Check::failed("resonance", &e));
    }
    rep
}
