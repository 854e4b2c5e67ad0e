//! Scenario documents: a versioned TOML schema, validated into a [`Plan`]
//! before anything is evaluated.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::Deserialize;

use residue_core::integrate::QuadratureSpec;
use residue_core::mellin::{ChartSpec, LambdaPoint};
use residue_core::parse::parse_poly;
use residue_core::poly::SparsePoly;
use residue_core::regularize::{make_cutoff, CutoffKind, CutoffSpec, EpsPath, PathKind};
use residue_core::scenarios::section3_grid;
use residue_core::testforms::{Profile, ProfileFactor, TestForm};

pub const SCHEMA_VERSION: u32 = 1;

/// A document problem, located by a dotted field path such as
/// `regularize.paths[1].deltas`.
#[derive(Debug, Clone, PartialEq)]
pub struct SchemaError {
    pub path: String,
    pub msg: String,
}

impl SchemaError {
    pub fn new(path: impl Into<String>, msg: impl fmt::Display) -> Self {
        SchemaError { path: path.into(), msg: msg.to_string() }
    }
}

impl fmt::Display for SchemaError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.msg)
    }
}

impl std::error::Error for SchemaError {}

type Valid<T> = std::result::Result<T, SchemaError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Pipeline {
    Mellin,
    Regularize,
    Scenario,
}

impl Pipeline {
    pub fn name(self) -> &'static str {
        match self {
            Pipeline::Mellin => "mellin",
            Pipeline::Regularize => "regularize",
            Pipeline::Scenario => "scenario",
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioDocument {
    pub schema: u32,
    pub pipeline: Pipeline,
    /// Used for output file names; defaults to the pipeline or registry name.
    pub name: Option<String>,
    pub scenario: Option<RegistrySection>,
    pub chart: Option<ChartSection>,
    pub form: Option<FormSection>,
    pub mellin: Option<MellinSection>,
    pub regularize: Option<RegularizeSection>,
    #[serde(default)]
    pub quadrature: QuadratureSection,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegistrySection {
    pub name: String,
    pub lambda_grid: Option<String>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChartSection {
    /// One exponent row `a_j` per factor.
    pub exponents: Vec<Vec<u32>>,
    /// Factors carrying `∂̄`; all false when absent.
    pub dbar: Option<Vec<bool>>,
    /// Units `f̃_j` as polynomial text; only `1` can be evaluated.
    pub units: Option<Vec<String>>,
}

fn one() -> [f64; 2] {
    [1.0, 0.0]
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FormSection {
    #[serde(default = "one")]
    pub coef: [f64; 2],
    /// 1-based indices `K` of `dz̄_K`.
    #[serde(default)]
    pub anti: Vec<usize>,
    pub factors: Vec<FactorSection>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FactorSection {
    /// gaussian, poly-gaussian, bump, plateau, inverted-plateau, constant
    pub profile: String,
    /// 1-based coordinate the profile is evaluated at.
    pub var: Option<usize>,
    /// Polynomial argument instead of a single coordinate, e.g. `z3 - z1 z2`.
    pub arg: Option<String>,
    #[serde(default)]
    pub center: [f64; 2],
    pub radius: Option<f64>,
    #[serde(default = "one")]
    pub value: [f64; 2],
    /// `[i, j, re, im]` terms of `Σ c w^i w̄^j` for poly-gaussian.
    #[serde(default)]
    pub poly: Vec<[f64; 4]>,
    pub inner: Option<f64>,
    pub outer: Option<f64>,
    #[serde(default)]
    pub dbar: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    #[default]
    Continue,
    Direct,
    Both,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MellinSection {
    /// Real λ points.
    pub lambda: Vec<Vec<f64>>,
    #[serde(default)]
    pub method: Method,
    pub two_path_tol: Option<f64>,
    #[serde(default)]
    pub expect: Vec<ExpectSection>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExpectSection {
    pub lambda: Vec<f64>,
    pub value: [f64; 2],
    pub tol: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegularizeSection {
    /// One cutoff for every factor, or one per factor: `rational`,
    /// `exponential`, `smoothstep(t0,t1)`.
    pub cutoffs: Vec<String>,
    pub paths: Vec<PathSection>,
    pub expected: Option<[f64; 2]>,
    pub limit_tol: Option<f64>,
    pub agreement_tol: Option<f64>,
    pub gamma_min: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PathSection {
    /// parabolic, iterated, line
    pub kind: String,
    pub exponents: Option<Vec<f64>>,
    /// 1-based factor indices, innermost limit first.
    pub order: Option<Vec<usize>>,
    pub base: Option<Vec<f64>>,
    pub start: Option<Vec<f64>>,
    pub target: Option<Vec<f64>>,
    pub deltas: Option<Vec<f64>>,
    pub geometric: Option<GeometricSection>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometricSection {
    pub start: f64,
    pub ratio: f64,
    pub count: usize,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadratureSection {
    /// `default` or `coarse`; the other fields override it.
    pub preset: Option<String>,
    pub nodes_per_panel: Option<usize>,
    pub outer_panels: Option<usize>,
    pub graded_panels: Option<usize>,
    pub ratio: Option<f64>,
    pub angular: Option<usize>,
    pub truncation: Option<Vec<f64>>,
    pub tol: Option<f64>,
    pub budget: Option<u64>,
}

/// Registry entries addressable by name.
pub const REGISTRY: [(&str, &str); 5] = [
    ("section3", "blow-up example: direct value, chart pole factors, chart sum on a λ-grid"),
    ("ci-diagonal", "f = (z1, z2, z3): Mellin and regularized limits at the origin"),
    ("ci-weighted", "f = (z1^2, z2^3, z3): Mellin and regularized limits at the origin"),
    ("ci-coupled", "f = (z1, z2, z3 + z1 z2): Mellin and regularized limits at the origin"),
    ("resonance", "chart (z1, z2, z1 z2): Hölder fit and the pole through the origin"),
];

/// λ points for the `section3` chart-sum check.
#[derive(Debug, Clone, PartialEq)]
pub enum LambdaGrid {
    /// The 27-point grid over `{0.05, 0.175, 0.3}³`.
    Default,
    /// Its 8 corners.
    Coarse,
    Points(Vec<LambdaPoint>),
}

impl LambdaGrid {
    /// `default`, `coarse`, or `a,b,c;d,e,f`.
    pub fn parse(s: &str, path: &str) -> Valid<Self> {
        match s.trim() {
            "default" => return Ok(LambdaGrid::Default),
            "coarse" => return Ok(LambdaGrid::Coarse),
            _ => {}
        }
        let mut pts = Vec::new();
        for (i, p) in s.split(';').enumerate() {
            let v: Vec<f64> = p
                .split(',')
                .map(|x| x.trim().parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| SchemaError::new(format!("{path}[{i}]"), format!("`{p}`: {e}")))?;
            if v.len() != 3 || v.iter().any(|x| !x.is_finite()) {
                return Err(SchemaError::new(format!("{path}[{i}]"), "expected three finite numbers"));
            }
            pts.push(LambdaPoint::real(&v));
        }
        Ok(LambdaGrid::Points(pts))
    }

    pub fn points(&self) -> Vec<LambdaPoint> {
        match self {
            LambdaGrid::Default => section3_grid(),
            LambdaGrid::Coarse => {
                let v = [0.05, 0.3];
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
            LambdaGrid::Points(p) => p.clone(),
        }
    }
}

/// A validated document, ready to run.
#[derive(Debug, Clone)]
pub enum Plan {
    Registry { name: String, grid: Option<LambdaGrid> },
    Mellin(MellinPlan),
    Regularize(RegularizePlan),
}

#[derive(Debug, Clone)]
pub struct MellinPlan {
    pub name: String,
    pub chart: ChartSpec,
    pub form: TestForm,
    pub points: Vec<LambdaPoint>,
    pub method: Method,
    pub two_path_tol: f64,
    pub expect: Vec<(LambdaPoint, Complex64, f64)>,
    pub spec: QuadratureSpec,
}

#[derive(Debug, Clone)]
pub struct RegularizePlan {
    pub name: String,
    pub chart: ChartSpec,
    pub form: TestForm,
    pub cutoffs: Vec<CutoffSpec>,
    pub paths: Vec<EpsPath>,
    pub expected: Option<Complex64>,
    pub limit_tol: f64,
    pub agreement_tol: f64,
    pub gamma_min: Option<f64>,
    pub spec: QuadratureSpec,
}

impl Plan {
    pub fn name(&self) -> &str {
        match self {
            Plan::Registry { name, .. } => name,
            Plan::Mellin(p) => &p.name,
            Plan::Regularize(p) => &p.name,
        }
    }

    /// Applies `--tol` and `--budget` to document pipelines.
    pub fn override_quadrature(&mut self, tol: Option<f64>, budget: Option<u64>) {
        let spec = match self {
            Plan::Registry { .. } => return,
            Plan::Mellin(p) => &mut p.spec,
            Plan::Regularize(p) => &mut p.spec,
        };
        if let Some(t) = tol {
            spec.tol = t;
        }
        if let Some(b) = budget {
            spec.budget = b;
        }
    }
}

fn cx(v: [f64; 2]) -> Complex64 {
    Complex64::new(v[0], v[1])
}

fn positive(v: f64, path: &str) -> Valid<f64> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(SchemaError::new(path, format!("must be positive and finite, got {v}")))
    }
}

fn require<'a, T>(v: &'a Option<T>, path: &str) -> Valid<&'a T> {
    v.as_ref().ok_or_else(|| SchemaError::new(path, "missing"))
}

fn file_name(s: &str, path: &str) -> Valid<String> {
    if !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '-' || c == '_') {
        Ok(s.to_string())
    } else {
        Err(SchemaError::new(path, format!("`{s}` must be non-empty and use only [A-Za-z0-9_-]")))
    }
}

impl ScenarioDocument {
    pub fn from_toml(text: &str) -> Valid<Self> {
        toml::from_str(text).map_err(|e| {
            let msg = e.message().to_string();
            let at = e.span().map(|s| {
                let line = text[..s.start.min(text.len())].lines().count().max(1);
                format!("document (line {line})")
            });
            SchemaError::new(at.unwrap_or_else(|| "document".into()), msg)
        })
    }

    pub fn validate(&self) -> Valid<Plan> {
        if self.schema != SCHEMA_VERSION {
            return Err(SchemaError::new("schema", format!("unsupported version {}, expected {SCHEMA_VERSION}", self.schema)));
        }
        let name = |default: &str| -> Valid<String> {
            file_name(self.name.as_deref().unwrap_or(default), "name")
        };
        match self.pipeline {
            Pipeline::Scenario => {
                let s = require(&self.scenario, "scenario")?;
                let grid = s.lambda_grid.as_deref().map(|g| LambdaGrid::parse(g, "scenario.lambda_grid")).transpose()?;
                registry_plan(&s.name, grid, "scenario.name", "scenario.lambda_grid").and_then(|p| match p {
                    Plan::Registry { grid, .. } => Ok(Plan::Registry { name: name(&s.name)?, grid }),
                    other => Ok(other),
                })
            }
            Pipeline::Mellin => {
                let chart = self.chart()?;
                let form = self.form(chart.n)?;
                let spec = self.quadrature.build(chart.n)?;
                let sec = require(&self.mellin, "mellin")?;
                if sec.lambda.is_empty() {
                    return Err(SchemaError::new("mellin.lambda", "needs at least one point"));
                }
                let point = |v: &[f64], path: String| -> Valid<LambdaPoint> {
                    if v.len() != chart.m() || v.iter().any(|x| !x.is_finite()) {
                        return Err(SchemaError::new(path, format!("expected {} finite entries", chart.m())));
                    }
                    Ok(LambdaPoint::real(v))
                };
                let points =
                    sec.lambda.iter().enumerate().map(|(i, v)| point(v, format!("mellin.lambda[{i}]"))).collect::<Valid<_>>()?;
                let expect = sec
                    .expect
                    .iter()
                    .enumerate()
                    .map(|(i, e)| {
                        Ok((
                            point(&e.lambda, format!("mellin.expect[{i}].lambda"))?,
                            cx(e.value),
                            positive(e.tol, &format!("mellin.expect[{i}].tol"))?,
                        ))
                    })
                    .collect::<Valid<_>>()?;
                Ok(Plan::Mellin(MellinPlan {
                    name: name("mellin")?,
                    chart,
                    form,
                    points,
                    method: sec.method,
                    two_path_tol: positive(sec.two_path_tol.unwrap_or(1e-5), "mellin.two_path_tol")?,
                    expect,
                    spec,
                }))
            }
            Pipeline::Regularize => {
                let chart = self.chart()?;
                let form = self.form(chart.n)?;
                let spec = self.quadrature.build(chart.n)?;
                let sec = require(&self.regularize, "regularize")?;
                let m = chart.m();
                let cutoffs = match sec.cutoffs.len() {
                    1 => vec![cutoff(&sec.cutoffs[0], "regularize.cutoffs[0]")?; m],
                    k if k == m => sec
                        .cutoffs
                        .iter()
                        .enumerate()
                        .map(|(i, c)| cutoff(c, &format!("regularize.cutoffs[{i}]")))
                        .collect::<Valid<_>>()?,
                    k => return Err(SchemaError::new("regularize.cutoffs", format!("expected 1 or {m} entries, found {k}"))),
                };
                if sec.paths.is_empty() {
                    return Err(SchemaError::new("regularize.paths", "needs at least one path"));
                }
                let paths = sec
                    .paths
                    .iter()
                    .enumerate()
                    .map(|(i, p)| p.build(m, &format!("regularize.paths[{i}]")))
                    .collect::<Valid<_>>()?;
                Ok(Plan::Regularize(RegularizePlan {
                    name: name("regularize")?,
                    chart,
                    form,
                    cutoffs,
                    paths,
                    expected: sec.expected.map(cx),
                    limit_tol: positive(sec.limit_tol.unwrap_or(1e-3), "regularize.limit_tol")?,
                    agreement_tol: positive(sec.agreement_tol.unwrap_or(1e-3), "regularize.agreement_tol")?,
                    gamma_min: sec.gamma_min.map(|g| positive(g, "regularize.gamma_min")).transpose()?,
                    spec,
                }))
            }
        }
    }

    fn chart(&self) -> Valid<ChartSpec> {
        let c = require(&self.chart, "chart")?;
        if c.exponents.is_empty() {
            return Err(SchemaError::new("chart.exponents", "needs at least one row"));
        }
        let m = c.exponents.len();
        let dbar = c.dbar.clone().unwrap_or_else(|| vec![false; m]);
        let mut chart = ChartSpec::new(c.exponents.clone(), dbar).map_err(|e| SchemaError::new("chart", e))?;
        if chart.n == 0 {
            return Err(SchemaError::new("chart.exponents[0]", "rows must be non-empty"));
        }
        if let Some(units) = &c.units {
            if units.len() != m {
                return Err(SchemaError::new("chart.units", format!("expected {m} entries, found {}", units.len())));
            }
            chart.units = units
                .iter()
                .enumerate()
                .map(|(j, u)| parse_poly(u, Some(chart.n)).map(Some).map_err(|e| SchemaError::new(format!("chart.units[{j}]"), e)))
                .collect::<Valid<_>>()?;
        }
        Ok(chart)
    }

    fn form(&self, n: usize) -> Valid<TestForm> {
        let f = require(&self.form, "form")?;
        let mut anti = Vec::new();
        for (i, &k) in f.anti.iter().enumerate() {
            if k == 0 || k > n {
                return Err(SchemaError::new(format!("form.anti[{i}]"), format!("index {k} not in 1..={n}")));
            }
            anti.push(k - 1);
        }
        let factors =
            f.factors.iter().enumerate().map(|(i, x)| x.build(n, &format!("form.factors[{i}]"))).collect::<Valid<_>>()?;
        TestForm::product(n, cx(f.coef), factors, anti).map_err(|e| SchemaError::new("form", e))
    }
}

/// `section3`, `ci-*` or `resonance`; `lambda_grid` only applies to `section3`.
pub fn registry_plan(name: &str, grid: Option<LambdaGrid>, path: &str, grid_path: &str) -> Valid<Plan> {
    if !REGISTRY.iter().any(|(n, _)| *n == name) {
        let known: Vec<&str> = REGISTRY.iter().map(|(n, _)| *n).collect();
        return Err(SchemaError::new(path, format!("unknown scenario `{name}`; known: {}", known.join(", "))));
    }
    if grid.is_some() && name != "section3" {
        return Err(SchemaError::new(grid_path, format!("only applies to section3, not {name}")));
    }
    Ok(Plan::Registry { name: name.to_string(), grid })
}

fn cutoff(s: &str, path: &str) -> Valid<CutoffSpec> {
    let kind = match s.trim() {
        "rational" => CutoffKind::Rational,
        "exponential" => CutoffKind::Exponential,
        t => {
            let args = t
                .strip_prefix("smoothstep(")
                .and_then(|r| r.strip_suffix(')'))
                .ok_or_else(|| SchemaError::new(path, format!("unknown cutoff `{t}`")))?;
            let v: Vec<f64> = args
                .split(',')
                .map(|x| x.trim().parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| SchemaError::new(path, e))?;
            if v.len() != 2 {
                return Err(SchemaError::new(path, "smoothstep takes (t0, t1)"));
            }
            CutoffKind::Smoothstep { t0: v[0], t1: v[1] }
        }
    };
    make_cutoff(kind).map_err(|e| SchemaError::new(path, e))
}

impl FactorSection {
    fn build(&self, n: usize, path: &str) -> Valid<ProfileFactor> {
        let radius = || -> Valid<f64> { positive(*require(&self.radius, &format!("{path}.radius"))?, &format!("{path}.radius")) };
        let center = cx(self.center);
        let value = cx(self.value);
        let plateau = || -> Valid<(f64, f64)> {
            let inner = positive(*require(&self.inner, &format!("{path}.inner"))?, &format!("{path}.inner"))?;
            let outer = positive(*require(&self.outer, &format!("{path}.outer"))?, &format!("{path}.outer"))?;
            if outer <= inner {
                return Err(SchemaError::new(format!("{path}.outer"), "must exceed inner"));
            }
            Ok((inner, outer))
        };
        let profile = match self.profile.as_str() {
            "gaussian" => Profile::gaussian(center, radius()?, value),
            "bump" => Profile::bump(center, radius()?, value),
            "poly-gaussian" => {
                let mut terms = Vec::new();
                for (i, t) in self.poly.iter().enumerate() {
                    let ok = |x: f64| x >= 0.0 && x.fract() == 0.0 && x <= 16.0;
                    if !ok(t[0]) || !ok(t[1]) {
                        return Err(SchemaError::new(format!("{path}.poly[{i}]"), "powers must be integers in 0..=16"));
                    }
                    terms.push((t[0] as u32, t[1] as u32, Complex64::new(t[2], t[3])));
                }
                if terms.is_empty() {
                    return Err(SchemaError::new(format!("{path}.poly"), "needs at least one term"));
                }
                Profile::poly_gaussian(center, radius()?, terms)
            }
            "plateau" => {
                let (a, b) = plateau()?;
                Profile::plateau(a, b)
            }
            "inverted-plateau" => {
                let (a, b) = plateau()?;
                Profile::inverted_plateau(a, b)
            }
            "constant" => Profile::constant(value),
            other => return Err(SchemaError::new(format!("{path}.profile"), format!("unknown profile `{other}`"))),
        };
        let arg = match (&self.var, &self.arg) {
            (&Some(k), None) if k >= 1 && k <= n => SparsePoly::var(n, k - 1),
            (&Some(k), None) => return Err(SchemaError::new(format!("{path}.var"), format!("index {k} not in 1..={n}"))),
            (None, Some(a)) => parse_poly(a, Some(n)).map_err(|e| SchemaError::new(format!("{path}.arg"), e))?,
            _ => return Err(SchemaError::new(path, "give exactly one of `var` and `arg`")),
        };
        let f = ProfileFactor::new(Arc::new(profile), arg);
        Ok(if self.dbar { f.dbar_of() } else { f })
    }
}

impl PathSection {
    fn build(&self, m: usize, path: &str) -> Valid<EpsPath> {
        let len = |v: &Option<Vec<f64>>, field: &str| -> Valid<Vec<f64>> {
            let p = format!("{path}.{field}");
            let v = require(v, &p)?;
            if v.len() != m {
                return Err(SchemaError::new(p, format!("expected {m} entries, found {}", v.len())));
            }
            Ok(v.clone())
        };
        let kind = match self.kind.as_str() {
            "parabolic" => PathKind::Parabolic(len(&self.exponents, "exponents")?),
            "line" => PathKind::Line { start: len(&self.start, "start")?, target: len(&self.target, "target")? },
            "iterated" => {
                let order = require(&self.order, &format!("{path}.order"))?;
                if let Some(&k) = order.iter().find(|&&k| k == 0 || k > m) {
                    return Err(SchemaError::new(format!("{path}.order"), format!("index {k} not in 1..={m}")));
                }
                let base = self.base.clone().unwrap_or_else(|| vec![0.0; m]);
                if base.len() != m {
                    return Err(SchemaError::new(format!("{path}.base"), format!("expected {m} entries")));
                }
                PathKind::Iterated { order: order.iter().map(|k| k - 1).collect(), base }
            }
            other => return Err(SchemaError::new(format!("{path}.kind"), format!("unknown path kind `{other}`"))),
        };
        let deltas = match (&self.deltas, &self.geometric) {
            (Some(d), None) => d.clone(),
            (None, Some(g)) => {
                positive(g.start, &format!("{path}.geometric.start"))?;
                if !(g.ratio > 0.0 && g.ratio < 1.0) {
                    return Err(SchemaError::new(format!("{path}.geometric.ratio"), "must lie in (0, 1)"));
                }
                EpsPath::geometric(g.start, g.ratio, g.count)
            }
            _ => return Err(SchemaError::new(path, "give exactly one of `deltas` and `geometric`")),
        };
        EpsPath::new(kind, deltas).map_err(|e| SchemaError::new(path, e))
    }
}

impl QuadratureSection {
    pub fn build(&self, n: usize) -> Valid<QuadratureSpec> {
        let mut s = match self.preset.as_deref() {
            None | Some("default") => QuadratureSpec::default(),
            Some("coarse") => QuadratureSpec::coarse(),
            Some(p) => return Err(SchemaError::new("quadrature.preset", format!("unknown preset `{p}`"))),
        };
        if let Some(v) = self.nodes_per_panel {
            s.nodes_per_panel = v;
        }
        if let Some(v) = self.outer_panels {
            s.outer_panels = v;
        }
        if let Some(v) = self.graded_panels {
            s.graded_panels = v;
        }
        if let Some(v) = self.ratio {
            s.ratio = v;
        }
        if let Some(v) = self.angular {
            s.angular = v;
        }
        if let Some(t) = &self.tol {
            s.tol = positive(*t, "quadrature.tol")?;
        }
        if let Some(b) = self.budget {
            if b == 0 {
                return Err(SchemaError::new("quadrature.budget", "must be positive"));
            }
            s.budget = b;
        }
        if let Some(t) = &self.truncation {
            if t.len() != n {
                return Err(SchemaError::new("quadrature.truncation", format!("expected {n} entries, found {}", t.len())));
            }
            for (i, r) in t.iter().enumerate() {
                positive(*r, &format!("quadrature.truncation[{i}]"))?;
            }
            s.truncation = t.iter().map(|r| Some(*r)).collect();
        }
        if s.outer_panels == 0 {
            return Err(SchemaError::new("quadrature.outer_panels", "must be positive"));
        }
        s.validate().map_err(|e| SchemaError::new("quadrature", e))?;
        Ok(s)
    }
}
