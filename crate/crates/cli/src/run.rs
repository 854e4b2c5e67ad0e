//! Executes validated plans and the `decompose` subcommand.

use num_complex::Complex64;
use num_traits::One;

use residue_core::decompose::{lemma7_correct, verify_lemma7};
use residue_core::error::{Error, Result};
use residue_core::mellin::{common_factor, continue_eval, mellin_direct, reduce_chart, LambdaPoint};
use residue_core::parse::{parse_form, parse_poly};
use residue_core::poly::ExponentVector;
use residue_core::regularize::sweep;
use residue_core::scenarios::{
    complete_intersection_demo, resonance_report, section3_report, Check, DemoPlan, Instance,
};

use crate::doc::{LambdaGrid, Method, MellinPlan, Plan, RegularizePlan, SchemaError};
use crate::report::{RunCheck, RunReport, Sample, Stamp};

/// A run that did not produce a report.
#[derive(Debug)]
pub enum Failure {
    Schema(SchemaError),
    Exec(Error),
}

impl From<SchemaError> for Failure {
    fn from(e: SchemaError) -> Self {
        Failure::Schema(e)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Exec(e)
    }
}

pub fn run(plan: &Plan, stamp: Stamp) -> Result<RunReport> {
    match plan {
        Plan::Registry { name, grid } => Ok(registry(name, grid.as_ref(), stamp)),
        Plan::Mellin(p) => mellin(p, stamp),
        Plan::Regularize(p) => regularize(p, stamp),
    }
}

fn registry(name: &str, grid: Option<&LambdaGrid>, stamp: Stamp) -> RunReport {
    let rep = match name {
        "section3" => section3_report(&grid.unwrap_or(&LambdaGrid::Default).points()),
        "resonance" => resonance_report(),
        other => {
            let inst = Instance::from_name(other.trim_start_matches("ci-")).expect("registry names are validated");
            complete_intersection_demo(inst, &DemoPlan::for_instance(inst))
        }
    };
    let mut out = RunReport::from_core(&rep, stamp);
    out.scenario = name.to_string();
    out
}

fn point(tag: &str, v: impl Iterator<Item = f64>) -> String {
    let parts: Vec<String> = v.map(|x| format!("{x:e}")).collect();
    format!("{tag}=({})", parts.join(";"))
}

fn lambda_point(l: &LambdaPoint) -> String {
    point("lambda", l.0.iter().map(|z| z.re))
}

fn mellin(p: &MellinPlan, stamp: Stamp) -> Result<RunReport> {
    let mut rep = RunReport::new(&p.name, stamp);
    let terms = match p.method {
        Method::Direct => None,
        _ => {
            let t = reduce_chart(&p.chart, &p.form)?;
            rep.notes.push(("pole-factor".into(), common_factor(&t).0.to_string()));
            Some(t)
        }
    };
    // value and error at λ by the configured method, continuation preferred
    let eval = |lam: &LambdaPoint, rep: &mut RunReport, record: bool| -> Result<(Complex64, f64)> {
        let pt = lambda_point(lam);
        let mut best = None;
        if let Some(terms) = &terms {
            let mv = continue_eval(terms, lam, &p.spec)?;
            if record {
                rep.samples.push(Sample { check: "entire".into(), point: pt.clone(), value: mv.entire, err: mv.err });
            }
            match mv.value() {
                Ok(v) => {
                    if record {
                        rep.samples.push(Sample { check: "continued".into(), point: pt.clone(), value: v, err: mv.value_err() });
                    }
                    best = Some((v, mv.value_err()));
                }
                Err(Error::OnPole { hyperplane, .. }) => {
                    rep.notes.push((format!("on-pole {pt}"), hyperplane));
                }
                Err(e) => return Err(e),
            }
        }
        if p.method != Method::Continue {
            let d = mellin_direct(&p.chart, &p.form, lam, &p.spec)?;
            if record {
                rep.samples.push(Sample { check: "direct".into(), point: pt.clone(), value: d.value, err: d.err });
            }
            if let (Method::Both, Some((v, e))) = (p.method, best) {
                let mut c = Check::relative(&format!("two-path {pt}"), d.value, v, e + d.err, p.two_path_tol);
                c.err = e + d.err;
                rep.checks.push(RunCheck::from(&c));
            }
            best = best.or(Some((d.value, d.err)));
        }
        best.ok_or_else(|| Error::OnPole { hyperplane: "common factor".into(), distance: 0.0 })
    };
    for lam in &p.points {
        eval(lam, &mut rep, true)?;
    }
    for (i, (lam, expected, tol)) in p.expect.iter().enumerate() {
        let (v, e) = eval(lam, &mut rep, false)?;
        let c = Check::relative(&format!("expect-{} {}", i + 1, lambda_point(lam)), *expected, v, e, *tol);
        rep.checks.push(RunCheck::from(&c));
    }
    Ok(rep)
}

fn regularize(p: &RegularizePlan, stamp: Stamp) -> Result<RunReport> {
    let mut rep = RunReport::new(&p.name, stamp);
    let mut limits = Vec::new();
    for (k, path) in p.paths.iter().enumerate() {
        let tag = format!("path-{}", k + 1);
        let s = sweep(&p.chart, &p.form, &p.cutoffs, path, &p.spec)?;
        for x in &s.points {
            rep.samples.push(Sample { check: tag.clone(), point: point("eps", x.eps.iter().copied()), value: x.value, err: x.err });
        }
        if let Some(cert) = &s.resonance {
            let v: Vec<String> = cert.iter().map(|x| x.to_string()).collect();
            rep.notes.push(("resonance".into(), format!("({})", v.join(","))));
        }
        let Some(l) = &s.limit else {
            rep.checks.push(RunCheck::symbolic(&format!("{tag} limit"), false, Some("increments do not shrink".into())));
            continue;
        };
        rep.samples.push(Sample { check: format!("{tag} limit"), point: "delta=0".into(), value: l.limit, err: l.err });
        limits.push((k, l.limit, l.err));
        if let Some(e) = p.expected {
            rep.checks.push(RunCheck::from(&Check::relative(&format!("{tag} limit"), e, l.limit, l.err, p.limit_tol)));
        }
        if let Some(g) = p.gamma_min {
            match &s.holder {
                Some(h) => rep.checks.push(RunCheck::from(&Check::above(&format!("{tag} holder-gamma"), g, h.gamma, h.ci))),
                None => rep.checks.push(RunCheck::symbolic(
                    &format!("{tag} holder-gamma"),
                    false,
                    Some("too few usable samples for a fit".into()),
                )),
            }
        }
    }
    if let Some((k0, first, e0)) = limits.first().copied() {
        for &(k, v, e) in &limits[1..] {
            let name = format!("agreement path-{} vs path-{}", k + 1, k0 + 1);
            rep.checks.push(RunCheck::from(&Check::relative(&name, first, v, e + e0, p.agreement_tol)));
        }
    }
    Ok(rep)
}

/// `decompose`: corrects `form` so that `dσ∧α' = 0`, with the three
/// conclusions verified exactly. `tau` is 1-based.
pub fn decompose(form: &str, sigma: &str, tau: &[usize], dim: Option<usize>, stamp: Stamp) -> std::result::Result<RunReport, Failure> {
    let a0 = parse_form(form, dim).map_err(|e| SchemaError::new("--form", e))?;
    let s0 = parse_poly(sigma, dim).map_err(|e| SchemaError::new("--sigma", e))?;
    if tau.is_empty() {
        return Err(SchemaError::new("--tau", "needs at least one index").into());
    }
    if let Some(k) = tau.iter().find(|&&k| k == 0) {
        return Err(SchemaError::new("--tau", format!("indices are 1-based, got {k}")).into());
    }
    let n = dim.unwrap_or_else(|| a0.dim().max(s0.dim()).max(*tau.iter().max().unwrap_or(&1)));
    let a = parse_form(form, Some(n)).map_err(|e| SchemaError::new("--form", e))?;
    let s = parse_poly(sigma, Some(n)).map_err(|e| SchemaError::new("--sigma", e))?;
    let mut terms = s.terms();
    let sigma_e: ExponentVector = match (terms.next(), terms.next()) {
        (Some((e, c)), None) if c.is_one() => e.clone(),
        _ => return Err(SchemaError::new("--sigma", format!("`{sigma}` is not a monic monomial")).into()),
    };
    if let Some(k) = tau.iter().find(|&&k| k > n) {
        return Err(SchemaError::new("--tau", format!("index {k} not in 1..={n}")).into());
    }
    let tau0: Vec<usize> = tau.iter().map(|k| k - 1).collect();
    let corrected = lemma7_correct(&a, &sigma_e, &tau0)?;
    let mut rep = RunReport::new("decompose", stamp);
    rep.notes.push(("form".into(), a.to_string()));
    rep.notes.push(("sigma".into(), s.to_string()));
    let t: Vec<String> = tau.iter().map(|k| k.to_string()).collect();
    rep.notes.push(("tau".into(), format!("{{{}}}", t.join(","))));
    rep.notes.push(("alpha'".into(), corrected.to_string()));
    for c in verify_lemma7(&a, &corrected, &sigma_e, &tau0).checks {
        rep.checks.push(RunCheck::symbolic(&c.name, c.pass, c.witness));
    }
    Ok(rep)
}
