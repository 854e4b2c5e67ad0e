//! Run reports and their CSV / TOML export. Output bytes depend only on the
//! report contents; runtimes are written only when asked for.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::Serialize;

use residue_core::scenarios::{Check, Report};

/// Column order of every CSV file.
pub const CSV_HEADER: [&str; 7] = ["scenario", "check", "point", "value_re", "value_im", "err_bound", "status"];

#[derive(Debug, Clone, PartialEq)]
pub struct RunCheck {
    pub name: String,
    pub expected: Option<Complex64>,
    pub observed: Option<Complex64>,
    pub err_bound: f64,
    pub tol: f64,
    pub pass: bool,
    pub seconds: f64,
    /// Why the check failed; always present when `pass` is false.
    pub witness: Option<String>,
}

impl RunCheck {
    pub fn symbolic(name: &str, pass: bool, witness: Option<String>) -> Self {
        let witness = match (pass, witness) {
            (false, None) => Some("no witness recorded".into()),
            (_, w) => w,
        };
        RunCheck { name: name.into(), expected: None, observed: None, err_bound: 0.0, tol: 0.0, pass, seconds: 0.0, witness }
    }
}

impl From<&Check> for RunCheck {
    fn from(c: &Check) -> Self {
        let known = |z: Complex64| (!z.re.is_nan()).then_some(z);
        let (expected, observed) = (known(c.expected), known(c.observed));
        let witness = (!c.pass).then(|| match (expected, observed) {
            (Some(e), Some(o)) => format!("observed {} vs expected {}, |diff| = {:e}", fmt_c(o), fmt_c(e), (o - e).norm()),
            (None, Some(o)) => format!("observed {} (witness)", fmt_c(o)),
            _ => "evaluation failed; see check name".into(),
        });
        RunCheck {
            name: c.name.clone(),
            expected,
            observed,
            err_bound: c.err,
            tol: c.tol,
            pass: c.pass,
            seconds: c.seconds,
            witness,
        }
    }
}

/// One evaluated point: `λ=(…)` or `eps=(…)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub check: String,
    pub point: String,
    pub value: Complex64,
    pub err: f64,
}

/// Version and run parameters, so a report can be reproduced.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Stamp {
    pub version: String,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub budget: Option<u64>,
}

impl Stamp {
    pub fn new(seed: u64, tol: Option<f64>, budget: Option<u64>) -> Self {
        Stamp { version: env!("CARGO_PKG_VERSION").into(), seed, tol, budget }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub scenario: String,
    pub stamp: Stamp,
    pub checks: Vec<RunCheck>,
    pub samples: Vec<Sample>,
    /// Free-form results such as pole factors or the corrected form.
    pub notes: Vec<(String, String)>,
}

impl RunReport {
    pub fn new(scenario: &str, stamp: Stamp) -> Self {
        RunReport { scenario: scenario.into(), stamp, checks: vec![], samples: vec![], notes: vec![] }
    }

    pub fn from_core(r: &Report, stamp: Stamp) -> Self {
        let mut out = Self::new(&r.scenario, stamp);
        out.checks = r.checks.iter().map(RunCheck::from).collect();
        out.samples = r
            .records
            .iter()
            .map(|x| Sample { check: x.check.clone(), point: x.point.clone(), value: x.value, err: x.err })
            .collect();
        out
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    /// Samples first, then one row per check.
    pub fn to_csv(&self) -> io::Result<Vec<u8>> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(CSV_HEADER)?;
        for s in &self.samples {
            w.write_record([
                self.scenario.as_str(),
                &s.check,
                &s.point,
                &fmt_f(s.value.re),
                &fmt_f(s.value.im),
                &fmt_f(s.err),
                "sample",
            ])?;
        }
        for c in &self.checks {
            let v = c.observed.unwrap_or(Complex64::new(f64::NAN, f64::NAN));
            w.write_record([
                self.scenario.as_str(),
                &c.name,
                "",
                &fmt_f(v.re),
                &fmt_f(v.im),
                &fmt_f(c.err_bound),
                if c.pass { "pass" } else { "fail" },
            ])?;
        }
        w.into_inner().map_err(|e| e.into_error())
    }

    pub fn to_toml(&self, timings: bool) -> String {
        let doc = TomlReport {
            schema: crate::doc::SCHEMA_VERSION,
            scenario: &self.scenario,
            passed: self.passed(),
            stamp: &self.stamp,
            notes: self.notes.iter().map(|(k, v)| TomlNote { key: k, value: v }).collect(),
            checks: self
                .checks
                .iter()
                .map(|c| TomlCheck {
                    name: &c.name,
                    status: if c.pass { "pass" } else { "fail" },
                    expected: c.expected.map(|z| [z.re, z.im]),
                    observed: c.observed.map(|z| [z.re, z.im]),
                    err_bound: c.err_bound,
                    tol: c.tol,
                    witness: c.witness.as_deref(),
                    seconds: timings.then_some(c.seconds),
                })
                .collect(),
        };
        toml::to_string(&doc).expect("report serializes")
    }

    /// Human summary for stdout, without runtimes.
    pub fn summary(&self) -> String {
        let mut s = String::new();
        for (k, v) in &self.notes {
            s.push_str(&format!("{k}: {v}\n"));
        }
        for c in &self.checks {
            s.push_str(&format!("{} {}", if c.pass { "PASS" } else { "FAIL" }, c.name));
            if let Some(w) = &c.witness {
                s.push_str(&format!("  ({w})"));
            }
            s.push('\n');
        }
        let failed = self.checks.iter().filter(|c| !c.pass).count();
        s.push_str(&format!("{}: {} checks, {} failed\n", self.scenario, self.checks.len(), failed));
        s
    }

    /// Writes `<scenario>.csv` and/or `<scenario>.toml` into `dir`.
    pub fn export(&self, dir: &Path, format: Format, timings: bool) -> io::Result<Vec<PathBuf>> {
        fs::create_dir_all(dir)?;
        let mut written = Vec::new();
        if matches!(format, Format::Csv | Format::Both) {
            let p = dir.join(format!("{}.csv", self.scenario));
            fs::write(&p, self.to_csv()?)?;
            written.push(p);
        }
        if matches!(format, Format::Toml | Format::Both) {
            let p = dir.join(format!("{}.toml", self.scenario));
            fs::write(&p, self.to_toml(timings))?;
            written.push(p);
        }
        Ok(written)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Toml,
    Both,
}

#[derive(Serialize)]
struct TomlReport<'a> {
    schema: u32,
    scenario: &'a str,
    passed: bool,
    stamp: &'a Stamp,
    notes: Vec<TomlNote<'a>>,
    checks: Vec<TomlCheck<'a>>,
}

#[derive(Serialize)]
struct TomlNote<'a> {
    key: &'a str,
    value: &'a str,
}

#[derive(Serialize)]
struct TomlCheck<'a> {
    name: &'a str,
    status: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    expected: Option<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    observed: Option<[f64; 2]>,
    err_bound: f64,
    tol: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<&'a str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    seconds: Option<f64>,
}

/// Shortest round-trip scientific notation.
pub fn fmt_f(x: f64) -> String {
    format!("{x:e}")
}

fn fmt_c(z: Complex64) -> String {
    format!("{:e}{:+e}i", z.re, z.im)
}
