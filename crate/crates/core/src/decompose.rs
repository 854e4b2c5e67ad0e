//! Layered decomposition of a holomorphic form along the coordinate
//! hyperplanes of a squarefree monomial, and the correction form that kills
//! `dσ ∧ ·` while keeping the vanishing behaviour on `Z_τ`.
//!
//! For an index set `I` the decomposition reads
//!
//! ```text
//! α = α_I + Σ_{|J| = |I|-1} α¹_J + ... + Σ_{|J| = 1} α^{|I|-1}_J + α^{|I|}
//! ```
//!
//! where `ω_J` is `ω` restricted to `{z_j = 0, j ∈ J}` and extended
//! constantly, `α¹ = α - α_I`, and `α^{i+1} = α^i - Σ_{|J| = |I|-i} α^i_J`.

use std::fmt;

use crate::error::{Error, Result};
use crate::forms::{DivisorSpec, ExteriorForm};
use crate::poly::{ExponentVector, SparsePoly};

/// The index set `I` together with its subsets `I(j)` of size `|I| - j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexFamily {
    n: usize,
    index: Vec<usize>,
}

impl IndexFamily {
    pub fn new(n: usize, mut index: Vec<usize>) -> Result<Self> {
        index.sort_unstable();
        index.dedup();
        if index.is_empty() {
            return Err(Error::Precondition("index family must be nonempty".into()));
        }
        if let Some(&i) = index.iter().find(|&&i| i >= n) {
            return Err(Error::IndexOutOfRange { index: i, dim: n });
        }
        Ok(IndexFamily { n, index })
    }

    pub fn indices(&self) -> &[usize] {
        &self.index
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.index.len()
    }

    pub fn is_empty(&self) -> bool {
        self.index.is_empty()
    }

    /// All `I(j)`, i.e. subsets with `j` fewer elements, in lexicographic order.
    pub fn level(&self, j: usize) -> Vec<Vec<usize>> {
        let size = self.index.len().saturating_sub(j);
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(size);
        subsets(&self.index, size, 0, &mut cur, &mut out);
        out
    }

    /// The divisor `Z_J = ∪_{i ∈ I \ J} {z_i = 0}`.
    pub fn divisor_of(&self, subset: &[usize]) -> Result<DivisorSpec> {
        let rest: Vec<usize> = self.index.iter().copied().filter(|i| !subset.contains(i)).collect();
        DivisorSpec::from_indices(self.n, &rest)
    }
}

fn subsets(items: &[usize], size: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if cur.len() == size {
        out.push(cur.clone());
        return;
    }
    for i in start..items.len() {
        if items.len() - i < size - cur.len() {
            break;
        }
        cur.push(items[i]);
        subsets(items, size, i + 1, cur, out);
        cur.pop();
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub head: ExteriorForm,
    /// `layers[j-1]` holds `(I(j), α^j_{I(j)})` for `j = 1 .. |I|-1`.
    pub layers: Vec<Vec<(Vec<usize>, ExteriorForm)>>,
    pub tail: ExteriorForm,
}

impl Decomposition {
    /// `α_I + Σ layers`, the correction form with the tail dropped.
    pub fn without_tail(&self) -> ExteriorForm {
        let mut acc = self.head.clone();
        for level in &self.layers {
            for (_, f) in level {
                acc = acc.add(f).expect("same dimension and degree");
            }
        }
        acc
    }

    pub fn reconstruct(&self) -> ExteriorForm {
        self.without_tail().add(&self.tail).expect("same dimension and degree")
    }
}

pub fn prop9_decompose(a: &ExteriorForm, family: &IndexFamily) -> Result<Decomposition> {
    decompose_ordered(a, family, false)
}

pub(crate) fn decompose_ordered(
    a: &ExteriorForm,
    family: &IndexFamily,
    reversed: bool,
) -> Result<Decomposition> {
    if a.dim() != family.dim() {
        return Err(Error::DimensionMismatch { expected: family.dim(), found: a.dim() });
    }
    let head = a.restrict_extend(family.indices());
    let mut current = a.sub(&head)?;
    let mut layers = Vec::new();
    for j in 1..family.len() {
        let mut level = family.level(j);
        if reversed {
            level.reverse();
        }
        let mut pieces = Vec::with_capacity(level.len());
        let mut total = ExteriorForm::zero(a.dim(), a.degree());
        for subset in level {
            let piece = current.restrict_extend(&subset);
            total = total.add(&piece)?;
            pieces.push((subset, piece));
        }
        if reversed {
            pieces.reverse();
        }
        current = current.sub(&total)?;
        layers.push(pieces);
    }
    Ok(Decomposition { head, layers, tail: current })
}

/// `dσ` for a monomial `σ = z^e`.
pub fn d_monomial(sigma: &ExponentVector) -> ExteriorForm {
    let n = sigma.dim();
    ExteriorForm::function(SparsePoly::monomial(n, sigma.clone(), crate::poly::coeff(1))).exterior_d()
}

/// Validates the coordinate normalization (σ supported away from τ) and
/// returns the witness index when `dσ ∧ α` fails to vanish on `Z_τ`.
fn check_lemma7_input(a: &ExteriorForm, sigma: &ExponentVector, tau: &[usize]) -> Result<()> {
    let n = a.dim();
    if sigma.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, found: sigma.dim() });
    }
    if let Some(&i) = tau.iter().find(|&&i| i >= n) {
        return Err(Error::IndexOutOfRange { index: i, dim: n });
    }
    if let Some(&i) = tau.iter().find(|&&i| sigma.get(i) > 0) {
        return Err(Error::Precondition(format!(
            "z{} divides both sigma and tau; the monomials must involve disjoint coordinates",
            i + 1
        )));
    }
    let ds_a = d_monomial(sigma).wedge(a)?;
    for &i in tau {
        let r = ds_a.restrict_extend(&[i]);
        if !r.is_zero() {
            return Err(Error::Precondition(format!(
                "dσ∧α does not vanish on {{z{} = 0}}: restriction is {}",
                i + 1,
                r
            )));
        }
    }
    Ok(())
}

/// Returns `α'` with `dσ∧α' = 0`, `α'` vanishing on `Z_σ`, and `α - α'`
/// vanishing on `Z_τ`, provided `dσ∧α` vanishes on `Z_τ`.
pub fn lemma7_correct(a: &ExteriorForm, sigma: &ExponentVector, tau: &[usize]) -> Result<ExteriorForm> {
    check_lemma7_input(a, sigma, tau)?;
    let family = IndexFamily::new(a.dim(), tau.to_vec())?;
    Ok(prop9_decompose(a, &family)?.without_tail())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckResult {
    pub name: String,
    pub pass: bool,
    pub witness: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VerificationReport {
    pub checks: Vec<CheckResult>,
}

impl VerificationReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.pass)
    }

    fn push(&mut self, name: String, pass: bool, witness: Option<String>) {
        self.checks.push(CheckResult { name, pass, witness });
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            write!(f, "{} {}", if c.pass { "PASS" } else { "FAIL" }, c.name)?;
            if let Some(w) = &c.witness {
                write!(f, "  witness: {w}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

fn fmt_set(s: &[usize]) -> String {
    let v: Vec<String> = s.iter().map(|i| (i + 1).to_string()).collect();
    format!("{{{}}}", v.join(","))
}

fn membership_witness(f: &ExteriorForm, d: &DivisorSpec) -> Option<String> {
    d.components().into_iter().find_map(|i| {
        let r = f.restrict_extend(&[i]);
        (!r.is_zero()).then(|| format!("restriction to z{} = 0 is {}", i + 1, r))
    })
}

/// Checks the reconstruction identity and every vanishing claim.
pub fn verify_decomposition(d: &Decomposition, a: &ExteriorForm, family: &IndexFamily) -> VerificationReport {
    let mut report = VerificationReport::default();
    let residual = a.sub(&d.reconstruct());
    match residual {
        Ok(r) if r.is_zero() => report.push("reconstruction".into(), true, None),
        Ok(r) => report.push("reconstruction".into(), false, Some(format!("residual {}", r))),
        Err(e) => report.push("reconstruction".into(), false, Some(e.to_string())),
    }
    for (j, level) in d.layers.iter().enumerate() {
        for (subset, f) in level {
            let name = format!("layer {} I(j)={} vanishes on Z_I(j)", j + 1, fmt_set(subset));
            match family.divisor_of(subset) {
                Ok(div) => {
                    let w = membership_witness(f, &div);
                    report.push(name, w.is_none(), w);
                }
                Err(e) => report.push(name, false, Some(e.to_string())),
            }
        }
    }
    let tau = DivisorSpec::from_indices(family.dim(), family.indices()).expect("nonempty family");
    let w = membership_witness(&d.tail, &tau);
    report.push("tail vanishes on Z_tau".into(), w.is_none(), w);
    report
}

/// Checks the three conclusions of the correction lemma for a candidate `α'`.
pub fn verify_lemma7(
    a: &ExteriorForm,
    corrected: &ExteriorForm,
    sigma: &ExponentVector,
    tau: &[usize],
) -> VerificationReport {
    let mut report = VerificationReport::default();
    let n = a.dim();
    match d_monomial(sigma).wedge(corrected) {
        Ok(w) if w.is_zero() => report.push("(i) dσ∧α' = 0".into(), true, None),
        Ok(w) => report.push("(i) dσ∧α' = 0".into(), false, Some(w.to_string())),
        Err(e) => report.push("(i) dσ∧α' = 0".into(), false, Some(e.to_string())),
    }
    match DivisorSpec::new(sigma.clone()) {
        Ok(zs) => {
            let w = membership_witness(corrected, &zs);
            report.push("(ii) α' vanishes on Z_sigma".into(), w.is_none(), w);
        }
        // σ = 1: Z_σ is empty and the claim is vacuous
        Err(_) => report.push("(ii) α' vanishes on Z_sigma".into(), true, None),
    }
    match (a.sub(corrected), DivisorSpec::from_indices(n, tau)) {
        (Ok(diff), Ok(zt)) => {
            let w = membership_witness(&diff, &zt);
            report.push("(iii) α - α' vanishes on Z_tau".into(), w.is_none(), w);
        }
        (Err(e), _) | (_, Err(e)) => {
            report.push("(iii) α - α' vanishes on Z_tau".into(), false, Some(e.to_string()))
        }
    }
    report
}
