//! Mellin transforms of residue integrals on a monomial chart:
//!
//! ```text
//! ∫ ∧_{j∈D} ∂̄|z^{a_j}|^{2λ_j} · ∏_{j∉D} |z^{a_j}|^{2λ_j} / (z^{a_1} ⋯ z^{a_m}) ∧ φ
//! ```
//!
//! `reduce_chart` splits every `∂̄` into its coordinate pieces and removes
//! each `z̄_k^{-1}` by integration by parts, producing explicit pole factors.
//! What is left is holomorphic in λ near 0 and is evaluated by quadrature.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::integrand::{orientation, reduce_mellin, term_integrals, CutoffFactor, Evaluation, Term};
use crate::integrate::QuadratureSpec;
use crate::lambda::{AffineForm, PoleFactor};
use crate::poly::SparsePoly;
use crate::testforms::TestForm;

/// `π*f_j = z^{a_j} f̃_j` with the `∂̄`-flagged factors marked.
#[derive(Debug, Clone, PartialEq)]
pub struct ChartSpec {
    pub n: usize,
    pub exponents: Vec<Vec<u32>>,
    /// `None` means `f̃_j = 1`.
    pub units: Vec<Option<SparsePoly>>,
    pub dbar: Vec<bool>,
}

impl ChartSpec {
    pub fn new(exponents: Vec<Vec<u32>>, dbar: Vec<bool>) -> Result<Self> {
        let n = exponents.first().map_or(0, |a| a.len());
        if let Some(a) = exponents.iter().find(|a| a.len() != n) {
            return Err(Error::DimensionMismatch { expected: n, found: a.len() });
        }
        if dbar.len() != exponents.len() {
            return Err(Error::DimensionMismatch { expected: exponents.len(), found: dbar.len() });
        }
        let m = exponents.len();
        Ok(ChartSpec { n, exponents, units: vec![None; m], dbar })
    }

    pub fn m(&self) -> usize {
        self.exponents.len()
    }

    pub fn flagged(&self) -> Vec<usize> {
        (0..self.m()).filter(|&j| self.dbar[j]).collect()
    }

    /// `z_k` divides exactly one of the monomials.
    pub fn is_simple(&self, k: usize) -> bool {
        self.exponents.iter().filter(|a| a[k] > 0).count() == 1
    }

    fn check_units(&self) -> Result<()> {
        for (j, u) in self.units.iter().enumerate() {
            if let Some(p) = u {
                let one = SparsePoly::one(p.dim());
                if *p != one {
                    return Err(Error::Precondition(format!(
                        "unit f̃{} = {p} is not 1; numerical continuation needs trivial units",
                        j + 1
                    )));
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LambdaPoint(pub Vec<Complex64>);

impl LambdaPoint {
    pub fn real(v: &[f64]) -> Self {
        LambdaPoint(v.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn on_line(delta: f64, t: &[f64]) -> Self {
        LambdaPoint(t.iter().map(|&x| Complex64::new(delta * x, 0.0)).collect())
    }
}

fn sort_sign(v: &[usize]) -> Option<(f64, Vec<usize>)> {
    let mut s = v.to_vec();
    let mut sign = 1.0;
    for i in 0..s.len() {
        for j in 0..s.len() - 1 - i {
            if s[j] == s[j + 1] {
                return None;
            }
            if s[j] > s[j + 1] {
                s.swap(j, j + 1);
                sign = -sign;
            }
        }
    }
    Some((sign, s))
}

/// The integrand as a sum of terms, before any integration by parts.
/// `∂̄|z^a|^{2λ} = λ |z^a|^{2λ} Σ_k a_k dz̄_k / z̄_k`.
pub fn expand_chart(chart: &ChartSpec, t: &TestForm) -> Result<Vec<Term>> {
    expand(chart, t, None)
}

/// Shared expansion. With `eps` set, the factors are cutoffs
/// `χ_j(|z^{a_j}|²/ε_j)` and `∂̄χ_j = χ̃_j Σ_k a_jk dz̄_k/z̄_k` instead of
/// powers; plain cutoffs with `ε_j = 0` are 1 and are dropped.
pub(crate) fn expand(chart: &ChartSpec, t: &TestForm, eps: Option<&[f64]>) -> Result<Vec<Term>> {
    chart.check_units()?;
    if t.n != chart.n {
        return Err(Error::DimensionMismatch { expected: chart.n, found: t.n });
    }
    let n = chart.n;
    let m = chart.m();
    let d = chart.flagged();
    if t.q + d.len() != n {
        return Err(Error::Bidegree(format!(
            "{} ∂̄ factors need a test form of bidegree (n, {}), got (n, {})",
            d.len(),
            n - d.len().min(n),
            t.q
        )));
    }
    if let Some(e) = eps {
        if e.len() != m {
            return Err(Error::DimensionMismatch { expected: m, found: e.len() });
        }
    }
    let s: Vec<AffineForm> = (0..n)
        .map(|k| match eps {
            Some(_) => AffineForm::zero(m),
            None => AffineForm::new(0, (0..m).map(|j| chart.exponents[j][k] as i64).collect()),
        })
        .collect();
    let numer: Vec<AffineForm> = match eps {
        Some(_) => vec![],
        None => d.iter().map(|&j| AffineForm::lambda(m, j)).collect(),
    };
    let (c0, factor) = PoleFactor::from_parts(&numer, &[]);
    let cutoffs: Vec<CutoffFactor> = match eps {
        None => vec![],
        Some(e) => (0..m)
            .filter(|&j| chart.dbar[j] || e[j] > 0.0)
            .map(|j| CutoffFactor { j, tilde: chart.dbar[j], mono: chart.exponents[j].clone(), eps: e[j] })
            .collect(),
    };
    let orient = orientation(n);
    let shift = if (n * d.len()) % 2 == 0 { 1.0 } else { -1.0 };
    let supports: Vec<Vec<usize>> = d.iter().map(|&j| (0..n).filter(|&k| chart.exponents[j][k] > 0).collect()).collect();

    let mut out = Vec::new();
    for sm in &t.summands {
        // one k_j per flagged factor
        let mut choice = vec![0usize; d.len()];
        let total: usize = supports.iter().map(|v| v.len()).product();
        for mut idx in 0..total {
            for (i, sup) in supports.iter().enumerate() {
                choice[i] = sup[idx % sup.len()];
                idx /= sup.len();
            }
            let mut all: Vec<usize> = choice.clone();
            all.extend_from_slice(&sm.anti);
            let Some((sign, _)) = sort_sign(&all) else { continue };
            let mut coef = sm.coef * orient * (shift * sign * c0);
            let mut q: Vec<i32> = sm.zbar.iter().map(|&x| x as i32).collect();
            for (i, &k) in choice.iter().enumerate() {
                coef *= chart.exponents[d[i]][k] as f64;
                q[k] -= 1;
            }
            let p: Vec<i32> = (0..n)
                .map(|k| sm.zpow[k] as i32 - chart.exponents.iter().map(|a| a[k] as i32).sum::<i32>())
                .collect();
            out.push(Term {
                n,
                coef,
                factor: factor.clone(),
                s: s.clone(),
                p,
                q,
                cutoffs: cutoffs.clone(),
                factors: sm.factors.clone(),
            });
        }
    }
    Ok(out)
}

/// Checks the smoothness hypothesis: `(dz̄_k/z̄_k) ∧ φ` smooth for every
/// non-simple `z_k` dividing a flagged monomial. Names the first offender.
pub fn check_hypothesis(chart: &ChartSpec, t: &TestForm) -> Result<()> {
    for k in 0..chart.n {
        let divides_flagged = chart.flagged().iter().any(|&j| chart.exponents[j][k] > 0);
        if !divides_flagged || chart.is_simple(k) {
            continue;
        }
        for sm in &t.summands {
            if sm.anti.contains(&k) || sm.zbar[k] > 0 || sm.coef == Complex64::new(0.0, 0.0) {
                continue;
            }
            return Err(Error::Hypothesis {
                index: k,
                detail: format!("z{} is a non-simple factor and dz̄{}/z̄{} ∧ φ is singular", k + 1, k + 1, k + 1),
            });
        }
    }
    Ok(())
}

/// Expansion followed by integration by parts. Every `z̄_k^{-1}` left in
/// a term comes with `z_k^{p}`, `p ≥ 0`, and every holomorphic pole is simple.
///
/// The smoothness hypothesis is not enforced here; see [`check_hypothesis`].
pub fn reduce_chart(chart: &ChartSpec, t: &TestForm) -> Result<Vec<Term>> {
    reduce_mellin(expand_chart(chart, t)?)
}

/// A value `(G/L)(λ) · entire(λ)` with `G/L` the common pole factor of all
/// terms and `entire` holomorphic near 0.
#[derive(Debug, Clone, PartialEq)]
pub struct MeromorphicValue {
    pub lambda: Vec<Complex64>,
    pub factor: PoleFactor,
    pub entire: Complex64,
    pub err: f64,
}

impl MeromorphicValue {
    /// The full value; fails within relative distance 1e-12 of a pole.
    pub fn value(&self) -> Result<Complex64> {
        if let Some((h, d)) = self.factor.nearest_pole(&self.lambda) {
            if d < 1e-12 {
                return Err(Error::OnPole { hyperplane: h.to_string(), distance: d });
            }
        }
        Ok(self.factor.eval(&self.lambda) * self.entire)
    }

    pub fn value_err(&self) -> f64 {
        self.factor.eval(&self.lambda).norm() * self.err
    }
}

fn multiset_count(v: &[AffineForm]) -> BTreeMap<AffineForm, usize> {
    let mut m = BTreeMap::new();
    for f in v {
        *m.entry(f.clone()).or_insert(0) += 1;
    }
    m
}

/// Common factor of all term factors and, per term, the polynomial residual
/// `R_t · L / G`.
pub fn common_factor(terms: &[Term]) -> (PoleFactor, Vec<Vec<AffineForm>>) {
    let mut lcm: BTreeMap<AffineForm, usize> = BTreeMap::new();
    for t in terms {
        for (f, c) in multiset_count(&t.factor.denominator) {
            let e = lcm.entry(f).or_insert(0);
            *e = (*e).max(c);
        }
    }
    let lifted: Vec<BTreeMap<AffineForm, usize>> = terms
        .iter()
        .map(|t| {
            let mut num = multiset_count(&t.factor.numerator);
            let den = multiset_count(&t.factor.denominator);
            for (f, &c) in &lcm {
                let extra = c - den.get(f).copied().unwrap_or(0);
                if extra > 0 {
                    *num.entry(f.clone()).or_insert(0) += extra;
                }
            }
            num
        })
        .collect();
    let mut gcd: BTreeMap<AffineForm, usize> = lifted.first().cloned().unwrap_or_default();
    for l in &lifted[1.min(lifted.len())..] {
        gcd = gcd
            .into_iter()
            .filter_map(|(f, c)| l.get(&f).map(|&d| (f, c.min(d))))
            .filter(|(_, c)| *c > 0)
            .collect();
    }
    let residuals = lifted
        .into_iter()
        .map(|mut l| {
            for (f, c) in &gcd {
                *l.get_mut(f).unwrap() -= c;
            }
            l.into_iter().flat_map(|(f, c)| std::iter::repeat_n(f, c)).collect()
        })
        .collect();
    let expand = |m: &BTreeMap<AffineForm, usize>| -> Vec<AffineForm> {
        m.iter().flat_map(|(f, &c)| std::iter::repeat_n(f.clone(), c)).collect()
    };
    let (_, factor) = PoleFactor::from_parts(&expand(&gcd), &expand(&lcm));
    (factor, residuals)
}

/// Evaluates reduced terms at λ as a [`MeromorphicValue`]. The entire part
/// is finite everywhere, including on the pole hyperplanes.
pub fn continue_eval(terms: &[Term], lam: &LambdaPoint, spec: &QuadratureSpec) -> Result<MeromorphicValue> {
    let (factor, residuals) = common_factor(terms);
    let (vals, _) = term_integrals(terms, &lam.0, &[], spec)?;
    let mut entire = Complex64::new(0.0, 0.0);
    let mut err = 0.0;
    for (res, v) in residuals.iter().zip(&vals) {
        let r: Complex64 = res.iter().map(|f| f.eval(&lam.0)).product();
        entire += r * v.value;
        err += r.norm() * v.err;
    }
    Ok(MeromorphicValue { lambda: lam.0.clone(), factor, entire, err })
}

/// Direct evaluation of the unreduced integrand, for `Re λ` large enough that
/// every kernel is absolutely integrable.
pub fn mellin_direct(chart: &ChartSpec, t: &TestForm, lam: &LambdaPoint, spec: &QuadratureSpec) -> Result<Evaluation> {
    let terms = expand_chart(chart, t)?;
    for term in &terms {
        for k in 0..term.n {
            let e = 2.0 * term.s[k].eval(&lam.0).re + (term.p[k] + term.q[k]) as f64;
            if e <= -2.0 {
                return Err(Error::NonConvergent(format!(
                    "|z{}|^{e:.3} is not integrable at λ = {:?}; increase Re λ",
                    k + 1,
                    lam.0
                )));
            }
        }
    }
    let (vals, nodes) = term_integrals(&terms, &lam.0, &[], spec)?;
    let mut value = Complex64::new(0.0, 0.0);
    let mut err = 0.0;
    for (term, v) in terms.iter().zip(&vals) {
        let r = term.factor.eval(&lam.0);
        value += r * v.value;
        err += r.norm() * v.err;
    }
    Ok(Evaluation { value, err, nodes })
}

/// Linear dependence of the exponent vectors, with an integer certificate
/// `c` such that `Σ c_j a_j = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Resonance {
    pub resonant: bool,
    pub rank: usize,
    pub certificate: Option<Vec<i64>>,
}

pub fn detect_resonance(chart: &ChartSpec) -> Resonance {
    let m = chart.m();
    let n = chart.n;
    // columns are the a_j; row-reduce the n × m matrix
    let mut rows: Vec<Vec<BigRational>> = (0..n)
        .map(|k| (0..m).map(|j| BigRational::from_integer(BigInt::from(chart.exponents[j][k]))).collect())
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..m {
        let Some(p) = (r..n).find(|&i| !rows[i][col].is_zero()) else { continue };
        rows.swap(r, p);
        let inv = rows[r][col].recip();
        for x in rows[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..n {
            if i != r && !rows[i][col].is_zero() {
                let f = rows[i][col].clone();
                for c in 0..m {
                    let v = &rows[r][c] * &f;
                    rows[i][c] = &rows[i][c] - v;
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    let rank = pivots.len();
    if rank == m {
        return Resonance { resonant: false, rank, certificate: None };
    }
    let free = (0..m).find(|c| !pivots.contains(c)).unwrap();
    let mut v = vec![BigRational::zero(); m];
    v[free] = BigRational::one();
    for (i, &pc) in pivots.iter().enumerate() {
        v[pc] = -rows[i][free].clone();
    }
    let lcm = v.iter().fold(BigInt::one(), |acc, x| num_integer::Integer::lcm(&acc, x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * BigRational::from_integer(lcm.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| num_integer::Integer::gcd(&acc, x));
    let lead_neg = ints.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative());
    let cert = ints
        .iter()
        .map(|x| {
            let y = x / &g;
            let y = if lead_neg { -y } else { y };
            y.to_i64().unwrap_or(i64::MAX)
        })
        .collect();
    Resonance { resonant: true, rank, certificate: Some(cert) }
}
