//! Integrand terms over `ℂ^n` and their evaluation.
//!
//! A [`Term`] stands for
//!
//! ```text
//! coef · R(λ) · ∫ ∏_k |z_k|^{2 s_k(λ)} z_k^{p_k} z̄_k^{q_k} · ∏ cutoffs · ∏ profiles dV
//! ```
//!
//! where `R` is a [`PoleFactor`]. Both the Mellin side (`s_k` affine in λ) and
//! the cutoff side (`s_k = 0`, cutoff factors `χ(|z^m|²/ε)` or `χ̃`) use it.
//! Reductions move `∂/∂z̄_k` and `∂/∂z_k` off singular kernels by
//! integration by parts; afterwards each kernel is integrable near the
//! origin with angle-first polar quadrature.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::integrate::QuadratureSpec;
use crate::lambda::{AffineForm, PoleFactor};
use crate::quadrature::{radial_rule, trapezoid_angles};
use crate::regularize::CutoffSpec;
use crate::testforms::{support_radii, Profile, ProfileFactor};

/// `χ_j(|z^mono|²/ε)`, or `χ̃_j` when `tilde` is set.
#[derive(Debug, Clone, PartialEq)]
pub struct CutoffFactor {
    pub j: usize,
    pub tilde: bool,
    pub mono: Vec<u32>,
    pub eps: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    pub n: usize,
    pub coef: Complex64,
    pub factor: PoleFactor,
    pub s: Vec<AffineForm>,
    pub p: Vec<i32>,
    pub q: Vec<i32>,
    pub cutoffs: Vec<CutoffFactor>,
    pub factors: Vec<ProfileFactor>,
}

impl Term {
    /// A term with no kernel, no cutoffs and `R = 1`.
    pub fn plain(n: usize, m: usize, coef: Complex64, factors: Vec<ProfileFactor>) -> Self {
        Term {
            n,
            coef,
            factor: PoleFactor::one(),
            s: vec![AffineForm::zero(m); n],
            p: vec![0; n],
            q: vec![0; n],
            cutoffs: vec![],
            factors,
        }
    }

    fn cutoff_depends(&self, k: usize) -> Vec<usize> {
        (0..self.cutoffs.len()).filter(|&i| self.cutoffs[i].mono[k] > 0).collect()
    }

    fn mul_factor(&mut self, num: &[AffineForm], den: &[AffineForm]) {
        let mut n = self.factor.numerator.clone();
        n.extend_from_slice(num);
        let mut d = self.factor.denominator.clone();
        d.extend_from_slice(den);
        let (c, f) = PoleFactor::from_parts(&n, &d);
        self.coef *= c;
        self.factor = f;
    }

    /// `∂/∂z̄_k` of the profile factors (product rule, chain rule through
    /// the arguments).
    fn dbar_profiles(&self, k: usize) -> Vec<Term> {
        let mut out = Vec::new();
        for (i, f) in self.factors.iter().enumerate() {
            let da = f.arg.derivative(k);
            for (e, c) in da.to_numeric() {
                let mut t = self.clone();
                t.factors[i].dq += 1;
                t.coef *= c.conj();
                for (j, x) in e.iter().enumerate() {
                    t.q[j] += *x as i32;
                }
                out.push(t);
            }
        }
        out
    }

    /// `∂/∂z_k` of the profile factors.
    fn d_profiles(&self, k: usize) -> Vec<Term> {
        let mut out = Vec::new();
        for (i, f) in self.factors.iter().enumerate() {
            let da = f.arg.derivative(k);
            for (e, c) in da.to_numeric() {
                let mut t = self.clone();
                t.factors[i].dp += 1;
                t.coef *= c;
                for (j, x) in e.iter().enumerate() {
                    t.p[j] += *x as i32;
                }
                out.push(t);
            }
        }
        out
    }

    fn is_zero(&self) -> bool {
        self.coef == Complex64::new(0.0, 0.0)
    }
}

/// Integration by parts on the Mellin side:
///
/// * `|z|^{2s} z̄^{-1} = s^{-1} ∂_z̄ |z|^{2s}` whenever `z^{p}` with `p ≤ -1`
///   is present, contributing `-1/s`;
/// * `z^{p} = ∂_z z^{p+1} / (p+1)` for `p ≤ -2`, contributing `-1/(s+p+1)`.
///
/// The result is holomorphic in λ near 0 apart from the explicit factors.
pub fn reduce_mellin(terms: Vec<Term>) -> Result<Vec<Term>> {
    let mut current = terms;
    let n = current.first().map_or(0, |t| t.n);
    for k in 0..n {
        let mut done = Vec::new();
        let mut work = current;
        while let Some(mut t) = work.pop() {
            if t.is_zero() {
                continue;
            }
            if t.q[k] == -1 && t.p[k] <= -1 {
                if t.s[k].is_zero() {
                    return Err(Error::Precondition(format!(
                        "z̄{}^-1 without a |z{}|^(2λ) factor cannot be continued",
                        k + 1,
                        k + 1
                    )));
                }
                t.q[k] = 0;
                t.coef = -t.coef;
                let sk = t.s[k].clone();
                t.mul_factor(&[], &[sk]);
                work.extend(t.dbar_profiles(k));
            } else if t.p[k] <= -2 && t.q[k] >= 0 {
                let den = t.s[k].add_constant(1 + t.p[k] as i64);
                t.coef = -t.coef;
                if den.is_constant() {
                    t.coef /= den.constant as f64;
                } else {
                    t.mul_factor(&[], &[den]);
                }
                t.p[k] += 1;
                work.extend(t.d_profiles(k));
            } else {
                done.push(t);
            }
        }
        current = done;
    }
    Ok(current)
}

/// Integration by parts on the cutoff side: `χ̃_j(|z^a|²/ε)/z̄_k =
/// a_k^{-1} ∂_z̄k χ_j` when `z_k` enters only `χ_j`, and the holomorphic
/// reduction of `z^{p}`, `p ≤ -2`, where no cutoff depends on `z_k`.
/// Fails if a `χ̃_j` with `ε_j = 0` survives.
pub fn reduce_cutoff(terms: Vec<Term>) -> Result<Vec<Term>> {
    let mut current = terms;
    let n = current.first().map_or(0, |t| t.n);
    for k in 0..n {
        let mut done = Vec::new();
        let mut work = current;
        while let Some(mut t) = work.pop() {
            if t.is_zero() {
                continue;
            }
            let dep = t.cutoff_depends(k);
            if t.q[k] == -1 && dep.len() == 1 && t.cutoffs[dep[0]].tilde {
                let i = dep[0];
                let a = t.cutoffs[i].mono[k] as f64;
                t.coef = -t.coef / a;
                t.q[k] = 0;
                t.cutoffs[i].tilde = false;
                if t.cutoffs[i].eps == 0.0 {
                    t.cutoffs.remove(i);
                }
                work.extend(t.dbar_profiles(k));
            } else if t.p[k] <= -2 && t.q[k] >= 0 && dep.is_empty() {
                t.coef = -t.coef / (t.p[k] + 1) as f64;
                t.p[k] += 1;
                work.extend(t.d_profiles(k));
            } else {
                done.push(t);
            }
        }
        current = done;
    }
    for t in &current {
        if let Some(c) = t.cutoffs.iter().find(|c| c.tilde && c.eps == 0.0) {
            return Err(Error::Cutoff(format!(
                "ε{} = 0 with a ∂̄χ{} factor that is not on a simple coordinate",
                c.j + 1,
                c.j + 1
            )));
        }
    }
    Ok(current)
}

// ---------------------------------------------------------------------------
// Numerical evaluation

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluation {
    pub value: Complex64,
    pub err: f64,
    pub nodes: u64,
}

struct Node {
    z: Complex64,
    w: f64,
    ln_r: f64,
    theta: f64,
}

fn var_nodes(r_max: f64, spec: &QuadratureSpec, coarse: bool) -> Vec<Node> {
    let (m, ang) = if coarse {
        (spec.nodes_per_panel - 2, (spec.angular * 3 / 4).max(4))
    } else {
        (spec.nodes_per_panel, spec.angular)
    };
    let rr = radial_rule(r_max, spec.outer_panels, spec.graded_panels, spec.ratio, m);
    let angles = trapezoid_angles(ang);
    let mut out = Vec::with_capacity(rr.len() * angles.len());
    for (&r, &wr) in rr.nodes.iter().zip(&rr.weights) {
        for &(th, wt) in &angles {
            out.push(Node { z: Complex64::from_polar(r, th), w: wr * wt * r, ln_r: r.ln(), theta: th });
        }
    }
    out
}

enum Factor {
    Profile { profile: Profile, dp: u32, dq: u32, arg: Vec<(Complex64, Vec<(usize, u32)>)> },
    Cutoff { j: usize, tilde: bool, mono: Vec<(usize, u32)>, eps: f64 },
}

impl Factor {
    fn eval(&self, z: &[Complex64], cutoffs: &[CutoffSpec]) -> Complex64 {
        match self {
            Factor::Profile { profile, dp, dq, arg } => {
                let mut u = Complex64::new(0.0, 0.0);
                for (c, e) in arg {
                    let mut m = *c;
                    for &(v, x) in e {
                        m *= z[v].powu(x);
                    }
                    u += m;
                }
                profile.derivative(*dp, *dq, u)
            }
            Factor::Cutoff { j, tilde, mono, eps } => {
                let mut t = 1.0;
                for &(v, x) in mono {
                    t *= z[v].norm_sqr().powi(x as i32);
                }
                let t = t / eps;
                let c = &cutoffs[*j];
                Complex64::new(if *tilde { c.chi_tilde(t) } else { c.chi(t) }, 0.0)
            }
        }
    }
}

/// One group-restricted piece of a term, with λ already substituted.
#[derive(Clone)]
struct Part {
    vars: Vec<usize>,
    kern: Vec<(Complex64, i32, i32)>,
    factors: Vec<ProfileFactor>,
    cutoffs: Vec<CutoffFactor>,
}

impl Part {
    fn key(&self) -> String {
        format!(
            "{:?}|{:?}|{:?}|{:?}",
            self.vars,
            self.kern,
            self.factors.iter().map(|f| format!("{:?}{}{}{}", f.profile, f.arg, f.dp, f.dq)).collect::<Vec<_>>(),
            self.cutoffs
        )
    }
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    parent[x] = r;
    r
}

fn split_groups(t: &Term, lam: &[Complex64]) -> Vec<Part> {
    let n = t.n;
    let mut parent: Vec<usize> = (0..n).collect();
    let union = |vs: &[usize], parent: &mut Vec<usize>| {
        for w in vs.windows(2) {
            let (a, b) = (find(parent, w[0]), find(parent, w[1]));
            parent[a] = b;
        }
    };
    let fvars = |f: &ProfileFactor| -> Vec<usize> {
        let mut v: Vec<usize> = f.arg.terms().flat_map(|(e, _)| e.support()).collect();
        v.sort_unstable();
        v.dedup();
        v
    };
    for f in &t.factors {
        union(&fvars(f), &mut parent);
    }
    for c in &t.cutoffs {
        let vs: Vec<usize> = (0..n).filter(|&k| c.mono[k] > 0).collect();
        union(&vs, &mut parent);
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for k in 0..n {
        let r = find(&mut parent, k);
        groups.entry(r).or_default().push(k);
    }
    let mut parts = Vec::new();
    for vars in groups.into_values() {
        let kern = vars.iter().map(|&k| (t.s[k].eval(lam), t.p[k], t.q[k])).collect();
        let factors = t
            .factors
            .iter()
            .filter(|f| {
                let v = fvars(f);
                v.first().is_some_and(|x| vars.contains(x))
            })
            .cloned()
            .collect();
        let cutoffs = t.cutoffs.iter().filter(|c| vars.iter().any(|&k| c.mono[k] > 0)).cloned().collect();
        parts.push(Part { vars, kern, factors, cutoffs });
    }
    // constant-argument profiles ride along with the first group
    let consts: Vec<ProfileFactor> = t.factors.iter().filter(|f| fvars(f).is_empty()).cloned().collect();
    if let Some(p) = parts.first_mut() {
        p.factors.extend(consts);
    }
    parts
}

/// Evaluates parts that share one variable set, jointly on one node set.
fn eval_parts(
    n: usize,
    vars: &[usize],
    parts: &[&Part],
    nodes: &[Vec<Node>],
    cutoffs: &[CutoffSpec],
) -> Vec<Complex64> {
    let depth = vars.len();
    let level_of = |v: usize| vars.iter().position(|&x| x == v).unwrap();
    // intern factors
    let mut fkeys: Vec<String> = Vec::new();
    let mut facs: Vec<(Factor, usize)> = Vec::new();
    let mut part_facs: Vec<Vec<Vec<usize>>> = vec![vec![vec![]; depth]; parts.len()];
    for (pi, part) in parts.iter().enumerate() {
        for f in &part.factors {
            let key = format!("P{:?}{}{}{}", f.profile, f.arg, f.dp, f.dq);
            let idx = match fkeys.iter().position(|k| *k == key) {
                Some(i) => i,
                None => {
                    let arg: Vec<(Complex64, Vec<(usize, u32)>)> = f
                        .arg
                        .to_numeric()
                        .into_iter()
                        .map(|(e, c)| (c, e.iter().enumerate().filter(|(_, x)| **x > 0).map(|(v, x)| (v, *x)).collect()))
                        .collect();
                    let lvl = arg.iter().flat_map(|(_, e)| e.iter().map(|(v, _)| level_of(*v))).max().unwrap_or(0);
                    fkeys.push(key);
                    facs.push((Factor::Profile { profile: (*f.profile).clone(), dp: f.dp, dq: f.dq, arg }, lvl));
                    facs.len() - 1
                }
            };
            part_facs[pi][facs[idx].1].push(idx);
        }
        for c in &part.cutoffs {
            let key = format!("C{c:?}");
            let idx = match fkeys.iter().position(|k| *k == key) {
                Some(i) => i,
                None => {
                    let mono: Vec<(usize, u32)> = (0..n).filter(|&k| c.mono[k] > 0).map(|k| (k, c.mono[k])).collect();
                    let lvl = mono.iter().map(|(v, _)| level_of(*v)).max().unwrap_or(0);
                    fkeys.push(key);
                    facs.push((Factor::Cutoff { j: c.j, tilde: c.tilde, mono, eps: c.eps }, lvl));
                    facs.len() - 1
                }
            };
            part_facs[pi][facs[idx].1].push(idx);
        }
    }
    // factors of the level variable alone are tabulated once per node
    let tables: Vec<Option<Vec<Complex64>>> = facs
        .iter()
        .map(|(f, l)| {
            let own = match f {
                Factor::Profile { arg, .. } => arg.iter().all(|(_, e)| e.iter().all(|(v, _)| *v == vars[*l])),
                Factor::Cutoff { mono, .. } => mono.iter().all(|(v, _)| *v == vars[*l]),
            };
            own.then(|| {
                let mut z = vec![Complex64::new(0.0, 0.0); n];
                nodes[*l]
                    .iter()
                    .map(|nd| {
                        z[vars[*l]] = nd.z;
                        f.eval(&z, cutoffs)
                    })
                    .collect()
            })
        })
        .collect();
    let mut by_level: Vec<Vec<usize>> = vec![vec![]; depth];
    for (i, (_, l)) in facs.iter().enumerate() {
        by_level[*l].push(i);
    }
    // kernel tables, weights included
    let kern: Vec<Vec<Vec<Complex64>>> = parts
        .iter()
        .map(|part| {
            (0..depth)
                .map(|l| {
                    let (s, p, q) = part.kern[l];
                    let expo = 2.0 * s + (p + q) as f64;
                    let ang = (p - q) as f64;
                    nodes[l]
                        .iter()
                        .map(|nd| {
                            let radial = (expo * nd.ln_r).exp();
                            nd.w * radial * Complex64::from_polar(1.0, ang * nd.theta)
                        })
                        .collect()
                })
                .collect()
        })
        .collect();

    struct Ctx<'a> {
        vars: &'a [usize],
        nodes: &'a [Vec<Node>],
        facs: &'a [(Factor, usize)],
        tables: &'a [Option<Vec<Complex64>>],
        by_level: &'a [Vec<usize>],
        part_facs: &'a [Vec<Vec<usize>>],
        kern: &'a [Vec<Vec<Complex64>>],
        cutoffs: &'a [CutoffSpec],
    }

    fn rec(
        ctx: &Ctx,
        level: usize,
        z: &mut [Complex64],
        fvals: &mut [Complex64],
        partials: &mut [Vec<Complex64>],
        acc: &mut [Complex64],
    ) {
        let depth = ctx.vars.len();
        let np = acc.len();
        for (ni, nd) in ctx.nodes[level].iter().enumerate() {
            z[ctx.vars[level]] = nd.z;
            for &fi in &ctx.by_level[level] {
                fvals[fi] = match &ctx.tables[fi] {
                    Some(t) => t[ni],
                    None => ctx.facs[fi].0.eval(z, ctx.cutoffs),
                };
            }
            let (head, tail) = partials.split_at_mut(level + 1);
            let prev = &head[level];
            let next = &mut tail[0];
            let mut any = false;
            for pi in 0..np {
                let mut v = prev[pi];
                if v != Complex64::new(0.0, 0.0) {
                    v *= ctx.kern[pi][level][ni];
                    for &fi in &ctx.part_facs[pi][level] {
                        v *= fvals[fi];
                    }
                }
                next[pi] = v;
                any |= v != Complex64::new(0.0, 0.0);
            }
            if !any {
                continue;
            }
            if level + 1 == depth {
                for pi in 0..np {
                    acc[pi] += next[pi];
                }
            } else {
                rec(ctx, level + 1, z, fvals, partials, acc);
            }
        }
    }

    let ctx = Ctx {
        vars,
        nodes,
        facs: &facs,
        tables: &tables,
        by_level: &by_level,
        part_facs: &part_facs,
        kern: &kern,
        cutoffs,
    };
    let mut z = vec![Complex64::new(0.0, 0.0); n];
    let mut fvals = vec![Complex64::new(0.0, 0.0); facs.len()];
    let mut partials = vec![vec![Complex64::new(0.0, 0.0); parts.len()]; depth + 1];
    partials[0] = vec![Complex64::new(1.0, 0.0); parts.len()];
    let mut acc = vec![Complex64::new(0.0, 0.0); parts.len()];
    rec(&ctx, 0, &mut z, &mut fvals, &mut partials, &mut acc);
    acc
}

/// Truncation radius per coordinate: the explicit override, else the
/// support implied by the profiles of every term.
fn radii(terms: &[Term], spec: &QuadratureSpec) -> Result<Vec<f64>> {
    let n = terms.first().map_or(0, |t| t.n);
    let lists: Vec<&[ProfileFactor]> = terms.iter().map(|t| t.factors.as_slice()).collect();
    let auto = support_radii(n, &lists);
    (0..n)
        .map(|k| {
            spec.truncation
                .get(k)
                .copied()
                .flatten()
                .or(auto[k])
                .ok_or_else(|| Error::Precondition(format!("no truncation radius for z{}", k + 1)))
        })
        .collect()
}

/// Values of `coef · ∫ …` for each term (pole factor not applied), with a
/// fine-minus-coarse error estimate per term.
pub fn term_integrals(
    terms: &[Term],
    lam: &[Complex64],
    cutoffs: &[CutoffSpec],
    spec: &QuadratureSpec,
) -> Result<(Vec<Evaluation>, u64)> {
    spec.validate()?;
    if terms.is_empty() {
        return Ok((vec![], 0));
    }
    let n = terms[0].n;
    let r = radii(terms, spec)?;
    let fine: Vec<Vec<Node>> = (0..n).map(|k| var_nodes(r[k], spec, false)).collect();
    let coarse: Vec<Vec<Node>> = if spec.estimate_error {
        (0..n).map(|k| var_nodes(r[k], spec, true)).collect()
    } else {
        vec![]
    };

    let mut uniq: Vec<Part> = Vec::new();
    let mut index: BTreeMap<String, usize> = BTreeMap::new();
    let mut term_parts: Vec<Vec<usize>> = Vec::new();
    for t in terms {
        let mut ids = Vec::new();
        for p in split_groups(t, lam) {
            let key = p.key();
            let id = *index.entry(key).or_insert_with(|| {
                uniq.push(p.clone());
                uniq.len() - 1
            });
            ids.push(id);
        }
        term_parts.push(ids);
    }
    let mut by_vars: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
    for (i, p) in uniq.iter().enumerate() {
        by_vars.entry(p.vars.clone()).or_default().push(i);
    }
    let mut count: u64 = 0;
    for vars in by_vars.keys() {
        let f: u64 = vars.iter().map(|&k| fine[k].len() as u64).product();
        let c: u64 = if spec.estimate_error { vars.iter().map(|&k| coarse[k].len() as u64).product() } else { 0 };
        count = count.saturating_add(f).saturating_add(c);
    }
    if count > spec.budget {
        return Err(Error::Budget { requested: count, budget: spec.budget });
    }
    let mut val_f = vec![Complex64::new(0.0, 0.0); uniq.len()];
    let mut val_c = vec![Complex64::new(0.0, 0.0); uniq.len()];
    for (vars, ids) in &by_vars {
        let parts: Vec<&Part> = ids.iter().map(|&i| &uniq[i]).collect();
        let nf: Vec<Vec<Node>> = vars.iter().map(|&k| fine[k].iter().map(clone_node).collect()).collect();
        let vf = eval_parts(n, vars, &parts, &nf, cutoffs);
        for (j, &i) in ids.iter().enumerate() {
            val_f[i] = vf[j];
        }
        if spec.estimate_error {
            let nc: Vec<Vec<Node>> = vars.iter().map(|&k| coarse[k].iter().map(clone_node).collect()).collect();
            let vc = eval_parts(n, vars, &parts, &nc, cutoffs);
            for (j, &i) in ids.iter().enumerate() {
                val_c[i] = vc[j];
            }
        }
    }
    let out = terms
        .iter()
        .zip(&term_parts)
        .map(|(t, ids)| {
            let f: Complex64 = t.coef * ids.iter().map(|&i| val_f[i]).product::<Complex64>();
            let err = if spec.estimate_error {
                let c: Complex64 = t.coef * ids.iter().map(|&i| val_c[i]).product::<Complex64>();
                (f - c).norm()
            } else {
                0.0
            };
            Evaluation { value: f, err, nodes: 0 }
        })
        .collect();
    Ok((out, count))
}

fn clone_node(n: &Node) -> Node {
    Node { z: n.z, w: n.w, ln_r: n.ln_r, theta: n.theta }
}

/// `Σ coef · R(λ) · ∫ …` over all terms.
pub fn evaluate_terms(
    terms: &[Term],
    lam: &[Complex64],
    cutoffs: &[CutoffSpec],
    spec: &QuadratureSpec,
) -> Result<Evaluation> {
    for t in terms {
        if let Some((h, d)) = t.factor.nearest_pole(lam) {
            if d < 1e-12 {
                return Err(Error::OnPole { hyperplane: h.to_string(), distance: d });
            }
        }
    }
    let (vals, nodes) = term_integrals(terms, lam, cutoffs, spec)?;
    let mut value = Complex64::new(0.0, 0.0);
    let mut err = 0.0;
    for (t, v) in terms.iter().zip(&vals) {
        let r = t.factor.eval(lam);
        value += r * v.value;
        err += r.norm() * v.err;
    }
    Ok(Evaluation { value, err, nodes })
}

/// `(-1)^{n(n-1)/2} (-2i)^n`: the canonical `(n, n)` form
/// `dz_1…dz_n ∧ dz̄_1…dz̄_n` in units of Lebesgue measure, from
/// `dz ∧ dz̄ = -2i dA`.
pub fn orientation(n: usize) -> Complex64 {
    let sign = if (n * (n.saturating_sub(1)) / 2) % 2 == 0 { 1.0 } else { -1.0 };
    sign * Complex64::new(0.0, -2.0).powu(n as u32)
}
