#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use residue_core::decompose::d_monomial;
use residue_core::forms::ExteriorForm;
use residue_core::poly::{coeff_c, rat, ExponentVector, SparsePoly};

pub fn random_poly<R: Rng>(rng: &mut R, n: usize, max_terms: usize, max_deg: u32) -> SparsePoly {
    let mut p = SparsePoly::zero(n);
    let terms = rng.gen_range(0..=max_terms);
    for _ in 0..terms {
        let mut e = vec![0u32; n];
        let deg = rng.gen_range(0..=max_deg);
        for _ in 0..deg {
            e[rng.gen_range(0..n)] += 1;
        }
        let re = rat(rng.gen_range(-3..=3), rng.gen_range(1..=2));
        let im = rat(rng.gen_range(-2..=2), 1);
        p.add_term(ExponentVector(e), coeff_c(re, im));
    }
    p
}

pub fn random_subset<R: Rng>(rng: &mut R, n: usize, k: usize) -> Vec<usize> {
    let mut all: Vec<usize> = (0..n).collect();
    all.shuffle(rng);
    let mut s = all[..k].to_vec();
    s.sort_unstable();
    s
}

pub fn random_form<R: Rng>(rng: &mut R, n: usize, k: usize, max_deg: u32) -> ExteriorForm {
    let mut f = ExteriorForm::zero(n, k);
    let comps = rng.gen_range(1..=3);
    for _ in 0..comps {
        let kset = random_subset(rng, n, k);
        f.add_component(kset, random_poly(rng, n, 3, max_deg));
    }
    f
}

/// Forces vanishing on `∪_{i ∈ tau} {z_i = 0}`: each component is multiplied
/// by `z_i` for every `i ∈ tau` whose differential it lacks.
pub fn force_vanishing(f: &ExteriorForm, tau: &[usize]) -> ExteriorForm {
    let n = f.dim();
    let mut out = ExteriorForm::zero(n, f.degree());
    for (k, p) in f.components() {
        let mut q = p.clone();
        for &i in tau {
            if !k.contains(&i) {
                q = &q * &SparsePoly::var(n, i);
            }
        }
        out.add_component(k.clone(), q);
    }
    out
}

/// Random `(α, σ, τ)` with `dσ ∧ α` vanishing on `Z_τ`.
pub fn lemma7_instance<R: Rng>(rng: &mut R) -> (ExteriorForm, ExponentVector, Vec<usize>) {
    loop {
        let n = rng.gen_range(2..=5);
        let k = rng.gen_range(0..n);
        let tau_len = rng.gen_range(1..n);
        let mut coords: Vec<usize> = (0..n).collect();
        coords.shuffle(rng);
        let mut tau = coords[..tau_len].to_vec();
        tau.sort_unstable();
        let rest = &coords[tau_len..];
        let mut sigma = vec![0u32; n];
        for &i in rest {
            if rng.gen_bool(0.6) {
                sigma[i] = rng.gen_range(1..=3);
            }
        }
        if sigma.iter().all(|&e| e == 0) {
            sigma[rest[0]] = 1;
        }
        let sigma = ExponentVector(sigma);
        let mut a = force_vanishing(&random_form(rng, n, k, 3), &tau);
        if k >= 1 {
            let eta = random_form(rng, n, k - 1, 3);
            let closed = d_monomial(&sigma).wedge(&eta).unwrap();
            a = a.add(&closed).unwrap();
        }
        let ds_a = d_monomial(&sigma).wedge(&a).unwrap();
        if tau.iter().all(|&i| ds_a.restrict_extend(&[i]).is_zero()) {
            return (a, sigma, tau);
        }
    }
}
