//! One line per acceptance criterion. Run with
//! `cargo test --release -p residue-core --test acceptance`.

mod common;

use std::f64::consts::PI;
use std::sync::Arc;
use std::time::Instant;

use common::*;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use residue_core::decompose::{d_monomial, lemma7_correct, prop9_decompose, verify_decomposition, verify_lemma7, IndexFamily};
use residue_core::forms::DivisorSpec;
use residue_core::integrate::{cauchy_pompeiu, QuadratureSpec};
use residue_core::mellin::{continue_eval, mellin_direct, reduce_chart, ChartSpec, LambdaPoint};
use residue_core::poly::ExponentVector;
use residue_core::scenarios::*;
use residue_core::testforms::{Profile, ProfileFactor, TestForm};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}

struct Line {
    pass: bool,
    text: String,
}

fn report(n: usize, title: &str, pass: bool, detail: String, t: Instant, limit: f64) -> Line {
    let secs = t.elapsed().as_secs_f64();
    let pass = pass && secs < limit;
    Line {
        pass,
        text: format!(
            "criterion {n} [{title}]: {} ({detail}; {secs:.1} s of {limit:.0} s)",
            if pass { "PASS" } else { "FAIL" }
        ),
    }
}

fn criterion1() -> Line {
    let t = Instant::now();
    let v = section3_direct(&LambdaPoint::real(&[0.0; 3]), &QuadratureSpec::default()).unwrap();
    // -(2πi)³ · 1 · 1 · 2 = 16π³ i
    let exact = c(0.0, 16.0 * PI.powi(3));
    let r = rel(v.value, exact);
    report(1, "blow-up direct value", r <= 1e-5, format!("I(0) = {:.6}, expected {:.6}, rel {r:.1e}", v.value, exact), t, 10.0)
}

fn criterion2() -> Line {
    let t = Instant::now();
    let rep = section3_report(&section3_grid());
    let ok = |n: &str| rep.check(n).is_some_and(|c| c.pass);
    let ratio = rep.check("z-direction-ratio").map_or(f64::NAN, |c| c.observed.re);
    let sum = rep.check("chart-sum").map_or(f64::NAN, |c| rel(c.observed, c.expected));
    let pass = ok("z-factor") && ok("z-direction-ratio") && ok("chart-sum") && ok("partition") && (ratio - 1.0).abs() > 0.1;
    let failed: Vec<&str> = rep.checks.iter().filter(|c| !c.pass).map(|c| c.name.as_str()).collect();
    report(
        2,
        "chart pole structure",
        pass,
        format!("factor λ2/(λ2+λ3), directional ratio {ratio:.6}, worst chart-sum rel {sum:.1e} on 27 points, failed {failed:?}"),
        t,
        1800.0,
    )
}

fn criterion3() -> Line {
    let t = Instant::now();
    let mut r = ChaCha8Rng::seed_from_u64(2024);
    let (mut fails, mut count) = (0, 0);
    for _ in 0..100 {
        let n = r.gen_range(1..=5);
        let k = r.gen_range(0..n);
        let a = random_form(&mut r, n, k, 4);
        let len = r.gen_range(1..=n);
        let fam = IndexFamily::new(n, random_subset(&mut r, n, len)).unwrap();
        let d = prop9_decompose(&a, &fam).unwrap();
        if d.reconstruct() != a || !verify_decomposition(&d, &a, &fam).all_pass() {
            fails += 1;
        }
        count += 1;
    }
    for _ in 0..100 {
        let (a, sigma, tau) = lemma7_instance(&mut r);
        let cor = lemma7_correct(&a, &sigma, &tau).unwrap();
        if !verify_lemma7(&a, &cor, &sigma, &tau).all_pass() {
            fails += 1;
        }
        count += 1;
    }
    for _ in 0..100 {
        let n = r.gen_range(1..=5);
        let k = r.gen_range(0..n);
        let mut e: Vec<u32> = (0..n).map(|_| if r.gen_bool(0.5) { r.gen_range(1..=3) } else { 0 }).collect();
        if e.iter().all(|&x| x == 0) {
            e[0] = 1;
        }
        let sigma = ExponentVector(e);
        let zs = DivisorSpec::new(sigma.clone()).unwrap();
        let mut a = random_form(&mut r, n, k, 4);
        if r.gen_bool(0.5) {
            a = force_vanishing(&a, &sigma.support());
        }
        let v = a.vanishes_on(&zs);
        let by_dlog = sigma.support().iter().all(|&i| a.dlog_wedge(i).is_some());
        let by_dsigma = d_monomial(&sigma).wedge(&a).unwrap().div_monomial(&sigma).is_some();
        if v != by_dlog || v != by_dsigma || v != a.vanishes_on_divisibility(&zs) {
            fails += 1;
        }
        count += 1;
    }
    report(3, "symbolic suite", fails == 0, format!("{count} instances, {fails} failures"), t, 60.0)
}

fn criterion4() -> Line {
    let t = Instant::now();
    let spec = QuadratureSpec::default();
    let profiles = [
        Profile::gaussian(c(0.0, 0.0), 0.5, c(1.0, 0.0)),
        Profile::gaussian(c(0.3, -0.2), 0.7, c(1.0, 2.0)),
        Profile::bump(c(0.1, 0.1), 0.8, c(-1.5, 0.5)),
        Profile::poly_gaussian(c(-0.2, 0.1), 0.6, vec![(0, 0, c(1.0, 0.0)), (1, 1, c(0.5, 0.0)), (2, 0, c(0.0, 1.0))]),
        Profile::bump(c(-0.3, 0.0), 1.2, c(2.0, 0.0)),
    ];
    let mut cp = 0.0f64;
    for p in &profiles {
        let v = cauchy_pompeiu(p, &spec).unwrap().value;
        cp = cp.max(rel(v, c(0.0, 2.0 * PI) * p.value(c(0.0, 0.0))));
    }
    let one = LambdaPoint::real(&[1.0; 3]);
    let sep = rel(section3_nested(&one, &section3_nested_spec()).unwrap().value, section3_direct(&one, &spec).unwrap().value);

    let g = |z: Complex64, r: f64| Arc::new(Profile::gaussian(z, r, c(1.0, 0.0)));
    let p = [g(c(0.1, 0.0), 0.6), g(c(0.0, 0.2), 0.5), g(c(-0.1, 0.1), 0.7)];
    let prod = |n: usize, anti: Vec<usize>| {
        let f = (0..n).map(|i| ProfileFactor::in_var(p[i].clone(), n, i)).collect();
        TestForm::product(n, c(1.0, 0.0), f, anti).unwrap()
    };
    let charts = vec![
        (ChartSpec::new(vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]], vec![false, true, true]).unwrap(), prod(3, vec![0])),
        (ChartSpec::new(vec![vec![1, 0], vec![0, 1], vec![1, 1]], vec![false, true, true]).unwrap(), prod(2, vec![])),
        (ChartSpec::new(vec![vec![2, 1]], vec![true]).unwrap(), prod(2, vec![1])),
    ];
    let mut r = ChaCha8Rng::seed_from_u64(11);
    let mut two = 0.0f64;
    for (ch, tf) in &charts {
        let terms = reduce_chart(ch, tf).unwrap();
        for _ in 0..3 {
            let lam = LambdaPoint((0..ch.m()).map(|_| c(r.gen_range(1.0..3.0), r.gen_range(-0.5..0.5))).collect());
            let a = mellin_direct(ch, tf, &lam, &spec).unwrap().value;
            let b = continue_eval(&terms, &lam, &spec).unwrap().value().unwrap();
            two = two.max(rel(b, a));
        }
    }
    report(
        4,
        "oracle suite",
        cp <= 1e-8 && sep <= 1e-6 && two <= 1e-5,
        format!("Cauchy-Pompeiu rel {cp:.1e}, separable vs nested rel {sep:.1e}, two-path rel {two:.1e}"),
        t,
        300.0,
    )
}

fn criterion5(reps: &[(Instance, Report, f64)]) -> Line {
    let t = Instant::now();
    let mut pass = true;
    let mut parts = vec![];
    for (inst, rep, _) in reps {
        let origin = rep.check("mellin-origin");
        let finite = origin.is_some_and(|c| c.observed.is_finite());
        let worst = (1..=4)
            .map(|i| rep.check(&format!("direction-{i}")).map_or(f64::INFINITY, |c| rel(c.observed, c.expected)))
            .fold(0.0, f64::max);
        pass &= finite && worst <= 1e-4;
        parts.push(format!("{} worst direction rel {worst:.1e}", inst.name()));
    }
    report(5, "continuation at the origin", pass, parts.join(", "), t, f64::INFINITY)
}

fn criterion6(reps: &[(Instance, Report, f64)]) -> Line {
    let t = Instant::now();
    let mut pass = true;
    let mut parts = vec![];
    for (inst, rep, _) in reps {
        let names = ["parabolic-1", "parabolic-2", "parabolic-3", "iterated"];
        let lims: Vec<Option<Complex64>> = names.iter().map(|n| rep.check(n).map(|c| c.observed)).collect();
        let mut spread = 0.0f64;
        for a in &lims {
            for b in &lims {
                spread = match (a, b) {
                    (Some(a), Some(b)) if a.is_finite() && b.is_finite() => spread.max(rel(*a, *b)),
                    _ => f64::INFINITY,
                };
            }
        }
        let gamma = rep.check("holder-gamma").map_or(f64::NAN, |c| c.observed.re);
        let cut = rep.check("cutoff-independence").map_or(f64::INFINITY, |c| rel(c.observed, c.expected));
        let refine = rep.check("grid-refinement").map_or(f64::INFINITY, |c| rel(c.observed, c.expected));
        pass &= spread <= 1e-3 && gamma > 0.05 && cut <= 1e-3 && refine <= 1e-3;
        parts.push(format!(
            "{} path spread {spread:.1e}, γ {gamma:.2}, cutoff rel {cut:.1e}, refinement rel {refine:.1e}",
            inst.name()
        ));
    }
    report(6, "regularized limits", pass, parts.join("; "), t, f64::INFINITY)
}

fn criterion7(reps: &[(Instance, Report, f64)]) -> Line {
    let t = Instant::now();
    let mut pass = true;
    let mut parts = vec![];
    for (inst, rep, secs) in reps {
        let r = match (rep.check("parabolic-1"), rep.check("mellin-origin")) {
            (Some(a), Some(b)) => rel(a.observed, b.observed),
            _ => f64::INFINITY,
        };
        pass &= r <= 1e-3;
        parts.push(format!("{} rel {r:.1e} (demo {secs:.0} s)", inst.name()));
    }
    report(7, "two currents agree", pass, parts.join(", "), t, f64::INFINITY)
}

fn main() {
    let mut lines = Vec::new();
    for f in [criterion1, criterion2, criterion3, criterion4] {
        let l = f();
        println!("{}", l.text);
        lines.push(l);
    }
    let reps: Vec<(Instance, Report, f64)> = Instance::ALL
        .into_iter()
        .map(|i| {
            let t = Instant::now();
            let r = complete_intersection_demo(i, &DemoPlan::for_instance(i));
            (i, r, t.elapsed().as_secs_f64())
        })
        .collect();
    for f in [criterion5, criterion6, criterion7] {
        let l = f(&reps);
        println!("{}", l.text);
        lines.push(l);
    }
    let failed = lines.iter().filter(|l| !l.pass).count();
    println!("acceptance: {} of {} criteria pass", lines.len() - failed, lines.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
