mod common;

use common::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use residue_core::decompose::{
    d_monomial, lemma7_correct, prop9_decompose, verify_decomposition, verify_lemma7, IndexFamily,
};
use residue_core::forms::{DivisorSpec, ExteriorForm, MonomialMap};
use residue_core::parse::parse_form;
use residue_core::poly::{coeff, coeff_c, rat, ExponentVector};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_map<R: Rng>(rng: &mut R, n_source: usize, n_target: usize) -> MonomialMap {
    let images = (0..n_target)
        .map(|_| {
            let e: Vec<u32> = (0..n_source).map(|_| rng.gen_range(0..=2)).collect();
            let c = match rng.gen_range(0..3) {
                0 => coeff(1),
                1 => coeff(-1),
                _ => coeff_c(rat(0, 1), rat(1, 1)),
            };
            (ExponentVector(e), c)
        })
        .collect();
    MonomialMap::new(n_source, images).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn wedge_is_graded_antisymmetric(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = r.gen_range(1..=4);
        let ka = r.gen_range(0..=n.min(3));
        let kb = r.gen_range(0..=n.min(3));
        let a = random_form(&mut r, n, ka, 3);
        let b = random_form(&mut r, n, kb, 3);
        let ab = a.wedge(&b).unwrap();
        let ba = b.wedge(&a).unwrap();
        let sign = if (ka * kb) % 2 == 0 { coeff(1) } else { coeff(-1) };
        prop_assert_eq!(ab, ba.scale(&sign));
    }

    #[test]
    fn d_squared_vanishes(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = r.gen_range(1..=4);
        let k = r.gen_range(0..n);
        let a = random_form(&mut r, n, k, 4);
        prop_assert!(a.exterior_d().exterior_d().is_zero());
    }

    #[test]
    fn pullback_is_functorial(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n_t = r.gen_range(1..=3);
        let n_mid = r.gen_range(1..=3);
        let n_s = r.gen_range(1..=3);
        let k = r.gen_range(0..=n_t);
        let a = random_form(&mut r, n_t, k, 2);
        let m1 = random_map(&mut r, n_mid, n_t);
        let m2 = random_map(&mut r, n_s, n_mid);
        let lhs = a.pullback(&m1).unwrap().pullback(&m2).unwrap();
        let rhs = a.pullback(&m1.compose(&m2).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn pullback_commutes_with_d(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n_t = r.gen_range(1..=3);
        let n_s = r.gen_range(1..=3);
        let k = r.gen_range(0..n_t);
        let a = random_form(&mut r, n_t, k, 3);
        let m = random_map(&mut r, n_s, n_t);
        prop_assert_eq!(a.exterior_d().pullback(&m).unwrap(), a.pullback(&m).unwrap().exterior_d());
    }

    #[test]
    fn vanishing_matches_dlog_criterion(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = r.gen_range(1..=5);
        let k = r.gen_range(0..n);
        let mut e = vec![0u32; n];
        for x in e.iter_mut() {
            if r.gen_bool(0.5) { *x = r.gen_range(1..=3); }
        }
        if e.iter().all(|&x| x == 0) { e[0] = 1; }
        let sigma = ExponentVector(e);
        let zs = DivisorSpec::new(sigma.clone()).unwrap();
        let mut a = random_form(&mut r, n, k, 3);
        if r.gen_bool(0.5) {
            a = force_vanishing(&a, &sigma.support());
        }
        let by_restriction = a.vanishes_on(&zs);
        let by_divisibility = a.vanishes_on_divisibility(&zs);
        let by_dlog = sigma.support().iter().all(|&i| a.dlog_wedge(i).is_some());
        let by_dsigma = d_monomial(&sigma).wedge(&a).unwrap().div_monomial(&sigma).is_some();
        prop_assert_eq!(by_restriction, by_divisibility);
        prop_assert_eq!(by_restriction, by_dlog);
        prop_assert_eq!(by_restriction, by_dsigma);
    }

    #[test]
    fn decomposition_reconstructs_and_memberships_hold(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = r.gen_range(1..=5);
        let k = r.gen_range(0..n.max(1));
        let a = random_form(&mut r, n, k, 4);
        let len = r.gen_range(1..=n);
        let fam = IndexFamily::new(n, random_subset(&mut r, n, len)).unwrap();
        let d = prop9_decompose(&a, &fam).unwrap();
        prop_assert_eq!(d.reconstruct(), a.clone());
        let report = verify_decomposition(&d, &a, &fam);
        prop_assert!(report.all_pass(), "{}", report);
    }

    #[test]
    fn lemma7_conclusions_hold(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (a, sigma, tau) = lemma7_instance(&mut r);
        let c = lemma7_correct(&a, &sigma, &tau).unwrap();
        let report = verify_lemma7(&a, &c, &sigma, &tau);
        prop_assert!(report.all_pass(), "{}", report);
    }

    #[test]
    fn decomposition_is_permutation_equivariant(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = r.gen_range(2..=4);
        let k = r.gen_range(0..n);
        let a = random_form(&mut r, n, k, 3);
        let len = r.gen_range(1..=n);
        let idx = random_subset(&mut r, n, len);
        let perm = random_subset(&mut r, n, n);
        let mut perm = perm;
        use rand::seq::SliceRandom;
        perm.shuffle(&mut r);
        let fam = IndexFamily::new(n, idx.clone()).unwrap();
        let fam_p = IndexFamily::new(n, idx.iter().map(|&i| perm[i]).collect()).unwrap();
        let lhs = prop9_decompose(&a, &fam).unwrap().without_tail().permute(&perm);
        let rhs = prop9_decompose(&a.permute(&perm), &fam_p).unwrap().without_tail();
        prop_assert_eq!(lhs, rhs);
    }
}

#[test]
fn text_format_round_trips_random_forms() {
    let mut r = rng(7);
    for _ in 0..50 {
        let n = r.gen_range(1..=4);
        let k = r.gen_range(0..=n);
        let a: ExteriorForm = random_form(&mut r, n, k, 3);
        let b = parse_form(&a.to_string(), Some(n)).unwrap();
        // "0" carries no degree
        if a.is_zero() {
            assert!(b.is_zero());
        } else {
            assert_eq!(b, a);
        }
    }
}
