mod common;

use exchkit::extend::{extending_norm, probability_mixture};
use exchkit::oracle::extend_report_holds;
use exchkit::rational::{from_i64, ratio};
use exchkit::represent::simplex_grid;
use exchkit::{
    apply_u, check_extendible, corollary_criterion, expectation, norm_en, probe_infinite, product_law, sup_norm,
    InfiniteOutcome, Rational, Verdict,
};
use num_traits::{One, Signed};
use proptest::prelude::*;

fn law_case() -> impl Strategy<Value = (u64, usize, u32, u32)> {
    (any::<u64>(), 2usize..=3, 1u32..=3, 1u32..=2)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn extendible_iff_norm_one((seed, k, n, extra) in law_case()) {
        let law = common::random_law(&mut common::rng(seed), k, n, 12);
        let report = check_extendible(&law, n + extra).unwrap();
        let norm = norm_en(&law, n + extra).unwrap();
        prop_assert_eq!(report.verdict == Verdict::Extendible, norm.is_one());
        prop_assert_eq!(&report.norm, &norm);
        prop_assert!(extend_report_holds(&law, &report));
    }

    #[test]
    fn norm_certificate_is_tight((seed, k, n, extra) in law_case()) {
        let law = common::random_law(&mut common::rng(seed), k, n, 12);
        let cert = extending_norm(&law, n + extra).unwrap();
        prop_assert!(cert.norm >= Rational::one());
        prop_assert!(sup_norm(&apply_u(&cert.maximizer, n + extra).unwrap()) <= Rational::one());
        prop_assert_eq!(expectation(&law, &cert.maximizer).unwrap(), cert.norm.clone());
        let l1: Rational = cert.signed_extension.values().map(Signed::abs).sum();
        prop_assert_eq!(l1, cert.norm);
    }

    #[test]
    fn norm_is_nondecreasing_in_n((seed, k, n, _extra) in law_case()) {
        let law = common::random_law(&mut common::rng(seed), k, n, 12);
        let norms: Vec<Rational> = (n..=n + 2).map(|big_n| norm_en(&law, big_n).unwrap()).collect();
        prop_assert!(norms[0].is_one());
        prop_assert!(norms.windows(2).all(|w| w[0] <= w[1]), "{:?}", norms);
    }

    #[test]
    fn product_laws_extend_everywhere(seed in any::<u64>(), k in 1usize..=3, n in 1u32..=3) {
        let (_, law) = common::random_product_law(&mut common::rng(seed), k, n);
        for big_n in n..=n + 3 {
            prop_assert!(norm_en(&law, big_n).unwrap().is_one());
        }
    }

    #[test]
    fn corollary_separates_verdicts((seed, k, n, extra) in law_case()) {
        let mut rng = common::rng(seed);
        let law = common::random_law(&mut rng, k, n, 12);
        let g = common::random_function(&mut rng, k, n);
        let report = check_extendible(&law, n + extra).unwrap();
        if report.verdict == Verdict::Extendible {
            prop_assert!(corollary_criterion(&law, &g, n + extra, &ratio(1, 1000)).unwrap());
        } else {
            let refutation = report.refutation.unwrap();
            let gap = expectation(&law, &refutation).unwrap() - Rational::one();
            prop_assert!(!corollary_criterion(&law, &refutation, n + extra, &(gap / from_i64(2))).unwrap());
        }
    }
}

#[test]
fn two_component_mixtures_are_certified() {
    let alphabet = exchkit::Alphabet::numbered(2).unwrap();
    for (a, b) in [(0, 4), (1, 3), (1, 2), (2, 4)] {
        let left = product_law(&alphabet, &[ratio(a, 4), ratio(4 - a, 4)], 3).unwrap();
        let right = product_law(&alphabet, &[ratio(b, 4), ratio(4 - b, 4)], 3).unwrap();
        let mut weights = std::collections::BTreeMap::new();
        for (t, w) in left.weights().iter().chain(right.weights()) {
            *weights.entry(t.clone()).or_insert_with(|| from_i64(0)) += w * ratio(1, 2);
        }
        let law = exchkit::ExchangeableLaw::new(alphabet.clone(), 3, weights).unwrap();
        let report = probe_infinite(&law, 6, 4).unwrap();
        assert!(matches!(report.outcome, InfiniteOutcome::CertifiedInfinite { .. }), "{a} {b}");
    }
}

#[test]
fn grid_mixture_rejects_unreachable_law() {
    let law = common::random_law(&mut common::rng(3), 2, 2, 1);
    let atoms = simplex_grid(2, 1).unwrap();
    let mix = probability_mixture(&law, &atoms).unwrap();
    // depth-one atoms are the point masses, which only reach the two pure types
    let pure = law.weights().keys().all(|t| t.profile().len() == 1);
    assert_eq!(mix.is_some(), pure);
}

#[test]
fn epsilon_must_be_positive() {
    let law = common::random_law(&mut common::rng(1), 2, 2, 4);
    let g = common::random_function(&mut common::rng(2), 2, 2);
    assert!(corollary_criterion(&law, &g, 3, &from_i64(0)).is_err());
}
