mod common;

use exchkit::oracle::{expectation_by_points, representative, symmetrize_at};
use exchkit::symmetrize::{has_trivial_kernel, urn_matrix_rank};
use exchkit::typespace::{type_count, enumerate_types_k};
use exchkit::{apply_u, expectation, kernel_check, sup_norm, urn_measure, Alphabet, SymmetricFunction};
use proptest::prelude::*;

fn case() -> impl Strategy<Value = (u64, usize, u32)> {
    (any::<u64>(), 1usize..=3, 1u32..=3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn matches_injection_average((seed, k, n) in case(), extra in 0u32..=2) {
        let g = common::random_function(&mut common::rng(seed), k, n);
        let ug = apply_u(&g, n + extra).unwrap();
        for nu in enumerate_types_k(k, n + extra) {
            prop_assert_eq!(ug.value(&nu), symmetrize_at(&g, &representative(&nu)));
        }
    }

    #[test]
    fn contraction_and_monotone_norm((seed, k, n) in case()) {
        let g = common::random_function(&mut common::rng(seed), k, n);
        let mut previous = sup_norm(&g);
        for big_n in n..=n + 4 {
            let norm = sup_norm(&apply_u(&g, big_n).unwrap());
            prop_assert!(norm <= previous, "N = {}", big_n);
            previous = norm;
        }
    }

    #[test]
    fn composition((seed, k, n) in case(), a in 0u32..=2, b in 0u32..=2) {
        let g = common::random_function(&mut common::rng(seed), k, n);
        let (n2, n3) = (n + a, n + a + b);
        let direct = apply_u(&g, n3).unwrap();
        let stepped = apply_u(&apply_u(&g, n2).unwrap(), n3).unwrap();
        prop_assert_eq!(direct, stepped);
    }

    #[test]
    fn adjoint_identity((seed, k, n) in case(), extra in 0u32..=2) {
        let g = common::random_function(&mut common::rng(seed), k, n);
        let alphabet = Alphabet::numbered(k).unwrap();
        let ug = apply_u(&g, n + extra).unwrap();
        for nu in enumerate_types_k(k, n + extra) {
            let law = urn_measure(&alphabet, &nu, n).unwrap();
            prop_assert_eq!(expectation(&law, &g).unwrap(), ug.value(&nu));
        }
    }

    #[test]
    fn expectation_matches_sequence_sum((seed, k, n) in case()) {
        let mut rng = common::rng(seed);
        let law = common::random_law(&mut rng, k, n, 12);
        let g = common::random_function(&mut rng, k, n);
        prop_assert_eq!(expectation(&law, &g).unwrap(), expectation_by_points(&law, &g));
    }
}

#[test]
fn urn_matrix_has_full_column_rank() {
    for k in 1..=3 {
        for n in 1..=3 {
            for big_n in n..=6 {
                assert!(has_trivial_kernel(k, n, big_n).unwrap());
                assert_eq!(urn_matrix_rank(k, n, big_n).unwrap() as u128, type_count(k, n));
            }
        }
    }
}

#[test]
fn no_indicator_is_in_the_kernel() {
    for k in 1..=3 {
        let alphabet = Alphabet::numbered(k).unwrap();
        for n in 1..=3 {
            for mu in enumerate_types_k(k, n) {
                let g = SymmetricFunction::indicator(alphabet.clone(), mu).unwrap();
                for big_n in n..=6 {
                    assert!(!kernel_check(&g, big_n).unwrap());
                }
            }
        }
    }
}

#[test]
fn zero_function_and_short_targets() {
    let g = common::random_function(&mut common::rng(0), 2, 2);
    let zero = SymmetricFunction::zero(g.alphabet().clone(), 2);
    assert!(kernel_check(&zero, 5).unwrap());
    assert!(apply_u(&g, 1).is_err());
}
