use exchkit::oracle::{for_each_sequence, representative};
use exchkit::typespace::{binomial, enumerate_types_k, sub_types, type_count};
use exchkit::{multiset_count, type_of, Alphabet, TypeVector};
use num_bigint::BigUint;
use proptest::prelude::*;

proptest! {
    #[test]
    fn enumeration_is_sorted_complete_and_counted(k in 1usize..=4, mass in 0u32..=6) {
        let types = enumerate_types_k(k, mass);
        prop_assert_eq!(types.len() as u128, type_count(k, mass));
        prop_assert!(types.windows(2).all(|w| w[0] < w[1]));
        prop_assert!(types.iter().all(|t| t.k() == k && t.mass() == mass));
    }

    #[test]
    fn multiset_counts_partition_all_sequences(k in 1usize..=4, mass in 0u32..=5) {
        let total: BigUint = enumerate_types_k(k, mass).iter().map(multiset_count).sum();
        prop_assert_eq!(total, BigUint::from(k).pow(mass));
    }

    #[test]
    fn wire_form_round_trips(counts in prop::collection::vec(0u32..20, 1..6)) {
        let t = TypeVector::new(counts);
        let back: TypeVector = t.to_string().parse().unwrap();
        prop_assert_eq!(back, t);
    }

    #[test]
    fn sub_types_are_dominated(counts in prop::collection::vec(0u32..4, 1..4), m in 0u32..5) {
        let nu = TypeVector::new(counts);
        let subs = sub_types(&nu, m);
        prop_assert!(subs.iter().all(|mu| mu.le(&nu) && mu.mass() == m));
        prop_assert!(subs.windows(2).all(|w| w[0] < w[1]));
        let expected = enumerate_types_k(nu.k(), m).into_iter().filter(|mu| mu.le(&nu)).count();
        prop_assert_eq!(subs.len(), expected);
    }

    #[test]
    fn representative_has_its_type(counts in prop::collection::vec(0u32..4, 1..4)) {
        let nu = TypeVector::new(counts);
        let alphabet = Alphabet::numbered(nu.k()).unwrap();
        prop_assert_eq!(type_of(&representative(&nu), &alphabet).unwrap(), nu);
    }
}

#[test]
fn sequences_group_into_classes_of_multinomial_size() {
    let alphabet = Alphabet::numbered(3).unwrap();
    let mut seen = std::collections::BTreeMap::<TypeVector, u64>::new();
    for_each_sequence(3, 4, |x| *seen.entry(type_of(x, &alphabet).unwrap()).or_default() += 1);
    for (t, c) in seen {
        assert_eq!(multiset_count(&t), BigUint::from(c), "type {t}");
    }
}

#[test]
fn lexicographic_order_example() {
    let listed: Vec<String> = enumerate_types_k(2, 2).iter().map(ToString::to_string).collect();
    assert_eq!(listed, ["0:2", "1:1", "2:0"]);
    assert_eq!(binomial(5, 2), BigUint::from(10u32));
    assert!(type_of(&[0, 3], &Alphabet::numbered(2).unwrap()).is_err());
}
