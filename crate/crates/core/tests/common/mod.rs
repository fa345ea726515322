//! Seeded generators shared by the integration tests.
#![allow(dead_code)]

use exchkit::lp::{Relation, Sense};
use exchkit::measures::product_law;
use exchkit::rational::ratio;
use exchkit::typespace::enumerate_types;
use exchkit::{Alphabet, ExchangeableLaw, LinearProgram, Rational, SymmetricFunction};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn small_rational(rng: &mut impl Rng, max_abs: i64, max_den: i64) -> Rational {
    ratio(rng.gen_range(-max_abs..=max_abs), rng.gen_range(1..=max_den))
}

/// Weights in `(1/D) Z` for `D <= max_den`, from dropping `D` units on
/// uniformly chosen types.
pub fn random_law(rng: &mut impl Rng, k: usize, n: u32, max_den: u32) -> ExchangeableLaw {
    let alphabet = Alphabet::numbered(k).unwrap();
    let types = enumerate_types(&alphabet, n);
    let d = rng.gen_range(1..=max_den);
    let mut units = vec![0u32; types.len()];
    for _ in 0..d {
        units[rng.gen_range(0..types.len())] += 1;
    }
    let weights = types
        .into_iter()
        .zip(units)
        .map(|(t, u)| (t, ratio(u.into(), d.into())));
    ExchangeableLaw::new(alphabet, n, weights).unwrap()
}

/// Depth of the grid that contains every `theta` from [`random_product_law`].
pub const PRODUCT_GRID: u32 = 12;

/// A product law whose `theta` has coordinates in `(1/12) Z`.
pub fn random_product_law(rng: &mut impl Rng, k: usize, n: u32) -> (Vec<Rational>, ExchangeableLaw) {
    let mut units = vec![0u32; k];
    for _ in 0..PRODUCT_GRID {
        units[rng.gen_range(0..k)] += 1;
    }
    let theta: Vec<Rational> = units.into_iter().map(|u| ratio(u.into(), PRODUCT_GRID.into())).collect();
    let law = product_law(&Alphabet::numbered(k).unwrap(), &theta, n).unwrap();
    (theta, law)
}

pub fn random_function(rng: &mut impl Rng, k: usize, m: u32) -> SymmetricFunction {
    let alphabet = Alphabet::numbered(k).unwrap();
    let values: Vec<_> = enumerate_types(&alphabet, m)
        .into_iter()
        .map(|t| (t, small_rational(rng, 5, 3)))
        .collect();
    SymmetricFunction::new(alphabet, m, values).unwrap()
}

/// Up to four variables and four constraints with small rational data.
/// Variables are nonnegative, so the feasible region is always pointed.
pub fn random_lp(rng: &mut impl Rng) -> LinearProgram {
    let n = rng.gen_range(1..=4);
    let m = rng.gen_range(1..=4);
    let sense = if rng.gen_bool(0.5) { Sense::Maximize } else { Sense::Minimize };
    let objective = (0..n).map(|_| small_rational(rng, 4, 2)).collect();
    let mut lp = LinearProgram::new(sense, objective);
    for _ in 0..m {
        let row = (0..n)
            .map(|_| {
                if rng.gen_bool(0.25) {
                    ratio(0, 1)
                } else {
                    small_rational(rng, 3, 2)
                }
            })
            .collect();
        let relation = match rng.gen_range(0..3) {
            0 => Relation::Le,
            1 => Relation::Eq,
            _ => Relation::Ge,
        };
        lp.add_dense(row, relation, small_rational(rng, 4, 2)).unwrap();
    }
    for j in 0..n {
        if rng.gen_bool(0.2) {
            lp.set_upper(j, ratio(rng.gen_range(0..=4), 1));
        }
    }
    lp
}
