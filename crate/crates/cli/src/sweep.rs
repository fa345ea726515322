//! Seeded random check that a law is `N`-extendible exactly when the
//! extending functional has norm 1.

use exchkit::extend::{check_extendible, norm_en, Verdict};
use exchkit::oracle::extend_report_holds;
use exchkit::typespace::enumerate_types;
use exchkit::{json, Alphabet, Error, ExchangeableLaw, Rational, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

const MAX_K: usize = 3;
const MAX_SMALL_N: u32 = 3;
const MAX_DENOMINATOR: u32 = 12;

/// A law with weights in `(1/D) Z` for a random `D <= 12`, built by dropping
/// `D` units onto uniformly chosen types.
pub fn random_law(rng: &mut impl Rng) -> Result<ExchangeableLaw> {
    let k = rng.gen_range(2..=MAX_K);
    let n = rng.gen_range(1..=MAX_SMALL_N);
    let alphabet = Alphabet::numbered(k)?;
    let types = enumerate_types(&alphabet, n);
    let d = rng.gen_range(1..=MAX_DENOMINATOR);
    let mut units = vec![0u32; types.len()];
    for _ in 0..d {
        units[rng.gen_range(0..types.len())] += 1;
    }
    let weights = types
        .into_iter()
        .zip(units)
        .map(|(t, u)| (t, Rational::new(u.into(), d.into())));
    ExchangeableLaw::new(alphabet, n, weights)
}

pub fn duality_sweep(seed: u64, count: usize, max_n: u32) -> Result<Value> {
    if max_n < 2 {
        return Err(Error::Input(format!("max N = {max_n} leaves nothing to extend to")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let one = Rational::from_integer(1.into());
    let mut extendible = 0usize;
    let mut failures = Vec::new();
    for case in 0..count {
        let law = loop {
            let law = random_law(&mut rng)?;
            if law.n() < max_n {
                break law;
            }
        };
        let big_n = rng.gen_range(law.n() + 1..=max_n);
        let report = check_extendible(&law, big_n)?;
        let norm = norm_en(&law, big_n)?;
        let agrees = (report.verdict == Verdict::Extendible) == (norm == one) && norm == report.norm;
        if report.verdict == Verdict::Extendible {
            extendible += 1;
        }
        if !agrees || !extend_report_holds(&law, &report) {
            failures.push(json!({
                "case": case,
                "law": json::law_to_json(&law),
                "N": big_n,
                "norm": json::rational_to_json(&norm),
                "report": json::extend_report_to_json(&report),
            }));
        }
    }
    Ok(json!({
        "seed": seed,
        "count": count,
        "max_N": max_n,
        "extendible": extendible,
        "not_extendible": count - extendible,
        "all_hold": failures.is_empty(),
        "failures": failures,
    }))
}
