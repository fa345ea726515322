use std::collections::BTreeMap;
use std::io::Read;

use exchkit::corpus::{self, GProfile, GShape};
use exchkit::extend;
use exchkit::json;
use exchkit::oracle;
use exchkit::typespace::{enumerate_types, multiset_count};
use exchkit::{
    cap, lp, measures, rational, represent, Alphabet, Error, ExchangeableLaw, Rational, Result, TypeVector,
};
use serde_json::{json, Value};

use crate::sweep;
use crate::{Command, CorpusCommand};

fn read_document(input: Option<&str>) -> Result<Value> {
    let text = match input {
        None | Some("-") => {
            let mut buf = String::new();
            std::io::stdin()
                .read_to_string(&mut buf)
                .map_err(|e| Error::Input(format!("stdin: {e}")))?;
            buf
        }
        Some(arg) if arg.trim_start().starts_with(['{', '[']) => arg.to_string(),
        Some(path) => std::fs::read_to_string(path).map_err(|e| Error::Input(format!("{path}: {e}")))?,
    };
    serde_json::from_str(&text).map_err(|e| Error::Input(format!("malformed JSON: {e}")))
}

fn read_law(input: &Option<String>) -> Result<ExchangeableLaw> {
    json::law_from_json(&read_document(input.as_deref())?)
}

fn alphabet_for(labels: &Option<Vec<String>>, k: usize) -> Result<Alphabet> {
    match labels {
        Some(labels) if labels.len() != k => Err(Error::Input(format!(
            "field `alphabet`: {} labels for {k} symbols",
            labels.len()
        ))),
        Some(labels) => Alphabet::new(labels.clone()),
        None => Alphabet::numbered(k),
    }
}

fn in_field(field: &str, err: Error) -> Error {
    match err {
        Error::Input(msg) => Error::Input(format!("field `{field}`: {msg}")),
        other => other,
    }
}

fn parse_type(text: &str, field: &str) -> Result<TypeVector> {
    text.parse().map_err(|e| in_field(field, e))
}

pub fn run(command: &Command) -> Result<Value> {
    match command {
        Command::Types { k, alphabet, mass } => {
            let alphabet = match (k, alphabet) {
                (_, Some(labels)) => Alphabet::new(labels.clone())?,
                (Some(k), None) => Alphabet::numbered(*k)?,
                (None, None) => return Err(Error::Input("give --k or --alphabet".into())),
            };
            let types: Vec<Value> = enumerate_types(&alphabet, *mass)
                .into_iter()
                .map(|t| json!({"type": t.to_string(), "sequences": multiset_count(&t).to_string()}))
                .collect();
            Ok(json!({
                "alphabet": alphabet.symbols(),
                "mass": mass,
                "count": types.len(),
                "types": types,
            }))
        }
        Command::Urn {
            nu,
            n,
            alphabet,
            brute_force,
        } => {
            let nu = parse_type(nu, "nu")?;
            let alphabet = alphabet_for(alphabet, nu.k())?;
            let law = measures::urn_measure(&alphabet, &nu, *n)?;
            let mut report = json!({"law": json::law_to_json(&law)});
            if *brute_force {
                enumeration_guard("ordered draws", falling_factorial(nu.mass(), *n))?;
                let direct = oracle::draw_type_distribution(&nu, *n);
                if &direct != law.weights() {
                    return Err(Error::Internal("urn measure disagrees with draw enumeration".into()));
                }
                report["brute_force"] = json!({"agrees": true});
            }
            Ok(report)
        }
        Command::Invert { mu, big_n } => {
            let mu = parse_type(mu, "mu")?;
            let table = measures::invert_urn(&mu, *big_n)?;
            let mut report = json::inversion_to_json(&table);
            report["reconstructs"] = json!(measures::reconstruct_check(&table));
            Ok(report)
        }
        Command::Norm {
            input,
            big_n,
            brute_force,
        } => {
            let law = read_law(input)?;
            let cert = extend::extending_norm(&law, *big_n)?;
            let mut report = json::norm_to_json(&cert, *big_n);
            if *brute_force {
                check_norm_by_enumeration(&law, *big_n, &cert)?;
                report["brute_force"] = json!({"agrees": true});
            }
            Ok(report)
        }
        Command::Extend {
            input,
            big_n,
            function,
            epsilon,
        } => {
            let law = read_law(input)?;
            let report = extend::check_extendible(&law, *big_n)?;
            let mut out = json::extend_report_to_json(&report);
            if let (Some(function), Some(epsilon)) = (function, epsilon) {
                let g = json::function_from_json(&read_document(Some(function))?)?;
                let eps = rational::parse(epsilon)
                    .map_err(|e| in_field("epsilon", e))?;
                let holds = extend::corollary_criterion(&law, &g, *big_n, &eps)?;
                out["corollary"] = json!({"epsilon": json::rational_to_json(&eps), "holds": holds});
            }
            Ok(out)
        }
        Command::Probe {
            input,
            max_n,
            grid_depth,
        } => {
            let law = read_law(input)?;
            let report = extend::probe_infinite(&law, *max_n, *grid_depth)?;
            Ok(json::infinite_report_to_json(&report))
        }
        Command::Represent { input, grid_depth } => {
            let law = read_law(input)?;
            let mix = represent::signed_mixture(&law, *grid_depth)?;
            Ok(json::mixture_to_json(&mix))
        }
        Command::Corpus { which } => run_corpus(which),
        Command::LpVerify { input } => {
            let doc = read_document(input.as_deref())?;
            let (program, supplied) = match doc.get("program") {
                Some(program) => (program, doc.get("outcome")),
                None => (&doc, None),
            };
            let lp = json::lp_from_json(program)?;
            let outcome = match supplied {
                Some(o) => json::outcome_from_json(o)?,
                None => lp::solve_rational(&lp)?,
            };
            Ok(json!({
                "outcome": json::outcome_to_json(&outcome),
                "verified": lp::verify(&lp, &outcome),
            }))
        }
    }
}

/// Independent re-check of a norm certificate: the maximizer is symmetrized
/// over every sequence of length `N` and integrated over every sequence of
/// length `n`, and the signed extension is marginalized by enumerating draws.
fn check_norm_by_enumeration(
    law: &ExchangeableLaw,
    big_n: u32,
    cert: &extend::NormCertificate,
) -> Result<()> {
    let k = law.k() as u128;
    enumeration_guard("sequences", k.checked_pow(big_n))?;
    let one = Rational::from_integer(1.into());
    if oracle::symmetrized_sup_norm(&cert.maximizer, big_n) > one {
        return Err(Error::Internal("maximizer symmetrizes above 1".into()));
    }
    if oracle::expectation_by_points(law, &cert.maximizer) != cert.norm {
        return Err(Error::Internal("maximizer does not attain the norm".into()));
    }
    let mut marginal: BTreeMap<TypeVector, Rational> = BTreeMap::new();
    let zero = Rational::from_integer(0.into());
    let mut l1 = zero.clone();
    for (nu, s) in &cert.signed_extension {
        l1 += if s < &zero { -s } else { s.clone() };
        for (mu, p) in oracle::draw_type_distribution(nu, law.n()) {
            *marginal.entry(mu).or_insert_with(|| zero.clone()) += s * p;
        }
    }
    marginal.retain(|_, v| *v != zero);
    if &marginal != law.weights() || l1 != cert.norm {
        return Err(Error::Internal("signed extension fails its marginal check".into()));
    }
    Ok(())
}

fn falling_factorial(big_n: u32, n: u32) -> Option<u128> {
    (0..n).try_fold(1u128, |acc, i| acc.checked_mul(u128::from(big_n.checked_sub(i)?)))
}

/// Brute-force checks enumerate every sequence, so they get the same cap
/// as the type spaces.
fn enumeration_guard(what: &'static str, size: Option<u128>) -> Result<()> {
    let cap = cap::resource_cap();
    match size {
        Some(size) if size <= cap => Ok(()),
        size => Err(Error::Capacity {
            what,
            size: size.unwrap_or(u128::MAX),
            cap,
        }),
    }
}

fn profile_for(input: &Option<String>, j: u32, shape: &str) -> Result<GProfile> {
    match input {
        Some(doc) => {
            let doc = read_document(Some(doc))?;
            let map = doc
                .as_object()
                .ok_or_else(|| Error::Input("g values: expected an object".into()))?;
            let values = map
                .iter()
                .map(|(point, v)| {
                    let t = rational::parse(point).map_err(|e| in_field(point, e))?;
                    Ok((t, json::rational_from_json(v, point)?))
                })
                .collect::<Result<_>>()?;
            Ok(GProfile::new(values))
        }
        None => GProfile::from_shape(j, shape.parse::<GShape>()?),
    }
}

fn intro_urn(n: u32, ones: u32, max_n: u32) -> Result<Value> {
    let law = corpus::urn_without_replacement(n, ones)?;
    let first = extend::check_extendible(&law, n + 1)?;
    Ok(json!({
        "law": json::law_to_json(&law),
        "extend": json::extend_report_to_json(&first),
        "claims": json::claims_to_json(&corpus::urn_claims(n, ones, max_n)?),
    }))
}

fn appendix_a1(max_n: u32, grid_depth: u32) -> Result<Value> {
    let (law, embedding) = corpus::appendix_a1_law();
    let cov = extend::covariance_bound(&law, &embedding)?;
    let probe = extend::probe_infinite(&law, max_n, grid_depth)?;
    let claims = corpus::appendix_a1_claims_from(&cov, &probe, max_n);
    Ok(json!({
        "law": json::law_to_json(&law),
        "embedding": json::rationals_to_json(&embedding),
        "covariance": json::covariance_to_json(&cov),
        "probe": json::infinite_report_to_json(&probe),
        "claims": json::claims_to_json(&claims),
    }))
}

fn gnedin(input: &Option<String>, j: u32, shape: &str, max_n: u32) -> Result<Value> {
    let profile = profile_for(input, j, shape)?;
    let (law, mixture) = corpus::gnedin_discretization(j, &profile)?;
    let levels: Vec<u32> = (1..=j).collect();
    let convergence = corpus::coarse_convergence_check(&levels, 1, &profile)?;
    let probe = extend::probe_infinite_with(&law, max_n, 1, &corpus::uniform_prefixes(law.k()))?;
    let claims = corpus::gnedin_claims_from(&law, &mixture, &probe);
    Ok(json!({
        "law": json::law_to_json(&law),
        "decomposition": json::mixture_to_json(&mixture),
        "probe": json::infinite_report_to_json(&probe),
        "convergence": {
            "levels": levels,
            "comparison_level": 1,
            "discrepancies": json::rationals_to_json(&convergence),
        },
        "claims": json::claims_to_json(&claims),
    }))
}

fn run_corpus(which: &CorpusCommand) -> Result<Value> {
    match which {
        CorpusCommand::IntroUrn { n, ones, max_n } => intro_urn(*n, *ones, *max_n),
        CorpusCommand::AppendixA1 { max_n, grid_depth } => appendix_a1(*max_n, *grid_depth),
        CorpusCommand::Gnedin {
            input,
            j,
            profile,
            max_n,
        } => gnedin(input, *j, profile, *max_n),
        CorpusCommand::All => Ok(json!({
            "intro_urn": intro_urn(2, 1, 8)?,
            "appendix_a1": appendix_a1(12, 8)?,
            "gnedin": GShape::ALL
                .iter()
                .map(|shape| Ok(json!({"profile": shape.to_string(), "report": gnedin(&None, 2, &shape.to_string(), 4)?})))
                .collect::<Result<Vec<_>>>()?,
        })),
        CorpusCommand::DualitySweep { seed, count, max_n } => sweep::duality_sweep(*seed, *count, *max_n),
    }
}
