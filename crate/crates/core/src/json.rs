//! JSON encodings of laws, functions, reports and linear programs.
//!
//! Rationals are always strings: `"p/q"` on output, `"p/q"` or `"p"` on
//! input (plain JSON integers are accepted too, floats never). Types are
//! keyed by their `"c1:...:ck"` strings. Parse errors name the offending
//! field.

use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::corpus::Claim;
use crate::error::{Error, Result};
use crate::extend::{CovarianceReport, ExtendReport, InfiniteOutcome, InfiniteReport, NormCertificate, Verdict};
use crate::lp::{self, DualCertificate, LowerBound, LpStatus, Relation, Sense};
use crate::measures::{ExchangeableLaw, InversionTable};
use crate::rational::{self, format};
use crate::represent::{Atom, SignedMixture, TvBound};
use crate::symmetrize::SymmetricFunction;
use crate::typespace::{Alphabet, TypeVector};
use crate::{LinearProgram, LpOutcome, Rational};

fn field_error(field: &str, msg: impl std::fmt::Display) -> Error {
    let msg = msg.to_string();
    let msg = msg.strip_prefix("invalid input: ").unwrap_or(&msg);
    Error::Input(format!("field `{field}`: {msg}"))
}

pub fn rational_to_json(value: &Rational) -> Value {
    Value::String(format(value))
}

pub fn rationals_to_json(values: &[Rational]) -> Value {
    Value::Array(values.iter().map(rational_to_json).collect())
}

pub fn rational_from_json(value: &Value, field: &str) -> Result<Rational> {
    match value {
        Value::String(s) => rational::parse(s).map_err(|e| field_error(field, e)),
        Value::Number(n) if n.is_i64() || n.is_u64() => {
            rational::parse(&n.to_string()).map_err(|e| field_error(field, e))
        }
        Value::Number(_) => Err(field_error(field, "floats are not exact; use \"p/q\"")),
        other => Err(field_error(field, format!("expected a rational string, got {other}"))),
    }
}

pub fn rationals_from_json(value: &Value, field: &str) -> Result<Vec<Rational>> {
    value
        .as_array()
        .ok_or_else(|| field_error(field, "expected an array"))?
        .iter()
        .enumerate()
        .map(|(i, v)| rational_from_json(v, &format!("{field}[{i}]")))
        .collect()
}

fn object<'a>(value: &'a Value, field: &str, allowed: &[&str]) -> Result<&'a Map<String, Value>> {
    let map = value
        .as_object()
        .ok_or_else(|| field_error(field, "expected an object"))?;
    if let Some(key) = map.keys().find(|k| !allowed.contains(&k.as_str())) {
        return Err(field_error(key, "unknown field"));
    }
    Ok(map)
}

fn member<'a>(map: &'a Map<String, Value>, field: &str) -> Result<&'a Value> {
    map.get(field).ok_or_else(|| field_error(field, "missing"))
}

fn u32_member(map: &Map<String, Value>, field: &str) -> Result<u32> {
    member(map, field)?
        .as_u64()
        .and_then(|v| u32::try_from(v).ok())
        .ok_or_else(|| field_error(field, "expected a nonnegative integer"))
}

fn alphabet_from_json(value: &Value) -> Result<Alphabet> {
    let labels = value
        .as_array()
        .ok_or_else(|| field_error("alphabet", "expected an array of labels"))?
        .iter()
        .map(|v| match v {
            Value::String(s) => Ok(s.clone()),
            Value::Number(n) => Ok(n.to_string()),
            other => Err(field_error("alphabet", format!("label {other} is not a string"))),
        })
        .collect::<Result<Vec<_>>>()?;
    Alphabet::new(labels).map_err(|e| field_error("alphabet", e))
}

fn typed_entries(value: &Value, field: &str) -> Result<Vec<(TypeVector, Rational)>> {
    value
        .as_object()
        .ok_or_else(|| field_error(field, "expected an object keyed by type strings"))?
        .iter()
        .map(|(key, v)| {
            let name = format!("{field}[\"{key}\"]");
            let t: TypeVector = key.parse().map_err(|e| field_error(&name, e))?;
            Ok((t, rational_from_json(v, &name)?))
        })
        .collect()
}

fn typed_map<'a>(entries: impl Iterator<Item = (&'a TypeVector, &'a Rational)>) -> Value {
    Value::Object(
        entries
            .map(|(t, v)| (t.to_string(), rational_to_json(v)))
            .collect(),
    )
}

/// `{"alphabet": [...], "n": n, "weights": {"c1:c2": "p/q", ...}}`
pub fn law_to_json(law: &ExchangeableLaw) -> Value {
    json!({
        "alphabet": law.alphabet().symbols(),
        "n": law.n(),
        "weights": typed_map(law.weights().iter()),
    })
}

pub fn law_from_json(value: &Value) -> Result<ExchangeableLaw> {
    let map = object(value, "law", &["alphabet", "n", "weights"])?;
    let alphabet = alphabet_from_json(member(map, "alphabet")?)?;
    let n = u32_member(map, "n")?;
    let weights = typed_entries(member(map, "weights")?, "weights")?;
    ExchangeableLaw::new(alphabet, n, weights).map_err(|e| field_error("weights", e))
}

/// `{"alphabet": [...], "m": m, "values": {"c1:c2": "p/q", ...}}`; zero
/// values are omitted.
pub fn function_to_json(g: &SymmetricFunction) -> Value {
    json!({
        "alphabet": g.alphabet().symbols(),
        "m": g.m(),
        "values": typed_map(g.values().iter()),
    })
}

pub fn function_from_json(value: &Value) -> Result<SymmetricFunction> {
    let map = object(value, "function", &["alphabet", "m", "values"])?;
    let alphabet = alphabet_from_json(member(map, "alphabet")?)?;
    let m = u32_member(map, "m")?;
    let values = typed_entries(member(map, "values")?, "values")?;
    SymmetricFunction::new(alphabet, m, values).map_err(|e| field_error("values", e))
}

pub fn atoms_to_json(atoms: &[Atom]) -> Value {
    Value::Array(
        atoms
            .iter()
            .map(|a| json!({"weight": rational_to_json(&a.weight), "theta": rationals_to_json(&a.theta)}))
            .collect(),
    )
}

/// `{"atoms": [{"weight": "p/q", "theta": [...]}, ...], "total_variation": "p/q"}`
pub fn mixture_to_json(mix: &SignedMixture) -> Value {
    json!({
        "atoms": atoms_to_json(mix.atoms()),
        "total_variation": rational_to_json(mix.total_variation()),
    })
}

pub fn mixture_from_json(value: &Value) -> Result<SignedMixture> {
    let map = object(value, "mixture", &["atoms", "total_variation"])?;
    let atoms = member(map, "atoms")?
        .as_array()
        .ok_or_else(|| field_error("atoms", "expected an array"))?
        .iter()
        .enumerate()
        .map(|(i, a)| {
            let name = format!("atoms[{i}]");
            let atom = object(a, &name, &["weight", "theta"])?;
            Ok(Atom {
                weight: rational_from_json(member(atom, "weight")?, &format!("{name}.weight"))?,
                theta: rationals_from_json(member(atom, "theta")?, &format!("{name}.theta"))?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mix = SignedMixture::new(atoms)?;
    if let Some(tv) = map.get("total_variation") {
        if rational_from_json(tv, "total_variation")? != *mix.total_variation() {
            return Err(field_error("total_variation", "does not match the atoms"));
        }
    }
    Ok(mix)
}

fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::Extendible => "extendible",
        Verdict::NotExtendible => "not_extendible",
    }
}

/// `{"N", "verdict", "norm", "witness", "refutation"}`
pub fn extend_report_to_json(report: &ExtendReport) -> Value {
    json!({
        "N": report.big_n,
        "verdict": verdict_name(report.verdict),
        "norm": rational_to_json(&report.norm),
        "witness": report.witness.as_ref().map(law_to_json),
        "refutation": report.refutation.as_ref().map(function_to_json),
    })
}

pub fn infinite_report_to_json(report: &InfiniteReport) -> Value {
    let (outcome, mixture, failing, inner) = match &report.outcome {
        InfiniteOutcome::CertifiedInfinite { mixture } => {
            ("certified_infinite", Some(atoms_to_json(mixture)), None, None)
        }
        InfiniteOutcome::RefutedAt { big_n, report } => {
            ("refuted_at", None, Some(*big_n), Some(extend_report_to_json(report)))
        }
        InfiniteOutcome::Unknown => ("unknown", None, None, None),
    };
    json!({
        "outcome": outcome,
        "mixture": mixture,
        "failing_N": failing,
        "report": inner,
        "probe_range": [report.probe_range.0, report.probe_range.1],
        "grid_depth": report.grid_depth,
    })
}

pub fn norm_to_json(cert: &NormCertificate, big_n: u32) -> Value {
    json!({
        "N": big_n,
        "norm": rational_to_json(&cert.norm),
        "maximizer": function_to_json(&cert.maximizer),
        "signed_extension": typed_map(cert.signed_extension.iter()),
    })
}

pub fn inversion_to_json(table: &InversionTable) -> Value {
    json!({
        "mu": table.mu.to_string(),
        "N": table.big_n,
        "coefficients": typed_map(table.coeffs.iter()),
        "l1": rational_to_json(&table.l1),
    })
}

pub fn tv_bound_to_json(bound: &TvBound) -> Value {
    json!({
        "numerator": rational_to_json(&bound.numerator),
        "denominator": rational_to_json(&bound.denominator),
        "value": bound.value.as_ref().map(rational_to_json),
        "grid_depth": bound.grid_depth,
        "grid_approximate": bound.grid_approximate,
    })
}

pub fn covariance_to_json(report: &CovarianceReport) -> Value {
    json!({
        "cov": rational_to_json(&report.cov),
        "var": rational_to_json(&report.var),
        "satisfies": report.satisfies,
    })
}

pub fn claims_to_json(claims: &[Claim]) -> Value {
    Value::Array(
        claims
            .iter()
            .map(|c| json!({"claim": c.statement, "holds": c.holds, "detail": c.detail}))
            .collect(),
    )
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum SenseWire {
    Maximize,
    Minimize,
}

#[derive(Serialize, Deserialize)]
enum RelationWire {
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = "=")]
    Eq,
    #[serde(rename = ">=")]
    Ge,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConstraintWire {
    /// dense coefficients
    #[serde(with = "rational::serde_vec")]
    coeffs: Vec<Rational>,
    relation: RelationWire,
    #[serde(with = "rational::serde_str")]
    rhs: Rational,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct UpperWire {
    var: usize,
    #[serde(with = "rational::serde_str")]
    bound: Rational,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProgramWire {
    sense: SenseWire,
    #[serde(with = "rational::serde_vec")]
    objective: Vec<Rational>,
    #[serde(default)]
    constraints: Vec<ConstraintWire>,
    /// variables without the `x >= 0` bound
    #[serde(default)]
    free: Vec<usize>,
    #[serde(default)]
    upper: Vec<UpperWire>,
}

/// `{"sense": "maximize"|"minimize", "objective": [...], "constraints":
/// [{"coeffs": [...], "relation": "<="|"="|">=", "rhs": "p/q"}], "free":
/// [indices], "upper": [{"var": j, "bound": "p/q"}]}`
pub fn lp_from_json(value: &Value) -> Result<LinearProgram> {
    let wire: ProgramWire =
        serde_json::from_value(value.clone()).map_err(|e| Error::Input(format!("program: {e}")))?;
    let sense = match wire.sense {
        SenseWire::Maximize => Sense::Maximize,
        SenseWire::Minimize => Sense::Minimize,
    };
    let mut lp = LinearProgram::new(sense, wire.objective);
    let n = lp.num_vars();
    for (i, c) in wire.constraints.into_iter().enumerate() {
        let relation = match c.relation {
            RelationWire::Le => Relation::Le,
            RelationWire::Eq => Relation::Eq,
            RelationWire::Ge => Relation::Ge,
        };
        lp.add_dense(c.coeffs, relation, c.rhs)
            .map_err(|e| field_error(&format!("constraints[{i}]"), e))?;
    }
    for j in wire.free {
        if j >= n {
            return Err(field_error("free", format!("variable {j} out of range")));
        }
        lp.set_free(j);
    }
    for u in wire.upper {
        if u.var >= n {
            return Err(field_error("upper", format!("variable {} out of range", u.var)));
        }
        lp.set_upper(u.var, u.bound);
    }
    Ok(lp)
}

pub fn lp_to_json(lp: &LinearProgram) -> Value {
    let n = lp.num_vars();
    let constraints = lp
        .constraints
        .iter()
        .map(|c| {
            let mut dense = vec![Rational::from_integer(0.into()); n];
            for (j, a) in &c.coeffs {
                dense[*j] = a.clone();
            }
            ConstraintWire {
                coeffs: dense,
                relation: match c.relation {
                    Relation::Le => RelationWire::Le,
                    Relation::Eq => RelationWire::Eq,
                    Relation::Ge => RelationWire::Ge,
                },
                rhs: c.rhs.clone(),
            }
        })
        .collect();
    let wire = ProgramWire {
        sense: match lp.sense {
            Sense::Maximize => SenseWire::Maximize,
            Sense::Minimize => SenseWire::Minimize,
        },
        objective: lp.objective.clone(),
        constraints,
        free: (0..n).filter(|&j| lp.lower[j] == LowerBound::Free).collect(),
        upper: lp
            .upper
            .iter()
            .enumerate()
            .filter_map(|(var, u)| u.clone().map(|bound| UpperWire { var, bound }))
            .collect(),
    };
    serde_json::to_value(wire).expect("plain data serializes")
}

fn status_name(status: LpStatus) -> &'static str {
    match status {
        LpStatus::Optimal => "optimal",
        LpStatus::Infeasible => "infeasible",
        LpStatus::Unbounded => "unbounded",
    }
}

/// `{"status", "primal", "objective_value", "certificate": {"rows",
/// "upper"}, "ray"}` with `null` for absent parts.
pub fn outcome_to_json(outcome: &LpOutcome) -> Value {
    json!({
        "status": status_name(outcome.status),
        "primal": outcome.primal.as_deref().map(rationals_to_json),
        "objective_value": outcome.objective_value.as_ref().map(rational_to_json),
        "certificate": outcome.certificate.as_ref().map(|c| json!({
            "rows": rationals_to_json(&c.rows),
            "upper": rationals_to_json(&c.upper),
        })),
        "ray": outcome.ray.as_deref().map(rationals_to_json),
    })
}

pub fn outcome_from_json(value: &Value) -> Result<LpOutcome> {
    let map = object(
        value,
        "outcome",
        &["status", "primal", "objective_value", "certificate", "ray"],
    )?;
    let status = match member(map, "status")?.as_str() {
        Some("optimal") => LpStatus::Optimal,
        Some("infeasible") => LpStatus::Infeasible,
        Some("unbounded") => LpStatus::Unbounded,
        _ => return Err(field_error("status", "expected optimal, infeasible or unbounded")),
    };
    let optional_vec = |field: &str| -> Result<Option<Vec<Rational>>> {
        match map.get(field) {
            None | Some(Value::Null) => Ok(None),
            Some(v) => rationals_from_json(v, field).map(Some),
        }
    };
    let certificate = match map.get("certificate") {
        None | Some(Value::Null) => None,
        Some(v) => {
            let c = object(v, "certificate", &["rows", "upper"])?;
            Some(DualCertificate {
                rows: rationals_from_json(member(c, "rows")?, "certificate.rows")?,
                upper: rationals_from_json(member(c, "upper")?, "certificate.upper")?,
            })
        }
    };
    let objective_value = match map.get("objective_value") {
        None | Some(Value::Null) => None,
        Some(v) => Some(rational_from_json(v, "objective_value")?),
    };
    Ok(lp::LpOutcome {
        status,
        primal: optional_vec("primal")?,
        objective_value,
        certificate,
        ray: optional_vec("ray")?,
    })
}
