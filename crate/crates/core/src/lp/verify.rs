//! Independent certificate checks. Nothing here depends on how the
//! outcome was produced.

use crate::scalar::Field;

use super::{DualCertificate, LinearProgram, LowerBound, LpOutcome, LpStatus, Relation};

/// True iff every certificate condition of `outcome` holds exactly for `lp`.
pub fn verify<F: Field>(lp: &LinearProgram<F>, outcome: &LpOutcome<F>) -> bool {
    if lp.validate().is_err() {
        return false;
    }
    match outcome.status {
        LpStatus::Optimal => verify_optimal(lp, outcome),
        LpStatus::Infeasible => outcome
            .certificate
            .as_ref()
            .is_some_and(|y| verify_farkas(lp, y)),
        LpStatus::Unbounded => verify_unbounded(lp, outcome),
    }
}

fn dot<F: Field>(a: &[F], b: &[F]) -> F {
    a.iter()
        .zip(b)
        .fold(F::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

fn primal_feasible<F: Field>(lp: &LinearProgram<F>, x: &[F]) -> bool {
    if x.len() != lp.num_vars() {
        return false;
    }
    let bounds_ok = x.iter().enumerate().all(|(j, v)| {
        (lp.lower[j] == LowerBound::Free || !v.is_negative())
            && lp.upper[j].as_ref().is_none_or(|u| v <= u)
    });
    bounds_ok
        && lp.constraints.iter().all(|c| {
            let lhs = c.lhs(x);
            match c.relation {
                Relation::Le => lhs <= c.rhs,
                Relation::Eq => lhs == c.rhs,
                Relation::Ge => lhs >= c.rhs,
            }
        })
}

/// Sign pattern shared by optimal duals and Farkas rays, and `A^T y + z`.
fn dual_shape<F: Field>(lp: &LinearProgram<F>, y: &DualCertificate<F>) -> Option<Vec<F>> {
    if y.rows.len() != lp.constraints.len() || y.upper.len() != lp.num_vars() {
        return None;
    }
    for (c, v) in lp.constraints.iter().zip(&y.rows) {
        let ok = match c.relation {
            Relation::Le => !v.is_negative(),
            Relation::Ge => !v.is_positive(),
            Relation::Eq => true,
        };
        if !ok {
            return None;
        }
    }
    for (u, z) in lp.upper.iter().zip(&y.upper) {
        if z.is_negative() || (u.is_none() && !z.is_zero()) {
            return None;
        }
    }
    let mut reduced = y.upper.clone();
    for (c, v) in lp.constraints.iter().zip(&y.rows) {
        if v.is_zero() {
            continue;
        }
        for (j, a) in &c.coeffs {
            reduced[*j] = reduced[*j].clone() + a.clone() * v.clone();
        }
    }
    Some(reduced)
}

fn dual_objective<F: Field>(lp: &LinearProgram<F>, y: &DualCertificate<F>) -> F {
    let rows = lp
        .constraints
        .iter()
        .zip(&y.rows)
        .fold(F::zero(), |acc, (c, v)| acc + c.rhs.clone() * v.clone());
    lp.upper
        .iter()
        .zip(&y.upper)
        .fold(rows, |acc, (u, z)| match u {
            Some(u) => acc + u.clone() * z.clone(),
            None => acc,
        })
}

fn verify_optimal<F: Field>(lp: &LinearProgram<F>, out: &LpOutcome<F>) -> bool {
    let (Some(x), Some(value), Some(y)) = (&out.primal, &out.objective_value, &out.certificate)
    else {
        return false;
    };
    if !primal_feasible(lp, x) || dot(&lp.objective, x) != *value {
        return false;
    }
    let c = lp.max_objective();
    let Some(reduced) = dual_shape(lp, y) else {
        return false;
    };
    let dual_ok = reduced.iter().zip(&c).enumerate().all(|(j, (r, cj))| match lp.lower[j] {
        LowerBound::Zero => r >= cj,
        LowerBound::Free => r == cj,
    });
    dual_ok && dot(&c, x) == dual_objective(lp, y)
}

fn verify_farkas<F: Field>(lp: &LinearProgram<F>, y: &DualCertificate<F>) -> bool {
    let Some(reduced) = dual_shape(lp, y) else {
        return false;
    };
    let combination_ok = reduced.iter().enumerate().all(|(j, r)| match lp.lower[j] {
        LowerBound::Zero => !r.is_negative(),
        LowerBound::Free => r.is_zero(),
    });
    combination_ok && dual_objective(lp, y).is_negative()
}

fn verify_unbounded<F: Field>(lp: &LinearProgram<F>, out: &LpOutcome<F>) -> bool {
    let (Some(x), Some(r)) = (&out.primal, &out.ray) else {
        return false;
    };
    if !primal_feasible(lp, x) || r.len() != lp.num_vars() {
        return false;
    }
    let cone_ok = r.iter().enumerate().all(|(j, v)| {
        (lp.lower[j] == LowerBound::Free || !v.is_negative())
            && (lp.upper[j].is_none() || !v.is_positive())
    });
    let rows_ok = lp.constraints.iter().all(|c| {
        let lhs = c.lhs(r);
        match c.relation {
            Relation::Le => !lhs.is_positive(),
            Relation::Eq => lhs.is_zero(),
            Relation::Ge => !lhs.is_negative(),
        }
    });
    cone_ok && rows_ok && dot(&lp.max_objective(), r).is_positive()
}
