//! Exact linear programming with mandatory certificates.
//!
//! [`solve`] runs a two-phase revised simplex method over any exact
//! [`Field`]; [`solve_rational`] is the entry point for [`Rational`]
//! programs. Every outcome carries the data needed to check it
//! without trusting the solver, and [`verify`] performs that check:
//!
//! * `Optimal`: a primal point and a dual vector with equal objectives.
//! * `Infeasible`: a Farkas ray combining the constraints into `0 <= negative`.
//! * `Unbounded`: a feasible point and an improving recession direction.
//!
//! Dual vectors are always stated for the maximization form of the
//! objective (`c` when maximizing, `-c` when minimizing), with one entry per
//! constraint and one per variable upper bound (zero where none is set).

mod factor;
mod simplex;
mod verify;

pub use simplex::{solve, solve_with_limits};
pub use verify::verify;

use crate::error::{Error, Result};
use crate::scalar::{from_rbig, to_rbig, Field};
use crate::Rational;

/// Solves over [`Rational`] by pivoting in a rational type that stores
/// small values inline; the outcome is identical to [`solve`].
pub fn solve_rational(lp: &LinearProgram<Rational>) -> Result<LpOutcome<Rational>> {
    let fast = lp.map(to_rbig);
    Ok(solve(&fast)?.map(from_rbig))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sense {
    Maximize,
    Minimize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LowerBound {
    Zero,
    Free,
}

/// `sum coeffs[j] x_j  relation  rhs`, with sparse, strictly increasing indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint<F> {
    pub coeffs: Vec<(usize, F)>,
    pub relation: Relation,
    pub rhs: F,
}

impl<F> Constraint<F> {
    fn map<G>(&self, f: &impl Fn(&F) -> G) -> Constraint<G> {
        Constraint {
            coeffs: self.coeffs.iter().map(|(j, a)| (*j, f(a))).collect(),
            relation: self.relation,
            rhs: f(&self.rhs),
        }
    }
}

impl<F: Field> Constraint<F> {
    pub fn lhs(&self, x: &[F]) -> F {
        self.coeffs
            .iter()
            .fold(F::zero(), |acc, (j, a)| acc + a.clone() * x[*j].clone())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearProgram<F> {
    pub sense: Sense,
    pub objective: Vec<F>,
    pub constraints: Vec<Constraint<F>>,
    pub lower: Vec<LowerBound>,
    pub upper: Vec<Option<F>>,
}

impl<F: Field> LinearProgram<F> {
    /// Program over `objective.len()` nonnegative variables with no constraints.
    pub fn new(sense: Sense, objective: Vec<F>) -> Self {
        let n = objective.len();
        LinearProgram {
            sense,
            objective,
            constraints: Vec::new(),
            lower: vec![LowerBound::Zero; n],
            upper: vec![None; n],
        }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    /// Adds a dense row; zero coefficients are dropped.
    pub fn add_dense(&mut self, row: Vec<F>, relation: Relation, rhs: F) -> Result<()> {
        if row.len() != self.num_vars() {
            return Err(Error::input(format!(
                "constraint has {} coefficients, program has {} variables",
                row.len(),
                self.num_vars()
            )));
        }
        let coeffs = row
            .into_iter()
            .enumerate()
            .filter(|(_, a)| !a.is_zero())
            .collect();
        self.constraints.push(Constraint {
            coeffs,
            relation,
            rhs,
        });
        Ok(())
    }

    /// Adds a sparse row; indices must be strictly increasing and in range.
    pub fn add_sparse(&mut self, coeffs: Vec<(usize, F)>, relation: Relation, rhs: F) -> Result<()> {
        let c = Constraint {
            coeffs,
            relation,
            rhs,
        };
        check_row(&c, self.num_vars())?;
        self.constraints.push(c);
        Ok(())
    }

    pub fn set_free(&mut self, var: usize) {
        self.lower[var] = LowerBound::Free;
    }

    pub fn set_upper(&mut self, var: usize, bound: F) {
        self.upper[var] = Some(bound);
    }

    /// Objective normalized to maximization.
    pub(crate) fn max_objective(&self) -> Vec<F> {
        match self.sense {
            Sense::Maximize => self.objective.clone(),
            Sense::Minimize => self.objective.iter().map(|c| -c.clone()).collect(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.num_vars();
        if self.lower.len() != n || self.upper.len() != n {
            return Err(Error::input(format!(
                "bounds cover {} / {} variables, program has {n}",
                self.lower.len(),
                self.upper.len()
            )));
        }
        self.constraints.iter().try_for_each(|c| check_row(c, n))
    }
}

impl<F> LinearProgram<F> {
    /// The same program over another scalar type.
    pub fn map<G>(&self, f: impl Fn(&F) -> G) -> LinearProgram<G> {
        LinearProgram {
            sense: self.sense,
            objective: self.objective.iter().map(&f).collect(),
            constraints: self.constraints.iter().map(|c| c.map(&f)).collect(),
            lower: self.lower.clone(),
            upper: self.upper.iter().map(|u| u.as_ref().map(&f)).collect(),
        }
    }
}

fn check_row<F>(c: &Constraint<F>, n: usize) -> Result<()> {
    let mut prev: Option<usize> = None;
    for (j, _) in &c.coeffs {
        if *j >= n {
            return Err(Error::input(format!(
                "coefficient index {j} out of range for {n} variables"
            )));
        }
        if prev.is_some_and(|p| p >= *j) {
            return Err(Error::input("constraint indices must be strictly increasing"));
        }
        prev = Some(*j);
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

/// Multipliers for the constraints and the variable upper bounds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualCertificate<F> {
    pub rows: Vec<F>,
    pub upper: Vec<F>,
}

/// A dual vector proving infeasibility.
pub type FarkasCertificate<F> = DualCertificate<F>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpOutcome<F> {
    pub status: LpStatus,
    /// Optimal point, or a feasible point when unbounded.
    pub primal: Option<Vec<F>>,
    /// In the program's own sense.
    pub objective_value: Option<F>,
    /// Dual optimum, or the Farkas ray when infeasible.
    pub certificate: Option<DualCertificate<F>>,
    /// Improving direction when unbounded.
    pub ray: Option<Vec<F>>,
}

impl<F> LpOutcome<F> {
    /// The same outcome over another scalar type.
    pub fn map<G>(&self, f: impl Fn(&F) -> G) -> LpOutcome<G> {
        let vec = |v: &Vec<F>| v.iter().map(&f).collect::<Vec<G>>();
        LpOutcome {
            status: self.status,
            primal: self.primal.as_ref().map(vec),
            objective_value: self.objective_value.as_ref().map(&f),
            certificate: self.certificate.as_ref().map(|c| DualCertificate {
                rows: vec(&c.rows),
                upper: vec(&c.upper),
            }),
            ray: self.ray.as_ref().map(vec),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn r(p: i64, q: i64) -> Rational {
        Field::ratio(p, q)
    }

    fn checked(lp: &LinearProgram<Rational>) -> LpOutcome<Rational> {
        let out = solve(lp).unwrap();
        assert!(verify(lp, &out), "certificate rejected: {out:?}");
        out
    }

    #[test]
    fn maximize_single_bounded() {
        let mut lp = LinearProgram::new(Sense::Maximize, vec![r(1, 1)]);
        lp.add_dense(vec![r(1, 1)], Relation::Le, r(1, 1)).unwrap();
        let out = checked(&lp);
        assert_eq!(out.status, LpStatus::Optimal);
        assert_eq!(out.objective_value, Some(r(1, 1)));
    }

    #[test]
    fn contradictory_bounds_are_infeasible() {
        let mut lp = LinearProgram::new(Sense::Maximize, vec![r(0, 1)]);
        lp.add_dense(vec![r(1, 1)], Relation::Le, r(-1, 1)).unwrap();
        let out = checked(&lp);
        assert_eq!(out.status, LpStatus::Infeasible);
        assert!(out.certificate.is_some());
    }

    #[test]
    fn separable_rational_optimum() {
        let mut lp = LinearProgram::new(Sense::Maximize, vec![r(1, 1), r(1, 1)]);
        lp.add_dense(vec![r(1, 1), r(0, 1)], Relation::Le, r(1, 3)).unwrap();
        lp.add_dense(vec![r(0, 1), r(1, 1)], Relation::Le, r(2, 7)).unwrap();
        let out = checked(&lp);
        assert_eq!(out.objective_value, Some(r(13, 21)));
    }

    #[test]
    fn unbounded_with_ray() {
        let mut lp = LinearProgram::new(Sense::Maximize, vec![r(1, 1), r(-1, 1)]);
        lp.add_dense(vec![r(1, 1), r(-1, 1)], Relation::Ge, r(-2, 1)).unwrap();
        let out = checked(&lp);
        assert_eq!(out.status, LpStatus::Unbounded);
        assert!(out.ray.is_some());
    }

    #[test]
    fn minimize_with_free_and_upper_bounds() {
        // min x - y, x free, -3 <= x, y <= 5/2, x + y = 1
        let mut lp = LinearProgram::new(Sense::Minimize, vec![r(1, 1), r(-1, 1)]);
        lp.set_free(0);
        lp.set_upper(1, r(5, 2));
        lp.add_dense(vec![r(1, 1), r(0, 1)], Relation::Ge, r(-3, 1)).unwrap();
        lp.add_dense(vec![r(1, 1), r(1, 1)], Relation::Eq, r(1, 1)).unwrap();
        let out = checked(&lp);
        assert_eq!(out.status, LpStatus::Optimal);
        // y = 5/2, x = -3/2
        assert_eq!(out.objective_value, Some(r(-4, 1)));
        assert_eq!(out.primal, Some(vec![r(-3, 2), r(5, 2)]));
    }

    #[test]
    fn redundant_equalities() {
        let mut lp = LinearProgram::new(Sense::Maximize, vec![r(1, 1), r(2, 1)]);
        lp.add_dense(vec![r(1, 1), r(1, 1)], Relation::Eq, r(1, 1)).unwrap();
        lp.add_dense(vec![r(2, 1), r(2, 1)], Relation::Eq, r(2, 1)).unwrap();
        let out = checked(&lp);
        assert_eq!(out.objective_value, Some(r(2, 1)));
    }

    #[test]
    fn fixed_width_field() {
        use num_rational::Ratio;
        let q = |p: i64, d: i64| -> Ratio<i128> { Field::ratio(p, d) };
        let mut lp = LinearProgram::new(Sense::Maximize, vec![q(3, 1), q(2, 1)]);
        lp.add_dense(vec![q(1, 1), q(1, 1)], Relation::Le, q(4, 1)).unwrap();
        lp.add_dense(vec![q(1, 1), q(3, 1)], Relation::Le, q(6, 1)).unwrap();
        lp.set_upper(0, q(3, 1));
        let out = solve(&lp).unwrap();
        assert!(verify(&lp, &out));
        assert_eq!(out.objective_value, Some(q(11, 1)));
    }

    #[test]
    fn tampered_outcomes_are_rejected() {
        let mut lp = LinearProgram::new(Sense::Maximize, vec![r(1, 1), r(1, 1)]);
        lp.add_dense(vec![r(1, 1), r(0, 1)], Relation::Le, r(1, 3)).unwrap();
        lp.add_dense(vec![r(0, 1), r(1, 1)], Relation::Le, r(2, 7)).unwrap();
        let out = solve(&lp).unwrap();

        let mut bad = out.clone();
        bad.primal.as_mut().unwrap()[0] += r(1, 100);
        assert!(!verify(&lp, &bad));

        let mut bad = out.clone();
        bad.status = LpStatus::Infeasible;
        assert!(!verify(&lp, &bad));

        let mut bad = out;
        bad.status = LpStatus::Unbounded;
        assert!(!verify(&lp, &bad));
    }

    #[test]
    fn dimension_mismatch_is_input_error() {
        let mut lp = LinearProgram::new(Sense::Maximize, vec![r(1, 1)]);
        assert!(lp.add_dense(vec![r(1, 1), r(1, 1)], Relation::Le, r(1, 1)).is_err());
        assert!(lp.add_sparse(vec![(3, r(1, 1))], Relation::Le, r(1, 1)).is_err());
        lp.upper.push(None);
        assert!(matches!(solve(&lp), Err(Error::Input(_))));
    }
}
