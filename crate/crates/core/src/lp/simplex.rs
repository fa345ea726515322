//! Two-phase revised simplex over a sparse LU factorization of the basis.
//!
//! Pricing uses devex reference weights, with floating-point estimates only
//! to rank candidates: every entering column's reduced cost is confirmed
//! exactly, and optimality is declared only after an exact scan. A run of
//! degenerate pivots switches to Bland's rule until progress resumes, so
//! the method cannot cycle.
//!
//! The program is brought to standard form `A x = b, x >= 0, b >= 0`:
//! free variables are split, upper bounds become rows, rows with negative
//! right-hand side are negated, `<=` rows get a slack, `>=` rows a surplus
//! and an artificial, `=` rows an artificial.

use crate::cap::{resource_cap, MAX_LP_ROWS, MAX_PIVOTS};
use crate::error::{Error, Result};
use crate::scalar::Field;

use super::factor::Factor;
use super::{DualCertificate, LinearProgram, LowerBound, LpOutcome, LpStatus, Relation};

/// Column and row limits for one solve.
#[derive(Clone, Copy, Debug)]
pub struct Limits {
    pub max_columns: u128,
    pub max_rows: usize,
    pub max_pivots: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_columns: resource_cap(),
            max_rows: MAX_LP_ROWS,
            max_pivots: MAX_PIVOTS,
        }
    }
}

pub fn solve<F: Field>(lp: &LinearProgram<F>) -> Result<LpOutcome<F>> {
    solve_with_limits(lp, &Limits::default())
}

pub fn solve_with_limits<F: Field>(lp: &LinearProgram<F>, limits: &Limits) -> Result<LpOutcome<F>> {
    lp.validate()?;
    let std = Standard::build(lp, limits)?;
    let mut tab = Revised::new(&std)?;

    if std.first_artificial < std.cols.len() {
        let phase1: Vec<F> = (0..std.cols.len())
            .map(|j| {
                if j >= std.first_artificial {
                    -F::one()
                } else {
                    F::zero()
                }
            })
            .collect();
        // artificials never re-enter; the Farkas ray only needs y A >= 0 on
        // the real columns
        let first_artificial = std.first_artificial;
        match tab.run(&phase1, |j| j < first_artificial, limits)? {
            Phase::Optimal => {}
            Phase::Unbounded { .. } => {
                return Err(Error::Internal("phase one objective unbounded".into()))
            }
        }
        let infeasibility = tab.objective(&phase1);
        if infeasibility.is_negative() {
            let y = tab.duals(&phase1);
            return Ok(LpOutcome {
                status: LpStatus::Infeasible,
                primal: None,
                objective_value: None,
                certificate: Some(std.map_duals(&y)),
                ray: None,
            });
        }
        tab.drive_out_artificials()?;
    }

    let first_artificial = std.first_artificial;
    match tab.run(&std.cost, |j| j < first_artificial, limits)? {
        Phase::Optimal => {
            let x = std.map_primal(&tab.point());
            let value = lp
                .objective
                .iter()
                .zip(&x)
                .fold(F::zero(), |acc, (c, v)| acc + c.clone() * v.clone());
            let y = tab.duals(&std.cost);
            Ok(LpOutcome {
                status: LpStatus::Optimal,
                primal: Some(x),
                objective_value: Some(value),
                certificate: Some(std.map_duals(&y)),
                ray: None,
            })
        }
        Phase::Unbounded { entering, alpha } => {
            let mut dir = vec![F::zero(); std.cols.len()];
            dir[entering] = F::one();
            for (i, a) in alpha.into_iter().enumerate() {
                dir[tab.basis[i]] = -a;
            }
            Ok(LpOutcome {
                status: LpStatus::Unbounded,
                primal: Some(std.map_primal(&tab.point())),
                objective_value: None,
                certificate: None,
                ray: Some(std.map_primal(&dir)),
            })
        }
    }
}

enum RowOrigin {
    Constraint(usize),
    Upper(usize),
}

/// Sparse coefficients over the original variables, relation, rhs.
type SparseRow<F> = (Vec<(usize, F)>, Relation, F);

struct Standard<F> {
    cols: Vec<Vec<(usize, F)>>,
    b: Vec<F>,
    cost: Vec<F>,
    first_artificial: usize,
    initial_basis: Vec<usize>,
    /// standard columns carrying `x_j = plus - minus`
    var_cols: Vec<(usize, Option<usize>)>,
    flipped: Vec<bool>,
    origin: Vec<RowOrigin>,
    num_upper: usize,
}

impl<F: Field> Standard<F> {
    fn build(lp: &LinearProgram<F>, limits: &Limits) -> Result<Self> {
        let n = lp.num_vars();
        let max_obj = lp.max_objective();

        let mut rows: Vec<SparseRow<F>> = Vec::new();
        let mut origin = Vec::new();
        for (i, c) in lp.constraints.iter().enumerate() {
            rows.push((c.coeffs.clone(), c.relation, c.rhs.clone()));
            origin.push(RowOrigin::Constraint(i));
        }
        for (j, u) in lp.upper.iter().enumerate() {
            if let Some(u) = u {
                rows.push((vec![(j, F::one())], Relation::Le, u.clone()));
                origin.push(RowOrigin::Upper(j));
            }
        }
        let m = rows.len();
        if m > limits.max_rows {
            return Err(Error::Capacity {
                what: "LP rows",
                size: m as u128,
                cap: limits.max_rows as u128,
            });
        }

        let mut flipped = vec![false; m];
        for (i, (coeffs, rel, rhs)) in rows.iter_mut().enumerate() {
            if rhs.is_negative() {
                flipped[i] = true;
                *rhs = -rhs.clone();
                for (_, a) in coeffs.iter_mut() {
                    *a = -a.clone();
                }
                *rel = match rel {
                    Relation::Le => Relation::Ge,
                    Relation::Ge => Relation::Le,
                    Relation::Eq => Relation::Eq,
                };
            }
        }

        let free = lp.lower.iter().filter(|l| **l == LowerBound::Free).count();
        let surplus = rows.iter().filter(|r| r.1 != Relation::Eq).count();
        let artificial = rows.iter().filter(|r| r.1 != Relation::Le).count();
        let total = (n + free + surplus + artificial) as u128;
        if total > limits.max_columns {
            return Err(Error::Capacity {
                what: "LP columns",
                size: total,
                cap: limits.max_columns,
            });
        }

        let mut cols: Vec<Vec<(usize, F)>> = vec![Vec::new(); n];
        for (i, (coeffs, _, _)) in rows.iter().enumerate() {
            for (j, a) in coeffs {
                cols[*j].push((i, a.clone()));
            }
        }
        let mut cost = max_obj.clone();
        let mut var_cols: Vec<(usize, Option<usize>)> = (0..n).map(|j| (j, None)).collect();
        for j in 0..n {
            if lp.lower[j] == LowerBound::Free {
                let neg: Vec<(usize, F)> = cols[j].iter().map(|(i, a)| (*i, -a.clone())).collect();
                var_cols[j].1 = Some(cols.len());
                cols.push(neg);
                cost.push(-max_obj[j].clone());
            }
        }
        let mut initial_basis = vec![usize::MAX; m];
        for (i, (_, rel, _)) in rows.iter().enumerate() {
            match rel {
                Relation::Le => {
                    initial_basis[i] = cols.len();
                    cols.push(vec![(i, F::one())]);
                    cost.push(F::zero());
                }
                Relation::Ge => {
                    cols.push(vec![(i, -F::one())]);
                    cost.push(F::zero());
                }
                Relation::Eq => {}
            }
        }
        let first_artificial = cols.len();
        for (i, (_, rel, _)) in rows.iter().enumerate() {
            if *rel != Relation::Le {
                initial_basis[i] = cols.len();
                cols.push(vec![(i, F::one())]);
                cost.push(F::zero());
            }
        }
        let b = rows.into_iter().map(|r| r.2).collect();
        Ok(Standard {
            cols,
            b,
            cost,
            first_artificial,
            initial_basis,
            var_cols,
            flipped,
            origin,
            num_upper: lp.upper.len(),
        })
    }

    fn map_primal(&self, x: &[F]) -> Vec<F> {
        self.var_cols
            .iter()
            .map(|&(p, m)| match m {
                Some(m) => x[p].clone() - x[m].clone(),
                None => x[p].clone(),
            })
            .collect()
    }

    fn map_duals(&self, y: &[F]) -> DualCertificate<F> {
        let constraints = self
            .origin
            .iter()
            .filter(|o| matches!(o, RowOrigin::Constraint(_)))
            .count();
        let mut rows = vec![F::zero(); constraints];
        let mut upper = vec![F::zero(); self.num_upper];
        for (i, o) in self.origin.iter().enumerate() {
            let v = if self.flipped[i] { -y[i].clone() } else { y[i].clone() };
            match o {
                RowOrigin::Constraint(c) => rows[*c] = v,
                RowOrigin::Upper(j) => upper[*j] = v,
            }
        }
        DualCertificate { rows, upper }
    }
}

/// Consecutive degenerate pivots before pricing falls back to Bland's rule.
const BLAND_AFTER: usize = 20;

/// Eta transformations accumulated before the basis is factored afresh.
const REFACTOR_EVERY: usize = 64;

/// Floating-point reduced costs at or below this are not trusted as
/// candidates; the exact scan at the end catches any that were missed.
const SCORE_TOLERANCE: f64 = 1e-9;

enum Phase<F> {
    Optimal,
    Unbounded { entering: usize, alpha: Vec<F> },
}

struct Revised<'a, F> {
    std: &'a Standard<F>,
    basis: Vec<usize>,
    /// slot of each basic column
    position: Vec<Option<usize>>,
    factor: Factor<F>,
    xb: Vec<F>,
    pivots: u64,
    /// `std.cols` in floating point, used only to rank candidates
    approx: Vec<Vec<(usize, f64)>>,
}

fn approx<F: Field>(v: &F) -> f64 {
    v.to_f64().unwrap_or(0.0)
}

impl<'a, F: Field> Revised<'a, F> {
    fn new(std: &'a Standard<F>) -> Result<Self> {
        let m = std.b.len();
        let mut position = vec![None; std.cols.len()];
        for (i, &j) in std.initial_basis.iter().enumerate() {
            position[j] = Some(i);
        }
        let mut tab = Revised {
            std,
            basis: std.initial_basis.clone(),
            position,
            factor: Factor::new(0, &[])?,
            xb: Vec::new(),
            pivots: 0,
            approx: std
                .cols
                .iter()
                .map(|c| c.iter().map(|(r, a)| (*r, approx(a))).collect())
                .collect(),
        };
        tab.refactor()?;
        debug_assert_eq!(tab.xb.len(), m);
        Ok(tab)
    }

    fn refactor(&mut self) -> Result<()> {
        let columns: Vec<&[(usize, F)]> = self
            .basis
            .iter()
            .map(|&j| self.std.cols[j].as_slice())
            .collect();
        self.factor = Factor::new(self.basis.len(), &columns)?;
        let b: Vec<(usize, F)> = self.std.b.iter().cloned().enumerate().collect();
        self.xb = self.factor.ftran(&b);
        Ok(())
    }

    fn duals(&self, cost: &[F]) -> Vec<F> {
        let cb: Vec<F> = self.basis.iter().map(|&j| cost[j].clone()).collect();
        self.factor.btran(&cb)
    }

    /// Row `p` of the basis inverse.
    fn inverse_row(&self, p: usize) -> Vec<F> {
        let mut e = vec![F::zero(); self.basis.len()];
        e[p] = F::one();
        self.factor.btran(&e)
    }

    fn objective(&self, cost: &[F]) -> F {
        self.basis
            .iter()
            .zip(&self.xb)
            .fold(F::zero(), |acc, (&j, x)| acc + cost[j].clone() * x.clone())
    }

    fn point(&self) -> Vec<F> {
        let mut x = vec![F::zero(); self.std.cols.len()];
        for (i, &j) in self.basis.iter().enumerate() {
            x[j] = self.xb[i].clone();
        }
        x
    }

    fn reduced_cost(&self, cost: &[F], y: &[F], j: usize) -> F {
        self.std.cols[j]
            .iter()
            .fold(cost[j].clone(), |acc, (r, a)| acc - y[*r].clone() * a.clone())
    }

    /// Exact scan: lowest improving index under Bland's rule, otherwise the
    /// best-scoring improving column.
    fn exact_pricing(
        &self,
        cost: &[F],
        y: &[F],
        weights: &[f64],
        allowed: &impl Fn(usize) -> bool,
        bland: bool,
    ) -> Option<(usize, F)> {
        let mut best: Option<(usize, F, f64)> = None;
        for j in 0..self.std.cols.len() {
            if self.position[j].is_some() || !allowed(j) {
                continue;
            }
            let d = self.reduced_cost(cost, y, j);
            if !d.is_positive() {
                continue;
            }
            if bland {
                return Some((j, d));
            }
            let df = approx(&d);
            let score = df * df / weights[j];
            if best.as_ref().is_none_or(|(_, _, s)| score > *s) {
                best = Some((j, d, score));
            }
        }
        best.map(|(j, d, _)| (j, d))
    }

    /// Devex pricing on floating-point reduced costs; the chosen column's
    /// reduced cost is then confirmed exactly.
    fn pricing(
        &self,
        cost: &[F],
        y: &[F],
        weights: &[f64],
        allowed: &impl Fn(usize) -> bool,
    ) -> Option<(usize, F)> {
        let yf: Vec<f64> = y.iter().map(approx).collect();
        let mut best: Option<(usize, f64)> = None;
        for (j, col) in self.approx.iter().enumerate() {
            if self.position[j].is_some() || !allowed(j) {
                continue;
            }
            let d = col
                .iter()
                .fold(approx(&cost[j]), |acc, (r, a)| acc - yf[*r] * a);
            if d <= SCORE_TOLERANCE {
                continue;
            }
            let score = d * d / weights[j];
            if best.is_none_or(|(_, s)| score > s) {
                best = Some((j, score));
            }
        }
        if let Some((j, _)) = best {
            let d = self.reduced_cost(cost, y, j);
            if d.is_positive() {
                return Some((j, d));
            }
        }
        self.exact_pricing(cost, y, weights, allowed, false)
    }

    fn run(&mut self, cost: &[F], allowed: impl Fn(usize) -> bool, limits: &Limits) -> Result<Phase<F>> {
        let mut y = self.duals(cost);
        let mut weights = vec![1f64; self.std.cols.len()];
        let mut degenerate_run = 0usize;
        loop {
            let entering = if degenerate_run >= BLAND_AFTER {
                self.exact_pricing(cost, &y, &weights, &allowed, true)
            } else {
                self.pricing(cost, &y, &weights, &allowed)
            };
            let Some((q, d)) = entering else {
                return Ok(Phase::Optimal);
            };
            let alpha = self.factor.ftran(&self.std.cols[q]);

            // among minimal ratios, the row whose basic column is lowest
            let mut leave: Option<(usize, F)> = None;
            for (i, a) in alpha.iter().enumerate() {
                if !a.is_positive() {
                    continue;
                }
                let ratio = self.xb[i].clone() / a.clone();
                let better = match &leave {
                    None => true,
                    Some((p, best)) => {
                        ratio < *best || (ratio == *best && self.basis[i] < self.basis[*p])
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            let Some((p, step)) = leave else {
                return Ok(Phase::Unbounded { entering: q, alpha });
            };
            if step.is_zero() {
                degenerate_run += 1;
            } else {
                degenerate_run = 0;
            }

            self.pivots += 1;
            if self.pivots > limits.max_pivots {
                return Err(Error::Capacity {
                    what: "simplex pivots",
                    size: u128::from(self.pivots),
                    cap: u128::from(limits.max_pivots),
                });
            }

            // row p of the old inverse gives both the devex update and
            // the dual update y' = y + d * row / alpha_p
            let row = self.inverse_row(p);
            let rf: Vec<f64> = row.iter().map(approx).collect();
            let ap = approx(&alpha[p]);
            let wq = weights[q];
            for (j, col) in self.approx.iter().enumerate() {
                if self.position[j].is_some() || j == q {
                    continue;
                }
                let apj: f64 = col.iter().map(|(r, a)| rf[*r] * a).sum();
                if apj != 0.0 {
                    let ratio = apj / ap;
                    weights[j] = weights[j].max(ratio * ratio * wq);
                }
            }
            let leaving = self.basis[p];
            weights[leaving] = (wq / (ap * ap)).max(1.0);

            let scale = d / alpha[p].clone();
            for (r, v) in row.iter().enumerate() {
                if !v.is_zero() {
                    y[r] = y[r].clone() + scale.clone() * v.clone();
                }
            }
            self.pivot(p, q, &alpha)?;
        }
    }

    fn pivot(&mut self, p: usize, q: usize, alpha: &[F]) -> Result<()> {
        let theta = self.xb[p].clone() / alpha[p].clone();
        if !theta.is_zero() {
            for (i, a) in alpha.iter().enumerate() {
                if i != p && !a.is_zero() {
                    self.xb[i] = self.xb[i].clone() - a.clone() * theta.clone();
                }
            }
        }
        self.xb[p] = theta;
        let old = self.basis[p];
        self.position[old] = None;
        self.position[q] = Some(p);
        self.basis[p] = q;
        if self.factor.eta_count() + 1 >= REFACTOR_EVERY {
            self.refactor()
        } else {
            self.factor.update(p, alpha);
            Ok(())
        }
    }

    /// After a feasible phase one, swap zero-level artificials for real
    /// columns where possible. Rows where no real column has a nonzero
    /// entry are redundant and keep their artificial at zero.
    fn drive_out_artificials(&mut self) -> Result<()> {
        let first = self.std.first_artificial;
        for p in 0..self.basis.len() {
            if self.basis[p] < first {
                continue;
            }
            let row = self.inverse_row(p);
            let candidate = (0..first).find(|&j| {
                let entry = self.std.cols[j]
                    .iter()
                    .fold(F::zero(), |acc, (r, a)| acc + row[*r].clone() * a.clone());
                self.position[j].is_none() && !entry.is_zero()
            });
            if let Some(j) = candidate {
                let alpha = self.factor.ftran(&self.std.cols[j]);
                self.pivot(p, j, &alpha)?;
            }
        }
        Ok(())
    }
}
