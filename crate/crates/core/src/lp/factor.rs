//! Sparse LU factorization of a simplex basis with product-form updates.
//!
//! Gaussian elimination with Markowitz pivot choice writes the basis as
//! `B = E_1^-1 ... E_m^-1 U` where each `E_k` subtracts multiples of the
//! pivot row and `U` is triangular up to permutation. Basis changes are
//! appended as eta transformations until the next refactorization. All
//! arithmetic is exact, so any nonzero pivot is acceptable and the choice
//! only serves to limit fill-in.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::scalar::Field;

/// One elimination step: pivot at (`row`, `slot`).
struct Step<F> {
    row: usize,
    slot: usize,
    pivot: F,
    /// Remaining entries of the pivot row, by slot.
    upper: Vec<(usize, F)>,
    /// Row multipliers `(i, f)`: row `i` lost `f` times the pivot row.
    lower: Vec<(usize, F)>,
}

/// Column `slot` of the basis replaced; `others` holds the entering
/// column's coordinates in the old basis, except the pivot.
struct Eta<F> {
    slot: usize,
    pivot: F,
    others: Vec<(usize, F)>,
}

pub(super) struct Factor<F> {
    m: usize,
    steps: Vec<Step<F>>,
    etas: Vec<Eta<F>>,
}

impl<F: Field> Factor<F> {
    /// Factors the matrix whose column `s` is `columns[s]` (sparse by row).
    pub(super) fn new(m: usize, columns: &[&[(usize, F)]]) -> Result<Self> {
        let mut rows: Vec<BTreeMap<usize, F>> = vec![BTreeMap::new(); m];
        let mut cols: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); m];
        for (s, col) in columns.iter().enumerate() {
            for (r, a) in col.iter() {
                if !a.is_zero() {
                    rows[*r].insert(s, a.clone());
                    cols[s].insert(*r);
                }
            }
        }
        let mut active: Vec<bool> = vec![true; m];
        let mut steps = Vec::with_capacity(m);
        for _ in 0..m {
            // Markowitz: sparsest column, then sparsest row within it
            let mut best: Option<(usize, usize, usize)> = None;
            for s in (0..m).filter(|&s| active[s]) {
                let cc = cols[s].len();
                if cc == 0 {
                    return Err(Error::Internal("singular basis".into()));
                }
                if best.is_some_and(|(c, _, _)| c <= cc) {
                    continue;
                }
                let r = *cols[s]
                    .iter()
                    .min_by_key(|&&r| rows[r].len())
                    .expect("nonempty column");
                best = Some((cc, r, s));
                if cc == 1 {
                    break;
                }
            }
            let (_, p, s) = best.expect("active column");
            let pivot_row = std::mem::take(&mut rows[p]);
            let pivot = pivot_row[&s].clone();
            for j in pivot_row.keys() {
                cols[*j].remove(&p);
            }
            let mut lower = Vec::new();
            let targets: Vec<usize> = cols[s].iter().copied().collect();
            for i in targets {
                let f = rows[i].remove(&s).expect("indexed entry") / pivot.clone();
                cols[s].remove(&i);
                for (j, v) in pivot_row.iter().filter(|(j, _)| **j != s) {
                    let entry = rows[i].entry(*j).or_insert_with(F::zero);
                    *entry = entry.clone() - f.clone() * v.clone();
                    if entry.is_zero() {
                        rows[i].remove(j);
                        cols[*j].remove(&i);
                    } else {
                        cols[*j].insert(i);
                    }
                }
                lower.push((i, f));
            }
            active[s] = false;
            let upper = pivot_row.into_iter().filter(|(j, _)| *j != s).collect();
            steps.push(Step {
                row: p,
                slot: s,
                pivot,
                upper,
                lower,
            });
        }
        Ok(Factor {
            m,
            steps,
            etas: Vec::new(),
        })
    }

    pub(super) fn eta_count(&self) -> usize {
        self.etas.len()
    }

    /// Records that slot `p` now holds a column with coordinates `alpha`.
    pub(super) fn update(&mut self, p: usize, alpha: &[F]) {
        let others = alpha
            .iter()
            .enumerate()
            .filter(|(i, a)| *i != p && !a.is_zero())
            .map(|(i, a)| (i, a.clone()))
            .collect();
        self.etas.push(Eta {
            slot: p,
            pivot: alpha[p].clone(),
            others,
        });
    }

    /// Solves `B x = a`; `x` is indexed by slot.
    pub(super) fn ftran(&self, a: &[(usize, F)]) -> Vec<F> {
        let mut work = vec![F::zero(); self.m];
        for (r, v) in a {
            work[*r] = v.clone();
        }
        for step in &self.steps {
            let v = work[step.row].clone();
            if v.is_zero() {
                continue;
            }
            for (i, f) in &step.lower {
                work[*i] = work[*i].clone() - f.clone() * v.clone();
            }
        }
        let mut x = vec![F::zero(); self.m];
        for step in self.steps.iter().rev() {
            let mut acc = work[step.row].clone();
            for (j, u) in &step.upper {
                if !x[*j].is_zero() {
                    acc = acc - u.clone() * x[*j].clone();
                }
            }
            if !acc.is_zero() {
                x[step.slot] = acc / step.pivot.clone();
            }
        }
        for eta in &self.etas {
            let xp = x[eta.slot].clone();
            if xp.is_zero() {
                continue;
            }
            let xp = xp / eta.pivot.clone();
            for (i, a) in &eta.others {
                x[*i] = x[*i].clone() - a.clone() * xp.clone();
            }
            x[eta.slot] = xp;
        }
        x
    }

    /// Solves `y B = c`; `c` is indexed by slot, `y` by row.
    pub(super) fn btran(&self, c: &[F]) -> Vec<F> {
        let mut c = c.to_vec();
        for eta in self.etas.iter().rev() {
            let acc = eta
                .others
                .iter()
                .fold(c[eta.slot].clone(), |acc, (i, a)| {
                    if c[*i].is_zero() {
                        acc
                    } else {
                        acc - c[*i].clone() * a.clone()
                    }
                });
            c[eta.slot] = acc / eta.pivot.clone();
        }
        let mut y = vec![F::zero(); self.m];
        for step in &self.steps {
            let w = c[step.slot].clone();
            if w.is_zero() {
                continue;
            }
            let w = w / step.pivot.clone();
            for (j, u) in &step.upper {
                c[*j] = c[*j].clone() - u.clone() * w.clone();
            }
            y[step.row] = w;
        }
        for step in self.steps.iter().rev() {
            let acc = step.lower.iter().fold(F::zero(), |acc, (i, f)| {
                if y[*i].is_zero() {
                    acc
                } else {
                    acc + f.clone() * y[*i].clone()
                }
            });
            if !acc.is_zero() {
                y[step.row] = y[step.row].clone() - acc;
            }
        }
        y
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn dense_mul(cols: &[Vec<(usize, BigRational)>], x: &[BigRational], m: usize) -> Vec<BigRational> {
        let mut out = vec![q(0); m];
        for (s, col) in cols.iter().enumerate() {
            for (r, a) in col {
                out[*r] += a * &x[s];
            }
        }
        out
    }

    #[test]
    fn solves_and_updates() {
        let cols = vec![
            vec![(0, q(2)), (2, q(1))],
            vec![(1, q(3)), (2, q(-1))],
            vec![(0, q(1)), (1, q(1)), (2, q(4))],
        ];
        let refs: Vec<&[(usize, BigRational)]> = cols.iter().map(|c| c.as_slice()).collect();
        let mut f = Factor::new(3, &refs).unwrap();
        let rhs = vec![(0, q(1)), (1, q(-2)), (2, q(5))];
        let x = f.ftran(&rhs);
        assert_eq!(dense_mul(&cols, &x, 3), vec![q(1), q(-2), q(5)]);
        let c = vec![q(7), q(0), q(-3)];
        let y = f.btran(&c);
        for (s, col) in cols.iter().enumerate() {
            let v: BigRational = col.iter().map(|(r, a)| a * &y[*r]).sum();
            assert_eq!(v, c[s]);
        }

        // replace slot 1
        let entering = vec![(0, q(1)), (1, q(5))];
        let alpha = f.ftran(&entering);
        f.update(1, &alpha);
        let mut cols2 = cols.clone();
        cols2[1] = entering;
        let x = f.ftran(&rhs);
        assert_eq!(dense_mul(&cols2, &x, 3), vec![q(1), q(-2), q(5)]);
        let y = f.btran(&c);
        for (s, col) in cols2.iter().enumerate() {
            let v: BigRational = col.iter().map(|(r, a)| a * &y[*r]).sum();
            assert_eq!(v, c[s]);
        }
    }

    #[test]
    fn singular_rejected() {
        let cols = [vec![(0, q(1))], vec![(0, q(2))]];
        let refs: Vec<&[(usize, BigRational)]> = cols.iter().map(|c| c.as_slice()).collect();
        assert!(Factor::new(2, &refs).is_err());
    }
}
