//! Extendibility decisions with certificates.
//!
//! A law `P` on `S^n` is `N`-extendible iff some nonnegative weights `q` on
//! the types of mass `N` satisfy `sum_nu q[nu] a(nu, mu) = P[mu]` for all
//! `mu`. Dually, the extending functional `U^N_n g -> E_P g` has norm
//! `sup { E_P g : |U^N_n g| <= 1 }`, which equals 1 exactly when `P` is
//! `N`-extendible. Both directions are linear programs over type spaces.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};

use crate::cap::resource_cap;
use crate::error::{Error, Result};
use crate::lp::{self, LpStatus, Relation, Sense};
use crate::measures::{urn_coefficient, ExchangeableLaw};
use crate::represent::{product_column, represents, simplex_grid, signed_rows, Atom, SignedMixture};
use crate::symmetrize::{apply_u, expectation, sup_norm, SymmetricFunction};
use crate::typespace::{sub_types, TypeSpace, TypeVector};
use crate::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Extendible,
    NotExtendible,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtendReport {
    pub big_n: u32,
    pub verdict: Verdict,
    /// Exchangeable law on `S^N` whose `n`-marginal is `P`.
    pub witness: Option<ExchangeableLaw>,
    /// `g` on `S^n` with `E_P g > sup |U^N_n g| = 1`.
    pub refutation: Option<SymmetricFunction>,
    /// Norm of the extending functional.
    pub norm: Rational,
}

/// Optimal pair for the extending-functional norm.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormCertificate {
    pub norm: Rational,
    /// `sup |U^N_n g| <= 1` and `E_P g = norm`.
    pub maximizer: SymmetricFunction,
    /// Signed weights on types of mass `N` with marginal `P` and
    /// `sum |weight| = norm`.
    pub signed_extension: BTreeMap<TypeVector, Rational>,
}

fn check_target(law: &ExchangeableLaw, big_n: u32) -> Result<()> {
    if big_n < law.n() {
        return Err(Error::input(format!(
            "extension length N = {big_n} is below n = {}",
            law.n()
        )));
    }
    Ok(())
}

fn extension_space(law: &ExchangeableLaw, big_n: u32) -> Result<TypeSpace> {
    TypeSpace::with_cap(law.k(), big_n, resource_cap())
}

/// Sparse urn-matrix columns: for each `nu` of mass `N`, `a(nu, mu)` over `mu`.
fn urn_columns(rows: &TypeSpace, cols: &TypeSpace) -> Result<Vec<Vec<(usize, Rational)>>> {
    cols.types()
        .iter()
        .map(|nu| {
            let mut col = sub_types(nu, rows.mass())
                .into_iter()
                .map(|mu| {
                    let i = rows
                        .index_of(&mu)
                        .ok_or_else(|| Error::Internal(format!("type {mu} missing")))?;
                    Ok((i, urn_coefficient(nu, &mu)?))
                })
                .collect::<Result<Vec<_>>>()?;
            col.sort_by_key(|(i, _)| *i);
            Ok(col)
        })
        .collect()
}

enum Feasibility {
    /// Nonnegative weights for every column.
    Feasible(Vec<Rational>),
    /// `y` with `y . column >= 0` for every column and `y . b < 0`.
    Infeasible(Vec<Rational>),
}

/// Decides whether `b` is a nonnegative combination of nonnegative
/// `columns`.
///
/// A column touching a row where `b` vanishes must get weight zero, so such
/// columns and rows are removed before the simplex runs; left in, they make
/// phase one almost entirely degenerate. A Farkas vector of the reduced
/// problem is lifted back by giving every removed row the smallest common
/// value that makes the removed columns nonnegative.
fn nonnegative_combination(b: &[Rational], columns: &[Vec<(usize, Rational)>]) -> Result<Feasibility> {
    let zero_row: Vec<bool> = b.iter().map(Zero::is_zero).collect();
    let mut row_index = vec![usize::MAX; b.len()];
    let mut kept_rows = Vec::new();
    for (r, z) in zero_row.iter().enumerate() {
        if !z {
            row_index[r] = kept_rows.len();
            kept_rows.push(r);
        }
    }
    let kept_cols: Vec<usize> = (0..columns.len())
        .filter(|&j| columns[j].iter().all(|(r, _)| !zero_row[*r]))
        .collect();

    let mut y_kept = vec![-Rational::one(); kept_rows.len()];
    if !kept_cols.is_empty() {
        let mut lp = crate::LinearProgram::new(Sense::Maximize, vec![Rational::zero(); kept_cols.len()]);
        let mut rows: Vec<Vec<(usize, Rational)>> = vec![Vec::new(); kept_rows.len()];
        for (jj, &j) in kept_cols.iter().enumerate() {
            for (r, a) in &columns[j] {
                rows[row_index[*r]].push((jj, a.clone()));
            }
        }
        for (row, &r) in rows.into_iter().zip(&kept_rows) {
            lp.add_sparse(row, Relation::Eq, b[r].clone())?;
        }
        let out = lp::solve_rational(&lp)?;
        match out.status {
            LpStatus::Optimal => {
                let x = out
                    .primal
                    .ok_or_else(|| Error::Internal("optimal LP without primal".into()))?;
                let mut full = vec![Rational::zero(); columns.len()];
                for (jj, &j) in kept_cols.iter().enumerate() {
                    full[j] = x[jj].clone();
                }
                return Ok(Feasibility::Feasible(full));
            }
            LpStatus::Infeasible => {
                y_kept = out
                    .certificate
                    .ok_or_else(|| Error::Internal("infeasible LP without certificate".into()))?
                    .rows;
            }
            LpStatus::Unbounded => return Err(Error::Internal("feasibility program unbounded".into())),
        }
    }

    let mut y = vec![Rational::zero(); b.len()];
    for (rr, &r) in kept_rows.iter().enumerate() {
        y[r] = y_kept[rr].clone();
    }
    let mut lift = Rational::zero();
    for col in columns {
        let (mut on_kept, mut on_zero) = (Rational::zero(), Rational::zero());
        for (r, a) in col {
            if zero_row[*r] {
                on_zero += a;
            } else {
                on_kept += &y[*r] * a;
            }
        }
        if on_zero.is_positive() {
            lift = lift.max(-on_kept / on_zero);
        }
    }
    for (r, z) in zero_row.iter().enumerate() {
        if *z {
            y[r] = lift.clone();
        }
    }
    Ok(Feasibility::Infeasible(y))
}

/// `||E^N_n||` with a maximizing function and a minimal signed extension.
///
/// Solved in the form `min sum |s[nu]|` over signed weights `s` whose
/// marginal is `P`; its dual is `max E_P g` subject to `|U^N_n g| <= 1`, and
/// the maximizer is read off the dual certificate.
pub fn extending_norm(law: &ExchangeableLaw, big_n: u32) -> Result<NormCertificate> {
    check_target(law, big_n)?;
    let rows = TypeSpace::new(law.k(), law.n());
    let cols = extension_space(law, big_n)?;
    let columns = urn_columns(&rows, &cols)?;
    let m = columns.len();
    let mut lp = crate::LinearProgram::new(Sense::Minimize, vec![Rational::one(); 2 * m]);
    for (row, rhs) in signed_rows(&rows, &columns, true)
        .into_iter()
        .zip(law.dense(&rows))
    {
        lp.add_sparse(row, Relation::Eq, rhs)?;
    }
    let out = lp::solve_rational(&lp)?;
    if out.status != LpStatus::Optimal {
        return Err(Error::Internal(format!(
            "norm program reported {:?}; it is always feasible and bounded",
            out.status
        )));
    }
    let (Some(x), Some(norm), Some(y)) = (out.primal, out.objective_value, out.certificate) else {
        return Err(Error::Internal("optimal LP without certificate".into()));
    };
    let signed_extension = cols
        .types()
        .iter()
        .enumerate()
        .filter_map(|(j, nu)| {
            let s = &x[j] - &x[m + j];
            (!s.is_zero()).then(|| (nu.clone(), s))
        })
        .collect();
    let g_values: Vec<Rational> = y.rows.iter().map(|v| -v).collect();
    let maximizer = SymmetricFunction::from_dense(law.alphabet().clone(), &rows, g_values)?;

    let ug = apply_u(&maximizer, big_n)?;
    if sup_norm(&ug) > Rational::one() || expectation(law, &maximizer)? != norm {
        return Err(Error::Internal("norm maximizer fails its certificate".into()));
    }
    Ok(NormCertificate {
        norm,
        maximizer,
        signed_extension,
    })
}

/// `||E^N_n||`; at least 1, with equality iff `P` is `N`-extendible.
pub fn norm_en(law: &ExchangeableLaw, big_n: u32) -> Result<Rational> {
    Ok(extending_norm(law, big_n)?.norm)
}

/// Decides `N`-extendibility.
///
/// Extendible laws come with a witness `Q` on `S^N`; together with the
/// constant function 1 it certifies a norm of exactly 1. Otherwise the
/// Farkas ray of the infeasible extension program yields `g` with
/// `U^N_n g <= 0 < E_P g`; shifting and scaling gives a refutation with
/// `sup |U^N_n g| = 1 < E_P g`, and the norm is computed separately.
pub fn check_extendible(law: &ExchangeableLaw, big_n: u32) -> Result<ExtendReport> {
    check_target(law, big_n)?;
    let rows = TypeSpace::new(law.k(), law.n());
    let cols = extension_space(law, big_n)?;
    let columns = urn_columns(&rows, &cols)?;
    match nonnegative_combination(&law.dense(&rows), &columns)? {
        Feasibility::Feasible(q) => {
            let witness = ExchangeableLaw::new(
                law.alphabet().clone(),
                big_n,
                cols.types().iter().cloned().zip(q),
            )?;
            if witness.marginal(law.n())? != *law {
                return Err(Error::Internal("extension witness has the wrong marginal".into()));
            }
            Ok(ExtendReport {
                big_n,
                verdict: Verdict::Extendible,
                witness: Some(witness),
                refutation: None,
                norm: Rational::one(),
            })
        }
        Feasibility::Infeasible(y) => {
            let raw = SymmetricFunction::from_dense(law.alphabet().clone(), &rows, y.iter().map(|v| -v).collect())?;
            let refutation = normalize_refutation(&raw, big_n)?;
            let lhs = expectation(law, &refutation)?;
            let rhs = sup_norm(&apply_u(&refutation, big_n)?);
            if !(rhs.is_one() && lhs > rhs) {
                return Err(Error::Internal("Farkas refutation does not refute".into()));
            }
            let norm = norm_en(law, big_n)?;
            if norm <= Rational::one() {
                return Err(Error::Internal(format!(
                    "non-extendible law with extending norm {norm}"
                )));
            }
            Ok(ExtendReport {
                big_n,
                verdict: Verdict::NotExtendible,
                witness: None,
                refutation: Some(refutation),
                norm,
            })
        }
    }
}

/// Maps `g` with `U g` in `[lo, hi]` to `(g - (lo + hi)/2) / ((hi - lo)/2)`,
/// so that `sup |U g| = 1`. Symmetrization commutes with adding constants.
fn normalize_refutation(g: &SymmetricFunction, big_n: u32) -> Result<SymmetricFunction> {
    let ug = apply_u(g, big_n)?;
    let (lo, hi) = ug.range();
    let half_width = (&hi - &lo) / Rational::from_integer(2.into());
    if half_width.is_zero() {
        return Err(Error::Internal("refutation symmetrizes to a constant".into()));
    }
    let center = (&hi + &lo) / Rational::from_integer(2.into());
    Ok(g.shift(&-center).scale(&half_width.recip()))
}

/// `|E_P g| <= (1 + eps) sup |U^N_n g|`; holds for every `g` when `P` is
/// `N`-extendible.
pub fn corollary_criterion(
    law: &ExchangeableLaw,
    g: &SymmetricFunction,
    big_n: u32,
    epsilon: &Rational,
) -> Result<bool> {
    check_target(law, big_n)?;
    if !epsilon.is_positive() {
        return Err(Error::input("epsilon must be positive"));
    }
    let lhs = expectation(law, g)?.abs();
    let rhs = (Rational::one() + epsilon) * sup_norm(&apply_u(g, big_n)?);
    Ok(lhs <= rhs)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InfiniteOutcome {
    /// `P` is a probability mixture of the listed product laws.
    CertifiedInfinite { mixture: Vec<Atom> },
    /// `P` is not `N`-extendible for the first such `N` probed.
    RefutedAt { big_n: u32, report: Box<ExtendReport> },
    /// Extendible throughout the probe range, but no probability mixture
    /// was found on the grids tried.
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InfiniteReport {
    pub outcome: InfiniteOutcome,
    /// Inclusive range of `N` checked; empty when `N_max = n`.
    pub probe_range: (u32, u32),
    /// Deepest grid searched for a mixture; 0 if the search did not run.
    pub grid_depth: u32,
}

/// Probes infinite extendibility: refutes at the smallest non-extendible
/// `N` in `n+1 ..= N_max`, else looks for a probability mixture of product
/// laws on the grid of depth `grid_depth` (doubled once on failure).
pub fn probe_infinite(law: &ExchangeableLaw, max_n: u32, grid_depth: u32) -> Result<InfiniteReport> {
    probe_infinite_with(law, max_n, grid_depth, &[])
}

/// As [`probe_infinite`], with extra candidate atoms added to every grid.
pub fn probe_infinite_with(
    law: &ExchangeableLaw,
    max_n: u32,
    grid_depth: u32,
    extra_atoms: &[Vec<Rational>],
) -> Result<InfiniteReport> {
    check_target(law, max_n)?;
    if grid_depth == 0 {
        return Err(Error::input("grid depth must be at least 1"));
    }
    for theta in extra_atoms {
        crate::measures::check_probability_vector(law.alphabet(), theta)?;
    }
    let probe_range = (law.n() + 1, max_n);
    for big_n in law.n() + 1..=max_n {
        let report = check_extendible(law, big_n)?;
        if report.verdict == Verdict::NotExtendible {
            return Ok(InfiniteReport {
                outcome: InfiniteOutcome::RefutedAt {
                    big_n,
                    report: Box::new(report),
                },
                probe_range,
                grid_depth: 0,
            });
        }
    }
    let mut depth = grid_depth;
    for attempt in 0..2 {
        let mut atoms = simplex_grid(law.k(), depth)?;
        for theta in extra_atoms {
            if !atoms.contains(theta) {
                atoms.push(theta.clone());
            }
        }
        if let Some(mixture) = probability_mixture(law, &atoms)? {
            return Ok(InfiniteReport {
                outcome: InfiniteOutcome::CertifiedInfinite { mixture },
                probe_range,
                grid_depth: depth,
            });
        }
        if attempt == 0 {
            depth = depth
                .checked_mul(2)
                .ok_or_else(|| Error::input("grid depth overflow"))?;
        }
    }
    Ok(InfiniteReport {
        outcome: InfiniteOutcome::Unknown,
        probe_range,
        grid_depth: depth,
    })
}

/// Nonnegative weights on `atoms` whose product laws mix to `P`.
pub fn probability_mixture(law: &ExchangeableLaw, atoms: &[Vec<Rational>]) -> Result<Option<Vec<Atom>>> {
    let space = TypeSpace::new(law.k(), law.n());
    let columns: Vec<_> = atoms.iter().map(|t| product_column(&space, t)).collect();
    let Feasibility::Feasible(x) = nonnegative_combination(&law.dense(&space), &columns)? else {
        return Ok(None);
    };
    let mixture: Vec<Atom> = atoms
        .iter()
        .zip(x)
        .filter(|(_, w)| !w.is_zero())
        .map(|(theta, weight)| Atom {
            weight,
            theta: theta.clone(),
        })
        .collect();
    let check = SignedMixture::new(mixture.clone())?;
    if !check.is_probability() || !represents(&check, law) {
        return Err(Error::Internal("probability mixture fails reconstruction".into()));
    }
    Ok(Some(mixture))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CovarianceReport {
    pub cov: Rational,
    pub var: Rational,
    /// `cov >= -var / (n - 1)`
    pub satisfies: bool,
}

impl CovarianceReport {
    /// `cov >= -var / (len - 1)`, the bound every exchangeable law of
    /// length `len` obeys.
    pub fn satisfies_for(&self, len: u32) -> bool {
        len >= 2 && self.cov >= -(&self.var) / Rational::from_integer((len - 1).into())
    }
}

/// `cov(X_1, X_2)` and `var(X_1)` under a numeric embedding of the symbols.
pub fn covariance_bound(law: &ExchangeableLaw, embedding: &[Rational]) -> Result<CovarianceReport> {
    if law.n() < 2 {
        return Err(Error::input("covariance needs n >= 2"));
    }
    let k = law.k();
    if embedding.len() != k {
        return Err(Error::input(format!(
            "embedding has {} values, alphabet has {k}",
            embedding.len()
        )));
    }
    let pairs = law.marginal(2)?;
    let mut cross = Rational::zero();
    let mut mean = Rational::zero();
    let mut square = Rational::zero();
    for a in 0..k {
        for b in 0..k {
            let mut counts = vec![0u32; k];
            counts[a] += 1;
            counts[b] += 1;
            let p = pairs.point_probability(&TypeVector::new(counts));
            if p.is_zero() {
                continue;
            }
            cross += &p * &embedding[a] * &embedding[b];
            mean += &p * &embedding[a];
            square += &p * &embedding[a] * &embedding[a];
        }
    }
    let mean_sq = &mean * &mean;
    let report = CovarianceReport {
        cov: cross - &mean_sq,
        var: square - mean_sq,
        satisfies: false,
    };
    Ok(CovarianceReport {
        satisfies: report.satisfies_for(law.n()),
        ..report
    })
}
