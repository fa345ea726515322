//! Signed mixtures of product laws.
//!
//! Every exchangeable law on a finite alphabet is `sum_i w_i theta_i^{(x)n}`
//! for finitely many product laws, if the weights may be negative. Here
//! the atoms are restricted to the rational grid of probability vectors
//! with a common denominator `d`, and the total variation `sum |w_i|` is
//! minimized by linear programming.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::cap::resource_cap;
use crate::error::{Error, Result};
use crate::lp::{self, LpStatus, Relation, Sense};
use crate::measures::{product_weights, ExchangeableLaw};
use crate::symmetrize::{expectation, SymmetricFunction};
use crate::typespace::{enumerate_types_k, type_count, TypeSpace, TypeVector};
use crate::Rational;

/// Grid depth used when none is given.
pub const DEFAULT_GRID_DEPTH: u32 = 4;

/// Number of times [`signed_mixture`] doubles the grid depth before giving up.
pub const DEFAULT_REFINEMENTS: u32 = 4;

/// One product law `theta^{(x)n}` with its mixing weight.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Atom {
    pub weight: Rational,
    pub theta: Vec<Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignedMixture {
    atoms: Vec<Atom>,
    total_variation: Rational,
    total_mass: Rational,
}

impl SignedMixture {
    /// Every `theta` must be a probability vector of the same length.
    pub fn new(atoms: Vec<Atom>) -> Result<Self> {
        let k = atoms.first().map(|a| a.theta.len());
        for a in &atoms {
            if Some(a.theta.len()) != k {
                return Err(Error::input("mixture atoms have different alphabet sizes"));
            }
            if a.theta.iter().any(Signed::is_negative)
                || a.theta.iter().sum::<Rational>() != Rational::from_integer(1.into())
            {
                return Err(Error::input("mixture atom is not a probability vector"));
            }
        }
        let total_variation = atoms.iter().map(|a| a.weight.abs()).sum();
        let total_mass = atoms.iter().map(|a| a.weight.clone()).sum();
        Ok(SignedMixture {
            atoms,
            total_variation,
            total_mass,
        })
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    /// `sum |w_i|`
    pub fn total_variation(&self) -> &Rational {
        &self.total_variation
    }

    /// `sum w_i`
    pub fn total_mass(&self) -> &Rational {
        &self.total_mass
    }

    pub fn is_probability(&self) -> bool {
        self.atoms.iter().all(|a| !a.weight.is_negative())
    }
}

/// All probability vectors on `k` symbols with coordinates in `(1/d) Z`,
/// in lexicographic order of their numerators.
pub fn simplex_grid(k: usize, depth: u32) -> Result<Vec<Vec<Rational>>> {
    if depth == 0 {
        return Err(Error::input("grid depth must be at least 1"));
    }
    let size = type_count(k, depth);
    let cap = resource_cap();
    if size > cap {
        return Err(Error::Capacity {
            what: "probability grid",
            size,
            cap,
        });
    }
    let d = BigInt::from(depth);
    Ok(enumerate_types_k(k, depth)
        .into_iter()
        .map(|t| {
            t.counts()
                .iter()
                .map(|&c| Rational::new(BigInt::from(c), d.clone()))
                .collect()
        })
        .collect())
}

/// `sum_i w_i theta_i^{(x)n}` by type class. Entries may leave `[0, 1]`.
pub fn reconstruct(mix: &SignedMixture, n: u32) -> Result<BTreeMap<TypeVector, Rational>> {
    if mix.atoms.is_empty() {
        return Err(Error::input("cannot reconstruct from an empty mixture"));
    }
    let mut out: BTreeMap<TypeVector, Rational> = BTreeMap::new();
    for atom in &mix.atoms {
        for (t, p) in product_weights(&atom.theta, n) {
            *out.entry(t).or_insert_with(Rational::zero) += p * &atom.weight;
        }
    }
    out.retain(|_, v| !v.is_zero());
    Ok(out)
}

/// True iff the mixture reproduces the law's class weights exactly.
pub fn represents(mix: &SignedMixture, law: &ExchangeableLaw) -> bool {
    mix.atoms.first().is_some_and(|a| a.theta.len() == law.k())
        && reconstruct(mix, law.n()).is_ok_and(|w| &w == law.weights())
}

/// Minimal-total-variation signed mixture on the grid of depth
/// `grid_depth`, doubling the depth up to [`DEFAULT_REFINEMENTS`] times.
pub fn signed_mixture(law: &ExchangeableLaw, grid_depth: u32) -> Result<SignedMixture> {
    signed_mixture_with(law, grid_depth, DEFAULT_REFINEMENTS)
}

pub fn signed_mixture_with(
    law: &ExchangeableLaw,
    grid_depth: u32,
    refinements: u32,
) -> Result<SignedMixture> {
    if grid_depth == 0 {
        return Err(Error::input("grid depth must be at least 1"));
    }
    let mut depth = grid_depth;
    let mut attempt = 0;
    loop {
        let grid = simplex_grid(law.k(), depth)?;
        match min_tv_on(law, &grid)? {
            Ok(mix) => return Ok(mix),
            Err(certificate) => {
                if attempt == refinements {
                    return Err(Error::Representation {
                        depth,
                        certificate: Box::new(certificate),
                    });
                }
                attempt += 1;
                depth = depth
                    .checked_mul(2)
                    .ok_or_else(|| Error::input("grid depth overflow"))?;
            }
        }
    }
}

/// Minimizes `sum (w+ + w-)` subject to `sum (w+ - w-) theta^{(x)n} = P` over
/// the given atoms. `Ok(Err(farkas))` when no signed combination matches.
pub(crate) fn min_tv_on(
    law: &ExchangeableLaw,
    grid: &[Vec<Rational>],
) -> Result<std::result::Result<SignedMixture, lp::FarkasCertificate<Rational>>> {
    let space = TypeSpace::new(law.k(), law.n());
    let columns: Vec<Vec<(usize, Rational)>> = grid
        .iter()
        .map(|theta| product_column(&space, theta))
        .collect();
    let m = columns.len();
    let mut lp = crate::LinearProgram::new(
        Sense::Minimize,
        vec![Rational::from_integer(1.into()); 2 * m],
    );
    let rows = signed_rows(&space, &columns, true);
    for (row, rhs) in rows.into_iter().zip(law.dense(&space)) {
        lp.add_sparse(row, Relation::Eq, rhs)?;
    }
    let out = lp::solve_rational(&lp)?;
    match out.status {
        LpStatus::Optimal => {
            let x = out
                .primal
                .ok_or_else(|| Error::Internal("optimal LP without a primal point".into()))?;
            let atoms = grid
                .iter()
                .enumerate()
                .filter_map(|(i, theta)| {
                    let w = &x[i] - &x[m + i];
                    (!w.is_zero()).then(|| Atom {
                        weight: w,
                        theta: theta.clone(),
                    })
                })
                .collect();
            let mix = SignedMixture::new(atoms)?;
            if !represents(&mix, law) {
                return Err(Error::Internal("signed mixture does not reproduce the law".into()));
            }
            Ok(Ok(mix))
        }
        LpStatus::Infeasible => Ok(Err(out
            .certificate
            .ok_or_else(|| Error::Internal("infeasible LP without certificate".into()))?)),
        LpStatus::Unbounded => Err(Error::Internal("total variation LP unbounded".into())),
    }
}

/// Sparse column of class weights of `theta^{(x)n}` over `space`.
pub(crate) fn product_column(space: &TypeSpace, theta: &[Rational]) -> Vec<(usize, Rational)> {
    let mut col: Vec<(usize, Rational)> = product_weights(theta, space.mass())
        .into_iter()
        .filter_map(|(t, p)| space.index_of(&t).map(|i| (i, p)))
        .collect();
    col.sort_by_key(|(i, _)| *i);
    col
}

/// Transposes columns into sparse rows; with `split` each column `j` also
/// appears negated as column `m + j`.
pub(crate) fn signed_rows(
    space: &TypeSpace,
    columns: &[Vec<(usize, Rational)>],
    split: bool,
) -> Vec<Vec<(usize, Rational)>> {
    let m = columns.len();
    let mut rows: Vec<Vec<(usize, Rational)>> = vec![Vec::new(); space.len()];
    for (j, col) in columns.iter().enumerate() {
        for (i, v) in col {
            rows[*i].push((j, v.clone()));
        }
    }
    if split {
        for (j, col) in columns.iter().enumerate() {
            for (i, v) in col {
                rows[*i].push((m + j, -v.clone()));
            }
        }
    }
    rows
}

/// Grid estimate of a lower bound on the total variation of any signed
/// mixture representing the law.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TvBound {
    /// `|E g|`
    pub numerator: Rational,
    /// `max over the grid of |integral of g against theta^{(x)n}|`
    pub denominator: Rational,
    /// `numerator / denominator`; `None` stands for `+inf`.
    pub value: Option<Rational>,
    pub grid_depth: u32,
    /// Always `true`: the denominator is only maximized over the grid, so
    /// `value` is certified only if the true maximum over the simplex is
    /// attained on a grid point.
    pub grid_approximate: bool,
}

pub fn tv_lower_bound(law: &ExchangeableLaw, g: &SymmetricFunction) -> Result<TvBound> {
    tv_lower_bound_on_grid(law, g, DEFAULT_GRID_DEPTH)
}

pub fn tv_lower_bound_on_grid(
    law: &ExchangeableLaw,
    g: &SymmetricFunction,
    grid_depth: u32,
) -> Result<TvBound> {
    let numerator = expectation(law, g)?.abs();
    let grid = simplex_grid(law.k(), grid_depth)?;
    let denominator = grid
        .iter()
        .map(|theta| {
            product_weights(theta, law.n())
                .iter()
                .map(|(t, p)| p * g.value(t))
                .sum::<Rational>()
                .abs()
        })
        .max()
        .unwrap_or_else(Rational::zero);
    let value = if denominator.is_zero() {
        if numerator.is_zero() {
            Some(Rational::zero())
        } else {
            None
        }
    } else {
        Some(&numerator / &denominator)
    };
    Ok(TvBound {
        numerator,
        denominator,
        value,
        grid_depth,
        grid_approximate: true,
    })
}
