//! Symmetric functions on `S^m` and the symmetrization operator `U^N_n`.
//!
//! A symmetric function is stored by its value on each type class. For a
//! function `g` on `S^n`, `(U^N_n g)(x)` averages `g` over all ordered
//! selections of `n` of the `N` coordinates of `x`; on type classes this is
//! `sum_mu a(nu, mu) g(mu)`, the integral of `g` against the urn measure.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::measures::{check_type, urn_coefficient, ExchangeableLaw};
use crate::typespace::{enumerate_types, sub_types, Alphabet, TypeSpace, TypeVector};
use crate::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetricFunction {
    alphabet: Alphabet,
    m: u32,
    // zero values are not stored
    values: BTreeMap<TypeVector, Rational>,
}

impl SymmetricFunction {
    pub fn new(
        alphabet: Alphabet,
        m: u32,
        values: impl IntoIterator<Item = (TypeVector, Rational)>,
    ) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (t, v) in values {
            check_type(&alphabet, &t, m)?;
            if map.contains_key(&t) {
                return Err(Error::input(format!("type {t} listed twice")));
            }
            if !v.is_zero() {
                map.insert(t, v);
            }
        }
        Ok(SymmetricFunction {
            alphabet,
            m,
            values: map,
        })
    }

    pub fn constant(alphabet: Alphabet, m: u32, value: Rational) -> Self {
        let types = enumerate_types(&alphabet, m);
        let values = if value.is_zero() {
            BTreeMap::new()
        } else {
            types.into_iter().map(|t| (t, value.clone())).collect()
        };
        SymmetricFunction {
            alphabet,
            m,
            values,
        }
    }

    pub fn zero(alphabet: Alphabet, m: u32) -> Self {
        SymmetricFunction {
            alphabet,
            m,
            values: BTreeMap::new(),
        }
    }

    pub fn indicator(alphabet: Alphabet, t: TypeVector) -> Result<Self> {
        let m = t.mass();
        Self::new(alphabet, m, [(t, Rational::from_integer(1.into()))])
    }

    /// Values listed densely over `space`.
    pub fn from_dense(alphabet: Alphabet, space: &TypeSpace, values: Vec<Rational>) -> Result<Self> {
        if values.len() != space.len() || space.k() != alphabet.len() {
            return Err(Error::input("dense values do not match the type space"));
        }
        let m = space.mass();
        Self::new(alphabet, m, space.types().iter().cloned().zip(values))
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// Nonzero values.
    pub fn values(&self) -> &BTreeMap<TypeVector, Rational> {
        &self.values
    }

    pub fn value(&self, t: &TypeVector) -> Rational {
        self.values.get(t).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    pub fn scale(&self, factor: &Rational) -> SymmetricFunction {
        let values = if factor.is_zero() {
            BTreeMap::new()
        } else {
            self.values
                .iter()
                .map(|(t, v)| (t.clone(), v * factor))
                .collect()
        };
        SymmetricFunction {
            alphabet: self.alphabet.clone(),
            m: self.m,
            values,
        }
    }

    /// `self + c` pointwise.
    pub fn shift(&self, c: &Rational) -> SymmetricFunction {
        let values = enumerate_types(&self.alphabet, self.m)
            .into_iter()
            .filter_map(|t| {
                let v = self.value(&t) + c;
                (!v.is_zero()).then_some((t, v))
            })
            .collect();
        SymmetricFunction {
            alphabet: self.alphabet.clone(),
            m: self.m,
            values,
        }
    }

    /// Smallest and largest value over all types.
    pub fn range(&self) -> (Rational, Rational) {
        let all = enumerate_types(&self.alphabet, self.m);
        let mut vals = all.iter().map(|t| self.value(t));
        let first = vals.next().unwrap_or_else(Rational::zero);
        vals.fold((first.clone(), first), |(lo, hi), v| {
            (lo.min(v.clone()), hi.max(v))
        })
    }
}

/// `U^N_n g` as a symmetric function on `S^N`.
pub fn apply_u(g: &SymmetricFunction, big_n: u32) -> Result<SymmetricFunction> {
    let n = g.m;
    if big_n < n {
        return Err(Error::input(format!(
            "symmetrization target N = {big_n} is below n = {n}"
        )));
    }
    let mut values = BTreeMap::new();
    for nu in enumerate_types(&g.alphabet, big_n) {
        let mut acc = Rational::zero();
        for mu in sub_types(&nu, n) {
            if let Some(v) = g.values.get(&mu) {
                acc += urn_coefficient(&nu, &mu)? * v;
            }
        }
        if !acc.is_zero() {
            values.insert(nu, acc);
        }
    }
    Ok(SymmetricFunction {
        alphabet: g.alphabet.clone(),
        m: big_n,
        values,
    })
}

/// Max over types of `|f|`.
pub fn sup_norm(f: &SymmetricFunction) -> Rational {
    f.values
        .values()
        .map(Signed::abs)
        .max()
        .unwrap_or_else(Rational::zero)
}

/// `E g(X_1, ..., X_n)` under `law`.
pub fn expectation(law: &ExchangeableLaw, g: &SymmetricFunction) -> Result<Rational> {
    if law.alphabet() != g.alphabet() {
        return Err(Error::input("law and function use different alphabets"));
    }
    if law.n() != g.m() {
        return Err(Error::input(format!(
            "law lives on S^{} but function on S^{}",
            law.n(),
            g.m()
        )));
    }
    Ok(law
        .weights()
        .iter()
        .map(|(t, w)| w * g.value(t))
        .sum())
}

/// True iff `U^N_n g` vanishes identically.
pub fn kernel_check(g: &SymmetricFunction, big_n: u32) -> Result<bool> {
    Ok(apply_u(g, big_n)?.is_zero())
}

/// Rank of the urn matrix `[a(nu, mu)]` with rows `nu` of mass `N` and
/// columns `mu` of mass `n`, by exact elimination.
pub fn urn_matrix_rank(k: usize, n: u32, big_n: u32) -> Result<usize> {
    if big_n < n {
        return Err(Error::input("urn matrix needs N >= n"));
    }
    let cols = TypeSpace::new(k, n);
    let rows = TypeSpace::new(k, big_n);
    let mut m: Vec<Vec<Rational>> = rows
        .types()
        .iter()
        .map(|nu| {
            cols.types()
                .iter()
                .map(|mu| urn_coefficient(nu, mu))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    Ok(rank(&mut m))
}

pub(crate) fn rank(m: &mut [Vec<Rational>]) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let pivot = m[r][c].clone();
        for i in r + 1..rows {
            if m[i][c].is_zero() {
                continue;
            }
            let f = &m[i][c] / &pivot;
            for j in c..cols {
                let delta = &f * &m[r][j];
                m[i][j] -= delta;
            }
        }
        r += 1;
        if r == rows {
            break;
        }
    }
    r
}

/// `true` when `apply_u(., N)` is injective on symmetric functions of mass `n`.
pub fn has_trivial_kernel(k: usize, n: u32, big_n: u32) -> Result<bool> {
    Ok(urn_matrix_rank(k, n, big_n)? == TypeSpace::new(k, n).len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::{product_law, urn_measure};
    use crate::rational::{from_i64, ratio};

    fn tv(c: &[u32]) -> TypeVector {
        TypeVector::new(c.to_vec())
    }

    fn ab() -> Alphabet {
        Alphabet::new(["a", "b"]).unwrap()
    }

    fn hat() -> SymmetricFunction {
        SymmetricFunction::new(
            ab(),
            2,
            [
                (tv(&[2, 0]), from_i64(-1)),
                (tv(&[1, 1]), from_i64(2)),
                (tv(&[0, 2]), from_i64(-1)),
            ],
        )
        .unwrap()
    }

    #[test]
    fn constants_are_preserved() {
        let one = SymmetricFunction::constant(ab(), 2, from_i64(1));
        assert_eq!(
            apply_u(&one, 5).unwrap(),
            SymmetricFunction::constant(ab(), 5, from_i64(1))
        );
    }

    #[test]
    fn hat_symmetrized_to_three() {
        // a((3,0),(2,0)) = 1; a((2,1),.) = (1/3, 2/3, 0); mirror for the rest
        let u = apply_u(&hat(), 3).unwrap();
        assert_eq!(u.value(&tv(&[3, 0])), from_i64(-1));
        assert_eq!(u.value(&tv(&[2, 1])), from_i64(1));
        assert_eq!(u.value(&tv(&[1, 2])), from_i64(1));
        assert_eq!(u.value(&tv(&[0, 3])), from_i64(-1));
        assert_eq!(sup_norm(&u), from_i64(1));
    }

    #[test]
    fn composition_law() {
        let g = hat();
        let direct = apply_u(&g, 6).unwrap();
        let staged = apply_u(&apply_u(&g, 4).unwrap(), 6).unwrap();
        assert_eq!(direct, staged);
    }

    #[test]
    fn sup_norms() {
        assert_eq!(sup_norm(&SymmetricFunction::zero(ab(), 3)), from_i64(0));
        assert_eq!(sup_norm(&hat()), from_i64(2));
    }

    #[test]
    fn expectations() {
        let one = SymmetricFunction::constant(ab(), 2, from_i64(1));
        let p = product_law(&ab(), &[ratio(1, 2), ratio(1, 2)], 2).unwrap();
        assert_eq!(expectation(&p, &one).unwrap(), from_i64(1));
        let ind = SymmetricFunction::indicator(ab(), tv(&[1, 1])).unwrap();
        assert_eq!(expectation(&p, &ind).unwrap(), ratio(1, 2));
        let urn = ExchangeableLaw::uniform_on_class(ab(), tv(&[1, 1])).unwrap();
        assert_eq!(expectation(&urn, &hat()).unwrap(), from_i64(2));
        let p3 = product_law(&ab(), &[ratio(1, 2), ratio(1, 2)], 3).unwrap();
        assert!(expectation(&p3, &hat()).is_err());
    }

    #[test]
    fn adjoint_identity() {
        let nu = tv(&[3, 2]);
        let law = urn_measure(&ab(), &nu, 2).unwrap();
        assert_eq!(
            expectation(&law, &hat()).unwrap(),
            apply_u(&hat(), 5).unwrap().value(&nu)
        );
    }

    #[test]
    fn kernel_examples() {
        assert!(kernel_check(&SymmetricFunction::zero(ab(), 2), 4).unwrap());
        assert!(!kernel_check(&hat(), 4).unwrap());
        let ind = SymmetricFunction::indicator(ab(), tv(&[2, 0])).unwrap();
        assert!(!kernel_check(&ind, 3).unwrap());
    }

    #[test]
    fn urn_matrix_full_column_rank() {
        for k in 1..=3 {
            for n in 0..=3 {
                for big_n in n..=6 {
                    assert!(has_trivial_kernel(k, n, big_n).unwrap(), "k={k} n={n} N={big_n}");
                }
            }
        }
    }

    #[test]
    fn shift_and_range() {
        let g = hat().shift(&from_i64(1));
        assert_eq!(g.value(&tv(&[2, 0])), from_i64(0));
        assert_eq!(g.range(), (from_i64(0), from_i64(3)));
    }
}
