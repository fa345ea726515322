//! Exchangeable laws stored by type-class weight, urn measures and the
//! triangular inversion that expresses a uniform type-class law through
//! urn measures of a larger urn.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::typespace::{binomial, multiset_count, sub_types, Alphabet, TypeSpace, TypeVector};
use crate::Rational;

/// An exchangeable probability law on `S^n`.
///
/// `weights[mu]` is the total probability of the type class `S^n(mu)`; every
/// sequence in that class has probability `weights[mu] / |S^n(mu)|`.
/// Zero weights are not stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExchangeableLaw {
    alphabet: Alphabet,
    n: u32,
    weights: BTreeMap<TypeVector, Rational>,
}

impl ExchangeableLaw {
    /// Validates masses, nonnegativity and normalization.
    pub fn new(
        alphabet: Alphabet,
        n: u32,
        weights: impl IntoIterator<Item = (TypeVector, Rational)>,
    ) -> Result<Self> {
        let mut map = BTreeMap::new();
        let mut total = Rational::zero();
        for (t, w) in weights {
            check_type(&alphabet, &t, n)?;
            if w.is_negative() {
                return Err(Error::input(format!("negative weight {w} at type {t}")));
            }
            total += &w;
            if w.is_zero() {
                continue;
            }
            if map.insert(t.clone(), w).is_some() {
                return Err(Error::input(format!("type {t} listed twice")));
            }
        }
        if !total.is_one() {
            return Err(Error::input(format!("weights sum to {total}, not 1")));
        }
        Ok(ExchangeableLaw {
            alphabet,
            n,
            weights: map,
        })
    }

    /// All mass on one type class.
    pub fn uniform_on_class(alphabet: Alphabet, mu: TypeVector) -> Result<Self> {
        let n = mu.mass();
        Self::new(alphabet, n, [(mu, Rational::one())])
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn k(&self) -> usize {
        self.alphabet.len()
    }

    /// Nonzero class weights.
    pub fn weights(&self) -> &BTreeMap<TypeVector, Rational> {
        &self.weights
    }

    pub fn weight(&self, t: &TypeVector) -> Rational {
        self.weights.get(t).cloned().unwrap_or_else(Rational::zero)
    }

    /// Probability of any single sequence of type `t`.
    pub fn point_probability(&self, t: &TypeVector) -> Rational {
        let count = BigInt::from(multiset_count(t));
        self.weight(t) / Rational::from_integer(count)
    }

    /// Law of the first `m` coordinates.
    pub fn marginal(&self, m: u32) -> Result<ExchangeableLaw> {
        if m > self.n {
            return Err(Error::input(format!(
                "cannot marginalize a law on S^{} to length {m}",
                self.n
            )));
        }
        let mut out: BTreeMap<TypeVector, Rational> = BTreeMap::new();
        for (nu, w) in &self.weights {
            for kappa in sub_types(nu, m) {
                let a = urn_coefficient(nu, &kappa)?;
                *out.entry(kappa).or_insert_with(Rational::zero) += a * w;
            }
        }
        Ok(ExchangeableLaw {
            alphabet: self.alphabet.clone(),
            n: m,
            weights: out.into_iter().filter(|(_, w)| !w.is_zero()).collect(),
        })
    }

    /// Class weights as a dense vector over `space`.
    pub fn dense(&self, space: &TypeSpace) -> Vec<Rational> {
        space.types().iter().map(|t| self.weight(t)).collect()
    }
}

pub(crate) fn check_type(alphabet: &Alphabet, t: &TypeVector, mass: u32) -> Result<()> {
    if t.k() != alphabet.len() {
        return Err(Error::input(format!(
            "type {t} has {} counts, alphabet has {} symbols",
            t.k(),
            alphabet.len()
        )));
    }
    if t.mass() != mass {
        return Err(Error::input(format!(
            "type {t} has mass {}, expected {mass}",
            t.mass()
        )));
    }
    Ok(())
}

/// Probability that `n` draws without replacement from the urn `nu` have
/// type `mu`: `prod_b C(nu_b, mu_b) / C(N, n)`, zero unless `mu <= nu`.
pub fn urn_coefficient(nu: &TypeVector, mu: &TypeVector) -> Result<Rational> {
    if nu.k() != mu.k() {
        return Err(Error::input(format!(
            "types {nu} and {mu} live on different alphabets"
        )));
    }
    let (big_n, n) = (nu.mass(), mu.mass());
    if n > big_n {
        return Err(Error::input(format!(
            "cannot draw {n} balls from an urn of {big_n}"
        )));
    }
    if !mu.le(nu) {
        return Ok(Rational::zero());
    }
    let numer = nu
        .counts()
        .iter()
        .zip(mu.counts())
        .fold(num_bigint::BigUint::one(), |acc, (&v, &m)| acc * binomial(v, m));
    Ok(Rational::new(
        BigInt::from(numer),
        BigInt::from(binomial(big_n, n)),
    ))
}

/// Type law of `n` ordered draws without replacement from the urn `nu`
/// (multivariate hypergeometric).
pub fn urn_measure(alphabet: &Alphabet, nu: &TypeVector, n: u32) -> Result<ExchangeableLaw> {
    check_type(alphabet, nu, nu.mass())?;
    if n > nu.mass() {
        return Err(Error::input(format!(
            "urn of {} balls cannot produce {n} draws",
            nu.mass()
        )));
    }
    let mut weights = BTreeMap::new();
    for mu in sub_types(nu, n) {
        let a = urn_coefficient(nu, &mu)?;
        weights.insert(mu, a);
    }
    Ok(ExchangeableLaw {
        alphabet: alphabet.clone(),
        n,
        weights,
    })
}

/// Multinomial type law of `n` i.i.d. draws from `theta`.
pub fn product_law(alphabet: &Alphabet, theta: &[Rational], n: u32) -> Result<ExchangeableLaw> {
    check_probability_vector(alphabet, theta)?;
    let weights = product_weights(theta, n);
    Ok(ExchangeableLaw {
        alphabet: alphabet.clone(),
        n,
        weights,
    })
}

pub(crate) fn check_probability_vector(alphabet: &Alphabet, theta: &[Rational]) -> Result<()> {
    if theta.len() != alphabet.len() {
        return Err(Error::input(format!(
            "probability vector has {} entries, alphabet has {}",
            theta.len(),
            alphabet.len()
        )));
    }
    if theta.iter().any(Signed::is_negative) {
        return Err(Error::input("probability vector has a negative entry"));
    }
    let total: Rational = theta.iter().sum();
    if !total.is_one() {
        return Err(Error::input(format!(
            "probability vector sums to {total}, not 1"
        )));
    }
    Ok(())
}

/// Nonzero multinomial class weights; `theta` is assumed valid.
pub(crate) fn product_weights(theta: &[Rational], n: u32) -> BTreeMap<TypeVector, Rational> {
    // only symbols with positive probability can appear
    let support: Vec<usize> = (0..theta.len()).filter(|&a| !theta[a].is_zero()).collect();
    let mut out = BTreeMap::new();
    for sub in crate::typespace::enumerate_types_k(support.len(), n) {
        let mut counts = vec![0u32; theta.len()];
        let mut p = Rational::one();
        for (&a, &c) in support.iter().zip(sub.counts()) {
            counts[a] = c;
            p *= num_traits::pow(theta[a].clone(), c as usize);
        }
        let t = TypeVector::new(counts);
        p *= Rational::from_integer(BigInt::from(multiset_count(&t)));
        out.insert(t, p);
    }
    out
}

/// Coefficients `c(mu, nu)` with `u^n_{n,mu} = sum_nu c(mu, nu) u^N_{n,nu}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InversionTable {
    pub mu: TypeVector,
    pub big_n: u32,
    pub coeffs: BTreeMap<TypeVector, Rational>,
    /// `sum_nu |c(mu, nu)|`
    pub l1: Rational,
}

/// Triangular inversion of the urn matrix restricted to the support of `mu`.
///
/// Types `lambda` of mass `n` on the support `T = {a_1 < ... < a_t}` of `mu`
/// are lifted to `lambda + (N - n) delta_{a_t}`. The matrix
/// `A[lambda][kappa] = a(lambda^N, kappa)` is lower triangular in the
/// lexicographic order with a positive diagonal, so the row vector `c`
/// with `c A = e_mu` is found by substitution from the largest type down.
pub fn invert_urn(mu: &TypeVector, big_n: u32) -> Result<InversionTable> {
    let n = mu.mass();
    if n > big_n {
        return Err(Error::input(format!(
            "cannot invert to a smaller urn: n = {n} > N = {big_n}"
        )));
    }
    let k = mu.k();
    if k == 0 {
        return Err(Error::input("type over an empty alphabet"));
    }
    let support = mu.support();
    if support.is_empty() {
        // n = 0: every urn measure is the unit mass on the empty sequence
        let nu = TypeVector::point(k, 0, big_n);
        return Ok(InversionTable {
            mu: mu.clone(),
            big_n,
            coeffs: BTreeMap::from([(nu, Rational::one())]),
            l1: Rational::one(),
        });
    }
    let last = *support.last().unwrap_or(&0);
    let embed = |lambda: &TypeVector| {
        let mut counts = vec![0u32; k];
        for (&a, &c) in support.iter().zip(lambda.counts()) {
            counts[a] = c;
        }
        TypeVector::new(counts)
    };
    let local = crate::typespace::enumerate_types_k(support.len(), n);
    let embedded: Vec<TypeVector> = local.iter().map(embed).collect();
    let lifted: Vec<TypeVector> = embedded
        .iter()
        .map(|t| {
            let mut counts = t.counts().to_vec();
            counts[last] += big_n - n;
            TypeVector::new(counts)
        })
        .collect();

    let size = local.len();
    let mut matrix = vec![vec![Rational::zero(); size]; size];
    for (row, nu) in lifted.iter().enumerate() {
        for (col, kappa) in embedded.iter().enumerate() {
            let a = urn_coefficient(nu, kappa)?;
            if col > row && !a.is_zero() {
                return Err(Error::Internal(format!(
                    "urn matrix not lower triangular at ({nu}, {kappa})"
                )));
            }
            matrix[row][col] = a;
        }
        if !matrix[row][row].is_positive() {
            return Err(Error::Internal(format!(
                "zero diagonal in urn matrix at {nu}"
            )));
        }
    }

    let target = embedded
        .iter()
        .position(|t| t == mu)
        .ok_or_else(|| Error::Internal(format!("{mu} missing from its own support types")))?;
    let mut c = vec![Rational::zero(); size];
    for col in (0..size).rev() {
        let mut rhs = if col == target {
            Rational::one()
        } else {
            Rational::zero()
        };
        for row in col + 1..size {
            if !c[row].is_zero() {
                rhs -= &c[row] * &matrix[row][col];
            }
        }
        c[col] = rhs / &matrix[col][col];
    }

    let mut coeffs = BTreeMap::new();
    let mut l1 = Rational::zero();
    for (nu, ci) in lifted.into_iter().zip(c) {
        if !ci.is_zero() {
            l1 += ci.abs();
            coeffs.insert(nu, ci);
        }
    }
    Ok(InversionTable {
        mu: mu.clone(),
        big_n,
        coeffs,
        l1,
    })
}

/// Exact check that `sum_nu coeffs[nu] * u^N_{n,nu}` equals `u^n_{n,mu}`.
pub fn reconstruct_check(table: &InversionTable) -> bool {
    let n = table.mu.mass();
    let mut acc: BTreeMap<TypeVector, Rational> = BTreeMap::new();
    for (nu, c) in &table.coeffs {
        if nu.k() != table.mu.k() || nu.mass() != table.big_n {
            return false;
        }
        for kappa in sub_types(nu, n) {
            let Ok(a) = urn_coefficient(nu, &kappa) else {
                return false;
            };
            *acc.entry(kappa).or_insert_with(Rational::zero) += a * c;
        }
    }
    acc.iter().all(|(kappa, v)| {
        if *kappa == table.mu {
            v.is_one()
        } else {
            v.is_zero()
        }
    }) && acc.get(&table.mu).is_some_and(One::is_one)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn tv(c: &[u32]) -> TypeVector {
        TypeVector::new(c.to_vec())
    }

    fn ab() -> Alphabet {
        Alphabet::new(["a", "b"]).unwrap()
    }

    #[test]
    fn urn_coefficient_examples() {
        assert_eq!(urn_coefficient(&tv(&[2, 1]), &tv(&[1, 1])).unwrap(), ratio(2, 3));
        assert_eq!(urn_coefficient(&tv(&[3, 0]), &tv(&[2, 0])).unwrap(), ratio(1, 1));
        assert_eq!(urn_coefficient(&tv(&[3, 0]), &tv(&[1, 1])).unwrap(), ratio(0, 1));
        assert!(urn_coefficient(&tv(&[1, 0]), &tv(&[1, 1])).is_err());
        assert!(urn_coefficient(&tv(&[1, 0, 0]), &tv(&[1, 0])).is_err());
    }

    #[test]
    fn urn_measure_two_two() {
        let law = urn_measure(&ab(), &tv(&[2, 2]), 2).unwrap();
        assert_eq!(law.weight(&tv(&[2, 0])), ratio(1, 6));
        assert_eq!(law.weight(&tv(&[1, 1])), ratio(4, 6));
        assert_eq!(law.weight(&tv(&[0, 2])), ratio(1, 6));
    }

    #[test]
    fn urn_measure_full_draw_is_the_class() {
        let nu = tv(&[3, 1]);
        let law = urn_measure(&ab(), &nu, 4).unwrap();
        assert_eq!(law.weights().len(), 1);
        assert_eq!(law.weight(&nu), ratio(1, 1));
        let single = urn_measure(&ab(), &tv(&[5, 0]), 3).unwrap();
        assert_eq!(single.weight(&tv(&[3, 0])), ratio(1, 1));
        assert!(urn_measure(&ab(), &nu, 5).is_err());
    }

    #[test]
    fn product_law_examples() {
        let p = product_law(&ab(), &[ratio(1, 1), ratio(0, 1)], 3).unwrap();
        assert_eq!(p.weights().len(), 1);
        assert_eq!(p.weight(&tv(&[3, 0])), ratio(1, 1));
        let half = product_law(&ab(), &[ratio(1, 2), ratio(1, 2)], 2).unwrap();
        assert_eq!(half.weight(&tv(&[2, 0])), ratio(1, 4));
        assert_eq!(half.weight(&tv(&[1, 1])), ratio(1, 2));
        assert_eq!(half.weight(&tv(&[0, 2])), ratio(1, 4));
        let third = product_law(&ab(), &[ratio(1, 3), ratio(2, 3)], 2).unwrap();
        assert_eq!(third.weight(&tv(&[2, 0])), ratio(1, 9));
        assert_eq!(third.weight(&tv(&[1, 1])), ratio(4, 9));
        assert_eq!(third.weight(&tv(&[0, 2])), ratio(4, 9));
        assert!(product_law(&ab(), &[ratio(1, 2), ratio(1, 3)], 2).is_err());
        assert!(product_law(&ab(), &[ratio(3, 2), ratio(-1, 2)], 2).is_err());
    }

    #[test]
    fn law_validation() {
        assert!(ExchangeableLaw::new(ab(), 2, [(tv(&[1, 1]), ratio(1, 2))]).is_err());
        assert!(ExchangeableLaw::new(ab(), 2, [(tv(&[1, 2]), ratio(1, 1))]).is_err());
        assert!(ExchangeableLaw::new(
            ab(),
            2,
            [(tv(&[1, 1]), ratio(3, 2)), (tv(&[2, 0]), ratio(-1, 2))]
        )
        .is_err());
        let law = ExchangeableLaw::new(
            ab(),
            2,
            [(tv(&[1, 1]), ratio(1, 1)), (tv(&[2, 0]), ratio(0, 1))],
        )
        .unwrap();
        assert_eq!(law.weights().len(), 1);
        assert_eq!(law.point_probability(&tv(&[1, 1])), ratio(1, 2));
    }

    #[test]
    fn single_support_inversion() {
        let table = invert_urn(&tv(&[0, 3]), 7).unwrap();
        assert_eq!(
            table.coeffs,
            BTreeMap::from([(tv(&[0, 7]), ratio(1, 1))])
        );
        assert!(reconstruct_check(&table));
    }

    #[test]
    fn small_inversion_by_hand() {
        // Support {a,b}; lifted urns (0,3), (1,2), (2,1).
        // u^2_{(1,1)} = c0 u^3_{(0,3)} + c1 u^3_{(1,2)} + c2 u^3_{(2,1)}
        // (2,0): c2/3 = 0; (1,1): 2c1/3 + 2c2/3 = 1; (0,2): c0 + c1/3 = 0.
        let table = invert_urn(&tv(&[1, 1]), 3).unwrap();
        assert_eq!(
            table.coeffs,
            BTreeMap::from([(tv(&[0, 3]), ratio(-1, 2)), (tv(&[1, 2]), ratio(3, 2))])
        );
        assert_eq!(table.l1, ratio(2, 1));
        assert!(reconstruct_check(&table));
    }

    #[test]
    fn perturbed_table_fails() {
        let mut table = invert_urn(&tv(&[1, 1, 1]), 5).unwrap();
        assert!(reconstruct_check(&table));
        let first = table.coeffs.keys().next().unwrap().clone();
        *table.coeffs.get_mut(&first).unwrap() += ratio(1, 1000);
        assert!(!reconstruct_check(&table));
    }

    #[test]
    fn zero_mass_inversion() {
        let table = invert_urn(&tv(&[0, 0]), 3).unwrap();
        assert!(reconstruct_check(&table));
        assert!(invert_urn(&tv(&[2, 2]), 3).is_err());
    }

    #[test]
    fn marginal_of_urn_measure_is_smaller_urn_measure() {
        let abc = Alphabet::new(["a", "b", "c"]).unwrap();
        let nu = tv(&[2, 3, 1]);
        let law = urn_measure(&abc, &nu, 4).unwrap();
        assert_eq!(law.marginal(2).unwrap(), urn_measure(&abc, &nu, 2).unwrap());
        assert!(law.marginal(5).is_err());
    }
}
