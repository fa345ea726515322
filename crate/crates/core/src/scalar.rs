//! Scalar abstraction for the exact linear-programming kernel.
//!
//! Every algorithm in this crate needs an ordered field with exact
//! comparisons: pivot selection, certificate checks and the
//! extendibility verdicts are all decided by sign tests. Floating point
//! types therefore do not implement [`Field`].

use std::fmt::Debug;

use dashu_int::{IBig, UBig};
use dashu_ratio::RBig;
use num_bigint::{BigInt, BigUint};
use num_rational::{BigRational, Ratio};
use num_traits::{Num, Signed};

/// An exact ordered field.
pub trait Field: Num + Signed + Clone + Ord + Debug + Send + Sync + num_traits::ToPrimitive {
    /// Embed a machine integer.
    fn from_i64(value: i64) -> Self;

    /// Build `numer / denom`. Panics if `denom == 0`.
    fn ratio(numer: i64, denom: i64) -> Self {
        Self::from_i64(numer) / Self::from_i64(denom)
    }
}

impl Field for BigRational {
    fn from_i64(value: i64) -> Self {
        BigRational::from_integer(BigInt::from(value))
    }
}

/// Keeps small numerators and denominators inline, which makes it several
/// times faster than [`BigRational`] on the sizes seen in pivoting.
impl Field for RBig {
    fn from_i64(value: i64) -> Self {
        RBig::from(value)
    }
}

/// Fixed-width rationals. Overflow is not detected in release builds, so
/// this is only suitable for programs whose magnitudes are known to be small.
impl Field for Ratio<i128> {
    fn from_i64(value: i64) -> Self {
        Ratio::from_integer(i128::from(value))
    }
}

pub(crate) fn to_rbig(value: &BigRational) -> RBig {
    let numer = IBig::from_le_bytes(&value.numer().to_signed_bytes_le());
    let (_, denom) = value.denom().to_bytes_le();
    RBig::from_parts(numer, UBig::from_le_bytes(&denom))
}

pub(crate) fn from_rbig(value: &RBig) -> BigRational {
    let numer = BigInt::from_signed_bytes_le(&value.numerator().to_le_bytes());
    let denom = BigUint::from_bytes_le(&value.denominator().to_le_bytes());
    BigRational::new_raw(numer, denom.into())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ratio_reduces() {
        let half: BigRational = Field::ratio(3, 6);
        assert_eq!(half, BigRational::new(1.into(), 2.into()));
        let small: Ratio<i128> = Field::ratio(-4, 8);
        assert_eq!(small, Ratio::new(-1, 2));
    }

    #[test]
    fn rbig_round_trip() {
        for (p, q) in [(0, 1), (1, 1), (-1, 1), (255, 7), (-128, 3), (i64::MIN, 1), (i64::MAX, 12)] {
            let big = BigRational::new(p.into(), q.into()) * BigRational::from_integer(BigInt::from(1u64 << 40).pow(3));
            let back = from_rbig(&to_rbig(&big));
            assert_eq!(back, big);
            assert_eq!(to_rbig(&big), RBig::from_parts_signed(IBig::from(p) * (IBig::from(1u64 << 40)).pow(3), IBig::from(q)));
        }
    }
}
