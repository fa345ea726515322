//! Exact finite exchangeability.
//!
//! Decides whether an exchangeable law on `S^n` (finite `S`) is the
//! `n`-marginal of an exchangeable law on `S^N`, computes the norm of the
//! extending functional `U^N_n g -> E g(X_1, ..., X_n)`, probes infinite
//! extendibility through mixtures of product laws, and finds signed
//! mixtures of product laws reproducing a law. All arithmetic is exact and
//! every verdict carries a certificate that can be checked independently.

pub mod cap;
pub mod corpus;
pub mod error;
pub mod extend;
pub mod json;
pub mod lp;
pub mod measures;
pub mod oracle;
pub mod rational;
pub mod represent;
pub mod scalar;
pub mod symmetrize;
pub mod typespace;

pub use error::{Error, Result};
pub use scalar::Field;

/// Exact arbitrary-precision rational, always in lowest terms.
pub type Rational = num_rational::BigRational;

pub type LinearProgram = lp::LinearProgram<Rational>;
pub type LpOutcome = lp::LpOutcome<Rational>;

pub use measures::{
    invert_urn, product_law, reconstruct_check, urn_coefficient, urn_measure, ExchangeableLaw,
    InversionTable,
};
pub use corpus::{appendix_a1_law, gnedin_discretization, urn_without_replacement};
pub use extend::{
    check_extendible, corollary_criterion, covariance_bound, norm_en, probe_infinite, ExtendReport,
    InfiniteOutcome, InfiniteReport, Verdict,
};
pub use represent::{signed_mixture, tv_lower_bound, Atom, SignedMixture};
pub use symmetrize::{apply_u, expectation, kernel_check, sup_norm, SymmetricFunction};
pub use typespace::{enumerate_types, multiset_count, type_of, Alphabet, TypeSpace, TypeVector};
