use thiserror::Error;

use crate::lp::FarkasCertificate;
use crate::Rational;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed or inconsistent input: mass mismatch, bad symbol index,
    /// non-probability vector, schema violation.
    #[error("invalid input: {0}")]
    Input(String),

    /// A problem exceeded the configured resource cap.
    #[error("capacity exceeded: {what} needs {size}, cap is {cap}")]
    Capacity {
        what: &'static str,
        size: u128,
        cap: u128,
    },

    /// No signed mixture over the product-law grids tried reproduces the law.
    #[error("no signed mixture found on grids up to depth {depth}")]
    Representation {
        depth: u32,
        certificate: Box<FarkasCertificate<Rational>>,
    },

    /// An internal consistency check failed. Always a bug.
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }
}
