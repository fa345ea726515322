//! Resource caps. Every enumeration or program that would exceed a cap is
//! refused with [`crate::Error::Capacity`] before any work is done.

/// Default cap on enumerated type spaces, grids and LP columns.
pub const DEFAULT_CAP: u128 = 50_000;

/// Environment variable overriding [`DEFAULT_CAP`].
pub const CAP_ENV: &str = "EXCHKIT_CAP";

/// Cap on LP rows, which bounds the size of the basis factorization.
pub const MAX_LP_ROWS: usize = 4_096;

/// Cap on simplex pivots per solve.
pub const MAX_PIVOTS: u64 = 2_000_000;

/// The cap in force: `EXCHKIT_CAP` when set to a positive integer, else the default.
pub fn resource_cap() -> u128 {
    std::env::var(CAP_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<u128>().ok())
        .filter(|&v| v > 0)
        .unwrap_or(DEFAULT_CAP)
}
