//! Line-up elections over metric spaces.
//!
//! A line-up election places `n` voters, `m` candidates, and `l <= m`
//! positions in a common metric space and asks for an injective matching
//! from positions to candidates minimizing the social cost
//! `sum_v sum_p [d(v, M(p)) + d(M(p), p)]`.
//!
//! The crate provides:
//!
//! * [`metric`] — instances, metric validation, cost functionals, and the
//!   two-candidate line embedding;
//! * [`ordinal`] — the ordinal information sets (voter preferences per
//!   position, position preferences over candidates);
//! * [`mechanisms`] — the deterministic voting rules, each consuming only
//!   its declared information set;
//! * [`exact`] — exact optimum computation, brute-force oracles, and the
//!   matching-transform machinery behind the `alpha + beta + 1` bound;
//! * [`adversary`] — an LP that computes worst-case distortion over all
//!   metrics consistent with an information set, plus the packaged
//!   lower-bound instance families;
//! * [`harness`] — seeded instance generation and experiment sweeps.
//!
//! Data-parallel loops (sweeps, LP batches) run on rayon when the default
//! `parallel` feature is enabled and fall back to sequential execution
//! otherwise; see [`par`].

pub mod adversary;
pub mod exact;
pub mod harness;
pub mod mechanisms;
pub mod metric;
pub mod ordinal;
pub mod par;

mod assignment;

pub use metric::{
    CostBreakdown, CpDistances, Matching, MetricInstance, PointId, PositionSpec, ValidationReport,
};

/// Relative tolerance for metric and cost comparisons.
pub const REL_TOL: f64 = 1e-9;
/// Absolute floor for tolerance computations near zero.
pub const ABS_TOL: f64 = 1e-12;

/// `a <= b` up to the crate-wide relative/absolute tolerance.
pub fn approx_le(a: f64, b: f64) -> bool {
    a <= b + comparison_tol(a, b)
}

/// `a == b` up to the crate-wide relative/absolute tolerance.
pub fn approx_eq(a: f64, b: f64) -> bool {
    (a - b).abs() <= comparison_tol(a, b)
}

fn comparison_tol(a: f64, b: f64) -> f64 {
    ABS_TOL.max(REL_TOL * a.abs().max(b.abs()))
}

/// Errors shared across the crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),
    #[error("inconsistent information set: {0}")]
    InconsistentInfo(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Ratio of two nonnegative costs with the degenerate-denominator
/// convention: `0/0 = 1` and `x/0 = +inf` for `x > 0`.
pub fn cost_ratio(numerator: f64, denominator: f64) -> f64 {
    if denominator == 0.0 {
        if numerator == 0.0 {
            1.0
        } else {
            f64::INFINITY
        }
    } else {
        numerator / denominator
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cost_ratio_conventions() {
        assert_eq!(cost_ratio(0.0, 0.0), 1.0);
        assert_eq!(cost_ratio(2.0, 0.0), f64::INFINITY);
        assert_eq!(cost_ratio(3.0, 2.0), 1.5);
    }

    #[test]
    fn tolerance_scales_with_magnitude() {
        assert!(approx_le(1.0 + 1e-10, 1.0));
        assert!(!approx_le(1.0 + 1e-6, 1.0));
        assert!(approx_eq(1e6, 1e6 * (1.0 + 1e-10)));
    }
}
