//! Exact partition calculus for the limiting covariances of weighted trace
//! statistics, the finite-n enumeration oracle and Haar second moments.
//!
//! Two closed paths of lengths `k1`, `k2` visit matrix indices; grouping the
//! visited positions by equal index gives a set partition `π`, and the
//! limiting covariance is
//!
//! ```text
//! C(s1, s2) = Σ_{π, |π| = (k1+k2)/2} s_π · (E[P₁P₂] − E[P₁]E[P₂])
//! ```
//!
//! where `P_ℓ` is the product of entries along path `ℓ` and `s_π` is the
//! share of admissible starting indices.

mod covariance;
mod finite_n;
mod partitions;
mod terms;
mod weingarten;

pub use covariance::{
    centered_coefficients, limit_cov, limit_cov_centered, limit_cov_trace, wick_moment, CenteredCovariance, TraceLine,
};
pub use finite_n::{
    expected_diag_power, finite_n_cov, finite_n_cov_trace_centered, ScaledExact, DIAG_POWER_MAX_K, FINITE_N_MAX_N, FINITE_N_MAX_TOTAL,
};
pub use partitions::{canonical_labels, for_each_partition};
pub use terms::{
    enumerate_terms, for_each_term, EdgeUse, GraphClass, IndexSetE, PartitionTerm, SWeight, MAX_TOTAL_LENGTH,
};
pub use weingarten::{haar_pair_moment, weingarten, IndexPattern, Perm2};
