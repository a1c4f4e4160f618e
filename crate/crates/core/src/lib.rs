//! Simulation and exact-combinatorics toolkit for the global fluctuations of
//! Wigner eigenvector overlaps.
//!
//! For a Wigner matrix `X = U diag(λ) U*` the crate builds the bivariate field
//!
//! ```text
//! B(s, t) = sqrt(β/2) · Σ_{i ≤ ns, j ≤ nt} (|u_ij|² − 1/n)
//! ```
//!
//! and compares its Monte Carlo statistics against limiting covariances that
//! are computed exactly, in rational arithmetic, by enumerating set partitions
//! of closed trace-expansion paths.
//!
//! Module map:
//!
//! * [`atoms`] entry distributions with exact joint-moment oracles,
//! * [`matrices`] Wigner construction, Hermitian eigensolver, Haar sampling,
//! * [`process`] prefix-sum realization of `B`, increments, jumps, signed measures,
//! * [`spectral_stats`] weighted trace statistics computed by two routes,
//! * [`combinatorics`] partition calculus, finite-n oracle, Weingarten values,
//! * [`montecarlo`] reproducible trial harness and estimators,
//! * [`cli`] the `wigner-lab` command implementations.

pub mod atoms;
pub mod cli;
pub mod combinatorics;
pub mod config;
pub mod error;
pub mod linalg;
pub mod matrices;
pub mod montecarlo;
pub mod process;
pub mod rational;
pub mod rng;
pub mod spectral_stats;

pub use atoms::{AtomKind, AtomSpec, Moment};
pub use error::{Error, Result};
pub use matrices::{EnsembleSpec, Hermitian, SpectralDecomposition};
pub use process::BridgeGrid;
pub use rational::Rational;
pub use rng::RngStream;
