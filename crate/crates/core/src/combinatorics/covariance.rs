//! Limiting covariances of the weighted trace statistics.

use num_traits::{One, Zero};

use super::terms::{for_each_term, GraphClass, MomentTable, PartitionTerm, SWeight};
use crate::atoms::AtomSpec;
use crate::error::{Error, Result};
use crate::rational::Rational;

/// `C(s1, s2) = min_coeff·min(s1,s2) + product_coeff·s1·s2`, the limit of
/// `E[T°(s1,k1) T°(s2,k2)]` where `T°` is centered by the ensemble mean.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CenteredCovariance {
    pub k1: usize,
    pub k2: usize,
    pub min_coeff: Rational,
    pub product_coeff: Rational,
}

impl CenteredCovariance {
    pub fn eval(&self, s1: &Rational, s2: &Rational) -> Rational {
        &self.min_coeff * s1.min(s2) + &self.product_coeff * s1 * s2
    }

    /// `C(s1,s2) − s2·C(s1,1) − s1·C(1,s2) + s1·s2·C(1,1)`.
    pub fn recombined(&self, s1: &Rational, s2: &Rational) -> Rational {
        let one = Rational::one();
        self.eval(s1, s2) - s2 * self.eval(s1, &one) - s1 * self.eval(&one, s2) + s1 * s2 * self.eval(&one, &one)
    }
}

fn check_time(s: &Rational) -> Result<()> {
    if s < &Rational::zero() || s > &Rational::one() {
        return Err(Error::InvalidArgument(format!("time {s} outside [0,1]")));
    }
    Ok(())
}

/// Sums the factor of every partition term, grouped by `s_π` shape.
pub fn centered_coefficients(k1: usize, k2: usize, diag: &AtomSpec, off: &AtomSpec) -> Result<CenteredCovariance> {
    let mut table = MomentTable::new(diag, off);
    let mut min_coeff = Rational::zero();
    let mut product_coeff = Rational::zero();
    for_each_term(k1, k2, |term| {
        let f = table.factor(&term)?;
        if !f.is_zero() {
            match term.weight {
                SWeight::Min => min_coeff += f,
                SWeight::Product => product_coeff += f,
            }
        }
        Ok(())
    })?;
    Ok(CenteredCovariance { k1, k2, min_coeff, product_coeff })
}

pub fn limit_cov_centered(
    k1: usize,
    k2: usize,
    s1: &Rational,
    s2: &Rational,
    diag: &AtomSpec,
    off: &AtomSpec,
) -> Result<Rational> {
    check_time(s1)?;
    check_time(s2)?;
    Ok(centered_coefficients(k1, k2, diag, off)?.eval(s1, s2))
}

/// Limiting `Cov(T(s1,k1), T(s2,k2))` for the statistic centered by its own
/// trace.
pub fn limit_cov(k1: usize, k2: usize, s1: &Rational, s2: &Rational, diag: &AtomSpec, off: &AtomSpec) -> Result<Rational> {
    check_time(s1)?;
    check_time(s2)?;
    Ok(centered_coefficients(k1, k2, diag, off)?.recombined(s1, s2))
}

/// One contributing term of a covariance.
#[derive(Debug, Clone)]
pub struct TraceLine {
    pub blocks: String,
    pub class: GraphClass,
    pub weight: SWeight,
    pub edges: usize,
    pub factor: Rational,
}

/// Terms with non-zero factor, in enumeration order.
pub fn limit_cov_trace(k1: usize, k2: usize, diag: &AtomSpec, off: &AtomSpec) -> Result<Vec<TraceLine>> {
    let mut table = MomentTable::new(diag, off);
    let mut lines = Vec::new();
    for_each_term(k1, k2, |term: PartitionTerm| {
        let factor = table.factor(&term)?;
        if !factor.is_zero() {
            lines.push(TraceLine {
                blocks: term.blocks_string(),
                class: term.class,
                weight: term.weight,
                edges: term.edges.len(),
                factor,
            });
        }
        Ok(())
    })?;
    Ok(lines)
}

/// Gaussian moment `E[Y₁⋯Y_p]` from the covariance matrix of `(Y₁,…,Y_p)`:
/// the sum over perfect matchings of the product of paired covariances.
pub fn wick_moment(cov: &[Vec<f64>]) -> f64 {
    let p = cov.len();
    if p % 2 == 1 {
        return 0.0;
    }
    let mut free: Vec<usize> = (0..p).collect();
    matchings(cov, &mut free)
}

fn matchings(cov: &[Vec<f64>], free: &mut Vec<usize>) -> f64 {
    if free.is_empty() {
        return 1.0;
    }
    let first = free.remove(0);
    let mut total = 0.0;
    for idx in 0..free.len() {
        let partner = free.remove(idx);
        total += cov[first][partner] * matchings(cov, free);
        free.insert(idx, partner);
    }
    free.insert(0, first);
    total
}
