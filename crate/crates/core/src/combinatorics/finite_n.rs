//! Exact pre-limit expectations from entry moments, by direct enumeration of
//! index tuples. These serve as oracles for the limit engine.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use super::partitions::for_each_partition;
use crate::atoms::AtomSpec;
use crate::error::{Error, Result};
use crate::rational::{floor_scaled, Rational};

pub const FINITE_N_MAX_N: usize = 6;
pub const FINITE_N_MAX_TOTAL: usize = 8;
pub const DIAG_POWER_MAX_K: usize = 12;

/// The exact number `numerator · n^(−half_power/2)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScaledExact {
    pub numerator: Rational,
    pub n: usize,
    pub half_power: u32,
}

impl ScaledExact {
    pub fn value(&self) -> f64 {
        if let Some(r) = self.to_rational() {
            return r.to_f64().unwrap_or(f64::NAN);
        }
        self.numerator.to_f64().unwrap_or(f64::NAN) * (self.n as f64).powf(-(self.half_power as f64) / 2.0)
    }

    /// Exact value when the power of `n` is integral.
    pub fn to_rational(&self) -> Option<Rational> {
        if self.half_power % 2 == 1 {
            return None;
        }
        let scale = num_traits::pow(BigInt::from(self.n), (self.half_power / 2) as usize);
        Some(&self.numerator / Rational::from_integer(scale))
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }
}

/// Distinct matrix entries touched by a closed walk, keyed by `(row, col)`
/// with `row ≤ col`: counts of `x_rc` and of `conj(x_rc)`.
fn walk_entries(walk: impl Iterator<Item = (u8, u8)>, into: &mut BTreeMap<(u8, u8), (u32, u32)>) {
    for (i, j) in walk {
        let slot = into.entry((i.min(j), i.max(j))).or_insert((0, 0));
        if i <= j {
            slot.0 += 1;
        } else {
            slot.1 += 1;
        }
    }
}

fn entries_expectation(entries: &BTreeMap<(u8, u8), (u32, u32)>, diag: &AtomSpec, off: &AtomSpec) -> Result<Rational> {
    let mut acc = Rational::one();
    for (&(r, c), &(plain, conj)) in entries {
        let m = if r == c {
            diag.finite_moment(plain + conj, 0)?
        } else if off.is_complex() {
            off.finite_moment(plain, conj)?
        } else {
            off.finite_moment(plain + conj, 0)?
        };
        if m.is_zero() {
            return Ok(m);
        }
        acc *= m;
    }
    Ok(acc)
}

fn closed_walk(indices: &[u8]) -> impl Iterator<Item = (u8, u8)> + '_ {
    let k = indices.len();
    (0..k).map(move |m| (indices[m], indices[(m + 1) % k]))
}

/// Exact `E[T°(s1,k1)·T°(s2,k2)]` at size `n`, where
/// `T°(s,k) = Σ_{i ≤ ns} ((X^k)_ii − E[(X^k)_ii])`.
///
/// Every index tuple is visited; tuples are grouped by the relative order of
/// their values, which determines the expectation.
pub fn finite_n_cov(
    n: usize,
    k1: usize,
    k2: usize,
    s1: &Rational,
    s2: &Rational,
    diag: &AtomSpec,
    off: &AtomSpec,
) -> Result<ScaledExact> {
    if n == 0 || k1 == 0 || k2 == 0 {
        return Err(Error::InvalidArgument("n, k1 and k2 must be positive".into()));
    }
    if n > FINITE_N_MAX_N || k1 + k2 > FINITE_N_MAX_TOTAL {
        return Err(Error::SizeCap(format!(
            "finite-n enumeration needs n <= {FINITE_N_MAX_N} and k1 + k2 <= {FINITE_N_MAX_TOTAL}"
        )));
    }
    for s in [s1, s2] {
        if s < &Rational::zero() || s > &Rational::one() {
            return Err(Error::InvalidArgument(format!("time {s} outside [0,1]")));
        }
    }
    let len = k1 + k2;
    let half_power = len as u32;
    let limits: Vec<usize> = (0..len)
        .map(|p| match p {
            0 => floor_scaled(n, s1),
            p if p == k1 => floor_scaled(n, s2),
            _ => n,
        })
        .collect();
    if limits.contains(&0) {
        return Ok(ScaledExact { numerator: Rational::zero(), n, half_power });
    }

    let mut patterns: HashMap<u64, u64> = HashMap::new();
    let mut idx = vec![0usize; len];
    loop {
        let mask: u32 = idx.iter().fold(0, |m, &v| m | (1 << v));
        let key = idx.iter().enumerate().fold(0u64, |key, (p, &v)| {
            let rank = (mask & ((1u32 << v) - 1)).count_ones() as u64;
            key | (rank << (4 * p))
        });
        *patterns.entry(key).or_insert(0) += 1;

        // odometer
        let mut p = 0;
        loop {
            if p == len {
                return sum_patterns(&patterns, k1, k2, diag, off).map(|numerator| ScaledExact { numerator, n, half_power });
            }
            idx[p] += 1;
            if idx[p] < limits[p] {
                break;
            }
            idx[p] = 0;
            p += 1;
        }
    }
}

fn sum_patterns(patterns: &HashMap<u64, u64>, k1: usize, k2: usize, diag: &AtomSpec, off: &AtomSpec) -> Result<Rational> {
    let len = k1 + k2;
    let mut total = Rational::zero();
    for (&key, &count) in patterns {
        let ranks: Vec<u8> = (0..len).map(|p| ((key >> (4 * p)) & 0xF) as u8).collect();
        let (first, second) = ranks.split_at(k1);
        let mut e1 = BTreeMap::new();
        walk_entries(closed_walk(first), &mut e1);
        let mut e2 = BTreeMap::new();
        walk_entries(closed_walk(second), &mut e2);
        let mut both = e1.clone();
        walk_entries(closed_walk(second), &mut both);
        let cov = entries_expectation(&both, diag, off)?
            - entries_expectation(&e1, diag, off)? * entries_expectation(&e2, diag, off)?;
        total += cov * Rational::from_integer(BigInt::from(count));
    }
    Ok(total)
}

/// Exact `Cov(T(s1,k1), T(s2,k2))` at size `n` for the trace-centered
/// statistic `T(s,k) = Σ_{i ≤ ns}((X^k)_ii − Tr X^k / n)`, recombined from
/// [`finite_n_cov`] through `T(s) = T°(s) − (⌊ns⌋/n)·T°(1)`.
pub fn finite_n_cov_trace_centered(
    n: usize,
    k1: usize,
    k2: usize,
    s1: &Rational,
    s2: &Rational,
    diag: &AtomSpec,
    off: &AtomSpec,
) -> Result<ScaledExact> {
    let one = Rational::one();
    let c = |a: &Rational, b: &Rational| finite_n_cov(n, k1, k2, a, b, diag, off);
    let share = |s: &Rational| Rational::new(BigInt::from(floor_scaled(n, s)), BigInt::from(n));
    let (w1, w2) = (share(s1), share(s2));
    let numerator = c(s1, s2)?.numerator - &w2 * c(s1, &one)?.numerator - &w1 * c(&one, s2)?.numerator
        + &w1 * &w2 * c(&one, &one)?.numerator;
    Ok(ScaledExact { numerator, n, half_power: (k1 + k2) as u32 })
}

/// Exact `E[(X^k)_11]` at size `n`.
///
/// Walks `0 → i₁ → … → i_{k−1} → 0` are grouped by the partition of their
/// positions into equal indices; a partition with `B` blocks is realized by
/// `(n−1)(n−2)⋯(n−B+1)` index choices. Only partitions with at most
/// `k/2 + 1` blocks can have every entry repeated, so larger ones are skipped.
pub fn expected_diag_power(n: usize, k: usize, diag: &AtomSpec, off: &AtomSpec) -> Result<ScaledExact> {
    if n == 0 || k == 0 {
        return Err(Error::InvalidArgument("n and k must be positive".into()));
    }
    if k > DIAG_POWER_MAX_K {
        return Err(Error::OracleUnavailable(k as u32));
    }
    let mut total = Rational::zero();
    let mut failure = None;
    for blocks in 1..=(k / 2 + 1).min(n) {
        // labels are used as indices directly: position 0 sits in block 0
        let mut ways = BigInt::one();
        for t in 1..blocks {
            ways *= BigInt::from(n - t);
        }
        let ways = Rational::from_integer(ways);
        for_each_partition(k, Some(blocks), |labels, _| {
            if failure.is_some() {
                return;
            }
            let mut entries = BTreeMap::new();
            walk_entries(closed_walk(labels), &mut entries);
            match entries_expectation(&entries, diag, off) {
                Ok(e) => {
                    if !e.is_zero() {
                        total += e * &ways;
                    }
                }
                Err(err) => failure = Some(err),
            }
        });
    }
    if let Some(err) = failure {
        return Err(err);
    }
    Ok(ScaledExact { numerator: total, n, half_power: k as u32 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn goe() -> (AtomSpec, AtomSpec) {
        (AtomSpec::gauss_real(int(2)), AtomSpec::gauss_real(int(1)))
    }

    #[test]
    fn single_index_gives_zero() {
        let (d, o) = goe();
        for k in 1..=4 {
            let v = finite_n_cov_trace_centered(1, k, k, &int(1), &int(1), &d, &o).unwrap();
            assert!(v.is_zero(), "k={k}");
            // the mean-centered version is Var(x^k) instead
            let raw = finite_n_cov(1, k, k, &int(1), &int(1), &d, &o).unwrap();
            assert!(!raw.is_zero());
        }
    }

    #[test]
    fn trace_centered_goe_two_two() {
        // n·Var T(1/2, 2) for GOE at even n: the limit is 2·(1/2 − 1/4)
        let (d, o) = goe();
        let v = finite_n_cov_trace_centered(6, 2, 2, &ratio(1, 2), &ratio(1, 2), &d, &o).unwrap();
        let v = v.to_rational().unwrap();
        assert!(v > ratio(1, 4) && v < int(1), "{v}");
        let full = finite_n_cov_trace_centered(4, 2, 2, &int(1), &ratio(1, 2), &d, &o).unwrap();
        assert!(full.is_zero());
    }

    #[test]
    fn trace_of_square_variance() {
        // Var Tr X² = 4 + 4/n for GOE
        let (d, o) = goe();
        for n in 2..=5 {
            let v = finite_n_cov(n, 2, 2, &int(1), &int(1), &d, &o).unwrap().to_rational().unwrap();
            assert_eq!(v, int(4) + ratio(4, n as i64), "n={n}");
        }
    }

    #[test]
    fn parity_vanishes_for_symmetric_laws() {
        let (d, o) = goe();
        let v = finite_n_cov(3, 1, 2, &ratio(1, 2), &int(1), &d, &o).unwrap();
        assert!(v.is_zero());
        assert_eq!(v.to_rational(), None);
    }

    #[test]
    fn caps() {
        let (d, o) = goe();
        assert!(matches!(finite_n_cov(7, 2, 2, &int(1), &int(1), &d, &o), Err(Error::SizeCap(_))));
        assert!(matches!(finite_n_cov(3, 5, 4, &int(1), &int(1), &d, &o), Err(Error::SizeCap(_))));
        assert!(matches!(expected_diag_power(3, 13, &d, &o), Err(Error::OracleUnavailable(13))));
    }

    #[test]
    fn diag_power_small_k() {
        let (d, o) = goe();
        for n in 1..=7usize {
            // E[(X²)_11] = ((n−1) + σ²_diag)/n
            let v = expected_diag_power(n, 2, &d, &o).unwrap().to_rational().unwrap();
            assert_eq!(v, ratio(n as i64 + 1, n as i64));
            assert!(expected_diag_power(n, 1, &d, &o).unwrap().is_zero());
            assert!(expected_diag_power(n, 3, &d, &o).unwrap().is_zero());
        }
    }

    #[test]
    fn diag_power_matches_direct_enumeration() {
        // brute force over all walks for a skewed real law, odd k included
        let d = AtomSpec::gauss_real(int(2));
        let o = AtomSpec::skewed_m4_3();
        for n in 1..=4usize {
            for k in 1..=5usize {
                let mut total = Rational::zero();
                let mut idx = vec![0u8; k];
                'walks: loop {
                    if idx[0] == 0 {
                        let mut entries = BTreeMap::new();
                        walk_entries(closed_walk(&idx), &mut entries);
                        total += entries_expectation(&entries, &d, &o).unwrap();
                    }
                    let mut p = 0;
                    loop {
                        if p == k {
                            break 'walks;
                        }
                        idx[p] += 1;
                        if (idx[p] as usize) < n {
                            break;
                        }
                        idx[p] = 0;
                        p += 1;
                    }
                }
                let v = expected_diag_power(n, k, &d, &o).unwrap();
                assert_eq!(v.numerator, total, "n={n} k={k}");
            }
        }
    }
}
