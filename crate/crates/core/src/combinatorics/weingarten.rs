//! Second-order Haar moments through the Weingarten function on `S₂`.

use std::fmt;

use num_traits::One;

use crate::error::{Error, Result};
use crate::matrices::HaarGroup;
use crate::rational::{int, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Perm2 {
    Identity,
    Transposition,
}

/// `Wg(perm)` for `n×n` Haar matrices. The orthogonal case is indexed by
/// pairings of four points: `Identity` means the two pairings agree.
pub fn weingarten(group: HaarGroup, perm: Perm2, n: usize) -> Result<Rational> {
    let n = int(n as i64);
    let one = Rational::one();
    match group {
        HaarGroup::Unitary => {
            if n < int(2) {
                return Err(Error::InvalidArgument("unitary Weingarten needs n >= 2".into()));
            }
            let d = &n * &n - &one;
            Ok(match perm {
                Perm2::Identity => one / d,
                Perm2::Transposition => -one / (n * d),
            })
        }
        HaarGroup::Orthogonal => {
            if n < int(2) {
                return Err(Error::InvalidArgument("orthogonal Weingarten needs n >= 2".into()));
            }
            let d = &n * (&n - &one) * (&n + int(2));
            Ok(match perm {
                Perm2::Identity => (n + one) / d,
                Perm2::Transposition => -one / d,
            })
        }
    }
}

/// Coincidence pattern of two entries `(i1,j1)` and `(i2,j2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IndexPattern {
    Distinct,
    SharedRow,
    SharedColumn,
    SameCell,
}

impl IndexPattern {
    pub const ALL: [IndexPattern; 4] =
        [IndexPattern::Distinct, IndexPattern::SharedRow, IndexPattern::SharedColumn, IndexPattern::SameCell];

    pub fn classify(i1: usize, j1: usize, i2: usize, j2: usize) -> Self {
        match (i1 == i2, j1 == j2) {
            (false, false) => IndexPattern::Distinct,
            (true, false) => IndexPattern::SharedRow,
            (false, true) => IndexPattern::SharedColumn,
            (true, true) => IndexPattern::SameCell,
        }
    }

    /// A representative `(i1, j1, i2, j2)` with zero-based indices.
    pub fn representative(&self) -> (usize, usize, usize, usize) {
        match self {
            IndexPattern::Distinct => (0, 0, 1, 1),
            IndexPattern::SharedRow => (0, 0, 0, 1),
            IndexPattern::SharedColumn => (0, 0, 1, 0),
            IndexPattern::SameCell => (0, 0, 0, 0),
        }
    }
}

impl fmt::Display for IndexPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            IndexPattern::Distinct => "distinct",
            IndexPattern::SharedRow => "shared-row",
            IndexPattern::SharedColumn => "shared-column",
            IndexPattern::SameCell => "same-cell",
        })
    }
}

/// `E[|u_{i1,j1}|² |u_{i2,j2}|²]` for Haar `U`, assembled from the
/// Weingarten sum over the permutations (or pairings) compatible with the
/// row and column coincidences.
pub fn haar_pair_moment(i1: usize, j1: usize, i2: usize, j2: usize, n: usize, group: HaarGroup) -> Result<Rational> {
    if [i1, j1, i2, j2].iter().any(|&x| x >= n) {
        return Err(Error::InvalidArgument(format!("indices must be below n = {n}")));
    }
    let id = weingarten(group, Perm2::Identity, n)?;
    let tr = weingarten(group, Perm2::Transposition, n)?;
    // admissible row and column permutations, counted with their Wg weight
    let rows = if i1 == i2 { 2 } else { 1 };
    let cols = if j1 == j2 { 2 } else { 1 };
    Ok(match group {
        HaarGroup::Unitary => {
            // pairs (σ, τ) in S₂ × S₂; Wg depends on στ⁻¹
            let mut total = Rational::from_integer(0.into());
            for s in 0..rows {
                for t in 0..cols {
                    total += if s == t { &id } else { &tr };
                }
            }
            total
        }
        HaarGroup::Orthogonal => {
            // pairings of (1,1,2,2): {12}{34} always admissible, the other two
            // only when the corresponding indices coincide
            let rows = if i1 == i2 { 3 } else { 1 };
            let cols = if j1 == j2 { 3 } else { 1 };
            let mut total = Rational::from_integer(0.into());
            for p in 0..rows {
                for q in 0..cols {
                    total += if p == q { &id } else { &tr };
                }
            }
            total
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    #[test]
    fn orthogonal_values_at_four() {
        assert_eq!(weingarten(HaarGroup::Orthogonal, Perm2::Identity, 4).unwrap(), ratio(5, 72));
        assert_eq!(weingarten(HaarGroup::Orthogonal, Perm2::Transposition, 4).unwrap(), ratio(-1, 72));
    }

    #[test]
    fn unitary_patterns() {
        let n = 3;
        let u = HaarGroup::Unitary;
        assert_eq!(haar_pair_moment(0, 0, 1, 1, n, u).unwrap(), ratio(1, 8));
        assert_eq!(haar_pair_moment(0, 0, 0, 1, n, u).unwrap(), ratio(1, 12));
        assert_eq!(haar_pair_moment(0, 0, 1, 0, n, u).unwrap(), ratio(1, 12));
        assert_eq!(haar_pair_moment(2, 2, 2, 2, n, u).unwrap(), ratio(1, 6));
        assert_eq!(haar_pair_moment(0, 0, 0, 0, 2, u).unwrap(), ratio(1, 3));
    }

    #[test]
    fn orthogonal_patterns() {
        let o = HaarGroup::Orthogonal;
        for n in 2..9usize {
            let ni = n as i64;
            // E u⁴ = 3/(n(n+2)), shared row or column 1/(n(n+2))
            assert_eq!(haar_pair_moment(0, 0, 0, 0, n, o).unwrap(), ratio(3, ni * (ni + 2)));
            assert_eq!(haar_pair_moment(0, 0, 0, 1, n, o).unwrap(), ratio(1, ni * (ni + 2)));
            assert_eq!(haar_pair_moment(1, 0, 0, 0, n, o).unwrap(), ratio(1, ni * (ni + 2)));
            assert_eq!(haar_pair_moment(0, 0, 1, 1, n, o).unwrap(), ratio(ni + 1, ni * (ni - 1) * (ni + 2)));
        }
    }

    #[test]
    fn row_sums_are_consistent() {
        // Σ_j E[|u_11|²|u_1j|²] = E|u_11|² = 1/n
        for group in [HaarGroup::Unitary, HaarGroup::Orthogonal] {
            for n in 2..7usize {
                let same = haar_pair_moment(0, 0, 0, 0, n, group).unwrap();
                let row = haar_pair_moment(0, 0, 0, 1, n, group).unwrap();
                let sum = same + row * int(n as i64 - 1);
                assert_eq!(sum, ratio(1, n as i64));
            }
        }
    }

    #[test]
    fn rejects_small_or_out_of_range() {
        assert!(weingarten(HaarGroup::Unitary, Perm2::Identity, 1).is_err());
        assert!(haar_pair_moment(0, 0, 3, 0, 3, HaarGroup::Unitary).is_err());
        assert_eq!(IndexPattern::classify(1, 2, 1, 3), IndexPattern::SharedRow);
    }
}
