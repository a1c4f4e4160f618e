//! Haar-distributed orthogonal and unitary matrices.

use num_complex::Complex64;

use crate::linalg::{Matrix, Scalar};
use crate::rng::RngStream;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HaarGroup {
    Orthogonal,
    Unitary,
}

impl std::fmt::Display for HaarGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.pad(match self {
            HaarGroup::Orthogonal => "orthogonal",
            HaarGroup::Unitary => "unitary",
        })
    }
}

/// Haar sample from `O(n)` or `U(n)`, returned as a complex matrix (zero
/// imaginary parts in the orthogonal case).
///
/// Columns of an i.i.d. Gaussian matrix are orthonormalized by modified
/// Gram–Schmidt (two passes); this is the QR factorization with the diagonal
/// of `R` real positive, which makes `Q` exactly Haar.
pub fn haar_sample(n: usize, group: HaarGroup, rng: &mut RngStream) -> Matrix<Complex64> {
    match group {
        HaarGroup::Orthogonal => {
            let g = Matrix::<f64>::from_fn(n, n, |_, _| rng.standard_normal());
            let q = orthonormalize_columns(g);
            Matrix::from_fn(n, n, |i, j| Complex64::new(q[(i, j)], 0.0))
        }
        HaarGroup::Unitary => {
            let s = std::f64::consts::FRAC_1_SQRT_2;
            let g = Matrix::<Complex64>::from_fn(n, n, |_, _| {
                let re = rng.standard_normal();
                let im = rng.standard_normal();
                Complex64::new(re * s, im * s)
            });
            orthonormalize_columns(g)
        }
    }
}

fn orthonormalize_columns<S: Scalar>(g: Matrix<S>) -> Matrix<S> {
    let n = g.rows();
    // work on columns as contiguous vectors
    let mut cols: Vec<Vec<S>> = (0..n).map(|j| (0..n).map(|i| g[(i, j)]).collect()).collect();
    for j in 0..n {
        for _pass in 0..2 {
            for k in 0..j {
                let (done, rest) = cols.split_at_mut(j);
                let qk = &done[k];
                let cj = &mut rest[0];
                let mut dot = S::zero();
                for (&a, &b) in qk.iter().zip(cj.iter()) {
                    dot += a.conj() * b;
                }
                for (c, &a) in cj.iter_mut().zip(qk.iter()) {
                    *c -= a * dot;
                }
            }
        }
        let norm = cols[j].iter().map(|x| x.abs2()).sum::<f64>().sqrt();
        for c in cols[j].iter_mut() {
            *c = c.scale(1.0 / norm);
        }
    }
    Matrix::from_fn(n, n, |i, j| cols[j][i])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unitary_and_orthogonal_columns() {
        let mut rng = RngStream::new(1);
        for group in [HaarGroup::Orthogonal, HaarGroup::Unitary] {
            let q = haar_sample(6, group, &mut rng);
            let g = q.conj_transpose().matmul(&q);
            assert!(g.max_abs_diff(&Matrix::identity(6)) < 1e-12);
            if group == HaarGroup::Orthogonal {
                assert!(q.as_slice().iter().all(|z| z.im == 0.0));
            }
        }
    }

    #[test]
    fn n1_orthogonal_is_a_fair_sign() {
        let mut rng = RngStream::new(2);
        let trials = 20_000;
        let plus = (0..trials)
            .filter(|_| {
                let q = haar_sample(1, HaarGroup::Orthogonal, &mut rng);
                assert!((q[(0, 0)].re.abs() - 1.0).abs() <= f64::EPSILON);
                q[(0, 0)].re > 0.0
            })
            .count();
        let p = plus as f64 / trials as f64;
        assert!((p - 0.5).abs() < 3.0 * (0.25 / trials as f64).sqrt());
    }

    #[test]
    fn two_by_two_unitary_moments() {
        // |u11|² is uniform on [0, 1]: mean 1/2, second moment 1/3
        let mut rng = RngStream::new(3);
        let trials = 100_000;
        let xs: Vec<f64> = (0..trials).map(|_| haar_sample(2, HaarGroup::Unitary, &mut rng)[(0, 0)].norm_sqr()).collect();
        let mean = xs.iter().sum::<f64>() / trials as f64;
        let m2 = xs.iter().map(|x| x * x).sum::<f64>() / trials as f64;
        let se1 = (1.0 / 12.0 / trials as f64).sqrt();
        let se2 = ((1.0 / 5.0 - 1.0 / 9.0) / trials as f64).sqrt();
        assert!((mean - 0.5).abs() < 3.0 * se1);
        assert!((m2 - 1.0 / 3.0).abs() < 3.0 * se2);
    }
}
