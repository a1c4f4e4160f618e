//! Dense Hermitian eigensolver: Householder reduction to a real symmetric
//! tridiagonal matrix, then implicit-shift QL with eigenvector accumulation.

use crate::error::{Error, Result};
use crate::linalg::{Matrix, Scalar};

/// Per-eigenvalue QL iteration cap.
pub const MAX_QL_ITERATIONS: usize = 50;

/// Returns unsorted eigenvalues and the matrix whose columns are the
/// corresponding orthonormal eigenvectors.
pub(crate) fn hermitian_eigen<S: Scalar>(a: &Matrix<S>) -> Result<(Vec<f64>, Matrix<S>)> {
    let n = a.rows();
    assert_eq!(n, a.cols(), "square matrix required");
    for i in 0..n {
        for j in 0..n {
            if !a[(i, j)].is_finite() {
                return Err(Error::NonFiniteEntry(i, j));
            }
        }
    }
    if n == 0 {
        return Ok((Vec::new(), Matrix::zeros(0, 0)));
    }

    let (diag, offdiag, q) = tridiagonalize(a);

    // Unitary diagonal D making the sub-diagonal real and non-negative.
    let mut phases = vec![S::one(); n];
    let mut sub = vec![0.0; n];
    for i in 0..n - 1 {
        let e = offdiag[i];
        sub[i] = e.abs();
        phases[i + 1] = phases[i] * e.phase();
    }

    let mut d = diag;
    // Rows of `zt` are the eigenvectors of the real tridiagonal matrix.
    let mut zt = Matrix::<f64>::identity(n);
    tql2(&mut d, &mut sub, &mut zt)?;

    // U = Q · D · Z
    let mut qd = q;
    for r in 0..n {
        for (x, &p) in qd.row_mut(r).iter_mut().zip(&phases) {
            *x = *x * p;
        }
    }
    let mut u = Matrix::<S>::zeros(n, n);
    for r in 0..n {
        let qrow = qd.row(r);
        for j in 0..n {
            let z = zt.row(j);
            let mut acc = S::zero();
            for (&qv, &zv) in qrow.iter().zip(z) {
                acc += qv.scale(zv);
            }
            u[(r, j)] = acc;
        }
    }
    Ok((d, u))
}

/// Householder reduction `A = Q T Q*`. Returns the diagonal of `T`, its
/// sub-diagonal `T[i+1][i]` and the accumulated unitary `Q`.
fn tridiagonalize<S: Scalar>(a: &Matrix<S>) -> (Vec<f64>, Vec<S>, Matrix<S>) {
    let n = a.rows();
    let mut w = a.clone();
    let mut q = Matrix::<S>::identity(n);
    let mut v = vec![S::zero(); n];
    let mut p = vec![S::zero(); n];

    for k in 0..n.saturating_sub(2) {
        let m = n - k - 1;
        let x0 = w[(k + 1, k)];
        let tail: f64 = (k + 2..n).map(|i| w[(i, k)].abs2()).sum();
        if tail == 0.0 {
            continue;
        }
        let alpha = (x0.abs2() + tail).sqrt();
        let phase = x0.phase();
        // v = x + phase·alpha·e1, H = I − τ v v*, H x = −phase·alpha·e1
        let v = &mut v[..m];
        for (i, vi) in v.iter_mut().enumerate() {
            *vi = w[(k + 1 + i, k)];
        }
        v[0] += phase.scale(alpha);
        let vnorm2: f64 = v.iter().map(|z| z.abs2()).sum();
        let tau = 2.0 / vnorm2;

        // p = τ B v on the trailing block B = W[k+1.., k+1..]
        let p = &mut p[..m];
        for (i, pi) in p.iter_mut().enumerate() {
            let row = &w.row(k + 1 + i)[k + 1..];
            let mut acc = S::zero();
            for (&b, &vj) in row.iter().zip(v.iter()) {
                acc += b * vj;
            }
            *pi = acc.scale(tau);
        }
        // K = τ (v* p) / 2, real for Hermitian B
        let vp: f64 = v.iter().zip(p.iter()).map(|(&vi, &pi)| (vi.conj() * pi).re()).sum();
        let kk = 0.5 * tau * vp;
        // w = p − K v ; B ← B − v w* − w v*
        for (pi, &vi) in p.iter_mut().zip(v.iter()) {
            *pi -= vi.scale(kk);
        }
        for i in 0..m {
            let vi = v[i];
            let wi = p[i];
            let row = &mut w.row_mut(k + 1 + i)[k + 1..];
            for j in 0..m {
                row[j] -= vi * p[j].conj() + wi * v[j].conj();
            }
        }
        let beta = -(phase.scale(alpha));
        w[(k + 1, k)] = beta;
        w[(k, k + 1)] = beta.conj();
        for i in k + 2..n {
            w[(i, k)] = S::zero();
            w[(k, i)] = S::zero();
        }
        // Q ← Q H
        for r in 0..n {
            let row = &mut q.row_mut(r)[k + 1..];
            let mut t = S::zero();
            for (&qv, &vi) in row.iter().zip(v.iter()) {
                t += qv * vi;
            }
            let t = t.scale(tau);
            for (qv, &vi) in row.iter_mut().zip(v.iter()) {
                *qv -= t * vi.conj();
            }
        }
    }

    let diag = (0..n).map(|i| w[(i, i)].re()).collect();
    let offdiag = (0..n.saturating_sub(1)).map(|i| w[(i + 1, i)]).collect();
    (diag, offdiag, q)
}

/// Implicit QL on a symmetric tridiagonal matrix with diagonal `d` and
/// sub-diagonal `e` (`e[i]` couples `i` and `i+1`, `e[n-1]` ignored).
/// Rotations are applied to the rows of `zt`.
fn tql2(d: &mut [f64], e: &mut [f64], zt: &mut Matrix<f64>) -> Result<()> {
    let n = d.len();
    if n == 0 {
        return Ok(());
    }
    e[n - 1] = 0.0;
    let eps = f64::EPSILON;
    let mut f = 0.0;
    let mut tst1: f64 = 0.0;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n - 1 {
            if e[m].abs() <= eps * tst1 {
                break;
            }
            m += 1;
        }
        if m > l {
            let mut iter = 0;
            loop {
                iter += 1;
                if iter > MAX_QL_ITERATIONS {
                    return Err(Error::EigenNoConvergence { index: l, iterations: MAX_QL_ITERATIONS });
                }
                let g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in d.iter_mut().skip(l + 2) {
                    *di -= h;
                }
                f += h;

                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    let g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    rotate_rows(zt, i, s, c);
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }
    Ok(())
}

fn rotate_rows(zt: &mut Matrix<f64>, i: usize, s: f64, c: f64) {
    let n = zt.cols();
    let (head, tail) = zt_rows_pair(zt, i);
    for k in 0..n {
        let h = tail[k];
        tail[k] = s * head[k] + c * h;
        head[k] = c * head[k] - s * h;
    }
}

fn zt_rows_pair(zt: &mut Matrix<f64>, i: usize) -> (&mut [f64], &mut [f64]) {
    let n = zt.cols();
    let (a, b) = zt.as_mut_slice().split_at_mut((i + 1) * n);
    (&mut a[i * n..], &mut b[..n])
}
