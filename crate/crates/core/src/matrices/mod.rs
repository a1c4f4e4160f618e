//! Wigner matrices, their spectral decompositions and Haar samples.

mod eigen;
mod haar;

use std::fmt::Write as _;
use std::io::Write;

use num_complex::Complex64;

use crate::atoms::{gaussian_reference, AtomSpec};
use crate::error::{Error, Result};
use crate::linalg::{Matrix, Scalar};
use crate::rational::int;
use crate::rng::RngStream;

pub use eigen::MAX_QL_ITERATIONS;
pub use haar::{haar_sample, HaarGroup};

/// Symmetry class, size and entry laws of a Wigner ensemble.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnsembleSpec {
    pub beta: u8,
    pub n: usize,
    pub diag: AtomSpec,
    pub offdiag: AtomSpec,
}

impl EnsembleSpec {
    pub fn new(beta: u8, n: usize, diag: AtomSpec, offdiag: AtomSpec) -> Result<Self> {
        let spec = EnsembleSpec { beta, n, diag, offdiag };
        spec.validate()?;
        Ok(spec)
    }

    /// GOE: diagonal `N(0, 2)`, off-diagonal `N(0, 1)`.
    pub fn goe(n: usize) -> Self {
        let (diag, offdiag) = gaussian_reference(1);
        EnsembleSpec { beta: 1, n, diag, offdiag }
    }

    /// GUE: diagonal `N(0, 1)`, off-diagonal circular complex Gaussian with `E|x|² = 1`.
    pub fn gue(n: usize) -> Self {
        let (diag, offdiag) = gaussian_reference(2);
        EnsembleSpec { beta: 2, n, diag, offdiag }
    }

    /// Real symmetric ensemble with GOE diagonal and the given off-diagonal law.
    pub fn real_with_offdiag(n: usize, offdiag: AtomSpec) -> Result<Self> {
        Self::new(1, n, AtomSpec::gauss_real(int(2)), offdiag)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidEnsemble("n must be >= 1".into()));
        }
        match self.beta {
            1 if self.diag.is_complex() || self.offdiag.is_complex() => {
                Err(Error::InvalidEnsemble("beta = 1 needs real diagonal and off-diagonal laws".into()))
            }
            2 if self.diag.is_complex() => Err(Error::InvalidEnsemble("diagonal law must be real".into())),
            2 if !self.offdiag.is_complex() => {
                Err(Error::InvalidEnsemble("beta = 2 needs a complex off-diagonal law".into()))
            }
            1 | 2 => Ok(()),
            b => Err(Error::InvalidEnsemble(format!("beta must be 1 or 2, got {b}"))),
        }
    }

    pub fn with_n(&self, n: usize) -> Self {
        EnsembleSpec { n, ..self.clone() }
    }
}

/// A real symmetric or complex Hermitian matrix.
#[derive(Clone, Debug, PartialEq)]
pub enum Hermitian {
    Real(Matrix<f64>),
    Complex(Matrix<Complex64>),
}

impl Hermitian {
    pub fn n(&self) -> usize {
        match self {
            Hermitian::Real(m) => m.rows(),
            Hermitian::Complex(m) => m.rows(),
        }
    }

    pub fn beta(&self) -> u8 {
        match self {
            Hermitian::Real(_) => 1,
            Hermitian::Complex(_) => 2,
        }
    }

    pub fn max_abs(&self) -> f64 {
        match self {
            Hermitian::Real(m) => m.max_abs(),
            Hermitian::Complex(m) => m.max_abs(),
        }
    }

    pub fn trace(&self) -> f64 {
        match self {
            Hermitian::Real(m) => m.trace(),
            Hermitian::Complex(m) => m.trace().re,
        }
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        match self {
            Hermitian::Real(m) => Complex64::new(m[(i, j)], 0.0),
            Hermitian::Complex(m) => m[(i, j)],
        }
    }

    /// Builds a real symmetric matrix from rows; the input must be symmetric.
    pub fn real_from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let m = Matrix::from_rows(rows);
        check_hermitian(&m)?;
        Ok(Hermitian::Real(m))
    }

    pub fn complex_from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let m = Matrix::from_rows(rows);
        check_hermitian(&m)?;
        Ok(Hermitian::Complex(m))
    }

    /// Plain-text dump: a `# n=<n> beta=<β>` header, then one row per line with
    /// entries written as `re` (real) or `re+imj` / `re-imj` (complex).
    pub fn write_text(&self, out: &mut impl Write) -> std::io::Result<()> {
        let n = self.n();
        writeln!(out, "# n={} beta={}", n, self.beta())?;
        for i in 0..n {
            let mut line = String::new();
            for j in 0..n {
                if j > 0 {
                    line.push(' ');
                }
                match self {
                    Hermitian::Real(m) => write!(line, "{}", m[(i, j)]).unwrap(),
                    Hermitian::Complex(m) => {
                        let z = m[(i, j)];
                        let sign = if z.im.is_sign_negative() { '-' } else { '+' };
                        write!(line, "{}{}{}j", z.re, sign, z.im.abs()).unwrap()
                    }
                }
            }
            writeln!(out, "{line}")?;
        }
        Ok(())
    }

    /// Parses the format written by [`Hermitian::write_text`]. Comment lines
    /// before the `# n=` header are skipped.
    pub fn read_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .filter(|l| !l.trim().is_empty())
            .skip_while(|l| l.starts_with('#') && !l.trim_start_matches('#').trim_start().starts_with("n="));
        let header = lines.next().ok_or_else(|| Error::InvalidArgument("empty matrix dump".into()))?;
        let mut n = None;
        let mut beta = None;
        for tok in header.trim_start_matches('#').split_whitespace() {
            if let Some(v) = tok.strip_prefix("n=") {
                n = v.parse::<usize>().ok();
            } else if let Some(v) = tok.strip_prefix("beta=") {
                beta = v.parse::<u8>().ok();
            }
        }
        let (n, beta) = match (n, beta) {
            (Some(n), Some(b)) => (n, b),
            _ => return Err(Error::InvalidArgument(format!("bad matrix header {header:?}"))),
        };
        let bad = |t: &str| Error::InvalidArgument(format!("bad matrix entry {t:?}"));
        let rows: Vec<Vec<Complex64>> = lines
            .map(|l| l.split_whitespace().map(|t| parse_complex(t).ok_or_else(|| bad(t))).collect())
            .collect::<Result<_>>()?;
        if rows.len() != n || rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidArgument(format!("expected {n}x{n} entries")));
        }
        if beta == 1 {
            let real: Vec<Vec<f64>> = rows.iter().map(|r| r.iter().map(|z| z.re).collect()).collect();
            Self::real_from_rows(&real)
        } else {
            Self::complex_from_rows(&rows)
        }
    }
}

fn parse_complex(t: &str) -> Option<Complex64> {
    let Some(body) = t.strip_suffix('j') else {
        return t.parse::<f64>().ok().map(|re| Complex64::new(re, 0.0));
    };
    // split at the last sign that is not an exponent sign or the leading sign
    let bytes = body.as_bytes();
    let pos = (1..bytes.len())
        .rev()
        .find(|&i| (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E'))?;
    let re = body[..pos].parse::<f64>().ok()?;
    let im = body[pos..].parse::<f64>().ok()?;
    Some(Complex64::new(re, im))
}

fn check_hermitian<S: Scalar>(m: &Matrix<S>) -> Result<()> {
    if m.rows() != m.cols() {
        return Err(Error::InvalidArgument("matrix must be square".into()));
    }
    for i in 0..m.rows() {
        for j in 0..=i {
            let (a, b) = (m[(i, j)], m[(j, i)].conj());
            if !a.is_finite() {
                return Err(Error::NonFiniteEntry(i, j));
            }
            if (a - b).abs() > 1e-12 * (1.0 + a.abs()) {
                return Err(Error::InvalidArgument(format!("matrix not Hermitian at ({i}, {j})")));
            }
        }
    }
    Ok(())
}

/// `X = n^{-1/2} [x_ij]` with i.i.d. upper-triangular entries and Hermitian symmetry.
pub fn build_wigner(spec: &EnsembleSpec, rng: &mut RngStream) -> Hermitian {
    let n = spec.n;
    let scale = 1.0 / (n as f64).sqrt();
    match spec.beta {
        1 => {
            let mut m = Matrix::<f64>::zeros(n, n);
            for i in 0..n {
                m[(i, i)] = spec.diag.sample_re(rng) * scale;
                for j in i + 1..n {
                    let x = spec.offdiag.sample_re(rng) * scale;
                    m[(i, j)] = x;
                    m[(j, i)] = x;
                }
            }
            Hermitian::Real(m)
        }
        _ => {
            let mut m = Matrix::<Complex64>::zeros(n, n);
            for i in 0..n {
                m[(i, i)] = Complex64::new(spec.diag.sample_re(rng) * scale, 0.0);
                for j in i + 1..n {
                    let x = spec.offdiag.sample(rng) * scale;
                    m[(i, j)] = x;
                    m[(j, i)] = x.conj();
                }
            }
            Hermitian::Complex(m)
        }
    }
}

/// Orthonormal eigenvector matrix, real or complex.
#[derive(Clone, Debug, PartialEq)]
pub enum Eigenvectors {
    Real(Matrix<f64>),
    Complex(Matrix<Complex64>),
}

/// `X = U diag(λ) U*` with `λ₁ ≤ … ≤ λ_n` and, in every column of `U`, the
/// entry of largest modulus real and positive (ties go to the lowest row).
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<f64>,
    pub vectors: Eigenvectors,
}

impl SpectralDecomposition {
    pub fn n(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn beta(&self) -> u8 {
        match self.vectors {
            Eigenvectors::Real(_) => 1,
            Eigenvectors::Complex(_) => 2,
        }
    }

    /// `|u_ij|²` in row-major order.
    pub fn overlaps(&self) -> Vec<f64> {
        match &self.vectors {
            Eigenvectors::Real(u) => u.as_slice().iter().map(|x| x * x).collect(),
            Eigenvectors::Complex(u) => u.as_slice().iter().map(|z| z.norm_sqr()).collect(),
        }
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        match &self.vectors {
            Eigenvectors::Real(u) => Complex64::new(u[(i, j)], 0.0),
            Eigenvectors::Complex(u) => u[(i, j)],
        }
    }

    /// `‖U*U − I‖_max`.
    pub fn orthonormality_residual(&self) -> f64 {
        fn resid<S: Scalar>(u: &Matrix<S>) -> f64 {
            let g = u.conj_transpose().matmul(u);
            g.max_abs_diff(&Matrix::identity(u.rows()))
        }
        match &self.vectors {
            Eigenvectors::Real(u) => resid(u),
            Eigenvectors::Complex(u) => resid(u),
        }
    }

    /// `‖U diag(λ) U* − X‖_max`.
    pub fn reconstruction_residual(&self, x: &Hermitian) -> f64 {
        fn recon<S: Scalar>(u: &Matrix<S>, lambda: &[f64], x: &Matrix<S>) -> f64 {
            let mut scaled = u.clone();
            for r in 0..u.rows() {
                for (v, &l) in scaled.row_mut(r).iter_mut().zip(lambda) {
                    *v = v.scale(l);
                }
            }
            scaled.matmul(&u.conj_transpose()).max_abs_diff(x)
        }
        match (&self.vectors, x) {
            (Eigenvectors::Real(u), Hermitian::Real(m)) => recon(u, &self.eigenvalues, m),
            (Eigenvectors::Complex(u), Hermitian::Complex(m)) => recon(u, &self.eigenvalues, m),
            _ => f64::INFINITY,
        }
    }
}

/// Deterministic spectral decomposition, see [`SpectralDecomposition`].
///
/// Equal eigenvalues keep the solver's output order (stable sort); this only
/// matters for discrete atom laws.
pub fn spectral_decomposition(x: &Hermitian) -> Result<SpectralDecomposition> {
    match x {
        Hermitian::Real(m) => {
            let (values, vectors) = eigen::hermitian_eigen(m)?;
            let (eigenvalues, u) = sort_and_fix_phase(values, vectors);
            Ok(SpectralDecomposition { eigenvalues, vectors: Eigenvectors::Real(u) })
        }
        Hermitian::Complex(m) => {
            let (values, vectors) = eigen::hermitian_eigen(m)?;
            let (eigenvalues, u) = sort_and_fix_phase(values, vectors);
            Ok(SpectralDecomposition { eigenvalues, vectors: Eigenvectors::Complex(u) })
        }
    }
}

fn sort_and_fix_phase<S: Scalar>(values: Vec<f64>, vectors: Matrix<S>) -> (Vec<f64>, Matrix<S>) {
    let n = values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let eigenvalues = order.iter().map(|&j| values[j]).collect();
    let mut u = Matrix::<S>::zeros(n, n);
    for (new_j, &old_j) in order.iter().enumerate() {
        let mut best = 0;
        let mut best_abs = -1.0;
        for i in 0..n {
            let a = vectors[(i, old_j)].abs2();
            if a > best_abs {
                best_abs = a;
                best = i;
            }
        }
        let fix = vectors[(best, old_j)].phase().conj();
        for i in 0..n {
            u[(i, new_j)] = vectors[(i, old_j)] * fix;
        }
        // exact zero imaginary part on the pivot
        u[(best, new_j)] = S::from_re(u[(best, new_j)].abs());
    }
    (eigenvalues, u)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn n1_is_the_scaled_atom() {
        let spec = EnsembleSpec::new(1, 1, AtomSpec::rademacher(), AtomSpec::rademacher()).unwrap();
        let mut rng = RngStream::new(1);
        let x = build_wigner(&spec, &mut rng);
        assert_eq!(x.entry(0, 0).re.abs(), 1.0);
    }

    #[test]
    fn wigner_is_hermitian() {
        let mut rng = RngStream::new(2);
        for spec in [EnsembleSpec::goe(5), EnsembleSpec::gue(5)] {
            let x = build_wigner(&spec, &mut rng);
            for i in 0..5 {
                assert_eq!(x.entry(i, i).im, 0.0);
                for j in 0..5 {
                    assert_eq!(x.entry(i, j), x.entry(j, i).conj());
                }
            }
        }
    }

    #[test]
    fn beta_mismatch_rejected() {
        assert!(EnsembleSpec::new(1, 4, AtomSpec::gauss_real(int(2)), AtomSpec::gauss_complex(int(1))).is_err());
        assert!(EnsembleSpec::new(2, 4, AtomSpec::gauss_real(int(1)), AtomSpec::rademacher()).is_err());
        assert!(EnsembleSpec::new(3, 4, AtomSpec::rademacher(), AtomSpec::rademacher()).is_err());
        assert!(EnsembleSpec::new(1, 0, AtomSpec::rademacher(), AtomSpec::rademacher()).is_err());
    }

    #[test]
    fn two_by_two_swap() {
        let x = Hermitian::real_from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let dec = spectral_decomposition(&x).unwrap();
        assert!((dec.eigenvalues[0] + 1.0).abs() < 1e-14);
        assert!((dec.eigenvalues[1] - 1.0).abs() < 1e-14);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        // column for −1: (1, −1)/√2 (tie on modulus goes to row 0, made positive)
        assert!((dec.entry(0, 0).re - h).abs() < 1e-14);
        assert!((dec.entry(1, 0).re + h).abs() < 1e-14);
        assert!((dec.entry(0, 1).re - h).abs() < 1e-14);
        assert!((dec.entry(1, 1).re - h).abs() < 1e-14);
    }

    #[test]
    fn diagonal_input_gives_permutation() {
        let x = Hermitian::real_from_rows(&[vec![3.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 2.0]]).unwrap();
        let dec = spectral_decomposition(&x).unwrap();
        assert_eq!(dec.eigenvalues, vec![1.0, 2.0, 3.0]);
        let expected = [[0.0, 0.0, 1.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]];
        for (i, row) in expected.iter().enumerate() {
            for (j, &e) in row.iter().enumerate() {
                assert_eq!(dec.entry(i, j).re, e);
            }
        }
    }

    #[test]
    fn goe_and_gue_residuals() {
        let mut rng = RngStream::new(9);
        for spec in [EnsembleSpec::goe(50), EnsembleSpec::gue(50)] {
            let x = build_wigner(&spec, &mut rng);
            let dec = spectral_decomposition(&x).unwrap();
            assert!(dec.orthonormality_residual() <= 1e-10 * 50.0);
            assert!(dec.reconstruction_residual(&x) <= 1e-8 * 50.0 * x.max_abs());
            assert!(dec.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
            let sum: f64 = dec.eigenvalues.iter().sum();
            assert!((sum - x.trace()).abs() <= 1e-8 * 50.0 * x.max_abs());
        }
    }

    #[test]
    fn phase_convention_holds() {
        let mut rng = RngStream::new(4);
        let x = build_wigner(&EnsembleSpec::gue(12), &mut rng);
        let dec = spectral_decomposition(&x).unwrap();
        for j in 0..12 {
            let (mut best, mut best_abs) = (0, -1.0);
            for i in 0..12 {
                let a = dec.entry(i, j).norm_sqr();
                if a > best_abs {
                    best_abs = a;
                    best = i;
                }
            }
            let z = dec.entry(best, j);
            assert!(z.re > 0.0 && z.im == 0.0);
        }
    }

    #[test]
    fn decomposition_is_deterministic() {
        let mut rng = RngStream::new(8);
        let x = build_wigner(&EnsembleSpec::goe(20), &mut rng);
        assert_eq!(spectral_decomposition(&x).unwrap(), spectral_decomposition(&x).unwrap());
    }

    #[test]
    fn dump_round_trip() {
        let mut rng = RngStream::new(6);
        for spec in [EnsembleSpec::goe(4), EnsembleSpec::gue(4)] {
            let x = build_wigner(&spec, &mut rng);
            let mut buf = Vec::new();
            x.write_text(&mut buf).unwrap();
            let text = String::from_utf8(buf).unwrap();
            assert!(text.starts_with(&format!("# n=4 beta={}", spec.beta)));
            assert_eq!(Hermitian::read_text(&text).unwrap(), x);
        }
    }

    #[test]
    fn nan_input_fails_explicitly() {
        let m = Matrix::from_rows(&[vec![f64::NAN, 0.0], vec![0.0, 1.0]]);
        assert!(matches!(spectral_decomposition(&Hermitian::Real(m)), Err(Error::NonFiniteEntry(0, 0))));
    }
}
