//! Weighted trace statistics `T(s,k) = Σ_{i ≤ ns}((X^k)_ii − Tr X^k / n)`,
//! computed from matrix powers and, independently, from the spectrum.

use std::collections::HashMap;
use std::io::Write;
use std::sync::Mutex;

use num_complex::Complex64;

use crate::atoms::AtomSpec;
use crate::combinatorics::{expected_diag_power, DIAG_POWER_MAX_K};
use crate::error::{Error, Result};
use crate::linalg::{Matrix, Scalar};
use crate::matrices::{build_wigner, EnsembleSpec, Hermitian, SpectralDecomposition};
use crate::process::lattice_index;
use crate::rng::RngStream;

/// Largest power handled by the matrix-power route.
pub const MAX_POWER: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceStatistic {
    pub s: f64,
    pub k: usize,
    pub value: f64,
}

fn check_power(k: usize) -> Result<()> {
    if k == 0 || k > MAX_POWER {
        return Err(Error::InvalidArgument(format!("power k = {k} outside 1..={MAX_POWER}")));
    }
    Ok(())
}

fn power<S: Scalar>(x: &Matrix<S>, e: usize) -> Matrix<S> {
    let mut acc = Matrix::identity(x.rows());
    for _ in 0..e {
        acc = acc.matmul(x);
    }
    acc
}

/// `(X^k)_ii` for all `i` as `Σ_j (X^a)_ij · conj((X^b)_ij)` with
/// `a + b = k`, using that `X^b` is Hermitian.
fn diag_power_generic<S: Scalar>(x: &Matrix<S>, k: usize) -> Vec<f64> {
    let a = k / 2;
    let b = k - a;
    let pb = power(x, b);
    if a == 0 {
        return (0..x.rows()).map(|i| pb[(i, i)].re()).collect();
    }
    let pa = if a == b { pb.clone() } else { power(x, a) };
    (0..x.rows())
        .map(|i| pa.row(i).iter().zip(pb.row(i)).map(|(&u, &v)| (u * v.conj()).re()).sum())
        .collect()
}

/// Diagonal of `X^k` by repeated multiplication.
pub fn diag_power(x: &Hermitian, k: usize) -> Result<Vec<f64>> {
    check_power(k)?;
    Ok(match x {
        Hermitian::Real(m) => diag_power_generic(m, k),
        Hermitian::Complex(m) => diag_power_generic(m, k),
    })
}

fn partial_centered(diag: &[f64], m: usize) -> f64 {
    let n = diag.len();
    let mean = diag.iter().sum::<f64>() / n as f64;
    diag[..m].iter().map(|d| d - mean).sum()
}

pub fn t_stat_power(x: &Hermitian, s: f64, k: usize) -> Result<f64> {
    let d = diag_power(x, k)?;
    Ok(partial_centered(&d, lattice_index(x.n(), s)))
}

/// `T(s,k)` for every `s` in `grid`, sharing one matrix power.
pub fn t_stat_power_many(x: &Hermitian, grid: &[f64], k: usize) -> Result<Vec<f64>> {
    let d = diag_power(x, k)?;
    Ok(grid.iter().map(|&s| partial_centered(&d, lattice_index(x.n(), s))).collect())
}

pub fn t_stat_spectral(dec: &SpectralDecomposition, s: f64, k: usize) -> Result<f64> {
    check_power(k)?;
    let n = dec.n();
    let m = lattice_index(n, s);
    let inv_n = 1.0 / n as f64;
    let overlaps = dec.overlaps();
    let powers: Vec<f64> = dec.eigenvalues.iter().map(|l| l.powi(k as i32)).collect();
    Ok((0..m)
        .map(|i| {
            overlaps[i * n..(i + 1) * n].iter().zip(&powers).map(|(&w, &p)| p * (w - inv_n)).sum::<f64>()
        })
        .sum())
}

/// A value of `E[(X^k)_ii]` with its standard error (zero when exact).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanEstimate {
    pub value: f64,
    pub se: f64,
}

/// Supplies `E[(X^k)_ii]`, which does not depend on `i`.
#[derive(Debug)]
pub enum MeanOracle {
    /// Closed form from the entry moments, for `k ≤ 12`.
    Exact { n: usize, diag: AtomSpec, off: AtomSpec, cache: Mutex<HashMap<usize, f64>> },
    /// Precomputed estimates indexed by `k − 1`.
    Table(Vec<MeanEstimate>),
}

impl MeanOracle {
    pub fn exact(spec: &EnsembleSpec) -> Self {
        MeanOracle::Exact {
            n: spec.n,
            diag: spec.diag.clone(),
            off: spec.offdiag.clone(),
            cache: Mutex::new(HashMap::new()),
        }
    }

    /// Averages `(X^k)_ii` over all `i` and `trials` matrices, `k = 1..=k_max`.
    pub fn monte_carlo(spec: &EnsembleSpec, k_max: usize, trials: usize, seed: u64) -> Result<Self> {
        check_power(k_max)?;
        if trials < 2 {
            return Err(Error::InvalidArgument("Monte Carlo mean oracle needs at least 2 trials".into()));
        }
        let mut per_trial = vec![Vec::with_capacity(trials); k_max];
        for t in 0..trials {
            let mut rng = RngStream::split(seed, t as u64);
            let x = build_wigner(spec, &mut rng);
            for (k, sink) in per_trial.iter_mut().enumerate() {
                let d = diag_power(&x, k + 1)?;
                sink.push(d.iter().sum::<f64>() / d.len() as f64);
            }
        }
        let table = per_trial
            .iter()
            .map(|v| {
                let mean = v.iter().sum::<f64>() / v.len() as f64;
                let var = v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (v.len() - 1) as f64;
                MeanEstimate { value: mean, se: (var / v.len() as f64).sqrt() }
            })
            .collect();
        Ok(MeanOracle::Table(table))
    }

    pub fn mean(&self, k: usize) -> Result<MeanEstimate> {
        match self {
            MeanOracle::Exact { n, diag, off, cache } => {
                if k == 0 || k > DIAG_POWER_MAX_K {
                    return Err(Error::OracleUnavailable(k as u32));
                }
                if let Some(&v) = cache.lock().expect("oracle cache").get(&k) {
                    return Ok(MeanEstimate { value: v, se: 0.0 });
                }
                let v = expected_diag_power(*n, k, diag, off)?.value();
                cache.lock().expect("oracle cache").insert(k, v);
                Ok(MeanEstimate { value: v, se: 0.0 })
            }
            MeanOracle::Table(table) => {
                k.checked_sub(1).and_then(|i| table.get(i)).copied().ok_or(Error::OracleUnavailable(k as u32))
            }
        }
    }
}

/// `T°(s) = Σ_{i ≤ ns}((X^k)_ii − E[(X^k)_ii])` at `s` and at `1`, and the
/// trace-centered statistic rebuilt from them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CenteredT {
    pub at_s: f64,
    pub at_one: f64,
    pub recombined: f64,
}

pub fn centered_t_stat(x: &Hermitian, s: f64, k: usize, oracle: &MeanOracle) -> Result<CenteredT> {
    let d = diag_power(x, k)?;
    let mean = oracle.mean(k)?.value;
    let n = x.n();
    let m = lattice_index(n, s);
    let at_s: f64 = d[..m].iter().map(|v| v - mean).sum();
    let at_one: f64 = d.iter().map(|v| v - mean).sum();
    Ok(CenteredT { at_s, at_one, recombined: at_s - (m as f64 / n as f64) * at_one })
}

/// One row of the `trial,s,k,value` export.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TStatRow {
    pub trial: usize,
    pub stat: TraceStatistic,
}

pub fn write_t_stat_csv(rows: &[TStatRow], out: &mut impl Write) -> std::io::Result<()> {
    writeln!(out, "trial,s,k,value")?;
    for r in rows {
        writeln!(out, "{},{},{},{:e}", r.trial, r.stat.s, r.stat.k, r.stat.value)?;
    }
    Ok(())
}

/// The same matrix stored as complex; lets the two storage paths be compared.
pub fn complexify(x: &Hermitian) -> Hermitian {
    let n = x.n();
    let rows: Vec<Vec<Complex64>> = (0..n).map(|i| (0..n).map(|j| x.entry(i, j)).collect()).collect();
    Hermitian::complex_from_rows(&rows).expect("hermitian input")
}
