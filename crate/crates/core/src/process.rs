//! The overlap field `B(s,t)` on a prefix-sum grid, its increments and
//! jumps, the time change by the empirical spectral CDF, and signed measures.

use std::f64::consts::PI;
use std::io::Write;

use crate::error::{Error, Result};
use crate::matrices::SpectralDecomposition;

/// `⌊n·x⌋` for `x ∈ [0,1]`, snapping products within rounding noise of an
/// integer so that `x = k/n` lands on `k`.
pub fn lattice_index(n: usize, x: f64) -> usize {
    let scaled = n as f64 * x.clamp(0.0, 1.0);
    let nearest = scaled.round();
    let idx = if (scaled - nearest).abs() <= 1e-9 * scaled.max(1.0) { nearest } else { scaled.floor() };
    (idx as usize).min(n)
}

/// Prefix sums `prefix[a][b] = sqrt(β/2)·Σ_{i ≤ a, j ≤ b}(|u_ij|² − 1/n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BridgeGrid {
    n: usize,
    beta: u8,
    prefix: Vec<f64>,
}

impl BridgeGrid {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn beta(&self) -> u8 {
        self.beta
    }

    pub fn prefix(&self, a: usize, b: usize) -> f64 {
        self.prefix[a * (self.n + 1) + b]
    }

    /// Largest absolute value on the border `a ∈ {0,n}` or `b ∈ {0,n}`.
    pub fn border_residual(&self) -> f64 {
        let n = self.n;
        (0..=n)
            .flat_map(|k| [self.prefix(0, k), self.prefix(n, k), self.prefix(k, 0), self.prefix(k, n)])
            .fold(0.0, |m, v| m.max(v.abs()))
    }

    /// `B(s,t)`.
    pub fn eval(&self, s: f64, t: f64) -> f64 {
        self.prefix(lattice_index(self.n, s), lattice_index(self.n, t))
    }

    /// `B(s',t') − B(s,t') − B(s',t) + B(s,t)`.
    pub fn rect_increment(&self, s: f64, s2: f64, t: f64, t2: f64) -> Result<f64> {
        if !(s < s2 && t < t2) {
            return Err(Error::InvalidArgument(format!("empty rectangle [{s},{s2}]x[{t},{t2}]")));
        }
        let (a, a2) = (lattice_index(self.n, s), lattice_index(self.n, s2));
        let (b, b2) = (lattice_index(self.n, t), lattice_index(self.n, t2));
        Ok(self.prefix(a2, b2) - self.prefix(a, b2) - self.prefix(a2, b) + self.prefix(a, b))
    }

    /// Cell value `sqrt(β/2)(|u_ij|² − 1/n)`, zero-based.
    pub fn cell(&self, i: usize, j: usize) -> f64 {
        self.prefix(i + 1, j + 1) - self.prefix(i, j + 1) - self.prefix(i + 1, j) + self.prefix(i, j)
    }

    /// `sqrt(β/2)·max_ij ||u_ij|² − 1/n|`, the largest jump of the field.
    pub fn max_jump(&self) -> f64 {
        let n = self.n;
        (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).fold(0.0, |m, (i, j)| m.max(self.cell(i, j).abs()))
    }
}

pub fn build_bridge_grid(dec: &SpectralDecomposition) -> BridgeGrid {
    let n = dec.n();
    let beta = dec.beta();
    let scale = (beta as f64 / 2.0).sqrt();
    let inv_n = if n == 0 { 0.0 } else { 1.0 / n as f64 };
    let overlaps = dec.overlaps();
    let w = n + 1;
    let mut prefix = vec![0.0; w * w];
    for i in 0..n {
        let mut row_sum = 0.0;
        for j in 0..n {
            row_sum += overlaps[i * n + j] - inv_n;
            prefix[(i + 1) * w + j + 1] = prefix[i * w + j + 1] + row_sum;
        }
    }
    prefix.iter_mut().for_each(|v| *v *= scale);
    BridgeGrid { n, beta, prefix }
}

pub fn eval_bridge(grid: &BridgeGrid, s: f64, t: f64) -> f64 {
    grid.eval(s, t)
}

pub fn rect_increment(grid: &BridgeGrid, s: f64, s2: f64, t: f64, t2: f64) -> Result<f64> {
    grid.rect_increment(s, s2, t, t2)
}

pub fn max_jump(grid: &BridgeGrid) -> f64 {
    grid.max_jump()
}

/// `F(u) = #{j : λ_j ≤ u} / n` of a sorted spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalCdf {
    eigenvalues: Vec<f64>,
}

impl EmpiricalCdf {
    /// Number of eigenvalues `≤ u`.
    pub fn count(&self, u: f64) -> usize {
        self.eigenvalues.partition_point(|&l| l <= u)
    }

    pub fn eval(&self, u: f64) -> f64 {
        if self.eigenvalues.is_empty() {
            return 0.0;
        }
        self.count(u) as f64 / self.eigenvalues.len() as f64
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }
}

pub fn empirical_cdf(dec: &SpectralDecomposition) -> EmpiricalCdf {
    EmpiricalCdf { eigenvalues: dec.eigenvalues.clone() }
}

/// `B(s, F(u))`. The column index is the eigenvalue count itself, so no
/// rounding enters.
pub fn time_changed_eval(grid: &BridgeGrid, cdf: &EmpiricalCdf, s: f64, u: f64) -> f64 {
    grid.prefix(lattice_index(grid.n, s), cdf.count(u))
}

/// `∫ u^k B(s, F(u)) du`, integrating the step function exactly between
/// consecutive eigenvalues.
pub fn bridge_moment_integral(grid: &BridgeGrid, cdf: &EmpiricalCdf, s: f64, k: u32) -> f64 {
    let a = lattice_index(grid.n, s);
    let lam = &cdf.eigenvalues;
    let p = k as i32 + 1;
    (1..lam.len())
        .map(|m| grid.prefix(a, m) * (lam[m].powi(p) - lam[m - 1].powi(p)))
        .sum::<f64>()
        / p as f64
}

/// CDF of the semicircle law on `[−2, 2]`.
pub fn semicircle_cdf(u: f64) -> f64 {
    if u <= -2.0 {
        0.0
    } else if u >= 2.0 {
        1.0
    } else {
        (0.5 + u * (4.0 - u * u).sqrt() / (4.0 * PI) + (u / 2.0).asin() / PI).clamp(0.0, 1.0)
    }
}

/// Finitely supported signed measure `Σ w_j δ_{x_j}`.
#[derive(Debug, Clone, PartialEq)]
pub struct SignedMeasure {
    atoms: Vec<(f64, f64)>,
}

impl SignedMeasure {
    pub fn new(atoms: Vec<(f64, f64)>) -> Result<Self> {
        if atoms.iter().any(|(x, w)| !x.is_finite() || !w.is_finite()) {
            return Err(Error::InvalidArgument("signed measure atoms must be finite".into()));
        }
        let mut atoms = atoms;
        atoms.sort_by(|a, b| a.0.total_cmp(&b.0));
        Ok(SignedMeasure { atoms })
    }

    /// Like [`SignedMeasure::new`], additionally requiring `|Σ w| ≤ 1e-12`.
    pub fn null_mass(atoms: Vec<(f64, f64)>) -> Result<Self> {
        let mu = Self::new(atoms)?;
        let mass = mu.total_mass();
        if mass.abs() > 1e-12 {
            return Err(Error::NotNullMass(mass));
        }
        Ok(mu)
    }

    pub fn atoms(&self) -> &[(f64, f64)] {
        &self.atoms
    }

    pub fn total_mass(&self) -> f64 {
        self.atoms.iter().map(|a| a.1).sum()
    }

    /// `μ((−∞, u])`.
    pub fn cdf(&self, u: f64) -> f64 {
        self.atoms.iter().take_while(|a| a.0 <= u).map(|a| a.1).sum()
    }
}

/// Both sides of `∫ u^k F_μ(u) du = −Σ w x^{k+1}/(k+1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentRoutes {
    pub step_integral: f64,
    pub atom_sum: f64,
}

impl MomentRoutes {
    pub fn discrepancy(&self) -> f64 {
        (self.step_integral - self.atom_sum).abs()
    }
}

pub fn signed_cdf_moment(mu: &SignedMeasure, k: u32) -> Result<MomentRoutes> {
    let mass = mu.total_mass();
    if mass.abs() > 1e-12 {
        return Err(Error::NotNullMass(mass));
    }
    let p = k as i32 + 1;
    let atoms = &mu.atoms;
    let mut running = 0.0;
    let mut step_integral = 0.0;
    for m in 0..atoms.len().saturating_sub(1) {
        running += atoms[m].1;
        step_integral += running * (atoms[m + 1].0.powi(p) - atoms[m].0.powi(p));
    }
    step_integral /= p as f64;
    let atom_sum = -atoms.iter().map(|(x, w)| w * x.powi(p)).sum::<f64>() / p as f64;
    Ok(MomentRoutes { step_integral, atom_sum })
}

/// `μ_{X,e_i} = Σ_j |u_ij|² δ_{λ_j}`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedSpectralMeasure {
    pub locations: Vec<f64>,
    pub weights: Vec<f64>,
}

impl WeightedSpectralMeasure {
    pub fn from_row(dec: &SpectralDecomposition, i: usize) -> Result<Self> {
        let n = dec.n();
        if i >= n {
            return Err(Error::InvalidArgument(format!("row {i} out of range for n = {n}")));
        }
        let weights: Vec<f64> = (0..n).map(|j| dec.entry(i, j).norm_sqr()).collect();
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidArgument(format!("row {i} has mass {total}")));
        }
        Ok(WeightedSpectralMeasure { locations: dec.eigenvalues.clone(), weights })
    }

    /// `μ_{X,e_i} − μ_X`, with `μ_X` the uniform measure on the spectrum.
    pub fn centered(&self) -> SignedMeasure {
        let inv_n = 1.0 / self.locations.len() as f64;
        let atoms = self.locations.iter().zip(&self.weights).map(|(&x, &w)| (x, w - inv_n)).collect();
        SignedMeasure::new(atoms).expect("finite atoms")
    }
}

/// Long-form heatmap rows `(i, j, ||u_ij|² − 1/n|)` with one-based indices.
pub fn heatmap_cells(dec: &SpectralDecomposition) -> Vec<(usize, usize, f64)> {
    let n = dec.n();
    let inv_n = 1.0 / n as f64;
    let overlaps = dec.overlaps();
    (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .map(|(i, j)| (i + 1, j + 1, (overlaps[i * n + j] - inv_n).abs()))
        .collect()
}

pub fn write_heatmap_csv(dec: &SpectralDecomposition, out: &mut impl Write) -> std::io::Result<()> {
    writeln!(out, "i,j,value")?;
    for (i, j, v) in heatmap_cells(dec) {
        writeln!(out, "{i},{j},{v:e}")?;
    }
    Ok(())
}
