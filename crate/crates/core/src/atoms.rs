//! Entry ("atom") distributions with exact joint-moment oracles.
//!
//! Every shipped law is centered. Moments are returned as exact rationals so
//! the partition engine can run in exact arithmetic; the heavy-tailed Pareto
//! law reports divergent moments as [`Moment::Infinite`] instead of truncating.
//!
//! Textual grammar (used by the CLI and config files): a whitespace separated
//! list of `key=value` pairs starting with `kind=...`, e.g.
//!
//! ```text
//! kind=gauss-real sigma2=2
//! kind=gauss-complex v=1
//! kind=rademacher
//! kind=uniform-sym half-width-sq=3
//! kind=two-point-sym m4=3            (unit variance shortcut)
//! kind=two-point-sym a2=4 p=1/8
//! kind=pareto-sym alpha=11/5         (scale defaults to unit variance)
//! kind=discrete atoms=2:1/6,-1:1/3,0:1/2
//! ```

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{self, double_factorial_odd, factorial, int, parse_rational, pow, ratio, Rational};
use crate::rng::RngStream;

/// Outcome of a moment query.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Moment {
    Finite(Rational),
    Infinite,
}

impl Moment {
    pub fn finite(self) -> Option<Rational> {
        match self {
            Moment::Finite(r) => Some(r),
            Moment::Infinite => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Moment::Finite(r) => rational::to_f64(r),
            Moment::Infinite => f64::INFINITY,
        }
    }
}

impl fmt::Display for Moment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Moment::Finite(r) => write!(f, "{r}"),
            Moment::Infinite => f.write_str("inf"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AtomKind {
    /// Real centered Gaussian with variance `variance`.
    GaussReal { variance: Rational },
    /// Circular complex Gaussian with `E|x|² = variance`, `E[x²] = 0`.
    GaussComplex { variance: Rational },
    /// `±1` with probability 1/2 each.
    Rademacher,
    /// Uniform on `[−h, h]`, stored through `h²`.
    UniformSym { half_width_sq: Rational },
    /// `±a` with probability `p` each, `0` otherwise; stored through `a²`.
    TwoPointSym { a_sq: Rational, p: Rational },
    /// Symmetrized Pareto: `|x| = x_m U^{−1/α}`, random sign. Stored through `x_m²`.
    ParetoSym { alpha: Rational, scale_sq: Rational },
    /// Finite law with rational atoms `(value, probability)`. Not necessarily symmetric.
    Discrete { atoms: Vec<(Rational, Rational)> },
}

/// A scalar entry distribution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AtomSpec {
    pub kind: AtomKind,
}

impl AtomSpec {
    pub fn new(kind: AtomKind) -> Result<Self> {
        let spec = AtomSpec { kind };
        spec.validate()?;
        Ok(spec)
    }

    pub fn gauss_real(variance: Rational) -> Self {
        AtomSpec { kind: AtomKind::GaussReal { variance } }
    }

    pub fn gauss_complex(variance: Rational) -> Self {
        AtomSpec { kind: AtomKind::GaussComplex { variance } }
    }

    pub fn rademacher() -> Self {
        AtomSpec { kind: AtomKind::Rademacher }
    }

    /// Uniform law with unit variance (half-width √3).
    pub fn uniform_unit() -> Self {
        AtomSpec { kind: AtomKind::UniformSym { half_width_sq: int(3) } }
    }

    /// Unit-variance symmetric three-atom law `±√m4` w.p. `1/(2 m4)` each, so `E x⁴ = m4`.
    pub fn two_point_m4(m4: Rational) -> Result<Self> {
        if m4 < Rational::one() {
            return Err(Error::InvalidAtom(format!("two-point-sym needs m4 >= 1, got {m4}")));
        }
        let p = Rational::one() / (int(2) * &m4);
        Self::new(AtomKind::TwoPointSym { a_sq: m4, p })
    }

    /// Symmetrized Pareto with tail index `alpha > 2`, scaled to unit variance.
    pub fn pareto_unit(alpha: Rational) -> Result<Self> {
        if alpha <= int(2) {
            return Err(Error::InvalidAtom("pareto-sym unit scaling needs alpha > 2".into()));
        }
        let scale_sq = (&alpha - int(2)) / &alpha;
        Self::new(AtomKind::ParetoSym { alpha, scale_sq })
    }

    /// Heavy-tailed law used for the sparse-looking eigenvector heatmaps: α = 2.2, unit variance.
    pub fn heavy_tail() -> Self {
        Self::pareto_unit(ratio(11, 5)).expect("valid constant")
    }

    /// Asymmetric unit-variance law with `E x³ = 1`, `E x⁴ = 3`:
    /// `2` w.p. 1/6, `−1` w.p. 1/3, `0` w.p. 1/2.
    pub fn skewed_m4_3() -> Self {
        AtomSpec {
            kind: AtomKind::Discrete {
                atoms: vec![(int(2), ratio(1, 6)), (int(-1), ratio(1, 3)), (int(0), ratio(1, 2))],
            },
        }
    }

    pub fn discrete(atoms: Vec<(Rational, Rational)>) -> Result<Self> {
        Self::new(AtomKind::Discrete { atoms })
    }

    pub fn is_complex(&self) -> bool {
        matches!(self.kind, AtomKind::GaussComplex { .. })
    }

    fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidAtom(format!("{self}: {m}")));
        match &self.kind {
            AtomKind::GaussReal { variance } | AtomKind::GaussComplex { variance } => {
                if variance.is_negative() {
                    return bad("negative variance");
                }
            }
            AtomKind::Rademacher => {}
            AtomKind::UniformSym { half_width_sq } => {
                if half_width_sq.is_negative() {
                    return bad("negative half-width");
                }
            }
            AtomKind::TwoPointSym { a_sq, p } => {
                if a_sq.is_negative() || p.is_negative() || int(2) * p > Rational::one() {
                    return bad("need a2 >= 0 and 0 <= p <= 1/2");
                }
            }
            AtomKind::ParetoSym { alpha, scale_sq } => {
                if !alpha.is_positive() || !scale_sq.is_positive() {
                    return bad("need alpha > 0 and scale > 0");
                }
            }
            AtomKind::Discrete { atoms } => {
                if atoms.is_empty() || atoms.iter().any(|(_, p)| p.is_negative()) {
                    return bad("atoms must be non-empty with non-negative probabilities");
                }
                let total: Rational = atoms.iter().map(|(_, p)| p.clone()).sum();
                if !total.is_one() {
                    return bad("probabilities must sum to 1");
                }
                let mean: Rational = atoms.iter().map(|(v, p)| v * p).sum();
                if !mean.is_zero() {
                    return bad("law must be centered");
                }
            }
        }
        Ok(())
    }

    /// Exact `E[x^a conj(x)^b]`. For real specs `b` must be 0.
    pub fn moment(&self, a: u32, b: u32) -> Result<Moment> {
        if !self.is_complex() && b > 0 {
            return Err(Error::ConjugateOfReal(self.to_string()));
        }
        let k = a + b;
        let even = k.is_multiple_of(2);
        let value = match &self.kind {
            AtomKind::GaussReal { variance } => {
                if even {
                    pow(variance, k / 2) * Rational::from_integer(double_factorial_odd(k / 2))
                } else {
                    Rational::zero()
                }
            }
            AtomKind::GaussComplex { variance } => {
                if a == b {
                    pow(variance, a) * Rational::from_integer(factorial(a))
                } else {
                    Rational::zero()
                }
            }
            AtomKind::Rademacher => {
                if even {
                    Rational::one()
                } else {
                    Rational::zero()
                }
            }
            AtomKind::UniformSym { half_width_sq } => {
                if even {
                    pow(half_width_sq, k / 2) / int(k as i64 + 1)
                } else {
                    Rational::zero()
                }
            }
            AtomKind::TwoPointSym { a_sq, p } => {
                if k == 0 {
                    Rational::one()
                } else if even {
                    int(2) * p * pow(a_sq, k / 2)
                } else {
                    Rational::zero()
                }
            }
            AtomKind::ParetoSym { alpha, scale_sq } => {
                if k == 0 {
                    Rational::one()
                } else if int(k as i64) >= *alpha {
                    return Ok(Moment::Infinite);
                } else if even {
                    // E|x|^k = α x_m^k / (α − k)
                    alpha * pow(scale_sq, k / 2) / (alpha - int(k as i64))
                } else {
                    Rational::zero()
                }
            }
            AtomKind::Discrete { atoms } => atoms.iter().map(|(v, p)| pow(v, k) * p).sum(),
        };
        Ok(Moment::Finite(value))
    }

    /// Finite `E[x^a conj(x)^b]` or an [`Error::InfiniteMoment`].
    pub fn finite_moment(&self, a: u32, b: u32) -> Result<Rational> {
        self.moment(a, b)?
            .finite()
            .ok_or_else(|| Error::InfiniteMoment { spec: self.to_string(), a, b })
    }

    /// `E|x|²`.
    pub fn variance(&self) -> Moment {
        if self.is_complex() {
            self.moment(1, 1).expect("complex spec")
        } else {
            self.moment(2, 0).expect("real spec")
        }
    }

    /// `E|x|⁴`.
    pub fn fourth_moment(&self) -> Moment {
        if self.is_complex() {
            self.moment(2, 2).expect("complex spec")
        } else {
            self.moment(4, 0).expect("real spec")
        }
    }

    /// One draw. Real kinds return a value with zero imaginary part.
    pub fn sample(&self, rng: &mut RngStream) -> Complex64 {
        Complex64::new(self.sample_re(rng), 0.0)
            + match &self.kind {
                AtomKind::GaussComplex { variance } => {
                    let sd = (rational::to_f64(variance) / 2.0).sqrt();
                    Complex64::new(0.0, sd * rng.standard_normal())
                }
                _ => Complex64::new(0.0, 0.0),
            }
    }

    /// Real part of a draw; for real kinds this is the whole draw.
    pub(crate) fn sample_re(&self, rng: &mut RngStream) -> f64 {
        match &self.kind {
            AtomKind::GaussReal { variance } => rational::to_f64(variance).sqrt() * rng.standard_normal(),
            AtomKind::GaussComplex { variance } => {
                (rational::to_f64(variance) / 2.0).sqrt() * rng.standard_normal()
            }
            AtomKind::Rademacher => rng.sign(),
            AtomKind::UniformSym { half_width_sq } => {
                rational::to_f64(half_width_sq).sqrt() * (2.0 * rng.uniform() - 1.0)
            }
            AtomKind::TwoPointSym { a_sq, p } => {
                let u = rng.uniform();
                let p = rational::to_f64(p);
                let a = rational::to_f64(a_sq).sqrt();
                if u < p {
                    a
                } else if u < 2.0 * p {
                    -a
                } else {
                    0.0
                }
            }
            AtomKind::ParetoSym { alpha, scale_sq } => {
                let xm = rational::to_f64(scale_sq).sqrt();
                let alpha = rational::to_f64(alpha);
                rng.sign() * xm * rng.uniform_open0().powf(-1.0 / alpha)
            }
            AtomKind::Discrete { atoms } => {
                let u = rng.uniform();
                let mut acc = 0.0;
                for (v, p) in atoms {
                    acc += rational::to_f64(p);
                    if u < acc {
                        return rational::to_f64(v);
                    }
                }
                rational::to_f64(&atoms[atoms.len() - 1].0)
            }
        }
    }

    /// Exact `E[Re(x)^r Im(x)^s]`, derived from the joint moments.
    pub fn real_imag_moment(&self, r: u32, s: u32) -> Result<Moment> {
        if !self.is_complex() {
            if s > 0 {
                return Ok(Moment::Finite(Rational::zero()));
            }
            return self.moment(r, 0);
        }
        // (x + x̄)^r (x − x̄)^s / (2^{r+s} i^s)
        let mut sum = Rational::zero();
        for p in 0..=r {
            for q in 0..=s {
                let sign = if (s - q).is_multiple_of(2) { 1 } else { -1 };
                let coeff = Rational::from_integer(binomial(r, p) * binomial(s, q) * BigInt::from(sign));
                match self.moment(p + q, (r - p) + (s - q))? {
                    Moment::Finite(m) => sum += coeff * m,
                    Moment::Infinite => return Ok(Moment::Infinite),
                }
            }
        }
        let scale = Rational::from_integer(num_traits::pow(BigInt::from(2), (r + s) as usize));
        if s % 2 == 1 {
            // Real-valued joint moments make this sum vanish for odd s.
            if sum.is_zero() {
                return Ok(Moment::Finite(Rational::zero()));
            }
            return Err(Error::InvalidAtom(format!("{self}: joint moments are not conjugation symmetric")));
        }
        let i_pow_s = if (s / 2).is_multiple_of(2) { int(1) } else { int(-1) };
        Ok(Moment::Finite(sum / (scale * i_pow_s)))
    }
}

fn binomial(n: u32, k: u32) -> BigInt {
    factorial(n) / (factorial(k) * factorial(n - k))
}

/// Where a moment mismatch was found.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Site {
    Diagonal,
    OffDiagonal,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MomentMismatch {
    pub site: Site,
    pub r: u32,
    pub s: u32,
    pub found: Moment,
    pub expected: Rational,
}

/// Reference diagonal/off-diagonal specs of the Gaussian ensemble for `beta`.
pub fn gaussian_reference(beta: u8) -> (AtomSpec, AtomSpec) {
    if beta == 1 {
        (AtomSpec::gauss_real(int(2)), AtomSpec::gauss_real(int(1)))
    } else {
        (AtomSpec::gauss_real(int(1)), AtomSpec::gauss_complex(int(1)))
    }
}

/// Lists the `(r, s)` pairs with `E[Re^r Im^s]` differing from the GOE/GUE
/// reference: orders `r + s ≤ m − 2` on the diagonal, `r + s ≤ m` off it.
pub fn goe_gue_match_check(diag: &AtomSpec, off: &AtomSpec, beta: u8, m: u32) -> Result<Vec<MomentMismatch>> {
    if m < 2 {
        return Err(Error::InvalidArgument(format!("moment order m = {m} must be >= 2")));
    }
    if beta != 1 && beta != 2 {
        return Err(Error::InvalidArgument(format!("beta = {beta}")));
    }
    let (g_diag, g_off) = gaussian_reference(beta);
    let mut out = Vec::new();
    for (site, spec, reference, order) in [
        (Site::Diagonal, diag, &g_diag, m - 2),
        (Site::OffDiagonal, off, &g_off, m),
    ] {
        for total in 1..=order {
            for r in (0..=total).rev() {
                let s = total - r;
                let expected = reference.real_imag_moment(r, s)?.finite().expect("gaussian moments finite");
                let found = spec.real_imag_moment(r, s)?;
                if found != Moment::Finite(expected.clone()) {
                    out.push(MomentMismatch { site, r, s, found, expected });
                }
            }
        }
    }
    Ok(out)
}

impl fmt::Display for AtomSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            AtomKind::GaussReal { variance } => write!(f, "kind=gauss-real sigma2={variance}"),
            AtomKind::GaussComplex { variance } => write!(f, "kind=gauss-complex v={variance}"),
            AtomKind::Rademacher => write!(f, "kind=rademacher"),
            AtomKind::UniformSym { half_width_sq } => write!(f, "kind=uniform-sym half-width-sq={half_width_sq}"),
            AtomKind::TwoPointSym { a_sq, p } => write!(f, "kind=two-point-sym a2={a_sq} p={p}"),
            AtomKind::ParetoSym { alpha, scale_sq } => write!(f, "kind=pareto-sym alpha={alpha} scale2={scale_sq}"),
            AtomKind::Discrete { atoms } => {
                let list: Vec<String> = atoms.iter().map(|(v, p)| format!("{v}:{p}")).collect();
                write!(f, "kind=discrete atoms={}", list.join(","))
            }
        }
    }
}

impl FromStr for AtomSpec {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut kind = None;
        let mut params: Vec<(&str, &str)> = Vec::new();
        for token in text.split_whitespace() {
            let (key, value) = token
                .split_once('=')
                .ok_or_else(|| Error::InvalidAtom(format!("expected key=value, got {token:?}")))?;
            if key == "kind" {
                kind = Some(value);
            } else {
                params.push((key, value));
            }
        }
        let kind = kind.ok_or_else(|| Error::InvalidAtom(format!("missing kind= in {text:?}")))?;
        let mut take = |key: &str| -> Result<Option<Rational>> {
            match params.iter().position(|(k, _)| *k == key) {
                Some(pos) => {
                    let (_, v) = params.remove(pos);
                    Ok(Some(parse_rational(v)?))
                }
                None => Ok(None),
            }
        };
        let spec = match kind {
            "gauss-real" => AtomSpec::gauss_real(take("sigma2")?.unwrap_or_else(|| int(1))),
            "gauss-complex" => AtomSpec::gauss_complex(take("v")?.unwrap_or_else(|| int(1))),
            "rademacher" => AtomSpec::rademacher(),
            "uniform-sym" => AtomSpec {
                kind: AtomKind::UniformSym { half_width_sq: take("half-width-sq")?.unwrap_or_else(|| int(3)) },
            },
            "two-point-sym" => match take("m4")? {
                Some(m4) => AtomSpec::two_point_m4(m4)?,
                None => {
                    let a_sq = take("a2")?.ok_or_else(|| Error::InvalidAtom("two-point-sym needs m4= or a2=".into()))?;
                    let p = match take("p")? {
                        Some(p) => p,
                        None => Rational::one() / (int(2) * &a_sq),
                    };
                    AtomSpec { kind: AtomKind::TwoPointSym { a_sq, p } }
                }
            },
            "pareto-sym" => {
                let alpha = take("alpha")?.unwrap_or_else(|| ratio(11, 5));
                match take("scale2")? {
                    Some(scale_sq) => AtomSpec { kind: AtomKind::ParetoSym { alpha, scale_sq } },
                    None => AtomSpec::pareto_unit(alpha)?,
                }
            }
            "discrete" => {
                let pos = params
                    .iter()
                    .position(|(k, _)| *k == "atoms")
                    .ok_or_else(|| Error::InvalidAtom("discrete needs atoms=v:p,...".into()))?;
                let (_, list) = params.remove(pos);
                let atoms = list
                    .split(',')
                    .map(|item| {
                        let (v, p) = item
                            .split_once(':')
                            .ok_or_else(|| Error::InvalidAtom(format!("bad atom {item:?}")))?;
                        Ok((parse_rational(v)?, parse_rational(p)?))
                    })
                    .collect::<Result<Vec<_>>>()?;
                AtomSpec { kind: AtomKind::Discrete { atoms } }
            }
            other => return Err(Error::InvalidAtom(format!("unknown kind {other:?}"))),
        };
        if let Some((k, _)) = params.first() {
            return Err(Error::InvalidAtom(format!("unknown key {k:?} for kind {kind}")));
        }
        spec.validate()?;
        Ok(spec)
    }
}

/// Largest finite moment order `k` such that `E|x|^k < ∞` (capped at `cap`).
pub fn finite_order(spec: &AtomSpec, cap: u32) -> u32 {
    (0..=cap)
        .take_while(|&k| {
            let m = if spec.is_complex() { spec.moment(k / 2, k - k / 2) } else { spec.moment(k, 0) };
            matches!(m, Ok(Moment::Finite(_)))
        })
        .last()
        .unwrap_or(0)
}

/// f64 view of an exact moment, `NaN` when the oracle errors.
pub fn moment_f64(spec: &AtomSpec, a: u32, b: u32) -> f64 {
    spec.moment(a, b).map(|m| m.to_f64()).unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shipped_moment_values() {
        assert_eq!(AtomSpec::rademacher().moment(4, 0).unwrap(), Moment::Finite(int(1)));
        assert_eq!(AtomSpec::gauss_real(int(1)).moment(4, 0).unwrap(), Moment::Finite(int(3)));
        assert_eq!(AtomSpec::gauss_complex(int(1)).moment(2, 2).unwrap(), Moment::Finite(int(2)));
        assert_eq!(AtomSpec::uniform_unit().moment(4, 0).unwrap(), Moment::Finite(ratio(9, 5)));
    }

    #[test]
    fn uniform_fourth_moment_matches_integral() {
        // ∫_{-h}^{h} x⁴ dx / (2h) = h⁴/5, h² = 3
        let h = 3f64.sqrt();
        let steps = 100_000;
        let dx = 2.0 * h / steps as f64;
        let integral: f64 = (0..steps)
            .map(|i| {
                let x = -h + (i as f64 + 0.5) * dx;
                x.powi(4) * dx / (2.0 * h)
            })
            .sum();
        assert!((integral - 1.8).abs() < 1e-8);
    }

    #[test]
    fn real_spec_rejects_conjugates() {
        assert!(matches!(AtomSpec::rademacher().moment(1, 1), Err(Error::ConjugateOfReal(_))));
    }

    #[test]
    fn pareto_reports_divergence() {
        let p = AtomSpec::heavy_tail();
        assert_eq!(p.moment(2, 0).unwrap(), Moment::Finite(int(1)));
        assert_eq!(p.moment(4, 0).unwrap(), Moment::Infinite);
        assert_eq!(p.moment(3, 0).unwrap(), Moment::Infinite);
        assert_eq!(p.moment(1, 0).unwrap(), Moment::Finite(int(0)));
        assert_eq!(finite_order(&p, 12), 2);
    }

    #[test]
    fn odd_moments_vanish_for_symmetric_kinds() {
        let specs = [
            AtomSpec::gauss_real(int(2)),
            AtomSpec::rademacher(),
            AtomSpec::uniform_unit(),
            AtomSpec::two_point_m4(int(3)).unwrap(),
        ];
        for spec in &specs {
            for k in [1, 3, 5, 7] {
                assert_eq!(spec.moment(k, 0).unwrap(), Moment::Finite(int(0)), "{spec}");
            }
        }
        let c = AtomSpec::gauss_complex(int(1));
        assert_eq!(c.moment(2, 1).unwrap(), Moment::Finite(int(0)));
    }

    #[test]
    fn off_diagonal_specs_have_unit_variance() {
        for spec in [
            AtomSpec::gauss_real(int(1)),
            AtomSpec::gauss_complex(int(1)),
            AtomSpec::rademacher(),
            AtomSpec::uniform_unit(),
            AtomSpec::two_point_m4(int(5)).unwrap(),
            AtomSpec::heavy_tail(),
            AtomSpec::skewed_m4_3(),
        ] {
            assert_eq!(spec.variance(), Moment::Finite(int(1)), "{spec}");
        }
    }

    #[test]
    fn two_point_tunes_fourth_moment() {
        let s = AtomSpec::two_point_m4(int(3)).unwrap();
        assert_eq!(s.fourth_moment(), Moment::Finite(int(3)));
        assert_eq!(s.moment(6, 0).unwrap(), Moment::Finite(int(9)));
    }

    #[test]
    fn skewed_law_has_third_moment_one() {
        let s = AtomSpec::skewed_m4_3();
        assert_eq!(s.moment(1, 0).unwrap(), Moment::Finite(int(0)));
        assert_eq!(s.moment(3, 0).unwrap(), Moment::Finite(int(1)));
        assert_eq!(s.moment(4, 0).unwrap(), Moment::Finite(int(3)));
    }

    #[test]
    fn gue_real_imag_moments() {
        let g = AtomSpec::gauss_complex(int(1));
        // Re, Im are independent N(0, 1/2)
        assert_eq!(g.real_imag_moment(2, 0).unwrap(), Moment::Finite(ratio(1, 2)));
        assert_eq!(g.real_imag_moment(0, 2).unwrap(), Moment::Finite(ratio(1, 2)));
        assert_eq!(g.real_imag_moment(2, 2).unwrap(), Moment::Finite(ratio(1, 4)));
        assert_eq!(g.real_imag_moment(4, 0).unwrap(), Moment::Finite(ratio(3, 4)));
        assert_eq!(g.real_imag_moment(1, 1).unwrap(), Moment::Finite(int(0)));
    }

    #[test]
    fn match_check_examples() {
        let goe_diag = AtomSpec::gauss_real(int(2));
        assert!(goe_gue_match_check(&goe_diag, &AtomSpec::gauss_real(int(1)), 1, 12).unwrap().is_empty());

        let rad = goe_gue_match_check(&goe_diag, &AtomSpec::rademacher(), 1, 4).unwrap();
        assert!(rad.iter().any(|m| m.site == Site::OffDiagonal && (m.r, m.s) == (4, 0)));

        assert!(goe_gue_match_check(&goe_diag, &AtomSpec::uniform_unit(), 1, 2).unwrap().is_empty());

        let (d, o) = gaussian_reference(2);
        assert!(goe_gue_match_check(&d, &o, 2, 8).unwrap().is_empty());

        let pareto = goe_gue_match_check(&goe_diag, &AtomSpec::heavy_tail(), 1, 4).unwrap();
        assert!(pareto.iter().any(|m| m.found == Moment::Infinite));
    }

    #[test]
    fn grammar_round_trips() {
        for text in [
            "kind=gauss-real sigma2=2",
            "kind=gauss-complex v=1",
            "kind=rademacher",
            "kind=uniform-sym half-width-sq=3",
            "kind=two-point-sym a2=3 p=1/6",
            "kind=pareto-sym alpha=11/5 scale2=1/11",
            "kind=discrete atoms=2:1/6,-1:1/3,0:1/2",
        ] {
            let spec: AtomSpec = text.parse().unwrap();
            assert_eq!(spec.to_string(), text);
        }
        assert_eq!("kind=two-point-sym m4=3".parse::<AtomSpec>().unwrap(), AtomSpec::two_point_m4(int(3)).unwrap());
        assert_eq!("kind=pareto-sym alpha=2.2".parse::<AtomSpec>().unwrap(), AtomSpec::heavy_tail());
        assert!("kind=rademacher foo=1".parse::<AtomSpec>().is_err());
        assert!("kind=nope".parse::<AtomSpec>().is_err());
        assert!("kind=discrete atoms=1:1/2,0:1/2".parse::<AtomSpec>().is_err());
    }

    #[test]
    fn sampler_support_and_centering() {
        let mut rng = RngStream::new(3);
        for _ in 0..1000 {
            let x = AtomSpec::rademacher().sample(&mut rng);
            assert!(x.re == 1.0 || x.re == -1.0);
            assert_eq!(x.im, 0.0);
        }
        let spec = AtomSpec::gauss_real(int(2));
        let n = 100_000;
        let mean: f64 = (0..n).map(|_| spec.sample(&mut rng).re).sum::<f64>() / n as f64;
        assert!(mean.abs() < 4.0 * 2f64.sqrt() / (n as f64).sqrt());
    }

    #[test]
    fn uniform_second_moment_statistically() {
        let mut rng = RngStream::new(5);
        let spec = AtomSpec::uniform_unit();
        let n = 100_000;
        let xs: Vec<f64> = (0..n).map(|_| spec.sample(&mut rng).re.powi(2)).collect();
        let mean = xs.iter().sum::<f64>() / n as f64;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        assert!((mean - 1.0).abs() < 3.0 * (var / n as f64).sqrt());
    }
}
