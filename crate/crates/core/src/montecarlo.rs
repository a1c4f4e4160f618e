//! Reproducible Monte Carlo harness.
//!
//! Trial `t` of a plan with seed `seed` draws its matrix from
//! [`RngStream::split`]`(seed, t)`. Trials run on a rayon pool and are
//! collected in trial order, so the report does not depend on the number of
//! workers.

use std::collections::hash_map::Entry;
use std::collections::HashMap;
use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::matrices::{build_wigner, spectral_decomposition, EnsembleSpec};
use crate::process::{build_bridge_grid, lattice_index, BridgeGrid};
use crate::rng::RngStream;
use crate::spectral_stats::diag_power;

/// Environment variable read for the default worker count.
pub const WORKERS_ENV: &str = "WIGNER_LAB_WORKERS";

/// A scalar evaluated on every trial.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Observable {
    /// `B(s,t)`.
    BridgePoint { s: f64, t: f64 },
    /// `T(s,k)`.
    TStat { s: f64, k: usize },
    /// Increment of `B` over `(s,s2] × (t,t2]`.
    RectIncrement { s: f64, s2: f64, t: f64, t2: f64 },
    /// Largest jump of `B`.
    MaxJump,
    /// `||u_ij|² − 1/n|` with one-based `i, j`.
    HeatmapCell { i: usize, j: usize },
}

impl Observable {
    pub fn validate(&self, n: usize) -> Result<()> {
        let unit = |x: f64| (0.0..=1.0).contains(&x);
        let bad = |msg: String| Err(Error::InvalidArgument(format!("{self}: {msg}")));
        match *self {
            Observable::BridgePoint { s, t } if !(unit(s) && unit(t)) => bad("times must lie in [0,1]".into()),
            Observable::TStat { s, k } => {
                if !unit(s) {
                    bad("s must lie in [0,1]".into())
                } else if k == 0 || k > crate::spectral_stats::MAX_POWER {
                    bad(format!("k must lie in 1..={}", crate::spectral_stats::MAX_POWER))
                } else {
                    Ok(())
                }
            }
            Observable::RectIncrement { s, s2, t, t2 } => {
                if !(unit(s) && unit(s2) && unit(t) && unit(t2)) || s >= s2 || t >= t2 {
                    bad("need 0 <= s < s2 <= 1 and 0 <= t < t2 <= 1".into())
                } else {
                    Ok(())
                }
            }
            Observable::HeatmapCell { i, j } if i == 0 || j == 0 || i > n || j > n => {
                bad(format!("cell indices must lie in 1..={n}"))
            }
            _ => Ok(()),
        }
    }

    fn needs_spectrum(&self) -> bool {
        !matches!(self, Observable::TStat { .. })
    }
}

impl fmt::Display for Observable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Observable::BridgePoint { s, t } => write!(f, "bridge:{s},{t}"),
            Observable::TStat { s, k } => write!(f, "tstat:{s},{k}"),
            Observable::RectIncrement { s, s2, t, t2 } => write!(f, "rect:{s},{s2},{t},{t2}"),
            Observable::MaxJump => f.write_str("maxjump"),
            Observable::HeatmapCell { i, j } => write!(f, "cell:{i},{j}"),
        }
    }
}

/// Parses the [`Display`](fmt::Display) form, e.g. `bridge:0.5,0.5`,
/// `tstat:0.3,2`, `rect:0.1,0.2,0.3,0.5`, `maxjump`, `cell:1,4`.
impl FromStr for Observable {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let text = text.trim();
        let bad = || Error::InvalidArgument(format!("cannot parse observable {text:?}"));
        let (kind, args) = text.split_once(':').unwrap_or((text, ""));
        let nums: Vec<&str> = if args.is_empty() { Vec::new() } else { args.split(',').map(str::trim).collect() };
        let f = |i: usize| nums[i].parse::<f64>().map_err(|_| bad());
        let u = |i: usize| nums[i].parse::<usize>().map_err(|_| bad());
        match (kind, nums.len()) {
            ("bridge", 2) => Ok(Observable::BridgePoint { s: f(0)?, t: f(1)? }),
            ("tstat", 2) => Ok(Observable::TStat { s: f(0)?, k: u(1)? }),
            ("rect", 4) => Ok(Observable::RectIncrement { s: f(0)?, s2: f(1)?, t: f(2)?, t2: f(3)? }),
            ("maxjump", 0) => Ok(Observable::MaxJump),
            ("cell", 2) => Ok(Observable::HeatmapCell { i: u(0)?, j: u(1)? }),
            _ => Err(bad()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentPlan {
    pub ensemble: EnsembleSpec,
    pub trials: usize,
    pub seed: u64,
    pub observables: Vec<Observable>,
    /// `None` uses [`WORKERS_ENV`] or else rayon's default.
    pub workers: Option<usize>,
}

impl ExperimentPlan {
    pub fn new(ensemble: EnsembleSpec, trials: usize, seed: u64, observables: Vec<Observable>) -> Self {
        ExperimentPlan { ensemble, trials, seed, observables, workers: None }
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = Some(workers);
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.ensemble.validate()?;
        if self.trials == 0 {
            return Err(Error::InvalidArgument("trials must be at least 1".into()));
        }
        if self.observables.is_empty() {
            return Err(Error::InvalidArgument("no observables requested".into()));
        }
        self.observables.iter().try_for_each(|o| o.validate(self.ensemble.n))
    }
}

/// Summary of one observable. Dispersion fields are `None` with a single trial.
#[derive(Debug, Clone, PartialEq)]
pub struct Estimate {
    pub observable: Observable,
    pub mean: f64,
    pub variance: Option<f64>,
    pub se: Option<f64>,
    pub kurtosis: Option<f64>,
    pub trials: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EstimateReport {
    pub estimates: Vec<Estimate>,
    /// Unbiased covariance between observables, `None` with a single trial.
    pub covariance: Option<Vec<Vec<f64>>>,
    /// `samples[o][t]`: value of observable `o` on the `t`-th successful trial.
    pub samples: Vec<Vec<f64>>,
    /// Indices of trials whose eigensolver failed.
    pub failed: Vec<usize>,
}

impl EstimateReport {
    pub fn estimate(&self, observable: &Observable) -> Option<&Estimate> {
        self.estimates.iter().find(|e| &e.observable == observable)
    }
}

fn evaluate(plan: &ExperimentPlan, trial: usize) -> Result<Vec<f64>> {
    let mut rng = RngStream::split(plan.seed, trial as u64);
    let x = build_wigner(&plan.ensemble, &mut rng);
    let n = x.n();
    let grid: Option<BridgeGrid> = if plan.observables.iter().any(Observable::needs_spectrum) {
        Some(build_bridge_grid(&spectral_decomposition(&x)?))
    } else {
        None
    };
    let mut powers: HashMap<usize, (Vec<f64>, f64)> = HashMap::new();
    plan.observables
        .iter()
        .map(|o| {
            Ok(match *o {
                Observable::TStat { s, k } => {
                    let (d, mean) = match powers.entry(k) {
                        Entry::Occupied(e) => e.into_mut(),
                        Entry::Vacant(e) => {
                            let d = diag_power(&x, k)?;
                            let mean = d.iter().sum::<f64>() / n as f64;
                            e.insert((d, mean))
                        }
                    };
                    d[..lattice_index(n, s)].iter().map(|v| v - *mean).sum()
                }
                Observable::BridgePoint { s, t } => grid.as_ref().expect("spectrum").eval(s, t),
                Observable::RectIncrement { s, s2, t, t2 } => {
                    grid.as_ref().expect("spectrum").rect_increment(s, s2, t, t2)?
                }
                Observable::MaxJump => grid.as_ref().expect("spectrum").max_jump(),
                Observable::HeatmapCell { i, j } => {
                    let g = grid.as_ref().expect("spectrum");
                    (g.cell(i - 1, j - 1) / (g.beta() as f64 / 2.0).sqrt()).abs()
                }
            })
        })
        .collect()
}

/// Worker count from the plan, then [`WORKERS_ENV`], then rayon's default.
pub fn resolve_workers(requested: Option<usize>) -> Option<usize> {
    requested.or_else(|| std::env::var(WORKERS_ENV).ok().and_then(|v| v.trim().parse().ok())).filter(|&w| w > 0)
}

/// Runs every trial and summarizes. More than 1% failed trials is an error.
pub fn run(plan: &ExperimentPlan) -> Result<EstimateReport> {
    plan.validate()?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(w) = resolve_workers(plan.workers) {
        builder = builder.num_threads(w);
    }
    let pool = builder.build().map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
    let outcomes: Vec<Result<Vec<f64>>> =
        pool.install(|| (0..plan.trials).into_par_iter().map(|t| evaluate(plan, t)).collect());

    let mut failed = Vec::new();
    let mut samples = vec![Vec::with_capacity(plan.trials); plan.observables.len()];
    for (t, outcome) in outcomes.into_iter().enumerate() {
        match outcome {
            Ok(values) => samples.iter_mut().zip(values).for_each(|(col, v)| col.push(v)),
            Err(Error::EigenNoConvergence { .. }) => {
                log::warn!("trial {t} failed: eigensolver did not converge");
                failed.push(t);
            }
            Err(e) => return Err(e),
        }
    }
    if failed.len() * 100 > plan.trials || samples.first().is_some_and(Vec::is_empty) {
        return Err(Error::TooManyFailures { failed: failed.len(), trials: plan.trials });
    }

    let estimates = plan.observables.iter().zip(&samples).map(|(o, xs)| summarize(*o, xs)).collect();
    let covariance = if samples[0].len() >= 2 {
        Some(
            samples
                .iter()
                .map(|x| samples.iter().map(|y| cov_estimate(x, y).expect("equal lengths").0).collect())
                .collect(),
        )
    } else {
        None
    };
    Ok(EstimateReport { estimates, covariance, samples, failed })
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

fn summarize(observable: Observable, xs: &[f64]) -> Estimate {
    let trials = xs.len();
    let m = mean(xs);
    if trials < 2 {
        return Estimate { observable, mean: m, variance: None, se: None, kurtosis: None, trials };
    }
    let var = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (trials - 1) as f64;
    Estimate {
        observable,
        mean: m,
        variance: Some(var),
        se: Some((var / trials as f64).sqrt()),
        kurtosis: kurtosis(xs),
        trials,
    }
}

/// `m₄ / m₂²` from central sample moments; `None` for constant samples.
pub fn kurtosis(xs: &[f64]) -> Option<f64> {
    if xs.len() < 2 {
        return None;
    }
    let m = mean(xs);
    let m2 = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / xs.len() as f64;
    let m4 = xs.iter().map(|x| (x - m).powi(4)).sum::<f64>() / xs.len() as f64;
    (m2 > 0.0).then(|| m4 / (m2 * m2))
}

/// Unbiased sample variance and the standard error of that estimate,
/// `sd((x − x̄)²) / √N`.
pub fn var_estimate(xs: &[f64]) -> Result<(f64, f64)> {
    cov_estimate(xs, xs)
}

/// Unbiased sample covariance and its standard error, the sample standard
/// deviation of the products `(x − x̄)(y − ȳ)` over `√N`.
pub fn cov_estimate(xs: &[f64], ys: &[f64]) -> Result<(f64, f64)> {
    if xs.len() != ys.len() {
        return Err(Error::LengthMismatch(xs.len(), ys.len()));
    }
    let n = xs.len();
    if n < 2 {
        return Err(Error::InvalidArgument("covariance needs at least 2 samples".into()));
    }
    let (mx, my) = (mean(xs), mean(ys));
    let products: Vec<f64> = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).collect();
    let cov = products.iter().sum::<f64>() / (n - 1) as f64;
    let pm = mean(&products);
    let pvar = products.iter().map(|p| (p - pm).powi(2)).sum::<f64>() / (n - 1) as f64;
    Ok((cov, (pvar / n as f64).sqrt()))
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(|| "NA".to_string(), |x| format!("{x:e}"))
}

/// `observable,mean,var,se,kurtosis,trials`.
pub fn write_report_csv(report: &EstimateReport, out: &mut impl Write) -> std::io::Result<()> {
    writeln!(out, "observable,mean,var,se,kurtosis,trials")?;
    for e in &report.estimates {
        writeln!(
            out,
            "{},{:e},{},{},{},{}",
            e.observable,
            e.mean,
            opt(e.variance),
            opt(e.se),
            opt(e.kurtosis),
            e.trials
        )?;
    }
    Ok(())
}

/// One row per successful trial, one column per observable.
pub fn write_raw_csv(report: &EstimateReport, out: &mut impl Write) -> std::io::Result<()> {
    let names: Vec<String> = report.estimates.iter().map(|e| format!("\"{}\"", e.observable)).collect();
    writeln!(out, "trial,{}", names.join(","))?;
    let trials = report.samples.first().map_or(0, Vec::len);
    for t in 0..trials {
        let row: Vec<String> = report.samples.iter().map(|col| format!("{:e}", col[t])).collect();
        writeln!(out, "{t},{}", row.join(","))?;
    }
    Ok(())
}

/// Long-form covariance matrix `a,b,cov,se`.
pub fn write_covariance_csv(report: &EstimateReport, out: &mut impl Write) -> std::io::Result<()> {
    writeln!(out, "a,b,cov,se")?;
    for (i, x) in report.samples.iter().enumerate() {
        for (j, y) in report.samples.iter().enumerate().skip(i) {
            let (c, se) = cov_estimate(x, y).map_or((None, None), |(c, s)| (Some(c), Some(s)));
            writeln!(
                out,
                "\"{}\",\"{}\",{},{}",
                report.estimates[i].observable,
                report.estimates[j].observable,
                opt(c),
                opt(se)
            )?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn observable_round_trip() {
        for text in ["bridge:0.5,0.25", "tstat:0.3,2", "rect:0.1,0.2,0.3,0.5", "maxjump", "cell:1,4"] {
            let o: Observable = text.parse().unwrap();
            assert_eq!(o.to_string(), text);
        }
        assert!("bridge:0.5".parse::<Observable>().is_err());
        assert!("nope".parse::<Observable>().is_err());
    }

    #[test]
    fn validation() {
        let spec = EnsembleSpec::goe(10);
        let bad = ExperimentPlan::new(spec.clone(), 5, 1, vec![Observable::HeatmapCell { i: 11, j: 1 }]);
        assert!(bad.validate().is_err());
        let bad = ExperimentPlan::new(spec.clone(), 0, 1, vec![Observable::MaxJump]);
        assert!(bad.validate().is_err());
        let bad = ExperimentPlan::new(spec, 3, 1, vec![Observable::RectIncrement { s: 0.5, s2: 0.5, t: 0.0, t2: 1.0 }]);
        assert!(bad.validate().is_err());
    }

    #[test]
    fn single_trial_on_the_border() {
        let plan = ExperimentPlan::new(EnsembleSpec::goe(8), 1, 3, vec![Observable::BridgePoint { s: 1.0, t: 0.4 }]);
        let r = run(&plan).unwrap();
        let e = &r.estimates[0];
        assert!(e.mean.abs() < 1e-12);
        assert_eq!(e.variance, None);
        assert!(r.covariance.is_none());
    }

    #[test]
    fn worker_count_does_not_change_output() {
        let obs = vec![
            Observable::BridgePoint { s: 0.5, t: 0.5 },
            Observable::TStat { s: 0.3, k: 3 },
            Observable::MaxJump,
        ];
        let plan = ExperimentPlan::new(EnsembleSpec::gue(12), 40, 99, obs);
        let a = run(&plan.clone().with_workers(1)).unwrap();
        let b = run(&plan.with_workers(4)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn estimator_edge_cases() {
        let c = [2.0; 10];
        assert_eq!(cov_estimate(&c, &c).unwrap(), (0.0, 0.0));
        let x = [1.0, 4.0, 2.0, 8.0];
        let (v, _) = cov_estimate(&x, &x).unwrap();
        let m = 15.0 / 4.0;
        let direct = x.iter().map(|a| (a - m) * (a - m)).sum::<f64>() / 3.0;
        assert!((v - direct).abs() < 1e-14);
        assert!(matches!(cov_estimate(&x, &x[..3]), Err(Error::LengthMismatch(4, 3))));
        assert_eq!(kurtosis(&c), None);
        // symmetric two-point sample: kurtosis 1
        assert!((kurtosis(&[1.0, -1.0, 1.0, -1.0]).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn csv_writers() {
        let plan = ExperimentPlan::new(
            EnsembleSpec::goe(6),
            5,
            1,
            vec![Observable::TStat { s: 0.5, k: 2 }, Observable::HeatmapCell { i: 1, j: 1 }],
        );
        let r = run(&plan).unwrap();
        let mut buf = Vec::new();
        write_report_csv(&r, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("observable,mean,var,se,kurtosis,trials\ntstat:0.5,2,"));
        assert_eq!(text.lines().count(), 3);
        let mut buf = Vec::new();
        write_raw_csv(&r, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap().lines().count(), 6);
        let mut buf = Vec::new();
        write_covariance_csv(&r, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap().lines().count(), 4);
    }
}
