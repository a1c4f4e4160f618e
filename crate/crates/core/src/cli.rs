//! `wigner-lab` subcommands.
//!
//! Every file written starts with `#` comment lines carrying the crate
//! version, the subcommand and its fully resolved settings, seed included.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_traits::{One, Zero};

use crate::atoms::AtomSpec;
use crate::combinatorics::{
    finite_n_cov, haar_pair_moment, limit_cov, limit_cov_centered, limit_cov_trace, IndexPattern,
};
use crate::config::Config;
use crate::error::{Error, Result};
use crate::matrices::{build_wigner, haar_sample, spectral_decomposition, EnsembleSpec, HaarGroup};
use crate::montecarlo::{
    run as run_plan, write_covariance_csv, write_raw_csv, write_report_csv, ExperimentPlan, Observable, WORKERS_ENV,
};
use crate::process::{
    bridge_moment_integral, build_bridge_grid, empirical_cdf, signed_cdf_moment, write_heatmap_csv, SignedMeasure,
};
use crate::rational::{display_exact, int, parse_rational, to_f64, Rational};
use crate::rng::RngStream;
use crate::spectral_stats::{t_stat_power, t_stat_spectral, write_t_stat_csv, TStatRow, TraceStatistic};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Parser)]
#[command(name = "wigner-lab", version, about = "Eigenvector overlap fluctuations of Wigner matrices")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Monte Carlo estimates of the overlap field on a grid.
    Simulate(SimulateArgs),
    /// Exact limiting covariance of two trace statistics.
    LimitCov(LimitCovArgs),
    /// |u_ij|^2 - 1/n for one sampled matrix, long-form CSV.
    Heatmap(HeatmapArgs),
    /// Haar second moments: Weingarten values against Monte Carlo.
    Weingarten(WeingartenArgs),
    /// Median maximal jump across sizes.
    Jumps(JumpsArgs),
    /// Quick self-checks of the main identities.
    Check(CheckArgs),
    /// Per-trial trace statistics, CSV `trial,s,k,value`.
    TStats(TStatsArgs),
    /// Write one sampled matrix in text form.
    Dump(DumpArgs),
}

#[derive(Debug, Args, Default)]
pub struct EnsembleArgs {
    /// Key-value configuration file; flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// goe, gue, pareto, rademacher, uniform, skewed, two-point:<m4>.
    #[arg(long)]
    pub ensemble: Option<String>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Diagonal law, e.g. "kind=gauss-real sigma2=2".
    #[arg(long)]
    pub diag: Option<String>,
    /// Off-diagonal law, e.g. "kind=rademacher".
    #[arg(long)]
    pub offdiag: Option<String>,
}

impl EnsembleArgs {
    fn config(&self) -> Result<Config> {
        let base = match &self.config {
            Some(p) => Config::from_file(p)?,
            None => Config::default(),
        };
        let mut flags = Config { ensemble: self.ensemble.clone(), n: self.n, seed: self.seed, ..Config::default() };
        if let Some(d) = &self.diag {
            flags.set("diag", d)?;
        }
        if let Some(o) = &self.offdiag {
            flags.set("offdiag", o)?;
        }
        Ok(base.merged(flags))
    }
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub ensemble: EnsembleArgs,
    #[arg(long)]
    pub trials: Option<usize>,
    /// Grid step; bridge points are taken at interior multiples of it.
    #[arg(long)]
    pub grid: Option<f64>,
    /// Extra observables separated by ';', e.g. "tstat:0.5,2; maxjump".
    #[arg(long)]
    pub observables: Option<String>,
    /// Report CSV (stdout when absent).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Per-trial values.
    #[arg(long)]
    pub raw: Option<PathBuf>,
    /// Covariance between all observables.
    #[arg(long)]
    pub cov: Option<PathBuf>,
    #[arg(long, env = WORKERS_ENV)]
    pub workers: Option<usize>,
}

#[derive(Debug, Args)]
pub struct LimitCovArgs {
    #[arg(long)]
    pub k1: usize,
    #[arg(long)]
    pub k2: usize,
    #[arg(long, default_value = "1")]
    pub s1: String,
    #[arg(long, default_value = "1")]
    pub s2: String,
    /// Off-diagonal fourth moment; uses a unit-variance two-point law.
    #[arg(long, conflicts_with = "offdiag")]
    pub m4: Option<String>,
    #[arg(long, default_value = "kind=gauss-real sigma2=2")]
    pub diag: String,
    #[arg(long)]
    pub offdiag: Option<String>,
    /// Report the mean-centered covariance instead.
    #[arg(long)]
    pub centered: bool,
    /// List every contributing partition.
    #[arg(long)]
    pub trace: bool,
    /// Also compare with the exact finite-n value at this size (n <= 6).
    #[arg(long)]
    pub finite_n: Option<usize>,
}

#[derive(Debug, Args)]
pub struct HeatmapArgs {
    #[command(flatten)]
    pub ensemble: EnsembleArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct WeingartenArgs {
    #[arg(long, default_value_t = 8)]
    pub n: usize,
    #[arg(long, default_value_t = 100_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct JumpsArgs {
    #[command(flatten)]
    pub ensemble: EnsembleArgs,
    /// Comma separated sizes.
    #[arg(long, default_value = "50,100,200,400")]
    pub n_list: String,
    #[arg(long, default_value_t = 50)]
    pub trials: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, env = WORKERS_ENV)]
    pub workers: Option<usize>,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct TStatsArgs {
    #[command(flatten)]
    pub ensemble: EnsembleArgs,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    #[arg(long, default_value = "0.5")]
    pub s_list: String,
    #[arg(long, default_value = "2")]
    pub k_list: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DumpArgs {
    #[command(flatten)]
    pub ensemble: EnsembleArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn open_out(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout())),
    })
}

/// `#`-prefixed provenance lines.
fn write_header(out: &mut dyn Write, command: &str, settings: &str) -> io::Result<()> {
    writeln!(out, "# wigner-lab {VERSION}")?;
    writeln!(out, "# command = {command}")?;
    for line in settings.lines() {
        writeln!(out, "# {line}")?;
    }
    Ok(())
}

/// Fills defaults so the header echoes every setting in effect.
fn resolve(mut cfg: Config, default_n: usize) -> Result<(Config, EnsembleSpec)> {
    cfg.ensemble.get_or_insert_with(|| "goe".to_string());
    let spec = cfg.resolve_ensemble(default_n)?;
    cfg.n = Some(spec.n);
    cfg.seed.get_or_insert(1);
    Ok((cfg, spec))
}

fn parse_list<T: std::str::FromStr>(text: &str, what: &str) -> Result<Vec<T>> {
    text.split(',')
        .map(|t| t.trim().parse().map_err(|_| Error::InvalidArgument(format!("bad {what} {t:?}"))))
        .collect()
}

/// Interior multiples of `step` in `(0, 1)`.
pub fn grid_points(step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0 && step <= 1.0) {
        return Err(Error::InvalidArgument(format!("grid step {step} outside (0,1]")));
    }
    let count = (1.0 / step + 1e-9).floor() as usize;
    Ok((1..=count).map(|k| k as f64 * step).filter(|&x| x < 1.0 - 1e-12).collect())
}

/// Executes a parsed command line and returns the process exit code.
pub fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Simulate(a) => simulate(a),
        Command::LimitCov(a) => limit_cov_cmd(a),
        Command::Heatmap(a) => heatmap(a),
        Command::Weingarten(a) => weingarten_cmd(a),
        Command::Jumps(a) => jumps(a),
        Command::Check(a) => check(a),
        Command::TStats(a) => t_stats(a),
        Command::Dump(a) => dump(a),
    }
}

fn simulate(a: SimulateArgs) -> Result<i32> {
    let mut flags = Config {
        trials: a.trials,
        grid: a.grid,
        out: a.out.clone(),
        raw: a.raw.clone(),
        workers: a.workers,
        ..Config::default()
    };
    if let Some(obs) = &a.observables {
        flags.set("observables", obs)?;
    }
    let (mut cfg, spec) = resolve(a.ensemble.config()?.merged(flags), 100)?;
    cfg.trials = Some(cfg.trials.unwrap_or(100));
    let mut observables = Vec::new();
    if let Some(step) = cfg.grid {
        let pts = grid_points(step)?;
        for &s in &pts {
            for &t in &pts {
                observables.push(Observable::BridgePoint { s, t });
            }
        }
    }
    observables.extend(cfg.observables.clone().unwrap_or_default());
    if observables.is_empty() {
        cfg.grid = Some(0.5);
        observables.push(Observable::BridgePoint { s: 0.5, t: 0.5 });
    }
    let mut plan = ExperimentPlan::new(spec, cfg.trials.unwrap_or(100), cfg.seed.unwrap_or(1), observables);
    plan.workers = cfg.workers;
    let report = run_plan(&plan)?;
    let settings = format!("{cfg}diag law = {}\noffdiag law = {}\nbeta = {}", plan.ensemble.diag, plan.ensemble.offdiag, plan.ensemble.beta);

    let mut out = open_out(cfg.out.as_deref())?;
    write_header(&mut out, "simulate", &settings)?;
    write_report_csv(&report, &mut out)?;
    out.flush()?;
    if let Some(p) = &cfg.raw {
        let mut raw = open_out(Some(p))?;
        write_header(&mut raw, "simulate", &settings)?;
        write_raw_csv(&report, &mut raw)?;
        raw.flush()?;
    }
    if let Some(p) = &a.cov {
        let mut cov = open_out(Some(p))?;
        write_header(&mut cov, "simulate", &settings)?;
        write_covariance_csv(&report, &mut cov)?;
        cov.flush()?;
    }
    if !report.failed.is_empty() {
        log::warn!("{} trials failed: {:?}", report.failed.len(), report.failed);
    }
    Ok(0)
}

fn limit_cov_cmd(a: LimitCovArgs) -> Result<i32> {
    let s1 = parse_rational(&a.s1)?;
    let s2 = parse_rational(&a.s2)?;
    let diag: AtomSpec = a.diag.parse()?;
    let off: AtomSpec = match (&a.m4, &a.offdiag) {
        (Some(m4), _) => AtomSpec::two_point_m4(parse_rational(m4)?)?,
        (None, Some(spec)) => spec.parse()?,
        (None, None) => AtomSpec::gauss_real(int(1)),
    };
    let value = if a.centered {
        limit_cov_centered(a.k1, a.k2, &s1, &s2, &diag, &off)?
    } else {
        limit_cov(a.k1, a.k2, &s1, &s2, &diag, &off)?
    };
    let mut out = io::stdout().lock();
    writeln!(out, "# diag = {diag}")?;
    writeln!(out, "# offdiag = {off}")?;
    let name = if a.centered { "limit_cov_centered" } else { "limit_cov" };
    writeln!(out, "{name}({},{},{s1},{s2}) = {}", a.k1, a.k2, display_exact(&value))?;
    if let Some(n) = a.finite_n {
        let f = finite_n_cov(n, a.k1, a.k2, &s1, &s2, &diag, &off)?;
        let c = limit_cov_centered(a.k1, a.k2, &s1, &s2, &diag, &off)?;
        let shown = f.to_rational().map_or_else(|| format!("{:.12}", f.value()), |r| display_exact(&r));
        writeln!(out, "finite_n_cov(n={n}) = {shown}   limit_cov_centered = {}", display_exact(&c))?;
    }
    if a.trace {
        writeln!(out, "partition,class,edges,s_weight,factor")?;
        for line in limit_cov_trace(a.k1, a.k2, &diag, &off)? {
            writeln!(out, "{},{},{},{},{}", line.blocks, line.class, line.edges, line.weight, line.factor)?;
        }
    }
    Ok(0)
}

fn heatmap(a: HeatmapArgs) -> Result<i32> {
    let (cfg, spec) = resolve(a.ensemble.config()?, 50)?;
    let x = build_wigner(&spec, &mut RngStream::new(cfg.seed.unwrap_or(1)));
    let dec = spectral_decomposition(&x)?;
    let max = crate::process::heatmap_cells(&dec).iter().fold(0.0f64, |m, c| m.max(c.2));
    let mut out = open_out(a.out.as_deref())?;
    let settings = format!("{cfg}diag law = {}\noffdiag law = {}\nmax value = {max:e}", spec.diag, spec.offdiag);
    write_header(&mut out, "heatmap", &settings)?;
    write_heatmap_csv(&dec, &mut out)?;
    out.flush()?;
    Ok(0)
}

fn weingarten_cmd(a: WeingartenArgs) -> Result<i32> {
    let n = a.n;
    if a.samples < 2 {
        return Err(Error::InvalidArgument("need at least 2 samples".into()));
    }
    let mut out = open_out(a.out.as_deref())?;
    write_header(&mut out, "weingarten", &format!("n = {n}\nsamples = {}\nseed = {}", a.samples, a.seed))?;
    writeln!(out, "group,pattern,exact,exact_decimal,monte_carlo,se,z")?;
    let mut worst = 0.0f64;
    for (g, group) in [HaarGroup::Orthogonal, HaarGroup::Unitary].into_iter().enumerate() {
        let table = haar_pattern_means(n, group, a.samples, a.seed.wrapping_add(g as u64))?;
        for (pattern, mean, se) in table {
            let (i1, j1, i2, j2) = pattern.representative();
            let exact = haar_pair_moment(i1, j1, i2, j2, n, group)?;
            let z = (mean - to_f64(&exact)) / se;
            worst = worst.max(z.abs());
            writeln!(out, "{group},{pattern},{exact},{:.10},{mean:.10},{se:.3e},{z:.2}", to_f64(&exact))?;
        }
    }
    out.flush()?;
    Ok(if worst <= 3.0 { 0 } else { 1 })
}

/// Monte Carlo `E[|u_{i1j1}|²|u_{i2j2}|²]` for each index pattern, with SE.
/// Each sample averages the pattern over disjoint blocks of `U`, which are
/// exchangeable, without using any row or column normalization.
pub fn haar_pattern_means(
    n: usize,
    group: HaarGroup,
    samples: usize,
    seed: u64,
) -> Result<Vec<(IndexPattern, f64, f64)>> {
    if n < 2 {
        return Err(Error::InvalidArgument("need n >= 2".into()));
    }
    let blocks = n / 2;
    let mut per: Vec<Vec<f64>> = (0..4).map(|_| Vec::with_capacity(samples)).collect();
    let mut rng = RngStream::new(seed);
    for _ in 0..samples {
        let u = haar_sample(n, group, &mut rng);
        let w = |i: usize, j: usize| u[(i, j)].norm_sqr();
        let mut acc = [0.0; 4];
        for b in 0..blocks {
            let (p, q) = (2 * b, 2 * b + 1);
            acc[0] += w(p, p) * w(q, q);
            acc[1] += w(p, p) * w(p, q);
            acc[2] += w(p, p) * w(q, p);
            acc[3] += w(p, q) * w(p, q);
        }
        for (sink, a) in per.iter_mut().zip(acc) {
            sink.push(a / blocks as f64);
        }
    }
    Ok(IndexPattern::ALL
        .iter()
        .zip(per)
        .map(|(&p, xs)| {
            let m = xs.iter().sum::<f64>() / xs.len() as f64;
            let v = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (xs.len() - 1) as f64;
            (p, m, (v / xs.len() as f64).sqrt())
        })
        .collect())
}

/// Median of the maximal jump over `trials` matrices of each size.
pub fn median_max_jumps(spec: &EnsembleSpec, sizes: &[usize], trials: usize, seed: u64, workers: Option<usize>) -> Result<Vec<f64>> {
    sizes
        .iter()
        .map(|&n| {
            let mut plan = ExperimentPlan::new(spec.with_n(n), trials, seed, vec![Observable::MaxJump]);
            plan.workers = workers;
            let mut xs = run_plan(&plan)?.samples.remove(0);
            xs.sort_by(f64::total_cmp);
            let mid = xs.len() / 2;
            Ok(if xs.len() % 2 == 1 { xs[mid] } else { 0.5 * (xs[mid - 1] + xs[mid]) })
        })
        .collect()
}

fn jumps(a: JumpsArgs) -> Result<i32> {
    let sizes: Vec<usize> = parse_list(&a.n_list, "size")?;
    let (mut cfg, spec) = resolve(a.ensemble.config()?, sizes.first().copied().unwrap_or(50))?;
    cfg.n = None;
    cfg.trials = Some(a.trials);
    let medians = median_max_jumps(&spec, &sizes, a.trials, cfg.seed.unwrap_or(1), a.workers)?;
    let decreasing = medians.windows(2).all(|w| w[1] < w[0]);
    let mut out = open_out(a.out.as_deref())?;
    write_header(&mut out, "jumps", &format!("{cfg}n-list = {}\nstrictly decreasing = {decreasing}", a.n_list))?;
    writeln!(out, "n,median_max_jump")?;
    for (n, m) in sizes.iter().zip(&medians) {
        writeln!(out, "{n},{m:e}")?;
    }
    out.flush()?;
    Ok(0)
}

fn t_stats(a: TStatsArgs) -> Result<i32> {
    let (mut cfg, spec) = resolve(a.ensemble.config()?, 100)?;
    cfg.trials = Some(a.trials);
    let seed = cfg.seed.unwrap_or(1);
    let s_list: Vec<f64> = parse_list(&a.s_list, "s")?;
    let k_list: Vec<usize> = parse_list(&a.k_list, "k")?;
    let mut rows = Vec::new();
    for trial in 0..a.trials {
        let x = build_wigner(&spec, &mut RngStream::split(seed, trial as u64));
        for &k in &k_list {
            for &s in &s_list {
                let value = t_stat_power(&x, s, k)?;
                rows.push(TStatRow { trial, stat: TraceStatistic { s, k, value } });
            }
        }
    }
    let mut out = open_out(a.out.as_deref())?;
    write_header(&mut out, "t-stats", &format!("{cfg}s-list = {}\nk-list = {}", a.s_list, a.k_list))?;
    write_t_stat_csv(&rows, &mut out)?;
    out.flush()?;
    Ok(0)
}

fn dump(a: DumpArgs) -> Result<i32> {
    let (cfg, spec) = resolve(a.ensemble.config()?, 4)?;
    let x = build_wigner(&spec, &mut RngStream::new(cfg.seed.unwrap_or(1)));
    let mut out = open_out(a.out.as_deref())?;
    write_header(&mut out, "dump", &cfg.to_string())?;
    x.write_text(&mut out)?;
    out.flush()?;
    Ok(0)
}

struct CheckLine {
    name: &'static str,
    detail: String,
    pass: bool,
}

fn check(a: CheckArgs) -> Result<i32> {
    let mut lines = Vec::new();
    let goe_diag = AtomSpec::gauss_real(int(2));
    let goe_off = AtomSpec::gauss_real(int(1));

    // exact covariance formula
    let v = limit_cov(2, 2, &Rational::new(3.into(), 10.into()), &Rational::new(7.into(), 10.into()), &goe_diag, &goe_off)?;
    lines.push(CheckLine {
        name: "limit_cov(2,2,0.3,0.7)",
        detail: display_exact(&v),
        pass: v == Rational::new(9.into(), 50.into()),
    });

    // finite n approaches the limit
    let lim = limit_cov_centered(2, 2, &Rational::one(), &Rational::one(), &goe_diag, &goe_off)?;
    let gaps: Vec<f64> = (2..=6)
        .map(|n| finite_n_cov(n, 2, 2, &Rational::one(), &Rational::one(), &goe_diag, &goe_off).map(|f| f.value() - to_f64(&lim)))
        .collect::<Result<_>>()?;
    lines.push(CheckLine {
        name: "finite-n -> limit (2,2)",
        detail: format!("gaps {gaps:.4?}"),
        pass: gaps.windows(2).all(|w| w[1].abs() < w[0].abs()),
    });

    // two routes for T and the moment transfer identity
    let mut rng = RngStream::new(a.seed);
    let x = build_wigner(&EnsembleSpec::goe(40), &mut rng);
    let dec = spectral_decomposition(&x)?;
    let grid = build_bridge_grid(&dec);
    let cdf = empirical_cdf(&dec);
    let mut route_gap = 0.0f64;
    let mut transfer_gap = 0.0f64;
    for k in 1..=5usize {
        for s in [0.25, 0.5, 0.8] {
            let p = t_stat_power(&x, s, k)?;
            let q = t_stat_spectral(&dec, s, k)?;
            route_gap = route_gap.max((p - q).abs() / p.abs().max(1.0));
            let lhs = bridge_moment_integral(&grid, &cdf, s, k as u32 - 1);
            let rhs = -(0.5f64).sqrt() * p / k as f64;
            transfer_gap = transfer_gap.max((lhs - rhs).abs() / lhs.abs().max(rhs.abs()).max(1.0));
        }
    }
    lines.push(CheckLine { name: "T power vs spectral", detail: format!("{route_gap:.2e}"), pass: route_gap < 1e-8 });
    lines.push(CheckLine { name: "moment transfer", detail: format!("{transfer_gap:.2e}"), pass: transfer_gap < 1e-8 });

    // signed measure lemma
    let mu = SignedMeasure::null_mass(vec![(1.0, 1.0), (-1.0, -1.0)])?;
    let r = signed_cdf_moment(&mu, 0)?;
    lines.push(CheckLine {
        name: "signed measure k=0",
        detail: format!("{} / {}", r.step_integral, r.atom_sum),
        pass: r.discrepancy() < 1e-12 && (r.step_integral + 2.0).abs() < 1e-12,
    });

    // border of the field
    lines.push(CheckLine {
        name: "field border",
        detail: format!("{:.2e}", grid.border_residual()),
        pass: grid.border_residual() < 1e-9 * 1600.0,
    });

    // odd total vanishes
    let odd = limit_cov(2, 3, &Rational::one(), &Rational::new(1.into(), 2.into()), &goe_diag, &goe_off)?;
    lines.push(CheckLine { name: "odd k1+k2", detail: display_exact(&odd), pass: odd.is_zero() });

    let mut out = io::stdout().lock();
    writeln!(out, "check,result,detail")?;
    for l in &lines {
        writeln!(out, "{},{},{}", l.name, if l.pass { "PASS" } else { "FAIL" }, l.detail)?;
    }
    Ok(if lines.iter().all(|l| l.pass) { 0 } else { 1 })
}

/// Parses `args` (program name first) and runs; errors become exit code 2.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}
