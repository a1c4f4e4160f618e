//! Key-value run configuration.
//!
//! One `key = value` per line, `#` starts a comment. Recognized keys:
//!
//! ```text
//! ensemble    = goe | gue | pareto | rademacher | uniform | skewed | two-point:<m4>
//! diag        = <atom spec>      overrides the preset diagonal law
//! offdiag     = <atom spec>      overrides the preset off-diagonal law
//! beta        = 1 | 2            needed with explicit laws if they change class
//! n           = <int>
//! trials      = <int>
//! seed        = <u64>
//! grid        = <step in (0,1]>
//! observables = <obs>; <obs>; ...   e.g. bridge:0.5,0.5; tstat:0.3,2
//! out         = <path>
//! raw         = <path>
//! workers     = <int>
//! ```
//!
//! Atom specs use the grammar of [`crate::atoms`]. Unknown keys are errors.

use std::fmt;
use std::path::{Path, PathBuf};

use crate::atoms::AtomSpec;
use crate::error::{Error, Result};
use crate::matrices::EnsembleSpec;
use crate::montecarlo::Observable;
use crate::rational::{int, parse_rational};

pub const KEYS: [&str; 12] =
    ["ensemble", "diag", "offdiag", "beta", "n", "trials", "seed", "grid", "observables", "out", "raw", "workers"];

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Config {
    pub ensemble: Option<String>,
    pub diag: Option<AtomSpec>,
    pub offdiag: Option<AtomSpec>,
    pub beta: Option<u8>,
    pub n: Option<usize>,
    pub trials: Option<usize>,
    pub seed: Option<u64>,
    pub grid: Option<f64>,
    pub observables: Option<Vec<Observable>>,
    pub out: Option<PathBuf>,
    pub raw: Option<PathBuf>,
    pub workers: Option<usize>,
}

fn parse_num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value.parse().map_err(|_| Error::Config(format!("{key}: cannot parse {value:?}")))
}

impl Config {
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = Config::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key = value", lineno + 1)))?;
            cfg.set(key.trim(), value.trim())?;
        }
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "ensemble" => self.ensemble = Some(value.to_string()),
            "diag" => self.diag = Some(value.parse()?),
            "offdiag" => self.offdiag = Some(value.parse()?),
            "beta" => self.beta = Some(parse_num(key, value)?),
            "n" => self.n = Some(parse_num(key, value)?),
            "trials" => self.trials = Some(parse_num(key, value)?),
            "seed" => self.seed = Some(parse_num(key, value)?),
            "grid" => self.grid = Some(parse_num(key, value)?),
            "observables" => {
                let list = value
                    .split(';')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .map(str::parse)
                    .collect::<Result<Vec<Observable>>>()?;
                self.observables = Some(list);
            }
            "out" => self.out = Some(PathBuf::from(value)),
            "raw" => self.raw = Some(PathBuf::from(value)),
            "workers" => self.workers = Some(parse_num(key, value)?),
            other => return Err(Error::Config(format!("unknown key {other:?}"))),
        }
        Ok(())
    }

    /// Fields set in `other` win.
    pub fn merged(mut self, other: Config) -> Config {
        macro_rules! take {
            ($($f:ident),*) => { $( if other.$f.is_some() { self.$f = other.$f; } )* };
        }
        take!(ensemble, diag, offdiag, beta, n, trials, seed, grid, observables, out, raw, workers);
        self
    }

    /// Ensemble from the preset name and any explicit laws.
    pub fn resolve_ensemble(&self, default_n: usize) -> Result<EnsembleSpec> {
        let n = self.n.unwrap_or(default_n);
        let mut spec = ensemble_preset(self.ensemble.as_deref().unwrap_or("goe"), n)?;
        if let Some(d) = &self.diag {
            spec.diag = d.clone();
        }
        if let Some(o) = &self.offdiag {
            spec.offdiag = o.clone();
        }
        spec.beta = self.beta.unwrap_or(if spec.offdiag.is_complex() { 2 } else { 1 });
        spec.validate()?;
        Ok(spec)
    }
}

/// Writes the configuration back in file syntax, unset keys omitted.
impl fmt::Display for Config {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(v) = &self.ensemble {
            writeln!(f, "ensemble = {v}")?;
        }
        if let Some(v) = &self.diag {
            writeln!(f, "diag = {v}")?;
        }
        if let Some(v) = &self.offdiag {
            writeln!(f, "offdiag = {v}")?;
        }
        if let Some(v) = self.beta {
            writeln!(f, "beta = {v}")?;
        }
        if let Some(v) = self.n {
            writeln!(f, "n = {v}")?;
        }
        if let Some(v) = self.trials {
            writeln!(f, "trials = {v}")?;
        }
        if let Some(v) = self.seed {
            writeln!(f, "seed = {v}")?;
        }
        if let Some(v) = self.grid {
            writeln!(f, "grid = {v}")?;
        }
        if let Some(v) = &self.observables {
            let list: Vec<String> = v.iter().map(ToString::to_string).collect();
            writeln!(f, "observables = {}", list.join("; "))?;
        }
        if let Some(v) = &self.out {
            writeln!(f, "out = {}", v.display())?;
        }
        if let Some(v) = &self.raw {
            writeln!(f, "raw = {}", v.display())?;
        }
        if let Some(v) = self.workers {
            writeln!(f, "workers = {v}")?;
        }
        Ok(())
    }
}

/// Named ensembles. All real presets keep the GOE diagonal `N(0,2)`.
pub fn ensemble_preset(name: &str, n: usize) -> Result<EnsembleSpec> {
    let real = |off: AtomSpec| EnsembleSpec::real_with_offdiag(n, off);
    match name {
        "goe" => Ok(EnsembleSpec::goe(n)),
        "gue" => Ok(EnsembleSpec::gue(n)),
        "pareto" => real(AtomSpec::heavy_tail()),
        "rademacher" => real(AtomSpec::rademacher()),
        "uniform" => real(AtomSpec::uniform_unit()),
        "skewed" => real(AtomSpec::skewed_m4_3()),
        other => match other.strip_prefix("two-point:") {
            Some(m4) => real(AtomSpec::two_point_m4(parse_rational(m4)?)?),
            None if other == "two-point" => real(AtomSpec::two_point_m4(int(3))?),
            None => Err(Error::Config(format!("unknown ensemble {other:?}"))),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_echoes() {
        let text = "# demo\nensemble = goe\nn = 50 # size\ntrials=10\nseed = 7\nobservables = bridge:0.5,0.5; tstat:0.3,2\n";
        let cfg = Config::parse(text).unwrap();
        assert_eq!(cfg.n, Some(50));
        assert_eq!(cfg.observables.as_ref().unwrap().len(), 2);
        let again = Config::parse(&cfg.to_string()).unwrap();
        assert_eq!(again, cfg);
    }

    #[test]
    fn rejects_unknown_keys() {
        assert!(matches!(Config::parse("colour = red"), Err(Error::Config(_))));
        assert!(Config::parse("n 50").is_err());
        assert!(Config::parse("n = fifty").is_err());
    }

    #[test]
    fn explicit_laws_override_preset() {
        let cfg = Config::parse("ensemble = goe\noffdiag = kind=gauss-complex v=1\ndiag = kind=gauss-real sigma2=1").unwrap();
        let spec = cfg.resolve_ensemble(10).unwrap();
        assert_eq!(spec.beta, 2);
        assert_eq!(spec, EnsembleSpec::gue(10));
    }

    #[test]
    fn presets() {
        for name in ["goe", "gue", "pareto", "rademacher", "uniform", "skewed", "two-point", "two-point:5"] {
            assert_eq!(ensemble_preset(name, 4).unwrap().n, 4);
        }
        assert!(ensemble_preset("wishart", 4).is_err());
    }

    #[test]
    fn merge_prefers_right() {
        let a = Config::parse("n = 5\nseed = 1").unwrap();
        let b = Config::parse("seed = 2").unwrap();
        let m = a.merged(b);
        assert_eq!((m.n, m.seed), (Some(5), Some(2)));
    }
}
