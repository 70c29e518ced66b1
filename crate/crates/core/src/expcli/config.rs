//! Run configuration: `key = value` text with `#` comments, overridable
//! key by key.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::spin::SpinQuantum;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExperimentKind {
    Evolve,
    Portrait,
    Husimi,
    DeltaNeff,
    RmtCompare,
    Stats,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 6] = [
        ExperimentKind::Evolve,
        ExperimentKind::Portrait,
        ExperimentKind::Husimi,
        ExperimentKind::DeltaNeff,
        ExperimentKind::RmtCompare,
        ExperimentKind::Stats,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::Evolve => "evolve",
            ExperimentKind::Portrait => "portrait",
            ExperimentKind::Husimi => "husimi",
            ExperimentKind::DeltaNeff => "deltaneff",
            ExperimentKind::RmtCompare => "rmt-compare",
            ExperimentKind::Stats => "stats",
        }
    }
}

impl FromStr for ExperimentKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ExperimentKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown experiment `{s}`")))
    }
}

/// Which vectors `stats` examines.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StatsMode {
    /// Components of the single-top state.
    Single,
    /// Pooled eigenvector components of the coupled-top RDM.
    Coupled,
}

impl StatsMode {
    fn name(self) -> &'static str {
        match self {
            StatsMode::Single => "single",
            StatsMode::Coupled => "coupled",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub experiment: ExperimentKind,
    pub spin: SpinQuantum,
    pub k1: f64,
    pub k2: f64,
    pub epsilon: f64,
    pub steps: usize,
    pub theta0: f64,
    pub phi0: f64,
    pub seed: u64,
    pub out: PathBuf,
    /// Compute entropies every `stride` steps.
    pub stride: usize,
    pub husimi_n_theta: usize,
    pub husimi_n_phi: usize,
    pub portrait_n_cos: usize,
    pub portrait_n_phi: usize,
    pub portrait_iter: usize,
    /// Initial-condition lattice for `rmt-compare`.
    pub ic_n_theta: usize,
    pub ic_n_phi: usize,
    pub eps_list: Vec<f64>,
    /// Steps at which `husimi` and `stats` take snapshots; empty means the
    /// final step (and step 0 for `husimi`).
    pub snapshots: Vec<usize>,
    pub stats_mode: StatsMode,
    /// Leading RDM eigenvectors pooled per snapshot; 0 pools all.
    pub pool: usize,
}

impl RunConfig {
    pub fn defaults(experiment: ExperimentKind) -> Self {
        let (k1, k2) = match experiment {
            ExperimentKind::RmtCompare => (6.0, 6.1),
            _ => (6.0, 6.0),
        };
        let steps = match experiment {
            ExperimentKind::RmtCompare => 100,
            _ => 1000,
        };
        RunConfig {
            experiment,
            spin: SpinQuantum::from_two_j(160),
            k1,
            k2,
            epsilon: 1e-2,
            steps,
            theta0: 0.89,
            phi0: 0.63,
            seed: 0,
            out: PathBuf::from("out"),
            stride: 1,
            husimi_n_theta: 200,
            husimi_n_phi: 400,
            portrait_n_cos: 20,
            portrait_n_phi: 20,
            portrait_iter: 500,
            ic_n_theta: 4,
            ic_n_phi: 4,
            eps_list: vec![1e-4, 1e-3, 1e-2],
            snapshots: Vec::new(),
            stats_mode: StatsMode::Single,
            pool: 0,
        }
    }

    /// Defaults for the experiment named in `text` (or `fallback`), then
    /// every `key = value` line of `text`, then `overrides` in order.
    pub fn parse(text: &str, fallback: Option<ExperimentKind>, overrides: &[(String, String)]) -> Result<Self> {
        let mut pairs = parse_pairs(text)?;
        pairs.extend(overrides.iter().cloned());
        let kind = match pairs.iter().rev().find(|(k, _)| k == "experiment") {
            Some((_, v)) => v.parse()?,
            None => fallback.ok_or_else(|| Error::Config("no experiment given".into()))?,
        };
        let mut cfg = RunConfig::defaults(kind);
        for (k, v) in &pairs {
            cfg.set(k, v)?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "experiment" => self.experiment = value.parse()?,
            "j" => self.spin = SpinQuantum::from_j(num(key, value)?).map_err(|e| Error::Config(e.to_string()))?,
            "k" => {
                self.k1 = num(key, value)?;
                self.k2 = self.k1;
            }
            "k1" => self.k1 = num(key, value)?,
            "k2" => self.k2 = num(key, value)?,
            "eps" => self.epsilon = num(key, value)?,
            "steps" => self.steps = num(key, value)?,
            "theta0" => self.theta0 = num(key, value)?,
            "phi0" => self.phi0 = num(key, value)?,
            "seed" => self.seed = num(key, value)?,
            "out" => self.out = PathBuf::from(value),
            "stride" => self.stride = num(key, value)?,
            "husimi_n_theta" => self.husimi_n_theta = num(key, value)?,
            "husimi_n_phi" => self.husimi_n_phi = num(key, value)?,
            "portrait_n_cos" => self.portrait_n_cos = num(key, value)?,
            "portrait_n_phi" => self.portrait_n_phi = num(key, value)?,
            "portrait_iter" => self.portrait_iter = num(key, value)?,
            "ic_n_theta" => self.ic_n_theta = num(key, value)?,
            "ic_n_phi" => self.ic_n_phi = num(key, value)?,
            "eps_list" => self.eps_list = list(key, value)?,
            "snapshots" => self.snapshots = list(key, value)?,
            "stats_mode" => {
                self.stats_mode = match value {
                    "single" => StatsMode::Single,
                    "coupled" => StatsMode::Coupled,
                    _ => {
                        return Err(Error::Config(format!(
                            "stats_mode must be single or coupled, got `{value}`"
                        )))
                    }
                }
            }
            "pool" => self.pool = num(key, value)?,
            _ => return Err(Error::Config(format!("unknown key `{key}`"))),
        }
        Ok(())
    }

    pub fn snapshot_steps(&self) -> Vec<usize> {
        match (self.snapshots.is_empty(), self.experiment) {
            (false, _) => self.snapshots.clone(),
            (true, ExperimentKind::Husimi) => vec![0, self.steps],
            (true, _) => vec![self.steps],
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        for (name, v) in [
            ("k1", self.k1),
            ("k2", self.k2),
            ("eps", self.epsilon),
            ("theta0", self.theta0),
            ("phi0", self.phi0),
        ] {
            if !v.is_finite() {
                return bad(format!("{name} = {v} is not finite"));
            }
        }
        if self.eps_list.iter().any(|e| !e.is_finite()) {
            return bad("eps_list contains a non-finite value".into());
        }
        if !(0.0..=std::f64::consts::PI).contains(&self.theta0) {
            return bad(format!("theta0 = {} outside [0, π]", self.theta0));
        }
        for (name, v) in [
            ("steps", self.steps),
            ("stride", self.stride),
            ("husimi_n_theta", self.husimi_n_theta),
            ("husimi_n_phi", self.husimi_n_phi),
            ("portrait_n_cos", self.portrait_n_cos),
            ("portrait_n_phi", self.portrait_n_phi),
            ("portrait_iter", self.portrait_iter),
            ("ic_n_theta", self.ic_n_theta),
            ("ic_n_phi", self.ic_n_phi),
        ] {
            if v == 0 {
                return bad(format!("{name} must be positive"));
            }
        }
        if let Some(s) = self.snapshots.iter().find(|&&s| s > self.steps) {
            return bad(format!("snapshot {s} beyond steps = {}", self.steps));
        }
        if self.pool > self.spin.dim() {
            return bad(format!("pool = {} exceeds dimension {}", self.pool, self.spin.dim()));
        }
        Ok(())
    }

    /// Every parameter as `key = value` lines; parses back to `self`.
    pub fn to_text(&self) -> String {
        let join = |v: &[String]| v.join(",");
        let mut s = String::new();
        let mut line = |k: &str, v: String| {
            let _ = writeln!(s, "{k} = {v}");
        };
        line("experiment", self.experiment.name().into());
        line("j", self.spin.j().to_string());
        line("k1", self.k1.to_string());
        line("k2", self.k2.to_string());
        line("eps", self.epsilon.to_string());
        line("steps", self.steps.to_string());
        line("theta0", self.theta0.to_string());
        line("phi0", self.phi0.to_string());
        line("seed", self.seed.to_string());
        line("out", self.out.display().to_string());
        line("stride", self.stride.to_string());
        line("husimi_n_theta", self.husimi_n_theta.to_string());
        line("husimi_n_phi", self.husimi_n_phi.to_string());
        line("portrait_n_cos", self.portrait_n_cos.to_string());
        line("portrait_n_phi", self.portrait_n_phi.to_string());
        line("portrait_iter", self.portrait_iter.to_string());
        line("ic_n_theta", self.ic_n_theta.to_string());
        line("ic_n_phi", self.ic_n_phi.to_string());
        line(
            "eps_list",
            join(&self.eps_list.iter().map(f64::to_string).collect::<Vec<_>>()),
        );
        line(
            "snapshots",
            join(&self.snapshots.iter().map(usize::to_string).collect::<Vec<_>>()),
        );
        line("stats_mode", self.stats_mode.name().into());
        line("pool", self.pool.to_string());
        s
    }
}

/// `key = value` pairs in file order; blank lines and `#` comments skipped.
pub fn parse_pairs(text: &str) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (no, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("line {}: expected `key = value`, got `{raw}`", no + 1)))?;
        let (k, v) = (k.trim(), v.trim());
        if k.is_empty() {
            return Err(Error::Config(format!("line {}: empty key", no + 1)));
        }
        out.push((k.to_string(), v.to_string()));
    }
    Ok(out)
}

fn num<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::Config(format!("bad value for {key}: `{value}`")))
}

fn list<T: FromStr>(key: &str, value: &str) -> Result<Vec<T>> {
    if value.is_empty() {
        return Ok(Vec::new());
    }
    value.split(',').map(|p| num(key, p.trim())).collect()
}
