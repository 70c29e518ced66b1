//! The experiments: computations returning data, and writers turning them
//! into files.

use std::f64::consts::PI;
use std::fs;
use std::path::Path;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::config::{ExperimentKind, RunConfig, StatsMode};
use super::output::{RunManifest, Table};
use crate::classical::{phase_portrait, portrait_grid, SpherePoint};
use crate::entangle::{self, ComponentStats, Subsystem};
use crate::error::{Error, Result};
use crate::evolve::{evolve, evolve_single, initial_product_state, CoupledParams, TopParams};
use crate::husimi::{self, FWeightTable, HusimiField, SphericalGrid};
use crate::rmt::{self, SrMode};
use crate::spin::coherent_amplitudes;
use crate::C64;

fn coupled_params(cfg: &RunConfig, epsilon: f64) -> Result<CoupledParams> {
    CoupledParams::new(
        TopParams::new(cfg.spin, cfg.k1),
        TopParams::new(cfg.spin, cfg.k2),
        epsilon,
    )
}

/// Per-step entanglement and occupancy of the coupled tops.
#[derive(Clone, Debug, Default)]
pub struct EntropySeries {
    pub steps: Vec<usize>,
    pub s_v: Vec<f64>,
    pub s_r: Vec<f64>,
    pub delta_n_eff: Vec<f64>,
    pub gamma: Vec<f64>,
}

impl EntropySeries {
    /// Mean of `values` over rows whose step lies in `lo..=hi`.
    pub fn mean_between(&self, values: &[f64], lo: usize, hi: usize) -> f64 {
        let picked: Vec<f64> = self
            .steps
            .iter()
            .zip(values)
            .filter(|(s, _)| (lo..=hi).contains(*s))
            .map(|(_, &v)| v)
            .collect();
        picked.iter().sum::<f64>() / picked.len().max(1) as f64
    }

    /// Mean over the last quarter of the run.
    pub fn late_mean(&self, values: &[f64]) -> f64 {
        let last = self.steps.last().copied().unwrap_or(0);
        self.mean_between(values, last - last / 4, last)
    }
}

/// Evolves both tops from the coherent product state at `(theta0, phi0)`
/// and records `S_V`, `S_R`, `ΔN_eff` of `ρ₁` and `γ` at `n = 0` and every
/// `stride` steps.
pub fn entropy_series(cfg: &RunConfig) -> Result<EntropySeries> {
    let params = coupled_params(cfg, cfg.epsilon)?;
    let table = FWeightTable::new(cfg.spin);
    let dim = cfg.spin.dim();
    let mut series = EntropySeries::default();
    let mut record = |n: usize, state: &crate::evolve::PureState| -> Result<()> {
        let rdm = entangle::reduce(state, Subsystem::First);
        let (s_v, s_r) = entangle::entropies_of(&entangle::schmidt_values(&rdm)?);
        let dn = husimi::delta_n_eff(husimi::m2_rdm(&table, &rdm)?, dim)?;
        series.steps.push(n);
        series.s_v.push(s_v);
        series.s_r.push(s_r);
        series.delta_n_eff.push(dn);
        series.gamma.push(husimi::gamma_factor(s_v, dn, dim)?);
        Ok(())
    };
    let psi0 = initial_product_state(cfg.spin, cfg.theta0, cfg.phi0, cfg.theta0, cfg.phi0);
    record(0, &psi0)?;
    evolve(psi0, &params, cfg.steps, |n, s| {
        if n % cfg.stride == 0 {
            record(n, s)
        } else {
            Ok(())
        }
    })?;
    Ok(series)
}

/// `ΔN_eff` of a single top (coupling off) at `n = 0..=steps`.
pub fn single_top_delta_n_eff(cfg: &RunConfig) -> Result<Vec<f64>> {
    let table = FWeightTable::new(cfg.spin);
    let dim = cfg.spin.dim();
    let v0 = coherent_amplitudes(cfg.spin, cfg.theta0, cfg.phi0);
    let mut out = vec![husimi::delta_n_eff(husimi::m2_pure(&table, &v0)?, dim)?];
    evolve_single(v0, &TopParams::new(cfg.spin, cfg.k1), cfg.steps, |_, v| {
        out.push(husimi::delta_n_eff(husimi::m2_pure(&table, v)?, dim)?);
        Ok(())
    })?;
    Ok(out)
}

/// Midpoint lattice of initial directions `(θ, φ)`.
pub fn initial_condition_lattice(n_theta: usize, n_phi: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n_theta * n_phi);
    for a in 0..n_theta {
        for b in 0..n_phi {
            out.push((
                (2 * a + 1) as f64 * PI / (2 * n_theta) as f64,
                -PI + (2 * b + 1) as f64 * PI / n_phi as f64,
            ));
        }
    }
    out
}

/// Measured and predicted `S_R(n)`, `n = 1..=steps`, for one coupling.
#[derive(Clone, Debug)]
pub struct SrComparison {
    pub epsilon: f64,
    pub measured: Vec<f64>,
    pub exact_sum: Vec<f64>,
    pub closed_form: Vec<f64>,
}

impl SrComparison {
    pub fn max_deviation_closed(&self) -> f64 {
        self.measured
            .iter()
            .zip(&self.closed_form)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// Least-squares slope of the measured curve over steps `lo..=hi`.
    pub fn measured_slope(&self, lo: usize, hi: usize) -> f64 {
        let pts: Vec<(f64, f64)> = (lo..=hi).map(|n| (n as f64, self.measured[n - 1])).collect();
        let m = pts.len() as f64;
        let (sx, sy) = pts.iter().fold((0.0, 0.0), |acc, p| (acc.0 + p.0, acc.1 + p.1));
        let (mx, my) = (sx / m, sy / m);
        let num: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let den: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
        num / den
    }
}

/// Linear entropy averaged over the initial-condition lattice (both tops
/// start in the same direction), next to both analytic evaluations.
pub fn sr_comparison(cfg: &RunConfig, epsilon: f64) -> Result<SrComparison> {
    let params = coupled_params(cfg, epsilon)?;
    let ics = initial_condition_lattice(cfg.ic_n_theta, cfg.ic_n_phi);
    let mut measured = vec![0.0; cfg.steps];
    for &(theta, phi) in &ics {
        let psi0 = initial_product_state(cfg.spin, theta, phi, theta, phi);
        evolve(psi0, &params, cfg.steps, |n, s| {
            measured[n - 1] += entangle::reduce(s, Subsystem::First).linear_entropy();
            Ok(())
        })?;
    }
    measured.iter_mut().for_each(|m| *m /= ics.len() as f64);
    Ok(SrComparison {
        epsilon,
        measured,
        exact_sum: rmt::sr_curve(cfg.steps, cfg.spin, epsilon, SrMode::ExactSum),
        closed_form: rmt::sr_curve(cfg.steps, cfg.spin, epsilon, SrMode::ClosedForm),
    })
}

/// Reduced Husimi field of top 1 at each snapshot step.
pub fn husimi_snapshots(cfg: &RunConfig) -> Result<Vec<(usize, HusimiField)>> {
    let snaps = cfg.snapshot_steps();
    let params = coupled_params(cfg, cfg.epsilon)?;
    let grid = SphericalGrid::new(cfg.spin, cfg.husimi_n_theta, cfg.husimi_n_phi)?;
    let mut out = Vec::new();
    let mut take = |n: usize, s: &crate::evolve::PureState| -> Result<()> {
        if snaps.contains(&n) {
            out.push((n, husimi::husimi_field(&entangle::reduce(s, Subsystem::First), &grid)?));
        }
        Ok(())
    };
    let psi0 = initial_product_state(cfg.spin, cfg.theta0, cfg.phi0, cfg.theta0, cfg.phi0);
    take(0, &psi0)?;
    let last = snaps.iter().copied().max().unwrap_or(0);
    if last > 0 {
        evolve(psi0, &params, last, |n, s| take(n, s))?;
    }
    Ok(out)
}

/// Component statistics of a snapshot: the vector examined and its stats.
#[derive(Clone, Debug)]
pub struct StatsSnapshot {
    pub step: usize,
    pub components: Vec<C64>,
    pub stats: ComponentStats,
}

/// Single-top state vectors at each snapshot step.
pub fn single_top_stats(cfg: &RunConfig) -> Result<Vec<StatsSnapshot>> {
    let snaps = cfg.snapshot_steps();
    let v0 = coherent_amplitudes(cfg.spin, cfg.theta0, cfg.phi0);
    let mut out = Vec::new();
    let mut take = |n: usize, v: &[C64]| {
        if snaps.contains(&n) {
            out.push(StatsSnapshot {
                step: n,
                components: v.to_vec(),
                stats: entangle::component_statistics(v),
            });
        }
    };
    take(0, &v0);
    let last = snaps.iter().copied().max().unwrap_or(0);
    if last > 0 {
        evolve_single(v0, &TopParams::new(cfg.spin, cfg.k1), last, |n, v| {
            take(n, v);
            Ok(())
        })?;
    }
    Ok(out)
}

/// Eigenvector components of `ρ₁` pooled over the snapshot steps; the
/// `pool` leading eigenvectors (all if 0) are taken at each.
pub fn pooled_rdm_stats(cfg: &RunConfig) -> Result<StatsSnapshot> {
    let snaps = cfg.snapshot_steps();
    let params = coupled_params(cfg, cfg.epsilon)?;
    let count = if cfg.pool == 0 { cfg.spin.dim() } else { cfg.pool };
    let mut pooled: Vec<Vec<C64>> = Vec::new();
    let mut take = |n: usize, s: &crate::evolve::PureState| -> Result<()> {
        if snaps.contains(&n) {
            let spec = entangle::schmidt(&entangle::reduce(s, Subsystem::First))?;
            pooled.extend((0..count).map(|a| spec.vector(a).to_vec()));
        }
        Ok(())
    };
    let psi0 = initial_product_state(cfg.spin, cfg.theta0, cfg.phi0, cfg.theta0, cfg.phi0);
    take(0, &psi0)?;
    let last = snaps.iter().copied().max().unwrap_or(0);
    if last > 0 {
        evolve(psi0, &params, last, |n, s| take(n, s))?;
    }
    let stats = entangle::pooled_component_statistics(pooled.iter().map(|v| v.as_slice()));
    Ok(StatsSnapshot {
        step: last,
        components: pooled.concat(),
        stats,
    })
}

struct Outputs<'a> {
    dir: &'a Path,
    files: Vec<(String, usize)>,
}

impl Outputs<'_> {
    fn write(&mut self, name: &str, table: &Table) -> Result<()> {
        table.write(&self.dir.join(name))?;
        self.files.push((name.to_string(), table.rows()));
        Ok(())
    }
}

/// Runs the configured experiment, writing data files and the manifest
/// into `cfg.out`.
pub fn run(cfg: &RunConfig) -> Result<RunManifest> {
    cfg.validate()?;
    let start = Instant::now();
    fs::create_dir_all(&cfg.out).map_err(|e| Error::io(&cfg.out, e))?;
    let mut out = Outputs {
        dir: &cfg.out,
        files: Vec::new(),
    };
    let mut notes = Vec::new();
    match cfg.experiment {
        ExperimentKind::Evolve => write_evolve(cfg, &mut out)?,
        ExperimentKind::Portrait => write_portrait(cfg, &mut out)?,
        ExperimentKind::Husimi => write_husimi(cfg, &mut out)?,
        ExperimentKind::DeltaNeff => write_deltaneff(cfg, &mut out)?,
        ExperimentKind::RmtCompare => {
            for (theta, phi) in initial_condition_lattice(cfg.ic_n_theta, cfg.ic_n_phi) {
                notes.push(format!("ic theta={theta} phi={phi}"));
            }
            write_rmt_compare(cfg, &mut out)?
        }
        ExperimentKind::Stats => write_stats(cfg, &mut out)?,
    }
    let manifest = RunManifest {
        config: cfg.clone(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        duration_s: start.elapsed().as_secs_f64(),
        outputs: out.files,
        notes,
    };
    manifest.write(&cfg.out)?;
    Ok(manifest)
}

fn write_evolve(cfg: &RunConfig, out: &mut Outputs) -> Result<()> {
    let s = entropy_series(cfg)?;
    let mut t = Table::with_columns(&["n", "S_V", "S_R", "dN_eff", "gamma"]);
    for i in 0..s.steps.len() {
        t.push(&[
            s.steps[i].into(),
            s.s_v[i].into(),
            s.s_r[i].into(),
            s.delta_n_eff[i].into(),
            s.gamma[i].into(),
        ]);
    }
    out.write("evolve.tsv", &t)
}

fn write_portrait(cfg: &RunConfig, out: &mut Outputs) -> Result<()> {
    let mut ics = portrait_grid(cfg.portrait_n_cos, cfg.portrait_n_phi);
    ics.push(SpherePoint::from_angles(cfg.theta0, cfg.phi0));
    let orbits = phase_portrait(cfg.k1, &ics, cfg.portrait_iter);
    let mut t = Table::with_columns(&["orbit", "phi", "cos_theta"]);
    for (o, orbit) in orbits.iter().enumerate() {
        for c in orbit {
            t.push(&[o.into(), c.phi.into(), c.cos_theta.into()]);
        }
    }
    out.write("portrait.tsv", &t)
}

fn write_husimi(cfg: &RunConfig, out: &mut Outputs) -> Result<()> {
    for (n, field) in husimi_snapshots(cfg)? {
        let g = field.grid();
        let mut t = Table::new(format!(
            "n={n} two_j={} n_theta={} n_phi={} theta=midpoint[0,pi] phi=midpoint[-pi,pi] columns=a,b,theta,phi,rho_H",
            cfg.spin.two_j(),
            g.n_theta(),
            g.n_phi()
        ));
        for a in 0..g.n_theta() {
            for b in 0..g.n_phi() {
                t.push(&[
                    a.into(),
                    b.into(),
                    g.thetas()[a].into(),
                    g.phis()[b].into(),
                    field.value(a, b).into(),
                ]);
            }
        }
        out.write(&format!("husimi_n{n}.tsv"), &t)?;
    }
    Ok(())
}

fn write_deltaneff(cfg: &RunConfig, out: &mut Outputs) -> Result<()> {
    let values = single_top_delta_n_eff(cfg)?;
    let mut t = Table::with_columns(&["n", "dN_eff"]);
    for (n, v) in values.iter().enumerate() {
        t.push(&[n.into(), (*v).into()]);
    }
    out.write("deltaneff.tsv", &t)
}

fn write_rmt_compare(cfg: &RunConfig, out: &mut Outputs) -> Result<()> {
    let mut t = Table::with_columns(&["eps", "n", "S_R_measured", "S_R_exact_sum", "S_R_closed_form"]);
    for &eps in &cfg.eps_list {
        let c = sr_comparison(cfg, eps)?;
        for n in 1..=cfg.steps {
            t.push(&[
                eps.into(),
                n.into(),
                c.measured[n - 1].into(),
                c.exact_sum[n - 1].into(),
                c.closed_form[n - 1].into(),
            ]);
        }
    }
    out.write("rmt_compare.tsv", &t)
}

fn stats_row(t: &mut Table, step: usize, source: usize, s: &ComponentStats) {
    t.push(&[
        step.into(),
        source.into(),
        s.mean_re.into(),
        s.var_re.into(),
        s.mean_im.into(),
        s.var_im.into(),
        s.ks_exponential.into(),
    ]);
}

fn components_table(header: &str, v: &[C64], dim: usize) -> Table {
    let mut t = Table::new(header);
    for (i, c) in v.iter().enumerate() {
        t.push(&[i.into(), c.re.into(), c.im.into(), (dim as f64 * c.norm_sqr()).into()]);
    }
    t
}

fn write_stats(cfg: &RunConfig, out: &mut Outputs) -> Result<()> {
    let dim = cfg.spin.dim();
    // source column: 0 evolved state(s), 1 seeded random reference
    let mut summary = Table::with_columns(&[
        "n",
        "source",
        "mean_re",
        "var_re",
        "mean_im",
        "var_im",
        "ks_exponential",
    ]);
    match cfg.stats_mode {
        StatsMode::Single => {
            for snap in single_top_stats(cfg)? {
                stats_row(&mut summary, snap.step, 0, &snap.stats);
                out.write(
                    &format!("components_n{}.tsv", snap.step),
                    &components_table("index\tre\tim\tN_abs2", &snap.components, dim),
                )?;
            }
        }
        StatsMode::Coupled => {
            let snap = pooled_rdm_stats(cfg)?;
            stats_row(&mut summary, snap.step, 0, &snap.stats);
            out.write(
                "components_pooled.tsv",
                &components_table("index\tre\tim\tN_abs2", &snap.components, dim),
            )?;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let reference = rmt::gue_vector(dim, &mut rng);
    stats_row(&mut summary, 0, 1, &entangle::component_statistics(&reference));
    out.write(
        "components_reference.tsv",
        &components_table("index\tre\tim\tN_abs2", &reference, dim),
    )?;
    out.write("stats.tsv", &summary)
}
