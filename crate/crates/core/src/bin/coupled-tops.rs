use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use coupled_tops::expcli::{self, ExperimentKind, RunConfig};
use coupled_tops::Error;

#[derive(Parser)]
#[command(name = "coupled-tops", version, about = "Entanglement in coupled kicked tops")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Entropy, occupancy and γ time series of the coupled tops
    Evolve(Common),
    /// Classical phase portrait of a single top
    Portrait(Common),
    /// Reduced Husimi field snapshots
    Husimi(Common),
    /// ΔN_eff time series of a single top
    Deltaneff(Common),
    /// Measured linear entropy against the random-matrix curves
    RmtCompare(Common),
    /// Component statistics of evolved states
    Stats(Common),
}

#[derive(Args)]
struct Common {
    /// `key = value` configuration file
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    j: Option<String>,
    #[arg(long, conflicts_with_all = ["k1", "k2"])]
    k: Option<String>,
    #[arg(long)]
    k1: Option<String>,
    #[arg(long)]
    k2: Option<String>,
    #[arg(long)]
    eps: Option<String>,
    #[arg(long)]
    steps: Option<String>,
    #[arg(long)]
    theta0: Option<String>,
    #[arg(long)]
    phi0: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Common {
    fn overrides(&self) -> Vec<(String, String)> {
        let flags = [
            ("j", &self.j),
            ("k", &self.k),
            ("k1", &self.k1),
            ("k2", &self.k2),
            ("eps", &self.eps),
            ("steps", &self.steps),
            ("theta0", &self.theta0),
            ("phi0", &self.phi0),
            ("seed", &self.seed),
        ];
        let mut out: Vec<(String, String)> = flags
            .iter()
            .filter_map(|(k, v)| v.as_ref().map(|v| (k.to_string(), v.clone())))
            .collect();
        if let Some(dir) = &self.out {
            out.push(("out".into(), dir.display().to_string()));
        }
        out
    }
}

fn execute(kind: ExperimentKind, common: &Common) -> Result<(), Error> {
    let text = match &common.config {
        Some(path) => std::fs::read_to_string(path).map_err(|e| Error::Io {
            path: path.display().to_string(),
            source: e,
        })?,
        None => String::new(),
    };
    let mut overrides = common.overrides();
    overrides.insert(0, ("experiment".into(), kind.name().into()));
    let cfg = RunConfig::parse(&text, Some(kind), &overrides)?;
    let manifest = expcli::run(&cfg)?;
    for (name, rows) in &manifest.outputs {
        println!("{}\t{rows} rows", cfg.out.join(name).display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let (kind, common) = match &cli.command {
        Command::Evolve(c) => (ExperimentKind::Evolve, c),
        Command::Portrait(c) => (ExperimentKind::Portrait, c),
        Command::Husimi(c) => (ExperimentKind::Husimi, c),
        Command::Deltaneff(c) => (ExperimentKind::DeltaNeff, c),
        Command::RmtCompare(c) => (ExperimentKind::RmtCompare, c),
        Command::Stats(c) => (ExperimentKind::Stats, c),
    };
    match execute(kind, common) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
