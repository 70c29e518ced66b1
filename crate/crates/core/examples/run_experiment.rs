//! Drives an experiment through the configuration layer, as the command-line
//! tool does, and lists the files written.
//!
//! `cargo run --release --example run_experiment -- [experiment] [out-dir]`

use coupled_tops::expcli::{run, ExperimentKind, RunConfig};

fn main() -> coupled_tops::Result<()> {
    let mut args = std::env::args().skip(1);
    let kind: ExperimentKind = args.next().unwrap_or_else(|| "rmt-compare".into()).parse()?;
    let out = args.next().unwrap_or_else(|| "out".into());
    let text = "j = 20\neps_list = 0.001, 0.01\nsteps = 50\n";
    let cfg = RunConfig::parse(text, Some(kind), &[("out".into(), out)])?;
    let manifest = run(&cfg)?;
    print!("{}", manifest.render());
    Ok(())
}
