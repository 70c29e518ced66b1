//! Evolves two coupled chaotic tops and prints the entanglement growth.
//!
//! `cargo run --release --example floquet_evolution -- [j] [k] [eps] [steps]`

use coupled_tops::entangle::{entropies_of, reduce, schmidt_values, Subsystem};
use coupled_tops::evolve::{evolve, initial_product_state, CoupledParams};
use coupled_tops::spin::SpinQuantum;

fn main() -> coupled_tops::Result<()> {
    let args: Vec<f64> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let j = args.first().copied().unwrap_or(40.0);
    let k = args.get(1).copied().unwrap_or(6.0);
    let eps = args.get(2).copied().unwrap_or(1e-2);
    let steps = args.get(3).copied().unwrap_or(300.0) as usize;

    let spin = SpinQuantum::from_j(j)?;
    let params = CoupledParams::symmetric(spin, k, eps);
    let psi0 = initial_product_state(spin, 0.89, 0.63, 0.89, 0.63);
    println!(
        "j = {j}, k = {k}, ε = {eps}; bound ln N − 1/2 = {:.4}",
        (spin.dim() as f64).ln() - 0.5
    );
    println!("{:>6} {:>10} {:>10}", "n", "S_V", "S_R");
    evolve(psi0, &params, steps, |n, psi| {
        if n % (steps / 20).max(1) == 0 {
            let (s_v, s_r) = entropies_of(&schmidt_values(&reduce(psi, Subsystem::First))?);
            println!("{n:>6} {s_v:>10.5} {s_r:>10.5}");
        }
        Ok(())
    })?;
    Ok(())
}
