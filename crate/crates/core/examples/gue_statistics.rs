//! Kolmogorov-Smirnov test of N|c|² against the unit exponential for a
//! chaotic top, a coherent state and a seeded random vector.

use coupled_tops::entangle::{component_statistics, ks_threshold};
use coupled_tops::evolve::{evolve_single, TopParams};
use coupled_tops::rmt::gue_vector;
use coupled_tops::spin::{coherent_amplitudes, SpinQuantum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> coupled_tops::Result<()> {
    let spin = SpinQuantum::from_two_j(160);
    let v0 = coherent_amplitudes(spin, 0.89, 0.63);
    let chaotic = evolve_single(v0.clone(), &TopParams::new(spin, 6.0), 200, |_, _| Ok(()))?;
    let random = gue_vector(spin.dim(), &mut ChaCha8Rng::seed_from_u64(1));
    println!("5% threshold {:.4}", ks_threshold(spin.dim()));
    for (name, v) in [("coherent", &v0), ("k = 6, n = 200", &chaotic), ("random", &random)] {
        let s = component_statistics(v);
        println!(
            "{name:>16}: KS {:.4}, mean re {:+.2e}, var re {:.2e}",
            s.ks_exponential, s.mean_re, s.var_re
        );
    }
    Ok(())
}
