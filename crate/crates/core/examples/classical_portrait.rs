//! Classical phase portrait of one top, summarised as an occupancy map.
//!
//! `cargo run --release --example classical_portrait -- [k]`

use coupled_tops::classical::{occupancy_fraction, phase_portrait, portrait_grid, SpherePoint};

fn main() {
    let k: f64 = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(6.0);
    let generic = phase_portrait(k, &[SpherePoint::from_angles(0.89, 0.63)], 20_000);
    println!(
        "k = {k}: orbit from (0.89, 0.63) visits {:.0}% of a 20×20 grid",
        100.0 * occupancy_fraction(&generic[0], 20, 20)
    );

    // coarse text rendering of the whole portrait: rows are cos θ, columns φ
    let orbits = phase_portrait(k, &portrait_grid(20, 20), 500);
    let (rows, cols) = (24, 72);
    let mut canvas = vec![vec![' '; cols]; rows];
    for c in orbits.iter().flatten() {
        let r = (((1.0 - c.cos_theta) / 2.0 * rows as f64) as usize).min(rows - 1);
        let q = (((c.phi + std::f64::consts::PI) / (2.0 * std::f64::consts::PI) * cols as f64) as usize).min(cols - 1);
        canvas[r][q] = '.';
    }
    for row in canvas {
        println!("|{}|", row.into_iter().collect::<String>());
    }
}
