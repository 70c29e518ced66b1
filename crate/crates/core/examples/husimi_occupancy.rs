//! Husimi second moment and effective phase-space occupancy of a chaotic
//! single top, with the quadrature check on a grid.

use coupled_tops::evolve::{evolve_single, TopParams};
use coupled_tops::husimi::{
    delta_n_eff, husimi_field, m2_pure, m2_quadrature, FWeightTable, PureVector, SphericalGrid,
};
use coupled_tops::rmt::predictions;
use coupled_tops::spin::{coherent_amplitudes, SpinQuantum};

fn main() -> coupled_tops::Result<()> {
    let spin = SpinQuantum::from_two_j(160);
    let n = spin.dim();
    let table = FWeightTable::new(spin);
    let v0 = coherent_amplitudes(spin, 0.89, 0.63);
    println!(
        "coherent state: ΔN_eff = {:.5} (≈ two Planck cells of {n})",
        delta_n_eff(m2_pure(&table, &v0)?, n)?
    );

    let mut sum = 0.0;
    let mut count = 0;
    let v = evolve_single(v0, &TopParams::new(spin, 6.0), 1000, |step, v| {
        if step >= 200 {
            sum += delta_n_eff(m2_pure(&table, v)?, n)?;
            count += 1;
        }
        Ok(())
    })?;
    println!(
        "k = 6, mean ΔN_eff over n = 200..1000: {:.4}; random states: {:.4}",
        sum / count as f64,
        predictions(n)?.delta_n_eff_pure
    );

    let grid = SphericalGrid::new(spin, 200, 400)?;
    let field = husimi_field(&PureVector { spin, amplitudes: &v }, &grid)?;
    println!(
        "grid 200×400: ∫ρ_H = {:.5}, M₂ quadrature {:.6} vs analytic {:.6}",
        field.integral(),
        m2_quadrature(&field),
        m2_pure(&table, &v)?
    );
    Ok(())
}
