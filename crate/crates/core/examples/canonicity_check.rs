//! Poisson-bracket residual of the coupled classical map, next to a map
//! that couples through `Y` of the other top instead of `X` and is
//! therefore not canonical.

use coupled_tops::classical::{coupled_poisson_residual, poisson_residual, CoupledClassicalState, SpherePoint};

fn twist(p: SpherePoint, angle: f64) -> SpherePoint {
    let (s, c) = angle.sin_cos();
    SpherePoint::new(p.z * c + p.y * s, -p.z * s + p.y * c, -p.x)
}

fn coupled_through_y(s: CoupledClassicalState, k: f64, eps: f64) -> CoupledClassicalState {
    CoupledClassicalState::new(
        twist(s.p1, k * s.p1.x + eps * s.p2.y),
        twist(s.p2, k * s.p2.x + eps * s.p1.y),
    )
}

fn main() -> coupled_tops::Result<()> {
    let state = CoupledClassicalState::new(
        SpherePoint::from_angles(0.89, 0.63),
        SpherePoint::from_angles(2.1, -1.3),
    );
    println!("{:>8} {:>4} {:>12} {:>14}", "eps", "k", "residual", "through Y");
    for eps in [0.0, 1e-3, 1e-2, 0.1] {
        for k in [1.0, 6.0] {
            let good = coupled_poisson_residual(k, k, eps, state, 1e-5)?;
            let bad = poisson_residual(|s| coupled_through_y(s, k, eps), state, 1e-5)?;
            println!("{eps:>8} {k:>4} {good:>12.2e} {bad:>14.2e}");
        }
    }
    Ok(())
}
