//! Classical limit of the kicked tops.
//!
//! With `(X, Y, Z) = J/j` the single-top map is
//!
//! ```text
//! X' = Z cos kX + Y sin kX
//! Y' = -Z sin kX + Y cos kX
//! Z' = -X
//! ```
//!
//! and the coupled map replaces the torsion angle of each top by
//! `Δ₁₂ = k₁X₁ + εX₂` and `Δ₂₁ = k₂X₂ + εX₁`. Iteration happens in ambient
//! coordinates; `(cos θ, φ)` is produced only for output.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// A point in ambient coordinates, normally on the unit sphere.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpherePoint {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl SpherePoint {
    /// No sphere check; the finite-difference Jacobian needs points slightly
    /// off the sphere.
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        SpherePoint { x, y, z }
    }

    /// `(sin θ cos φ, sin θ sin φ, cos θ)`.
    pub fn from_angles(theta: f64, phi: f64) -> Self {
        let (st, ct) = theta.sin_cos();
        SpherePoint::new(st * phi.cos(), st * phi.sin(), ct)
    }

    pub fn norm(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    fn scaled(self, f: f64) -> Self {
        SpherePoint::new(self.x * f, self.y * f, self.z * f)
    }
}

/// Canonical coordinates `(cos θ, φ)` with `φ ∈ (-π, π]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CanonicalCoords {
    pub cos_theta: f64,
    pub phi: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CoupledClassicalState {
    pub p1: SpherePoint,
    pub p2: SpherePoint,
}

impl CoupledClassicalState {
    pub fn new(p1: SpherePoint, p2: SpherePoint) -> Self {
        CoupledClassicalState { p1, p2 }
    }

    pub fn swapped(self) -> Self {
        CoupledClassicalState {
            p1: self.p2,
            p2: self.p1,
        }
    }

    fn to_array(self) -> [f64; 6] {
        [self.p1.x, self.p1.y, self.p1.z, self.p2.x, self.p2.y, self.p2.z]
    }

    fn from_array(a: [f64; 6]) -> Self {
        CoupledClassicalState::new(SpherePoint::new(a[0], a[1], a[2]), SpherePoint::new(a[3], a[4], a[5]))
    }
}

/// Rotate `(Z, Y)` by `angle` and send `X` to `-Z`. Preserves the norm of
/// the input; a drift above 1e-12 is projected back onto it.
fn twist(p: SpherePoint, angle: f64) -> SpherePoint {
    let (s, c) = angle.sin_cos();
    let out = SpherePoint::new(p.z * c + p.y * s, -p.z * s + p.y * c, -p.x);
    let (before, after) = (p.norm(), out.norm());
    if (after - before).abs() > 1e-12 && after > 0.0 {
        out.scaled(before / after)
    } else {
        out
    }
}

pub fn single_map(point: SpherePoint, k: f64) -> SpherePoint {
    twist(point, k * point.x)
}

pub fn coupled_map(state: CoupledClassicalState, k1: f64, k2: f64, epsilon: f64) -> CoupledClassicalState {
    let (x1, x2) = (state.p1.x, state.p2.x);
    CoupledClassicalState::new(
        twist(state.p1, k1 * x1 + epsilon * x2),
        twist(state.p2, k2 * x2 + epsilon * x1),
    )
}

/// `cos θ = Z`, `φ = atan2(Y, X)`; `φ = 0` at the poles.
pub fn to_canonical(point: SpherePoint) -> CanonicalCoords {
    let cos_theta = point.z.clamp(-1.0, 1.0);
    let phi = if point.x == 0.0 && point.y == 0.0 {
        0.0
    } else {
        let p = point.y.atan2(point.x);
        if p <= -PI {
            p + 2.0 * PI
        } else {
            p
        }
    };
    CanonicalCoords { cos_theta, phi }
}

pub fn from_canonical(coords: CanonicalCoords) -> Result<SpherePoint> {
    let c = coords.cos_theta;
    if !(-1.0..=1.0).contains(&c) {
        return Err(Error::domain(format!("cos θ = {c} outside [-1, 1]")));
    }
    let s = (1.0 - c * c).sqrt();
    let (sp, cp) = coords.phi.sin_cos();
    Ok(SpherePoint::new(s * cp, s * sp, c))
}

/// Iterates the single-top map from every initial condition, returning the
/// `n_iter` iterates of each orbit in canonical coordinates.
pub fn phase_portrait(k: f64, initial_conditions: &[SpherePoint], n_iter: usize) -> Vec<Vec<CanonicalCoords>> {
    initial_conditions
        .iter()
        .map(|&p0| {
            let mut p = p0;
            (0..n_iter)
                .map(|_| {
                    p = single_map(p, k);
                    to_canonical(p)
                })
                .collect()
        })
        .collect()
}

/// Midpoint grid of `n_cos × n_phi` initial conditions, uniform in
/// `cos θ` and `φ`.
pub fn portrait_grid(n_cos: usize, n_phi: usize) -> Vec<SpherePoint> {
    let mut out = Vec::with_capacity(n_cos * n_phi);
    for a in 0..n_cos {
        let cos_theta = -1.0 + (a as f64 + 0.5) * 2.0 / n_cos as f64;
        for b in 0..n_phi {
            let phi = -PI + (b as f64 + 0.5) * 2.0 * PI / n_phi as f64;
            out.push(from_canonical(CanonicalCoords { cos_theta, phi }).expect("grid inside [-1, 1]"));
        }
    }
    out
}

/// Fraction of the cells of an `n_cos × n_phi` equal-area grid on the
/// sphere visited by `samples`.
pub fn occupancy_fraction(samples: &[CanonicalCoords], n_cos: usize, n_phi: usize) -> f64 {
    let mut hit = vec![false; n_cos * n_phi];
    for s in samples {
        let a = (((s.cos_theta + 1.0) / 2.0 * n_cos as f64) as usize).min(n_cos - 1);
        let b = (((s.phi + PI) / (2.0 * PI) * n_phi as f64) as usize).min(n_phi - 1);
        hit[a * n_phi + b] = true;
    }
    hit.iter().filter(|&&h| h).count() as f64 / hit.len() as f64
}

/// Spin Poisson tensor on one sphere: `{X,Y} = Z`, `{Y,Z} = X`,
/// `{Z,X} = Y`.
fn spin_bracket(p: [f64; 3]) -> [[f64; 3]; 3] {
    let [x, y, z] = p;
    [[0.0, z, -y], [-z, 0.0, x], [y, -x, 0.0]]
}

fn bracket_tensor(s: &[f64; 6]) -> [[f64; 6]; 6] {
    let mut b = [[0.0; 6]; 6];
    for (off, blk) in [
        (0, spin_bracket([s[0], s[1], s[2]])),
        (3, spin_bracket([s[3], s[4], s[5]])),
    ] {
        for r in 0..3 {
            for c in 0..3 {
                b[off + r][off + c] = blk[r][c];
            }
        }
    }
    b
}

/// `max |J B(x) Jᵀ − B(x')|` for the map `f` at `state`, with `J` the
/// central-difference Jacobian in ambient coordinates and `B` the
/// two-sphere Poisson tensor (no cross-sphere brackets). Zero up to
/// finite-difference error exactly when `f` is canonical.
pub fn poisson_residual<F>(map: F, state: CoupledClassicalState, h: f64) -> Result<f64>
where
    F: Fn(CoupledClassicalState) -> CoupledClassicalState,
{
    if !(1e-7..=1e-4).contains(&h) {
        return Err(Error::domain(format!(
            "finite-difference step {h} outside [1e-7, 1e-4]"
        )));
    }
    let x = state.to_array();
    let image = map(state).to_array();
    let mut jac = [[0.0; 6]; 6];
    for c in 0..6 {
        let (mut plus, mut minus) = (x, x);
        plus[c] += h;
        minus[c] -= h;
        let fp = map(CoupledClassicalState::from_array(plus)).to_array();
        let fm = map(CoupledClassicalState::from_array(minus)).to_array();
        for r in 0..6 {
            jac[r][c] = (fp[r] - fm[r]) / (2.0 * h);
        }
    }
    let b = bracket_tensor(&x);
    let b_image = bracket_tensor(&image);
    let mut worst = 0.0f64;
    for r in 0..6 {
        for c in 0..6 {
            let mut acc = 0.0;
            for a in 0..6 {
                for d in 0..6 {
                    acc += jac[r][a] * b[a][d] * jac[c][d];
                }
            }
            worst = worst.max((acc - b_image[r][c]).abs());
        }
    }
    Ok(worst)
}

/// [`poisson_residual`] of [`coupled_map`] with fixed parameters.
pub fn coupled_poisson_residual(k1: f64, k2: f64, epsilon: f64, state: CoupledClassicalState, h: f64) -> Result<f64> {
    poisson_residual(|s| coupled_map(s, k1, k2, epsilon), state, h)
}
