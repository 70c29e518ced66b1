//! Random-matrix predictions for the coupled tops.
//!
//! Long-time saturation values, and the linear entropy of two coupled
//! systems whose Floquet operators are replaced by independent random
//! unitaries:
//!
//! ```text
//! S_R(n) ≈ 1 − p(ε)^{4(n−1)} B(ε)
//! p(ε)   = N⁻² Σ_{m₁,m₂} exp(−iε m₁m₂/j)
//! B(ε)   = N⁻⁴ Σ_{m₁,n₁,m₂,n₂} exp(−iε (m₁−n₁)(m₂−n₂)/j)
//! ```
//!
//! Both sums are available exactly and in a continuum approximation built
//! from the sine and cosine integrals.

use std::f64::consts::FRAC_PI_2;

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::spin::SpinQuantum;
use crate::C64;

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Closed-form random-matrix values for dimension `N`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RmtPrediction {
    pub dim: usize,
    /// `ln N − 1/2`
    pub sv_saturation: f64,
    /// `1 − (2N+1)/(N²+2)`
    pub sr_saturation: f64,
    /// `2/(N+1)`
    pub m2_pure: f64,
    /// `(N+1)/(2N)`
    pub delta_n_eff_pure: f64,
    /// `(N+1)(N²+2)/(N(N²+2N+3))`
    pub delta_n_eff_coupled: f64,
    /// `(1 + (2N+1)/(N²+2))/(N+1)`
    pub m2_rdm: f64,
}

pub fn predictions(dim: usize) -> Result<RmtPrediction> {
    if dim < 2 {
        return Err(Error::domain(format!("dimension {dim} < 2")));
    }
    let n = dim as f64;
    let sum_sq = (2.0 * n + 1.0) / (n * n + 2.0);
    Ok(RmtPrediction {
        dim,
        sv_saturation: n.ln() - 0.5,
        sr_saturation: 1.0 - sum_sq,
        m2_pure: 2.0 / (n + 1.0),
        delta_n_eff_pure: (n + 1.0) / (2.0 * n),
        delta_n_eff_coupled: (n + 1.0) * (n * n + 2.0) / (n * (n * n + 2.0 * n + 3.0)),
        m2_rdm: (1.0 + sum_sq) / (n + 1.0),
    })
}

/// Normalised vector of i.i.d. complex Gaussian components: a column of a
/// random unitary drawn from the invariant measure.
pub fn gue_vector<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Vec<C64> {
    let v: Vec<C64> = (0..dim)
        .map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / norm).collect()
}

const SERIES_LIMIT: f64 = 2.0;

/// `Σ (−1)^k x^{2k+1} / ((2k+1)(2k+1)!)`
fn si_series(x: f64) -> f64 {
    let x2 = x * x;
    let mut term = x; // x^{2k+1}/(2k+1)!
    let mut sum = x;
    for k in 1..60 {
        let a = (2 * k) as f64;
        term *= -x2 / (a * (a + 1.0));
        let add = term / (a + 1.0);
        sum += add;
        if add.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    sum
}

/// `Cin(x) = ∫₀ˣ (1 − cos t)/t dt = Σ_{k≥1} (−1)^{k+1} x^{2k} / (2k (2k)!)`
fn cin_series(x: f64) -> f64 {
    let x2 = x * x;
    let mut term = 1.0; // (−1)^{k+1} x^{2k}/(2k)!
    let mut sum = 0.0;
    for k in 1..60 {
        let a = (2 * k) as f64;
        term *= -x2 / ((a - 1.0) * a);
        let add = -term / a;
        sum += add;
        if add.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    sum
}

/// `(Si(x), Ci(x))` for `x > 2` from the continued fraction of `E₁(ix)`
/// (modified Lentz).
fn sici_fraction(x: f64) -> (f64, f64) {
    let tiny = 1e-300;
    let mut b = C64::new(1.0, x);
    let mut c = C64::new(1.0 / tiny, 0.0);
    let mut d = C64::new(1.0, 0.0) / b;
    let mut h = d;
    for i in 2..10_000 {
        let a = -((i - 1) as f64).powi(2);
        b += C64::new(2.0, 0.0);
        d = C64::new(1.0, 0.0) / (d * a + b);
        c = b + C64::new(a, 0.0) / c;
        let del = c * d;
        h *= del;
        if (del - 1.0).norm() < 1e-16 {
            break;
        }
    }
    let h = h * C64::new(x.cos(), -x.sin());
    (FRAC_PI_2 + h.im, -h.re)
}

/// Sine integral `Si(x) = ∫₀ˣ sin t / t dt`; odd in `x`.
pub fn si(x: f64) -> f64 {
    let a = x.abs();
    let v = if a <= SERIES_LIMIT {
        si_series(a)
    } else {
        sici_fraction(a).0
    };
    v.copysign(x)
}

/// Cosine integral `Ci(x) = γ + ln x + ∫₀ˣ (cos t − 1)/t dt` for `x > 0`.
pub fn ci(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::domain(format!("Ci undefined at x = {x}")));
    }
    Ok(if x <= SERIES_LIMIT {
        EULER_GAMMA + x.ln() - cin_series(x)
    } else {
        sici_fraction(x).1
    })
}

/// `Cin(x) = γ + ln x − Ci(x)`, entire and even.
pub fn cin(x: f64) -> f64 {
    let a = x.abs();
    if a <= SERIES_LIMIT {
        cin_series(a)
    } else {
        EULER_GAMMA + a.ln() - sici_fraction(a).1
    }
}

/// `p(ε)` by direct summation over the `N²` magnetic pairs. Real, even in
/// `ε`, and exactly 1 at `ε = 0`.
pub fn p_epsilon_exact(spin: SpinQuantum, epsilon: f64) -> f64 {
    let j = spin.j();
    let n = spin.dim();
    let scale = epsilon / j.max(0.5);
    let mut total = 0.0;
    for a in 0..n {
        let m1 = spin.m(a);
        for b in 0..n {
            total += (scale * m1 * spin.m(b)).cos();
        }
    }
    total / (n * n) as f64
}

/// `B(ε)` exactly, reduced to the sum over differences
/// `l = m − n ∈ [−2j, 2j]` with multiplicity `N − |l|`.
pub fn bracket_exact(spin: SpinQuantum, epsilon: f64) -> f64 {
    let n = spin.dim() as i64;
    let scale = epsilon / spin.j().max(0.5);
    let mut total = 0.0;
    for l1 in -(n - 1)..n {
        let w1 = (n - l1.abs()) as f64;
        let mut row = 0.0;
        for l2 in -(n - 1)..n {
            row += (n - l2.abs()) as f64 * (scale * (l1 * l2) as f64).cos();
        }
        total += w1 * row;
    }
    total / (n as f64).powi(4)
}

/// Continuum value of `p(ε)`: `Si(Nε/2)/(Nε/2)`.
pub fn p_epsilon_closed(dim: usize, epsilon: f64) -> f64 {
    let x = 0.5 * dim as f64 * epsilon.abs();
    if x == 0.0 {
        1.0
    } else {
        si(x) / x
    }
}

/// Continuum value of `B(ε)` with `a = 2Nε`:
/// `(4/a) Si(a) − (4/a²)(1 − cos a + Cin(a))`.
pub fn bracket_closed(dim: usize, epsilon: f64) -> f64 {
    let a = 2.0 * dim as f64 * epsilon.abs();
    if a == 0.0 {
        return 1.0;
    }
    let one_minus_cos = 2.0 * (0.5 * a).sin().powi(2);
    4.0 * si(a) / a - 4.0 * (one_minus_cos + cin(a)) / (a * a)
}

/// `p(ε)` as printed alongside the closed-form entropy:
/// `(2/N)(1 + Si(Nε/2)/ε)`. Tends to `1 + 2/N` as `ε → 0`.
pub fn p_epsilon_printed(dim: usize, epsilon: f64) -> f64 {
    let n = dim as f64;
    let e = epsilon.abs();
    let ratio = if e == 0.0 { 0.5 * n } else { si(0.5 * n * e) / e };
    2.0 / n * (1.0 + ratio)
}

/// The closed-form linear entropy in its printed arrangement:
/// `1 − p^{4(n−1)} [(2/N)(1 + Si(2Nε)/ε) − (Nε)⁻²(1 − cos 2Nε + Ci 2Nε − ln 2Nε − γ)]`
/// with `p` from [`p_epsilon_printed`].
pub fn sr_printed(n: usize, dim: usize, epsilon: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::domain("step index starts at 1"));
    }
    let nf = dim as f64;
    let e = epsilon.abs();
    let a = 2.0 * nf * e;
    let bracket = if a == 0.0 {
        // limit of the printed bracket
        3.0 + 2.0 / nf
    } else {
        let one_minus_cos = 2.0 * (0.5 * a).sin().powi(2);
        2.0 / nf * (1.0 + si(a) / e) - (one_minus_cos - cin(a)) / (nf * e).powi(2)
    };
    Ok(1.0 - p_epsilon_printed(dim, epsilon).powi(4 * (n as i32 - 1)) * bracket)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SrMode {
    ExactSum,
    ClosedForm,
}

/// `S_R(n) = 1 − p^{4(n−1)} B` with `p` and `B` from the chosen mode.
pub fn sr_analytic(n: usize, spin: SpinQuantum, epsilon: f64, mode: SrMode) -> Result<f64> {
    if n == 0 {
        return Err(Error::domain("step index starts at 1"));
    }
    let (p, b) = match mode {
        SrMode::ExactSum => (p_epsilon_exact(spin, epsilon), bracket_exact(spin, epsilon)),
        SrMode::ClosedForm => (
            p_epsilon_closed(spin.dim(), epsilon),
            bracket_closed(spin.dim(), epsilon),
        ),
    };
    Ok(sr_from_parts(n, p, b))
}

/// The curve `S_R(1..=n_max)` for one mode, evaluating the sums once.
pub fn sr_curve(n_max: usize, spin: SpinQuantum, epsilon: f64, mode: SrMode) -> Vec<f64> {
    let (p, b) = match mode {
        SrMode::ExactSum => (p_epsilon_exact(spin, epsilon), bracket_exact(spin, epsilon)),
        SrMode::ClosedForm => (
            p_epsilon_closed(spin.dim(), epsilon),
            bracket_closed(spin.dim(), epsilon),
        ),
    };
    (1..=n_max).map(|n| sr_from_parts(n, p, b)).collect()
}

fn sr_from_parts(n: usize, p: f64, b: f64) -> f64 {
    1.0 - p.powf(4.0 * (n - 1) as f64) * b
}

/// Weak-coupling production rate `2ε²j²/9` per kick.
pub fn sr_weak_rate(spin: SpinQuantum, epsilon: f64) -> f64 {
    2.0 * epsilon * epsilon * spin.j() * spin.j() / 9.0
}
