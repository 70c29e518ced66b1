//! Independent reference computations shared by the integration tests.
#![allow(dead_code)]

use coupled_tops::spin::SpinQuantum;
use coupled_tops::C64;
use nalgebra::DMatrix;

fn binom(n: i64, k: i64) -> i128 {
    if k < 0 || k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: i128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as i128 / (i + 1) as i128;
    }
    acc
}

/// `d^j_{s m}(π/2)` from the closed binomial sum, exact integer
/// arithmetic for the sum. Valid for `2j ≤ 40`.
pub fn wigner_direct(two_j: u32, s_idx: usize, m_idx: usize) -> f64 {
    let tj = two_j as i64;
    let (s, m) = (s_idx as i64, m_idx as i64);
    // j − s = tj − s, j + s = s, s − m in index form
    let mut sum: i128 = 0;
    for k in 0..=(tj - s) {
        let term = binom(tj - s, k) * binom(s, k + s - m);
        sum += if k % 2 == 0 { term } else { -term };
    }
    let sign = if (s - m).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    let ratio = binom(tj, tj - s) as f64 / binom(tj, m) as f64;
    sign * 2f64.powf(-(two_j as f64) / 2.0) * ratio.sqrt() * sum as f64
}

/// Single-top Floquet matrix `⟨s|U|m⟩ = e^{−i k s²/(2j)} d_{sm}(π/2)`.
pub fn single_floquet(spin: SpinQuantum, k: f64) -> DMatrix<C64> {
    let n = spin.dim();
    let j = spin.j();
    DMatrix::from_fn(n, n, |s, m| {
        let sm = spin.m(s);
        C64::from_polar(1.0, -k * sm * sm / (2.0 * j)) * wigner_direct(spin.two_j(), s, m)
    })
}

/// `exp(−i(ε/j) m₁m₂)(U₁ ⊗ U₂)` on the product basis, index `m₁·N + m₂`.
pub fn dense_floquet(spin: SpinQuantum, k1: f64, k2: f64, eps: f64) -> DMatrix<C64> {
    let n = spin.dim();
    let kron = single_floquet(spin, k1).kronecker(&single_floquet(spin, k2));
    let j = spin.j();
    DMatrix::from_fn(n * n, n * n, |r, c| {
        let (a, b) = (r / n, r % n);
        C64::from_polar(1.0, -eps / j * spin.m(a) * spin.m(b)) * kron[(r, c)]
    })
}

/// Partial trace of `|ψ⟩⟨ψ|` from the full `N² × N²` projector.
pub fn brute_partial_trace(flat: &[C64], n: usize, first: bool) -> DMatrix<C64> {
    let full = DMatrix::from_fn(n * n, n * n, |r, c| flat[r] * flat[c].conj());
    DMatrix::from_fn(n, n, |a, b| {
        (0..n)
            .map(|t| {
                if first {
                    full[(a * n + t, b * n + t)]
                } else {
                    full[(t * n + a, t * n + b)]
                }
            })
            .sum()
    })
}

pub fn max_abs(m: &DMatrix<C64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Normalised vector with uniform random components.
pub fn random_unit(n: usize, rng: &mut impl rand::Rng) -> Vec<C64> {
    let v: Vec<C64> = (0..n)
        .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / norm).collect()
}

/// A twist about the `Y` axis by `angle` after sending `X → −Z`; the
/// building block of both coupled maps below.
pub fn twist(p: [f64; 3], angle: f64) -> [f64; 3] {
    let (s, c) = angle.sin_cos();
    [p[2] * c + p[1] * s, -p[2] * s + p[1] * c, -p[0]]
}
