//! Husimi functions on the sphere and their second moment.
//!
//! The second moment `M₂ = ∫dμ ρ_H²` of a spin-`j` state reduces to a
//! constrained sum over matrix elements weighted by
//!
//! ```text
//! F(2j; i,k,l,m) = (2j+1)/(4j+1)! · √(C(2j,j+i) C(2j,j+k) C(2j,j+l) C(2j,j+m))
//!                  · (2j−i−l)! (2j+i+l)!
//! ```
//!
//! subject to `i + l = k + m`. `F` splits into `G(i+l)·w_i w_k w_l w_m` with
//! `w_i = √C(2j, j+i)`, so with `A = WρW` the moment is
//! `Σ_s G(s) Σ_{i,k} A[i,k] A[s−i, s−k]`, and for a pure state the inner
//! sum collapses to `|Σ_i a_i a_{s−i}|²`.

use std::f64::consts::PI;

use crate::entangle::ReducedDensityMatrix;
use crate::error::{Error, Result};
use crate::spin::{coherent_moduli_with, LogFactorialTable, SpinQuantum};
use crate::C64;

/// Midpoint lattice in `(θ, φ)` with Haar weights normalised to `N`.
#[derive(Clone, Debug)]
pub struct SphericalGrid {
    spin: SpinQuantum,
    n_theta: usize,
    n_phi: usize,
    thetas: Vec<f64>,
    phis: Vec<f64>,
    row_weights: Vec<f64>,
}

impl SphericalGrid {
    pub fn new(spin: SpinQuantum, n_theta: usize, n_phi: usize) -> Result<Self> {
        if n_theta == 0 || n_phi == 0 {
            return Err(Error::domain(format!("grid {n_theta}×{n_phi} has no nodes")));
        }
        let d_theta = PI / n_theta as f64;
        let d_phi = 2.0 * PI / n_phi as f64;
        let thetas: Vec<f64> = (0..n_theta).map(|a| (a as f64 + 0.5) * d_theta).collect();
        let phis = (0..n_phi).map(|b| -PI + (b as f64 + 0.5) * d_phi).collect();
        let pre = spin.dim() as f64 / (4.0 * PI) * d_theta * d_phi;
        let row_weights = thetas.iter().map(|t| pre * t.sin()).collect();
        Ok(SphericalGrid {
            spin,
            n_theta,
            n_phi,
            thetas,
            phis,
            row_weights,
        })
    }

    pub fn spin(&self) -> SpinQuantum {
        self.spin
    }

    pub fn n_theta(&self) -> usize {
        self.n_theta
    }

    pub fn n_phi(&self) -> usize {
        self.n_phi
    }

    pub fn thetas(&self) -> &[f64] {
        &self.thetas
    }

    pub fn phis(&self) -> &[f64] {
        &self.phis
    }

    /// Weight of every node in row `a` (weights do not depend on `φ`).
    pub fn weight(&self, a: usize) -> f64 {
        self.row_weights[a]
    }

    pub fn total_weight(&self) -> f64 {
        self.row_weights.iter().sum::<f64>() * self.n_phi as f64
    }
}

/// Values of `⟨z|ρ|z⟩` on a grid, row-major with `φ` fastest.
#[derive(Clone, Debug)]
pub struct HusimiField {
    grid: SphericalGrid,
    values: Vec<f64>,
    clip: f64,
}

impl HusimiField {
    pub fn grid(&self) -> &SphericalGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, a: usize, b: usize) -> f64 {
        self.values[a * self.grid.n_phi + b]
    }

    /// Largest negative value removed by clipping.
    pub fn clip(&self) -> f64 {
        self.clip
    }

    /// `∫dμ ρ_H`, which should be 1 up to quadrature error.
    pub fn integral(&self) -> f64 {
        self.weighted_sum(|v| v)
    }

    fn weighted_sum(&self, f: impl Fn(f64) -> f64) -> f64 {
        let n_phi = self.grid.n_phi;
        self.values
            .chunks(n_phi)
            .enumerate()
            .map(|(a, row)| self.grid.weight(a) * row.iter().map(|&v| f(v)).sum::<f64>())
            .sum()
    }

    /// Node with the largest value, as `(θ, φ, value)`.
    pub fn argmax(&self) -> (f64, f64, f64) {
        let (i, v) = self
            .values
            .iter()
            .enumerate()
            .fold((0, f64::MIN), |acc, (i, &v)| if v > acc.1 { (i, v) } else { acc });
        let n_phi = self.grid.n_phi;
        (self.grid.thetas[i / n_phi], self.grid.phis[i % n_phi], v)
    }
}

/// Anything with a Husimi function: a pure single-top vector or an RDM.
pub trait HusimiSource {
    fn spin(&self) -> SpinQuantum;

    /// Values along one `θ` row given the coherent-state moduli `a_m(θ)`.
    fn row(&self, moduli: &[f64], phis: &[f64]) -> Vec<f64>;
}

/// A normalised single-top state vector.
#[derive(Clone, Copy, Debug)]
pub struct PureVector<'a> {
    pub spin: SpinQuantum,
    pub amplitudes: &'a [C64],
}

impl HusimiSource for PureVector<'_> {
    fn spin(&self) -> SpinQuantum {
        self.spin
    }

    fn row(&self, moduli: &[f64], phis: &[f64]) -> Vec<f64> {
        // ⟨z|v⟩ = Σ_m a_m v_m e^{imφ} up to a global phase
        let coeffs: Vec<C64> = moduli.iter().zip(self.amplitudes).map(|(&a, &v)| v * a).collect();
        phis.iter().map(|&phi| fourier(&coeffs, phi).norm_sqr()).collect()
    }
}

impl HusimiSource for ReducedDensityMatrix {
    fn spin(&self) -> SpinQuantum {
        ReducedDensityMatrix::spin(self)
    }

    fn row(&self, moduli: &[f64], phis: &[f64]) -> Vec<f64> {
        // ⟨z|ρ|z⟩ = Σ_d D_d e^{idφ}, D_d = Σ_{m−n=d} a_m a_n ρ_mn, D_{−d} = D_d*
        let rho = self.entries();
        let n = moduli.len();
        let diag: Vec<C64> = (0..n)
            .map(|d| (d..n).map(|m| rho[(m, m - d)] * (moduli[m] * moduli[m - d])).sum())
            .collect();
        phis.iter()
            .map(|&phi| {
                let step = C64::from_polar(1.0, phi);
                let mut rot = step;
                let mut acc = diag[0].re;
                for d in diag.iter().skip(1) {
                    acc += 2.0 * (d * rot).re;
                    rot *= step;
                }
                acc
            })
            .collect()
    }
}

fn fourier(coeffs: &[C64], phi: f64) -> C64 {
    // Horner in e^{iφ}
    let z = C64::from_polar(1.0, phi);
    coeffs.iter().rev().fold(C64::new(0.0, 0.0), |acc, &c| acc * z + c)
}

/// Evaluates the Husimi function of `source` on `grid`. Values below zero
/// are clipped; a clip larger than 1e-12 is an error.
pub fn husimi_field<S: HusimiSource + ?Sized>(source: &S, grid: &SphericalGrid) -> Result<HusimiField> {
    if source.spin() != grid.spin() {
        return Err(Error::Shape(format!(
            "source spin 2j = {} but grid spin 2j = {}",
            source.spin().two_j(),
            grid.spin().two_j()
        )));
    }
    let lf = LogFactorialTable::new(grid.spin().two_j() as usize);
    let mut values = Vec::with_capacity(grid.n_theta * grid.n_phi);
    for &theta in &grid.thetas {
        let moduli: Vec<f64> = coherent_moduli_with(&lf, grid.spin(), theta)
            .iter()
            .map(|c| c.re)
            .collect();
        values.extend(source.row(&moduli, &grid.phis));
    }
    let mut clip = 0.0f64;
    for v in values.iter_mut() {
        if *v < 0.0 {
            clip = clip.max(-*v);
            *v = 0.0;
        }
    }
    if clip > 1e-12 {
        return Err(Error::Contract(format!("Husimi function reached −{clip:e}")));
    }
    Ok(HusimiField {
        grid: grid.clone(),
        values,
        clip,
    })
}

/// `Σ weight · value²`, the quadrature estimate of `M₂`.
pub fn m2_quadrature(field: &HusimiField) -> f64 {
    field.weighted_sum(|v| v * v)
}

/// The factors of `F`: `w_i = √C(2j, i)` by array index and
/// `G(s) = (2j+1)(4j−s)! s!/(4j+1)!`.
#[derive(Clone, Debug)]
pub struct FWeightTable {
    spin: SpinQuantum,
    ln_w: Vec<f64>,
    ln_g: Vec<f64>,
}

impl FWeightTable {
    pub fn new(spin: SpinQuantum) -> Self {
        let tj = spin.two_j() as usize;
        let lf = LogFactorialTable::new(2 * tj + 1);
        let f = lf.values();
        let ln_w = (0..=tj).map(|i| 0.5 * (f[tj] - f[i] - f[tj - i])).collect();
        let ln_pre = ((tj + 1) as f64).ln() - f[2 * tj + 1];
        let ln_g = (0..=2 * tj).map(|s| ln_pre + f[2 * tj - s] + f[s]).collect();
        FWeightTable { spin, ln_w, ln_g }
    }

    pub fn spin(&self) -> SpinQuantum {
        self.spin
    }

    /// `F` by array indices (`index = m + j`). Symmetric under
    /// `(i,k) ↔ (l,m)` bit for bit.
    pub fn at(&self, i: usize, k: usize, l: usize, m: usize) -> Result<f64> {
        let n = self.ln_w.len();
        if i >= n || k >= n || l >= n || m >= n {
            return Err(Error::domain(format!("F index ({i}, {k}, {l}, {m}) outside 0..{n}")));
        }
        let first = self.ln_w[i] + self.ln_w[k];
        let second = self.ln_w[l] + self.ln_w[m];
        Ok((self.ln_g[i + l] + (first + second)).exp())
    }

    fn weights(&self) -> Vec<f64> {
        self.ln_w.iter().map(|x| x.exp()).collect()
    }

    fn g(&self) -> Vec<f64> {
        self.ln_g.iter().map(|x| x.exp()).collect()
    }
}

/// `F(2j; i, k, l, m)` for magnetic numbers `i, k, l, m ∈ {−j, …, j}`.
pub fn f_weight(spin: SpinQuantum, i: f64, k: f64, l: f64, m: f64) -> Result<f64> {
    let idx = |x: f64| {
        spin.index_of(x)
            .ok_or_else(|| Error::domain(format!("m = {x} not in spin-{} range", spin.j())))
    };
    FWeightTable::new(spin).at(idx(i)?, idx(k)?, idx(l)?, idx(m)?)
}

/// `M₂` of a pure single-top state, `O(N²)`.
pub fn m2_pure(table: &FWeightTable, amplitudes: &[C64]) -> Result<f64> {
    let n = table.spin.dim();
    if amplitudes.len() != n {
        return Err(Error::Shape(format!(
            "state of length {} for dimension {n}",
            amplitudes.len()
        )));
    }
    let a: Vec<C64> = amplitudes.iter().zip(table.weights()).map(|(&c, w)| c * w).collect();
    let g = table.g();
    let mut total = 0.0;
    for (s, gs) in g.iter().enumerate() {
        let lo = s.saturating_sub(n - 1);
        let hi = s.min(n - 1);
        let inner: C64 = (lo..=hi).map(|i| a[i] * a[s - i]).sum();
        total += gs * inner.norm_sqr();
    }
    Ok(total)
}

/// `M₂` of the Husimi function of an RDM, `O(N³)`.
pub fn m2_rdm(table: &FWeightTable, rdm: &ReducedDensityMatrix) -> Result<f64> {
    let n = table.spin.dim();
    if rdm.spin() != table.spin {
        return Err(Error::Shape(format!(
            "RDM spin 2j = {} but table spin 2j = {}",
            rdm.spin().two_j(),
            table.spin.two_j()
        )));
    }
    let w = table.weights();
    let rho = rdm.entries();
    let a = nalgebra::DMatrix::from_fn(n, n, |r, c| rho[(r, c)] * (w[r] * w[c]));
    let g = table.g();
    let mut total = C64::new(0.0, 0.0);
    let mut scale = 0.0;
    for (s, gs) in g.iter().enumerate() {
        let lo = s.saturating_sub(n - 1);
        let hi = s.min(n - 1);
        let mut inner = C64::new(0.0, 0.0);
        for i in lo..=hi {
            for k in lo..=hi {
                inner += a[(i, k)] * a[(s - i, s - k)];
            }
        }
        total += inner * gs;
        scale += inner.norm() * gs;
    }
    if total.im.abs() > 1e-10 * scale.max(1.0) {
        return Err(Error::Contract(format!("M₂ has imaginary part {:e}", total.im)));
    }
    Ok(total.re)
}

/// `ΔN_eff = 1/(N M₂)`.
pub fn delta_n_eff(m2: f64, dim: usize) -> Result<f64> {
    if !(m2 > 0.0) {
        return Err(Error::domain(format!("M₂ = {m2} must be positive")));
    }
    Ok(1.0 / (dim as f64 * m2))
}

/// `γ = e^{S_V} / (N ΔN_eff)`.
pub fn gamma_factor(s_v: f64, delta_n_eff: f64, dim: usize) -> Result<f64> {
    if !(delta_n_eff > 0.0) {
        return Err(Error::domain(format!("ΔN_eff = {delta_n_eff} must be positive")));
    }
    Ok(s_v.exp() / (dim as f64 * delta_n_eff))
}
