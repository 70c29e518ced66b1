//! Spin-`j` bookkeeping: log-space factorials, the Wigner matrix at `π/2`
//! and SU(2) coherent-state amplitudes.
//!
//! Basis vectors `|j, m⟩` are stored at array index `m + j`, so index 0 is
//! `m = -j` and index `2j` is `m = +j`.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::C64;

/// A spin quantum number stored as `2j` so half-integer spins are exact.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SpinQuantum {
    two_j: u32,
}

impl SpinQuantum {
    pub fn from_two_j(two_j: u32) -> Self {
        SpinQuantum { two_j }
    }

    /// Builds a spin from a real `j`; fails unless `2j` is a nonnegative
    /// integer.
    pub fn from_j(j: f64) -> Result<Self> {
        let two_j = 2.0 * j;
        if !(two_j >= 0.0) || two_j.fract() != 0.0 || two_j > u32::MAX as f64 {
            return Err(Error::domain(format!("spin j = {j} is not a nonnegative half-integer")));
        }
        Ok(SpinQuantum { two_j: two_j as u32 })
    }

    pub fn two_j(&self) -> u32 {
        self.two_j
    }

    pub fn j(&self) -> f64 {
        self.two_j as f64 / 2.0
    }

    /// Hilbert-space dimension `N = 2j + 1`.
    pub fn dim(&self) -> usize {
        self.two_j as usize + 1
    }

    /// Magnetic quantum number at array index `idx`.
    #[inline]
    pub fn m(&self, idx: usize) -> f64 {
        idx as f64 - self.j()
    }

    /// Array index of magnetic quantum number `m`, if `m` belongs to this
    /// spin.
    pub fn index_of(&self, m: f64) -> Option<usize> {
        let idx = m + self.j();
        if idx < 0.0 || idx.fract() != 0.0 || idx > self.two_j as f64 {
            None
        } else {
            Some(idx as usize)
        }
    }

    /// All magnetic quantum numbers in index order.
    pub fn magnetic_numbers(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.dim()).map(move |i| self.m(i))
    }
}

/// `ln(n!)` for `n = 0..=n_max`.
#[derive(Clone, Debug)]
pub struct LogFactorialTable {
    values: Vec<f64>,
}

impl LogFactorialTable {
    pub fn new(n_max: usize) -> Self {
        let mut values = Vec::with_capacity(n_max + 1);
        values.push(0.0);
        // compensated running sum; n = 321 needs ~1e-13 absolute accuracy
        let (mut sum, mut comp) = (0.0f64, 0.0f64);
        for n in 1..=n_max {
            let y = (n as f64).ln() - comp;
            let t = sum + y;
            comp = (t - sum) - y;
            sum = t;
            values.push(sum);
        }
        LogFactorialTable { values }
    }

    /// Table large enough for every factorial a spin-`j` computation uses,
    /// i.e. up to `(4j + 1)!`.
    pub fn for_spin(spin: SpinQuantum) -> Self {
        Self::new(2 * spin.two_j() as usize + 1)
    }

    pub fn n_max(&self) -> usize {
        self.values.len() - 1
    }

    /// `ln(n!)`.
    pub fn ln_factorial(&self, n: usize) -> Result<f64> {
        self.values
            .get(n)
            .copied()
            .ok_or_else(|| Error::domain(format!("ln({n}!) outside table of size {}", self.n_max())))
    }

    /// `ln C(n, k)`. The two subtracted terms are always added smaller index
    /// first, so `ln C(n, k)` and `ln C(n, n-k)` are bitwise equal.
    pub fn log_binomial(&self, n: usize, k: usize) -> Result<f64> {
        if k > n {
            return Err(Error::domain(format!("binomial C({n}, {k}) with k > n")));
        }
        let ln_n = self.ln_factorial(n)?;
        let (a, b) = if k <= n - k { (k, n - k) } else { (n - k, k) };
        Ok(ln_n - (self.values[a] + self.values[b]))
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// `ln C(n, k)` from a table built on the spot.
pub fn log_binomial(n: usize, k: usize) -> Result<f64> {
    LogFactorialTable::new(n).log_binomial(n, k)
}

/// The real orthogonal matrix `d^{(j)}_{s m}(π/2)`, row index `s + j`,
/// column index `m + j`.
#[derive(Clone, Debug)]
pub struct WignerHalfPiMatrix {
    spin: SpinQuantum,
    entries: DMatrix<f64>,
}

impl WignerHalfPiMatrix {
    pub fn spin(&self) -> SpinQuantum {
        self.spin
    }

    /// `d_{s m}` addressed by array indices.
    #[inline]
    pub fn at(&self, s_idx: usize, m_idx: usize) -> f64 {
        self.entries[(s_idx, m_idx)]
    }

    /// `d_{s m}` addressed by magnetic quantum numbers.
    pub fn get(&self, s: f64, m: f64) -> Option<f64> {
        Some(self.entries[(self.spin.index_of(s)?, self.spin.index_of(m)?)])
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.entries
    }

    /// Largest entry of `|d dᵀ − I|`.
    pub fn orthogonality_error(&self) -> f64 {
        let n = self.spin.dim();
        let prod = &self.entries * self.entries.transpose();
        (prod - DMatrix::<f64>::identity(n, n)).amax()
    }
}

/// Builds `d^{(j)}(π/2)` from the closed form
///
/// ```text
/// d_{s m} = (-1)^{s-m} 2^{-j} sqrt(C(2j, j-s) / C(2j, j+m)) V_m,
/// V_m = Σ_k (-1)^k C(j-s, k) C(j+s, k+s-m),
/// ```
///
/// where `V_m` obeys `(j-m+1) V_{m-1} - 2s V_m + (j+m+1) V_{m+1} = 0`.
///
/// Running that recursion upward from `V_{-j} = 1, V_{-j+1} = 2s` alone loses
/// all accuracy once `m` leaves the classically allowed band (around
/// `j ≈ 50`), so the upper half is produced by the same recursion run
/// downward from `V_j = (-1)^{j-s}, V_{j-1} = (-1)^{j-s} 2s`. Each pass only
/// moves toward `m = 0`.
pub fn wigner_d_half_pi(spin: SpinQuantum) -> WignerHalfPiMatrix {
    let tj = spin.two_j() as usize;
    let n = spin.dim();
    let lf = LogFactorialTable::new(tj);
    let ln2 = std::f64::consts::LN_2;
    let half = tj / 2;

    let mut entries = DMatrix::<f64>::zeros(n, n);
    let mut v = vec![0.0f64; n];
    for s_idx in 0..n {
        let s = spin.m(s_idx);
        v[0] = 1.0;
        if n > 1 {
            v[1] = 2.0 * s;
        }
        for i in 1..half.min(n.saturating_sub(1)) {
            v[i + 1] = (2.0 * s * v[i] - (tj - i + 1) as f64 * v[i - 1]) / (i + 1) as f64;
        }
        // upper half from the top down; seeds only where they lie above `half`
        let sign = if (tj - s_idx) % 2 == 0 { 1.0 } else { -1.0 };
        if tj > half {
            v[tj] = sign;
        }
        if tj >= 1 && tj - 1 > half {
            v[tj - 1] = sign * 2.0 * s;
        }
        for i in (half + 2..tj).rev() {
            v[i - 1] = (2.0 * s * v[i] - (i + 1) as f64 * v[i + 1]) / (tj - i + 1) as f64;
        }

        let ln_c_s = lf.values[tj] - (lf.values[s_idx] + lf.values[tj - s_idx]);
        for m_idx in 0..n {
            let ln_c_m = lf.values[tj] - (lf.values[m_idx] + lf.values[tj - m_idx]);
            let ln_pref = -spin.j() * ln2 + 0.5 * (ln_c_s - ln_c_m);
            let sign = if (s_idx + m_idx) % 2 == 0 { 1.0 } else { -1.0 };
            entries[(s_idx, m_idx)] = sign * ln_pref.exp() * v[m_idx];
        }
    }
    WignerHalfPiMatrix { spin, entries }
}

/// Amplitudes `⟨j, m | θ₀, φ₀⟩` of the directed angular-momentum state
///
/// ```text
/// (1 + |γ|²)^{-j} γ^{j-m} sqrt(C(2j, j+m)),   γ = e^{iφ₀} tan(θ₀/2),
/// ```
///
/// evaluated as `cos^{j+m}(θ₀/2) sin^{j-m}(θ₀/2) e^{i(j-m)φ₀} sqrt(C)` in log
/// space. `0⁰ = 1`, so the poles `θ₀ = 0` and `θ₀ = π` give the basis states
/// `m = +j` and `m = -j` (the latter carrying the limiting phase
/// `e^{2ijφ₀}`).
pub fn coherent_amplitudes(spin: SpinQuantum, theta0: f64, phi0: f64) -> Vec<C64> {
    let lf = LogFactorialTable::new(spin.two_j() as usize);
    coherent_amplitudes_with(&lf, spin, theta0, phi0)
}

pub(crate) fn coherent_amplitudes_with(lf: &LogFactorialTable, spin: SpinQuantum, theta0: f64, phi0: f64) -> Vec<C64> {
    let mut out = coherent_moduli_with(lf, spin, theta0);
    let tj = spin.two_j() as usize;
    for (idx, c) in out.iter_mut().enumerate() {
        *c *= C64::from_polar(1.0, (tj - idx) as f64 * phi0);
    }
    out
}

/// Moduli `|⟨j, m | θ, φ⟩|` (which do not depend on `φ`), as complex
/// numbers with zero imaginary part.
pub(crate) fn coherent_moduli_with(lf: &LogFactorialTable, spin: SpinQuantum, theta: f64) -> Vec<C64> {
    let tj = spin.two_j() as usize;
    let (sin_h, cos_h) = (0.5 * theta).sin_cos();
    let (ln_s, ln_c) = (sin_h.abs().ln(), cos_h.abs().ln());
    let ln_2j = lf.values[tj];
    let mut out: Vec<C64> = (0..=tj)
        .map(|idx| {
            let up = idx; // j + m
            let down = tj - idx; // j - m
            if (up > 0 && cos_h == 0.0) || (down > 0 && sin_h == 0.0) {
                return C64::new(0.0, 0.0);
            }
            let mut ln_mag = 0.5 * (ln_2j - (lf.values[up] + lf.values[down]));
            if up > 0 {
                ln_mag += up as f64 * ln_c;
            }
            if down > 0 {
                ln_mag += down as f64 * ln_s;
            }
            // cos(θ/2) < 0 only outside [0, π]
            let sign = if cos_h < 0.0 && up % 2 == 1 { -1.0 } else { 1.0 };
            C64::new(sign * ln_mag.exp(), 0.0)
        })
        .collect();
    // the exact norm is 1; this strips the log/exp roundoff
    let norm = out.iter().map(|c| c.re * c.re).sum::<f64>().sqrt();
    for c in &mut out {
        c.re /= norm;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn binom_u128(n: u64, k: u64) -> u128 {
        if k > n {
            return 0;
        }
        let k = k.min(n - k);
        let mut acc: u128 = 1;
        for i in 0..k {
            acc = acc * (n - i) as u128 / (i + 1) as u128;
        }
        acc
    }

    /// `d_{s m}(π/2)` from the finite sum with the integer part evaluated
    /// exactly in i128.
    fn wigner_direct(two_j: u32, s_idx: usize, m_idx: usize) -> f64 {
        let tj = two_j as i64;
        // j - s = tj - s_idx, j + s = s_idx, s - m = s_idx - m_idx
        let (jms, jps, s_minus_m) = (tj - s_idx as i64, s_idx as i64, s_idx as i64 - m_idx as i64);
        let mut sum: i128 = 0;
        for k in 0..=jms {
            let lower = k + s_minus_m;
            if lower < 0 || lower > jps {
                continue;
            }
            let term = binom_u128(jms as u64, k as u64) as i128 * binom_u128(jps as u64, lower as u64) as i128;
            sum += if k % 2 == 0 { term } else { -term };
        }
        let num = binom_u128(tj as u64, jms as u64) as f64;
        let den = binom_u128(tj as u64, m_idx as u64) as f64;
        let sign = if s_minus_m.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
        sign * 2f64.powf(-(two_j as f64) / 2.0) * (num / den).sqrt() * sum as f64
    }

    #[test]
    fn log_binomial_small_values() {
        assert!((log_binomial(4, 2).unwrap() - 6f64.ln()).abs() < 1e-14);
        for n in [0, 1, 7, 160] {
            assert_eq!(log_binomial(n, 0).unwrap(), 0.0);
        }
        assert!(matches!(log_binomial(3, 4), Err(Error::Domain(_))));
    }

    #[test]
    fn log_binomial_central_160() {
        let direct: f64 =
            (81..=160).map(|i| (i as f64).ln()).sum::<f64>() - (1..=80).map(|i| (i as f64).ln()).sum::<f64>();
        let got = log_binomial(160, 80).unwrap();
        assert!((got - direct).abs() < 1e-11, "{got} vs {direct}");
        assert!((got - 108.14).abs() < 0.01);
    }

    #[test]
    fn log_factorial_table_invariants() {
        let t = LogFactorialTable::new(400);
        assert_eq!(t.values()[0], 0.0);
        for n in 2..=400 {
            assert!(t.values()[n] > t.values()[n - 1]);
            assert!((t.values()[n] - t.values()[n - 1] - (n as f64).ln()).abs() < 1e-12);
        }
        assert!(t.ln_factorial(401).is_err());
    }

    #[test]
    fn spin_index_map() {
        let s = SpinQuantum::from_j(1.5).unwrap();
        assert_eq!(s.dim(), 4);
        assert_eq!(s.m(0), -1.5);
        assert_eq!(s.index_of(1.5), Some(3));
        assert_eq!(s.index_of(0.0), None);
        assert!(SpinQuantum::from_j(0.3).is_err());
        assert!(SpinQuantum::from_j(-1.0).is_err());
    }

    #[test]
    fn wigner_spin_half_matches_exponential() {
        // exp(-iπ/2 · σ_y/2) = cos(π/4) I - i sin(π/4) σ_y, basis (+1/2, -1/2)
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let d = wigner_d_half_pi(SpinQuantum::from_two_j(1));
        let expect = [[(0.5, 0.5, r), (0.5, -0.5, -r)], [(-0.5, 0.5, r), (-0.5, -0.5, r)]];
        for row in expect {
            for (s, m, v) in row {
                assert!((d.get(s, m).unwrap() - v).abs() < 1e-15, "d({s},{m})");
            }
        }
    }

    #[test]
    fn wigner_orthogonal_up_to_j100() {
        for two_j in 0..=200 {
            let d = wigner_d_half_pi(SpinQuantum::from_two_j(two_j));
            let err = d.orthogonality_error();
            assert!(err < 1e-11, "2j = {two_j}: {err:e}");
            for c in 0..d.spin().dim() {
                let norm: f64 = d.matrix().column(c).norm();
                assert!((norm - 1.0).abs() < 1e-11);
            }
        }
    }

    #[test]
    fn wigner_recursion_matches_direct_sum() {
        for two_j in 0..=40u32 {
            let d = wigner_d_half_pi(SpinQuantum::from_two_j(two_j));
            let n = two_j as usize + 1;
            for s in 0..n {
                for m in 0..n {
                    let direct = wigner_direct(two_j, s, m);
                    assert!(
                        (d.at(s, m) - direct).abs() < 1e-10,
                        "2j={two_j} ({s},{m}): {} vs {direct}",
                        d.at(s, m)
                    );
                }
            }
        }
    }

    #[test]
    fn coherent_state_poles_and_equator() {
        for two_j in [1, 4, 7, 160] {
            let spin = SpinQuantum::from_two_j(two_j);
            let north = coherent_amplitudes(spin, 0.0, 1.234);
            let south = coherent_amplitudes(spin, std::f64::consts::PI, 0.3);
            for idx in 0..spin.dim() {
                let top = if idx == spin.dim() - 1 { 1.0 } else { 0.0 };
                let bottom = if idx == 0 { 1.0 } else { 0.0 };
                assert!((north[idx] - C64::new(top, 0.0)).norm() < 1e-15);
                assert!((south[idx].norm() - bottom).abs() < 1e-15);
            }
        }
        let c = coherent_amplitudes(SpinQuantum::from_two_j(1), std::f64::consts::FRAC_PI_2, 0.0);
        for a in c {
            assert!((a - C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn coherent_state_matches_gamma_form() {
        // direct evaluation with γ = e^{iφ} tan(θ/2) at moderate j
        let spin = SpinQuantum::from_two_j(9);
        let (theta, phi) = (1.1f64, -2.3f64);
        let gamma = C64::from_polar((theta / 2.0).tan(), phi);
        let c = coherent_amplitudes(spin, theta, phi);
        let j = spin.j();
        for idx in 0..spin.dim() {
            let m = spin.m(idx);
            let binom = binom_u128(9, idx as u64) as f64;
            let expect = (1.0 + gamma.norm_sqr()).powf(-j) * gamma.powf(j - m) * binom.sqrt();
            assert!((c[idx] - expect).norm() < 1e-13);
        }
    }

    proptest! {
        #[test]
        fn coherent_state_unit_norm(two_j in 0u32..=200, theta in 0.0..=std::f64::consts::PI, phi in -std::f64::consts::PI..std::f64::consts::PI) {
            let c = coherent_amplitudes(SpinQuantum::from_two_j(two_j), theta, phi);
            let norm: f64 = c.iter().map(|a| a.norm_sqr()).sum();
            prop_assert!((norm - 1.0).abs() < 1e-14);
        }

        #[test]
        fn log_binomial_symmetric(n in 0usize..500, k in 0usize..500) {
            prop_assume!(k <= n);
            let t = LogFactorialTable::new(n);
            prop_assert_eq!(t.log_binomial(n, k).unwrap().to_bits(), t.log_binomial(n, n - k).unwrap().to_bits());
        }
    }
}
