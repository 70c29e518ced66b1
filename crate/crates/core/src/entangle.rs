//! Reduced density matrices, Schmidt spectra, entanglement entropies and
//! eigenvector component statistics.

pub mod jacobi;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::evolve::PureState;
use crate::spin::SpinQuantum;
use crate::C64;

const HERMITIAN_TOL: f64 = 1e-10;
const TRACE_TOL: f64 = 1e-10;
const CLIP_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subsystem {
    First,
    Second,
}

#[derive(Clone, Debug)]
pub struct ReducedDensityMatrix {
    spin: SpinQuantum,
    entries: DMatrix<C64>,
}

impl ReducedDensityMatrix {
    /// Checks shape and unit trace. Hermiticity is checked by [`schmidt`].
    pub fn from_matrix(spin: SpinQuantum, entries: DMatrix<C64>) -> Result<Self> {
        let n = spin.dim();
        if entries.shape() != (n, n) {
            return Err(Error::Shape(format!(
                "expected {n}×{n} density matrix, got {:?}",
                entries.shape()
            )));
        }
        let tr = entries.trace();
        if (tr - C64::new(1.0, 0.0)).norm() > TRACE_TOL {
            return Err(Error::Contract(format!("density matrix trace {tr} ≠ 1")));
        }
        Ok(ReducedDensityMatrix { spin, entries })
    }

    pub fn spin(&self) -> SpinQuantum {
        self.spin
    }

    pub fn entries(&self) -> &DMatrix<C64> {
        &self.entries
    }

    pub fn trace(&self) -> f64 {
        self.entries.trace().re
    }

    pub fn hermiticity_error(&self) -> f64 {
        hermiticity_error(&self.entries)
    }

    /// `Tr ρ²`, without diagonalising.
    pub fn purity(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum()
    }

    /// `1 − Tr ρ²`.
    pub fn linear_entropy(&self) -> f64 {
        1.0 - self.purity()
    }
}

fn hermiticity_error(m: &DMatrix<C64>) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for c in 0..n {
        for r in 0..=c {
            worst = worst.max((m[(r, c)] - m[(c, r)].conj()).norm());
        }
    }
    worst
}

fn split(m: &DMatrix<C64>) -> (DMatrix<f64>, DMatrix<f64>) {
    (m.map(|z| z.re), m.map(|z| z.im))
}

/// Partial trace of `|ψ⟩⟨ψ|` over the other top.
pub fn reduce(state: &PureState, subsystem: Subsystem) -> ReducedDensityMatrix {
    let (re, im) = split(state.amplitudes());
    // First: ψψ†. Second: ψᵀψ̄. Both are XX† for X = ψ or ψᵀ.
    let (a, b) = match subsystem {
        Subsystem::First => (re, im),
        Subsystem::Second => (re.transpose(), im.transpose()),
    };
    let real = &a * a.transpose() + &b * b.transpose();
    let imag = &b * a.transpose() - &a * b.transpose();
    let n = real.nrows();
    let entries = DMatrix::from_fn(n, n, |r, c| {
        if r == c {
            C64::new(real[(r, c)], 0.0)
        } else {
            // enforce exact Hermiticity
            let re = 0.5 * (real[(r, c)] + real[(c, r)]);
            let im = 0.5 * (imag[(r, c)] - imag[(c, r)]);
            C64::new(re, im)
        }
    });
    ReducedDensityMatrix {
        spin: state.spin(),
        entries,
    }
}

/// Eigen-decomposition of an RDM. Eigenvalues are descending, with
/// negatives clipped to zero; the largest clip is kept in `clip`.
#[derive(Clone, Debug)]
pub struct SchmidtSpectrum {
    eigenvalues: Vec<f64>,
    eigenvectors: DMatrix<C64>,
    clip: f64,
}

impl SchmidtSpectrum {
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Column `α` is the eigenvector of `eigenvalues()[α]`.
    pub fn eigenvectors(&self) -> &DMatrix<C64> {
        &self.eigenvectors
    }

    pub fn vector(&self, alpha: usize) -> &[C64] {
        let n = self.eigenvectors.nrows();
        &self.eigenvectors.as_slice()[alpha * n..(alpha + 1) * n]
    }

    pub fn clip(&self) -> f64 {
        self.clip
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }
}

fn checked_hermitian(rdm: &ReducedDensityMatrix) -> Result<()> {
    let err = rdm.hermiticity_error();
    if err > HERMITIAN_TOL {
        return Err(Error::Contract(format!(
            "density matrix not Hermitian: deviation {err:e}"
        )));
    }
    Ok(())
}

fn clipped_descending(mut values: Vec<f64>) -> Result<(Vec<f64>, f64)> {
    values.sort_by(|a, b| b.total_cmp(a));
    let mut clip = 0.0f64;
    for v in values.iter_mut() {
        if *v < 0.0 {
            clip = clip.max(-*v);
            *v = 0.0;
        }
    }
    if clip > CLIP_TOL {
        return Err(Error::Contract(format!("density matrix has eigenvalue −{clip:e}")));
    }
    Ok((values, clip))
}

pub fn schmidt(rdm: &ReducedDensityMatrix) -> Result<SchmidtSpectrum> {
    checked_hermitian(rdm)?;
    let eig = rdm.entries.clone().symmetric_eigen();
    let n = eig.eigenvalues.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let eigenvectors = DMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    let (eigenvalues, clip) = clipped_descending(order.iter().map(|&i| eig.eigenvalues[i]).collect())?;
    Ok(SchmidtSpectrum {
        eigenvalues,
        eigenvectors,
        clip,
    })
}

/// Clipped, descending eigenvalues only; cheaper than [`schmidt`].
pub fn schmidt_values(rdm: &ReducedDensityMatrix) -> Result<Vec<f64>> {
    checked_hermitian(rdm)?;
    let values = rdm.entries.symmetric_eigenvalues();
    Ok(clipped_descending(values.iter().copied().collect())?.0)
}

/// `(S_V, S_R)` from a spectrum.
pub fn entropies(spectrum: &SchmidtSpectrum) -> (f64, f64) {
    entropies_of(&spectrum.eigenvalues)
}

/// `S_V = −Σ λ ln λ` (with `0 ln 0 = 0`) and `S_R = 1 − Σ λ²`.
pub fn entropies_of(values: &[f64]) -> (f64, f64) {
    let mut s_v = 0.0;
    let mut sum_sq = 0.0;
    for &l in values {
        if l > 0.0 {
            s_v -= l * l.ln();
        }
        sum_sq += l * l;
    }
    (s_v, 1.0 - sum_sq)
}

/// `|S_V(ρ₁) − S_V(ρ₂)|`.
pub fn subsystem_symmetry_check(state: &PureState) -> Result<f64> {
    let s1 = entropies_of(&schmidt_values(&reduce(state, Subsystem::First))?).0;
    let s2 = entropies_of(&schmidt_values(&reduce(state, Subsystem::Second))?).0;
    Ok((s1 - s2).abs())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ComponentStats {
    pub mean_re: f64,
    pub var_re: f64,
    pub mean_im: f64,
    pub var_im: f64,
    pub ks_exponential: f64,
}

/// Exact one-sample Kolmogorov–Smirnov statistic against `1 − e^{−x}`.
pub fn ks_exponential(samples: &[f64]) -> f64 {
    let mut xs = samples.to_vec();
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    xs.iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = 1.0 - (-x.max(0.0)).exp();
            ((i as f64 + 1.0) / n - f).max(f - i as f64 / n)
        })
        .fold(0.0, f64::max)
}

/// Moments of the real and imaginary parts, and the KS statistic of the
/// rescaled intensities `N|c|²` against the unit exponential.
pub fn component_statistics(vector: &[C64]) -> ComponentStats {
    pooled_component_statistics([vector])
}

/// As [`component_statistics`], pooling the components of several vectors.
/// Each vector is rescaled by its own length.
pub fn pooled_component_statistics<'a, I>(vectors: I) -> ComponentStats
where
    I: IntoIterator<Item = &'a [C64]>,
{
    let mut re = Vec::new();
    let mut im = Vec::new();
    let mut intensities = Vec::new();
    for v in vectors {
        let n = v.len() as f64;
        for c in v {
            re.push(c.re);
            im.push(c.im);
            intensities.push(n * c.norm_sqr());
        }
    }
    let (mean_re, var_re) = moments(&re);
    let (mean_im, var_im) = moments(&im);
    ComponentStats {
        mean_re,
        var_re,
        mean_im,
        var_im,
        ks_exponential: ks_exponential(&intensities),
    }
}

fn moments(xs: &[f64]) -> (f64, f64) {
    if xs.is_empty() {
        return (0.0, 0.0);
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
    (mean, var)
}

/// `1.36/√n`, the asymptotic 5% critical value.
pub fn ks_threshold(n: usize) -> f64 {
    1.36 / (n as f64).sqrt()
}

#[cfg(test)]
mod tests {
    use super::jacobi::jacobi_hermitian;
    use super::*;
    use crate::evolve::{evolve, evolve_single, initial_product_state, CoupledParams, TopParams};
    use crate::spin::coherent_amplitudes;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use rand_distr::StandardNormal;

    fn gaussian_vec(n: usize, rng: &mut impl Rng) -> Vec<C64> {
        let v: Vec<C64> = (0..n)
            .map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        v.into_iter().map(|z| z / norm).collect()
    }

    fn random_state(two_j: u32, rng: &mut impl Rng) -> PureState {
        let spin = SpinQuantum::from_two_j(two_j);
        let n = spin.dim();
        let flat = gaussian_vec(n * n, rng);
        PureState::from_amplitudes(spin, DMatrix::from_fn(n, n, |a, b| flat[a * n + b])).unwrap()
    }

    fn max_abs(m: &DMatrix<C64>) -> f64 {
        m.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Brute force: build |ψ⟩⟨ψ| on the product space and sum out one factor.
    fn brute_partial_trace(state: &PureState, subsystem: Subsystem) -> DMatrix<C64> {
        let n = state.spin().dim();
        let flat = state.to_flat();
        let full = DMatrix::from_fn(n * n, n * n, |r, c| flat[r] * flat[c].conj());
        DMatrix::from_fn(n, n, |a, b| {
            (0..n)
                .map(|t| match subsystem {
                    Subsystem::First => full[(a * n + t, b * n + t)],
                    Subsystem::Second => full[(t * n + a, t * n + b)],
                })
                .sum()
        })
    }

    #[test]
    fn reduce_matches_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for two_j in 1..=4 {
            let psi = random_state(two_j, &mut rng);
            for sub in [Subsystem::First, Subsystem::Second] {
                let rdm = reduce(&psi, sub);
                assert!(max_abs(&(rdm.entries() - brute_partial_trace(&psi, sub))) < 1e-13);
                assert!((rdm.trace() - 1.0).abs() < 1e-13);
                assert_eq!(rdm.hermiticity_error(), 0.0);
            }
        }
    }

    #[test]
    fn product_state_gives_pure_factor() {
        let spin = SpinQuantum::from_two_j(10);
        let psi = initial_product_state(spin, 0.89, 0.63, 2.0, -1.0);
        let rdm = reduce(&psi, Subsystem::First);
        let a = coherent_amplitudes(spin, 0.89, 0.63);
        let n = spin.dim();
        let proj = DMatrix::from_fn(n, n, |r, c| a[r] * a[c].conj());
        assert!(max_abs(&(rdm.entries() - proj)) < 1e-14);
        let spec = schmidt(&rdm).unwrap();
        assert!((spec.eigenvalues()[0] - 1.0).abs() < 1e-12);
        let (s_v, s_r) = entropies(&spec);
        assert!(s_v.abs() < 1e-10 && s_r.abs() < 1e-12);
    }

    #[test]
    fn maximally_mixed_spectrum() {
        let spin = SpinQuantum::from_two_j(6);
        let n = spin.dim();
        let rdm = ReducedDensityMatrix::from_matrix(spin, DMatrix::identity(n, n) / C64::new(n as f64, 0.0)).unwrap();
        let spec = schmidt(&rdm).unwrap();
        assert!(spec.eigenvalues().iter().all(|&l| (l - 1.0 / n as f64).abs() < 1e-14));
        let (s_v, s_r) = entropies(&spec);
        assert!((s_v - (n as f64).ln()).abs() < 1e-13);
        assert!((s_r - (1.0 - 1.0 / n as f64)).abs() < 1e-14);
    }

    #[test]
    fn rank_one_entropies_are_exactly_zero() {
        assert_eq!(entropies_of(&[1.0, 0.0, 0.0]), (0.0, 0.0));
    }

    #[test]
    fn recovers_constructed_spectrum() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let spin = SpinQuantum::from_two_j(2);
        for _ in 0..20 {
            let g = DMatrix::from_fn(3, 3, |_, _| {
                C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
            });
            let q = g.qr().q();
            let mut lam: Vec<f64> = (0..3).map(|_| rng.gen_range(0.0..1.0)).collect();
            let total: f64 = lam.iter().sum();
            lam.iter_mut().for_each(|l| *l /= total);
            let diag = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
                3,
                lam.iter().map(|&l| C64::new(l, 0.0)),
            ));
            let rho = &q * diag * q.adjoint();
            let rdm = ReducedDensityMatrix::from_matrix(spin, rho).unwrap();
            lam.sort_by(|a, b| b.total_cmp(a));
            let got = schmidt(&rdm).unwrap();
            for (a, b) in got.eigenvalues().iter().zip(&lam) {
                assert!((a - b).abs() < 1e-11);
            }
        }
    }

    #[test]
    fn production_solver_agrees_with_jacobi() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for two_j in [1, 4, 9, 20] {
            let rdm = reduce(&random_state(two_j, &mut rng), Subsystem::First);
            let spec = schmidt(&rdm).unwrap();
            let (vals, _) = jacobi_hermitian(rdm.entries());
            for (a, b) in spec.eigenvalues().iter().zip(&vals) {
                assert!((a - b.max(0.0)).abs() < 1e-12);
            }
            let only = schmidt_values(&rdm).unwrap();
            for (a, b) in only.iter().zip(spec.eigenvalues()) {
                assert!((a - b).abs() < 1e-12);
            }
            // eigenpair residuals and reconstruction
            let n = spec.dim();
            for a in 0..n {
                let v = nalgebra::DVector::from_column_slice(spec.vector(a));
                let res = rdm.entries() * &v - &v * C64::new(spec.eigenvalues()[a], 0.0);
                assert!(res.iter().map(|z| z.norm()).sum::<f64>() < 1e-9);
            }
            let lam = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
                n,
                spec.eigenvalues().iter().map(|&l| C64::new(l, 0.0)),
            ));
            let rebuilt = spec.eigenvectors() * lam * spec.eigenvectors().adjoint();
            assert!(max_abs(&(rebuilt - rdm.entries())) < 1e-9);
        }
    }

    #[test]
    fn non_hermitian_is_rejected() {
        let spin = SpinQuantum::from_two_j(1);
        let m = DMatrix::from_row_slice(
            2,
            2,
            &[
                C64::new(0.5, 0.0),
                C64::new(0.1, 0.0),
                C64::new(0.0, 0.0),
                C64::new(0.5, 0.0),
            ],
        );
        let rdm = ReducedDensityMatrix::from_matrix(spin, m).unwrap();
        assert!(matches!(schmidt(&rdm), Err(Error::Contract(_))));
        assert!(matches!(schmidt_values(&rdm), Err(Error::Contract(_))));
        assert!(ReducedDensityMatrix::from_matrix(spin, DMatrix::identity(2, 2)).is_err());
        assert!(ReducedDensityMatrix::from_matrix(spin, DMatrix::identity(3, 3)).is_err());
    }

    #[test]
    fn random_states_have_symmetric_entropies() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        for two_j in [1, 3, 8, 15] {
            assert!(subsystem_symmetry_check(&random_state(two_j, &mut rng)).unwrap() < 1e-9);
        }
        let psi = initial_product_state(SpinQuantum::from_two_j(8), 0.3, 0.2, 1.0, 2.0);
        assert!(subsystem_symmetry_check(&psi).unwrap() < 1e-9);
    }

    #[test]
    fn evolved_state_symmetry_and_bounds() {
        let spin = SpinQuantum::from_two_j(160);
        let params = CoupledParams::symmetric(spin, 6.0, 1e-2);
        let n = spin.dim() as f64;
        let psi0 = initial_product_state(spin, 0.89, 0.63, 0.89, 0.63);
        let psi = evolve(psi0, &params, 500, |step, s| {
            if step % 50 == 0 {
                let rdm = reduce(s, Subsystem::First);
                let spec = schmidt(&rdm)?;
                let (s_v, s_r) = entropies(&spec);
                assert!(spec.clip() < 1e-10);
                assert!((spec.eigenvalues().iter().sum::<f64>() - 1.0).abs() < 1e-10);
                assert!((0.0..=n.ln() + 1e-12).contains(&s_v));
                assert!((-1e-15..=1.0 - 1.0 / n + 1e-12).contains(&s_r));
                assert!(s_r <= s_v + 1e-12);
                assert!((rdm.linear_entropy() - s_r).abs() < 1e-10);
            }
            Ok(())
        })
        .unwrap();
        assert!(subsystem_symmetry_check(&psi).unwrap() < 1e-8);
    }

    #[test]
    fn basis_vector_is_maximally_non_exponential() {
        let mut v = vec![C64::new(0.0, 0.0); 161];
        v[40] = C64::new(1.0, 0.0);
        let stats = component_statistics(&v);
        assert!(stats.ks_exponential > 0.99);
    }

    #[test]
    fn gaussian_vectors_pass_ks() {
        let mut rng = ChaCha8Rng::seed_from_u64(15);
        let n = 161;
        let draws = 200;
        let passed = (0..draws)
            .filter(|_| component_statistics(&gaussian_vec(n, &mut rng)).ks_exponential < ks_threshold(n))
            .count();
        assert!(passed as f64 >= 0.95 * draws as f64, "{passed}/{draws}");
        let stats = component_statistics(&gaussian_vec(n, &mut rng));
        assert!(stats.mean_re.abs() < 0.02 && (stats.var_re - 0.5 / n as f64).abs() < 0.2 / n as f64);
    }

    #[test]
    fn chaotic_single_top_components_are_exponential() {
        let spin = SpinQuantum::from_two_j(160);
        let v0 = coherent_amplitudes(spin, 0.89, 0.63);
        let v = evolve_single(v0.clone(), &TopParams::new(spin, 6.0), 200, |_, _| Ok(())).unwrap();
        let n = spin.dim();
        assert!(component_statistics(&v).ks_exponential < ks_threshold(n));
        assert!(component_statistics(&v0).ks_exponential > 0.5);
    }

    #[test]
    fn ks_statistic_small_cases() {
        // single sample at the median: max(1 − 1/2, 1/2 − 0)
        assert!((ks_exponential(&[std::f64::consts::LN_2]) - 0.5).abs() < 1e-15);
        assert!((ks_exponential(&[0.0]) - 1.0).abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn entropy_bounds_on_simplex(raw in proptest::collection::vec(0.0f64..1.0, 2..30)) {
            let total: f64 = raw.iter().sum();
            prop_assume!(total > 1e-6);
            let lam: Vec<f64> = raw.iter().map(|x| x / total).collect();
            let (s_v, s_r) = entropies_of(&lam);
            let n = lam.len() as f64;
            prop_assert!(s_v >= -1e-15 && s_v <= n.ln() + 1e-12);
            prop_assert!(s_r >= -1e-15 && s_r <= 1.0 - 1.0 / n + 1e-12);
            prop_assert!(s_r <= s_v + 1e-12);
        }

        #[test]
        fn rdm_trace_is_one(seed in any::<u64>(), two_j in 1u32..8) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let psi = random_state(two_j, &mut rng);
            prop_assert!((reduce(&psi, Subsystem::Second).trace() - 1.0).abs() < 1e-13);
        }
    }
}
