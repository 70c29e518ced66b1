//! Floquet propagation of single and coupled kicked tops.
//!
//! One period of a single top is `U = U^k U^f` with
//! `U^f = exp(-i(π/2)J_y)` followed by the kick `U^k = exp(-i k J_z²/(2j))`,
//! so `⟨s|U|m⟩ = exp(-i k s²/(2j)) d_{s m}(π/2)`. The coupled period is
//! `U_T = exp(-i(ε/j) J_{z1} J_{z2}) (U_1 ⊗ U_2)`.
//!
//! Coupled states are `N × N` amplitude matrices indexed `(m₁, m₂)`; a step
//! applies the rotation along each axis (two `N × N` products) and then one
//! combined diagonal phase, never forming the `N² × N²` operator.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::spin::{coherent_amplitudes, wigner_d_half_pi, SpinQuantum, WignerHalfPiMatrix};
use crate::C64;

/// Precession angle of every top.
pub const PRECESSION: f64 = std::f64::consts::FRAC_PI_2;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TopParams {
    pub spin: SpinQuantum,
    /// Dimensionless kick strength.
    pub k: f64,
}

impl TopParams {
    pub fn new(spin: SpinQuantum, k: f64) -> Self {
        TopParams { spin, k }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CoupledParams {
    pub top1: TopParams,
    pub top2: TopParams,
    pub epsilon: f64,
}

impl CoupledParams {
    pub fn new(top1: TopParams, top2: TopParams, epsilon: f64) -> Result<Self> {
        if top1.spin != top2.spin {
            return Err(Error::Shape(format!(
                "tops must share j (got 2j = {} and {})",
                top1.spin.two_j(),
                top2.spin.two_j()
            )));
        }
        Ok(CoupledParams { top1, top2, epsilon })
    }

    /// Identical tops with kick `k`.
    pub fn symmetric(spin: SpinQuantum, k: f64, epsilon: f64) -> Self {
        CoupledParams {
            top1: TopParams::new(spin, k),
            top2: TopParams::new(spin, k),
            epsilon,
        }
    }

    pub fn spin(&self) -> SpinQuantum {
        self.top1.spin
    }
}

/// `⟨s|U|m⟩ = kick_phases[s] · d_{s m}(π/2)`.
#[derive(Clone, Debug)]
pub struct SinglePropagator {
    spin: SpinQuantum,
    kick_phases: Vec<C64>,
    rotation: WignerHalfPiMatrix,
}

impl SinglePropagator {
    pub fn new(params: &TopParams) -> Self {
        Self::with_rotation(params, wigner_d_half_pi(params.spin))
    }

    /// Reuses an already built rotation matrix.
    pub fn with_rotation(params: &TopParams, rotation: WignerHalfPiMatrix) -> Self {
        assert_eq!(rotation.spin(), params.spin, "rotation built for another spin");
        let spin = params.spin;
        let scale = params.k / (2.0 * spin.j().max(0.5));
        let kick_phases = spin
            .magnetic_numbers()
            .map(|s| C64::from_polar(1.0, -scale * s * s))
            .collect();
        SinglePropagator {
            spin,
            kick_phases,
            rotation,
        }
    }

    pub fn spin(&self) -> SpinQuantum {
        self.spin
    }

    pub fn kick_phases(&self) -> &[C64] {
        &self.kick_phases
    }

    pub fn rotation(&self) -> &WignerHalfPiMatrix {
        &self.rotation
    }

    /// `v'[s] = e^{-iks²/2j} Σ_m d_{sm} v[m]`.
    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        let n = self.spin.dim();
        assert_eq!(v.len(), n, "vector length does not match spin");
        let d = self.rotation.matrix();
        (0..n)
            .map(|s| {
                let acc = (0..n).fold(C64::new(0.0, 0.0), |acc, m| acc + v[m] * d[(s, m)]);
                self.kick_phases[s] * acc
            })
            .collect()
    }

    /// `U† v`.
    pub fn apply_adjoint(&self, v: &[C64]) -> Vec<C64> {
        let n = self.spin.dim();
        assert_eq!(v.len(), n, "vector length does not match spin");
        let d = self.rotation.matrix();
        let kicked: Vec<C64> = v.iter().zip(&self.kick_phases).map(|(a, p)| a * p.conj()).collect();
        (0..n)
            .map(|m| (0..n).fold(C64::new(0.0, 0.0), |acc, s| acc + kicked[s] * d[(s, m)]))
            .collect()
    }

    /// Dense `N × N` matrix of the propagator.
    pub fn matrix(&self) -> DMatrix<C64> {
        let n = self.spin.dim();
        let d = self.rotation.matrix();
        DMatrix::from_fn(n, n, |s, m| self.kick_phases[s] * d[(s, m)])
    }
}

/// Joint pure state `ψ(m₁, m₂)` of two tops.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    spin: SpinQuantum,
    amplitudes: DMatrix<C64>,
}

impl PureState {
    /// Wraps an amplitude matrix; it must be `N × N` with unit Frobenius
    /// norm.
    pub fn from_amplitudes(spin: SpinQuantum, amplitudes: DMatrix<C64>) -> Result<Self> {
        let n = spin.dim();
        if amplitudes.shape() != (n, n) {
            return Err(Error::Shape(format!(
                "expected {n}×{n} amplitudes, got {:?}",
                amplitudes.shape()
            )));
        }
        let norm = amplitudes.norm();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::Contract(format!("state norm {norm} differs from 1")));
        }
        Ok(PureState { spin, amplitudes })
    }

    /// Normalizes an arbitrary nonzero amplitude matrix.
    pub fn normalized(spin: SpinQuantum, mut amplitudes: DMatrix<C64>) -> Result<Self> {
        let norm = amplitudes.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::domain("cannot normalize a zero or non-finite state"));
        }
        amplitudes /= C64::new(norm, 0.0);
        Self::from_amplitudes(spin, amplitudes)
    }

    pub fn spin(&self) -> SpinQuantum {
        self.spin
    }

    pub fn amplitudes(&self) -> &DMatrix<C64> {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    /// Amplitudes in row-major `(m₁, m₂)` order, matching
    /// `|m₁⟩ ⊗ |m₂⟩` with `m₂` the fast index.
    pub fn to_flat(&self) -> Vec<C64> {
        let n = self.spin.dim();
        (0..n * n).map(|i| self.amplitudes[(i / n, i % n)]).collect()
    }
}

/// `ψ(m₁, m₂) = ⟨m₁|θ₁, φ₁⟩⟨m₂|θ₂, φ₂⟩`.
pub fn initial_product_state(spin: SpinQuantum, theta1: f64, phi1: f64, theta2: f64, phi2: f64) -> PureState {
    let c1 = coherent_amplitudes(spin, theta1, phi1);
    let c2 = coherent_amplitudes(spin, theta2, phi2);
    let n = spin.dim();
    PureState {
        spin,
        amplitudes: DMatrix::from_fn(n, n, |a, b| c1[a] * c2[b]),
    }
}

/// Coupling phases `exp(-i (ε/j) s₁ s₂)`.
fn coupling_phases(spin: SpinQuantum, epsilon: f64) -> DMatrix<C64> {
    let n = spin.dim();
    let scale = epsilon / spin.j().max(0.5);
    DMatrix::from_fn(n, n, |a, b| C64::from_polar(1.0, -scale * spin.m(a) * spin.m(b)))
}

/// The full coupled Floquet operator, ready for repeated application.
#[derive(Clone, Debug)]
pub struct CoupledPropagator {
    spin: SpinQuantum,
    d1: DMatrix<f64>,
    d2t: DMatrix<f64>,
    /// `kick₁[s₁] kick₂[s₂] exp(-i ε s₁ s₂ / j)`
    phases: DMatrix<C64>,
}

impl CoupledPropagator {
    pub fn new(params: &CoupledParams) -> Self {
        let spin = params.spin();
        let rotation = wigner_d_half_pi(spin);
        let p1 = SinglePropagator::with_rotation(&params.top1, rotation.clone());
        let p2 = SinglePropagator::with_rotation(&params.top2, rotation);
        Self::from_parts(&p1, &p2, params.epsilon).expect("spins checked by CoupledParams")
    }

    pub fn from_parts(prop1: &SinglePropagator, prop2: &SinglePropagator, epsilon: f64) -> Result<Self> {
        if prop1.spin() != prop2.spin() {
            return Err(Error::Shape("propagators built for different spins".into()));
        }
        let spin = prop1.spin();
        let mut phases = coupling_phases(spin, epsilon);
        for ((a, b), p) in indexed(&mut phases) {
            *p *= prop1.kick_phases[a] * prop2.kick_phases[b];
        }
        Ok(CoupledPropagator {
            spin,
            d1: prop1.rotation().matrix().clone(),
            d2t: prop2.rotation().matrix().transpose(),
            phases,
        })
    }

    pub fn spin(&self) -> SpinQuantum {
        self.spin
    }

    /// Advances `state` by one period in place.
    pub fn step(&self, state: &mut PureState) -> Result<()> {
        self.check(state)?;
        let (re, im) = split(&state.amplitudes);
        // rotate axis 1 (left) then axis 2 (right); d is real
        let re = &self.d1 * re * &self.d2t;
        let im = &self.d1 * im * &self.d2t;
        for ((a, b), out) in indexed(&mut state.amplitudes) {
            *out = self.phases[(a, b)] * C64::new(re[(a, b)], im[(a, b)]);
        }
        Ok(())
    }

    /// Undoes one period: `ψ ← (U₁ ⊗ U₂)† U_ε† ψ`.
    pub fn step_adjoint(&self, state: &mut PureState) -> Result<()> {
        self.check(state)?;
        let n = self.spin.dim();
        let unphased = DMatrix::from_fn(n, n, |a, b| self.phases[(a, b)].conj() * state.amplitudes[(a, b)]);
        let (re, im) = split(&unphased);
        let re = self.d1.transpose() * re * self.d2t.transpose();
        let im = self.d1.transpose() * im * self.d2t.transpose();
        state.amplitudes = DMatrix::from_fn(n, n, |a, b| C64::new(re[(a, b)], im[(a, b)]));
        Ok(())
    }

    fn check(&self, state: &PureState) -> Result<()> {
        if state.spin != self.spin {
            return Err(Error::Shape(format!(
                "state has 2j = {}, propagator 2j = {}",
                state.spin.two_j(),
                self.spin.two_j()
            )));
        }
        Ok(())
    }
}

fn split(m: &DMatrix<C64>) -> (DMatrix<f64>, DMatrix<f64>) {
    (m.map(|z| z.re), m.map(|z| z.im))
}

fn indexed(m: &mut DMatrix<C64>) -> impl Iterator<Item = ((usize, usize), &mut C64)> {
    let rows = m.nrows();
    // column-major storage
    m.iter_mut().enumerate().map(move |(i, z)| ((i % rows, i / rows), z))
}

/// One coupled period,
/// `ψ'(s₁,s₂) = e^{-iεs₁s₂/j} Σ ⟨s₁|U₁|m₁⟩⟨s₂|U₂|m₂⟩ ψ(m₁,m₂)`.
pub fn coupled_step(
    state: &PureState,
    prop1: &SinglePropagator,
    prop2: &SinglePropagator,
    epsilon: f64,
) -> Result<PureState> {
    let prop = CoupledPropagator::from_parts(prop1, prop2, epsilon)?;
    let mut next = state.clone();
    prop.step(&mut next)?;
    Ok(next)
}

/// Evolves `state0` for `n_steps` periods. `observer` sees every state
/// `ψ(1) … ψ(n_steps)` together with its step index; an observer error
/// aborts the run.
pub fn evolve<F>(state0: PureState, params: &CoupledParams, n_steps: usize, mut observer: F) -> Result<PureState>
where
    F: FnMut(usize, &PureState) -> Result<()>,
{
    if n_steps == 0 {
        return Err(Error::domain("n_steps must be at least 1"));
    }
    let prop = CoupledPropagator::new(params);
    let mut state = state0;
    for n in 1..=n_steps {
        prop.step(&mut state)?;
        observer(n, &state)?;
    }
    Ok(state)
}

/// Single-top analogue of [`evolve`] on a length-`N` vector.
pub fn evolve_single<F>(v0: Vec<C64>, params: &TopParams, n_steps: usize, mut observer: F) -> Result<Vec<C64>>
where
    F: FnMut(usize, &[C64]) -> Result<()>,
{
    if n_steps == 0 {
        return Err(Error::domain("n_steps must be at least 1"));
    }
    if v0.len() != params.spin.dim() {
        return Err(Error::Shape(format!(
            "vector of length {} for N = {}",
            v0.len(),
            params.spin.dim()
        )));
    }
    let prop = SinglePropagator::new(params);
    let mut v = v0;
    for n in 1..=n_steps {
        v = prop.apply(&v);
        observer(n, &v)?;
    }
    Ok(v)
}
