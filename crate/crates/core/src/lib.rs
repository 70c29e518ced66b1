//! Coupled quantum kicked tops.
//!
//! Two spin-`j` kicked tops with precession angle `π/2`, coupled through
//! `(ε/j) J_{z1} J_{z2}`. The crate provides
//!
//! - [`spin`]: log-space combinatorics, the Wigner matrix `d^{(j)}(π/2)` and
//!   SU(2) coherent-state amplitudes;
//! - [`evolve`]: single-top and coupled Floquet propagation;
//! - [`classical`]: the canonical classical maps, phase portraits and a
//!   finite-difference Poisson-bracket check;
//! - [`entangle`]: partial traces, Hermitian eigendecomposition, von Neumann
//!   and linear entropies, and eigenvector component statistics;
//! - [`husimi`]: Husimi fields on the sphere, the analytic second moment
//!   `M₂`, the occupied fraction `ΔN_eff` and the `γ` factor;
//! - [`rmt`]: random-matrix saturation values, `Si`/`Ci`, and the long-time
//!   linear-entropy formula;
//! - [`expcli`]: experiment configuration, runners and output files used by
//!   the `coupled-tops` binary.
//!
//! ```
//! use coupled_tops::{evolve, entangle, spin::SpinQuantum};
//!
//! let spin = SpinQuantum::from_two_j(20);
//! let params = evolve::CoupledParams::symmetric(spin, 6.0, 0.1);
//! let psi0 = evolve::initial_product_state(spin, 0.89, 0.63, 0.89, 0.63);
//! let psi = evolve::evolve(psi0, &params, 50, |_, _| Ok(())).unwrap();
//! let rdm = entangle::reduce(&psi, entangle::Subsystem::First);
//! let (s_v, _s_r) = entangle::entropies(&entangle::schmidt(&rdm).unwrap());
//! assert!(s_v > 2.0);
//! ```

pub mod classical;
pub mod entangle;
pub mod error;
pub mod evolve;
pub mod expcli;
pub mod husimi;
pub mod rmt;
pub mod spin;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
