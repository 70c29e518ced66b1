mod common;

use common::{brute_partial_trace, dense_floquet, max_abs, random_unit, wigner_direct};
use coupled_tops::entangle::ReducedDensityMatrix;
use coupled_tops::entangle::{reduce, Subsystem};
use coupled_tops::evolve::{coupled_step, CoupledParams, CoupledPropagator, PureState, SinglePropagator, TopParams};
use coupled_tops::husimi::{husimi_field, m2_pure, m2_quadrature, m2_rdm, FWeightTable, PureVector, SphericalGrid};
use coupled_tops::spin::{wigner_d_half_pi, SpinQuantum};
use coupled_tops::C64;
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn state_from_flat(spin: SpinQuantum, flat: &[C64]) -> PureState {
    let n = spin.dim();
    PureState::from_amplitudes(spin, DMatrix::from_fn(n, n, |a, b| flat[a * n + b])).unwrap()
}

#[test]
fn wigner_recursion_matches_direct_sum() {
    for two_j in 0..=40 {
        let d = wigner_d_half_pi(SpinQuantum::from_two_j(two_j));
        let n = two_j as usize + 1;
        for s in 0..n {
            for m in 0..n {
                assert!(
                    (d.at(s, m) - wigner_direct(two_j, s, m)).abs() < 1e-10,
                    "2j={two_j} ({s},{m})"
                );
            }
        }
    }
}

#[test]
fn coupled_step_matches_dense_floquet() {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    for two_j in 1..=6 {
        let spin = SpinQuantum::from_two_j(two_j);
        for &(k1, k2, eps) in &[(6.0, 6.0, 0.01), (1.0, 2.5, 0.3), (3.0, 6.1, 0.0)] {
            let u = dense_floquet(spin, k1, k2, eps);
            let flat = random_unit(spin.dim().pow(2), &mut rng);
            let expect = &u * DVector::from_vec(flat.clone());
            let p1 = SinglePropagator::new(&TopParams::new(spin, k1));
            let p2 = SinglePropagator::new(&TopParams::new(spin, k2));
            let got = coupled_step(&state_from_flat(spin, &flat), &p1, &p2, eps)
                .unwrap()
                .to_flat();
            let err = got
                .iter()
                .zip(expect.iter())
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max);
            assert!(err < 1e-12, "2j={two_j}: {err:e}");
        }
    }
}

#[test]
fn dense_floquet_is_unitary() {
    let spin = SpinQuantum::from_two_j(4);
    let u = dense_floquet(spin, 6.0, 6.1, 0.2);
    assert!(max_abs(&(u.adjoint() * &u - DMatrix::identity(25, 25))) < 1e-13);
}

#[test]
fn partial_trace_matches_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(102);
    for two_j in 1..=4 {
        let spin = SpinQuantum::from_two_j(two_j);
        let n = spin.dim();
        for _ in 0..5 {
            let flat = random_unit(n * n, &mut rng);
            let psi = state_from_flat(spin, &flat);
            for (sub, first) in [(Subsystem::First, true), (Subsystem::Second, false)] {
                let err = max_abs(&(reduce(&psi, sub).entries() - brute_partial_trace(&flat, n, first)));
                assert!(err < 1e-13);
            }
        }
    }
}

#[test]
fn second_moment_matches_quadrature() {
    let mut rng = ChaCha8Rng::seed_from_u64(103);
    for two_j in [1, 2, 7, 10, 20] {
        let spin = SpinQuantum::from_two_j(two_j);
        let n = spin.dim();
        let table = FWeightTable::new(spin);
        let grid = SphericalGrid::new(spin, 400, 800).unwrap();
        let v = random_unit(n, &mut rng);
        let q = m2_quadrature(&husimi_field(&PureVector { spin, amplitudes: &v }, &grid).unwrap());
        assert!((m2_pure(&table, &v).unwrap() - q).abs() < 1e-4);

        let flat = random_unit(n * n, &mut rng);
        let rho = reduce(&state_from_flat(spin, &flat), Subsystem::First);
        let q = m2_quadrature(&husimi_field(&rho, &grid).unwrap());
        assert!((m2_rdm(&table, &rho).unwrap() - q).abs() < 1e-4);
    }
}

#[test]
fn rank_one_rdm_moment_equals_pure_moment() {
    let mut rng = ChaCha8Rng::seed_from_u64(104);
    for two_j in [1, 9, 40, 160] {
        let spin = SpinQuantum::from_two_j(two_j);
        let n = spin.dim();
        let table = FWeightTable::new(spin);
        let v = random_unit(n, &mut rng);
        let rho = ReducedDensityMatrix::from_matrix(spin, DMatrix::from_fn(n, n, |r, c| v[r] * v[c].conj())).unwrap();
        let (a, b) = (m2_rdm(&table, &rho).unwrap(), m2_pure(&table, &v).unwrap());
        assert!((a - b).abs() < 1e-14 * a.max(1.0), "2j={two_j}: {a} vs {b}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn step_is_unitary_and_reversible(seed in any::<u64>(), two_j in 1u32..12, k1 in 0.0f64..8.0, k2 in 0.0f64..8.0, eps in -1.0f64..1.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let spin = SpinQuantum::from_two_j(two_j);
        let params = CoupledParams::new(TopParams::new(spin, k1), TopParams::new(spin, k2), eps).unwrap();
        let prop = CoupledPropagator::new(&params);
        let flat = random_unit(spin.dim().pow(2), &mut rng);
        let mut psi = state_from_flat(spin, &flat);
        prop.step(&mut psi).unwrap();
        prop_assert!((psi.norm() - 1.0).abs() < 1e-13);
        prop.step_adjoint(&mut psi).unwrap();
        let err = psi.to_flat().iter().zip(&flat).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        prop_assert!(err < 1e-12);
    }

    #[test]
    fn both_reductions_share_a_spectrum(seed in any::<u64>(), two_j in 1u32..10) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let spin = SpinQuantum::from_two_j(two_j);
        let psi = state_from_flat(spin, &random_unit(spin.dim().pow(2), &mut rng));
        let a = coupled_tops::entangle::schmidt_values(&reduce(&psi, Subsystem::First)).unwrap();
        let b = coupled_tops::entangle::schmidt_values(&reduce(&psi, Subsystem::Second)).unwrap();
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() < 1e-12);
        }
    }
}
