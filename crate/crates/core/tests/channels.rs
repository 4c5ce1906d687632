// Copyright 2026 The spinmemory Authors
// SPDX-License-Identifier: Apache-2.0

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use spinmemory::channels::{
    chi_of_snapshot, choi_positivity, divisibility_c, divisibility_grid, fit_gad, gad_channel, gad_chi,
    kraus_from_chi, probe_states, FitOptions, GadChannelParams, IntermediateMap,
};
use spinmemory::dynamics::{QubitMap, QubitState};
use spinmemory::model::{time_grid, ChainSpec};

fn map(n: usize, h: f64) -> QubitMap {
    QubitMap::new(&ChainSpec::uniform(n, 1.0, 1.0, h, 0.0).unwrap()).unwrap()
}

#[test]
fn chi_reproduces_the_map_on_random_states() {
    let m = map(60, 0.5);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for t in [0.3, 2.0, 7.5, 31.0] {
        let snap = m.snapshot_at(t).unwrap();
        let chi = chi_of_snapshot(&snap).unwrap();
        assert!(chi.hermiticity_defect() < 1e-10);
        assert!(chi.trace_preservation_defect() < 1e-8);
        for _ in 0..100 {
            let rho = QubitState::random_mixed(&mut rng);
            let a = chi.apply(&rho).unwrap();
            let b = snap.apply(&rho).unwrap();
            assert!((a.matrix() - b.matrix()).norm() < 1e-8);
        }
    }
}

#[test]
fn probe_outputs_have_the_expected_pattern() {
    let snap = map(60, 0.5).snapshot_at(4.0).unwrap();
    let [zero, one, plus, plus_y] = probe_states().map(|p| snap.apply(&p).unwrap());
    assert_eq!(zero.rho01().norm(), 0.0);
    assert_eq!(one.rho01().norm(), 0.0);
    // Equal populations on |+⟩ and |+y⟩; their coherences differ by a factor −i.
    assert!((plus.rho00() - plus_y.rho00()).abs() < 1e-14);
    assert!((plus_y.rho01() - plus.rho01() * num_complex::Complex64::new(0.0, -1.0)).norm() < 1e-14);
}

#[test]
fn kraus_sets_at_the_markov_point() {
    let m = map(80, 0.5);
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for t in time_grid(2.5, 50.0).unwrap().into_iter().skip(1) {
        let snap = m.snapshot_at(t).unwrap();
        let k = kraus_from_chi(&chi_of_snapshot(&snap).unwrap()).unwrap();
        assert_eq!(k.len(), 4, "t = {t}");
        assert!(k.completeness_defect() < 1e-8);
        for p in probe_states() {
            assert!((k.apply(&p).unwrap().matrix() - snap.apply(&p).unwrap().matrix()).norm() < 1e-8);
        }
        let rho = QubitState::random_pure(&mut rng);
        assert!((k.apply(&rho).unwrap().matrix() - snap.apply(&rho).unwrap().matrix()).norm() < 1e-8);
    }
}

#[test]
fn zero_step_connection_is_the_identity() {
    let snap = map(40, 1.1).snapshot_at(3.3).unwrap();
    let psi = IntermediateMap::new(&snap, &snap).unwrap();
    let ev = choi_positivity(&psi);
    assert!((ev[3] - 1.0).abs() < 1e-12 && ev[..3].iter().all(|e| e.abs() < 1e-12));
    let probe = QubitState::pure(0.4, 2.0);
    let c = divisibility_c(&snap, &snap, &probe).unwrap();
    assert!((c - 4.0 * probe.bloch_length().powi(2)).abs() < 1e-12);
}

#[test]
fn positivity_violations_are_completely_positive_violations() {
    // C > 1 means Ψ is not even positive on |+⟩, so its Choi state must have
    // a negative eigenvalue on the same cell.
    let m = map(60, 1.1);
    let snaps = m.snapshots(&time_grid(0.2, 30.0).unwrap()).unwrap();
    let cells = divisibility_grid(&snaps, 76, &QubitState::plus()).unwrap();
    let violating: Vec<_> = cells.iter().filter(|c| c.c > 1.0 + 1e-8).collect();
    assert!(!violating.is_empty());
    assert!(violating.iter().all(|c| c.min_choi < 0.0));
}

#[test]
fn markovian_reference_channel_fits_itself() {
    for (mu, gamma, big_gamma) in [(0.0, 0.4, 0.1), (1.5, 0.05, 0.8), (0.3, 1.2, 0.0)] {
        let p = GadChannelParams::new(mu, gamma, big_gamma).unwrap();
        let fit = fit_gad(&gad_chi(&p), 1.0, &FitOptions { seed: 4, ..FitOptions::default() }).unwrap();
        assert!(fit.fidelity > 1.0 - 1e-7, "{p:?} -> {fit:?}");
        let probe = QubitState::pure(1.2, 0.5);
        let a = gad_channel(&p, &probe);
        let b = gad_channel(&fit.params, &probe);
        assert!((a.matrix() - b.matrix()).norm() < 1e-3);
    }
}

#[test]
fn fit_is_deterministic_for_a_seed() {
    let snap = map(60, 0.5).snapshot_at(6.0).unwrap();
    let chi = chi_of_snapshot(&snap).unwrap();
    let opts = FitOptions { seed: 17, ..FitOptions::default() };
    assert_eq!(fit_gad(&chi, 6.0, &opts).unwrap(), fit_gad(&chi, 6.0, &opts).unwrap());
}
