// Copyright 2026 The spinmemory Authors
// SPDX-License-Identifier: Apache-2.0

use spinmemory::chain_state::fermi_number;
use spinmemory::dynamics::QubitState;
use spinmemory::model::ChainSpec;
use spinmemory::spectral::{classify_localization, excitation_distribution, numeric_localized_levels};

#[test]
fn parabola_examples() {
    assert!(classify_localization(0.5, 1.0).boundary);
    assert_eq!(classify_localization(0.0, 1.0).count, 0);
    assert_eq!(classify_localization(0.0, 1.5).count, 2);
    assert_eq!(classify_localization(1.2, 1.0).count, 1);
}

#[test]
fn strong_coupling_binds_two_levels_at_the_qubit() {
    let report = numeric_localized_levels(&ChainSpec::uniform(400, 1.0, 1.5, 0.0, 0.0).unwrap()).unwrap();
    assert_eq!(report.numeric_count, 2);
    for level in &report.levels {
        assert!(level.weight_01 > 0.25, "{level:?}");
    }
}

#[test]
fn bound_state_shrinks_with_field() {
    let mut last = 0.0;
    for h in [0.8, 1.0, 1.3, 1.7, 2.2] {
        let report = numeric_localized_levels(&ChainSpec::uniform(400, 1.0, 1.0, h, 0.0).unwrap()).unwrap();
        assert_eq!(report.numeric_count, 1, "h = {h}");
        let ipr = report.levels[0].ipr;
        assert!(ipr > last, "h = {h}: {ipr} <= {last}");
        last = ipr;
    }
}

#[test]
fn occupations_obey_the_sum_rule() {
    for (h, q) in [(0.5, QubitState::plus()), (0.3, QubitState::zero()), (0.6, QubitState::one()), (-0.2, QubitState::plus())] {
        let spec = ChainSpec::uniform(49, 1.0, 1.0, h, 0.0).unwrap();
        let d = excitation_distribution(&spec, &q).unwrap();
        assert!(d.occupations.iter().all(|o| (-1e-12..=1.0 + 1e-12).contains(o)));
        let expected = q.rho11() + fermi_number(49, h) as f64;
        assert!((d.total() - expected).abs() < 1e-10, "h = {h}");
    }
}

#[test]
fn spike_only_beyond_the_markov_point() {
    let dist = |h: f64| excitation_distribution(&ChainSpec::uniform(49, 1.0, 1.0, h, 0.0).unwrap(), &QubitState::plus()).unwrap();
    assert_eq!(dist(0.4).spike(), 0.0);
    assert!(dist(0.6).spike() > 0.1);
}
