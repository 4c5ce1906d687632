// Copyright 2026 The spinmemory Authors
// SPDX-License-Identifier: Apache-2.0

use spinmemory::model::UniformParams;
use spinmemory::nonmarkov::{sweep_measure, write_sweep, SweepRow};

fn sweep(j0: f64, hs: &[f64]) -> Vec<SweepRow> {
    sweep_measure(&UniformParams::new(100, 1.0, 1.0, 0.0, 0.0), hs, &[j0], 60.0, 0.05).unwrap()
}

#[test]
fn resonant_coupling_profile() {
    let hs = [0.0, 0.25, 0.5, 0.75, 1.1, 2.0, 3.0];
    let m: Vec<f64> = sweep(1.0, &hs).iter().map(|r| r.measure).collect();
    assert!(m[0] > m[1], "largest at h = 0");
    assert!(m[2] < 1e-6, "vanishes at h = J/2");
    assert!(m[4] > m[3] && m[4] > m[5], "bump near h = J");
    assert!(m[6] < m[5], "decays at large h");
}

#[test]
fn strong_coupling_never_vanishes() {
    let hs: Vec<f64> = (0..13).map(|i| 0.25 * i as f64).collect();
    assert!(sweep(1.2, &hs).iter().all(|r| r.measure > 0.05));
}

#[test]
fn sweep_rows_are_ordered_and_csv_is_stable() {
    let rows = sweep_measure(&UniformParams::new(40, 1.0, 1.0, 0.0, 0.0), &[0.0, 0.5], &[0.8, 1.2], 20.0, 0.05).unwrap();
    let order: Vec<(f64, f64)> = rows.iter().map(|r| (r.j0_over_j, r.h_over_j)).collect();
    assert_eq!(order, vec![(0.8, 0.0), (0.8, 0.5), (1.2, 0.0), (1.2, 0.5)]);
    let mut a = Vec::new();
    let mut b = Vec::new();
    write_sweep(&mut a, &rows).unwrap();
    write_sweep(&mut b, &rows).unwrap();
    assert_eq!(a, b);
    let text = String::from_utf8(a).unwrap();
    assert_eq!(text.lines().next().unwrap(), "h_over_J,j0_over_J,measure,diverging,horizon");
    assert_eq!(text.lines().count(), 5);
}
