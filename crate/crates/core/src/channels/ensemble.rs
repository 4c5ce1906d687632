// Copyright 2026 The spinmemory Authors
// SPDX-License-Identifier: Apache-2.0

//! Ensembles of input states pushed through one map.

use std::io::Write;

use rand::Rng;

use crate::dynamics::{trace_distance, MapSnapshot, QubitMap, QubitState};
use crate::output::{self, CsvWriter};
use crate::Result;

pub fn random_pure_ensemble(count: usize, rng: &mut impl Rng) -> Vec<QubitState> {
    (0..count).map(|_| QubitState::random_pure(rng)).collect()
}

pub fn evolve_ensemble(map: &MapSnapshot, states: &[QubitState]) -> Result<Vec<QubitState>> {
    states.iter().map(|s| map.apply(s)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnsembleSummary {
    pub count: usize,
    pub max_pairwise_distance: f64,
    /// Mean half-length Bloch vector.
    pub centroid: [f64; 3],
}

pub fn summarize(states: &[QubitState]) -> EnsembleSummary {
    let mut max = 0.0f64;
    for (i, a) in states.iter().enumerate() {
        for b in &states[i + 1..] {
            max = max.max(trace_distance(a, b));
        }
    }
    let mut centroid = [0.0; 3];
    for s in states {
        for (c, r) in centroid.iter_mut().zip(s.bloch()) {
            *c += r;
        }
    }
    let n = states.len().max(1) as f64;
    EnsembleSummary { count: states.len(), max_pairwise_distance: max, centroid: centroid.map(|c| c / n) }
}

/// Bloch trajectories of `states` on `times`, written as `t,state_id,rx,ry,rz`.
pub fn write_trajectories(out: impl Write, map: &QubitMap, times: &[f64], states: &[QubitState]) -> Result<()> {
    let snaps = map.snapshots(times)?;
    let mut w = CsvWriter::new(out, &["t", "state_id", "rx", "ry", "rz"])?;
    for snap in &snaps {
        for (id, s) in states.iter().enumerate() {
            let r = snap.apply(s)?.bloch();
            w.row(&[output::real(snap.t), output::int(id), output::real(r[0]), output::real(r[1]), output::real(r[2])])?;
        }
    }
    w.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn identity_keeps_spread() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let states = random_pure_ensemble(200, &mut rng);
        let out = evolve_ensemble(&MapSnapshot::identity(), &states).unwrap();
        let s = summarize(&out);
        assert!(s.max_pairwise_distance > 0.95 && s.max_pairwise_distance <= 1.0 + 1e-12);
        assert!(s.centroid.iter().all(|c| c.abs() < 0.1));
    }
}
