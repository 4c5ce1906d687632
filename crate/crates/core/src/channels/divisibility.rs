// Copyright 2026 The spinmemory Authors
// SPDX-License-Identifier: Apache-2.0

use std::io::Write;

use num_complex::Complex64;

use crate::dynamics::{MapSnapshot, QubitState};
use crate::linalg::{hermitian_eigen, CMatrix};
use crate::output::{self, CsvWriter};
use crate::{Error, Result};

/// Below this the coherence survival counts as zero and `Ψ` is undefined.
const SINGULAR_F: f64 = 1e-14;

/// The connection `Ψ(t + t₁, t)` with `Φ(t + t₁, 0) = Ψ Φ(t, 0)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntermediateMap {
    pub t: f64,
    pub t1: f64,
    /// `f(t + t₁)/f(t)`.
    pub ratio_f: f64,
    /// `A⁰¹₀₁(t + t₁)/A⁰¹₀₁(t)`.
    pub ratio_coh: Complex64,
    /// `A⁰⁰₁₁(t + t₁) − ratio_f · A⁰⁰₁₁(t)`, added to `ρ₀₀`.
    pub gain_to_00: f64,
    /// `A¹¹₀₀(t + t₁) − ratio_f · A¹¹₀₀(t)`, added to `ρ₁₁`.
    pub gain_to_11: f64,
}

impl IntermediateMap {
    pub fn new(at_t: &MapSnapshot, at_t_t1: &MapSnapshot) -> Result<Self> {
        if at_t.f < SINGULAR_F {
            return Err(Error::SingularMap { t: at_t.t, denominator: "f(t)" });
        }
        if at_t.a0101.norm() < SINGULAR_F.sqrt() {
            return Err(Error::SingularMap { t: at_t.t, denominator: "A01(t)" });
        }
        let r = at_t_t1.f / at_t.f;
        Ok(Self {
            t: at_t.t,
            t1: at_t_t1.t - at_t.t,
            ratio_f: r,
            ratio_coh: at_t_t1.a0101 / at_t.a0101,
            gain_to_00: at_t_t1.gain_to_00 - r * at_t.gain_to_00,
            gain_to_11: at_t_t1.gain_to_11 - r * at_t.gain_to_11,
        })
    }

    /// Applies `Ψ` to a state. The result need not be positive; that is the
    /// point of the test.
    pub fn apply(&self, rho00: f64, rho01: Complex64) -> (f64, Complex64) {
        (self.ratio_f * rho00 + self.gain_to_00, self.ratio_coh * rho01)
    }

    /// Normalized Choi state `(Ψ ⊗ 1)|Φ⁺⟩⟨Φ⁺|` in the basis
    /// `|00⟩, |01⟩, |10⟩, |11⟩`, output qubit first.
    pub fn choi_matrix(&self) -> CMatrix {
        let c = |x: f64| Complex64::new(0.5 * x, 0.0);
        let mut m = CMatrix::zeros(4, 4);
        m[(0, 0)] = c(self.ratio_f + self.gain_to_00);
        m[(1, 1)] = c(self.gain_to_00);
        m[(2, 2)] = c(self.gain_to_11);
        m[(3, 3)] = c(self.ratio_f + self.gain_to_11);
        m[(0, 3)] = self.ratio_coh * 0.5;
        m[(3, 0)] = self.ratio_coh.conj() * 0.5;
        m
    }
}

/// `C = 4|ρ₀₁|² + (ρ₀₀ − ρ₁₁)²` of `Ψ(t + t₁, t)` applied to `probe`.
///
/// `Ψ` is positive on the probe iff `C ≤ 1`.
pub fn divisibility_c(at_t: &MapSnapshot, at_t_t1: &MapSnapshot, probe: &QubitState) -> Result<f64> {
    let psi = IntermediateMap::new(at_t, at_t_t1)?;
    let (p00, p01) = psi.apply(probe.rho00(), probe.rho01());
    Ok(4.0 * p01.norm_sqr() + (2.0 * p00 - 1.0).powi(2))
}

/// Eigenvalues of the normalized Choi state, ascending. All nonnegative iff
/// `Ψ` is completely positive.
pub fn choi_positivity(map: &IntermediateMap) -> Vec<f64> {
    hermitian_eigen(&map.choi_matrix()).0.iter().copied().collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DivisibilityCell {
    pub t: f64,
    pub t1: f64,
    pub c: f64,
    pub min_choi: f64,
}

/// `C` and the smallest Choi eigenvalue on the grid `t = i·dt`, `t₁ = k·dt`
/// for `0 ≤ i, k < steps`, from snapshots on the grid `0, dt, …`.
///
/// `snapshots[i]` must hold the map at `i·dt` for `i < 2·steps − 1`.
pub fn divisibility_grid(snapshots: &[MapSnapshot], steps: usize, probe: &QubitState) -> Result<Vec<DivisibilityCell>> {
    if snapshots.len() + 1 < 2 * steps {
        return Err(Error::DimensionMismatch { expected: 2 * steps - 1, found: snapshots.len() });
    }
    let mut cells = Vec::with_capacity(steps * steps);
    for i in 0..steps {
        for k in 0..steps {
            let (a, b) = (&snapshots[i], &snapshots[i + k]);
            let psi = IntermediateMap::new(a, b)?;
            let c = divisibility_c(a, b, probe)?;
            let min_choi = choi_positivity(&psi)[0];
            cells.push(DivisibilityCell { t: a.t, t1: b.t - a.t, c, min_choi });
        }
    }
    Ok(cells)
}

pub fn write_grid(out: impl Write, cells: &[DivisibilityCell]) -> Result<()> {
    let mut w = CsvWriter::new(out, &["t", "t1", "C", "min_choi"])?;
    for c in cells {
        w.row(&[output::real(c.t), output::real(c.t1), output::real(c.c), output::real(c.min_choi)])?;
    }
    w.finish()
}
