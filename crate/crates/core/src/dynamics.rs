// Copyright 2026 The spinmemory Authors
// SPDX-License-Identifier: Apache-2.0

//! Qubit states, the reduced dynamical map and trace distance.
//!
//! Bloch vectors use the half-length convention `r = (⟨sˣ⟩, ⟨sʸ⟩, ⟨sᶻ⟩)`, so
//! `rx = Re ρ₀₁`, `ry = −Im ρ₀₁`, `rz = ρ₀₀ − ½` and pure states have
//! `|r| = ½`.

use std::f64::consts::PI;
use std::io::Write;

use nalgebra::Matrix2;
use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;

use crate::chain_state::{correlators_for, g_at, GroundStateCorrelators};
use crate::model::{ChainSpec, CoefficientSet, Propagator, ReturnAmplitudes};
use crate::output::{self, CsvWriter};
use crate::{Error, Result};

/// Slack allowed on positivity and on the map invariants.
pub const POSITIVITY_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitState {
    rho00: f64,
    rho01: Complex64,
}

impl QubitState {
    pub fn new(rho00: f64, rho01: Complex64) -> Result<Self> {
        if !(rho00.is_finite() && rho01.re.is_finite() && rho01.im.is_finite()) {
            return Err(Error::InvalidState("non-finite entries".into()));
        }
        let s = Self { rho00, rho01 };
        let len = s.bloch_length();
        if len > 0.5 + POSITIVITY_TOL {
            return Err(Error::InvalidState(format!("Bloch length {len} exceeds 1/2")));
        }
        Ok(s)
    }

    /// From the half-length Bloch vector.
    pub fn from_bloch(r: [f64; 3]) -> Result<Self> {
        Self::new(r[2] + 0.5, Complex64::new(r[0], -r[1]))
    }

    /// `cos(θ/2)|0⟩ + e^{iφ} sin(θ/2)|1⟩`.
    pub fn pure(theta: f64, phi: f64) -> Self {
        let (s, c) = (0.5 * theta).sin_cos();
        Self { rho00: c * c, rho01: Complex64::from_polar(c * s, -phi) }
    }

    pub fn zero() -> Self {
        Self { rho00: 1.0, rho01: Complex64::new(0.0, 0.0) }
    }

    pub fn one() -> Self {
        Self { rho00: 0.0, rho01: Complex64::new(0.0, 0.0) }
    }

    pub fn plus() -> Self {
        Self { rho00: 0.5, rho01: Complex64::new(0.5, 0.0) }
    }

    pub fn minus() -> Self {
        Self { rho00: 0.5, rho01: Complex64::new(-0.5, 0.0) }
    }

    /// `(|0⟩ + i|1⟩)/√2`.
    pub fn plus_y() -> Self {
        Self { rho00: 0.5, rho01: Complex64::new(0.0, -0.5) }
    }

    pub fn maximally_mixed() -> Self {
        Self { rho00: 0.5, rho01: Complex64::new(0.0, 0.0) }
    }

    /// Pure state drawn uniformly from the Bloch sphere.
    pub fn random_pure(rng: &mut impl Rng) -> Self {
        let z: f64 = rng.random_range(-1.0..=1.0);
        let phi: f64 = rng.random_range(0.0..2.0 * PI);
        Self::pure(z.acos(), phi)
    }

    /// State drawn uniformly from the Bloch ball.
    pub fn random_mixed(rng: &mut impl Rng) -> Self {
        let pure = Self::random_pure(rng).bloch();
        let radius = rng.random::<f64>().cbrt();
        Self::from_bloch(pure.map(|x| x * radius)).expect("inside the ball")
    }

    pub fn from_matrix(m: &Matrix2<Complex64>) -> Result<Self> {
        let herm = (m[(0, 1)] - m[(1, 0)].conj()).norm() + m[(0, 0)].im.abs() + m[(1, 1)].im.abs();
        let trace = (m[(0, 0)] + m[(1, 1)] - 1.0).norm();
        if herm > POSITIVITY_TOL || trace > POSITIVITY_TOL {
            return Err(Error::InvalidState(format!(
                "not a unit-trace Hermitian matrix (hermiticity {herm:.2e}, trace {trace:.2e})"
            )));
        }
        Self::new(m[(0, 0)].re, m[(0, 1)])
    }

    pub fn rho00(&self) -> f64 {
        self.rho00
    }

    pub fn rho11(&self) -> f64 {
        1.0 - self.rho00
    }

    pub fn rho01(&self) -> Complex64 {
        self.rho01
    }

    pub fn matrix(&self) -> Matrix2<Complex64> {
        Matrix2::new(
            Complex64::new(self.rho00, 0.0),
            self.rho01,
            self.rho01.conj(),
            Complex64::new(self.rho11(), 0.0),
        )
    }

    pub fn bloch(&self) -> [f64; 3] {
        [self.rho01.re, -self.rho01.im, self.rho00 - 0.5]
    }

    pub fn bloch_length(&self) -> f64 {
        let r = self.bloch();
        (r[0] * r[0] + r[1] * r[1] + r[2] * r[2]).sqrt()
    }

    /// Convex combination `α self + (1 − α) other`.
    pub fn mix(&self, other: &Self, alpha: f64) -> Result<Self> {
        Self::new(
            alpha * self.rho00 + (1.0 - alpha) * other.rho00,
            self.rho01 * alpha + other.rho01 * (1.0 - alpha),
        )
    }
}

/// The affine action of the map at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MapSnapshot {
    pub t: f64,
    pub f: f64,
    pub g: f64,
    /// Added to `ρ₀₀`: `(1 − f + g)/2`.
    pub gain_to_00: f64,
    /// Added to `ρ₁₁`: `(1 − f − g)/2`.
    pub gain_to_11: f64,
    /// Coherence factor, `ρ₀₁(t) = a0101 ρ₀₁(0)`, equal to `Π₀ − iΔ₀`.
    pub a0101: Complex64,
}

impl MapSnapshot {
    pub fn new(amps: &ReturnAmplitudes, g: f64) -> Result<Self> {
        let f = amps.f();
        let s = Self {
            t: amps.t,
            f,
            g,
            gain_to_00: 0.5 * (1.0 - f + g),
            gain_to_11: 0.5 * (1.0 - f - g),
            a0101: Complex64::new(amps.pi_x, -amps.delta_x),
        };
        s.check()?;
        Ok(s)
    }

    pub fn identity() -> Self {
        Self { t: 0.0, f: 1.0, g: 0.0, gain_to_00: 0.0, gain_to_11: 0.0, a0101: Complex64::new(1.0, 0.0) }
    }

    fn check(&self) -> Result<()> {
        let unit = |x: f64| (-POSITIVITY_TOL..=1.0 + POSITIVITY_TOL).contains(&x);
        if !unit(self.f) || !unit(self.gain_to_00) || !unit(self.gain_to_11) {
            return Err(Error::InvariantViolation(format!(
                "map at t = {}: f = {}, gains = ({}, {})",
                self.t, self.f, self.gain_to_00, self.gain_to_11
            )));
        }
        Ok(())
    }

    pub fn apply(&self, state: &QubitState) -> Result<QubitState> {
        evolve(state, self)
    }
}

/// Snapshot at index `index` of a precomputed grid.
pub fn snapshot(coeffs: &CoefficientSet, g: &[f64], index: usize) -> Result<MapSnapshot> {
    if g.len() != coeffs.len() {
        return Err(Error::DimensionMismatch { expected: coeffs.len(), found: g.len() });
    }
    if index >= coeffs.len() {
        return Err(Error::InvalidParameter(format!("time index {index} out of range")));
    }
    MapSnapshot::new(&coeffs.site0(index), g[index])
}

pub fn evolve(initial: &QubitState, map: &MapSnapshot) -> Result<QubitState> {
    QubitState::new(map.f * initial.rho00 + map.gain_to_00, map.a0101 * initial.rho01)
        .map_err(|e| Error::InvariantViolation(format!("evolved state at t = {}: {e}", map.t)))
}

/// `½ Tr|ρ₁ − ρ₂| = |r₁ − r₂|`.
pub fn trace_distance(s1: &QubitState, s2: &QubitState) -> f64 {
    let (a, b) = (s1.bloch(), s2.bloch());
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt()
}

/// Trace distance of an evolved pair under an XX map, `√((p² f + |c|²) f)`,
/// with `p = ρ⁽¹⁾₁₁ − ρ⁽²⁾₁₁` and `c = ρ⁽¹⁾₀₁ − ρ⁽²⁾₀₁` at time zero.
pub fn xx_pair_distance(f: f64, p: f64, c_abs: f64) -> f64 {
    ((p * p * f + c_abs * c_abs) * f).max(0.0).sqrt()
}

/// Propagates the Bloch-vector difference `Δr` of two inputs, valid for
/// general XY chains whose state has no transverse magnetization.
pub fn propagate_difference(amps: &ReturnAmplitudes, dr: [f64; 3]) -> [f64; 3] {
    let a = amps.pi_x * amps.pi_y + amps.delta_x * amps.delta_y;
    [
        amps.pi_x * dr[0] - amps.delta_x * dr[1],
        amps.pi_y * dr[1] + amps.delta_y * dr[0],
        a * dr[2],
    ]
}

/// Dynamical map of a qubit coupled to a ground-state XX chain.
#[derive(Debug, Clone)]
pub struct QubitMap {
    propagator: Propagator,
    correlators: GroundStateCorrelators,
}

impl QubitMap {
    /// Requires a homogeneous XX environment; the qubit's coupling and field
    /// are free.
    pub fn new(spec: &ChainSpec) -> Result<Self> {
        let corr = correlators_for(spec)?;
        Self::with_correlators(spec, corr)
    }

    /// Uses the given chain correlators instead of the ground state of `spec`.
    pub fn with_correlators(spec: &ChainSpec, correlators: GroundStateCorrelators) -> Result<Self> {
        if !spec.is_xx() {
            return Err(Error::Unsupported("the map form needs an XX chain".into()));
        }
        if correlators.n_sites != spec.n_sites() {
            return Err(Error::DimensionMismatch { expected: spec.n_sites(), found: correlators.n_sites });
        }
        Ok(Self { propagator: Propagator::from_spec(spec)?, correlators })
    }

    pub fn propagator(&self) -> &Propagator {
        &self.propagator
    }

    pub fn correlators(&self) -> &GroundStateCorrelators {
        &self.correlators
    }

    pub fn g_at(&self, t: f64) -> f64 {
        g_at(&self.propagator.at(t), &self.correlators).expect("dimensions fixed at construction")
    }

    pub fn snapshot_at(&self, t: f64) -> Result<MapSnapshot> {
        let full = self.propagator.at(t);
        let g = g_at(&full, &self.correlators)?;
        let amps = ReturnAmplitudes {
            t,
            pi_x: full.pi_x[0],
            delta_x: full.delta_x[0],
            pi_y: full.pi_y[0],
            delta_y: full.delta_y[0],
            d_pi_x: full.d_pi_x[0],
            d_delta_x: full.d_delta_x[0],
            d_pi_y: full.d_pi_y[0],
            d_delta_y: full.d_delta_y[0],
        };
        MapSnapshot::new(&amps, g)
    }

    pub fn snapshots(&self, times: &[f64]) -> Result<Vec<MapSnapshot>> {
        times.par_iter().map(|&t| self.snapshot_at(t)).collect()
    }
}

pub fn write_trajectory(out: impl Write, times: &[f64], states: &[QubitState]) -> Result<()> {
    if times.len() != states.len() {
        return Err(Error::DimensionMismatch { expected: times.len(), found: states.len() });
    }
    let mut w = CsvWriter::new(out, &["t", "rho00", "re_rho01", "im_rho01", "rx", "ry", "rz"])?;
    for (t, s) in times.iter().zip(states) {
        let r = s.bloch();
        w.row(&[
            output::real(*t),
            output::real(s.rho00()),
            output::real(s.rho01().re),
            output::real(s.rho01().im),
            output::real(r[0]),
            output::real(r[1]),
            output::real(r[2]),
        ])?;
    }
    w.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn named_states() {
        assert_eq!(QubitState::plus().bloch(), [0.5, 0.0, 0.0]);
        assert_eq!(QubitState::plus_y().bloch(), [0.0, 0.5, 0.0]);
        assert_eq!(QubitState::zero().bloch(), [0.0, 0.0, 0.5]);
        let p = QubitState::pure(PI / 2.0, PI / 2.0);
        assert_abs_diff_eq!(p.bloch()[1], 0.5, epsilon = 1e-15);
        assert!(QubitState::new(1.2, Complex64::new(0.0, 0.0)).is_err());
        assert!(QubitState::new(0.5, Complex64::new(0.6, 0.0)).is_err());
    }

    #[test]
    fn distances() {
        assert_eq!(trace_distance(&QubitState::plus(), &QubitState::plus()), 0.0);
        assert_abs_diff_eq!(trace_distance(&QubitState::plus(), &QubitState::minus()), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(trace_distance(&QubitState::zero(), &QubitState::one()), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn identity_snapshot() {
        let id = MapSnapshot::identity();
        let s = QubitState::new(0.3, Complex64::new(0.1, 0.2)).unwrap();
        assert_eq!(evolve(&s, &id).unwrap(), s);
    }

    #[test]
    fn invalid_map_is_rejected() {
        let amps = ReturnAmplitudes {
            t: 1.0,
            pi_x: 0.5,
            delta_x: 0.0,
            pi_y: 0.5,
            delta_y: 0.0,
            d_pi_x: 0.0,
            d_delta_x: 0.0,
            d_pi_y: 0.0,
            d_delta_y: 0.0,
        };
        assert!(MapSnapshot::new(&amps, 0.5).is_ok());
        assert!(MapSnapshot::new(&amps, 0.9).is_err());
    }
}
