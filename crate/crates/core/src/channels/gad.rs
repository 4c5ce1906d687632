// Copyright 2026 The spinmemory Authors
// SPDX-License-Identifier: Apache-2.0

//! Generalized amplitude damping plus dephasing, and the process-fidelity fit.

use std::io::Write;

use argmin::core::{CostFunction, Executor, State};
use argmin::solver::neldermead::NelderMead;
use nalgebra::Matrix2;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::tomography::{probe_states, process_tomography, ChiMatrix};
use crate::dynamics::QubitState;
use crate::linalg::{fidelity, hermitian_eigen, CMatrix};
use crate::output::{self, CsvWriter};
use crate::{Error, Result};

/// Upper edge of the search box for each parameter.
pub const PARAM_MAX: f64 = 50.0;

/// Scaled parameters: each rate already multiplied by the time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GadChannelParams {
    pub mu: f64,
    pub gamma: f64,
    pub big_gamma: f64,
}

impl GadChannelParams {
    pub fn new(mu: f64, gamma: f64, big_gamma: f64) -> Result<Self> {
        let p = Self { mu, gamma, big_gamma };
        if [mu, gamma, big_gamma].iter().any(|x| !(x.is_finite() && *x >= 0.0)) {
            return Err(Error::InvalidParameter(format!("GAD parameters must be nonnegative, got {p:?}")));
        }
        Ok(p)
    }

    fn clamped(x: &[f64]) -> Self {
        let c = |v: f64| v.clamp(0.0, PARAM_MAX);
        Self { mu: c(x[0]), gamma: c(x[1]), big_gamma: c(x[2]) }
    }

    /// Population decay factor `e^{−2γ(2μ+1)}`.
    pub fn population_decay(&self) -> f64 {
        (-2.0 * self.gamma * (2.0 * self.mu + 1.0)).exp()
    }

    /// Coherence decay factor `e^{−[2Γ + γ(2μ+1)]}`.
    pub fn coherence_decay(&self) -> f64 {
        (-(2.0 * self.big_gamma + self.gamma * (2.0 * self.mu + 1.0))).exp()
    }

    /// Asymptotic `ρ₀₀`.
    pub fn fixed_rho00(&self) -> f64 {
        if self.mu.is_infinite() {
            return 0.5;
        }
        (self.mu + 1.0) / (2.0 * self.mu + 1.0)
    }
}

pub fn gad_channel(params: &GadChannelParams, initial: &QubitState) -> QubitState {
    let e = params.population_decay();
    let rho00 = initial.rho00() * e + params.fixed_rho00() * (1.0 - e);
    let rho01 = initial.rho01() * params.coherence_decay();
    QubitState::new(rho00, rho01).expect("the channel is completely positive")
}

pub fn gad_chi(params: &GadChannelParams) -> ChiMatrix {
    let outs: [Matrix2<Complex64>; 4] = probe_states().map(|p| gad_channel(params, &p).matrix());
    process_tomography(&outs).expect("outputs are valid states")
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitOptions {
    pub restarts: usize,
    pub seed: u64,
    /// Simplex spread at which a run stops.
    pub tolerance: f64,
    pub max_iters: u64,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self { restarts: 8, seed: 0, tolerance: 1e-8, max_iters: 2000 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GadFit {
    pub t: f64,
    pub params: GadChannelParams,
    pub fidelity: f64,
    /// False when no restart reached the tolerance before `max_iters`.
    pub converged: bool,
}

struct InfidelityCost {
    target: CMatrix,
}

impl CostFunction for InfidelityCost {
    type Param = Vec<f64>;
    type Output = f64;

    fn cost(&self, x: &Self::Param) -> std::result::Result<f64, argmin::core::Error> {
        let chi = gad_chi(&GadChannelParams::clamped(x));
        Ok(1.0 - fidelity(&self.target, &chi.normalized()))
    }
}

/// Clips eigenvalues of `χ / Tr χ` in `(−1e−8, 0)` to zero.
fn clipped_target(chi: &ChiMatrix) -> Result<CMatrix> {
    let (values, vectors) = hermitian_eigen(&chi.normalized());
    if values[0] < -super::tomography::CLIP_TOL {
        return Err(Error::NotCompletelyPositive { eigenvalue: values[0] });
    }
    let d = values.map(|v| Complex64::new(v.max(0.0), 0.0));
    Ok(&vectors * CMatrix::from_diagonal(&d) * vectors.adjoint())
}

/// Maximizes the process fidelity between `chi_t` and the GAD channel over
/// the box `[0, 50]³`.
pub fn fit_gad(chi_t: &ChiMatrix, t: f64, options: &FitOptions) -> Result<GadFit> {
    if options.restarts == 0 {
        return Err(Error::InvalidParameter("at least one restart is needed".into()));
    }
    let target = clipped_target(chi_t)?;
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    let mut best: Option<(Vec<f64>, f64)> = None;
    let mut converged = false;
    for run in 0..options.restarts {
        let start: Vec<f64> = if run == 0 {
            vec![0.5, 0.5, 0.5]
        } else {
            (0..3).map(|_| rng.random::<f64>() * 5.0).collect()
        };
        let mut simplex = vec![start.clone()];
        for i in 0..3 {
            let mut v = start.clone();
            v[i] += 0.5;
            simplex.push(v);
        }
        let solver = NelderMead::new(simplex)
            .with_sd_tolerance(options.tolerance)
            .map_err(|e| Error::InvalidParameter(e.to_string()))?;
        let res = Executor::new(InfidelityCost { target: target.clone() }, solver)
            .configure(|s| s.max_iters(options.max_iters))
            .run()
            .map_err(|e| Error::InvalidParameter(format!("optimizer failed: {e}")))?;
        let state = res.state();
        converged |= state.get_iter() < options.max_iters;
        if let Some(x) = state.get_best_param() {
            let cost = state.get_best_cost();
            if best.as_ref().is_none_or(|(_, c)| cost < *c) {
                best = Some((x.clone(), cost));
            }
        }
    }
    let (x, cost) = best.ok_or_else(|| Error::InvalidParameter("optimizer returned no point".into()))?;
    Ok(GadFit { t, params: GadChannelParams::clamped(&x), fidelity: 1.0 - cost, converged })
}

pub fn write_fits(out: impl Write, fits: &[GadFit]) -> Result<()> {
    let mut w = CsvWriter::new(out, &["t", "fp", "mu", "gamma", "big_gamma", "converged"])?;
    for f in fits {
        w.row(&[
            output::real(f.t),
            output::real(f.fidelity),
            output::real(f.params.mu),
            output::real(f.params.gamma),
            output::real(f.params.big_gamma),
            output::flag(f.converged),
        ])?;
    }
    w.finish()
}
