// Copyright 2026 The spinmemory Authors
// SPDX-License-Identifier: Apache-2.0

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use super::{build_adjacency, AdjacencyDecomposition, ChainSpec};
use crate::{Error, Result};

/// Default step for measure integration, in units of `1/J`.
pub const DEFAULT_TIME_STEP: f64 = 0.05;

/// Coefficient vectors `Π^x, Δ^x, Π^y, Δ^y` and their time derivatives at a
/// single instant.
#[derive(Debug, Clone, PartialEq)]
pub struct Coefficients {
    pub t: f64,
    pub pi_x: DVector<f64>,
    pub delta_x: DVector<f64>,
    pub pi_y: DVector<f64>,
    pub delta_y: DVector<f64>,
    pub d_pi_x: DVector<f64>,
    pub d_delta_x: DVector<f64>,
    pub d_pi_y: DVector<f64>,
    pub d_delta_y: DVector<f64>,
}

/// The site-0 components of [`Coefficients`]: everything the trace distance
/// and the coherence factor need.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReturnAmplitudes {
    pub t: f64,
    pub pi_x: f64,
    pub delta_x: f64,
    pub pi_y: f64,
    pub delta_y: f64,
    pub d_pi_x: f64,
    pub d_delta_x: f64,
    pub d_pi_y: f64,
    pub d_delta_y: f64,
}

impl ReturnAmplitudes {
    /// Coherence survival `f = Π₀² + Δ₀²` of the x family.
    pub fn f(&self) -> f64 {
        self.pi_x * self.pi_x + self.delta_x * self.delta_x
    }

    pub fn df(&self) -> f64 {
        2.0 * (self.pi_x * self.d_pi_x + self.delta_x * self.d_delta_x)
    }
}

/// Evaluates the resummed coefficients at arbitrary times.
///
/// Caches the projections `Uᵀv` and `Vᵀv`, i.e. the first rows of `U` and `V`.
#[derive(Debug, Clone)]
pub struct Propagator {
    u: DMatrix<f64>,
    v: DMatrix<f64>,
    lambda: DVector<f64>,
    ut_v: DVector<f64>,
    vt_v: DVector<f64>,
}

impl Propagator {
    pub fn new(decomp: &AdjacencyDecomposition) -> Self {
        let u = decomp.u().clone();
        let v = decomp.v().clone();
        let ut_v = u.row(0).transpose();
        let vt_v = v.row(0).transpose();
        Self { u, v, lambda: decomp.lambda().clone(), ut_v, vt_v }
    }

    pub fn from_spec(spec: &ChainSpec) -> Result<Self> {
        Ok(Self::new(&build_adjacency(spec)?))
    }

    pub fn dim(&self) -> usize {
        self.lambda.len()
    }

    pub fn lambda(&self) -> &DVector<f64> {
        &self.lambda
    }

    /// Full coefficient vectors at time `t`.
    pub fn at(&self, t: f64) -> Coefficients {
        let dim = self.dim();
        let mut cos_u = DVector::zeros(dim);
        let mut sin_u = DVector::zeros(dim);
        let mut cos_v = DVector::zeros(dim);
        let mut sin_v = DVector::zeros(dim);
        let mut lsin_u = DVector::zeros(dim);
        let mut lcos_u = DVector::zeros(dim);
        let mut lsin_v = DVector::zeros(dim);
        let mut lcos_v = DVector::zeros(dim);
        for i in 0..dim {
            let l = self.lambda[i];
            let (s, c) = (l * t).sin_cos();
            cos_u[i] = c * self.ut_v[i];
            sin_u[i] = s * self.ut_v[i];
            cos_v[i] = c * self.vt_v[i];
            sin_v[i] = s * self.vt_v[i];
            lsin_u[i] = -l * s * self.ut_v[i];
            lcos_u[i] = l * c * self.ut_v[i];
            lsin_v[i] = -l * s * self.vt_v[i];
            lcos_v[i] = l * c * self.vt_v[i];
        }
        Coefficients {
            t,
            pi_x: &self.u * cos_u,
            delta_x: &self.v * sin_u,
            pi_y: &self.v * cos_v,
            delta_y: &self.u * sin_v,
            d_pi_x: &self.u * lsin_u,
            d_delta_x: &self.v * lcos_u,
            d_pi_y: &self.v * lsin_v,
            d_delta_y: &self.u * lcos_v,
        }
    }

    /// Site-0 components only, in `O(N)`.
    pub fn site0(&self, t: f64) -> ReturnAmplitudes {
        let mut out = ReturnAmplitudes {
            t,
            pi_x: 0.0,
            delta_x: 0.0,
            pi_y: 0.0,
            delta_y: 0.0,
            d_pi_x: 0.0,
            d_delta_x: 0.0,
            d_pi_y: 0.0,
            d_delta_y: 0.0,
        };
        for i in 0..self.dim() {
            let l = self.lambda[i];
            let (s, c) = (l * t).sin_cos();
            let uu = self.ut_v[i] * self.ut_v[i];
            let vv = self.vt_v[i] * self.vt_v[i];
            let uv = self.ut_v[i] * self.vt_v[i];
            out.pi_x += uu * c;
            out.pi_y += vv * c;
            out.delta_x += uv * s;
            out.delta_y += uv * s;
            out.d_pi_x -= uu * l * s;
            out.d_pi_y -= vv * l * s;
            out.d_delta_x += uv * l * c;
            out.d_delta_y += uv * l * c;
        }
        out
    }
}

/// Coefficient vectors on a time grid.
#[derive(Debug, Clone)]
pub struct CoefficientSet {
    pub times: Vec<f64>,
    pub values: Vec<Coefficients>,
}

impl CoefficientSet {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.values.first().map_or(0, |c| c.pi_x.len())
    }

    pub fn site0(&self, index: usize) -> ReturnAmplitudes {
        let c = &self.values[index];
        ReturnAmplitudes {
            t: c.t,
            pi_x: c.pi_x[0],
            delta_x: c.delta_x[0],
            pi_y: c.pi_y[0],
            delta_y: c.delta_y[0],
            d_pi_x: c.d_pi_x[0],
            d_delta_x: c.d_delta_x[0],
            d_pi_y: c.d_pi_y[0],
            d_delta_y: c.d_delta_y[0],
        }
    }
}

pub fn coefficients(decomp: &AdjacencyDecomposition, times: &[f64]) -> Result<CoefficientSet> {
    check_grid(times)?;
    let prop = Propagator::new(decomp);
    let values = times.par_iter().map(|&t| prop.at(t)).collect();
    Ok(CoefficientSet { times: times.to_vec(), values })
}

/// Uniform grid `0, dt, 2dt, …` up to and including `horizon` (to rounding).
pub fn time_grid(dt: f64, horizon: f64) -> Result<Vec<f64>> {
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::InvalidGrid(format!("time step must be positive, got {dt}")));
    }
    if !(horizon.is_finite() && horizon >= 0.0) {
        return Err(Error::InvalidGrid(format!("horizon must be nonnegative, got {horizon}")));
    }
    let steps = (horizon / dt + 1e-9).floor() as usize;
    Ok((0..=steps).map(|k| k as f64 * dt).collect())
}

pub(crate) fn check_grid(times: &[f64]) -> Result<()> {
    if times.is_empty() {
        return Err(Error::InvalidGrid("empty time grid".into()));
    }
    if times.iter().any(|t| !t.is_finite()) {
        return Err(Error::InvalidGrid("non-finite time".into()));
    }
    if times.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidGrid("times must be strictly increasing".into()));
    }
    Ok(())
}

/// Largest deviation between the power series truncated after `order` terms
/// and the resummed coefficients at time `t`, over all four families.
pub fn coefficient_series_check(decomp: &AdjacencyDecomposition, t: f64, order: usize) -> Result<f64> {
    let tau = decomp.tau();
    let tau_t = tau.transpose();
    let (pi_x, delta_x) = series(tau, &tau_t, t, order)?;
    let (pi_y, delta_y) = series(&tau_t, tau, t, order)?;
    let exact = Propagator::new(decomp).at(t);
    let dev = |a: &DVector<f64>, b: &DVector<f64>| (a - b).amax();
    Ok(dev(&pi_x, &exact.pi_x)
        .max(dev(&delta_x, &exact.delta_x))
        .max(dev(&pi_y, &exact.pi_y))
        .max(dev(&delta_y, &exact.delta_y)))
}

// Π = Σ_p (−1)^p t^{2p}/(2p)! (a b)^p v,  Δ = Σ_p (−1)^p t^{2p+1}/(2p+1)! b (a b)^p v
fn series(a: &DMatrix<f64>, b: &DMatrix<f64>, t: f64, order: usize) -> Result<(DVector<f64>, DVector<f64>)> {
    let dim = a.nrows();
    let ab = a * b;
    let mut power = DVector::zeros(dim);
    power[0] = 1.0;
    let mut pi = DVector::zeros(dim);
    let mut delta = DVector::zeros(dim);
    let mut factorial = 1.0_f64;
    for p in 0..order {
        if p > 0 {
            factorial *= (2 * p - 1) as f64 * (2 * p) as f64;
        }
        let even = t.powi(2 * p as i32) / factorial;
        let odd = t.powi(2 * p as i32 + 1) / (factorial * (2 * p + 1) as f64);
        if !factorial.is_finite() || !even.is_finite() || !odd.is_finite() {
            return Err(Error::SeriesOverflow { t, term: p });
        }
        let sign = if p % 2 == 0 { 1.0 } else { -1.0 };
        pi += &power * (sign * even);
        delta += b * &power * (sign * odd);
        power = &ab * power;
        if power.iter().any(|x| !x.is_finite()) {
            return Err(Error::SeriesOverflow { t, term: p });
        }
    }
    Ok((pi, delta))
}
