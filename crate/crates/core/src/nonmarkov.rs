// Copyright 2026 The spinmemory Authors
// SPDX-License-Identifier: Apache-2.0

//! Information flux, positive-flux windows and the trace-distance measure.
//!
//! The distance of an evolved pair only depends on the difference of the two
//! inputs, which the return amplitudes propagate on their own. Nothing here
//! needs the chain state.

use std::io::Write;

use rand::Rng;
use rayon::prelude::*;

use crate::dynamics::{propagate_difference, QubitState};
use crate::model::{check_grid, time_grid, ChainSpec, Propagator, UniformParams, DEFAULT_TIME_STEP};
use crate::output::{self, CsvWriter};
use crate::special::bisect;
use crate::{Error, Result};

/// Flux derivatives below this are treated as zero when detecting windows.
const FLUX_FLOOR: f64 = 1e-12;
const ENDPOINT_TOL: f64 = 1e-10;
/// Relative growth per horizon doubling above which a measure counts as
/// still growing.
pub const DIVERGENCE_GROWTH: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InputPair {
    pub first: QubitState,
    pub second: QubitState,
}

impl InputPair {
    pub fn new(first: QubitState, second: QubitState) -> Self {
        Self { first, second }
    }

    /// Antipodal pure states on the equator, `|±⟩`.
    pub fn equatorial() -> Self {
        Self::new(QubitState::plus(), QubitState::minus())
    }

    pub fn difference(&self) -> [f64; 3] {
        let (a, b) = (self.first.bloch(), self.second.bloch());
        [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
    }
}

impl Default for InputPair {
    fn default() -> Self {
        Self::equatorial()
    }
}

/// `(D, ζ')` with `ζ = D²`, for the pair difference `dr` at time `t`.
fn distance_and_rate(prop: &Propagator, dr: [f64; 3], t: f64) -> (f64, f64) {
    let amps = prop.site0(t);
    let r = propagate_difference(&amps, dr);
    let da = amps.d_pi_x * amps.pi_y + amps.pi_x * amps.d_pi_y + amps.d_delta_x * amps.delta_y + amps.delta_x * amps.d_delta_y;
    let dr_t = [
        amps.d_pi_x * dr[0] - amps.d_delta_x * dr[1],
        amps.d_pi_y * dr[1] + amps.d_delta_y * dr[0],
        da * dr[2],
    ];
    let zeta = r[0] * r[0] + r[1] * r[1] + r[2] * r[2];
    let dzeta = 2.0 * (r[0] * dr_t[0] + r[1] * dr_t[1] + r[2] * dr_t[2]);
    (zeta.sqrt(), dzeta)
}

/// Trace distance of the evolved pair at time `t`.
pub fn pair_distance(prop: &Propagator, pair: &InputPair, t: f64) -> f64 {
    distance_and_rate(prop, pair.difference(), t).0
}

#[derive(Debug, Clone)]
pub struct FluxProfile {
    pub times: Vec<f64>,
    pub d_values: Vec<f64>,
    pub sigma: Vec<f64>,
    /// Maximal intervals with `σ > 0`, endpoints refined to `1e−10`.
    pub windows: Vec<(f64, f64)>,
}

impl FluxProfile {
    pub fn write_csv(&self, out: impl Write) -> Result<()> {
        let mut w = CsvWriter::new(out, &["t", "D", "sigma"])?;
        for i in 0..self.times.len() {
            w.row(&[output::real(self.times[i]), output::real(self.d_values[i]), output::real(self.sigma[i])])?;
        }
        w.finish()
    }
}

/// Flux `σ = ∂_t D` of the pair on the grid `times`.
///
/// Where `D` vanishes with a nonzero one-sided slope `σ` is reported as
/// `±∞`; windows are unaffected.
pub fn flux(prop: &Propagator, times: &[f64], pair: &InputPair) -> Result<FluxProfile> {
    check_grid(times)?;
    let dr = pair.difference();
    let samples: Vec<(f64, f64)> = times.par_iter().map(|&t| distance_and_rate(prop, dr, t)).collect();
    let d_values: Vec<f64> = samples.iter().map(|s| s.0).collect();
    let sigma = samples
        .iter()
        .map(|&(d, dz)| {
            if d > 0.0 {
                dz / (2.0 * d)
            } else if dz == 0.0 {
                0.0
            } else {
                dz.signum() * f64::INFINITY
            }
        })
        .collect();
    let rates: Vec<f64> = samples.iter().map(|s| s.1).collect();
    let windows = find_windows(times, &rates, |t| distance_and_rate(prop, dr, t).1);
    Ok(FluxProfile { times: times.to_vec(), d_values, sigma, windows })
}

// Runs of strictly positive rate, each bracketed by bisection on the grid
// cells where the sign changes. Runs whose peak stays below the floor are
// rounding noise around a touching zero and are dropped.
fn find_windows(times: &[f64], rates: &[f64], rate: impl Fn(f64) -> f64) -> Vec<(f64, f64)> {
    let n = times.len();
    let mut windows = Vec::new();
    let mut i = 0;
    while i < n {
        if rates[i] <= 0.0 {
            i += 1;
            continue;
        }
        let start = i;
        let mut peak = rates[i];
        while i + 1 < n && rates[i + 1] > 0.0 {
            i += 1;
            peak = peak.max(rates[i]);
        }
        let end = i;
        i += 1;
        if peak <= FLUX_FLOOR {
            continue;
        }
        let a = if start == 0 { times[0] } else { bisect(&rate, times[start - 1], times[start], ENDPOINT_TOL) };
        let b = if end + 1 == n { times[n - 1] } else { bisect(&rate, times[end], times[end + 1], ENDPOINT_TOL) };
        windows.push((a, b));
    }
    windows
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasureResult {
    pub value: f64,
    pub horizon: f64,
    /// Still growing at the horizon; see [`blp_measure`].
    pub diverging: bool,
    pub pair: InputPair,
    /// Values truncated at `horizon/4` and `horizon/2`.
    pub quarter: f64,
    pub half: f64,
}

/// Sum of distance increments over positive-flux windows up to `horizon`.
///
/// The `diverging` flag compares the truncations at `T/4`, `T/2` and `T`. It
/// is set when both doublings grow the value by more than
/// [`DIVERGENCE_GROWTH`] and the second increment is at least the first.
/// A convergent measure whose tail decays like a power law still grows by a
/// few percent per doubling, but with shrinking increments.
pub fn blp_measure(prop: &Propagator, horizon: f64, dt: f64, pair: &InputPair) -> Result<MeasureResult> {
    let times = time_grid(dt, horizon)?;
    if times.len() < 2 {
        return Err(Error::InvalidGrid(format!("horizon {horizon} holds no full step of {dt}")));
    }
    let profile = flux(prop, &times, pair)?;
    let truncated = |cut: f64| -> f64 {
        profile
            .windows
            .iter()
            .filter(|w| w.0 < cut)
            .map(|&(a, b)| (pair_distance(prop, pair, b.min(cut)) - pair_distance(prop, pair, a)).max(0.0))
            .fold(0.0, |acc, x| acc + x)
    };
    let end = *times.last().expect("nonempty grid");
    let value = truncated(f64::INFINITY);
    let quarter = truncated(end / 4.0);
    let half = truncated(end / 2.0);
    Ok(MeasureResult { value, horizon: end, diverging: is_diverging(quarter, half, value), pair: *pair, quarter, half })
}

pub fn is_diverging(quarter: f64, half: f64, full: f64) -> bool {
    let grows = |a: f64, b: f64| a > 0.0 && b > a * (1.0 + DIVERGENCE_GROWTH);
    grows(quarter, half) && grows(half, full) && full - half >= half - quarter
}

/// Default horizon `2N/3`, before the first recurrence from the chain end.
pub fn default_horizon(n_sites: usize) -> f64 {
    2.0 * n_sites as f64 / 3.0
}

#[derive(Debug, Clone)]
pub struct OptimalPairReport {
    pub reference: f64,
    pub max_sampled: f64,
    pub samples: usize,
    /// Pairs beating the equatorial pair by more than `1e−9`.
    pub violations: Vec<(InputPair, f64)>,
}

impl OptimalPairReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Samples random pure input pairs and compares their measure with the
/// equatorial pair's.
pub fn verify_optimal_pair(
    prop: &Propagator,
    horizon: f64,
    dt: f64,
    n_random_pairs: usize,
    rng: &mut impl Rng,
) -> Result<OptimalPairReport> {
    let reference = blp_measure(prop, horizon, dt, &InputPair::equatorial())?.value;
    let pairs: Vec<InputPair> = (0..n_random_pairs)
        .map(|_| InputPair::new(QubitState::random_pure(rng), QubitState::random_pure(rng)))
        .collect();
    let values: Vec<f64> = pairs
        .par_iter()
        .map(|p| blp_measure(prop, horizon, dt, p).map(|m| m.value))
        .collect::<Result<_>>()?;
    let max_sampled = values.iter().copied().fold(0.0, f64::max);
    let violations = pairs
        .into_iter()
        .zip(values)
        .filter(|(_, v)| *v > reference + 1e-9)
        .collect();
    Ok(OptimalPairReport { reference, max_sampled, samples: n_random_pairs, violations })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub h_over_j: f64,
    pub j0_over_j: f64,
    pub measure: f64,
    pub diverging: bool,
    pub horizon: f64,
}

/// Equatorial-pair measure over a grid of bulk fields and qubit couplings.
/// Rows come back in `j0`-major, then `h`, order whatever the scheduling.
pub fn sweep_measure(
    template: &UniformParams,
    h_values: &[f64],
    j0_values: &[f64],
    horizon: f64,
    dt: f64,
) -> Result<Vec<SweepRow>> {
    let points: Vec<(f64, f64)> = j0_values.iter().flat_map(|&j0| h_values.iter().map(move |&h| (h, j0))).collect();
    points
        .par_iter()
        .map(|&(h, j0)| {
            let spec = ChainSpec::uniform(template.n, template.j, j0 * template.j, h * template.j, template.h0)?;
            let prop = Propagator::from_spec(&spec)?;
            let m = blp_measure(&prop, horizon, dt, &InputPair::equatorial())?;
            Ok(SweepRow { h_over_j: h, j0_over_j: j0, measure: m.value, diverging: m.diverging, horizon: m.horizon })
        })
        .collect()
}

pub fn write_sweep(out: impl Write, rows: &[SweepRow]) -> Result<()> {
    let mut w = CsvWriter::new(out, &["h_over_J", "j0_over_J", "measure", "diverging", "horizon"])?;
    for r in rows {
        w.row(&[
            output::real(r.h_over_j),
            output::real(r.j0_over_j),
            output::real(r.measure),
            output::flag(r.diverging),
            output::real(r.horizon),
        ])?;
    }
    w.finish()
}

/// Measure with the default step and the equatorial pair.
pub fn measure_for(spec: &ChainSpec, horizon: f64) -> Result<MeasureResult> {
    blp_measure(&Propagator::from_spec(spec)?, horizon, DEFAULT_TIME_STEP, &InputPair::equatorial())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_pair_has_no_windows() {
        let prop = Propagator::from_spec(&ChainSpec::uniform(20, 1.0, 1.0, 0.0, 0.0).unwrap()).unwrap();
        let s = QubitState::pure(0.4, 1.0);
        let m = blp_measure(&prop, 10.0, 0.05, &InputPair::new(s, s)).unwrap();
        assert_eq!(m.value, 0.0);
    }

    #[test]
    fn divergence_rule() {
        assert!(is_diverging(1.0, 1.4, 2.0));
        assert!(!is_diverging(1.0, 1.1, 1.15));
        assert!(!is_diverging(1.0, 1.01, 1.5));
        assert!(!is_diverging(0.0, 0.0, 0.0));
    }

    #[test]
    fn two_site_windows_are_half_periods() {
        // f = cos² t: D = |cos t| rises on (π/2, π).
        let prop = Propagator::from_spec(&ChainSpec::uniform(1, 1.0, 1.0, 0.0, 0.0).unwrap()).unwrap();
        let times = time_grid(0.01, 4.0).unwrap();
        let p = flux(&prop, &times, &InputPair::equatorial()).unwrap();
        assert_eq!(p.windows.len(), 1);
        let (a, b) = p.windows[0];
        assert!((a - std::f64::consts::FRAC_PI_2).abs() < 1e-9);
        assert!((b - std::f64::consts::PI).abs() < 1e-9);
    }
}
