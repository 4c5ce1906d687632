// Copyright 2026 The spinmemory Authors
// SPDX-License-Identifier: Apache-2.0

//! Ground-state correlators of the open uniform XX chain and the population
//! function `g(t)`.
//!
//! Jordan-Wigner particles are down spins. With `σᶻ|0⟩ = |0⟩` the chain
//! hamiltonian becomes `Σ_k ε_k c†_k c_k` with `ε_k = −2J cos θ_k + 2h` and
//! `θ_k = kπ/(N+1)`, so a strong positive field empties the band.

use std::f64::consts::PI;
use std::io::Write;

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use crate::model::{ChainSpec, CoefficientSet, Coefficients};
use crate::output::{self, CsvWriter};
use crate::{Error, Result};

const ZERO_MODE: f64 = 1e-12;

/// Number of occupied single-particle modes in the chain's ground state.
///
/// Modes with `|ε_k| < 1e−12` (exact band-edge degeneracies) stay empty.
pub fn fermi_number(n: usize, h_over_j: f64) -> usize {
    (1..=n)
        .filter(|&k| {
            let eps = -2.0 * theta(n, k).cos() + 2.0 * h_over_j;
            eps < 0.0 && eps.abs() >= ZERO_MODE
        })
        .count()
}

fn theta(n: usize, k: usize) -> f64 {
    k as f64 * PI / (n + 1) as f64
}

/// `φ_{j,k} = √(2/(N+1)) sin(j θ_k)`.
pub fn mode_amplitude(n: usize, j: usize, k: usize) -> f64 {
    (2.0 / (n + 1) as f64).sqrt() * (j as f64 * theta(n, k)).sin()
}

#[derive(Debug, Clone)]
pub struct GroundStateCorrelators {
    pub n_sites: usize,
    pub k_fermi: usize,
    /// `⟨σᶻ_n⟩`, index `n − 1`.
    pub sigma_z: Vec<f64>,
    /// One-body matrix `⟨c†_n c_m⟩`, index `(n − 1, m − 1)`. Off the diagonal
    /// it equals half the string correlator `⟨σˣ_n (∏ σᶻ) σˣ_m⟩`.
    pub g_matrix: DMatrix<f64>,
}

impl GroundStateCorrelators {
    /// `g_nm` for chain sites `1 ≤ n, m ≤ N`.
    pub fn g(&self, n: usize, m: usize) -> f64 {
        self.g_matrix[(n - 1, m - 1)]
    }

    pub fn write_sigma_z(&self, out: impl Write) -> Result<()> {
        let mut w = CsvWriter::new(out, &["site", "sigma_z"])?;
        for (i, s) in self.sigma_z.iter().enumerate() {
            w.row(&[output::int(i + 1), output::real(*s)])?;
        }
        w.finish()
    }

    pub fn write_g(&self, out: impl Write) -> Result<()> {
        let mut w = CsvWriter::new(out, &["n", "m", "g_nm"])?;
        for n in 1..=self.n_sites {
            for m in n + 1..=self.n_sites {
                w.row(&[output::int(n), output::int(m), output::real(self.g(n, m))])?;
            }
        }
        w.finish()
    }
}

/// Closed-form correlators for `N` chain spins at field `h/J`.
pub fn correlators(n: usize, h_over_j: f64) -> GroundStateCorrelators {
    let kf = fermi_number(n, h_over_j);
    let scale = 2.0 / (n + 1) as f64;
    let sigma_z = (1..=n)
        .map(|j| {
            let th = theta(n, j);
            let partial = if kf == 0 {
                0.0
            } else {
                kf as f64 - ((kf + 1) as f64 * th).cos() * (kf as f64 * th).sin() / th.sin()
            };
            1.0 - scale * partial
        })
        .collect();

    let mut g = DMatrix::zeros(n, n);
    for a in 1..=n {
        g[(a - 1, a - 1)] = (1..=kf).map(|k| mode_amplitude(n, a, k).powi(2)).sum();
        for b in a + 1..=n {
            let num = mode_amplitude(n, a, kf + 1) * mode_amplitude(n, b, kf)
                - mode_amplitude(n, a, kf) * mode_amplitude(n, b, kf + 1);
            let v = num / (2.0 * (theta(n, a).cos() - theta(n, b).cos()));
            g[(a - 1, b - 1)] = v;
            g[(b - 1, a - 1)] = v;
        }
    }
    GroundStateCorrelators { n_sites: n, k_fermi: kf, sigma_z, g_matrix: g }
}

/// Correlators of the chain described by `spec`, which must have a
/// homogeneous XX environment.
pub fn correlators_for(spec: &ChainSpec) -> Result<GroundStateCorrelators> {
    let (j, h) = spec.bulk()?;
    Ok(correlators(spec.n_sites(), h / j))
}

/// `g = Σ_{n≥1} (Π_n² + Δ_n²)⟨σᶻ_n⟩ − 2 Σ_{n≠m≥1} (Π_nΠ_m + Δ_nΔ_m) g_nm`.
pub fn g_at(c: &Coefficients, corr: &GroundStateCorrelators) -> Result<f64> {
    let n = corr.n_sites;
    if c.pi_x.len() != n + 1 {
        return Err(Error::DimensionMismatch { expected: n + 1, found: c.pi_x.len() });
    }
    let pi = c.pi_x.rows(1, n);
    let delta = c.delta_x.rows(1, n);
    let mut diag = 0.0;
    for k in 0..n {
        diag += (pi[k] * pi[k] + delta[k] * delta[k]) * corr.sigma_z[k];
    }
    let full = pi.dot(&(&corr.g_matrix * pi)) + delta.dot(&(&corr.g_matrix * delta));
    let on_site: f64 = (0..n)
        .map(|k| (pi[k] * pi[k] + delta[k] * delta[k]) * corr.g_matrix[(k, k)])
        .sum();
    Ok(diag - 2.0 * (full - on_site))
}

pub fn g_of_t(coeffs: &CoefficientSet, corr: &GroundStateCorrelators) -> Result<Vec<f64>> {
    if coeffs.dim() != corr.n_sites + 1 {
        return Err(Error::DimensionMismatch { expected: corr.n_sites + 1, found: coeffs.dim() });
    }
    coeffs.values.par_iter().map(|c| g_at(c, corr)).collect()
}

/// Diagonal of the one-body matrix, `⟨c†_n c_n⟩ = (1 − ⟨σᶻ_n⟩)/2`.
pub fn occupations(corr: &GroundStateCorrelators) -> DVector<f64> {
    DVector::from_fn(corr.n_sites, |i, _| corr.g_matrix[(i, i)])
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn filling_limits() {
        assert_eq!(fermi_number(6, 0.0), 3);
        assert_eq!(fermi_number(6, 1.0), 0);
        assert_eq!(fermi_number(6, 3.0), 0);
        assert_eq!(fermi_number(6, -1.0), 6);
        assert_eq!(fermi_number(7, 0.0), 3);
    }

    #[test]
    fn band_edge_mode_is_excluded() {
        // k = 2 of N = 5 sits exactly at cos θ = 1/2.
        let n = 5;
        let h = theta(n, 2).cos();
        assert_eq!(fermi_number(n, h), 1);
    }

    #[test]
    fn empty_sea_is_polarized() {
        let c = correlators(9, 1.5);
        assert_eq!(c.k_fermi, 0);
        assert!(c.sigma_z.iter().all(|&s| s == 1.0));
        assert!(c.g_matrix.iter().all(|&g| g == 0.0));
    }

    #[test]
    fn closed_forms_match_mode_sums() {
        let n = 11;
        for &h in &[-0.7, 0.0, 0.35, 0.9] {
            let c = correlators(n, h);
            for a in 1..=n {
                let occ: f64 = (1..=c.k_fermi).map(|k| mode_amplitude(n, a, k).powi(2)).sum();
                assert_abs_diff_eq!(c.sigma_z[a - 1], 1.0 - 2.0 * occ, epsilon = 1e-12);
                for b in 1..=n {
                    let s: f64 = (1..=c.k_fermi).map(|k| mode_amplitude(n, a, k) * mode_amplitude(n, b, k)).sum();
                    assert_abs_diff_eq!(c.g(a, b), s, epsilon = 1e-12);
                }
            }
        }
    }

    #[test]
    fn csv_dumps() {
        let c = correlators(3, 0.0);
        let mut buf = Vec::new();
        c.write_g(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("n,m,g_nm\n"));
        assert_eq!(text.lines().count(), 4);
    }
}
