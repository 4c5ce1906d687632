// Copyright 2026 The spinmemory Authors
// SPDX-License-Identifier: Apache-2.0

//! Single-particle spectrum of the qubit-plus-chain system.
//!
//! The one-body hamiltonian of the down-spin particles is `−τ`: hopping
//! `−J_n` and on-site energies `2h_n`. Seen from the bulk, the qubit site is
//! an impurity with potential `−2δh`, `δh = h − h₀`, and bond `J₀`.

use std::io::Write;

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::chain_state::correlators_for;
use crate::dynamics::QubitState;
use crate::model::{adjacency_matrix, ChainSpec};
use crate::output::{self, CsvWriter};
use crate::{Error, Result};

const PARABOLA_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Classification {
    pub count: u8,
    /// Within `1e−9` of one of the parabolae.
    pub boundary: bool,
}

/// Number of localized levels predicted by the parabolae
/// `δh/J = ±[1 − (J₀/J)²/2]`.
pub fn classify_localization(dh_over_j: f64, j0_over_j: f64) -> Classification {
    let c = 1.0 - 0.5 * j0_over_j * j0_over_j;
    let count = u8::from(dh_over_j > c) + u8::from(dh_over_j < -c);
    let boundary = (dh_over_j - c).abs() < PARABOLA_TOL || (dh_over_j + c).abs() < PARABOLA_TOL;
    Classification { count, boundary }
}

/// Distance, in `δh/J`, from the nearer parabola.
pub fn parabola_distance(dh_over_j: f64, j0_over_j: f64) -> f64 {
    let c = 1.0 - 0.5 * j0_over_j * j0_over_j;
    (dh_over_j - c).abs().min((dh_over_j + c).abs())
}

#[derive(Debug, Clone, PartialEq)]
pub struct LocalizedLevel {
    pub energy: f64,
    /// Inverse participation ratio `Σ ψ_i⁴`.
    pub ipr: f64,
    /// Weight on the qubit and the first chain spin.
    pub weight_01: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LocalizationReport {
    pub analytic_count: u8,
    pub numeric_count: usize,
    pub boundary_flag: bool,
    pub levels: Vec<LocalizedLevel>,
}

/// Band tolerance used by [`numeric_localized_levels`], `1/N²`.
///
/// Extended states of a finite chain stay inside the bulk band, while bound
/// states near the parabolae are split off by only `O(d²)` at a distance `d`
/// from them, so the tolerance has to sit well below `1/N`.
pub fn band_tolerance(n_sites: usize) -> f64 {
    1.0 / (n_sites as f64 * n_sites as f64)
}

/// Single-particle energies, ascending, with eigenvector columns.
pub fn single_particle_spectrum(spec: &ChainSpec) -> (DVector<f64>, DMatrix<f64>) {
    let eig = SymmetricEigen::new(-adjacency_matrix(spec));
    let n = eig.eigenvalues.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = DVector::from_fn(n, |i, _| eig.eigenvalues[order[i]]);
    let vectors = DMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

fn band_edges(spec: &ChainSpec) -> Result<(f64, f64)> {
    let (j, h) = spec.bulk()?;
    Ok((2.0 * h - 2.0 * j, 2.0 * h + 2.0 * j))
}

pub fn numeric_localized_levels(spec: &ChainSpec) -> Result<LocalizationReport> {
    numeric_localized_levels_with(spec, band_tolerance(spec.n_sites()))
}

/// Levels farther than `tol` outside the bulk band.
///
/// Works on the tridiagonal matrix directly: Sturm counts locate the
/// out-of-band eigenvalues and inverse iteration yields their vectors, so a
/// point costs `O(N)` instead of a dense eigensolve.
pub fn numeric_localized_levels_with(spec: &ChainSpec, tol: f64) -> Result<LocalizationReport> {
    if !spec.is_xx() {
        return Err(Error::Unsupported("localization analysis needs an XX chain".into()));
    }
    let (lo, hi) = band_edges(spec)?;
    let (j, h) = spec.bulk()?;
    let tri = Tridiagonal::one_body(spec);
    let dim = tri.diag.len();
    let below = tri.count_below(lo - tol);
    let above = dim - tri.count_below(hi + tol);
    let indices = (0..below).chain(dim - above..dim);
    let levels = indices
        .map(|k| {
            let energy = tri.eigenvalue(k);
            let v = tri.eigenvector(energy);
            LocalizedLevel {
                energy,
                ipr: v.iter().map(|x| x.powi(4)).sum(),
                weight_01: v[0] * v[0] + v.get(1).map_or(0.0, |x| x * x),
            }
        })
        .collect::<Vec<_>>();
    let cls = classify_localization((h - spec.fields()[0]) / j, spec.jx()[0] / j);
    Ok(LocalizationReport {
        analytic_count: cls.count,
        numeric_count: levels.len(),
        boundary_flag: cls.boundary,
        levels,
    })
}

/// Symmetric tridiagonal matrix, diagonal `diag` and off-diagonal `off`.
struct Tridiagonal {
    diag: Vec<f64>,
    off: Vec<f64>,
}

impl Tridiagonal {
    fn one_body(spec: &ChainSpec) -> Self {
        Self {
            diag: spec.fields().iter().map(|h| 2.0 * h).collect(),
            off: spec.jx().iter().map(|j| -j).collect(),
        }
    }

    fn pivot(q: f64) -> f64 {
        if q == 0.0 {
            f64::EPSILON
        } else {
            q
        }
    }

    /// Number of eigenvalues strictly below `x` (Sturm sequence).
    fn count_below(&self, x: f64) -> usize {
        let mut count = 0;
        let mut q = Self::pivot(self.diag[0] - x);
        if q < 0.0 {
            count += 1;
        }
        for i in 1..self.diag.len() {
            q = Self::pivot(self.diag[i] - x - self.off[i - 1].powi(2) / q);
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// The `k`-th eigenvalue (0-based, ascending) by bisection.
    fn eigenvalue(&self, k: usize) -> f64 {
        let radius = self.off.iter().map(|b| 2.0 * b.abs()).fold(0.0, f64::max);
        let mut a = self.diag.iter().copied().fold(f64::INFINITY, f64::min) - radius - 1.0;
        let mut b = self.diag.iter().copied().fold(f64::NEG_INFINITY, f64::max) + radius + 1.0;
        for _ in 0..200 {
            let mid = 0.5 * (a + b);
            if mid <= a || mid >= b {
                break;
            }
            if self.count_below(mid) > k {
                b = mid;
            } else {
                a = mid;
            }
        }
        0.5 * (a + b)
    }

    /// Unit eigenvector for the isolated eigenvalue `e`, by inverse iteration.
    fn eigenvector(&self, e: f64) -> Vec<f64> {
        let n = self.diag.len();
        let shift = e + 1e-10 * (1.0 + e.abs());
        let mut x = vec![1.0 / (n as f64).sqrt(); n];
        for _ in 0..4 {
            // Thomas algorithm for (T − shift) y = x.
            let mut c = vec![0.0; n];
            let mut d = vec![0.0; n];
            let mut piv = Self::pivot(self.diag[0] - shift);
            c[0] = self.off.first().map_or(0.0, |b| b / piv);
            d[0] = x[0] / piv;
            for i in 1..n {
                piv = Self::pivot(self.diag[i] - shift - self.off[i - 1] * c[i - 1]);
                c[i] = if i + 1 < n { self.off[i] / piv } else { 0.0 };
                d[i] = (x[i] - self.off[i - 1] * d[i - 1]) / piv;
            }
            let mut y = vec![0.0; n];
            y[n - 1] = d[n - 1];
            for i in (0..n - 1).rev() {
                y[i] = d[i] - c[i] * y[i + 1];
            }
            let norm = y.iter().map(|v| v * v).sum::<f64>().sqrt();
            x = y.into_iter().map(|v| v / norm).collect();
        }
        x
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExcitationDistribution {
    pub energies: Vec<f64>,
    pub occupations: Vec<f64>,
    pub in_band: Vec<bool>,
}

impl ExcitationDistribution {
    pub fn total(&self) -> f64 {
        self.occupations.iter().sum()
    }

    /// Standard deviation of the occupations of the in-band modes.
    pub fn in_band_std(&self) -> f64 {
        let vals: Vec<f64> = self.band_occupations().collect();
        let n = vals.len() as f64;
        if vals.is_empty() {
            return 0.0;
        }
        let mean = vals.iter().sum::<f64>() / n;
        (vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n).sqrt()
    }

    fn band_occupations(&self) -> impl Iterator<Item = f64> + '_ {
        self.occupations.iter().zip(&self.in_band).filter(|(_, &b)| b).map(|(o, _)| *o)
    }

    /// Largest gap between an out-of-band occupation and the occupation of
    /// the nearest band-edge mode; zero without out-of-band levels.
    pub fn spike(&self) -> f64 {
        let n = self.occupations.len();
        let Some(first) = self.in_band.iter().position(|&b| b) else {
            return 0.0;
        };
        let last = self.in_band.iter().rposition(|&b| b).expect("some mode in band");
        (0..n)
            .filter(|&i| !self.in_band[i])
            .map(|i| {
                let edge = if i < first { first } else { last };
                (self.occupations[i] - self.occupations[edge]).abs()
            })
            .fold(0.0, f64::max)
    }

    pub fn write_csv(&self, out: impl Write) -> Result<()> {
        let mut w = CsvWriter::new(out, &["energy", "occupation"])?;
        for (e, o) in self.energies.iter().zip(&self.occupations) {
            w.row(&[output::real(*e), output::real(*o)])?;
        }
        w.finish()
    }
}

/// Mode occupations `⟨n_q⟩` of the product of `qubit` with the chain ground
/// state, in the eigenbasis of the full one-body hamiltonian.
///
/// The qubit contributes `⟨c†₀c₀⟩ = ρ₁₁`; qubit-chain coherences vanish.
pub fn excitation_distribution(spec: &ChainSpec, qubit: &QubitState) -> Result<ExcitationDistribution> {
    let corr = correlators_for(spec)?;
    let n = spec.n_sites();
    let mut g = DMatrix::zeros(n + 1, n + 1);
    g[(0, 0)] = qubit.rho11();
    g.view_mut((1, 1), (n, n)).copy_from(&corr.g_matrix);

    let (lo, hi) = band_edges(spec)?;
    let tol = band_tolerance(n);
    let (values, vectors) = single_particle_spectrum(spec);
    let occ = (vectors.transpose() * &g * &vectors).diagonal();
    Ok(ExcitationDistribution {
        energies: values.iter().copied().collect(),
        occupations: occ.iter().copied().collect(),
        in_band: values.iter().map(|&e| e >= lo - tol && e <= hi + tol).collect(),
    })
}

pub struct ScanRow {
    pub h: f64,
    pub j0: f64,
    pub analytic: u8,
    pub numeric: usize,
    pub boundary: bool,
}

pub fn write_scan(out: impl Write, rows: &[ScanRow]) -> Result<()> {
    let mut w = CsvWriter::new(out, &["h", "j0", "analytic", "numeric", "boundary"])?;
    for r in rows {
        w.row(&[
            output::real(r.h),
            output::real(r.j0),
            output::int(r.analytic.into()),
            output::int(r.numeric),
            output::flag(r.boundary),
        ])?;
    }
    w.finish()
}
