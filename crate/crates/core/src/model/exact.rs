// Copyright 2026 The spinmemory Authors
// SPDX-License-Identifier: Apache-2.0

//! Brute-force exact diagonalization of the full qubit-plus-chain system.
//!
//! Only meant as a test oracle. Basis states are bit strings: bit `j` of the
//! index is site `j`, and a set bit means spin down (`σᶻ = −1`).

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use super::ChainSpec;
use crate::dynamics::QubitState;
use crate::{Error, Result};

/// Largest environment the oracle accepts (Hilbert space `2^11`).
pub const MAX_ED_SITES: usize = 10;

const DEGENERACY_GAP: f64 = 1e-9;

/// Initial state of the environment chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChainPreparation {
    GroundState,
    /// Every chain spin in `|0⟩`.
    AllUp,
}

/// `−2 Σ (J^x s^x s^x + J^y s^y s^y) − 2 Σ h s^z` on an open chain of
/// `fields.len()` sites.
pub fn chain_hamiltonian(jx: &[f64], jy: &[f64], fields: &[f64]) -> DMatrix<f64> {
    let sites = fields.len();
    let dim = 1usize << sites;
    let mut h = DMatrix::zeros(dim, dim);
    for idx in 0..dim {
        for (k, &hk) in fields.iter().enumerate() {
            let up = (idx >> k) & 1 == 0;
            h[(idx, idx)] -= if up { hk } else { -hk };
        }
        for k in 0..sites.saturating_sub(1) {
            let a = (idx >> k) & 1;
            let b = (idx >> (k + 1)) & 1;
            let flipped = idx ^ (0b11 << k);
            let yy = if a != b { 1.0 } else { -1.0 };
            h[(flipped, idx)] += -0.5 * (jx[k] + jy[k] * yy);
        }
    }
    h
}

fn sorted_eigen(h: DMatrix<f64>) -> (DVector<f64>, DMatrix<f64>) {
    let eig = SymmetricEigen::new(h);
    let dim = eig.eigenvalues.len();
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = DVector::from_fn(dim, |i, _| eig.eigenvalues[order[i]]);
    let vectors = DMatrix::from_fn(dim, dim, |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

/// Ground state of the environment chain alone (sites `1..=N`).
#[derive(Debug, Clone)]
pub struct ChainGroundState {
    pub energy: f64,
    pub gap: f64,
    pub vector: DVector<f64>,
    n_sites: usize,
}

impl ChainGroundState {
    pub fn new(spec: &ChainSpec) -> Result<Self> {
        let n = spec.n_sites();
        if n > MAX_ED_SITES {
            return Err(Error::TooLarge { n_sites: n, max: MAX_ED_SITES });
        }
        let h = chain_hamiltonian(&spec.jx()[1..], &spec.jy()[1..], &spec.fields()[1..]);
        let (values, vectors) = sorted_eigen(h);
        let gap = if values.len() > 1 { values[1] - values[0] } else { f64::INFINITY };
        if gap < DEGENERACY_GAP {
            return Err(Error::DegenerateGroundState { gap });
        }
        Ok(Self { energy: values[0], gap, vector: vectors.column(0).into_owned(), n_sites: n })
    }

    /// `⟨σᶻ_n⟩` for chain site `n ∈ 1..=N`.
    pub fn sigma_z(&self, n: usize) -> f64 {
        let bit = n - 1;
        self.vector
            .iter()
            .enumerate()
            .map(|(idx, a)| a * a * if (idx >> bit) & 1 == 0 { 1.0 } else { -1.0 })
            .sum()
    }

    /// `⟨σˣ_n (∏_{n<i<m} σᶻ_i) σˣ_m⟩` for chain sites `n < m`.
    pub fn string_xx(&self, n: usize, m: usize) -> f64 {
        assert!(1 <= n && n < m && m <= self.n_sites);
        let (bn, bm) = (n - 1, m - 1);
        let flip = (1usize << bn) | (1usize << bm);
        self.vector
            .iter()
            .enumerate()
            .map(|(idx, a)| {
                let between = ((idx >> (bn + 1)) & ((1usize << (bm - bn - 1)) - 1)).count_ones();
                let sign = if between.is_multiple_of(2) { 1.0 } else { -1.0 };
                a * sign * self.vector[idx ^ flip]
            })
            .sum()
    }
}

/// Exact reduced qubit trajectory for an uncorrelated initial product state.
pub fn ed_oracle_evolve(
    spec: &ChainSpec,
    qubit: &QubitState,
    chain: ChainPreparation,
    times: &[f64],
) -> Result<Vec<QubitState>> {
    let n = spec.n_sites();
    if n > MAX_ED_SITES {
        return Err(Error::TooLarge { n_sites: n, max: MAX_ED_SITES });
    }
    let env = match chain {
        ChainPreparation::GroundState => ChainGroundState::new(spec)?.vector,
        ChainPreparation::AllUp => {
            let mut v = DVector::zeros(1 << n);
            v[0] = 1.0;
            v
        }
    };
    let (energies, w) = sorted_eigen(chain_hamiltonian(spec.jx(), spec.jy(), spec.fields()));
    let dim = 1usize << (n + 1);

    // Eigenbasis amplitudes of |a⟩ ⊗ |χ⟩ for a = 0, 1.
    let amplitudes: Vec<DVector<f64>> = (0..2)
        .map(|a| {
            let mut psi = DVector::zeros(dim);
            for (e, &c) in env.iter().enumerate() {
                psi[a | (e << 1)] = c;
            }
            w.tr_mul(&psi)
        })
        .collect();

    let rho = qubit.matrix();
    times
        .iter()
        .map(|&t| {
            let evolved: Vec<(DVector<f64>, DVector<f64>)> = amplitudes
                .iter()
                .map(|c| {
                    let re = DVector::from_fn(dim, |k, _| c[k] * (energies[k] * t).cos());
                    let im = DVector::from_fn(dim, |k, _| -c[k] * (energies[k] * t).sin());
                    (&w * re, &w * im)
                })
                .collect();
            let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
            for (i, (re_i, im_i)) in evolved.iter().enumerate() {
                for (j, (re_j, im_j)) in evolved.iter().enumerate() {
                    let weight = rho[(i, j)];
                    if weight == Complex64::new(0.0, 0.0) {
                        continue;
                    }
                    for a in 0..2 {
                        for b in 0..2 {
                            let mut acc = Complex64::new(0.0, 0.0);
                            for e in 0..(dim >> 1) {
                                let x = Complex64::new(re_i[a | (e << 1)], im_i[a | (e << 1)]);
                                let y = Complex64::new(re_j[b | (e << 1)], im_j[b | (e << 1)]);
                                acc += x * y.conj();
                            }
                            out[a][b] += weight * acc;
                        }
                    }
                }
            }
            QubitState::new(out[0][0].re, out[0][1])
        })
        .collect()
}
