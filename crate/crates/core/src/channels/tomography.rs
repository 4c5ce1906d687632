// Copyright 2026 The spinmemory Authors
// SPDX-License-Identifier: Apache-2.0

//! Single-qubit process tomography in the Pauli operator basis.

use std::sync::OnceLock;

use nalgebra::{Matrix2, Matrix4, SMatrix, SVector};
use num_complex::Complex64;

use crate::dynamics::{MapSnapshot, QubitState};
use crate::linalg::{hermitian_eigen, CMatrix};
use crate::{Error, Result};

/// Eigenvalues of `χ` above this are clipped to zero.
pub const CLIP_TOL: f64 = 1e-8;

type M2 = Matrix2<Complex64>;
type M16 = SMatrix<Complex64, 16, 16>;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// `I, X, Y, Z`.
pub fn pauli_basis() -> [M2; 4] {
    let o = c(0.0, 0.0);
    let l = c(1.0, 0.0);
    let i = c(0.0, 1.0);
    [
        M2::new(l, o, o, l),
        M2::new(o, l, l, o),
        M2::new(o, -i, i, o),
        M2::new(l, o, o, -l),
    ]
}

/// `|0⟩⟨0|, |0⟩⟨1|, |1⟩⟨0|, |1⟩⟨1|`.
fn unit_matrix(k: usize) -> M2 {
    let mut m = M2::zeros();
    m[(k / 2, k % 2)] = c(1.0, 0.0);
    m
}

fn beta_inverse() -> &'static M16 {
    static CELL: OnceLock<M16> = OnceLock::new();
    CELL.get_or_init(|| {
        let e = pauli_basis();
        let mut beta = M16::zeros();
        for j in 0..4 {
            let rho = unit_matrix(j);
            for m in 0..4 {
                for n in 0..4 {
                    let out = e[m] * rho * e[n].adjoint();
                    for k in 0..4 {
                        beta[(4 * j + k, 4 * m + n)] = out[(k / 2, k % 2)];
                    }
                }
            }
        }
        beta.try_inverse().expect("Pauli products span the operator space")
    })
}

/// Process matrix, `Φ(ρ) = Σ χ_mn E_m ρ E_n†` over the Pauli basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChiMatrix(pub Matrix4<Complex64>);

impl ChiMatrix {
    pub fn identity_channel() -> Self {
        let mut m = Matrix4::zeros();
        m[(0, 0)] = c(1.0, 0.0);
        Self(m)
    }

    pub fn entry(&self, m: usize, n: usize) -> Complex64 {
        self.0[(m, n)]
    }

    pub fn trace(&self) -> f64 {
        self.0.trace().re
    }

    pub fn to_dmatrix(&self) -> CMatrix {
        CMatrix::from_fn(4, 4, |r, c| self.0[(r, c)])
    }

    /// `χ / Tr χ`.
    pub fn normalized(&self) -> CMatrix {
        self.to_dmatrix() / c(self.trace(), 0.0)
    }

    pub fn apply_matrix(&self, rho: &M2) -> M2 {
        let e = pauli_basis();
        let mut out = M2::zeros();
        for m in 0..4 {
            for n in 0..4 {
                out += e[m] * rho * e[n].adjoint() * self.0[(m, n)];
            }
        }
        out
    }

    pub fn apply(&self, state: &QubitState) -> Result<QubitState> {
        QubitState::from_matrix(&self.apply_matrix(&state.matrix()))
    }

    /// `‖Σ χ_mn E_n† E_m − 1‖_F`.
    pub fn trace_preservation_defect(&self) -> f64 {
        let e = pauli_basis();
        let mut sum = M2::zeros();
        for m in 0..4 {
            for n in 0..4 {
                sum += e[n].adjoint() * e[m] * self.0[(m, n)];
            }
        }
        (sum - M2::identity()).norm()
    }

    pub fn hermiticity_defect(&self) -> f64 {
        (self.0 - self.0.adjoint()).norm()
    }

    /// Eigenvalues, ascending.
    pub fn eigenvalues(&self) -> [f64; 4] {
        let (v, _) = hermitian_eigen(&self.to_dmatrix());
        [v[0], v[1], v[2], v[3]]
    }
}

/// Reconstructs `χ` from the images of the probes `|0⟩, |1⟩, |+⟩, |+y⟩`, in
/// that order.
pub fn process_tomography(outputs: &[M2; 4]) -> Result<ChiMatrix> {
    for o in outputs {
        QubitState::from_matrix(o)?;
    }
    let [e0, e1, ep, ey] = *outputs;
    let half = c(0.5, 0.5);
    let e01 = ep + ey * c(0.0, 1.0) - (e0 + e1) * half;
    let e10 = ep - ey * c(0.0, 1.0) - (e0 + e1) * half.conj();
    let images = [e0, e01, e10, e1];
    let lambda = SVector::<Complex64, 16>::from_fn(|r, _| images[r / 4][((r % 4) / 2, r % 2)]);
    let x = beta_inverse() * lambda;
    Ok(ChiMatrix(Matrix4::from_fn(|m, n| x[4 * m + n])))
}

pub fn probe_states() -> [QubitState; 4] {
    [QubitState::zero(), QubitState::one(), QubitState::plus(), QubitState::plus_y()]
}

/// Tomography of an affine map snapshot.
pub fn chi_of_snapshot(map: &MapSnapshot) -> Result<ChiMatrix> {
    let probes = probe_states();
    let mut outs = [M2::zeros(); 4];
    for (o, p) in outs.iter_mut().zip(&probes) {
        *o = map.apply(p)?.matrix();
    }
    process_tomography(&outs)
}

/// Kraus operators `K_i = √d_i Σ_j u_ji E_j` from the eigendecomposition of `χ`.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausSet {
    pub operators: Vec<M2>,
    /// `χ` eigenvalues behind each operator after clipping.
    pub weights: Vec<f64>,
}

impl KrausSet {
    pub fn len(&self) -> usize {
        self.operators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.operators.is_empty()
    }

    pub fn apply_matrix(&self, rho: &M2) -> M2 {
        self.operators.iter().map(|k| k * rho * k.adjoint()).sum()
    }

    pub fn apply(&self, state: &QubitState) -> Result<QubitState> {
        QubitState::from_matrix(&self.apply_matrix(&state.matrix()))
    }

    /// `‖Σ K_i† K_i − 1‖_F`.
    pub fn completeness_defect(&self) -> f64 {
        let s: M2 = self.operators.iter().map(|k| k.adjoint() * k).sum();
        (s - M2::identity()).norm()
    }
}

/// Fails when `χ` has an eigenvalue below `−CLIP_TOL`.
pub fn kraus_from_chi(chi: &ChiMatrix) -> Result<KrausSet> {
    let (values, vectors) = hermitian_eigen(&chi.to_dmatrix());
    let e = pauli_basis();
    let mut operators = Vec::new();
    let mut weights = Vec::new();
    for i in (0..4).rev() {
        let d = values[i];
        if d < -CLIP_TOL {
            return Err(Error::NotCompletelyPositive { eigenvalue: d });
        }
        if d <= 0.0 {
            continue;
        }
        let mut k = M2::zeros();
        for (j, ej) in e.iter().enumerate() {
            k += ej * vectors[(j, i)];
        }
        operators.push(k * c(d.sqrt(), 0.0));
        weights.push(d);
    }
    Ok(KrausSet { operators, weights })
}
