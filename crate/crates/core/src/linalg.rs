// Copyright 2026 The spinmemory Authors
// SPDX-License-Identifier: Apache-2.0

//! Small Hermitian-matrix helpers on top of nalgebra.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;

/// Eigenvalues (ascending) and matching eigenvector columns of a Hermitian
/// matrix. Only the lower triangle is read.
pub fn hermitian_eigen(m: &CMatrix) -> (DVector<f64>, CMatrix) {
    let eig = SymmetricEigen::new(m.clone());
    let n = eig.eigenvalues.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = DVector::from_fn(n, |i, _| eig.eigenvalues[order[i]]);
    let vectors = CMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

/// `‖M − M†‖_F`.
pub fn hermiticity_defect(m: &CMatrix) -> f64 {
    (m - m.adjoint()).norm()
}

/// Square root of a positive semidefinite matrix; negative eigenvalues from
/// rounding are clipped to zero.
pub fn psd_sqrt(m: &CMatrix) -> CMatrix {
    let (values, vectors) = hermitian_eigen(&hermitize(m));
    let roots = DVector::from_fn(values.len(), |i, _| Complex64::new(values[i].max(0.0).sqrt(), 0.0));
    &vectors * CMatrix::from_diagonal(&roots) * vectors.adjoint()
}

pub fn hermitize(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()) * Complex64::new(0.5, 0.0)
}

pub fn trace(m: &CMatrix) -> Complex64 {
    m.diagonal().sum()
}

/// Uhlmann fidelity `[Tr √(√a b √a)]²` of two unit-trace PSD matrices.
pub fn fidelity(a: &CMatrix, b: &CMatrix) -> f64 {
    let sa = psd_sqrt(a);
    let inner = &sa * b * &sa;
    let (values, _) = hermitian_eigen(&hermitize(&inner));
    let s: f64 = values.iter().map(|v| v.max(0.0).sqrt()).sum();
    s * s
}
