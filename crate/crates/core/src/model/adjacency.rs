// Copyright 2026 The spinmemory Authors
// SPDX-License-Identifier: Apache-2.0

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use super::ChainSpec;
use crate::{Error, Result};

/// The tridiagonal adjacency matrix `τ` and its singular value decomposition
/// `τ = U Λ Vᵀ` with singular values in descending order.
#[derive(Debug, Clone)]
pub struct AdjacencyDecomposition {
    tau: DMatrix<f64>,
    u: DMatrix<f64>,
    v: DMatrix<f64>,
    lambda: DVector<f64>,
}

/// `τ_{i,i−1} = J^x_{i−1}`, `τ_{i,i+1} = J^y_i`, `τ_{ii} = −2 h_i`.
pub fn adjacency_matrix(spec: &ChainSpec) -> DMatrix<f64> {
    let dim = spec.n_sites() + 1;
    let mut tau = DMatrix::zeros(dim, dim);
    for i in 0..dim {
        tau[(i, i)] = -2.0 * spec.fields()[i];
        if i > 0 {
            tau[(i, i - 1)] = spec.jx()[i - 1];
        }
        if i + 1 < dim {
            tau[(i, i + 1)] = spec.jy()[i];
        }
    }
    tau
}

pub fn build_adjacency(spec: &ChainSpec) -> Result<AdjacencyDecomposition> {
    let tau = adjacency_matrix(spec);
    if tau.iter().any(|x| !x.is_finite()) {
        return Err(Error::Decomposition("adjacency matrix has non-finite entries".into()));
    }
    let (u, v, sv) = if spec.is_xx() { symmetric_svd(&tau) } else { general_svd(&tau)? };

    let dim = tau.nrows();
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| sv[b].total_cmp(&sv[a]));
    let u = DMatrix::from_fn(dim, dim, |r, c| u[(r, order[c])]);
    let v = DMatrix::from_fn(dim, dim, |r, c| v[(r, order[c])]);
    let lambda = DVector::from_fn(dim, |i, _| sv[order[i]]);

    let decomp = AdjacencyDecomposition { tau, u, v, lambda };
    let residual = decomp.reconstruction_residual();
    let scale = decomp.tau.norm().max(1.0);
    if residual.is_nan() || residual > 1e-9 * scale {
        return Err(Error::Decomposition(format!("reconstruction residual {residual:.3e}")));
    }
    Ok(decomp)
}

/// For symmetric `τ = W E Wᵀ`: `U = W`, `Λ = |E|`, `V = W sgn(E)`.
///
/// nalgebra's bidiagonal SVD occasionally returns a wrong factorization for
/// these matrices (e.g. uniform chain at `h = 2J`), the symmetric
/// eigensolver does not.
fn symmetric_svd(tau: &DMatrix<f64>) -> (DMatrix<f64>, DMatrix<f64>, DVector<f64>) {
    let eig = SymmetricEigen::new(tau.clone());
    let w = eig.eigenvectors;
    let mut v = w.clone();
    for (c, e) in eig.eigenvalues.iter().enumerate() {
        if *e < 0.0 {
            v.column_mut(c).neg_mut();
        }
    }
    (w, v, eig.eigenvalues.abs())
}

fn general_svd(tau: &DMatrix<f64>) -> Result<(DMatrix<f64>, DMatrix<f64>, DVector<f64>)> {
    let svd = tau.clone().try_svd(true, true, f64::EPSILON, 10_000).ok_or_else(|| {
        Error::Decomposition("singular value iteration did not converge".into())
    })?;
    let (Some(u), Some(v_t)) = (svd.u, svd.v_t) else {
        return Err(Error::Decomposition("singular vectors were not computed".into()));
    };
    Ok((u, v_t.transpose(), svd.singular_values))
}

impl AdjacencyDecomposition {
    pub fn tau(&self) -> &DMatrix<f64> {
        &self.tau
    }

    pub fn u(&self) -> &DMatrix<f64> {
        &self.u
    }

    pub fn v(&self) -> &DMatrix<f64> {
        &self.v
    }

    /// Singular values, descending.
    pub fn lambda(&self) -> &DVector<f64> {
        &self.lambda
    }

    pub fn dim(&self) -> usize {
        self.tau.nrows()
    }

    /// `‖τ − U Λ Vᵀ‖_F`.
    pub fn reconstruction_residual(&self) -> f64 {
        let rebuilt = &self.u * DMatrix::from_diagonal(&self.lambda) * self.v.transpose();
        (&self.tau - rebuilt).norm()
    }

    /// `‖τᵀ U − V Λ‖_F`, the pairing consistency of left and right vectors.
    pub fn pairing_residual(&self) -> f64 {
        let lhs = self.tau.transpose() * &self.u;
        let rhs = &self.v * DMatrix::from_diagonal(&self.lambda);
        (lhs - rhs).norm()
    }

    /// `max(‖UᵀU − 1‖_F, ‖VᵀV − 1‖_F)`.
    pub fn orthogonality_residual(&self) -> f64 {
        let id = DMatrix::<f64>::identity(self.dim(), self.dim());
        let ru = (self.u.transpose() * &self.u - &id).norm();
        let rv = (self.v.transpose() * &self.v - &id).norm();
        ru.max(rv)
    }
}
