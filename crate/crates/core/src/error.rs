// Copyright 2026 The spinmemory Authors
// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid chain specification: {0}")]
    InvalidSpec(String),

    #[error("matrix decomposition failed: {0}")]
    Decomposition(String),

    #[error("power series overflowed at term {term} (t = {t}); reduce t or the order")]
    SeriesOverflow { t: f64, term: usize },

    #[error("exact diagonalization refused: {n_sites} environment spins exceeds the limit of {max}")]
    TooLarge { n_sites: usize, max: usize },

    #[error("chain ground state is degenerate (gap {gap:.3e}); the ground state is ambiguous")]
    DegenerateGroundState { gap: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid time grid: {0}")]
    InvalidGrid(String),

    #[error("invalid qubit state: {0}")]
    InvalidState(String),

    #[error("invariant violated: {0}")]
    InvariantViolation(String),

    #[error("intermediate map is singular at t = {t}: {denominator} vanishes")]
    SingularMap { t: f64, denominator: &'static str },

    #[error("process matrix is not completely positive (eigenvalue {eigenvalue:.3e})")]
    NotCompletelyPositive { eigenvalue: f64 },

    #[error("unsupported model: {0}")]
    Unsupported(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("failed to parse document: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}
