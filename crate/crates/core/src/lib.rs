// Copyright 2026 The spinmemory Authors
// SPDX-License-Identifier: Apache-2.0

//! Open-system dynamics of a qubit exchange-coupled to an XY spin chain.
//!
//! The qubit sits at site 0 of an open chain of `N` environment spins. Its
//! reduced dynamics is obtained exactly through the free-fermion structure of
//! the XY model: the Heisenberg-picture transverse operators of the qubit are
//! linear combinations of Jordan-Wigner Majorana operators whose coefficients
//! follow from the singular value decomposition of a tridiagonal adjacency
//! matrix.
//!
//! Module map:
//!
//! - [`model`]: chain parameters, adjacency matrix, propagator coefficients,
//!   closed-form Bessel references and an exact-diagonalization oracle.
//! - [`chain_state`]: ground-state correlators of the uniform XX environment.
//! - [`dynamics`]: qubit states, the dynamical map and trace distance.
//! - [`nonmarkov`]: information flux, trace-distance measure, sweeps.
//! - [`spectral`]: localized single-particle levels and excitation spectra.
//! - [`channels`]: divisibility, process tomography, Kraus operators and the
//!   amplitude-damping-plus-dephasing reference channel.

pub mod chain_state;
pub mod channels;
pub mod dynamics;
mod error;
pub mod linalg;
pub mod model;
pub mod nonmarkov;
pub mod output;
pub mod special;
pub mod spectral;

pub use error::{Error, Result};

pub use nalgebra;
pub use num_complex::Complex64;
