// Copyright 2026 The spinmemory Authors
// SPDX-License-Identifier: Apache-2.0

//! Divisibility of the qubit map, process tomography and the comparison with
//! a Markovian reference channel.

mod divisibility;
mod ensemble;
mod gad;
mod tomography;

pub use divisibility::{
    choi_positivity, divisibility_c, divisibility_grid, write_grid, DivisibilityCell, IntermediateMap,
};
pub use ensemble::{evolve_ensemble, random_pure_ensemble, summarize, write_trajectories, EnsembleSummary};
pub use gad::{fit_gad, gad_channel, gad_chi, write_fits, FitOptions, GadChannelParams, GadFit, PARAM_MAX};
pub use tomography::{
    chi_of_snapshot, kraus_from_chi, pauli_basis, probe_states, process_tomography, ChiMatrix, KrausSet, CLIP_TOL,
};
