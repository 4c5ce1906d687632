// Copyright 2026 The spinmemory Authors
// SPDX-License-Identifier: Apache-2.0

//! Hamiltonian parameters and the free-fermion propagator.
//!
//! Site 0 is always the qubit; sites `1..=N` form the environment chain.
//! Coupling `J_n` links sites `n` and `n+1`, so `J_0` is the qubit-chain
//! exchange. Energies are in units of the bulk coupling `J` and times in
//! units of `1/J`.

mod adjacency;
pub mod analytic;
mod coefficients;
pub mod exact;

pub use adjacency::{adjacency_matrix, build_adjacency, AdjacencyDecomposition};
pub(crate) use coefficients::check_grid;
pub use coefficients::{
    coefficient_series_check, coefficients, time_grid, CoefficientSet, Coefficients, Propagator,
    ReturnAmplitudes, DEFAULT_TIME_STEP,
};

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Parameters of `H_0 + H_Γ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ChainSpecDoc", into = "ChainSpecDoc")]
pub struct ChainSpec {
    jx: Vec<f64>,
    jy: Vec<f64>,
    fields: Vec<f64>,
}

/// Uniform chain: bulk coupling `j`, qubit coupling `j0`, bulk field `h`,
/// qubit field `h0` and `n` environment spins.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UniformParams {
    #[serde(rename = "J", default = "one")]
    pub j: f64,
    #[serde(rename = "J0")]
    pub j0: f64,
    pub h: f64,
    #[serde(default)]
    pub h0: f64,
    #[serde(rename = "N")]
    pub n: usize,
}

fn one() -> f64 {
    1.0
}

impl UniformParams {
    pub fn new(n: usize, j: f64, j0: f64, h: f64, h0: f64) -> Self {
        Self { j, j0, h, h0, n }
    }

    pub fn spec(&self) -> Result<ChainSpec> {
        ChainSpec::uniform(self.n, self.j, self.j0, self.h, self.h0)
    }
}

impl ChainSpec {
    /// General XY chain. `jx` and `jy` hold `N` couplings, `fields` holds
    /// `N + 1` local fields starting with the qubit's.
    pub fn new(jx: Vec<f64>, jy: Vec<f64>, fields: Vec<f64>) -> Result<Self> {
        let n = jx.len();
        if n == 0 {
            return Err(Error::InvalidSpec("the chain needs at least one environment spin".into()));
        }
        if jy.len() != n {
            return Err(Error::InvalidSpec(format!("jx has {n} entries but jy has {}", jy.len())));
        }
        if fields.len() != n + 1 {
            return Err(Error::InvalidSpec(format!(
                "expected {} fields for {n} environment spins, got {}",
                n + 1,
                fields.len()
            )));
        }
        if let Some(bad) = jx.iter().chain(&jy).chain(&fields).find(|x| !x.is_finite()) {
            return Err(Error::InvalidSpec(format!("non-finite parameter {bad}")));
        }
        Ok(Self { jx, jy, fields })
    }

    /// Isotropic chain with per-bond couplings.
    pub fn xx(couplings: Vec<f64>, fields: Vec<f64>) -> Result<Self> {
        Self::new(couplings.clone(), couplings, fields)
    }

    pub fn uniform(n: usize, j: f64, j0: f64, h: f64, h0: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidSpec("the chain needs at least one environment spin".into()));
        }
        let mut couplings = vec![j; n];
        couplings[0] = j0;
        let mut fields = vec![h; n + 1];
        fields[0] = h0;
        Self::xx(couplings, fields)
    }

    /// Number of environment spins `N`.
    pub fn n_sites(&self) -> usize {
        self.jx.len()
    }

    pub fn jx(&self) -> &[f64] {
        &self.jx
    }

    pub fn jy(&self) -> &[f64] {
        &self.jy
    }

    pub fn fields(&self) -> &[f64] {
        &self.fields
    }

    pub fn is_xx(&self) -> bool {
        self.jx == self.jy
    }

    pub fn is_uniform(&self, j: f64, j0: f64, h: f64, h0: f64) -> bool {
        self.is_xx()
            && self.jx[0] == j0
            && self.jx[1..].iter().all(|&x| x == j)
            && self.fields[0] == h0
            && self.fields[1..].iter().all(|&x| x == h)
    }

    /// Bulk parameters `(J, h)` of an isotropic, homogeneous environment.
    ///
    /// The qubit's own coupling and field may differ. A single-spin
    /// environment has no internal bond; `J` is then reported as 1.
    pub fn bulk(&self) -> Result<(f64, f64)> {
        if !self.is_xx() {
            return Err(Error::Unsupported("the environment must be an XX chain".into()));
        }
        let chain_couplings = &self.jx[1..];
        let chain_fields = &self.fields[1..];
        let j = chain_couplings.first().copied().unwrap_or(1.0);
        let h = chain_fields[0];
        if chain_couplings.iter().any(|&x| x != j) || chain_fields.iter().any(|&x| x != h) {
            return Err(Error::Unsupported("the environment chain must be homogeneous".into()));
        }
        if j <= 0.0 {
            return Err(Error::Unsupported(format!("bulk coupling must be positive, got {j}")));
        }
        Ok((j, h))
    }

    /// Same chain with every local field shifted by `shift`.
    pub fn with_field_shift(&self, shift: f64) -> Self {
        Self {
            jx: self.jx.clone(),
            jy: self.jy.clone(),
            fields: self.fields.iter().map(|h| h + shift).collect(),
        }
    }

    pub fn from_toml_str(doc: &str) -> Result<Self> {
        toml::from_str(doc).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn from_json_str(doc: &str) -> Result<Self> {
        serde_json::from_str(doc).map_err(|e| Error::Parse(e.to_string()))
    }
}

/// On-disk form: either explicit lists or the uniform shorthand.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ChainSpecDoc {
    Uniform {
        uniform: UniformParams,
    },
    Explicit {
        n_sites: usize,
        jx: Vec<f64>,
        jy: Vec<f64>,
        fields: Vec<f64>,
    },
}

impl TryFrom<ChainSpecDoc> for ChainSpec {
    type Error = Error;

    fn try_from(doc: ChainSpecDoc) -> Result<Self> {
        match doc {
            ChainSpecDoc::Uniform { uniform } => uniform.spec(),
            ChainSpecDoc::Explicit { n_sites, jx, jy, fields } => {
                if jx.len() != n_sites {
                    return Err(Error::InvalidSpec(format!(
                        "n_sites = {n_sites} but jx has {} entries",
                        jx.len()
                    )));
                }
                ChainSpec::new(jx, jy, fields)
            }
        }
    }
}

impl From<ChainSpec> for ChainSpecDoc {
    fn from(spec: ChainSpec) -> Self {
        ChainSpecDoc::Explicit { n_sites: spec.n_sites(), jx: spec.jx, jy: spec.jy, fields: spec.fields }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_layout() {
        let spec = ChainSpec::uniform(4, 1.0, 0.7, 0.3, 0.1).unwrap();
        assert_eq!(spec.jx(), &[0.7, 1.0, 1.0, 1.0]);
        assert_eq!(spec.fields(), &[0.1, 0.3, 0.3, 0.3, 0.3]);
        assert!(spec.is_xx());
        assert!(spec.is_uniform(1.0, 0.7, 0.3, 0.1));
        assert!(!spec.is_uniform(1.0, 0.7, 0.3, 0.0));
        assert_eq!(spec.bulk().unwrap(), (1.0, 0.3));
    }

    #[test]
    fn rejects_bad_lengths_and_values() {
        assert!(ChainSpec::new(vec![1.0], vec![1.0, 1.0], vec![0.0, 0.0]).is_err());
        assert!(ChainSpec::new(vec![1.0], vec![1.0], vec![0.0]).is_err());
        assert!(ChainSpec::new(vec![f64::NAN], vec![1.0], vec![0.0, 0.0]).is_err());
        assert!(ChainSpec::new(vec![], vec![], vec![0.0]).is_err());
    }

    #[test]
    fn anisotropic_is_not_xx() {
        let spec = ChainSpec::new(vec![1.0, 1.0], vec![1.0, 0.5], vec![0.0; 3]).unwrap();
        assert!(!spec.is_xx());
        assert!(!spec.is_uniform(1.0, 1.0, 0.0, 0.0));
        assert!(spec.bulk().is_err());
    }

    #[test]
    fn shorthand_documents() {
        let toml_doc = "[uniform]\nJ = 1.0\nJ0 = 1.0\nh = 0.5\nh0 = 0.0\nN = 3\n";
        let spec = ChainSpec::from_toml_str(toml_doc).unwrap();
        assert_eq!(spec, ChainSpec::uniform(3, 1.0, 1.0, 0.5, 0.0).unwrap());

        let json_doc = r#"{"n_sites": 2, "jx": [1.0, 0.5], "jy": [1.0, 0.4], "fields": [0.0, 0.1, 0.2]}"#;
        let spec = ChainSpec::from_json_str(json_doc).unwrap();
        assert_eq!(spec.jy(), &[1.0, 0.4]);

        let round = serde_json::to_string(&spec).unwrap();
        assert_eq!(ChainSpec::from_json_str(&round).unwrap(), spec);

        let bad = r#"{"n_sites": 3, "jx": [1.0, 0.5], "jy": [1.0, 0.4], "fields": [0.0, 0.1, 0.2]}"#;
        assert!(ChainSpec::from_json_str(bad).is_err());
    }
}
