// Copyright 2026 The spinmemory Authors
// SPDX-License-Identifier: Apache-2.0

use std::path::{Path, PathBuf};

use serde::Deserialize;
use spinmemory::model::{ChainSpec, ChainSpecDoc, UniformParams};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    Coeffs,
    MeasureSweep,
    Flux,
    Divisibility,
    Qpt,
    Spectrum,
    Excitations,
    GadFit,
    FixedPoint,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Self::Coeffs => "coeffs",
            Self::MeasureSweep => "measure-sweep",
            Self::Flux => "flux",
            Self::Divisibility => "divisibility",
            Self::Qpt => "qpt",
            Self::Spectrum => "spectrum",
            Self::Excitations => "excitations",
            Self::GadFit => "gad-fit",
            Self::FixedPoint => "fixed-point",
        }
    }

    pub fn uses_random_states(self) -> bool {
        matches!(self, Self::FixedPoint)
    }
}

/// A list of values, or `steps` evenly spaced points from `start` to `stop`
/// inclusive.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum Values {
    List(Vec<f64>),
    Range { start: f64, stop: f64, steps: usize },
}

impl Values {
    pub fn expand(&self) -> Result<Vec<f64>, CliError> {
        match *self {
            Self::List(ref v) if v.is_empty() => Err(CliError::Config("empty value list".into())),
            Self::List(ref v) => Ok(v.clone()),
            Self::Range { steps: 0, .. } => Err(CliError::Config("a range needs at least one step".into())),
            Self::Range { start, steps: 1, .. } => Ok(vec![start]),
            Self::Range { start, stop, steps } => {
                Ok((0..steps).map(|i| start + (stop - start) * i as f64 / (steps - 1) as f64).collect())
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub dt: Option<f64>,
    pub horizon: Option<f64>,
    /// Bulk fields `h/J`; one output per value where the experiment takes a
    /// single chain.
    pub h: Option<Values>,
    /// Qubit couplings `J₀/J` for sweeps.
    pub j0: Option<Values>,
    /// Number of random input states.
    pub count: Option<usize>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: Option<Experiment>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub chain: Option<ChainSpecDoc>,
    #[serde(default)]
    pub grid: GridConfig,
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        let is_json = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"));
        if is_json {
            serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
        } else {
            toml::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
        }
    }

    pub fn uniform(params: UniformParams) -> Self {
        Self { chain: Some(ChainSpecDoc::Uniform { uniform: params }), ..Self::default() }
    }

    /// The chain's uniform parameters, if it was given in that form.
    pub fn uniform_params(&self) -> Option<UniformParams> {
        match self.chain {
            Some(ChainSpecDoc::Uniform { uniform }) => Some(uniform),
            _ => None,
        }
    }

    pub fn chain_spec(&self) -> Result<ChainSpec, CliError> {
        let doc = self.chain.clone().ok_or_else(|| CliError::Config("no chain given".into()))?;
        ChainSpec::try_from(doc).map_err(|e| CliError::Config(e.to_string()))
    }
}

/// Command-line values that take precedence over the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub n: Option<usize>,
    pub j: Option<f64>,
    pub j0: Option<f64>,
    pub h: Option<f64>,
    pub h0: Option<f64>,
    pub dt: Option<f64>,
    pub horizon: Option<f64>,
    pub count: Option<usize>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
}

impl Overrides {
    fn touches_chain(&self) -> bool {
        self.n.is_some() || self.j.is_some() || self.j0.is_some() || self.h.is_some() || self.h0.is_some()
    }

    pub fn apply(&self, config: &mut ExperimentConfig) -> Result<(), CliError> {
        if self.touches_chain() {
            let mut p = match config.chain {
                None => {
                    let n = self.n.ok_or_else(|| CliError::Config("--n is required without a chain in the config".into()))?;
                    UniformParams::new(n, 1.0, 1.0, 0.0, 0.0)
                }
                Some(ChainSpecDoc::Uniform { uniform }) => uniform,
                Some(ChainSpecDoc::Explicit { .. }) => {
                    return Err(CliError::Config("chain flags only apply to the uniform shorthand".into()));
                }
            };
            p.n = self.n.unwrap_or(p.n);
            p.j = self.j.unwrap_or(p.j);
            p.j0 = self.j0.unwrap_or(p.j0);
            p.h = self.h.unwrap_or(p.h);
            p.h0 = self.h0.unwrap_or(p.h0);
            config.chain = Some(ChainSpecDoc::Uniform { uniform: p });
            if self.h.is_some() {
                config.grid.h = None;
            }
            if self.j0.is_some() {
                config.grid.j0 = None;
            }
        }
        config.grid.dt = self.dt.or(config.grid.dt);
        config.grid.horizon = self.horizon.or(config.grid.horizon);
        config.grid.count = self.count.or(config.grid.count);
        config.seed = self.seed.or(config.seed);
        config.out = self.out.clone().or(config.out.take());
        Ok(())
    }
}

pub struct Preset {
    pub name: &'static str,
    pub experiment: Experiment,
    pub about: &'static str,
    pub build: fn() -> ExperimentConfig,
}

fn with_grid(params: UniformParams, grid: GridConfig) -> ExperimentConfig {
    ExperimentConfig { grid, ..ExperimentConfig::uniform(params) }
}

fn h_range(start: f64, stop: f64, steps: usize) -> Option<Values> {
    Some(Values::Range { start, stop, steps })
}

pub const PRESETS: [Preset; 8] = [
    Preset {
        name: "fig1",
        experiment: Experiment::MeasureSweep,
        about: "measure against h/J at J0 = J, h0 = 0, N = 100, cutoff 2N/3",
        build: || {
            with_grid(
                UniformParams::new(100, 1.0, 1.0, 0.0, 0.0),
                GridConfig { h: h_range(0.0, 3.0, 61), j0: Some(Values::List(vec![1.0])), ..GridConfig::default() },
            )
        },
    },
    Preset {
        name: "fig2",
        experiment: Experiment::MeasureSweep,
        about: "measure against h/J for three qubit couplings, N = 200",
        build: || {
            with_grid(
                UniformParams::new(200, 1.0, 1.0, 0.0, 0.0),
                GridConfig {
                    h: h_range(0.0, 3.0, 61),
                    j0: Some(Values::List(vec![0.5, 1.0, 1.5])),
                    ..GridConfig::default()
                },
            )
        },
    },
    Preset {
        name: "fig3",
        experiment: Experiment::Spectrum,
        about: "localized-level counts on the (h/J, J0/J) plane, N = 400",
        build: || {
            with_grid(
                UniformParams::new(400, 1.0, 1.0, 0.0, 0.0),
                GridConfig { h: h_range(0.0, 1.5, 15), j0: Some(Values::Range { start: 0.2, stop: 1.6, steps: 15 }), ..GridConfig::default() },
            )
        },
    },
    Preset {
        name: "fig4",
        experiment: Experiment::Excitations,
        about: "initial-state mode occupations around the Markov point, N + 1 = 50",
        build: || {
            with_grid(
                UniformParams::new(49, 1.0, 1.0, 0.5, 0.0),
                GridConfig { h: Some(Values::List(vec![0.4, 0.5, 0.6])), ..GridConfig::default() },
            )
        },
    },
    Preset {
        name: "fig5",
        experiment: Experiment::Divisibility,
        about: "divisibility condition on t, t1 in [0, 30] at the Markov point and at h/J = 1.1",
        build: || {
            with_grid(
                UniformParams::new(100, 1.0, 1.0, 0.5, 0.0),
                GridConfig { dt: Some(0.1), horizon: Some(30.0), h: Some(Values::List(vec![0.5, 1.1])), ..GridConfig::default() },
            )
        },
    },
    Preset {
        name: "fig6",
        experiment: Experiment::FixedPoint,
        about: "Bloch trajectories of 10 random pure states at the Markov point",
        build: || {
            let mut c = with_grid(
                UniformParams::new(149, 1.0, 1.0, 0.5, 0.0),
                GridConfig { dt: Some(0.5), horizon: Some(100.0), count: Some(10), ..GridConfig::default() },
            );
            c.seed = Some(6);
            c
        },
    },
    Preset {
        name: "fig7",
        experiment: Experiment::FixedPoint,
        about: "500 random pure states evolved to t = 100 at h/J = 0.5 and 0.6",
        build: || {
            let mut c = with_grid(
                UniformParams::new(149, 1.0, 1.0, 0.5, 0.0),
                GridConfig {
                    dt: Some(100.0),
                    horizon: Some(100.0),
                    count: Some(500),
                    h: Some(Values::List(vec![0.5, 0.6])),
                    ..GridConfig::default()
                },
            );
            c.seed = Some(7);
            c
        },
    },
    Preset {
        name: "fig8",
        experiment: Experiment::GadFit,
        about: "process fidelity against the damping-plus-dephasing channel, N + 1 = 150",
        build: || {
            with_grid(
                UniformParams::new(149, 1.0, 1.0, 0.5, 0.0),
                GridConfig { dt: Some(0.2), horizon: Some(100.0), ..GridConfig::default() },
            )
        },
    },
];

pub fn preset(name: &str) -> Option<&'static Preset> {
    PRESETS.iter().find(|p| p.name == name)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges_include_both_ends() {
        let v = Values::Range { start: 0.0, stop: 1.0, steps: 5 }.expand().unwrap();
        assert_eq!(v, vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert!(Values::Range { start: 0.0, stop: 1.0, steps: 0 }.expand().is_err());
    }

    #[test]
    fn toml_and_json_agree() {
        let toml_doc = r#"
            experiment = "measure-sweep"
            seed = 3
            [chain.uniform]
            N = 20
            J0 = 1.0
            h = 0.5
            [grid]
            h = { start = 0.0, stop = 1.0, steps = 3 }
        "#;
        let json_doc = r#"{"experiment": "measure-sweep", "seed": 3,
            "chain": {"uniform": {"N": 20, "J0": 1.0, "h": 0.5}},
            "grid": {"h": {"start": 0.0, "stop": 1.0, "steps": 3}}}"#;
        let a: ExperimentConfig = toml::from_str(toml_doc).unwrap();
        let b: ExperimentConfig = serde_json::from_str(json_doc).unwrap();
        assert_eq!(a.experiment, b.experiment);
        assert_eq!(a.uniform_params(), b.uniform_params());
        assert_eq!(a.grid, b.grid);
    }

    #[test]
    fn flags_win_over_the_file() {
        let mut c = ExperimentConfig::uniform(UniformParams::new(20, 1.0, 1.0, 0.5, 0.0));
        c.grid.h = Some(Values::List(vec![0.1, 0.2]));
        let o = Overrides { h: Some(0.7), seed: Some(9), ..Overrides::default() };
        o.apply(&mut c).unwrap();
        assert_eq!(c.uniform_params().unwrap().h, 0.7);
        assert_eq!(c.grid.h, None);
        assert_eq!(c.seed, Some(9));
    }

    #[test]
    fn presets_cover_each_figure_once() {
        for (i, p) in PRESETS.iter().enumerate() {
            assert_eq!(p.name, format!("fig{}", i + 1));
            (p.build)().chain_spec().unwrap();
        }
    }
}
