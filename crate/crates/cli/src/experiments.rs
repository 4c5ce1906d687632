// Copyright 2026 The spinmemory Authors
// SPDX-License-Identifier: Apache-2.0

use std::fs::File;
use std::path::{Path, PathBuf};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use spinmemory::channels::{
    chi_of_snapshot, divisibility_grid, evolve_ensemble, fit_gad, kraus_from_chi, random_pure_ensemble, summarize,
    write_fits, write_grid, write_trajectories, ChiMatrix, FitOptions, GadFit, KrausSet,
};
use spinmemory::dynamics::{MapSnapshot, QubitMap, QubitState};
use spinmemory::model::{time_grid, ChainSpec, Propagator, UniformParams, DEFAULT_TIME_STEP};
use spinmemory::nonmarkov::{default_horizon, flux, sweep_measure, write_sweep, InputPair};
use spinmemory::output::{self, CsvWriter};
use spinmemory::spectral::{classify_localization, excitation_distribution, numeric_localized_levels, write_scan, ScanRow};

use crate::config::{Experiment, ExperimentConfig};
use crate::CliError;

pub struct Run<'a> {
    pub config: &'a ExperimentConfig,
    pub out: PathBuf,
    pub written: Vec<PathBuf>,
}

impl<'a> Run<'a> {
    pub fn new(config: &'a ExperimentConfig) -> Result<Self, CliError> {
        let out = config.out.clone().unwrap_or_else(|| PathBuf::from("."));
        std::fs::create_dir_all(&out).map_err(|e| CliError::Io(format!("cannot create {}: {e}", out.display())))?;
        Ok(Self { config, out, written: Vec::new() })
    }

    fn create(&mut self, name: &str) -> Result<File, CliError> {
        let path = self.out.join(name);
        let file = File::create(&path).map_err(|e| CliError::Io(format!("cannot create {}: {e}", path.display())))?;
        self.written.push(path);
        Ok(file)
    }

    fn dt(&self, default: f64) -> f64 {
        self.config.grid.dt.unwrap_or(default)
    }

    fn horizon(&self, default: f64) -> f64 {
        self.config.grid.horizon.unwrap_or(default)
    }

    fn uniform(&self) -> Result<UniformParams, CliError> {
        self.config
            .uniform_params()
            .ok_or_else(|| CliError::Config("this experiment needs the uniform chain shorthand".into()))
    }

    /// One chain per entry of `grid.h`, or the configured chain alone.
    fn chains(&self) -> Result<Vec<(Option<f64>, ChainSpec)>, CliError> {
        match &self.config.grid.h {
            None => Ok(vec![(None, self.config.chain_spec()?)]),
            Some(values) => {
                let base = self.uniform()?;
                values
                    .expand()?
                    .into_iter()
                    .map(|h| Ok((Some(h), UniformParams { h: h * base.j, ..base }.spec()?)))
                    .collect()
            }
        }
    }
}

fn file_name(base: &str, h: Option<f64>) -> String {
    match h {
        None => format!("{base}.csv"),
        Some(h) => format!("{base}_h{h}.csv"),
    }
}

pub fn run(experiment: Experiment, run: &mut Run) -> Result<(), CliError> {
    if experiment.uses_random_states() && run.config.seed.is_none() {
        return Err(CliError::Config(format!("{} draws random states and needs --seed", experiment.name())));
    }
    match experiment {
        Experiment::Coeffs => coeffs(run),
        Experiment::MeasureSweep => measure_sweep(run),
        Experiment::Flux => flux_profile(run),
        Experiment::Divisibility => divisibility(run),
        Experiment::Qpt => qpt(run, true),
        Experiment::GadFit => qpt(run, false),
        Experiment::Spectrum => spectrum(run),
        Experiment::Excitations => excitations(run),
        Experiment::FixedPoint => fixed_point(run),
    }
}

fn coeffs(run: &mut Run) -> Result<(), CliError> {
    let spec = run.config.chain_spec()?;
    let times = time_grid(run.dt(DEFAULT_TIME_STEP), run.horizon(30.0))?;
    let prop = Propagator::from_spec(&spec)?;
    let rows: Vec<_> = times.par_iter().map(|&t| prop.site0(t)).collect();
    let mut w = CsvWriter::new(run.create("coeffs.csv")?, &["t", "pi_x", "delta_x", "pi_y", "delta_y", "f"])?;
    for a in rows {
        w.row(&[
            output::real(a.t),
            output::real(a.pi_x),
            output::real(a.delta_x),
            output::real(a.pi_y),
            output::real(a.delta_y),
            output::real(a.f()),
        ])?;
    }
    Ok(w.finish()?)
}

fn measure_sweep(run: &mut Run) -> Result<(), CliError> {
    let template = run.uniform()?;
    let grid = &run.config.grid;
    let hs = grid.h.as_ref().map_or(Ok(vec![template.h / template.j]), |v| v.expand())?;
    let j0s = grid.j0.as_ref().map_or(Ok(vec![template.j0 / template.j]), |v| v.expand())?;
    let horizon = run.horizon(default_horizon(template.n));
    let rows = sweep_measure(&template, &hs, &j0s, horizon, run.dt(DEFAULT_TIME_STEP))?;
    Ok(write_sweep(run.create("measure_sweep.csv")?, &rows)?)
}

fn flux_profile(run: &mut Run) -> Result<(), CliError> {
    let spec = run.config.chain_spec()?;
    let times = time_grid(run.dt(DEFAULT_TIME_STEP), run.horizon(default_horizon(spec.n_sites())))?;
    let profile = flux(&Propagator::from_spec(&spec)?, &times, &InputPair::equatorial())?;
    profile.write_csv(run.create("flux.csv")?)?;
    let mut w = CsvWriter::new(run.create("flux_windows.csv")?, &["start", "end"])?;
    for (a, b) in &profile.windows {
        w.row(&[output::real(*a), output::real(*b)])?;
    }
    Ok(w.finish()?)
}

fn divisibility(run: &mut Run) -> Result<(), CliError> {
    let dt = run.dt(0.1);
    let horizon = run.horizon(30.0);
    let steps = time_grid(dt, horizon)?.len();
    let times = time_grid(dt, 2.0 * horizon)?;
    for (h, spec) in run.chains()? {
        let snaps = QubitMap::new(&spec)?.snapshots(&times)?;
        let cells = divisibility_grid(&snaps, steps, &QubitState::plus())?;
        write_grid(run.create(&file_name("divisibility", h))?, &cells)?;
    }
    Ok(())
}

struct TomographyPoint {
    snap: MapSnapshot,
    chi: ChiMatrix,
    kraus: Option<KrausSet>,
    fit: GadFit,
}

fn qpt(run: &mut Run, with_kraus: bool) -> Result<(), CliError> {
    let spec = run.config.chain_spec()?;
    let times = time_grid(run.dt(0.2), run.horizon(100.0))?;
    let snaps = QubitMap::new(&spec)?.snapshots(&times)?;
    let options = FitOptions { seed: run.config.seed.unwrap_or(0), ..FitOptions::default() };
    let points: Vec<TomographyPoint> = snaps
        .into_par_iter()
        .map(|snap| {
            let chi = chi_of_snapshot(&snap)?;
            let kraus = if with_kraus { Some(kraus_from_chi(&chi)?) } else { None };
            let fit = fit_gad(&chi, snap.t, &options)?;
            Ok(TomographyPoint { snap, chi, kraus, fit })
        })
        .collect::<spinmemory::Result<_>>()?;

    if with_kraus {
        let mut w = CsvWriter::new(run.create("chi.csv")?, &["t", "m", "n", "re", "im"])?;
        for p in &points {
            for m in 0..4 {
                for n in 0..4 {
                    let c = p.chi.entry(m, n);
                    w.row(&[output::real(p.snap.t), output::int(m), output::int(n), output::real(c.re), output::real(c.im)])?;
                }
            }
        }
        w.finish()?;
        let header = ["t", "index", "weight", "k00_re", "k00_im", "k01_re", "k01_im", "k10_re", "k10_im", "k11_re", "k11_im"];
        let mut w = CsvWriter::new(run.create("kraus.csv")?, &header)?;
        for p in &points {
            let k = p.kraus.as_ref().expect("computed above");
            for (i, (op, weight)) in k.operators.iter().zip(&k.weights).enumerate() {
                let mut row = vec![output::real(p.snap.t), output::int(i), output::real(*weight)];
                for r in 0..2 {
                    for c in 0..2 {
                        row.push(output::real(op[(r, c)].re));
                        row.push(output::real(op[(r, c)].im));
                    }
                }
                w.row(&row)?;
            }
        }
        w.finish()?;
    }
    let fits: Vec<GadFit> = points.iter().map(|p| p.fit).collect();
    Ok(write_fits(run.create("gad_fit.csv")?, &fits)?)
}

fn spectrum(run: &mut Run) -> Result<(), CliError> {
    let base = run.uniform()?;
    let grid = &run.config.grid;
    let hs = grid.h.as_ref().map_or(Ok(vec![base.h / base.j]), |v| v.expand())?;
    let j0s = grid.j0.as_ref().map_or(Ok(vec![base.j0 / base.j]), |v| v.expand())?;
    let points: Vec<(f64, f64)> = j0s.iter().flat_map(|&j0| hs.iter().map(move |&h| (h, j0))).collect();
    let rows: Vec<ScanRow> = points
        .par_iter()
        .map(|&(h, j0)| {
            let spec = UniformParams { h: h * base.j, j0: j0 * base.j, ..base }.spec()?;
            let report = numeric_localized_levels(&spec)?;
            let class = classify_localization(h - base.h0 / base.j, j0);
            Ok(ScanRow { h, j0, analytic: class.count, numeric: report.numeric_count, boundary: class.boundary })
        })
        .collect::<spinmemory::Result<_>>()?;
    Ok(write_scan(run.create("spectrum.csv")?, &rows)?)
}

fn excitations(run: &mut Run) -> Result<(), CliError> {
    for (h, spec) in run.chains()? {
        let dist = excitation_distribution(&spec, &QubitState::plus())?;
        dist.write_csv(run.create(&file_name("excitations", h))?)?;
    }
    Ok(())
}

fn fixed_point(run: &mut Run) -> Result<(), CliError> {
    let seed = run.config.seed.expect("checked by run");
    let count = run.config.grid.count.unwrap_or(500);
    let horizon = run.horizon(100.0);
    let times = time_grid(run.dt(horizon), horizon)?;
    let final_t = *times.last().expect("grid holds t = 0");
    let mut summary = Vec::new();
    for (h, spec) in run.chains()? {
        let states = random_pure_ensemble(count, &mut ChaCha8Rng::seed_from_u64(seed));
        let map = QubitMap::new(&spec)?;
        write_trajectories(run.create(&file_name("fixed_point", h))?, &map, &times, &states)?;
        let s = summarize(&evolve_ensemble(&map.snapshot_at(final_t)?, &states)?);
        summary.push((h.unwrap_or_else(|| spec.bulk().map_or(f64::NAN, |(j, h)| h / j)), s));
    }
    let header = ["h_over_J", "t", "count", "max_pairwise_distance", "rx", "ry", "rz"];
    let mut w = CsvWriter::new(run.create("fixed_point_summary.csv")?, &header)?;
    for (h, s) in summary {
        w.row(&[
            output::real(h),
            output::real(final_t),
            output::int(s.count),
            output::real(s.max_pairwise_distance),
            output::real(s.centroid[0]),
            output::real(s.centroid[1]),
            output::real(s.centroid[2]),
        ])?;
    }
    Ok(w.finish()?)
}

pub fn display(path: &Path) -> String {
    path.display().to_string()
}
