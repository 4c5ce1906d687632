// Copyright 2026 The spinmemory Authors
// SPDX-License-Identifier: Apache-2.0

//! End-to-end acceptance checks. Each prints one PASS/FAIL line; the process
//! exits nonzero if any fails.

use std::process::ExitCode;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use spinmemory::channels::{
    chi_of_snapshot, divisibility_grid, evolve_ensemble, fit_gad, kraus_from_chi, random_pure_ensemble, summarize,
    FitOptions,
};
use spinmemory::dynamics::{QubitMap, QubitState};
use spinmemory::model::exact::{ed_oracle_evolve, ChainPreparation};
use spinmemory::model::{analytic, time_grid, ChainSpec, Propagator};
use spinmemory::nonmarkov::{blp_measure, default_horizon, measure_for, InputPair};
use spinmemory::spectral::{classify_localization, excitation_distribution, numeric_localized_levels, parabola_distance};
use spinmemory::Result;

type Closed = Box<dyn Fn(f64) -> (f64, f64)>;
type Criterion = (&'static str, fn() -> Result<Outcome>);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Result<Outcome> {
    Ok(Outcome { pass, detail })
}

fn uniform(n: usize, j0: f64, h: f64, h0: f64) -> ChainSpec {
    ChainSpec::uniform(n, 1.0, j0, h, h0).expect("valid chain")
}

fn analytic_coefficients() -> Result<Outcome> {
    let times = time_grid(0.01, 30.0)?;
    let cases: [(&str, ChainSpec, Closed); 3] = [
        ("h=h0=0.3", uniform(200, 1.0, 0.3, 0.3), Box::new(|t| analytic::resonant(t, 0.3))),
        ("markov", uniform(200, 1.0, 0.5, 0.0), Box::new(|t| analytic::markov_point(0, t))),
        ("sqrt2", uniform(200, 2f64.sqrt(), 0.2, 0.2), Box::new(|t| analytic::sqrt2_point(t, 0.2))),
    ];
    let mut worst = 0.0f64;
    let mut parts = Vec::new();
    for (name, spec, exact) in cases {
        let prop = Propagator::from_spec(&spec)?;
        let err = times
            .iter()
            .map(|&t| {
                let a = prop.site0(t);
                let (p, d) = exact(t);
                (a.pi_x - p).abs().max((a.delta_x - d).abs())
            })
            .fold(0.0, f64::max);
        worst = worst.max(err);
        parts.push(format!("{name} {err:.1e}"));
    }
    outcome(worst < 1e-8, parts.join(", "))
}

fn markov_point_measure() -> Result<Outcome> {
    let m = measure_for(&uniform(100, 1.0, 0.5, 0.0), default_horizon(100))?;
    outcome(m.value < 1e-6, format!("N = {:.3e} at T = {:.1}", m.value, m.horizon))
}

fn divergence_flag() -> Result<Outcome> {
    let mut values = Vec::new();
    for t in [50.0, 100.0, 200.0] {
        let n = (1.5 * t) as usize + 2;
        let prop = Propagator::from_spec(&uniform(n, 2f64.sqrt(), 0.0, 0.0))?;
        values.push(blp_measure(&prop, t, 0.05, &InputPair::equatorial())?.value);
    }
    let g1 = values[1] / values[0] - 1.0;
    let g2 = values[2] / values[1] - 1.0;
    outcome(
        g1 > 0.05 && g2 > 0.05,
        format!("N(50,100,200) = {:.4}, {:.4}, {:.4}; growth {:.1}%, {:.1}%", values[0], values[1], values[2], 100.0 * g1, 100.0 * g2),
    )
}

fn field_shift() -> Result<Outcome> {
    let mut worst = 0.0f64;
    for (h, h0) in [(0.5, 0.0), (0.2, 0.0), (1.0, 0.3), (0.0, -0.4)] {
        let base = measure_for(&uniform(100, 1.0, h, h0), 60.0)?.value;
        for s in [0.3, 1.0] {
            let shifted = measure_for(&uniform(100, 1.0, h + s, h0 + s), 60.0)?.value;
            worst = worst.max((shifted - base).abs());
        }
    }
    outcome(worst < 1e-8, format!("max |ΔN| = {worst:.1e}"))
}

fn oracle_equivalence() -> Result<Outcome> {
    let cases = [(4, 1.0, 0.0), (6, 1.0, 0.0), (8, 1.0, 0.0), (4, 1.0, 0.5), (6, 1.0, 0.5), (7, 1.0, 0.5), (6, 1.3, 0.0), (7, 1.3, 0.5), (8, 1.3, 0.0)];
    let inputs = [QubitState::pure(1.0, 0.7), QubitState::zero(), QubitState::from_bloch([0.1, -0.2, 0.3])?];
    let times = time_grid(0.05, 5.0)?;
    let mut worst = 0.0f64;
    for (n, j0, h) in cases {
        let spec = uniform(n, j0, h, 0.0);
        let map = QubitMap::new(&spec)?;
        let snaps = map.snapshots(&times)?;
        for q in &inputs {
            let ed = ed_oracle_evolve(&spec, q, ChainPreparation::GroundState, &times)?;
            for (s, e) in snaps.iter().zip(&ed) {
                let m = s.apply(q)?;
                worst = worst.max((m.rho00() - e.rho00()).abs()).max((m.rho01() - e.rho01()).norm());
            }
        }
    }
    outcome(worst < 1e-8, format!("{} chains, max deviation {worst:.1e}", cases.len()))
}

fn divisibility() -> Result<Outcome> {
    let times = time_grid(0.1, 60.0)?;
    let probe = QubitState::plus();
    let grid = |h: f64| -> Result<_> {
        let snaps = QubitMap::new(&uniform(100, 1.0, h, 0.0))?.snapshots(&times)?;
        divisibility_grid(&snaps, 301, &probe)
    };
    let markov = grid(0.5)?;
    let c_lo = markov.iter().map(|c| c.c).fold(f64::INFINITY, f64::min);
    let c_hi = markov.iter().map(|c| c.c).fold(f64::NEG_INFINITY, f64::max);
    let choi = markov.iter().min_by(|a, b| a.min_choi.total_cmp(&b.min_choi)).expect("nonempty");
    let markov_ok = c_lo >= -1e-8 && c_hi <= 1.0 + 1e-8 && choi.min_choi >= -1e-8;
    let off = grid(1.1)?;
    let both = off.iter().filter(|c| c.c > 1.0 + 1e-4 && c.min_choi < 0.0).count();
    outcome(
        markov_ok && both > 0,
        format!(
            "h=0.5: C in [{c_lo:.4}, {c_hi:.6}], min Choi {:.3e} at (t, t1) = ({:.1}, {:.1}); h=1.1: {both} cells with C > 1 and Choi < 0",
            choi.min_choi, choi.t, choi.t1
        ),
    )
}

fn markov_snapshots() -> Result<Vec<spinmemory::dynamics::MapSnapshot>> {
    QubitMap::new(&uniform(149, 1.0, 0.5, 0.0))?.snapshots(&time_grid(0.2, 100.0)?)
}

fn qpt_round_trip() -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut completeness = 0.0f64;
    let mut action = 0.0f64;
    let mut min_ops = usize::MAX;
    for s in markov_snapshots()?.iter().skip(1) {
        let kraus = kraus_from_chi(&chi_of_snapshot(s)?)?;
        min_ops = min_ops.min(kraus.len());
        completeness = completeness.max(kraus.completeness_defect());
        for _ in 0..100 {
            let rho = QubitState::random_mixed(&mut rng);
            action = action.max((kraus.apply_matrix(&rho.matrix()) - s.apply(&rho)?.matrix()).norm());
        }
    }
    outcome(
        completeness < 1e-8 && action < 1e-8,
        format!("completeness {completeness:.1e}, action {action:.1e}, at least {min_ops} Kraus operators for t > 0"),
    )
}

fn gad_fit() -> Result<Outcome> {
    let mut worst = (f64::INFINITY, 0.0);
    let mut min_param = f64::INFINITY;
    for s in markov_snapshots()? {
        let fit = fit_gad(&chi_of_snapshot(&s)?, s.t, &FitOptions::default())?;
        if fit.fidelity < worst.0 {
            worst = (fit.fidelity, s.t);
        }
        min_param = min_param.min(fit.params.mu).min(fit.params.gamma).min(fit.params.big_gamma);
    }
    outcome(
        worst.0 >= 0.90 && min_param >= 0.0,
        format!("min F_p = {:.4} at t = {:.1}, min parameter {min_param:.2e}", worst.0, worst.1),
    )
}

fn ensemble_at(n: usize, h: f64) -> Result<spinmemory::channels::EnsembleSummary> {
    let snap = QubitMap::new(&uniform(n, 1.0, h, 0.0))?.snapshot_at(100.0)?;
    let mut rng = ChaCha8Rng::seed_from_u64(2010);
    let states = random_pure_ensemble(500, &mut rng);
    Ok(summarize(&evolve_ensemble(&snap, &states)?))
}

fn fixed_point() -> Result<Outcome> {
    let markov = ensemble_at(149, 0.5)?;
    let off = ensemble_at(149, 0.6)?;
    let mut offsets = Vec::new();
    for n in [50, 100, 150, 200] {
        offsets.push((n as f64, ensemble_at(n, 0.5)?.centroid[2].abs()));
    }
    // Least-squares slope of log|rz| against log N.
    let k = offsets.len() as f64;
    let (sx, sy) = offsets.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x.ln(), b + y.ln()));
    let (sxx, sxy) = offsets.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x.ln() * x.ln(), b + x.ln() * y.ln()));
    let slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
    let collapsed = markov.max_pairwise_distance < 0.02 && markov.centroid[0].abs() < 1e-3 && markov.centroid[1].abs() < 1e-3;
    let spread = off.max_pairwise_distance > 10.0 * markov.max_pairwise_distance;
    outcome(
        collapsed && spread,
        format!(
            "h=0.5: spread {:.4}, centroid ({:.1e}, {:.1e}, {:.4}); h=0.6: spread {:.4}; |rz| vs N slope {slope:.2}",
            markov.max_pairwise_distance,
            markov.centroid[0],
            markov.centroid[1],
            markov.centroid[2],
            off.max_pairwise_distance
        ),
    )
}

fn localization() -> Result<Outcome> {
    let mut checked = 0;
    let mut mismatches = Vec::new();
    for i in 0..15 {
        for k in 0..15 {
            let h = 1.5 * i as f64 / 14.0;
            let j0 = 0.2 + 1.4 * k as f64 / 14.0;
            if parabola_distance(h, j0) < 0.02 {
                continue;
            }
            checked += 1;
            let report = numeric_localized_levels(&uniform(400, j0, h, 0.0))?;
            let predicted = classify_localization(h, j0).count as usize;
            if report.numeric_count != predicted {
                mismatches.push(format!("({h:.3}, {j0:.3}): {} vs {predicted}", report.numeric_count));
            }
        }
    }
    let pass = mismatches.is_empty();
    outcome(pass, format!("{checked} points, {} mismatches {}", mismatches.len(), mismatches.join("; ")))
}

fn excitation_flatness() -> Result<Outcome> {
    let dist = |h: f64| excitation_distribution(&uniform(49, 1.0, h, 0.0), &QubitState::plus());
    let (low, mid, high) = (dist(0.4)?, dist(0.5)?, dist(0.6)?);
    let (s4, s5, s6) = (low.in_band_std(), mid.in_band_std(), high.in_band_std());
    let spike = high.spike();
    outcome(
        s5 < s4 && s5 < s6 && spike > 0.1,
        format!("in-band std {s4:.4} (0.4), {s5:.4} (0.5), {s6:.4} (0.6); spike at 0.6 {spike:.3}"),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("analytic coefficients", analytic_coefficients),
        ("markov point measure", markov_point_measure),
        ("divergence flag", divergence_flag),
        ("field-shift invariance", field_shift),
        ("oracle equivalence", oracle_equivalence),
        ("divisibility", divisibility),
        ("qpt round trip", qpt_round_trip),
        ("gad fit", gad_fit),
        ("fixed point and spread", fixed_point),
        ("localization classifier", localization),
        ("excitation flatness", excitation_flatness),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (status, detail) = match run() {
            Ok(o) => (if o.pass { "PASS" } else { "FAIL" }, o.detail),
            Err(e) => ("FAIL", format!("error: {e}")),
        };
        if status == "FAIL" {
            failed += 1;
        }
        println!("{status} {:>2} {name}: {detail} [{:.1}s]", i + 1, start.elapsed().as_secs_f64());
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
