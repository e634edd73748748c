use std::path::Path;

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use wwlab::analysis::{au_ww_report, maximal_check, vdc_bound, vdc_check, zero_input, ConvergenceVerdict, VdcVerdict};
use wwlab::averages::average_table;
use wwlab::scalar::turn;
use wwlab::spectral::{correlation, positive_definite_check, spectral_summary, SpectralVerdict};
use wwlab::system::{build_system, SystemSpec};
use wwlab::{ConvergenceReport, Observable, StatePoint, System, VdcInput};

use crate::config::{Expectation, PointSelection};
use crate::output::OutputDir;
use crate::{CliError, ExperimentConfig, Status, Written};

/// Hermitian forms below this count as a positive-definiteness failure.
const PSD_FLOOR: f64 = -1e-10;

/// Point ids with their state points, and the matching cell masses.
type Selection = (Vec<(usize, StatePoint)>, Vec<f64>);

fn select_points(sys: &System, selection: &PointSelection) -> Result<Selection, CliError> {
    let every = match selection {
        PointSelection::Cells => 1,
        PointSelection::Stride { every } if *every > 0 => *every,
        PointSelection::Stride { .. } => return Err(CliError::Config("points.every must be at least 1".into())),
    };
    let mut points = Vec::new();
    let mut masses = Vec::new();
    for (id, cell) in sys.cells().into_iter().enumerate().step_by(every) {
        points.push((id, sys.cell_point(&cell)?));
        masses.push(sys.cell_mass(&cell)?);
    }
    Ok((points, masses))
}

fn status_word(s: Status) -> &'static str {
    match s {
        Status::Pass => "Pass",
        Status::Fail => "Fail",
        Status::Violation => "VIOLATION",
    }
}

pub fn run_simulate(cfg: &ExperimentConfig, out: &Path) -> Result<(Status, Written), CliError> {
    let sys = build_system::<f64>(cfg.require_system()?)?;
    let f = cfg.require_observable()?;
    let weights = cfg.weights.build()?;
    let schedule = cfg.run.schedule()?;
    let (points, _) = select_points(&sys, &cfg.run.points)?;
    let table = average_table(&sys, &points, &f, &weights, &schedule)?;

    let mut csv = Vec::new();
    table.write_csv(&mut csv).expect("writing to memory");
    let mut dir = OutputDir::create(out)?;
    dir.write("averages.csv", &csv)?;
    Ok((Status::Pass, dir.finish("simulate", cfg, "Pass")?))
}

fn report_json(r: &ConvergenceReport) -> Value {
    json!({
        "epsilon": r.epsilon,
        "delta": r.delta,
        "N": r.n_start,
        "removed": r.removed.iter().map(|(id, m)| json!([id, m])).collect::<Vec<_>>(),
        "removed_mass": r.removed_mass,
        "retained_mass": r.retained_mass,
        "per_weight": r.per_weight.iter().map(|w| json!([w.weight_id, w.n_lambda, w.deviation])).collect::<Vec<_>>(),
        "total_removal": r.total_removal,
        "verdict": match r.verdict {
            ConvergenceVerdict::Pass => "Pass",
            ConvergenceVerdict::Fail => "Fail",
        },
    })
}

pub fn run_egorov(cfg: &ExperimentConfig, out: &Path) -> Result<(Status, Written), CliError> {
    let eg = cfg
        .egorov
        .as_ref()
        .ok_or_else(|| CliError::Config("missing [egorov] section".into()))?;
    if eg.epsilon.is_nan() || eg.delta.is_nan() || eg.epsilon < 0.0 || eg.delta < 0.0 {
        return Err(CliError::Config(
            "egorov.epsilon and egorov.delta must be nonnegative".into(),
        ));
    }
    let sys = build_system::<f64>(cfg.require_system()?)?;
    let f = cfg.require_observable()?;
    let weights = cfg.weights.build()?;
    let schedule = cfg.run.schedule()?;
    let (points, masses) = select_points(&sys, &cfg.run.points)?;
    let report = au_ww_report(
        &sys, &f, &weights, &points, &masses, &schedule, eg.epsilon, eg.delta, eg.n_start,
    )?;

    let mut value = report_json(&report.overall);
    let per_part: Vec<Value> = report
        .per_part
        .iter()
        .map(|p| {
            let mut v = report_json(&p.report);
            v["part"] = json!(p.part);
            v["hopf"] = serde_json::to_value(p.hopf).expect("tag serializes");
            v
        })
        .collect();
    value["per_part"] = Value::Array(per_part);
    value["weights"] = Value::Array(weights.iter().map(|w| Value::String(w.label())).collect());

    let status = match report.verdict() {
        ConvergenceVerdict::Pass => Status::Pass,
        ConvergenceVerdict::Fail => Status::Fail,
    };
    let mut dir = OutputDir::create(out)?;
    dir.write_json("egorov.json", &value)?;
    Ok((status, dir.finish("egorov", cfg, status_word(status))?))
}

pub fn run_spectral(cfg: &ExperimentConfig, out: &Path) -> Result<(Status, Written), CliError> {
    let sp = cfg
        .spectral
        .as_ref()
        .ok_or_else(|| CliError::Config("missing [spectral] section".into()))?;
    if sp.atom_grid == 0 {
        return Err(CliError::Config("spectral.atom_grid must be at least 1".into()));
    }
    let sys = build_system::<f64>(cfg.require_system()?)?;
    let f = cfg.require_observable()?;
    let gamma = correlation(&sys, &f, sp.l_max)?;
    let psd_min = if sp.psd_trials > 0 {
        let m = sp.psd_m.unwrap_or(sp.l_max.min(32));
        Some(positive_definite_check(&gamma, m, sp.psd_trials, cfg.run.seed)?)
    } else {
        None
    };
    let mut thetas: Vec<f64> = (0..sp.atom_grid).map(|j| j as f64 / sp.atom_grid as f64).collect();
    thetas.extend(&sp.extra_theta);
    let summary = spectral_summary(gamma, &sp.wiener_m, &thetas, sp.atom_n, sp.tolerance)?;

    let verdict = match &summary.verdict {
        SpectralVerdict::AtomsDetected(at) => json!({"kind": "AtomsDetected", "locations": at}),
        SpectralVerdict::ContinuousWithin(tol) => json!({"kind": "ContinuousWithin", "tolerance": tol}),
    };
    let mut status = match (sp.expect, &summary.verdict) {
        (Some(Expectation::Continuous), SpectralVerdict::AtomsDetected(_))
        | (Some(Expectation::Atoms), SpectralVerdict::ContinuousWithin(_)) => Status::Fail,
        _ => Status::Pass,
    };
    if psd_min.is_some_and(|m| m < PSD_FLOOR) {
        status = Status::Violation;
    }
    let value = json!({
        "gamma": summary.gamma.values().iter().map(|z| json!([z.re, z.im])).collect::<Vec<_>>(),
        "wiener": summary.wiener.iter().map(|(m, w)| json!([m, w])).collect::<Vec<_>>(),
        "atoms": summary.atoms.iter().map(|(t, a)| json!([t, a.re, a.im])).collect::<Vec<_>>(),
        "verdict": verdict,
        "positive_definite_min": psd_min,
        "provenance": "exact",
    });
    let mut dir = OutputDir::create(out)?;
    dir.write_json("spectral.json", &value)?;
    Ok((status, dir.finish("spectral", cfg, status_word(status))?))
}

fn random_vdc_input(rng: &mut ChaCha8Rng, max_n: usize, points: usize) -> VdcInput {
    let n = rng.random_range(1..=max_n);
    let m = rng.random_range(0..n);
    let values = (0..n)
        .map(|_| (0..points).map(|_| turn(rng.random::<f64>())).collect())
        .collect();
    VdcInput {
        values,
        masses: vec![1.0 / points as f64; points],
        m,
    }
}

pub fn run_vdc(cfg: &ExperimentConfig, out: &Path) -> Result<(Status, Written), CliError> {
    let v = cfg
        .vdc
        .as_ref()
        .ok_or_else(|| CliError::Config("missing [vdc] section".into()))?;
    if v.max_n == 0 || v.points == 0 {
        return Err(CliError::Config("vdc.max_n and vdc.points must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.run.seed);
    let mut cases = Vec::new();
    let (mut strict, mut degenerate) = (0usize, 0usize);
    let mut violations = Vec::new();
    let mut status = Status::Pass;
    for case in 0..v.cases {
        let input = random_vdc_input(&mut rng, v.max_n, v.points);
        let (lhs, rhs) = vdc_bound(&input)?;
        match vdc_check(&input)? {
            VdcVerdict::StrictHold => strict += 1,
            VdcVerdict::DegenerateEquality => degenerate += 1,
            VdcVerdict::Violation { .. } => violations.push(json!([case, lhs, rhs])),
        }
        cases.push(json!([case, input.n(), input.m, lhs, rhs]));
    }
    let degenerate_case = if v.include_degenerate {
        let verdict = vdc_check(&zero_input::<f64>(v.max_n, v.points, 0))?;
        if verdict != VdcVerdict::DegenerateEquality {
            status = Status::Fail;
        }
        Some(matches!(verdict, VdcVerdict::DegenerateEquality))
    } else {
        None
    };
    if !violations.is_empty() {
        status = Status::Violation;
    }
    let value = json!({
        "cases": cases,
        "strict_hold": strict,
        "degenerate_equality": degenerate,
        "zero_input_degenerate": degenerate_case,
        "violations": violations,
        "verdict": if status == Status::Pass { "Hold" } else { status_word(status) },
    });
    let mut dir = OutputDir::create(out)?;
    dir.write_json("vdc.json", &value)?;
    Ok((status, dir.finish("vdc", cfg, status_word(status))?))
}

/// Random permutation on `n` states with masses constant on cycles.
fn random_finite_system(rng: &mut ChaCha8Rng, n: usize) -> Result<System, CliError> {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut masses = vec![0.0; n];
    let mut seen = vec![false; n];
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let w: f64 = rng.random_range(0.1..1.0);
        let mut j = start;
        while !seen[j] {
            seen[j] = true;
            masses[j] = w;
            j = perm[j];
        }
    }
    let total: f64 = masses.iter().sum();
    masses.iter_mut().for_each(|m| *m /= total);
    Ok(build_system(&SystemSpec::FinitePermutation {
        masses,
        permutation: perm,
        density: None,
        hopf: None,
    })?)
}

pub fn run_maximal(cfg: &ExperimentConfig, out: &Path) -> Result<(Status, Written), CliError> {
    let mx = cfg
        .maximal
        .as_ref()
        .ok_or_else(|| CliError::Config("missing [maximal] section".into()))?;
    if mx.n_max.is_empty() || mx.max_states == 0 {
        return Err(CliError::Config(
            "maximal.n_max must be nonempty and maximal.max_states positive".into(),
        ));
    }
    let mut cases: Vec<(String, System, Observable, u32, f64)> = Vec::new();

    let swap = build_system(&SystemSpec::FinitePermutation {
        masses: vec![0.5, 0.5],
        permutation: vec![1, 0],
        density: None,
        hopf: None,
    })?;
    cases.push(("swap".into(), swap, Observable::tabulated_real(&[1.0, 0.0]), 1, 0.6));

    if let Some(spec) = &cfg.system {
        let sys = build_system::<f64>(spec)?;
        let g = cfg.require_observable()?;
        for &p in &mx.p {
            for &t in &mx.t {
                cases.push(("configured".into(), sys.clone(), g.clone(), p, t));
            }
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.run.seed);
    for case in 0..mx.random_cases {
        let n = rng.random_range(1..=mx.max_states);
        let sys = random_finite_system(&mut rng, n)?;
        let scale: f64 = rng.random_range(0.1..3.0);
        let g: Vec<Complex64> = (0..n)
            .map(|_| Complex64::new(rng.random_range(-scale..scale), rng.random_range(-scale..scale)))
            .collect();
        let p = rng.random_range(1..=2);
        let t = rng.random_range(0.05..2.0) * scale;
        cases.push((format!("random-{case}"), sys, Observable::Tabulated(g), p, t));
    }

    let mut rows = Vec::new();
    let mut failures = 0usize;
    for (label, sys, g, p, t) in &cases {
        for &n_max in &mx.n_max {
            let r = maximal_check(sys, g, *p, *t, n_max)?;
            if !r.ok {
                failures += 1;
            }
            rows.push(json!({
                "case": label,
                "states": sys.cells().len(),
                "p": p,
                "t": t,
                "n_max": n_max,
                "exceedance_mass": r.exceedance_mass,
                "bound": r.bound,
                "ok": r.ok,
            }));
        }
    }
    let status = if failures == 0 { Status::Pass } else { Status::Violation };
    let value = json!({
        "checks": rows,
        "failures": failures,
        "verdict": if status == Status::Pass { "Hold" } else { "VIOLATION" },
    });
    let mut dir = OutputDir::create(out)?;
    dir.write_json("maximal.json", &value)?;
    Ok((status, dir.finish("maximal", cfg, status_word(status))?))
}
