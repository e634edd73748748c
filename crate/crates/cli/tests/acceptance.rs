//! Acceptance suite: one line per criterion, nonzero exit if any fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::Command as Process;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wwlab::analysis::{egorov_estimate, maximal_check, table_deviation, vdc_check, zero_input, VdcVerdict};
use wwlab::averages::{average_table, character_closed_form, modulus_averages, CheckpointSchedule};
use wwlab::scalar::turn;
use wwlab::spectral::{
    atom_scan, correlation, hermitian_form, positive_definite_check, twisted_mean_norm, wiener_statistic,
};
use wwlab::system::{build_system, rmu_split, Cell, Coord, SystemSpec};
use wwlab::weights::{character_grid, Perturbation, TrigTerm, WeightSequence};
use wwlab::{AverageTable, Observable, StatePoint, System, VdcInput};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn single_threaded<T: Send>(f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap()
        .install(f)
}

fn golden() -> f64 {
    0.5 * (5f64.sqrt() - 1.0)
}

fn rotation(resolution: usize) -> System {
    build_system(&SystemSpec::CircleRotation {
        alpha: golden(),
        resolution,
        hopf: None,
    })
    .unwrap()
}

fn cyclic(n: usize) -> System {
    build_system(&SystemSpec::Cyclic {
        n,
        density: None,
        hopf: None,
    })
    .unwrap()
}

fn all_cells(sys: &System) -> (Vec<(usize, StatePoint)>, Vec<f64>) {
    sys.cells()
        .into_iter()
        .enumerate()
        .map(|(id, c)| ((id, sys.cell_point(&c).unwrap()), sys.cell_mass(&c).unwrap()))
        .unzip()
}

fn dyadic_plus(top: usize) -> CheckpointSchedule {
    let mut pts: Vec<usize> = std::iter::successors(Some(1usize), |n| Some(n * 2))
        .take_while(|&n| n < top)
        .collect();
    pts.extend((1..=20).map(|j| j * top / 20));
    pts.sort_unstable();
    pts.dedup();
    CheckpointSchedule::Explicit { points: pts }
}

fn real(p: &StatePoint) -> f64 {
    match p.coord {
        Coord::Real(x) => x,
        Coord::Index(_) => unreachable!(),
    }
}

fn c1_geometric_oracle() -> Outcome {
    let alpha = golden();
    let sys = rotation(8);
    let (points, _) = all_cells(&sys);
    let mut weights = character_grid(64);
    let resonant = 1.0 - alpha;
    weights.push(WeightSequence::Character(resonant));
    let schedule = dyadic_plus(100_000);
    let start = Instant::now();
    let table = single_threaded(|| average_table(&sys, &points, &Observable::Character(1), &weights, &schedule))
        .map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let mut worst = 0f64;
    let mut count = 0;
    for (w, weight) in weights.iter().enumerate() {
        let WeightSequence::Character(theta) = weight else {
            unreachable!()
        };
        for (p, pt) in points.iter().enumerate() {
            for (c, &n) in table.checkpoints.iter().enumerate() {
                let oracle = character_closed_form(alpha, *theta, real(&pt.1), 1, n);
                worst = worst.max((table.get(w, p, c) - oracle).norm());
                count += 1;
            }
        }
    }
    ensure(worst <= 1e-10, || format!("max error {worst:.3e} > 1e-10"))?;
    ensure(elapsed < Duration::from_secs(30), || format!("took {elapsed:?}"))?;
    Ok(format!(
        "{count} entries, max error {worst:.2e}, {:.1}s single-threaded",
        elapsed.as_secs_f64()
    ))
}

fn random_vdc(rng: &mut ChaCha8Rng) -> VdcInput {
    let n = rng.random_range(1..=256);
    let m = rng.random_range(0..n);
    let values = (0..n)
        .map(|_| (0..8).map(|_| turn(rng.random::<f64>())).collect())
        .collect();
    VdcInput {
        values,
        masses: vec![0.125; 8],
        m,
    }
}

fn c2_van_der_corput() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut violations = 0;
    for _ in 0..200 {
        if let VdcVerdict::Violation { .. } = vdc_check(&random_vdc(&mut rng)).map_err(|e| e.to_string())? {
            violations += 1;
        }
    }
    let degenerate = vdc_check(&zero_input::<f64>(16, 8, 3)).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    ensure(violations == 0, || format!("{violations} violations"))?;
    ensure(degenerate == VdcVerdict::DegenerateEquality, || {
        format!("zero input gave {degenerate:?}")
    })?;
    ensure(elapsed < Duration::from_secs(10), || format!("took {elapsed:?}"))?;
    Ok(format!(
        "200 cases, 0 violations, zero input degenerate, {:.2}s",
        elapsed.as_secs_f64()
    ))
}

fn c3_spectral_atoms() -> Outcome {
    let n = 8000;
    let g = correlation(&cyclic(8), &Observable::DeltaState(0), n).map_err(|e| e.to_string())?;
    // brute force: walk all 8 states l steps and sum μ·f̄(x)·f(T^l x)
    let mut worst = 0f64;
    for l in 0..=n {
        let mut s = 0.0;
        for x in 0..8usize {
            let fx = if x == 0 { 1.0 } else { 0.0 };
            let fy = if (x + l) % 8 == 0 { 1.0 } else { 0.0 };
            s += 0.125 * fx * fy;
        }
        worst = worst.max((g.at(l as i64) - Complex64::new(s, 0.0)).norm());
    }
    ensure(worst <= 1e-12, || format!("γ error {worst:.3e}"))?;
    let thetas: Vec<f64> = (0..8).map(|j| j as f64 / 8.0).collect();
    let atoms = atom_scan(&g, &thetas, n).map_err(|e| e.to_string())?;
    let atom_err = atoms
        .iter()
        .map(|a| (a - Complex64::new(1.0 / 64.0, 0.0)).norm())
        .fold(0.0, f64::max);
    ensure(atom_err <= 1e-3, || format!("atom error {atom_err:.3e}"))?;
    let w = wiener_statistic(&g, n - 1).map_err(|e| e.to_string())?;
    ensure((w - 1.0 / 512.0).abs() <= 1e-4, || format!("W = {w}"))?;
    Ok(format!("γ err {worst:.1e}, atom err {atom_err:.1e}, W_7999 = {w:.6}"))
}

fn c4_spectral_continuity() -> Outcome {
    let sys: System = build_system(&SystemSpec::DoublingMap {
        resolution: 1 << 16,
        hopf: None,
    })
    .unwrap();
    let g = correlation(&sys, &Observable::Character(1), 12).map_err(|e| e.to_string())?;
    let worst = (1..=12).map(|l| g.at(l).norm()).fold(0.0, f64::max);
    ensure(worst <= 1e-10, || format!("max |γ(l)| = {worst:.3e}"))?;
    let w = wiener_statistic(&g, 12).map_err(|e| e.to_string())?;
    ensure(w <= 1e-12, || format!("W_12 = {w:.3e}"))?;
    let t = twisted_mean_norm(&sys, &Observable::Character(1), 0.3, 4).map_err(|e| e.to_string())?;
    ensure((t - 0.5).abs() <= 1e-10, || format!("twisted norm {t}"))?;
    Ok(format!("max |γ(l)| {worst:.1e}, W_12 {w:.1e}, twisted {t:.12}"))
}

fn c5_positive_definite() -> Outcome {
    let sys = cyclic(8);
    let f = Observable::DeltaState(0);
    let g = correlation(&sys, &f, 32).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut min = f64::INFINITY;
    let mut worst_gap = 0f64;
    for trial in 0..100u64 {
        let m = rng.random_range(0..=32usize);
        let z: Vec<Complex64> = (0..=m)
            .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        let form = hermitian_form(&g, &z).map_err(|e| e.to_string())?;
        // the form equals ‖Σ z_i f∘T^i‖² computed state by state
        let direct: f64 = (0..8usize)
            .map(|x| {
                let v: Complex64 = z
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| (x + i) % 8 == 0)
                    .map(|(_, zi)| *zi)
                    .sum();
                0.125 * v.norm_sqr()
            })
            .sum();
        worst_gap = worst_gap.max((form - direct).abs());
        min = min
            .min(form)
            .min(positive_definite_check(&g, m, 1, trial).map_err(|e| e.to_string())?);
    }
    ensure(min >= -1e-10, || format!("min form {min:.3e}"))?;
    ensure(worst_gap <= 1e-12, || format!("form vs direct norm {worst_gap:.3e}"))?;
    Ok(format!(
        "min form {min:.3e}, form vs ‖Σ z_i U^i f‖² gap {worst_gap:.1e}"
    ))
}

fn random_finite(rng: &mut ChaCha8Rng, n: usize) -> (System, Vec<usize>, Vec<f64>) {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut masses = vec![0.0; n];
    let mut seen = vec![false; n];
    for s in 0..n {
        let w: f64 = rng.random_range(0.1..1.0);
        let mut j = s;
        while !seen[j] {
            seen[j] = true;
            masses[j] = w;
            j = perm[j];
        }
    }
    let total: f64 = masses.iter().sum();
    masses.iter_mut().for_each(|m| *m /= total);
    let sys = build_system(&SystemSpec::FinitePermutation {
        masses: masses.clone(),
        permutation: perm.clone(),
        density: None,
        hopf: None,
    })
    .unwrap();
    (sys, perm, masses)
}

fn c6_maximal() -> Outcome {
    let swap: System = build_system(&SystemSpec::FinitePermutation {
        masses: vec![0.5, 0.5],
        permutation: vec![1, 0],
        density: None,
        hopf: None,
    })
    .unwrap();
    let r = maximal_check(&swap, &Observable::tabulated_real(&[1.0, 0.0]), 1, 0.6, 2).map_err(|e| e.to_string())?;
    ensure(
        r.exceedance_mass == 0.5 && (r.bound - 5.0 / 3.0).abs() < 1e-15 && r.ok,
        || format!("swap case {r:?}"),
    )?;

    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut checks = 0;
    for _ in 0..100 {
        let n = rng.random_range(1..=64);
        let (sys, perm, masses) = random_finite(&mut rng, n);
        let g: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let p = rng.random_range(1..=2u32);
        let t = rng.random_range(0.05..1.5);
        let obs = Observable::tabulated_real(&g);
        for n_max in [8, 64, 512] {
            let r = maximal_check(&sys, &obs, p, t, n_max).map_err(|e| e.to_string())?;
            let mut exceed = 0.0;
            for x in 0..n {
                let (mut s, mut y, mut sup) = (0.0, x, f64::NEG_INFINITY);
                for k in 1..=n_max {
                    s += g[y].abs();
                    sup = sup.max(s / k as f64);
                    y = perm[y];
                }
                if sup > t {
                    exceed += masses[x];
                }
            }
            let norm = masses
                .iter()
                .zip(&g)
                .map(|(m, v)| m * v.abs().powi(p as i32))
                .sum::<f64>()
                .powf(1.0 / p as f64);
            let bound = (2.0 * norm / t).powi(p as i32);
            ensure((r.exceedance_mass - exceed).abs() <= 1e-12, || {
                format!("exceedance {} vs enumeration {exceed}", r.exceedance_mass)
            })?;
            ensure((r.bound - bound).abs() <= 1e-12 * bound.max(1.0), || {
                format!("bound {} vs {bound}", r.bound)
            })?;
            ensure(r.ok && exceed <= bound, || {
                format!("maximal inequality fails: {exceed} > {bound}")
            })?;
            checks += 1;
        }
    }
    Ok(format!("swap 1/2 ≤ 5/3, {checks} random checks hold"))
}

fn c7_dissipative() -> Outcome {
    let sys: System = build_system(&SystemSpec::IntegerShift { window: 16, hopf: None }).unwrap();
    let (points, masses) = all_cells(&sys);
    let mut weights = character_grid(16);
    weights.push(WeightSequence::Character(golden()));
    weights.push(WeightSequence::Character(std::f64::consts::FRAC_1_SQRT_2));
    let table = average_table(
        &sys,
        &points,
        &Observable::DeltaState(0),
        &weights,
        &CheckpointSchedule::Dyadic { n_max: 1 << 12 },
    )
    .map_err(|e| e.to_string())?;
    let mut worst = 0f64;
    for w in 0..table.n_weights() {
        for p in 0..table.n_points() {
            for (c, &n) in table.checkpoints.iter().enumerate() {
                // one visit contributes λ^k/n, and |λ^k| is 1 up to rounding
                worst = worst.max(table.get(w, p, c).norm() * n as f64);
            }
        }
    }
    ensure(worst <= 1.0 + 1e-15, || format!("max n·|M_n| = {worst}"))?;
    for n_start in [2usize, 8, 64, 512] {
        let delta = 2.0 / n_start as f64;
        let r = egorov_estimate(&table, &masses, delta, n_start).map_err(|e| e.to_string())?;
        ensure(r.removed_mass == 0.0, || {
            format!("N = {n_start}: removed {}", r.removed_mass)
        })?;
    }
    Ok(format!("max n·|M_n| = {worst}, no removal for δ = 2/N"))
}

fn c8_boole() -> Outcome {
    let start = Instant::now();
    let n = 1_000_000;
    let below = (0..100u64)
        .map(|seed| {
            let sys: System = build_system(&SystemSpec::BooleMap {
                count: 1,
                range: 10.0,
                seed,
                hopf: None,
            })
            .unwrap();
            let p = sys.cell_point(&Cell { part: 0, index: 0 }).unwrap();
            let m = modulus_averages(
                &sys,
                p,
                &Observable::RationalDecay,
                &CheckpointSchedule::Explicit { points: vec![n] },
            )
            .map_err(|e| e.to_string())?;
            Ok(m[0].1)
        })
        .collect::<Result<Vec<f64>, String>>()?;
    let elapsed = start.elapsed();
    let pass = below.iter().filter(|&&v| v < 0.05).count();
    let max = below.iter().cloned().fold(0.0, f64::max);
    ensure(pass >= 95, || format!("only {pass}/100 below 0.05"))?;
    ensure(elapsed < Duration::from_secs(120), || format!("took {elapsed:?}"))?;
    Ok(format!(
        "{pass}/100 seeds below 0.05 (max {max:.2e}), {:.1}s",
        elapsed.as_secs_f64()
    ))
}

fn c9_besicovitch() -> Outcome {
    let sys = rotation(64);
    let (points, _) = all_cells(&sys);
    let base = vec![
        TrigTerm {
            coeff: Complex64::new(0.6, 0.0),
            theta: 0.1,
        },
        TrigTerm {
            coeff: Complex64::new(0.0, -0.3),
            theta: 1.0 - golden(),
        },
        TrigTerm {
            coeff: Complex64::new(0.1, 0.1),
            theta: 0.75,
        },
    ];
    let b = WeightSequence::Besicovitch {
        base,
        perturbation: Perturbation::PowerDecay { c: 1.0, s: 1.0 },
    };
    let weights = vec![b.clone(), b.base_polynomial()];
    let table = average_table(
        &sys,
        &points,
        &Observable::Character(1),
        &weights,
        &dyadic_plus(100_000),
    )
    .map_err(|e| e.to_string())?;
    let mut worst_slack = f64::INFINITY;
    for (c, &n) in table.checkpoints.iter().enumerate() {
        let diff = (0..table.n_points())
            .map(|p| (table.get(0, p, c) - table.get(1, p, c)).norm())
            .fold(0.0, f64::max);
        let bound = (1.0 + (n as f64).ln()) / n as f64;
        ensure(diff <= bound + 1e-12, || format!("n = {n}: {diff:.3e} > {bound:.3e}"))?;
        worst_slack = worst_slack.min(bound - diff);
    }
    Ok(format!(
        "{} checkpoints, min slack {worst_slack:.2e}",
        table.checkpoints.len()
    ))
}

fn c10_rmu_pipeline() -> Outcome {
    let sys: System = build_system(&SystemSpec::DisjointUnion {
        parts: vec![
            SystemSpec::Cyclic {
                n: 8,
                density: None,
                hopf: None,
            },
            SystemSpec::IntegerShift { window: 20, hopf: None },
        ],
    })
    .unwrap();
    let f = Observable::RationalDecay;
    let delta = 0.3;
    let split = rmu_split(&sys, &f, delta / 3.0).map_err(|e| e.to_string())?;
    ensure(split.h_sup <= delta / 3.0, || format!("‖h‖∞ = {}", split.h_sup))?;
    let (points, _) = all_cells(&sys);
    for (_, p) in &points {
        let (a, b, c) = (f.eval(&p.coord), split.g.eval(&p.coord), split.h.eval(&p.coord));
        ensure(a == b + c, || format!("f ≠ g + h at {p:?}"))?;
    }
    let weights = character_grid(8);
    let schedule = CheckpointSchedule::Dyadic { n_max: 1 << 12 };
    let tf = average_table(&sys, &points, &f, &weights, &schedule).map_err(|e| e.to_string())?;
    let tg = average_table(&sys, &points, &split.g, &weights, &schedule).map_err(|e| e.to_string())?;
    let mut worst = f64::NEG_INFINITY;
    for w in 0..weights.len() {
        for &n in &tf.checkpoints[..tf.checkpoints.len() - 1] {
            let df = table_deviation(&tf, w, n).map_err(|e| e.to_string())?;
            let dg = table_deviation(&tg, w, n).map_err(|e| e.to_string())?;
            worst = worst.max(df - dg - 2.0 * split.h_sup);
        }
    }
    ensure(worst <= 1e-12, || format!("deviation excess over 2‖h‖∞: {worst:.3e}"))?;
    Ok(format!(
        "split exact, ‖h‖∞ = {:.4}, max excess over 2‖h‖∞ {worst:.3e}",
        split.h_sup
    ))
}

fn monotone(table: &AverageTable, masses: &[f64], starts: &[usize]) -> Result<(), String> {
    let deltas = [0.2, 0.1, 0.05, 0.02];
    let mut by_start = Vec::new();
    for &n in starts {
        let removed: Vec<f64> = deltas
            .iter()
            .map(|&d| egorov_estimate(table, masses, d, n).map(|r| r.removed_mass))
            .collect::<Result<_, _>>()
            .map_err(|e| e.to_string())?;
        ensure(removed.windows(2).all(|w| w[0] <= w[1]), || {
            format!("N = {n}: not monotone in δ: {removed:?}")
        })?;
        by_start.push(removed);
    }
    for k in 0..deltas.len() {
        ensure(by_start.windows(2).all(|w| w[1][k] <= w[0][k]), || {
            format!("δ = {}: not monotone in N", deltas[k])
        })?;
    }
    Ok(())
}

fn c11_egorov_monotone() -> Outcome {
    let sys = cyclic(8);
    let (points, masses) = all_cells(&sys);
    let t8 = average_table(
        &sys,
        &points,
        &Observable::DeltaState(0),
        &character_grid(16),
        &CheckpointSchedule::Dyadic { n_max: 1 << 12 },
    )
    .map_err(|e| e.to_string())?;
    monotone(&t8, &masses, &[1, 2, 4, 8, 16, 32, 64, 128, 256, 512, 1024, 2048])?;

    let sys = rotation(64);
    let (points, masses) = all_cells(&sys);
    let mut weights = character_grid(16);
    weights.push(WeightSequence::Character(1.0 - golden()));
    let tr = average_table(
        &sys,
        &points,
        &Observable::Character(1),
        &weights,
        &CheckpointSchedule::Dyadic { n_max: 1 << 14 },
    )
    .map_err(|e| e.to_string())?;
    monotone(&tr, &masses, &[1, 4, 16, 64, 256, 1024, 4096, 8192])?;
    Ok("cyclic-8 and rotation tables monotone in δ and N".into())
}

fn subcommand_for(path: &Path) -> &'static str {
    let text = std::fs::read_to_string(path).unwrap();
    let has = |s: &str| text.lines().any(|l| l.trim() == s);
    if has("[egorov]") {
        "egorov"
    } else if has("[spectral]") {
        "spectral"
    } else if has("[vdc]") {
        "vdc"
    } else if has("[maximal]") {
        "maximal"
    } else {
        "simulate"
    }
}

fn run_once(cmd: &str, config: &Path, out: &Path) -> Result<Vec<(String, Vec<u8>)>, String> {
    let status = Process::new(env!("CARGO_BIN_EXE_wwlab"))
        .args([cmd, "--config"])
        .arg(config)
        .arg("--out")
        .arg(out)
        .output()
        .map_err(|e| e.to_string())?;
    ensure(status.status.success(), || {
        format!(
            "{} exited {:?}: {}",
            config.display(),
            status.status.code(),
            String::from_utf8_lossy(&status.stderr)
        )
    })?;
    let mut files: Vec<(String, Vec<u8>)> = std::fs::read_dir(out)
        .map_err(|e| e.to_string())?
        .map(|e| {
            let e = e.unwrap();
            (
                e.file_name().to_string_lossy().into_owned(),
                std::fs::read(e.path()).unwrap(),
            )
        })
        .collect();
    files.sort();
    Ok(files)
}

fn c12_determinism() -> Outcome {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let mut configs: Vec<PathBuf> = std::fs::read_dir(&dir)
        .map_err(|e| e.to_string())?
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "toml"))
        .collect();
    configs.sort();
    ensure(!configs.is_empty(), || "no shipped configs".into())?;
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut files = 0;
    for (i, cfg) in configs.iter().enumerate() {
        let cmd = subcommand_for(cfg);
        let a = run_once(cmd, cfg, &tmp.path().join(format!("{i}a")))?;
        let b = run_once(cmd, cfg, &tmp.path().join(format!("{i}b")))?;
        ensure(a == b, || format!("{} differs between runs", cfg.display()))?;
        files += a.len();
    }
    Ok(format!(
        "{} configs, {files} files byte-identical across reruns",
        configs.len()
    ))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("geometric oracle", c1_geometric_oracle),
        ("Van der Corput suite", c2_van_der_corput),
        ("spectral atom oracle", c3_spectral_atoms),
        ("spectral continuity oracle", c4_spectral_continuity),
        ("positive-definiteness", c5_positive_definite),
        ("maximal inequality suite", c6_maximal),
        ("dissipative decay", c7_dissipative),
        ("conservative-null decay", c8_boole),
        ("Besicovitch deviation", c9_besicovitch),
        ("R_mu pipeline", c10_rmu_pipeline),
        ("Egorov monotonicity", c11_egorov_monotone),
        ("determinism", c12_determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or(p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default())
        });
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
