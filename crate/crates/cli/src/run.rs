use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, ensure, Context, Result};
use pmcw_core::codesign::{codesign, initial_pair};
use pmcw_core::io::{rd_map_to_csv, rd_map_to_pgm, rd_maps_to_pgm, read_code, write_code};
use pmcw_core::{
    cross_correlation, interference_objective, interference_power_db, simulate, threshold_detect, Design64,
    DesignGrid64, DetectionReport, PhaseCode64, RangeDopplerMap64, Scenario64,
};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::config::{Mode, Resolved};

/// Runs `sweep` independent copies of `cfg` (seeds advanced by the run
/// index) and moves the finished output tree into place. Nothing is written
/// to `cfg.out` unless every run succeeds.
pub fn execute(cfg: &Resolved, sweep: usize) -> Result<Vec<String>> {
    ensure!(sweep >= 1, "--sweep must be at least 1");
    let out = &cfg.out;
    if out.exists() {
        let empty = out.is_dir() && fs::read_dir(out)?.next().is_none();
        ensure!(
            empty,
            "output directory {} already exists and is not empty",
            out.display()
        );
    }
    let parent = match out.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    fs::create_dir_all(&parent).with_context(|| format!("cannot create {}", parent.display()))?;
    let stage = tempfile::Builder::new()
        .prefix(".pmcw-stage-")
        .tempdir_in(&parent)
        .with_context(|| format!("cannot create a staging directory in {}", parent.display()))?;

    let lines = if sweep == 1 {
        vec![run_one(cfg, stage.path(), None)?]
    } else {
        let runs: Vec<Result<String>> = (0..sweep)
            .into_par_iter()
            .map(|idx| {
                let run = cfg.with_seed_offset(idx as u64);
                let dir = stage.path().join(format!("run-{idx:03}"));
                fs::create_dir(&dir)?;
                run_one(&run, &dir, Some(idx)).map(|line| format!("run-{idx:03}: {line}"))
            })
            .collect();
        let lines = runs.into_iter().collect::<Result<Vec<_>>>()?;
        write_json(
            &stage.path().join("manifest.json"),
            &json!({
                "tool": "pmcw",
                "version": env!("CARGO_PKG_VERSION"),
                "sweep": sweep,
                "config": cfg,
                "runs": (0..sweep).map(|i| json!({
                    "dir": format!("run-{i:03}"),
                    "seed": cfg.seed().wrapping_add(i as u64),
                    "noise_seed": cfg.noise_seed().wrapping_add(i as u64),
                })).collect::<Vec<_>>(),
            }),
        )?;
        lines
    };

    if out.exists() {
        fs::remove_dir(out)?;
    }
    let staged = stage.keep();
    fs::rename(&staged, out).with_context(|| format!("cannot move results into {}", out.display()))?;
    Ok(lines)
}

fn run_one(cfg: &Resolved, dir: &Path, sweep_index: Option<usize>) -> Result<String> {
    let grid = cfg.design_grid()?;
    let scenario = cfg.scenario()?;
    let line = match cfg.mode {
        Mode::Design => run_design(cfg, &grid, dir)?,
        Mode::Simulate => run_simulate(cfg, &scenario, dir)?,
        Mode::Evaluate => run_evaluate(cfg, &grid, &scenario, dir)?,
        Mode::ReproducePaper => run_reproduce(cfg, &grid, &scenario, dir)?,
    };
    let mut manifest = json!({
        "tool": "pmcw",
        "version": env!("CARGO_PKG_VERSION"),
        "config": cfg,
        "design_grid": grid,
        "seeds": { "init": cfg.seed(), "noise": cfg.noise_seed() },
    });
    if let Some(idx) = sweep_index {
        manifest["sweep_index"] = json!(idx);
    }
    if cfg.mode == Mode::ReproducePaper {
        manifest["defaults"] = json!({
            "max_shift": "K - 1",
            "doppler_extent": cfg.grid.doppler_extent,
            "max_velocity_mps": cfg.grid.max_velocity_mps,
            "improvement_threshold_db": IMPROVEMENT_THRESHOLD_DB,
        });
    }
    write_json(&dir.join("manifest.json"), &manifest)?;
    Ok(line)
}

/// Median objective improvement the acceptance runs require of a design.
const IMPROVEMENT_THRESHOLD_DB: f64 = 10.0;

fn write_json<S: Serialize>(path: &Path, value: &S) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

fn write_text(path: &Path, text: impl AsRef<[u8]>) -> Result<()> {
    fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

fn load_code(path: &Option<PathBuf>, name: &str) -> Result<PhaseCode64> {
    let path = path.as_ref().with_context(|| format!("codes.{name} is not set"))?;
    read_code(path).with_context(|| format!("cannot load code {name} from {}", path.display()))
}

/// Objective trace and unimodularity checks that gate a zero exit status.
fn check_design(d: &Design64) -> Result<()> {
    let j = &d.trace.objective_per_outer;
    let slack = 1e-9 * j[0];
    if let Some(s) = j.windows(2).position(|w| w[1] > w[0] + slack) {
        bail!(
            "objective increased at outer iteration {}: {} -> {}",
            s + 1,
            j[s],
            j[s + 1]
        );
    }
    for (name, code) in [("x", &d.x), ("y", &d.y)] {
        let err = code.max_modulus_error();
        ensure!(err < 1e-9, "code {name} lost unimodularity (max | |z| - 1 | = {err:e})");
    }
    Ok(())
}

fn design(cfg: &Resolved, grid: &DesignGrid64) -> Result<(PhaseCode64, PhaseCode64, Design64, f64)> {
    let (x0, y0) = initial_pair(cfg.grid.chips, cfg.seed())?;
    let start = Instant::now();
    let d = codesign(&x0, &y0, grid, &cfg.solver)?;
    let wall = start.elapsed().as_secs_f64();
    check_design(&d)?;
    Ok((x0, y0, d, wall))
}

fn design_summary(d: &Design64, grid: &DesignGrid64, wall: f64) -> serde_json::Value {
    let t = &d.trace;
    let norm = (grid.point_count() * d.x.len()) as f64;
    let db = |j: f64| if j > 0.0 { Some(10.0 * (j / norm).log10()) } else { None };
    json!({
        "chips": d.x.len(),
        "grid": grid,
        "initial_objective": t.initial_objective,
        "final_objective": t.final_objective,
        "improvement_db": if t.final_objective > 0.0 { Some(t.improvement_db()) } else { None },
        "initial_interference_db": db(t.initial_objective),
        "final_interference_db": db(t.final_objective),
        "outer_iterations": t.outer_iterations(),
        "inner_iterations": t.inner_iteration_counts,
        "converged": t.converged,
        "exact_zero": t.exact_zero,
        "wall_time_s": wall,
    })
}

fn design_line(d: &Design64) -> String {
    let t = &d.trace;
    let gain = if t.final_objective > 0.0 {
        format!("{:.2} dB", t.improvement_db())
    } else {
        "to zero".into()
    };
    format!(
        "design: J {:.6e} -> {:.6e} ({gain}) after {} outer iterations{}",
        t.initial_objective,
        t.final_objective,
        t.outer_iterations(),
        if t.converged { "" } else { ", iteration cap reached" }
    )
}

fn run_design(cfg: &Resolved, grid: &DesignGrid64, dir: &Path) -> Result<String> {
    let (_, _, d, wall) = design(cfg, grid)?;
    write_code(&dir.join("x.code"), &d.x)?;
    write_code(&dir.join("y.code"), &d.y)?;
    write_text(&dir.join("trace.csv"), d.trace.to_csv())?;
    write_json(&dir.join("summary.json"), &design_summary(&d, grid, wall))?;
    Ok(design_line(&d))
}

fn detect(map: &RangeDopplerMap64, scenario: &Scenario64, threshold_db: f64) -> Result<DetectionReport> {
    let report = threshold_detect(map, threshold_db)?;
    Ok(match scenario.expected_target_bins().first() {
        Some(&bins) => report.with_ground_truth(bins),
        None => report,
    })
}

fn write_map(dir: &Path, map: &RangeDopplerMap64, report: &DetectionReport) -> Result<()> {
    write_text(&dir.join("rd_map.csv"), rd_map_to_csv(map))?;
    write_text(&dir.join("rd_map.pgm"), rd_map_to_pgm(map))?;
    write_json(&dir.join("detections.json"), report)
}

fn run_simulate(cfg: &Resolved, scenario: &Scenario64, dir: &Path) -> Result<String> {
    let x = load_code(&cfg.codes.x, "x")?;
    let y = load_code(&cfg.codes.y, "y")?;
    let map = simulate(&x, &y, scenario).context("simulation failed")?;
    let report = detect(&map, scenario, cfg.threshold_db)?;
    write_map(dir, &map, &report)?;
    Ok(format!("simulate: {}", report.summary_line()))
}

/// Largest zero-Doppler periodic autocorrelation sidelobe, dB below the peak.
fn autocorrelation_psl_db(x: &PhaseCode64) -> Result<f64> {
    let len = x.len();
    let mut side: f64 = 0.0;
    for l in 1..len as isize {
        side = side.max(cross_correlation(x, x, l, 0.0)?.norm());
    }
    Ok(20.0 * (side / len as f64).log10())
}

fn run_evaluate(cfg: &Resolved, grid: &DesignGrid64, scenario: &Scenario64, dir: &Path) -> Result<String> {
    let x = load_code(&cfg.codes.x, "x")?;
    let y = load_code(&cfg.codes.y, "y")?;
    let objective = interference_objective(&x, &y, grid)?;
    let power_db = interference_power_db(&x, &y, grid)?;
    let map = simulate(&x, &y, scenario).context("simulation failed")?;
    let report = detect(&map, scenario, cfg.threshold_db)?;
    write_json(
        &dir.join("evaluation.json"),
        &json!({
            "chips": x.len(),
            "grid": grid,
            "objective": objective,
            "interference_power_db": if power_db.is_finite() { Some(power_db) } else { None },
            "x_autocorrelation_psl_db": autocorrelation_psl_db(&x)?,
            "false_alarms": report.false_alarms().len(),
            "target_detected": report.target_detected(),
            "detections": report,
        }),
    )?;
    Ok(format!(
        "evaluate: J {objective:.6e} ({power_db:.2} dB), {}",
        report.summary_line()
    ))
}

fn ridge_peak_db(x: &PhaseCode64, y: &PhaseCode64, scenario: &Scenario64) -> Result<Option<f64>> {
    if scenario.interferer.is_none() {
        return Ok(None);
    }
    let map = simulate(x, y, &scenario.interferer_only().without_noise())?;
    Ok(map.peak().filter(|p| p.2 > 0.0).map(|p| 20.0 * p.2.log10()))
}

fn run_reproduce(cfg: &Resolved, grid: &DesignGrid64, scenario: &Scenario64, dir: &Path) -> Result<String> {
    let (x0, y0, d, wall) = design(cfg, grid)?;
    write_code(&dir.join("x_random.code"), &x0)?;
    write_code(&dir.join("y_random.code"), &y0)?;
    write_code(&dir.join("x_designed.code"), &d.x)?;
    write_code(&dir.join("y_designed.code"), &d.y)?;
    write_text(&dir.join("trace.csv"), d.trace.to_csv())?;
    write_json(&dir.join("summary.json"), &design_summary(&d, grid, wall))?;

    let target_peak = simulate(&x0, &x0, &scenario.targets_only().without_noise())?
        .peak()
        .filter(|p| p.2 > 0.0)
        .map(|p| 20.0 * p.2.log10());
    let mut maps = Vec::new();
    let mut cases = serde_json::Map::new();
    for (name, x, y) in [("random", &x0, &y0), ("designed", &d.x, &d.y)] {
        let map = simulate(x, y, scenario)?;
        let report = detect(&map, scenario, cfg.threshold_db)?;
        let sub = dir.join(name);
        fs::create_dir(&sub)?;
        write_map(&sub, &map, &report)?;
        let ridge = ridge_peak_db(x, y, scenario)?;
        cases.insert(
            name.into(),
            json!({
                "objective": interference_objective(x, y, grid)?,
                "interference_ridge_peak_db": ridge,
                "ridge_relative_to_target_db": ridge.zip(target_peak).map(|(r, t)| r - t),
                "x_autocorrelation_psl_db": autocorrelation_psl_db(x)?,
                "detections": report.detections.len(),
                "false_alarms": report.false_alarms().len(),
                "target_detected": report.target_detected(),
            }),
        );
        maps.push(map);
    }
    write_text(&dir.join("side_by_side.pgm"), rd_maps_to_pgm(&[&maps[0], &maps[1]]))?;

    let ridge = |name: &str| cases[name]["interference_ridge_peak_db"].as_f64();
    let below = match (ridge("designed"), ridge("random")) {
        (Some(a), Some(b)) => Some(a < b),
        (None, Some(_)) => Some(true),
        _ => None,
    };
    let comparison = json!({
        "chips": cfg.grid.chips,
        "bursts": scenario.timing.bursts,
        "threshold_db": cfg.threshold_db,
        "target_bins": scenario.expected_target_bins(),
        "target_peak_db": target_peak,
        "improvement_db": if d.trace.final_objective > 0.0 { Some(d.trace.improvement_db()) } else { None },
        "designed_ridge_below_random": below,
        "random": cases["random"],
        "designed": cases["designed"],
    });
    write_json(&dir.join("comparison.json"), &comparison)?;

    let fmt_db = |v: Option<f64>| v.map_or("none".to_string(), |v| format!("{v:.2} dB"));
    Ok(format!(
        "reproduce-paper: {}; interference ridge peak random {} vs designed {}; false alarms random {} vs designed {}",
        design_line(&d),
        fmt_db(ridge("random")),
        fmt_db(ridge("designed")),
        cases["random"]["false_alarms"],
        cases["designed"]["false_alarms"],
    ))
}
