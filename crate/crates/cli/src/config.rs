use std::fmt;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::ValueEnum;
use num_complex::Complex;
use pmcw_core::sim::{interferer_amplitude, target_amplitude, InterfererParams, TargetParams, WaveformTiming};
use pmcw_core::{DesignGrid64, Scenario64, SolverConfig64};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Design,
    Simulate,
    Evaluate,
    ReproducePaper,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Design => "design",
            Mode::Simulate => "simulate",
            Mode::Evaluate => "evaluate",
            Mode::ReproducePaper => "reproduce-paper",
        })
    }
}

/// Invalid configuration value, named by its dotted path in the config file.
#[derive(Debug)]
pub struct FieldError {
    pub field: String,
    pub reason: String,
}

impl fmt::Display for FieldError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid config field `{}`: {}", self.field, self.reason)
    }
}

impl std::error::Error for FieldError {}

fn field_err(field: impl Into<String>, reason: impl Into<String>) -> anyhow::Error {
    FieldError {
        field: field.into(),
        reason: reason.into(),
    }
    .into()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridConfig {
    /// Code length `K`.
    pub chips: usize,
    /// Largest shift `L`; `K − 1` when absent.
    pub max_shift: Option<usize>,
    /// Doppler points on each side of zero, `P`.
    pub doppler_extent: usize,
    /// Spacing in cycles per chip. Mutually exclusive with `max_velocity_mps`.
    pub doppler_spacing: Option<f64>,
    /// Derive the spacing from a maximum relative speed; 70 m/s when neither
    /// this nor `doppler_spacing` is given.
    pub max_velocity_mps: Option<f64>,
}

const DEFAULT_MAX_VELOCITY_MPS: f64 = 70.0;

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            chips: 50,
            max_shift: None,
            doppler_extent: 4,
            doppler_spacing: None,
            max_velocity_mps: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TargetConfig {
    pub range_m: f64,
    pub velocity_mps: f64,
    /// Echo amplitude `√σ / R²` from this cross-section.
    #[serde(default = "default_rcs")]
    pub rcs_dbsm: f64,
    /// Explicit complex amplitude `[re, im]`; overrides `rcs_dbsm`.
    #[serde(default)]
    pub amplitude: Option<[f64; 2]>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InterfererConfig {
    pub separation_m: f64,
    pub velocity_mps: f64,
    /// Interference amplitude `√σ / R_I` from this cross-section.
    #[serde(default = "default_rcs")]
    pub rcs_dbsm: f64,
    #[serde(default)]
    pub amplitude: Option<[f64; 2]>,
}

fn default_rcs() -> f64 {
    35.0
}

/// Scene description. `K` comes from `grid.chips`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioConfig {
    pub carrier_hz: f64,
    pub chip_s: f64,
    pub bursts: usize,
    /// Burst repetition interval; `K · chip_s` when absent.
    pub pri_s: Option<f64>,
    pub noise_variance: f64,
    pub noise_seed: u64,
    pub targets: Vec<TargetConfig>,
    pub interferer: Option<InterfererConfig>,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            carrier_hz: 79e9,
            chip_s: 6.66e-9,
            bursts: 140,
            pri_s: None,
            noise_variance: 1e-2,
            noise_seed: 0,
            targets: Vec::new(),
            interferer: None,
        }
    }
}

impl ScenarioConfig {
    /// Target at 20 m closing at 30 m/s, interferer at 200 m receding at
    /// 20 m/s.
    pub fn two_vehicle() -> Self {
        Self {
            targets: vec![TargetConfig {
                range_m: 20.0,
                velocity_mps: 30.0,
                rcs_dbsm: 35.0,
                amplitude: None,
            }],
            interferer: Some(InterfererConfig {
                separation_m: 200.0,
                velocity_mps: -20.0,
                rcs_dbsm: 35.0,
                amplitude: None,
            }),
            ..Self::default()
        }
    }

    pub fn to_scenario(&self, chips: usize) -> Result<Scenario64> {
        let timing = match self.pri_s {
            Some(pri) => WaveformTiming::with_pri(self.carrier_hz, self.chip_s, chips, self.bursts, pri),
            None => WaveformTiming::new(self.carrier_hz, self.chip_s, chips, self.bursts),
        }
        .map_err(|e| scoped("scenario", e))?;
        let amp = |explicit: Option<[f64; 2]>, fallback: f64| match explicit {
            Some([re, im]) => Complex::new(re, im),
            None => Complex::new(fallback, 0.0),
        };
        let scenario = Scenario64 {
            timing,
            targets: self
                .targets
                .iter()
                .map(|t| TargetParams {
                    range_m: t.range_m,
                    velocity_mps: t.velocity_mps,
                    amplitude: amp(t.amplitude, target_amplitude(t.rcs_dbsm, t.range_m)),
                })
                .collect(),
            interferer: self.interferer.as_ref().map(|i| InterfererParams {
                separation_m: i.separation_m,
                velocity_mps: i.velocity_mps,
                amplitude: amp(i.amplitude, interferer_amplitude(i.rcs_dbsm, i.separation_m)),
            }),
            noise_variance: self.noise_variance,
            noise_seed: self.noise_seed,
        };
        scenario.validate().map_err(|e| scoped("scenario", e))?;
        for (idx, t) in scenario.targets.iter().enumerate() {
            if !t.amplitude.norm().is_finite() {
                bail!(field_err(format!("scenario.targets[{idx}]"), "amplitude is not finite"));
            }
        }
        if let Some(i) = &scenario.interferer {
            if !i.amplitude.norm().is_finite() {
                bail!(field_err("scenario.interferer", "amplitude is not finite"));
            }
        }
        Ok(scenario)
    }
}

fn scoped(prefix: &str, err: pmcw_core::Error) -> anyhow::Error {
    match err {
        pmcw_core::Error::InvalidConfig { field, reason } => field_err(format!("{prefix}.{field}"), reason),
        other => anyhow::Error::new(other).context(format!("invalid `{prefix}`")),
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CodePaths {
    pub x: Option<PathBuf>,
    pub y: Option<PathBuf>,
}

/// Contents of a `--config` file. Every field has a default, so an empty
/// file is a valid `design` or `reproduce-paper` configuration.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub mode: Option<Mode>,
    pub out: Option<PathBuf>,
    /// Relative detection threshold (dB below the map peak).
    pub threshold_db: f64,
    pub grid: GridConfig,
    pub solver: SolverConfig64,
    /// Scene file, resolved against the config file's directory.
    pub scenario_path: Option<PathBuf>,
    /// Inline scene; the two-vehicle scene when neither this nor
    /// `scenario_path` is given.
    pub scenario: Option<ScenarioConfig>,
    /// Code files for `simulate` and `evaluate`.
    pub codes: CodePaths,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            mode: None,
            out: None,
            threshold_db: -20.0,
            grid: GridConfig::default(),
            solver: SolverConfig64::default(),
            scenario_path: None,
            scenario: None,
            codes: CodePaths::default(),
        }
    }
}

/// Parses a TOML or JSON config. A JSON manifest written by a previous run is
/// accepted too; its `config` entry is used.
pub fn parse_config(text: &str, path: &Path) -> Result<RunConfig> {
    let is_json = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"));
    if is_json {
        let mut value: serde_json::Value =
            serde_json::from_str(text).with_context(|| format!("malformed config {}", path.display()))?;
        if value.get("tool").and_then(|t| t.as_str()) == Some("pmcw") {
            value = value.get_mut("config").map(std::mem::take).unwrap_or_default();
        }
        serde_json::from_value(value).with_context(|| format!("malformed config {}", path.display()))
    } else {
        toml::from_str(text).with_context(|| format!("malformed config {}", path.display()))
    }
}

fn load_scenario(path: &Path) -> Result<ScenarioConfig> {
    let text = std::fs::read_to_string(path).with_context(|| format!("cannot read scenario {}", path.display()))?;
    if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json")) {
        serde_json::from_str(&text).with_context(|| format!("malformed scenario {}", path.display()))
    } else {
        toml::from_str(&text).with_context(|| format!("malformed scenario {}", path.display()))
    }
}

/// Command-line overrides applied on top of the file.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub mode: Option<Mode>,
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub noise_seed: Option<u64>,
    pub threshold_db: Option<f64>,
}

/// Fully resolved, validated run description. Serialised into every
/// `manifest.json`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Resolved {
    pub mode: Mode,
    pub out: PathBuf,
    pub threshold_db: f64,
    pub grid: GridConfig,
    pub solver: SolverConfig64,
    pub scenario: ScenarioConfig,
    pub codes: CodePaths,
}

impl Resolved {
    pub fn design_grid(&self) -> Result<DesignGrid64> {
        let g = &self.grid;
        let max_shift = g.max_shift.unwrap_or(g.chips - 1);
        let grid = match (g.doppler_spacing, g.max_velocity_mps) {
            (Some(spacing), None) => DesignGrid64::new(max_shift, g.doppler_extent, spacing),
            (None, Some(v)) => DesignGrid64::for_max_velocity(
                max_shift,
                g.doppler_extent,
                v,
                self.scenario.carrier_hz,
                self.scenario.chip_s,
            ),
            _ => unreachable!("resolve leaves exactly one spacing source"),
        };
        grid.map_err(|e| field_err("grid", e.to_string()))
    }

    pub fn scenario(&self) -> Result<Scenario64> {
        self.scenario.to_scenario(self.grid.chips)
    }

    pub fn seed(&self) -> u64 {
        self.solver.seed
    }

    pub fn noise_seed(&self) -> u64 {
        self.scenario.noise_seed
    }

    /// Same run with both seeds advanced by `offset`.
    pub fn with_seed_offset(&self, offset: u64) -> Self {
        let mut next = self.clone();
        next.solver.seed = self.solver.seed.wrapping_add(offset);
        next.scenario.noise_seed = self.scenario.noise_seed.wrapping_add(offset);
        next
    }
}

/// Merges file and flags, fills defaults and checks every field before any
/// computation starts.
pub fn resolve(file: RunConfig, base_dir: &Path, over: &Overrides) -> Result<Resolved> {
    let mode = over
        .mode
        .or(file.mode)
        .ok_or_else(|| field_err("mode", "not set; pass --mode or set `mode` in the config"))?;
    let out = over
        .out
        .clone()
        .or(file.out.map(|p| base_dir.join(p)))
        .ok_or_else(|| field_err("out", "not set; pass --out or set `out` in the config"))?;

    let mut grid = file.grid;
    let mut scenario = match (file.scenario, file.scenario_path) {
        (Some(_), Some(_)) => bail!(field_err(
            "scenario_path",
            "give either `scenario_path` or `[scenario]`, not both"
        )),
        (Some(s), None) => s,
        (None, Some(p)) => load_scenario(&base_dir.join(p))?,
        (None, None) => ScenarioConfig::two_vehicle(),
    };
    if mode == Mode::ReproducePaper {
        scenario = ScenarioConfig {
            noise_seed: scenario.noise_seed,
            ..ScenarioConfig::two_vehicle()
        };
        if grid.max_shift.is_some_and(|l| l + 1 != grid.chips) {
            bail!(field_err("grid.max_shift", "reproduce-paper always uses L = K - 1"));
        }
    }

    let mut solver = file.solver;
    if let Some(seed) = over.seed {
        solver.seed = seed;
    }
    if let Some(seed) = over.noise_seed {
        scenario.noise_seed = seed;
    }
    let threshold_db = over.threshold_db.unwrap_or(file.threshold_db);

    if grid.chips < 2 {
        bail!(field_err(
            "grid.chips",
            format!("need at least 2 chips, got {}", grid.chips)
        ));
    }
    if let Some(l) = grid.max_shift {
        if l >= grid.chips {
            bail!(field_err(
                "grid.max_shift",
                format!("must be below grid.chips = {}, got {l}", grid.chips)
            ));
        }
    }
    if grid.doppler_spacing.is_some() && grid.max_velocity_mps.is_some() {
        bail!(field_err(
            "grid.doppler_spacing",
            "give either `doppler_spacing` or `max_velocity_mps`, not both"
        ));
    }
    if let Some(v) = grid.max_velocity_mps {
        if !(v >= 0.0 && v.is_finite()) {
            bail!(field_err(
                "grid.max_velocity_mps",
                format!("must be finite and >= 0, got {v}")
            ));
        }
    }
    if grid.max_shift.is_none() {
        grid.max_shift = Some(grid.chips - 1);
    }
    if grid.doppler_spacing.is_none() && grid.max_velocity_mps.is_none() {
        grid.max_velocity_mps = Some(DEFAULT_MAX_VELOCITY_MPS);
    }
    solver.validate().map_err(|e| scoped("solver", e))?;
    if !(threshold_db < 0.0 && threshold_db.is_finite()) {
        bail!(field_err(
            "threshold_db",
            format!("must be negative (dB below the peak), got {threshold_db}")
        ));
    }

    let codes = CodePaths {
        x: file.codes.x.map(|p| base_dir.join(p)),
        y: file.codes.y.map(|p| base_dir.join(p)),
    };
    if matches!(mode, Mode::Simulate | Mode::Evaluate) {
        if codes.x.is_none() {
            bail!(field_err("codes.x", format!("required in {mode} mode")));
        }
        if codes.y.is_none() {
            bail!(field_err("codes.y", format!("required in {mode} mode")));
        }
    }

    let resolved = Resolved {
        mode,
        out,
        threshold_db,
        grid,
        solver,
        scenario,
        codes,
    };
    resolved
        .design_grid()?
        .validate_for(resolved.grid.chips)
        .map_err(|e| field_err("grid", e.to_string()))?;
    resolved.scenario()?;
    Ok(resolved)
}
