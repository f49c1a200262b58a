//! Experiment configuration: flat key=value files with dotted keys, CLI
//! overrides, full-violation validation and manifest round-tripping.
//!
//! A manifest emitted by a run is itself a valid config file; loading it
//! reproduces the run.

use std::fmt;
use std::path::{Path, PathBuf};

use ris_secrecy::{SystemParams, Truncation};

/// Which experiment to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExperimentKind {
    Fig1,
    Fig2,
    Fig3,
    Fig4,
    Sweep,
}

impl ExperimentKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Fig1 => "fig1",
            Self::Fig2 => "fig2",
            Self::Fig3 => "fig3",
            Self::Fig4 => "fig4",
            Self::Sweep => "sweep",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "fig1" => Some(Self::Fig1),
            "fig2" => Some(Self::Fig2),
            "fig3" => Some(Self::Fig3),
            "fig4" => Some(Self::Fig4),
            "sweep" => Some(Self::Sweep),
            _ => None,
        }
    }
}

/// Parameter swept by the generic `sweep` experiment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepVariable {
    RhoDb,
    NRis,
    NAnt,
    Radius,
}

impl SweepVariable {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::RhoDb => "rho_db",
            Self::NRis => "n_ris",
            Self::NAnt => "n_ant",
            Self::Radius => "radius",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "rho_db" => Some(Self::RhoDb),
            "n_ris" => Some(Self::NRis),
            "n_ant" => Some(Self::NAnt),
            "radius" => Some(Self::Radius),
            _ => None,
        }
    }
}

/// One validation failure, tagged with the offending field path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError {
    pub path: String,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

/// Fully resolved experiment configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    pub params: SystemParams,
    pub trunc: Truncation,
    pub n_trials: usize,
    pub seed: u64,
    pub sweep_variable: Option<SweepVariable>,
    pub sweep_values: Vec<f64>,
    pub output_dir: PathBuf,
}

impl ExperimentConfig {
    /// Reference defaults for an experiment: the standard parameter set,
    /// 10^4 trials, seed 1, and the per-figure sweep lists (RIS sizes
    /// {36, 100, 256} for the rho and radius figures, antenna counts
    /// {50, 100, 200, 400} for the antenna figure).
    pub fn defaults(kind: ExperimentKind) -> Self {
        let sweep_values = match kind {
            ExperimentKind::Fig2 | ExperimentKind::Fig4 => vec![36.0, 100.0, 256.0],
            ExperimentKind::Fig3 => vec![50.0, 100.0, 200.0, 400.0],
            _ => Vec::new(),
        };
        Self {
            experiment: kind,
            params: SystemParams::default(),
            trunc: Truncation::default(),
            n_trials: 10_000,
            seed: 1,
            sweep_variable: None,
            sweep_values,
            output_dir: PathBuf::from(format!("runs/{}", kind.as_str())),
        }
    }

    /// Serializes the fully resolved configuration in config-file format.
    /// Numeric fields round-trip exactly.
    pub fn manifest(&self, version: &str) -> String {
        let mut out = String::new();
        let mut push = |k: &str, v: String| {
            out.push_str(k);
            out.push('=');
            out.push_str(&v);
            out.push('\n');
        };
        push("version", version.to_string());
        push("experiment", self.experiment.as_str().to_string());
        push("seed", self.seed.to_string());
        push("n_trials", self.n_trials.to_string());
        push("output_dir", self.output_dir.display().to_string());
        if let Some(v) = self.sweep_variable {
            push("sweep.variable", v.as_str().to_string());
        }
        if !self.sweep_values.is_empty() {
            let joined: Vec<String> = self.sweep_values.iter().map(|v| v.to_string()).collect();
            push("sweep.values", joined.join(","));
        }
        push("trunc.n_bar", self.trunc.n_bar.to_string());
        push("trunc.w_nodes", self.trunc.w_nodes.to_string());
        let p = &self.params;
        push("params.n_ris", p.n_ris.to_string());
        push("params.n_ant", p.n_ant.to_string());
        push("params.ris_rows", p.ris_rows.to_string());
        push("params.ris_cols", p.ris_cols.to_string());
        push("params.dist_bs_ris", p.dist_bs_ris.to_string());
        push("params.dist_ris_bob", p.dist_ris_bob.to_string());
        push("params.radius", p.radius.to_string());
        push("params.pathloss_exp", p.pathloss_exp.to_string());
        push("params.rho_db", p.rho_db.to_string());
        push("params.eve_density", p.eve_density.to_string());
        push("params.rician_ris_eve", p.rician_ris_eve.to_string());
        push("params.rician_bs_eve", p.rician_bs_eve.to_string());
        push("params.carrier_hz", p.carrier_hz.to_string());
        push("params.spacing_row", p.spacing_row.to_string());
        push("params.spacing_col", p.spacing_col.to_string());
        out
    }
}

/// Accumulates raw key=value assignments before validation.
#[derive(Debug, Clone)]
pub struct ConfigBuilder {
    kind: ExperimentKind,
    cfg: ExperimentConfig,
    ris_grid_explicit: bool,
    errors: Vec<ConfigError>,
}

impl ConfigBuilder {
    pub fn new(kind: ExperimentKind) -> Self {
        Self {
            kind,
            cfg: ExperimentConfig::defaults(kind),
            ris_grid_explicit: false,
            errors: Vec::new(),
        }
    }

    /// Loads a flat key=value file ('#' starts a comment line).
    pub fn load_file(&mut self, path: &Path) -> Result<(), ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError {
            path: path.display().to_string(),
            message: format!("cannot read config file: {e}"),
        })?;
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            match line.split_once('=') {
                Some((k, v)) => self.set(k.trim(), v.trim()),
                None => self.errors.push(ConfigError {
                    path: format!("{}:{}", path.display(), lineno + 1),
                    message: "expected key=value".to_string(),
                }),
            }
        }
        Ok(())
    }

    fn err(&mut self, key: &str, message: impl Into<String>) {
        self.errors.push(ConfigError { path: key.to_string(), message: message.into() });
    }

    fn parse_into<T: std::str::FromStr>(&mut self, key: &str, value: &str) -> Option<T> {
        match value.parse::<T>() {
            Ok(v) => Some(v),
            Err(_) => {
                self.err(key, format!("cannot parse {value:?}"));
                None
            }
        }
    }

    /// Applies one assignment. Unknown keys are recorded as errors.
    pub fn set(&mut self, key: &str, value: &str) {
        match key {
            // Informational in manifests; accepted so a manifest reloads.
            "version" => {}
            "experiment" => match ExperimentKind::parse(value) {
                // The subcommand decides the experiment; a config file may
                // restate it but cannot disagree silently.
                Some(k) if k == self.kind => {}
                Some(k) => self.err(
                    "experiment",
                    format!("config file says {:?} but the {} subcommand was invoked", k.as_str(), self.kind.as_str()),
                ),
                None => self.err("experiment", format!("unknown experiment {value:?}")),
            },
            "seed" => {
                if let Some(v) = self.parse_into::<u64>(key, value) {
                    self.cfg.seed = v;
                }
            }
            "n_trials" | "trials" => {
                if let Some(v) = self.parse_into::<usize>(key, value) {
                    self.cfg.n_trials = v;
                }
            }
            "output_dir" | "out" => self.cfg.output_dir = PathBuf::from(value),
            "sweep.variable" => match SweepVariable::parse(value) {
                Some(v) => self.cfg.sweep_variable = Some(v),
                None => self.err(key, format!("unknown sweep variable {value:?}")),
            },
            "sweep.values" => {
                let mut values = Vec::new();
                let mut ok = true;
                for piece in value.split(',') {
                    match piece.trim().parse::<f64>() {
                        Ok(v) => values.push(v),
                        Err(_) => {
                            self.err(key, format!("cannot parse {piece:?}"));
                            ok = false;
                        }
                    }
                }
                if ok {
                    self.cfg.sweep_values = values;
                }
            }
            "trunc.n_bar" => {
                if let Some(v) = self.parse_into::<usize>(key, value) {
                    self.cfg.trunc.n_bar = v;
                }
            }
            "trunc.w_nodes" => {
                if let Some(v) = self.parse_into::<usize>(key, value) {
                    self.cfg.trunc.w_nodes = v;
                }
            }
            _ => match key.strip_prefix("params.") {
                Some(field) => self.set_param(key, field, value),
                None => self.err(key, "unknown configuration key"),
            },
        }
    }

    fn set_param(&mut self, key: &str, field: &str, value: &str) {
        match field {
            "n_ris" => {
                if let Some(v) = self.parse_into::<usize>(key, value) {
                    self.cfg.params.n_ris = v;
                    if !self.ris_grid_explicit {
                        let (r, c) = ris_secrecy::geometry::square_ris_grid(v);
                        self.cfg.params.ris_rows = r;
                        self.cfg.params.ris_cols = c;
                    }
                }
            }
            "ris_rows" => {
                if let Some(v) = self.parse_into::<usize>(key, value) {
                    self.cfg.params.ris_rows = v;
                    self.ris_grid_explicit = true;
                }
            }
            "ris_cols" => {
                if let Some(v) = self.parse_into::<usize>(key, value) {
                    self.cfg.params.ris_cols = v;
                    self.ris_grid_explicit = true;
                }
            }
            "n_ant" => {
                if let Some(v) = self.parse_into::<usize>(key, value) {
                    self.cfg.params.n_ant = v;
                }
            }
            "dist_bs_ris" | "dist_ris_bob" | "radius" | "pathloss_exp" | "rho_db"
            | "eve_density" | "rician_ris_eve" | "rician_bs_eve" | "carrier_hz"
            | "spacing_row" | "spacing_col" => {
                let Some(v) = self.parse_into::<f64>(key, value) else {
                    return;
                };
                let p = &mut self.cfg.params;
                match field {
                    "dist_bs_ris" => p.dist_bs_ris = v,
                    "dist_ris_bob" => p.dist_ris_bob = v,
                    "radius" => p.radius = v,
                    "pathloss_exp" => p.pathloss_exp = v,
                    "rho_db" => p.rho_db = v,
                    "eve_density" => p.eve_density = v,
                    "rician_ris_eve" => p.rician_ris_eve = v,
                    "rician_bs_eve" => p.rician_bs_eve = v,
                    "carrier_hz" => p.carrier_hz = v,
                    "spacing_row" => p.spacing_row = v,
                    "spacing_col" => p.spacing_col = v,
                    _ => unreachable!(),
                }
            }
            _ => self.err(key, "unknown parameter field"),
        }
    }

    /// Validates everything and returns either the resolved configuration
    /// or the complete violation list (never just the first failure).
    pub fn validate(mut self) -> Result<ExperimentConfig, Vec<ConfigError>> {
        for v in self.cfg.params.violations() {
            let (field, message) = v.split_once(": ").unwrap_or(("params", v.as_str()));
            self.errors.push(ConfigError {
                path: format!("params.{field}"),
                message: message.to_string(),
            });
        }
        if self.cfg.n_trials == 0 {
            self.err("n_trials", "must be at least 1");
        }
        if self.cfg.trunc.w_nodes == 0 {
            self.err("trunc.w_nodes", "must be at least 1");
        }
        if self.kind == ExperimentKind::Sweep {
            if self.cfg.sweep_variable.is_none() {
                self.err("sweep.variable", "required for the sweep experiment");
            }
            if self.cfg.sweep_values.is_empty() {
                self.err("sweep.values", "required and nonempty for the sweep experiment");
            }
        }
        match self.kind {
            ExperimentKind::Fig2 | ExperimentKind::Fig3 | ExperimentKind::Fig4 => {
                if self.cfg.sweep_values.is_empty() {
                    self.err("sweep.values", "must name at least one curve");
                }
                if self.cfg.sweep_values.iter().any(|v| *v < 1.0 || v.fract() != 0.0) {
                    self.err("sweep.values", "must be positive integers for this experiment");
                }
            }
            _ => {}
        }
        if self.errors.is_empty() {
            Ok(self.cfg)
        } else {
            Err(self.errors)
        }
    }
}

/// Convenience wrapper: defaults for `kind`, assignments applied in order,
/// then full validation.
pub fn validate_config(
    kind: ExperimentKind,
    assignments: &[(String, String)],
) -> Result<ExperimentConfig, Vec<ConfigError>> {
    let mut builder = ConfigBuilder::new(kind);
    for (k, v) in assignments {
        builder.set(k, v);
    }
    builder.validate()
}
