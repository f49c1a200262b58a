//! Experiment execution: builds the analytical curves and the matching
//! Monte-Carlo estimates for each figure, writes CSV files plus a manifest
//! that reproduces the run byte-for-byte.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use ris_secrecy::analysis::{
    cdf_bob_multi, cdf_bob_single, cdf_eve_multi, cdf_eve_single, ergodic_secrecy_capacity,
    gamma_approx, z_moments, EveMultiMethod, EveSingleMethod, SnrCdf,
};
use ris_secrecy::geometry::square_ris_grid;
use ris_secrecy::montecarlo::{
    empirical_cdf, mc_secrecy_capacity, rotate_eve_pairing, run_trials, EmpiricalCdf, Mode,
};
use ris_secrecy::{SystemParams, Truncation};

use crate::config::{ConfigError, ExperimentConfig, ExperimentKind, SweepVariable};

/// Transmit-SNR grid of the capacity-versus-power figure, dB.
const RHO_GRID_DB: [f64; 7] = [0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0];
/// Radius grid of the capacity-versus-dispersal figure, meters.
const RADIUS_GRID: [f64; 5] = [10.0, 20.0, 30.0, 40.0, 50.0];
/// Points per CDF curve in the distribution figure.
const CDF_GRID_POINTS: usize = 200;

/// Errors from experiment execution.
#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("invalid configuration:\n{}", format_errors(.0))]
    Config(Vec<ConfigError>),
    #[error("i/o failure: {0}")]
    Io(#[from] std::io::Error),
}

fn format_errors(errors: &[ConfigError]) -> String {
    errors.iter().map(|e| format!("  {e}")).collect::<Vec<_>>().join("\n")
}

/// Runs the configured experiment and returns the written files
/// (manifest last).
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<PathBuf>, RunError> {
    let violations = validate_for_run(cfg);
    if !violations.is_empty() {
        return Err(RunError::Config(violations));
    }
    fs::create_dir_all(&cfg.output_dir)?;

    let mut files = match cfg.experiment {
        ExperimentKind::Fig1 => run_fig1(cfg)?,
        ExperimentKind::Fig2 => run_fig2(cfg)?,
        ExperimentKind::Fig3 => run_fig3(cfg)?,
        ExperimentKind::Fig4 => run_fig4(cfg)?,
        ExperimentKind::Sweep => run_sweep(cfg)?,
    };

    let manifest_path = cfg.output_dir.join("manifest.txt");
    fs::write(&manifest_path, cfg.manifest(env!("CARGO_PKG_VERSION")))?;
    files.push(manifest_path);
    Ok(files)
}

/// Re-checks the invariants on an already-built configuration, so direct
/// library callers get the same validation as the CLI path.
fn validate_for_run(cfg: &ExperimentConfig) -> Vec<ConfigError> {
    let mut errors: Vec<ConfigError> = cfg
        .params
        .violations()
        .into_iter()
        .map(|v| {
            let (field, message) = v.split_once(": ").unwrap_or(("params", v.as_str()));
            ConfigError { path: format!("params.{field}"), message: message.to_string() }
        })
        .collect();
    if cfg.n_trials == 0 {
        errors.push(ConfigError { path: "n_trials".into(), message: "must be at least 1".into() });
    }
    if cfg.experiment == ExperimentKind::Sweep
        && (cfg.sweep_variable.is_none() || cfg.sweep_values.is_empty())
    {
        errors.push(ConfigError {
            path: "sweep".into(),
            message: "sweep requires sweep.variable and nonempty sweep.values".into(),
        });
    }
    errors
}

fn write_csv(path: &PathBuf, header: &str, rows: &[Vec<f64>]) -> Result<(), RunError> {
    let mut out = fs::File::create(path)?;
    writeln!(out, "{header}")?;
    for row in rows {
        let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        writeln!(out, "{}", cells.join(","))?;
    }
    Ok(())
}

fn with_n_ris(params: &SystemParams, n_ris: usize) -> SystemParams {
    let (ris_rows, ris_cols) = square_ris_grid(n_ris);
    SystemParams { n_ris, ris_rows, ris_cols, ..params.clone() }
}

fn bob_cdf_single(params: &SystemParams) -> SnrCdf {
    cdf_bob_single(params, &gamma_approx(&z_moments(params.n_ris).expect("n_ris >= 1")).expect("valid moments"))
}

fn capacity_point(
    params: &SystemParams,
    mode: Mode,
    trunc: &Truncation,
    n_trials: usize,
    seed: u64,
) -> (f64, f64, f64) {
    let (bob, eve) = match mode {
        Mode::Single => (
            bob_cdf_single(params),
            cdf_eve_single(params, trunc, EveSingleMethod::Series),
        ),
        Mode::Multi => (cdf_bob_multi(params), cdf_eve_multi(params, EveMultiMethod::Closed)),
    };
    let analytic = ergodic_secrecy_capacity(&bob, &eve, trunc);
    let records = run_trials(params, mode, n_trials, seed).expect("validated run");
    let (mc, stderr) = mc_secrecy_capacity(&rotate_eve_pairing(&records)).expect("nonempty");
    (analytic, mc, stderr)
}

// ---------------------------------------------------------------------------
// fig1: SNR distribution curves, both antenna modes
// ---------------------------------------------------------------------------

struct CurvePair {
    bob_analytic: SnrCdf,
    bob_empirical: EmpiricalCdf,
    eve_analytic: SnrCdf,
    eve_empirical: EmpiricalCdf,
}

fn fig1_mode(cfg: &ExperimentConfig, mode: Mode, seed: u64) -> CurvePair {
    let params = match mode {
        Mode::Single => SystemParams { n_ant: 1, ..cfg.params.clone() },
        Mode::Multi => cfg.params.clone(),
    };
    // The legitimate-user curve converges slower in distance, so it gets a
    // tenfold budget over the eavesdropper realizations.
    let mut quiet = params.clone();
    quiet.eve_density = 0.0;
    let bob_snrs: Vec<f64> = run_trials(&quiet, mode, cfg.n_trials * 10, seed)
        .expect("validated run")
        .into_iter()
        .map(|r| r.bob_snr)
        .collect();
    let eve_snrs: Vec<f64> = run_trials(&params, mode, cfg.n_trials, seed + 1)
        .expect("validated run")
        .into_iter()
        .map(|r| r.eve_snr)
        .collect();
    let (bob_analytic, eve_analytic) = match mode {
        Mode::Single => (
            bob_cdf_single(&params),
            cdf_eve_single(&params, &cfg.trunc, EveSingleMethod::Series),
        ),
        Mode::Multi => (cdf_bob_multi(&params), cdf_eve_multi(&params, EveMultiMethod::Closed)),
    };
    CurvePair {
        bob_analytic,
        bob_empirical: empirical_cdf(&bob_snrs).expect("nonempty"),
        eve_analytic,
        eve_empirical: empirical_cdf(&eve_snrs).expect("nonempty"),
    }
}

fn fig1_grid(pair: &CurvePair) -> Vec<f64> {
    let lo = pair
        .bob_empirical
        .samples()
        .iter()
        .chain(pair.eve_empirical.samples())
        .copied()
        .filter(|x| *x > 0.0)
        .fold(f64::INFINITY, f64::min)
        .max(1e-9);
    let hi = pair.bob_empirical.samples()[pair.bob_empirical.n() - 1]
        .max(*pair.eve_empirical.samples().last().expect("nonempty"))
        .max(lo * 10.0);
    (0..CDF_GRID_POINTS)
        .map(|i| lo * (hi / lo).powf(i as f64 / (CDF_GRID_POINTS - 1) as f64))
        .collect()
}

fn run_fig1(cfg: &ExperimentConfig) -> Result<Vec<PathBuf>, RunError> {
    let mut files = Vec::new();
    for (mode, name, seed) in [(Mode::Single, "fig1_single.csv", 11u64), (Mode::Multi, "fig1_multi.csv", 13u64)] {
        let pair = fig1_mode(cfg, mode, cfg.seed.wrapping_mul(2).wrapping_add(seed));
        let rows: Vec<Vec<f64>> = fig1_grid(&pair)
            .into_iter()
            .map(|x| {
                vec![
                    x,
                    pair.bob_analytic.eval(x),
                    pair.bob_empirical.eval(x),
                    pair.eve_analytic.eval(x),
                    pair.eve_empirical.eval(x),
                ]
            })
            .collect();
        let path = cfg.output_dir.join(name);
        write_csv(&path, "x,cdf_bob_analytic,cdf_bob_mc,cdf_eve_analytic,cdf_eve_mc", &rows)?;
        files.push(path);
    }
    Ok(files)
}

// ---------------------------------------------------------------------------
// fig2-fig4: capacity curves
// ---------------------------------------------------------------------------

fn run_fig2(cfg: &ExperimentConfig) -> Result<Vec<PathBuf>, RunError> {
    let mut files = Vec::new();
    for (ni, n) in cfg.sweep_values.iter().enumerate() {
        let n = *n as usize;
        let mut rows = Vec::new();
        for (ri, rho_db) in RHO_GRID_DB.iter().enumerate() {
            let mut p = with_n_ris(&cfg.params, n);
            p.n_ant = 1;
            p.rho_db = *rho_db;
            let seed = cfg.seed.wrapping_add((ni * RHO_GRID_DB.len() + ri) as u64 + 100);
            let (cs, mc, stderr) = capacity_point(&p, Mode::Single, &cfg.trunc, cfg.n_trials, seed);
            rows.push(vec![*rho_db, cs, mc, stderr]);
        }
        let path = cfg.output_dir.join(format!("fig2_N{n}.csv"));
        write_csv(&path, "rho_db,cs_analytic,cs_mc,cs_mc_stderr", &rows)?;
        files.push(path);
    }
    Ok(files)
}

fn run_fig3(cfg: &ExperimentConfig) -> Result<Vec<PathBuf>, RunError> {
    let mut rows = Vec::new();
    for (ki, k) in cfg.sweep_values.iter().enumerate() {
        let k = *k as usize;
        let p = SystemParams { n_ant: k, ..cfg.params.clone() };
        let seed = cfg.seed.wrapping_add(ki as u64 + 300);
        let (cs, mc, stderr) = capacity_point(&p, Mode::Multi, &cfg.trunc, cfg.n_trials, seed);
        rows.push(vec![k as f64, cs, mc, stderr]);
    }
    let path = cfg.output_dir.join("fig3.csv");
    write_csv(&path, "n_ant,cs_analytic,cs_mc,cs_mc_stderr", &rows)?;
    Ok(vec![path])
}

fn run_fig4(cfg: &ExperimentConfig) -> Result<Vec<PathBuf>, RunError> {
    // The radius sweep keeps the expected eavesdropper population fixed:
    // the density configured at the reference radius is rescaled by
    // (R_ref/R)^3, so growing R disperses the same population instead of
    // adding ever more nearby overhearers.
    let mut files = Vec::new();
    let ref_radius = cfg.params.radius;
    let ref_density = cfg.params.eve_density;
    for (ni, n) in cfg.sweep_values.iter().enumerate() {
        let n = *n as usize;
        let mut rows = Vec::new();
        for (ri, radius) in RADIUS_GRID.iter().enumerate() {
            let mut p = with_n_ris(&cfg.params, n);
            p.n_ant = 1;
            p.radius = *radius;
            p.eve_density = ref_density * (ref_radius / radius).powi(3);
            let seed = cfg.seed.wrapping_add((ni * RADIUS_GRID.len() + ri) as u64 + 500);
            let (cs, mc, stderr) = capacity_point(&p, Mode::Single, &cfg.trunc, cfg.n_trials, seed);
            rows.push(vec![*radius, cs, mc, stderr]);
        }
        let path = cfg.output_dir.join(format!("fig4_N{n}.csv"));
        write_csv(&path, "radius,cs_analytic,cs_mc,cs_mc_stderr", &rows)?;
        files.push(path);
    }
    Ok(files)
}

fn run_sweep(cfg: &ExperimentConfig) -> Result<Vec<PathBuf>, RunError> {
    let variable = cfg.sweep_variable.expect("validated");
    let mut rows = Vec::new();
    for (i, value) in cfg.sweep_values.iter().enumerate() {
        let mut p = cfg.params.clone();
        let mode = match variable {
            SweepVariable::RhoDb => {
                p.rho_db = *value;
                p.n_ant = 1;
                Mode::Single
            }
            SweepVariable::NRis => {
                p = with_n_ris(&p, *value as usize);
                p.n_ant = 1;
                Mode::Single
            }
            SweepVariable::NAnt => {
                p.n_ant = *value as usize;
                Mode::Multi
            }
            SweepVariable::Radius => {
                p.radius = *value;
                p.n_ant = 1;
                Mode::Single
            }
        };
        let seed = cfg.seed.wrapping_add(i as u64 + 700);
        let (cs, mc, stderr) = capacity_point(&p, mode, &cfg.trunc, cfg.n_trials, seed);
        rows.push(vec![*value, cs, mc, stderr]);
    }
    let path = cfg.output_dir.join("sweep.csv");
    write_csv(&path, "value,cs_analytic,cs_mc,cs_mc_stderr", &rows)?;
    Ok(vec![path])
}
