//! Sweep harness and reporting: runs manifests, emits CSV rows and a
//! provenance record, and prints summary tables.
//!
//! Data files carry no timestamps; two runs of the same manifest with the
//! same master seed produce byte-identical CSVs.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::game::{GameError, Scenario, StrategyGrid, UserId};
use crate::optimizer::{
    self, derive_seed, Method, OptimizationResult, OptimizerError, SolveBackend,
};
use crate::radio::RateMode;
use crate::scenario::{
    make_pattern_with, load_scenario, PatternId, PatternTable, RunManifest, ScenarioError,
    ScenarioSource,
};

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("csv error on {path}: {source}")]
    Csv { path: PathBuf, source: csv::Error },
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error(transparent)]
    Optimizer(#[from] OptimizerError),
    #[error(transparent)]
    Game(#[from] GameError),
}

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "APMOVE_OUT_DIR";

/// One sweep data point. `theta_bps`/`delta_theta` are empty when the
/// method has no defined result at that point (for example the no-move
/// reference on a capture-infeasible initial profile).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub pattern: String,
    pub method: String,
    #[serde(rename = "d_A_m")]
    pub d_a_m: f64,
    #[serde(rename = "psi_A_deg")]
    pub psi_a_deg: f64,
    pub theta_bps: Option<f64>,
    pub delta_theta: Option<f64>,
    pub user_positions_json: String,
    pub seed: u64,
}

/// Artifacts produced by [`run_manifest`].
#[derive(Debug, Clone)]
pub struct RunArtifacts {
    pub out_dir: PathBuf,
    pub sweep_csvs: Vec<PathBuf>,
    pub summary_csv: PathBuf,
    pub provenance_json: PathBuf,
    pub rows: Vec<SweepRow>,
}

fn method_outcome(
    scenario: &Scenario,
    grid: &StrategyGrid,
    method: Method,
    sap: &crate::sap::SapConfig,
    mode: RateMode,
) -> Result<Option<OptimizationResult>, ReportError> {
    let backend = SolveBackend::Sap(*sap);
    let run = match method {
        Method::Proposed => optimizer::optimize_all_pairs(scenario, grid, &backend, mode),
        Method::NoMove => optimizer::baseline_no_move(scenario, mode),
        Method::GreedyNewUsers => optimizer::baseline_greedy_new_users(scenario, grid, mode),
        Method::NewUsersGame => {
            optimizer::baseline_new_users_game(scenario, grid, &backend, mode)
        }
    };
    match run {
        Ok(res) => Ok(Some(res)),
        Err(e) if e.is_infeasible() => Ok(None),
        Err(e) => Err(e.into()),
    }
}

/// Evaluates every requested method on one scenario and renders the rows.
#[allow(clippy::too_many_arguments)]
fn point_rows(
    scenario: &Scenario,
    pattern_label: &str,
    d_a: f64,
    psi_a: f64,
    grid: &StrategyGrid,
    methods: &[Method],
    point_seed: u64,
    settings: &crate::scenario::SapSettings,
    mode: RateMode,
) -> Result<Vec<SweepRow>, ReportError> {
    let sap = settings.to_config(point_seed);
    let mut rows = Vec::with_capacity(methods.len());
    for &method in methods {
        let outcome = method_outcome(scenario, grid, method, &sap, mode)?;
        let (theta, delta, positions) = match &outcome {
            Some(res) => (
                Some(res.theta_bps),
                res.delta_theta,
                res.profile.to_json(scenario).to_string(),
            ),
            None => (
                None,
                None,
                scenario.initial_profile().to_json(scenario).to_string(),
            ),
        };
        rows.push(SweepRow {
            pattern: pattern_label.to_string(),
            method: method.as_str().to_string(),
            d_a_m: d_a,
            psi_a_deg: psi_a,
            theta_bps: theta,
            delta_theta: delta,
            user_positions_json: positions,
            seed: point_seed,
        });
    }
    Ok(rows)
}

/// Sweeps user A's initial distance across one pattern, running every
/// method at every point. Points are dispatched to a worker pool; row
/// order stays deterministic (points ascending, methods in given order).
#[allow(clippy::too_many_arguments)]
pub fn sweep_pattern(
    table: &PatternTable,
    pattern: PatternId,
    d_a_values: &[f64],
    psi_a: f64,
    grid: &StrategyGrid,
    settings: &crate::scenario::SapSettings,
    methods: &[Method],
    mode: RateMode,
) -> Result<Vec<SweepRow>, ReportError> {
    let results: Vec<Result<Vec<SweepRow>, ReportError>> = d_a_values
        .par_iter()
        .enumerate()
        .map(|(idx, &d_a)| {
            let scenario = make_pattern_with(table, pattern, d_a, psi_a)?;
            let point_seed = derive_seed(settings.seed, idx as u64);
            point_rows(
                &scenario,
                &pattern.to_string(),
                d_a,
                psi_a,
                grid,
                methods,
                point_seed,
                settings,
                mode,
            )
        })
        .collect();
    let mut rows = Vec::new();
    for r in results {
        rows.extend(r?);
    }
    Ok(rows)
}

/// Runs a manifest end to end: sweeps, per-(pattern, method) CSVs, a
/// combined summary CSV, and a JSON provenance record.
pub fn run_manifest(manifest: &RunManifest) -> Result<RunArtifacts, ReportError> {
    let grid = manifest.grid.resolve()?;
    let out_dir = resolve_out_dir(manifest);
    std::fs::create_dir_all(&out_dir).map_err(|source| ReportError::Io {
        path: out_dir.clone(),
        source,
    })?;

    let mut all_rows: Vec<SweepRow> = Vec::new();
    match &manifest.scenario {
        ScenarioSource::Pattern {
            patterns,
            d_a_values,
            psi_a_deg,
            pattern_table,
        } => {
            let table = match pattern_table {
                Some(path) => PatternTable::from_path(path)?,
                None => PatternTable::bundled(),
            };
            for &pattern in patterns {
                let rows = sweep_pattern(
                    &table,
                    pattern,
                    d_a_values,
                    *psi_a_deg,
                    &grid,
                    &manifest.sap,
                    &manifest.methods,
                    manifest.mode,
                )?;
                all_rows.extend(rows);
            }
        }
        ScenarioSource::File { path } => {
            let scenario = load_scenario(path)?;
            let label = path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "custom".into());
            // Report the swept coordinate as user A's (or the first user's)
            // initial position.
            let a_idx = scenario
                .user_index(&UserId::from("A"))
                .unwrap_or(0);
            let a = scenario.users[a_idx].initial;
            let rows = point_rows(
                &scenario,
                &label,
                a.distance_m,
                a.angle_deg,
                &grid,
                &manifest.methods,
                derive_seed(manifest.sap.seed, 0),
                &manifest.sap,
                manifest.mode,
            )?;
            all_rows.extend(rows);
        }
    }

    // One CSV per (pattern, method), in row order.
    let mut sweep_csvs = Vec::new();
    let mut groups: Vec<(String, String)> = Vec::new();
    for row in &all_rows {
        let key = (row.pattern.clone(), row.method.clone());
        if !groups.contains(&key) {
            groups.push(key);
        }
    }
    for (pattern, method) in &groups {
        let path = out_dir.join(format!("sweep_{pattern}_{method}.csv"));
        let subset: Vec<&SweepRow> = all_rows
            .iter()
            .filter(|r| &r.pattern == pattern && &r.method == method)
            .collect();
        write_rows(&path, subset.into_iter())?;
        sweep_csvs.push(path);
    }

    let summary_csv = out_dir.join("summary.csv");
    write_rows(&summary_csv, all_rows.iter())?;

    let provenance_json = out_dir.join("provenance.json");
    // The output location does not affect the data; leaving it out keeps
    // the provenance byte-identical across reruns into different dirs.
    let mut manifest_echo = manifest.clone();
    manifest_echo.out_dir = None;
    let provenance = serde_json::json!({
        "tool": env!("CARGO_PKG_NAME"),
        "version": env!("CARGO_PKG_VERSION"),
        "manifest": manifest_echo,
        "grid": {
            "distances_m": grid.distances_m(),
            "angles_deg": grid.angles_deg(),
        },
        "seed_derivation": "point seed = splitmix(master, point index); pair seeds = splitmix(point seed, 2*pair_index + attempt)",
    });
    std::fs::write(
        &provenance_json,
        serde_json::to_string_pretty(&provenance).expect("provenance serializes"),
    )
    .map_err(|source| ReportError::Io {
        path: provenance_json.clone(),
        source,
    })?;

    Ok(RunArtifacts {
        out_dir,
        sweep_csvs,
        summary_csv,
        provenance_json,
        rows: all_rows,
    })
}

fn resolve_out_dir(manifest: &RunManifest) -> PathBuf {
    if let Some(dir) = &manifest.out_dir {
        return dir.clone();
    }
    if let Ok(dir) = std::env::var(OUT_DIR_ENV) {
        if !dir.is_empty() {
            return PathBuf::from(dir);
        }
    }
    PathBuf::from("apmove-out")
}

fn write_rows<'a, I: Iterator<Item = &'a SweepRow>>(
    path: &Path,
    rows: I,
) -> Result<(), ReportError> {
    let mut writer = csv::Writer::from_path(path).map_err(|source| ReportError::Csv {
        path: path.to_path_buf(),
        source,
    })?;
    for row in rows {
        writer.serialize(row).map_err(|source| ReportError::Csv {
            path: path.to_path_buf(),
            source,
        })?;
    }
    writer.flush().map_err(|source| ReportError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(())
}

/// Reads sweep rows back from a CSV produced by [`run_manifest`].
pub fn read_rows(path: &Path) -> Result<Vec<SweepRow>, ReportError> {
    let mut reader = csv::Reader::from_path(path).map_err(|source| ReportError::Csv {
        path: path.to_path_buf(),
        source,
    })?;
    let mut rows = Vec::new();
    for record in reader.deserialize() {
        rows.push(record.map_err(|source| ReportError::Csv {
            path: path.to_path_buf(),
            source,
        })?);
    }
    Ok(rows)
}

/// Renders a text summary: per-pattern best improvement ratio and its
/// argmax sweep point, then a method ranking by mean throughput.
pub fn summarize(rows: &[SweepRow]) -> String {
    use std::fmt::Write;

    let mut out = String::new();
    if rows.is_empty() {
        out.push_str("no rows\n");
        return out;
    }

    let mut patterns: Vec<String> = Vec::new();
    for r in rows {
        if !patterns.contains(&r.pattern) {
            patterns.push(r.pattern.clone());
        }
    }

    writeln!(out, "pattern  max_delta_theta  at_d_A_m  method").unwrap();
    for pattern in &patterns {
        let mut best: Option<&SweepRow> = None;
        for r in rows.iter().filter(|r| &r.pattern == pattern) {
            if let Some(delta) = r.delta_theta {
                let replace = match best.and_then(|b| b.delta_theta) {
                    None => true,
                    Some(bd) => delta > bd,
                };
                if replace {
                    best = Some(r);
                }
            }
        }
        match best {
            Some(b) => writeln!(
                out,
                "{:<8} {:<16.6} {:<9} {}",
                pattern,
                b.delta_theta.unwrap(),
                b.d_a_m,
                b.method
            )
            .unwrap(),
            None => writeln!(out, "{pattern:<8} (no defined improvement ratios)").unwrap(),
        }
    }

    // Mean throughput per method over rows where it is defined.
    let mut sums: BTreeMap<String, (f64, usize)> = BTreeMap::new();
    for r in rows {
        if let Some(t) = r.theta_bps {
            let e = sums.entry(r.method.clone()).or_insert((0.0, 0));
            e.0 += t;
            e.1 += 1;
        }
    }
    let mut ranking: Vec<(String, f64, usize)> = sums
        .into_iter()
        .map(|(m, (s, n))| (m, s / n as f64, n))
        .collect();
    ranking.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap_or(std::cmp::Ordering::Equal));

    writeln!(out, "\nmethod ranking by mean theta (defined points)").unwrap();
    for (i, (method, mean, n)) in ranking.iter().enumerate() {
        let tied = ranking
            .iter()
            .enumerate()
            .any(|(j, other)| j != i && other.1 == *mean);
        writeln!(
            out,
            "{:>2}. {:<18} {:>16.3} bps over {:>3} points{}",
            i + 1,
            method,
            mean,
            n,
            if tied { "  (tied)" } else { "" }
        )
        .unwrap();
    }
    out
}
