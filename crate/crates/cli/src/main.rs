//! Command-line front end: run manifests, sweep patterns, verify the
//! solver against the exhaustive oracle, and summarize result CSVs.

use std::path::PathBuf;
use std::str::FromStr;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use apmove::optimizer::{derive_seed, Method};
use apmove::report;
use apmove::scenario::{self, GridSpec, PatternId, RunManifest, SapSettings, ScenarioSource};
use apmove::{MovingPair, RateMode, SapConfig, StrategyGrid, UserId};

#[derive(Parser)]
#[command(
    name = "apmove",
    about = "Wi-Fi user-placement optimizer built on a potential game",
    long_about = "Finds user positions that maximize system throughput around a single \
                  access point by playing a common-interest potential game with spatial \
                  adaptive play, and compares the result against baseline methods."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Execute a run manifest (JSON) and write CSV artifacts.
    Run {
        /// Path to the manifest file.
        #[arg(long)]
        manifest: PathBuf,
        /// Override the manifest's output directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sweep user A's initial distance across patterns and methods.
    Sweep(SweepArgs),
    /// Compare SAP against exhaustive search on a coarse grid.
    Oracle(OracleArgs),
    /// Summarize a results CSV.
    Show {
        /// Path to a summary.csv (or any sweep CSV) produced by run/sweep.
        #[arg(long)]
        input: PathBuf,
    },
}

#[derive(Args)]
struct SweepArgs {
    /// Pattern ids (I..VI), comma separated, or "all".
    #[arg(long, default_value = "I")]
    pattern: String,
    /// Methods to run, comma separated, or "all"
    /// (proposed, no_move, greedy_new_users, new_users_game).
    #[arg(long, default_value = "all")]
    method: String,
    /// Sweep range for user A's distance: "start:end" or "start:end:step" in meters.
    #[arg(long = "d-a-range", default_value = "1:30")]
    d_a_range: String,
    /// User A's bearing in degrees.
    #[arg(long = "psi-a", default_value_t = 90.0)]
    psi_a: f64,
    /// Master seed; every point and pair seed derives from it.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Strategy grid preset: standard or coarse.
    #[arg(long, default_value = "standard")]
    grid: String,
    /// Rate evaluation mode: exact or approx.
    #[arg(long, default_value = "exact")]
    mode: String,
    /// SAP iteration budget per run.
    #[arg(long, default_value_t = 1000)]
    steps: usize,
    /// Output directory (falls back to $APMOVE_OUT_DIR, then ./apmove-out).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Optional pattern-table override file.
    #[arg(long = "patterns-file")]
    patterns_file: Option<PathBuf>,
}

#[derive(Args)]
struct OracleArgs {
    /// Pattern id (I..VI).
    #[arg(long, default_value = "I")]
    pattern: String,
    /// User A's initial distance in meters.
    #[arg(long = "d-a", default_value_t = 15.0)]
    d_a: f64,
    /// User A's bearing in degrees.
    #[arg(long = "psi-a", default_value_t = 90.0)]
    psi_a: f64,
    /// Moving pair as "X,Y" user ids; defaults to the two new users (C,D).
    #[arg(long)]
    pair: Option<String>,
    /// Strategy grid preset: coarse or standard (coarse keeps enumeration cheap).
    #[arg(long, default_value = "coarse")]
    grid: String,
    /// Number of SAP seeds to try; the best run is reported.
    #[arg(long, default_value_t = 10)]
    seeds: usize,
    /// Master seed for the SAP attempts.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// SAP iteration budget per run.
    #[arg(long, default_value_t = 1000)]
    steps: usize,
    /// Rate evaluation mode: exact or approx.
    #[arg(long, default_value = "exact")]
    mode: String,
    /// Emit the full report as JSON instead of text.
    #[arg(long)]
    json: bool,
}

fn parse_mode(s: &str) -> Result<RateMode> {
    match s {
        "exact" => Ok(RateMode::Exact),
        "approx" | "approximate" => Ok(RateMode::Approximate),
        other => bail!("unknown mode {other:?} (expected exact or approx)"),
    }
}

fn parse_patterns(s: &str) -> Result<Vec<PatternId>> {
    if s.eq_ignore_ascii_case("all") {
        return Ok(PatternId::ALL.to_vec());
    }
    s.split(',')
        .map(|p| PatternId::from_str(p.trim()).map_err(Into::into))
        .collect()
}

fn parse_methods(s: &str) -> Result<Vec<Method>> {
    if s.eq_ignore_ascii_case("all") {
        return Ok(Method::ALL.to_vec());
    }
    s.split(',')
        .map(|m| Method::from_str(m.trim()).map_err(|e| anyhow::anyhow!(e)))
        .collect()
}

fn parse_range(s: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = s.split(':').collect();
    let (start, end, step) = match parts.as_slice() {
        [s0, e0] => (s0.parse::<f64>()?, e0.parse::<f64>()?, 1.0),
        [s0, e0, st] => (s0.parse::<f64>()?, e0.parse::<f64>()?, st.parse::<f64>()?),
        _ => bail!("range must look like start:end or start:end:step"),
    };
    if step.is_nan() || step <= 0.0 || end < start {
        bail!("range must ascend with a positive step");
    }
    let mut values = Vec::new();
    let mut v = start;
    while v <= end + 1e-9 {
        values.push(v);
        v += step;
    }
    Ok(values)
}

fn report_artifacts(artifacts: &report::RunArtifacts) {
    println!("wrote {} rows under {}", artifacts.rows.len(), artifacts.out_dir.display());
    for path in &artifacts.sweep_csvs {
        println!("  {}", path.display());
    }
    println!("  {}", artifacts.summary_csv.display());
    println!("  {}", artifacts.provenance_json.display());
    print!("\n{}", report::summarize(&artifacts.rows));
}

fn cmd_run(manifest_path: PathBuf, out: Option<PathBuf>) -> Result<()> {
    let mut manifest = RunManifest::from_path(&manifest_path)
        .with_context(|| format!("loading manifest {}", manifest_path.display()))?;
    if out.is_some() {
        manifest.out_dir = out;
    }
    let artifacts = report::run_manifest(&manifest)?;
    report_artifacts(&artifacts);
    Ok(())
}

fn cmd_sweep(args: SweepArgs) -> Result<()> {
    let manifest = RunManifest {
        scenario: ScenarioSource::Pattern {
            patterns: parse_patterns(&args.pattern)?,
            d_a_values: parse_range(&args.d_a_range)?,
            psi_a_deg: args.psi_a,
            pattern_table: args.patterns_file,
        },
        grid: GridSpec::Preset(args.grid),
        sap: SapSettings {
            max_steps: args.steps,
            seed: args.seed,
            ..SapSettings::default()
        },
        methods: parse_methods(&args.method)?,
        mode: parse_mode(&args.mode)?,
        out_dir: args.out,
    };
    let artifacts = report::run_manifest(&manifest)?;
    report_artifacts(&artifacts);
    Ok(())
}

fn cmd_oracle(args: OracleArgs) -> Result<()> {
    let pattern = PatternId::from_str(&args.pattern)?;
    let scenario = scenario::make_pattern(pattern, args.d_a, args.psi_a)?;
    let mode = parse_mode(&args.mode)?;
    let grid = match args.grid.as_str() {
        "coarse" | "oracle" => StrategyGrid::coarse(),
        "standard" | "default" => StrategyGrid::standard(),
        other => bail!("unknown grid preset {other:?}"),
    };

    let pair = match &args.pair {
        Some(spec) => {
            let ids: Vec<&str> = spec.split(',').map(str::trim).collect();
            if ids.len() != 2 {
                bail!("--pair expects two comma-separated user ids");
            }
            let a = scenario
                .user_index(&UserId::from(ids[0]))
                .with_context(|| format!("unknown user {}", ids[0]))?;
            let b = scenario
                .user_index(&UserId::from(ids[1]))
                .with_context(|| format!("unknown user {}", ids[1]))?;
            MovingPair::new(a, b)?
        }
        None => {
            let new_users = scenario.new_user_indices();
            if new_users.len() != 2 {
                bail!("scenario does not label exactly two new users; pass --pair");
            }
            MovingPair::new(new_users[0], new_users[1])?
        }
    };

    let oracle_report = apmove::oracle::brute_force_best(&scenario, pair, &grid, mode)?;

    let mut best_sap: Option<apmove::SapOutcome> = None;
    let mut best_seed = 0;
    for attempt in 0..args.seeds {
        let cfg = SapConfig {
            max_steps: args.steps,
            ..SapConfig::with_seed(derive_seed(args.seed, attempt as u64))
        };
        let out = apmove::sap::run_sap(&scenario, &grid, pair, &cfg, mode)?;
        let better = match &best_sap {
            None => true,
            Some(b) => out.theta_bps > b.theta_bps,
        };
        if better {
            best_seed = cfg.rng_seed;
            best_sap = Some(out);
        }
    }
    let best_sap = best_sap.context("at least one SAP attempt is required")?;
    let sap_nash = apmove::oracle::verify_nash(&scenario, pair, &grid, &best_sap.profile, mode);
    let gap = (oracle_report.best_theta_bps - best_sap.theta_bps) / oracle_report.best_theta_bps;

    if args.json {
        let value = serde_json::json!({
            "oracle": oracle_report,
            "sap": {
                "theta_bps": best_sap.theta_bps,
                "seed": best_seed,
                "nash": sap_nash,
                "relative_gap": gap,
                "positions": scenario
                    .users
                    .iter()
                    .zip(best_sap.profile.positions())
                    .map(|(u, p)| (u.id.clone(), *p))
                    .collect::<Vec<_>>(),
            },
        });
        println!("{}", serde_json::to_string_pretty(&value)?);
    } else {
        println!(
            "pattern {pattern} d_A={} psi_A={} pair=({}, {})",
            args.d_a,
            args.psi_a,
            scenario.users[pair.first()].id,
            scenario.users[pair.second()].id
        );
        println!(
            "oracle:   theta = {:.3} Mb/s over {} feasible / {} total joint strategies (nash: {})",
            oracle_report.best_theta_bps / 1e6,
            oracle_report.feasible_profiles,
            oracle_report.total_profiles,
            oracle_report.nash_at_best
        );
        println!(
            "sap:      theta = {:.3} Mb/s (best of {} seeds, seed {}, nash: {})",
            best_sap.theta_bps / 1e6,
            args.seeds,
            best_seed,
            sap_nash
        );
        println!("gap:      {:.4}%", gap * 100.0);
    }
    Ok(())
}

fn cmd_show(input: PathBuf) -> Result<()> {
    let rows = report::read_rows(&input)
        .with_context(|| format!("reading {}", input.display()))?;
    print!("{}", report::summarize(&rows));
    Ok(())
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    match cli.command {
        Command::Run { manifest, out } => cmd_run(manifest, out),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Oracle(args) => cmd_oracle(args),
        Command::Show { input } => cmd_show(input),
    }
}
