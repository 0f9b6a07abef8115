//! Command-line front end: run learning campaigns, validate configs, replay
//! logged iterations open-loop, and recompute metrics from tick logs.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use dualtrack::config::ExperimentConfig;
use dualtrack::controller::UpdateLaw;
use dualtrack::harness::{metrics, Campaign};
use dualtrack::report::{
    export_campaign, parse_iteration_filename, read_iteration_csv, CampaignSummary,
};

#[derive(Parser)]
#[command(
    name = "dualtrack",
    version,
    about = "Dual-quaternion 6-DOF tracking with segment-based iterative learning control"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Execute a campaign and export config, summary, and tick logs.
    Run(RunArgs),
    /// Check a config file against every invariant without running it.
    Validate {
        /// Config file to check.
        #[arg(long)]
        config: PathBuf,
    },
    /// Re-integrate a logged iteration open-loop and compare it to the log.
    Replay(ReplayArgs),
    /// Recompute summary metrics from a tick log.
    Metrics {
        /// Tick log (iter_XXX.csv) to reduce.
        #[arg(long)]
        log: PathBuf,
    },
}

#[derive(Args)]
struct RunArgs {
    /// Config file; the built-in experiment preset when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Override the disturbance-phase seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Override the repetition count.
    #[arg(long)]
    iterations: Option<usize>,
    /// Override the segment count (switches to a uniform grid).
    #[arg(long)]
    segments: Option<usize>,
    /// Override the update law: eq35 (cumulative) or eq56 (saturated).
    #[arg(long)]
    variant: Option<UpdateLaw>,
    /// Override the output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Override the control frequency in Hz.
    #[arg(long)]
    freq: Option<f64>,
}

#[derive(Args)]
struct ReplayArgs {
    /// Tick log (iter_XXX.csv) to replay.
    #[arg(long)]
    log: PathBuf,
    /// Config of the campaign; defaults to config.toml next to the log.
    #[arg(long)]
    config: Option<PathBuf>,
}

fn load_config(path: &Path) -> Result<ExperimentConfig> {
    ExperimentConfig::load(path).with_context(|| format!("loading config {}", path.display()))
}

fn run(args: RunArgs) -> Result<()> {
    let mut config = match &args.config {
        Some(path) => load_config(path)?,
        None => ExperimentConfig::default(),
    };
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    if let Some(iterations) = args.iterations {
        config.iterations = iterations;
    }
    if let Some(segments) = args.segments {
        config.segments = segments;
        config.segment_boundaries = None;
    }
    if let Some(variant) = args.variant {
        config.variant = variant;
    }
    if let Some(out) = args.out {
        config.output_dir = out;
    }
    if let Some(freq) = args.freq {
        config.frequency_hz = freq;
    }

    let campaign = Campaign::new(config).context("campaign setup failed")?;
    println!(
        "running {} iterations of {} s at {} Hz ({} variant, seed {})",
        campaign.config().iterations,
        campaign.config().duration_s,
        campaign.config().frequency_hz,
        campaign.config().variant,
        campaign.config().seed,
    );
    let report = campaign.run().context("campaign aborted")?;
    let summary = CampaignSummary::from_report(&report);
    println!("  k    max|dP| m      max angle deg  max theta     max V");
    for row in &summary.rows {
        println!(
            "{:>3}    {:<13.6} {:<14.6} {:<13.6} {:.6e}",
            row.k, row.max_dp_norm_m, row.max_angle_deg, row.max_theta_hat, row.max_v,
        );
    }
    let dir = export_campaign(&report).context("exporting logs failed")?;
    println!("logs written to {}", dir.display());
    Ok(())
}

fn validate(path: PathBuf) -> Result<()> {
    let config = load_config(&path)?;
    config.validate().context("config invalid")?;
    println!(
        "config OK: {} iterations, {} ticks per iteration, {} segments, {} variant",
        config.iterations,
        config.ticks(),
        config.grid()?.segment_count(),
        config.variant,
    );
    Ok(())
}

fn replay(args: ReplayArgs) -> Result<()> {
    let name = args
        .log
        .file_name()
        .and_then(|n| n.to_str())
        .unwrap_or_default();
    let Some(iteration) = parse_iteration_filename(name) else {
        bail!("cannot infer the iteration index from {name:?} (expected iter_XXX.csv)");
    };
    let config_path = match args.config {
        Some(path) => path,
        None => args
            .log
            .parent()
            .map(|dir| dir.join("config.toml"))
            .context("log path has no parent directory")?,
    };
    let config = load_config(&config_path)?;
    let ticks =
        read_iteration_csv(&args.log).with_context(|| format!("reading {}", args.log.display()))?;

    let campaign = Campaign::new(config).context("campaign setup failed")?;
    let outcome = campaign.replay(iteration, &ticks).with_context(|| {
        format!("open-loop replay of iteration {iteration} diverged from the log")
    })?;
    println!(
        "replay OK: {} ticks, worst deviations |dP| {:.3e} m, |dq| {:.3e}, |dP norm| {:.3e}, angle {:.3e} rad",
        outcome.ticks,
        outcome.max_position_deviation,
        outcome.max_attitude_deviation,
        outcome.max_norm_deviation,
        outcome.max_angle_deviation,
    );
    Ok(())
}

fn recompute_metrics(log: PathBuf) -> Result<()> {
    let ticks = read_iteration_csv(&log).with_context(|| format!("reading {}", log.display()))?;
    let m = metrics(&ticks);
    println!("ticks:          {}", ticks.len());
    println!("max |dP|:       {} m", m.max_position_error);
    println!("final |dP|:     {} m", m.final_position_error);
    println!("max |dq|:       {}", m.max_attitude_vector);
    println!("final |dq|:     {}", m.final_attitude_vector);
    println!("max angle:      {} deg", m.max_angle.to_degrees());
    println!("final angle:    {} deg", m.final_angle.to_degrees());
    println!("max theta_hat:  {}", m.max_theta_hat);
    Ok(())
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Run(args) => run(args),
        Command::Validate { config } => validate(config),
        Command::Replay(args) => replay(args),
        Command::Metrics { log } => recompute_metrics(log),
    }
}
