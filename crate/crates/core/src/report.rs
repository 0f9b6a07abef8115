//! Log persistence: per-iteration CSV tick logs, the TOML campaign summary,
//! and the resolved config, all written deterministically.
//!
//! Floats are rendered with Rust's shortest round-trip formatting, so a
//! parsed log reproduces the in-memory values bit-for-bit — which is what
//! lets open-loop replay demand (and get) zero deviation. Re-exporting the
//! same report yields byte-identical files.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::harness::{CampaignReport, TickRecord};

/// Column schema of the per-iteration tick logs.
pub const CSV_HEADER: &str =
    "t,dP_x,dP_y,dP_z,dq_x,dq_y,dq_z,dP_norm,angle_rad,f_x,f_y,f_z,tau_x,tau_y,tau_z,theta_hat";

/// Name of the tick log for iteration `k`: `iter_000.csv`, `iter_001.csv`, …
pub fn iteration_filename(iteration: usize) -> String {
    format!("iter_{iteration:03}.csv")
}

/// Recovers the iteration index from a tick log's file name.
pub fn parse_iteration_filename(name: &str) -> Option<usize> {
    name.strip_prefix("iter_")?
        .strip_suffix(".csv")?
        .parse()
        .ok()
}

/// Writes one iteration's tick records as CSV.
pub fn write_iteration_csv(path: &Path, ticks: &[TickRecord]) -> Result<()> {
    let file = fs::File::create(path)?;
    let mut w = BufWriter::new(file);
    writeln!(w, "{CSV_HEADER}")?;
    for r in ticks {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            r.t,
            r.position_error.x,
            r.position_error.y,
            r.position_error.z,
            r.attitude_error.x,
            r.attitude_error.y,
            r.attitude_error.z,
            r.position_error_norm,
            r.angle_rad,
            r.force.x,
            r.force.y,
            r.force.z,
            r.torque.x,
            r.torque.y,
            r.torque.z,
            r.theta_hat,
        )?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a tick log written by [`write_iteration_csv`].
pub fn read_iteration_csv(path: &Path) -> Result<Vec<TickRecord>> {
    let text = fs::read_to_string(path)?;
    let mut lines = text.lines();
    match lines.next() {
        Some(header) if header == CSV_HEADER => {}
        Some(header) => {
            return Err(Error::MalformedLog {
                detail: format!("unexpected header {header:?}"),
            })
        }
        None => {
            return Err(Error::MalformedLog {
                detail: "empty file".into(),
            })
        }
    }

    let mut ticks = Vec::new();
    for (lineno, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let mut fields = [0.0f64; 16];
        let mut count = 0;
        for (slot, field) in fields.iter_mut().zip(line.split(',')) {
            *slot = field.parse().map_err(|e| Error::MalformedLog {
                detail: format!("line {}: bad float {field:?}: {e}", lineno + 2),
            })?;
            count += 1;
        }
        if count != 16 || line.split(',').count() != 16 {
            return Err(Error::MalformedLog {
                detail: format!(
                    "line {}: expected 16 columns, got {}",
                    lineno + 2,
                    line.split(',').count()
                ),
            });
        }
        ticks.push(TickRecord {
            t: fields[0],
            position_error: Vector3::new(fields[1], fields[2], fields[3]),
            attitude_error: Vector3::new(fields[4], fields[5], fields[6]),
            position_error_norm: fields[7],
            angle_rad: fields[8],
            force: Vector3::new(fields[9], fields[10], fields[11]),
            torque: Vector3::new(fields[12], fields[13], fields[14]),
            theta_hat: fields[15],
        });
    }
    Ok(ticks)
}

/// One row of the campaign summary.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IterationSummaryRow {
    /// Repetition index.
    pub k: usize,
    /// max_t ‖δP‖₂ in m.
    #[serde(rename = "max_dP_norm_m")]
    pub max_dp_norm_m: f64,
    /// max_t principal angle in degrees.
    pub max_angle_deg: f64,
    /// max_t θ̂_k(t).
    pub max_theta_hat: f64,
    /// max_t of the tracking energy.
    #[serde(rename = "max_V")]
    pub max_v: f64,
}

/// The campaign summary file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampaignSummary {
    /// Summary format version.
    pub schema_version: u32,
    /// Update law the campaign ran (external token).
    pub variant: String,
    /// Seed of the disturbance phase draws.
    pub seed: u64,
    /// Repetition count.
    pub iterations: usize,
    /// Task horizon in s.
    pub duration_s: f64,
    /// Control rate in Hz.
    pub frequency_hz: f64,
    /// Projection segment count.
    pub segments: usize,
    /// One row per repetition.
    #[serde(rename = "iteration")]
    pub rows: Vec<IterationSummaryRow>,
}

impl CampaignSummary {
    /// Builds the summary of a finished campaign.
    pub fn from_report(report: &CampaignReport) -> Self {
        let rows = report
            .iterations
            .iter()
            .map(|outcome| {
                let s = &outcome.log.summary;
                IterationSummaryRow {
                    k: outcome.log.iteration,
                    max_dp_norm_m: s.metrics.max_position_error,
                    max_angle_deg: s.metrics.max_angle.to_degrees(),
                    max_theta_hat: s.metrics.max_theta_hat,
                    max_v: s.max_energy,
                }
            })
            .collect();
        Self {
            schema_version: 1,
            variant: report.config.variant.token().to_string(),
            seed: report.config.seed,
            iterations: report.config.iterations,
            duration_s: report.config.duration_s,
            frequency_hz: report.config.frequency_hz,
            segments: report
                .config
                .grid()
                .map(|g| g.segment_count())
                .unwrap_or(report.config.segments),
            rows,
        }
    }

    /// Renders the summary as TOML.
    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::MalformedLog {
            detail: format!("summary serialization failure: {e}"),
        })
    }

    /// Parses a summary file.
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::MalformedLog {
            detail: format!("summary parse failure: {e}"),
        })
    }
}

/// Writes everything a campaign produced into `report.config.output_dir`:
/// the resolved config (`config.toml`), the summary (`summary.toml`), and
/// one tick log per iteration (`iter_XXX.csv`).
pub fn export_campaign(report: &CampaignReport) -> Result<PathBuf> {
    let dir = report.config.output_dir.clone();
    fs::create_dir_all(&dir)?;

    fs::write(dir.join("config.toml"), report.config.to_toml()?)?;
    fs::write(
        dir.join("summary.toml"),
        CampaignSummary::from_report(report).to_toml()?,
    )?;
    for outcome in &report.iterations {
        let path = dir.join(iteration_filename(outcome.log.iteration));
        write_iteration_csv(&path, &outcome.log.ticks)?;
    }
    Ok(dir)
}
