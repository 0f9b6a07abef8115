//! Campaign orchestration: repeated finite-horizon runs with learning
//! between repetitions, per-tick logging, convergence metrics, runtime
//! sanity monitors, and open-loop replay.
//!
//! One *iteration* is a single pass over \[0, T\]: the body is reset onto
//! the reference (initial error exactly zero), then every control tick
//! computes the tracking error, updates the estimate sample, applies the
//! wrench, and integrates body and reference one step under a zero-order
//! hold. One *campaign* chains iterations k = 0, 1, …, applying the
//! segment projection to each completed estimate profile before the next
//! iteration consumes it.
//!
//! The composite tracking energy
//!
//! ```text
//! V = k_p·crs(δQ̊ − 𝟏̊, exch(δQ̊ − 𝟏̊)) + ½·crs(δω̊, M̊·δω̊)
//! ```
//!
//! is logged per tick and watched by a loose runtime monitor (no later
//! iteration may exceed ten times the first run's peak), alongside a hard
//! bound on the learned estimates; a tripped monitor aborts the campaign
//! rather than writing garbage logs.

use nalgebra::Vector3;

use crate::config::ExperimentConfig;
use crate::controller::{
    run_controller_tick, segment_project, tick_time, EstimateProfile, SegmentGrid,
};
use crate::dual::{DualInertia, DualVector3};
use crate::dual_quaternion::DualQuaternion;
use crate::error::{Error, Result};
use crate::rigid_body::{
    error_state, step_body, step_desired, DesiredState, DisturbanceModel, ErrorState,
    RigidBodyState, SwingTwist, TwistProfile,
};

/// Composite tracking energy V ≥ 0; zero exactly at perfect tracking on the
/// +𝟏 attitude cover.
pub fn energy(err: &ErrorState, inertia: &DualInertia, k_p: f64) -> f64 {
    let e = *err.pose.as_dq() - DualQuaternion::identity();
    k_p * e.swap_dot(&e.swapped()) + 0.5 * err.twist.swap_dot(&inertia.apply(&err.twist))
}

/// One logged control tick.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TickRecord {
    /// Time in seconds.
    pub t: f64,
    /// Position error δP in m (actual body frame).
    pub position_error: Vector3<f64>,
    /// Vector part δq of the error attitude.
    pub attitude_error: Vector3<f64>,
    /// ‖δP‖₂ in m.
    pub position_error_norm: f64,
    /// Principal rotation angle of the error attitude, rad.
    pub angle_rad: f64,
    /// Commanded force in N.
    pub force: Vector3<f64>,
    /// Commanded torque in N·m.
    pub torque: Vector3<f64>,
    /// Estimate sample θ̂_k(t) used at this tick.
    pub theta_hat: f64,
}

/// Reductions over one iteration's tick records.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct LogMetrics {
    /// max_t ‖δP‖₂, m.
    pub max_position_error: f64,
    /// ‖δP(T)‖₂, m.
    pub final_position_error: f64,
    /// max_t ‖δq‖₂.
    pub max_attitude_vector: f64,
    /// ‖δq(T)‖₂.
    pub final_attitude_vector: f64,
    /// max_t of the principal angle, rad.
    pub max_angle: f64,
    /// Principal angle at T, rad.
    pub final_angle: f64,
    /// max_t θ̂_k(t).
    pub max_theta_hat: f64,
}

/// Computes the metric reductions over a tick log.
pub fn metrics(ticks: &[TickRecord]) -> LogMetrics {
    let mut out = LogMetrics::default();
    for record in ticks {
        out.max_position_error = out.max_position_error.max(record.position_error_norm);
        out.max_attitude_vector = out.max_attitude_vector.max(record.attitude_error.norm());
        out.max_angle = out.max_angle.max(record.angle_rad);
        out.max_theta_hat = out.max_theta_hat.max(record.theta_hat);
    }
    if let Some(last) = ticks.last() {
        out.final_position_error = last.position_error_norm;
        out.final_attitude_vector = last.attitude_error.norm();
        out.final_angle = last.angle_rad;
    }
    out
}

/// Per-iteration summary: metric reductions plus the energy envelope.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterationSummary {
    /// Metric reductions over the iteration's ticks.
    pub metrics: LogMetrics,
    /// max_t V.
    pub max_energy: f64,
    /// V at t = T.
    pub final_energy: f64,
}

/// Complete log of one iteration.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationLog {
    /// Repetition index k.
    pub iteration: usize,
    /// One record per control tick (T·frequency + 1 of them).
    pub ticks: Vec<TickRecord>,
    /// Reductions over `ticks`.
    pub summary: IterationSummary,
}

/// Everything one iteration produced.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationOutcome {
    /// The tick log.
    pub log: IterationLog,
    /// The estimate profile θ̂_k this iteration built.
    pub profile: EstimateProfile,
    /// The projected previous profile the iteration consumed.
    pub prev_projected: EstimateProfile,
    /// The per-tick increments actually added (already saturated where the
    /// law caps them), exactly as computed.
    pub increments: Vec<f64>,
}

/// Everything a campaign produced, in iteration order.
#[derive(Debug, Clone, PartialEq)]
pub struct CampaignReport {
    /// The configuration the campaign ran under.
    pub config: ExperimentConfig,
    /// One outcome per iteration k = 0..iterations.
    pub iterations: Vec<IterationOutcome>,
}

/// Open-loop replay deviations (all absolute maxima over the log).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReplayReport {
    /// Ticks checked.
    pub ticks: usize,
    /// Max |δP component − logged| in m.
    pub max_position_deviation: f64,
    /// Max |δq component − logged|.
    pub max_attitude_deviation: f64,
    /// Max |‖δP‖ − logged|.
    pub max_norm_deviation: f64,
    /// Max |angle − logged| in rad.
    pub max_angle_deviation: f64,
}

/// Absolute tolerance for replay deviations. Logged floats round-trip
/// exactly through the text logs and the disturbance draws are re-seeded,
/// so replay is bit-identical in practice; the tolerance only guards the
/// comparison.
pub const REPLAY_TOL: f64 = 1e-9;

/// A fully prepared campaign: validated config, factored inertia, cached
/// reference trajectory.
#[derive(Debug, Clone)]
pub struct Campaign {
    config: ExperimentConfig,
    inertia: DualInertia,
    grid: SegmentGrid,
    disturbances: DisturbanceModel,
    /// Reference states at every control tick, integrated once — repetition
    /// resets only touch the actual body.
    desired: Vec<DesiredState>,
    dt: f64,
    ticks: usize,
}

impl Campaign {
    /// Validates the config and integrates the reference trajectory.
    pub fn new(config: ExperimentConfig) -> Result<Self> {
        config.validate()?;
        let inertia = config.body.dual_inertia()?;
        let grid = config.grid()?;
        let disturbances = config.disturbance.model(config.body.mass, config.seed);
        let profile = config.trajectory.profile();
        let dt = config.dt();
        let ticks = config.ticks();

        let mut desired = Vec::with_capacity(ticks);
        let mut current = DesiredState {
            pose: config.desired.initial_pose()?,
            twist: profile.twist(0.0),
            twist_rate: profile.twist_rate(0.0),
        };
        desired.push(current);
        for tick in 0..ticks - 1 {
            current = step_desired(&current, &profile, tick_time(tick, config.frequency_hz), dt)?;
            desired.push(current);
        }

        Ok(Self {
            config,
            inertia,
            grid,
            disturbances,
            desired,
            dt,
            ticks,
        })
    }

    /// The validated configuration.
    pub fn config(&self) -> &ExperimentConfig {
        &self.config
    }

    /// Reference states at every control tick.
    pub fn desired_states(&self) -> &[DesiredState] {
        &self.desired
    }

    /// The projection grid.
    pub fn grid(&self) -> &SegmentGrid {
        &self.grid
    }

    /// The factored dual inertia of the true plant.
    pub fn inertia(&self) -> &DualInertia {
        &self.inertia
    }

    /// The disturbance model (seeded from the config).
    pub fn disturbances(&self) -> &DisturbanceModel {
        &self.disturbances
    }

    /// The reference twist profile.
    pub fn trajectory(&self) -> SwingTwist {
        self.config.trajectory.profile()
    }

    fn at_tick(iteration: usize, tick: usize, t: f64) -> impl FnOnce(Error) -> Error {
        move |source| Error::AtTick {
            iteration,
            tick,
            t,
            source: Box::new(source),
        }
    }

    /// Runs iteration k against the projected previous profile.
    pub fn run_iteration(
        &self,
        iteration: usize,
        prev_projected: &EstimateProfile,
    ) -> Result<IterationOutcome> {
        if prev_projected.len() != self.ticks {
            return Err(Error::ProfileMismatch {
                detail: format!(
                    "previous profile has {} ticks, campaign needs {}",
                    prev_projected.len(),
                    self.ticks
                ),
            });
        }
        let gains = &self.config.gains;
        let phases = self.disturbances.force_phases(iteration);
        let mut state = RigidBodyState::aligned_with(&self.desired[0]);
        let mut profile = EstimateProfile::zeros(self.ticks, iteration);
        let mut increments = Vec::with_capacity(self.ticks);
        let mut records = Vec::with_capacity(self.ticks);
        let mut max_energy = 0.0f64;
        let mut final_energy = 0.0f64;

        for tick in 0..self.ticks {
            let t = tick_time(tick, self.config.frequency_hz);
            let context = Self::at_tick(iteration, tick, t);
            let desired = &self.desired[tick];
            let err = error_state(&state, desired).map_err(context)?;

            let context = Self::at_tick(iteration, tick, t);
            let out = run_controller_tick(
                tick,
                iteration,
                &err,
                desired,
                prev_projected,
                &mut profile,
                gains,
                self.config.variant,
            )
            .map_err(context)?;
            increments.push(out.increment);

            let v = energy(&err, &self.inertia, gains.k_p);
            max_energy = max_energy.max(v);
            final_energy = v;

            records.push(TickRecord {
                t,
                position_error: err.position,
                attitude_error: err.attitude_vector,
                position_error_norm: err.position.norm(),
                angle_rad: err.angle(),
                force: out.wrench.real,
                torque: out.wrench.dual,
                theta_hat: out.theta_hat,
            });

            if tick + 1 < self.ticks {
                let context = Self::at_tick(iteration, tick, t);
                let disturbance = self
                    .disturbances
                    .sample(t, &phases, &state)
                    .map_err(context)?;
                let context = Self::at_tick(iteration, tick, t);
                state = step_body(&state, &self.inertia, &out.wrench, &disturbance, self.dt)
                    .map_err(context)?;
            }
        }

        let summary = IterationSummary {
            metrics: metrics(&records),
            max_energy,
            final_energy,
        };
        Ok(IterationOutcome {
            log: IterationLog {
                iteration,
                ticks: records,
                summary,
            },
            profile,
            prev_projected: prev_projected.clone(),
            increments,
        })
    }

    /// Runs the full campaign, projecting each completed profile for the
    /// next iteration and enforcing the runtime monitors.
    pub fn run(&self) -> Result<CampaignReport> {
        let mut iterations = Vec::with_capacity(self.config.iterations);
        let mut prev = EstimateProfile::zeros(self.ticks, 0);
        let mut first_peak_energy = 0.0f64;

        for k in 0..self.config.iterations {
            let outcome = self.run_iteration(k, &prev)?;

            let peak = outcome.log.summary.max_energy;
            if k == 0 {
                first_peak_energy = peak;
            } else if peak > 10.0 * first_peak_energy {
                return Err(Error::MonitorTripped {
                    iteration: k,
                    detail: format!(
                        "peak tracking energy {peak:.6e} exceeds 10× the first run's \
                         {first_peak_energy:.6e}"
                    ),
                });
            }
            let peak_theta = outcome.log.summary.metrics.max_theta_hat;
            if !(peak_theta < 10.0) {
                return Err(Error::MonitorTripped {
                    iteration: k,
                    detail: format!("estimate profile reached {peak_theta}, bound is 10"),
                });
            }

            prev = segment_project(
                &outcome.profile,
                &self.grid,
                self.config.frequency_hz,
                self.config.gains.k_c,
            )?;
            iterations.push(outcome);
        }

        Ok(CampaignReport {
            config: self.config.clone(),
            iterations,
        })
    }

    /// Replays a logged iteration open-loop: applies the logged wrench and
    /// the re-seeded disturbances to a fresh body and checks the recomputed
    /// errors against the logged ones.
    pub fn replay(&self, iteration: usize, ticks: &[TickRecord]) -> Result<ReplayReport> {
        if ticks.len() != self.ticks {
            return Err(Error::MalformedLog {
                detail: format!(
                    "log holds {} ticks, the configuration produces {}",
                    ticks.len(),
                    self.ticks
                ),
            });
        }
        let phases = self.disturbances.force_phases(iteration);
        let mut state = RigidBodyState::aligned_with(&self.desired[0]);
        let mut report = ReplayReport {
            ticks: ticks.len(),
            max_position_deviation: 0.0,
            max_attitude_deviation: 0.0,
            max_norm_deviation: 0.0,
            max_angle_deviation: 0.0,
        };

        for (tick, record) in ticks.iter().enumerate() {
            let t = tick_time(tick, self.config.frequency_hz);
            if record.t != t {
                return Err(Error::ReplayMismatch {
                    t,
                    detail: format!("logged time {} disagrees with the config grid", record.t),
                });
            }
            let err = error_state(&state, &self.desired[tick])
                .map_err(Self::at_tick(iteration, tick, t))?;

            let dp = (err.position - record.position_error).abs().max();
            let dq = (err.attitude_vector - record.attitude_error).abs().max();
            report.max_position_deviation = report.max_position_deviation.max(dp);
            report.max_attitude_deviation = report.max_attitude_deviation.max(dq);
            report.max_norm_deviation = report
                .max_norm_deviation
                .max((err.position.norm() - record.position_error_norm).abs());
            report.max_angle_deviation = report
                .max_angle_deviation
                .max((err.angle() - record.angle_rad).abs());

            if tick + 1 < self.ticks {
                let wrench = DualVector3::new(record.force, record.torque);
                let disturbance = self
                    .disturbances
                    .sample(t, &phases, &state)
                    .map_err(Self::at_tick(iteration, tick, t))?;
                state = step_body(&state, &self.inertia, &wrench, &disturbance, self.dt)
                    .map_err(Self::at_tick(iteration, tick, t))?;
            }
        }

        let worst = report
            .max_position_deviation
            .max(report.max_attitude_deviation)
            .max(report.max_norm_deviation)
            .max(report.max_angle_deviation);
        if !(worst <= REPLAY_TOL) {
            return Err(Error::ReplayMismatch {
                t: 0.0,
                detail: format!("max deviation {worst:.3e} exceeds {REPLAY_TOL:.0e}"),
            });
        }
        Ok(report)
    }
}

/// Runs a campaign under `config` and writes its logs, summary, and
/// resolved config into `config.output_dir`.
pub fn run_campaign(config: ExperimentConfig) -> Result<CampaignReport> {
    let campaign = Campaign::new(config)?;
    let report = campaign.run()?;
    crate::report::export_campaign(&report)?;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{DesiredConfig, TrajectoryConfig};
    use crate::controller::UpdateLaw;
    use crate::dual_quaternion::UnitDualQuaternion;
    use approx::assert_relative_eq;
    use nalgebra::Matrix3;

    fn experiment_inertia() -> DualInertia {
        DualInertia::new(
            19.0,
            Matrix3::new(12.0, 1.0, 1.0, 1.0, 10.0, 2.0, 1.0, 2.0, 10.0),
        )
        .unwrap()
    }

    fn zero_error() -> ErrorState {
        ErrorState {
            pose: UnitDualQuaternion::identity(),
            twist: DualVector3::zero(),
            position: Vector3::zeros(),
            attitude_vector: Vector3::zeros(),
        }
    }

    /// Short but non-trivial campaign config: 0.2 s at 200 Hz, full
    /// disturbances, two segments.
    fn small_config() -> ExperimentConfig {
        ExperimentConfig {
            duration_s: 0.2,
            frequency_hz: 200.0,
            iterations: 3,
            segments: 2,
            seed: 11,
            ..ExperimentConfig::default()
        }
    }

    /// A config whose exact equilibrium is representable: identity pose at
    /// the origin, no motion, no disturbances, no gravity.
    fn equilibrium_config() -> ExperimentConfig {
        let mut config = ExperimentConfig {
            duration_s: 0.05,
            frequency_hz: 100.0,
            iterations: 3,
            segments: 1,
            ..ExperimentConfig::default()
        };
        config.desired = DesiredConfig {
            attitude: [1.0, 0.0, 0.0, 0.0],
            position: [0.0, 0.0, 0.0],
        };
        config.trajectory = TrajectoryConfig {
            roll_amplitude: 0.0,
            roll_frequency: 1.0,
            orbit_rate: 0.0,
            speed: 0.0,
        };
        config.disturbance.torque_magnitudes = [0.0; 3];
        config.disturbance.force_magnitudes = [0.0; 3];
        config.disturbance.gravity_mu = 0.0;
        config
    }

    #[test]
    fn energy_vanishes_only_at_the_positive_cover() {
        let inertia = experiment_inertia();
        assert_eq!(energy(&zero_error(), &inertia, 1.0), 0.0);

        // At the −𝟏 cover the gap is e = −2·𝟏 + ε·0, so the pose term is
        // k_p·(‖e_r‖² + ‖e_d‖²) = 4·k_p: the energy sees the two covers
        // asymmetrically.
        let flipped = ErrorState {
            pose: UnitDualQuaternion::new(-*UnitDualQuaternion::identity().as_dq()).unwrap(),
            twist: DualVector3::zero(),
            position: Vector3::zeros(),
            attitude_vector: Vector3::zeros(),
        };
        assert_eq!(energy(&flipped, &inertia, 1.0), 4.0);
        assert_eq!(energy(&flipped, &inertia, 2.5), 10.0);
    }

    #[test]
    fn energy_of_a_pure_angular_rate_error() {
        // ½·crs(δω̊, M̊·δω̊) with δω̊ = [1,0,0] + ε·0 routes through the
        // inertia row J₁ = (12, 1, 1): ½·12 = 6.
        let inertia = experiment_inertia();
        let err = ErrorState {
            twist: DualVector3::new(Vector3::new(1.0, 0.0, 0.0), Vector3::zeros()),
            ..zero_error()
        };
        assert_eq!(energy(&err, &inertia, 1.0), 6.0);
    }

    #[test]
    fn metrics_match_a_brute_force_reduction() {
        let records: Vec<TickRecord> = (0..20)
            .map(|i| {
                let x = i as f64;
                TickRecord {
                    t: x * 0.1,
                    position_error: Vector3::new(x, -x, 0.5 * x),
                    attitude_error: Vector3::new(0.01 * x, 0.0, -0.02 * x),
                    position_error_norm: Vector3::new(x, -x, 0.5 * x).norm(),
                    angle_rad: (0.03 * x).sin().abs(),
                    force: Vector3::zeros(),
                    torque: Vector3::zeros(),
                    theta_hat: if i == 13 { 0.9 } else { 0.1 },
                }
            })
            .collect();
        let m = metrics(&records);
        let brute_max_pos = records
            .iter()
            .map(|r| r.position_error_norm)
            .fold(0.0f64, f64::max);
        assert_eq!(m.max_position_error, brute_max_pos);
        assert_eq!(m.final_position_error, records.last().unwrap().position_error_norm);
        assert_eq!(m.max_theta_hat, 0.9);
        assert_eq!(m.final_angle, records.last().unwrap().angle_rad);

        assert_eq!(metrics(&[]), LogMetrics::default());
    }

    #[test]
    fn equilibrium_campaign_logs_exact_zeros() {
        let campaign = Campaign::new(equilibrium_config()).unwrap();
        let report = campaign.run().unwrap();
        assert_eq!(report.iterations.len(), 3);
        for outcome in &report.iterations {
            assert_eq!(outcome.log.ticks.len(), campaign.config().ticks());
            for record in &outcome.log.ticks {
                assert_eq!(record.position_error, Vector3::zeros());
                assert_eq!(record.attitude_error, Vector3::zeros());
                assert_eq!(record.angle_rad, 0.0);
                assert_eq!(record.force, Vector3::zeros());
                assert_eq!(record.torque, Vector3::zeros());
                assert_eq!(record.theta_hat, 0.0);
            }
            assert!(outcome.increments.iter().all(|&d| d == 0.0));
            assert_eq!(outcome.log.summary.max_energy, 0.0);
        }
    }

    #[test]
    fn repetition_zero_never_learns() {
        let campaign = Campaign::new(small_config()).unwrap();
        let report = campaign.run().unwrap();
        let first = &report.iterations[0];
        assert!(first.log.ticks.iter().all(|r| r.theta_hat == 0.0));
        assert!(first.increments.iter().all(|&d| d == 0.0));
        // Later repetitions do learn on this disturbed config.
        let second = &report.iterations[1];
        assert!(second.log.summary.metrics.max_theta_hat > 0.0);
    }

    #[test]
    fn campaigns_are_deterministic() {
        let a = Campaign::new(small_config()).unwrap().run().unwrap();
        let b = Campaign::new(small_config()).unwrap().run().unwrap();
        assert_eq!(a, b);

        let mut reseeded_config = small_config();
        reseeded_config.seed = 12;
        let c = Campaign::new(reseeded_config).unwrap().run().unwrap();
        assert_ne!(
            a.iterations[1].log.ticks,
            c.iterations[1].log.ticks,
            "different seeds must draw different disturbance phases"
        );
    }

    #[test]
    fn estimates_ride_on_the_projected_previous_profile() {
        let campaign = Campaign::new(small_config()).unwrap();
        let report = campaign.run().unwrap();
        for outcome in &report.iterations[1..] {
            for tick in 0..outcome.profile.len() {
                let prev = outcome.prev_projected.get(tick);
                let now = outcome.profile.get(tick);
                assert!(now >= prev, "estimate shrank at tick {tick}");
                assert_eq!(now, prev + outcome.increments[tick]);
            }
        }
    }

    #[test]
    fn estimate_monitor_trips_on_runaway_learning() {
        let mut config = small_config();
        // A huge learning gain saturating at a bound beyond the monitor
        // forces the estimate over it within one repetition while the
        // wrench amplitude stays sane.
        config.gains.k_theta = 1e6;
        config.gains.k_l = Some(10.5);
        let campaign = Campaign::new(config).unwrap();
        match campaign.run() {
            Err(Error::MonitorTripped { iteration, .. }) => assert_eq!(iteration, 1),
            other => panic!("expected a tripped monitor, got {other:?}"),
        }
    }

    #[test]
    fn run_iteration_rejects_misaligned_profiles() {
        let campaign = Campaign::new(small_config()).unwrap();
        let short = EstimateProfile::zeros(3, 0);
        assert!(campaign.run_iteration(0, &short).is_err());
    }

    #[test]
    fn replay_reproduces_a_logged_iteration_exactly() {
        let campaign = Campaign::new(small_config()).unwrap();
        let report = campaign.run().unwrap();
        let replayed = campaign.replay(1, &report.iterations[1].log.ticks).unwrap();
        assert_eq!(replayed.max_position_deviation, 0.0);
        assert_eq!(replayed.max_attitude_deviation, 0.0);
        assert_eq!(replayed.max_norm_deviation, 0.0);
        assert_eq!(replayed.max_angle_deviation, 0.0);
    }

    #[test]
    fn replay_detects_a_corrupted_wrench() {
        let campaign = Campaign::new(small_config()).unwrap();
        let report = campaign.run().unwrap();
        let mut ticks = report.iterations[1].log.ticks.clone();
        ticks[5].force.x += 1.0;
        assert!(matches!(
            campaign.replay(1, &ticks),
            Err(Error::ReplayMismatch { .. })
        ));

        let truncated = &report.iterations[1].log.ticks[..10];
        assert!(matches!(
            campaign.replay(1, truncated),
            Err(Error::MalformedLog { .. })
        ));
    }

    #[test]
    fn wrong_phase_stream_shows_up_in_replay() {
        // Replaying iteration 1's log as iteration 2 must fail: the force
        // disturbance phases differ.
        let campaign = Campaign::new(small_config()).unwrap();
        let report = campaign.run().unwrap();
        assert!(campaign.replay(2, &report.iterations[1].log.ticks).is_err());
    }

    #[test]
    fn single_iteration_campaign_is_a_pure_feedback_run() {
        let mut config = small_config();
        config.iterations = 1;
        config.variant = UpdateLaw::Cumulative;
        config.gains.k_l = None;
        let report = Campaign::new(config).unwrap().run().unwrap();
        assert_eq!(report.iterations.len(), 1);
        assert_eq!(
            report.iterations[0].log.summary.metrics.max_theta_hat,
            0.0
        );
    }

    #[test]
    fn desired_trajectory_is_consistent_with_its_profile() {
        let campaign = Campaign::new(small_config()).unwrap();
        let profile = campaign.trajectory();
        let states = campaign.desired_states();
        assert_eq!(states.len(), campaign.config().ticks());
        for (tick, state) in states.iter().enumerate() {
            let t = tick_time(tick, campaign.config().frequency_hz);
            let want = profile.twist(t);
            assert_relative_eq!(state.twist.real, want.real, epsilon = 1e-12);
            assert_relative_eq!(state.twist.dual, want.dual, epsilon = 1e-12);
        }
    }
}
