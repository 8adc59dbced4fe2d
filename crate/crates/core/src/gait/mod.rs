//! Quasi-static crawl gait.
//!
//! A cycle is split into four equal slots, one per leg in the configured
//! swing order. Each slot starts with a four-leg support phase, in which the
//! body advances a quarter stride and sways sideways toward the centroid of
//! the three feet that will carry it next, followed by a swing phase, in which
//! the body holds still and the slot's leg steps forward one stride. Stance
//! feet never slide: their world contact points only change at touch-down.
//!
//! The centre of mass is the body-frame origin (legs are massless), so static
//! stability reduces to its ground projection staying inside the support
//! polygon of the stance feet.

mod support;

use nalgebra::Vector3;
use thiserror::Error;

pub use support::{stability_margin, support_polygon, DEDUP_TOLERANCE};

use crate::kinematics::{
    body_to_leg_frame, forward_kinematics, inverse_kinematics, leg_to_body_frame, Branch,
    BranchPreference, FootPosition, JointAngles, KinematicsError,
};
use crate::model::{validate_config, LegId, RobotConfig, ValidationReport};
use crate::trajectory::{fit_cubic, plan_swing, CubicCoefficients, SwingPlan};

/// Sampling period of the stability report (s).
pub const STABILITY_SAMPLE_PERIOD: f64 = 0.010;

/// Every gait foot target is solved on this branch.
pub const GAIT_BRANCH: Branch = Branch::ElbowDown;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GaitError {
    #[error("invalid config:\n{0}")]
    InvalidConfig(ValidationReport),
    #[error("invalid gait parameter: {0}")]
    InvalidParameter(String),
    #[error(
        "duty factor {duty_factor} leaves no four-leg support time; a crawl needs more than 0.75"
    )]
    NotACrawl { duty_factor: f64 },
    #[error("stride unreachable for leg {leg} in phase {phase}: {reason}")]
    StrideUnreachable {
        leg: LegId,
        phase: usize,
        reason: String,
    },
    #[error("stability margin {min_margin:.6} m at t = {time:.3} s is below the required {required:.6} m")]
    StabilityViolation {
        min_margin: f64,
        time: f64,
        required: f64,
    },
    #[error("support needs 3 non-collinear contacts, got {distinct} distinct point(s)")]
    DegenerateSupport { distinct: usize },
    #[error("leg {leg} cannot reach its target at t = {t:.6} s: {source}")]
    UnreachableSample {
        leg: LegId,
        t: f64,
        #[source]
        source: KinematicsError,
    },
    #[error("timeline step must be positive, got {0}")]
    InvalidTimestep(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrawlParams {
    pub cycles: usize,
    pub stride: f64,
    pub cycle_period: f64,
    /// Return the plan even when the stability margin falls short.
    pub force: bool,
}

impl CrawlParams {
    pub fn from_config(cfg: &RobotConfig) -> Self {
        Self {
            cycles: 1,
            stride: cfg.gait.stride,
            cycle_period: cfg.gait.cycle_period,
            force: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LegRole {
    Stance,
    Swing,
}

impl LegRole {
    pub fn label(self) -> &'static str {
        match self {
            LegRole::Stance => "stance",
            LegRole::Swing => "swing",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GaitPhase {
    pub start: f64,
    pub duration: f64,
    pub swing_leg: Option<LegId>,
    /// Role of every leg, in layout order.
    pub roles: Vec<(LegId, LegRole)>,
    /// Body displacement over the phase in the world frame (m).
    pub body_translation: [f64; 2],
}

impl GaitPhase {
    pub fn end(&self) -> f64 {
        self.start + self.duration
    }

    pub fn role(&self, leg: LegId) -> LegRole {
        if self.swing_leg == Some(leg) {
            LegRole::Swing
        } else {
            LegRole::Stance
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StabilitySample {
    pub t: f64,
    /// Counter-clockwise support polygon (world ground points).
    pub support: Vec<[f64; 2]>,
    pub com: [f64; 2],
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StabilityReport {
    pub samples: Vec<StabilitySample>,
    pub min_margin: f64,
    pub min_margin_time: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GaitPlan {
    pub phases: Vec<GaitPhase>,
    /// Swing plan (leg frame) of every swing phase, parallel to `phases`.
    pub swings: Vec<Option<SwingPlan>>,
    /// Layout leg order used by `contacts`.
    pub legs: Vec<LegId>,
    /// World ground contact of every leg at the start of each phase.
    pub contacts: Vec<Vec<[f64; 2]>>,
    /// World body position at the start of each phase.
    pub body_start: Vec<[f64; 2]>,
    pub body_height: f64,
    pub stride: f64,
    pub cycle_period: f64,
    pub cycles: usize,
    /// Instants of the stability report.
    pub timetable: Vec<f64>,
    pub report: StabilityReport,
    ease: Vec<Option<CubicCoefficients>>,
}

impl GaitPlan {
    pub fn total_duration(&self) -> f64 {
        self.cycles as f64 * self.cycle_period
    }

    /// Phase containing `t`; a boundary instant belongs to the later phase.
    pub fn phase_index_at(&self, t: f64) -> usize {
        self.phases
            .partition_point(|p| p.start <= t)
            .saturating_sub(1)
    }

    pub fn phase_at(&self, t: f64) -> &GaitPhase {
        &self.phases[self.phase_index_at(t)]
    }

    /// World (x, y) of the body origin at `t`.
    pub fn body_at(&self, t: f64) -> [f64; 2] {
        let k = self.phase_index_at(t);
        let phase = &self.phases[k];
        let start = self.body_start[k];
        match &self.ease[k] {
            Some(ease) => {
                let s = ease.position((t - phase.start).clamp(0.0, phase.duration));
                [
                    start[0] + phase.body_translation[0] * s,
                    start[1] + phase.body_translation[1] * s,
                ]
            }
            None => start,
        }
    }

    pub fn contact(&self, phase: usize, leg: LegId) -> Option<[f64; 2]> {
        let i = self.legs.iter().position(|&l| l == leg)?;
        Some(self.contacts[phase][i])
    }

    /// World ground points of the stance feet at `t`.
    pub fn stance_points_at(&self, t: f64) -> Vec<[f64; 2]> {
        let k = self.phase_index_at(t);
        let phase = &self.phases[k];
        self.legs
            .iter()
            .zip(&self.contacts[k])
            .filter(|(&leg, _)| phase.role(leg) == LegRole::Stance)
            .map(|(_, &p)| p)
            .collect()
    }

    pub fn stability_at(&self, t: f64) -> Result<StabilitySample, GaitError> {
        let support = support_polygon(&self.stance_points_at(t))?;
        let com = self.body_at(t);
        let margin = stability_margin(&support, com);
        Ok(StabilitySample {
            t,
            support,
            com,
            margin,
        })
    }

    pub fn margin_at(&self, t: f64) -> Result<f64, GaitError> {
        self.stability_at(t).map(|s| s.margin)
    }
}

/// `n·dt` for every n with `n·dt ≤ total`.
pub fn uniform_times(total: f64, dt: f64) -> Vec<f64> {
    let count = (total / dt + 1e-9).floor() as usize + 1;
    (0..count).map(|i| (i as f64 * dt).min(total)).collect()
}

/// Neutral foot of each leg in the body frame (x, y), layout order.
fn neutral_feet(cfg: &RobotConfig) -> Vec<(LegId, [f64; 2])> {
    let reach = cfg.neutral_reach();
    cfg.layout
        .legs
        .iter()
        .map(|m| {
            let (s, c) = m.yaw.sin_cos();
            (m.id, [m.x + reach * c, m.y + reach * s])
        })
        .collect()
}

/// Fraction of the way the body sways toward the centroid of the next
/// three-leg support.
pub const SWAY_FRACTION: f64 = 0.5;

/// Lateral body offset used while `lifted` swings: halfway from the mean y of
/// all four neutral feet to the mean y of the three that stay down.
fn sway_for(neutral: &[(LegId, [f64; 2])], lifted: LegId) -> f64 {
    let all = neutral.iter().map(|(_, p)| p[1]).sum::<f64>() / neutral.len() as f64;
    let rest: Vec<f64> = neutral
        .iter()
        .filter(|(id, _)| *id != lifted)
        .map(|(_, p)| p[1])
        .collect();
    SWAY_FRACTION * (rest.iter().sum::<f64>() / rest.len() as f64 - all)
}

/// Smallest margin over the legs of a crawl stepping in place: for each leg,
/// the other three neutral feet with the body swayed for that leg.
pub fn standing_margin(cfg: &RobotConfig) -> Result<f64, GaitError> {
    let neutral = neutral_feet(cfg);
    let mut best = f64::INFINITY;
    for &(lifted, _) in &neutral {
        let points: Vec<[f64; 2]> = neutral
            .iter()
            .filter(|(id, _)| *id != lifted)
            .map(|(_, p)| *p)
            .collect();
        let polygon = support_polygon(&points)?;
        best = best.min(stability_margin(
            &polygon,
            [0.0, sway_for(&neutral, lifted)],
        ));
    }
    Ok(best)
}

fn stance_solution(
    cfg: &RobotConfig,
    leg: LegId,
    body: [f64; 2],
    contact: [f64; 2],
) -> Result<JointAngles, String> {
    let local = Vector3::new(
        contact[0] - body[0],
        contact[1] - body[1],
        -cfg.layout.body_height,
    );
    let target = body_to_leg_frame(&cfg.layout, leg, local).map_err(|e| e.to_string())?;
    let solutions = inverse_kinematics(
        &cfg.geometry,
        &cfg.limits,
        &target,
        BranchPreference::Prefer(GAIT_BRANCH),
    )
    .map_err(|e| e.to_string())?;
    let s = solutions
        .iter()
        .find(|s| s.branch == GAIT_BRANCH)
        .ok_or_else(|| format!("no {GAIT_BRANCH} solution for {target}"))?;
    if !s.within_limits {
        return Err(format!("joint limits exceeded at {target}"));
    }
    Ok(s.angles)
}

/// Builds a crawl of `params.cycles` cycles.
///
/// Fails with [`GaitError::StrideUnreachable`] if any stance or swing target
/// leaves the elbow-down workspace within joint limits, and with
/// [`GaitError::StabilityViolation`] if the margin sampled every 10 ms drops
/// below `gait.min_margin` (unless `params.force` is set).
pub fn generate_crawl(cfg: &RobotConfig, params: &CrawlParams) -> Result<GaitPlan, GaitError> {
    let report = validate_config(cfg);
    if !report.is_empty() {
        return Err(GaitError::InvalidConfig(report));
    }
    if params.cycles == 0 {
        return Err(GaitError::InvalidParameter(
            "cycles must be at least 1".into(),
        ));
    }
    if params.stride < 0.0 || !params.stride.is_finite() {
        return Err(GaitError::InvalidParameter(format!(
            "stride must be a non-negative length, got {}",
            params.stride
        )));
    }
    if params.cycle_period <= 0.0 || !params.cycle_period.is_finite() {
        return Err(GaitError::InvalidParameter(format!(
            "cycle period must be positive, got {}",
            params.cycle_period
        )));
    }

    let period = params.cycle_period;
    let stride = params.stride;
    let slot = period / 4.0;
    let swing_time = (1.0 - cfg.gait.duty_factor) * period;
    let support_time = slot - swing_time;
    if support_time <= 1e-12 * period {
        return Err(GaitError::NotACrawl {
            duty_factor: cfg.gait.duty_factor,
        });
    }

    let neutral = neutral_feet(cfg);
    let legs: Vec<LegId> = neutral.iter().map(|(id, _)| *id).collect();
    let order = &cfg.gait.swing_order;
    let slot_of = |leg: LegId| {
        order
            .iter()
            .position(|&l| l == leg)
            .expect("validated order")
    };

    // feet are staggered so that each lands stride/2 ahead of neutral and is
    // carried back a quarter stride per support phase until it lifts
    let mut contacts: Vec<[f64; 2]> = neutral
        .iter()
        .map(|&(id, p)| {
            let j = slot_of(id) as f64;
            [p[0] + stride / 2.0 - (3.0 - j) * stride / 4.0, p[1]]
        })
        .collect();
    let mut body = [0.0, sway_for(&neutral, order[3])];

    let ease = fit_cubic(0.0, 1.0, 0.0, 0.0, support_time).expect("positive support time");
    let height = cfg.layout.body_height;

    let mut plan = GaitPlan {
        phases: Vec::with_capacity(8 * params.cycles),
        swings: Vec::new(),
        legs: legs.clone(),
        contacts: Vec::new(),
        body_start: Vec::new(),
        body_height: height,
        stride,
        cycle_period: period,
        cycles: params.cycles,
        timetable: Vec::new(),
        report: StabilityReport {
            samples: Vec::new(),
            min_margin: f64::INFINITY,
            min_margin_time: 0.0,
        },
        ease: Vec::new(),
    };
    let all_stance: Vec<(LegId, LegRole)> = legs.iter().map(|&l| (l, LegRole::Stance)).collect();

    for cycle in 0..params.cycles {
        for (j, &leg) in order.iter().enumerate() {
            let slot_index = 4 * cycle + j;
            let slot_start = slot_index as f64 * slot;

            // support: advance and sway
            let next_body = [
                (slot_index + 1) as f64 * stride / 4.0,
                sway_for(&neutral, leg),
            ];
            plan.phases.push(GaitPhase {
                start: slot_start,
                duration: support_time,
                swing_leg: None,
                roles: all_stance.clone(),
                body_translation: [next_body[0] - body[0], next_body[1] - body[1]],
            });
            plan.swings.push(None);
            plan.contacts.push(contacts.clone());
            plan.body_start.push(body);
            plan.ease.push(Some(ease));
            body = next_body;

            // swing: body holds, `leg` steps one stride
            let phase_index = plan.phases.len();
            let li = legs.iter().position(|&l| l == leg).expect("leg in layout");
            let lift = contacts[li];
            let touchdown = [lift[0] + stride, lift[1]];
            let to_leg = |p: [f64; 2]| {
                body_to_leg_frame(
                    &cfg.layout,
                    leg,
                    Vector3::new(p[0] - body[0], p[1] - body[1], -height),
                )
                .expect("leg in layout")
            };
            let unreachable = |reason: String| GaitError::StrideUnreachable {
                leg,
                phase: phase_index,
                reason,
            };
            let swing = plan_swing(
                &cfg.geometry,
                &cfg.limits,
                &to_leg(lift),
                &to_leg(touchdown),
                cfg.gait.clearance,
                swing_time,
                cfg.gait.swing_segments,
                GAIT_BRANCH,
            )
            .map_err(|e| unreachable(e.to_string()))?;
            if let Some(k) = swing
                .knots
                .iter()
                .find(|k| !cfg.limits.contains(k.angles.normalized().as_array()))
            {
                return Err(unreachable(format!(
                    "joint limits exceeded at swing knot t = {:.6} s",
                    k.t
                )));
            }

            plan.phases.push(GaitPhase {
                start: slot_start + support_time,
                duration: swing_time,
                swing_leg: Some(leg),
                roles: legs
                    .iter()
                    .map(|&l| {
                        (
                            l,
                            if l == leg {
                                LegRole::Swing
                            } else {
                                LegRole::Stance
                            },
                        )
                    })
                    .collect(),
                body_translation: [0.0, 0.0],
            });
            plan.swings.push(Some(swing));
            plan.contacts.push(contacts.clone());
            plan.body_start.push(body);
            plan.ease.push(None);
            contacts[li] = touchdown;
        }
    }

    // stance reachability and stability, sampled on the report timetable
    plan.timetable = uniform_times(plan.total_duration(), STABILITY_SAMPLE_PERIOD);
    for &t in &plan.timetable {
        let k = plan.phase_index_at(t);
        let body = plan.body_at(t);
        for (i, &leg) in legs.iter().enumerate() {
            if plan.phases[k].role(leg) == LegRole::Stance {
                stance_solution(cfg, leg, body, plan.contacts[k][i]).map_err(|reason| {
                    GaitError::StrideUnreachable {
                        leg,
                        phase: k,
                        reason: format!("stance at t = {t:.3} s: {reason}"),
                    }
                })?;
            }
        }
        let sample = plan.stability_at(t)?;
        if sample.margin < plan.report.min_margin {
            plan.report.min_margin = sample.margin;
            plan.report.min_margin_time = t;
        }
        plan.report.samples.push(sample);
    }

    if plan.report.min_margin < cfg.gait.min_margin && !params.force {
        return Err(GaitError::StabilityViolation {
            min_margin: plan.report.min_margin,
            time: plan.report.min_margin_time,
            required: cfg.gait.min_margin,
        });
    }
    Ok(plan)
}

#[derive(Debug, Clone, PartialEq)]
pub struct TimelineSample {
    pub t: f64,
    pub angles: JointAngles,
    /// Foot in the leg frame.
    pub foot_leg: FootPosition,
    /// Foot in the world frame.
    pub foot_world: [f64; 3],
    pub role: LegRole,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LegTimeline {
    pub leg: LegId,
    pub samples: Vec<TimelineSample>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct JointTimeline {
    pub dt: f64,
    pub times: Vec<f64>,
    /// One entry per leg, layout order.
    pub legs: Vec<LegTimeline>,
}

/// Joint angles of every leg sampled every `dt` over the whole plan: stance
/// legs by inverse kinematics of their world contact, swing legs from their
/// swing plan.
pub fn stance_joint_timeline(
    cfg: &RobotConfig,
    plan: &GaitPlan,
    dt: f64,
) -> Result<JointTimeline, GaitError> {
    if dt <= 0.0 || !dt.is_finite() {
        return Err(GaitError::InvalidTimestep(dt));
    }
    let times = uniform_times(plan.total_duration(), dt);
    let height = plan.body_height;
    let mut legs: Vec<LegTimeline> = plan
        .legs
        .iter()
        .map(|&leg| LegTimeline {
            leg,
            samples: Vec::with_capacity(times.len()),
        })
        .collect();

    for &t in &times {
        let k = plan.phase_index_at(t);
        let phase = &plan.phases[k];
        let body = plan.body_at(t);
        for (i, timeline) in legs.iter_mut().enumerate() {
            let leg = timeline.leg;
            let role = phase.role(leg);
            let (angles, foot_leg) = match role {
                LegRole::Swing => {
                    let swing = plan.swings[k].as_ref().expect("swing phase has a plan");
                    let local = (t - phase.start).clamp(0.0, swing.duration());
                    let (angles, _) = swing.sample(local).expect("clamped to plan duration");
                    (
                        angles.normalized(),
                        forward_kinematics(&cfg.geometry, &angles),
                    )
                }
                LegRole::Stance => {
                    let contact = plan.contacts[k][i];
                    let local = Vector3::new(contact[0] - body[0], contact[1] - body[1], -height);
                    let target = body_to_leg_frame(&cfg.layout, leg, local)
                        .map_err(|source| GaitError::UnreachableSample { leg, t, source })?;
                    let solutions = inverse_kinematics(
                        &cfg.geometry,
                        &cfg.limits,
                        &target,
                        BranchPreference::Prefer(GAIT_BRANCH),
                    )
                    .map_err(|source| GaitError::UnreachableSample { leg, t, source })?;
                    let angles = solutions
                        .iter()
                        .find(|s| s.branch == GAIT_BRANCH)
                        .unwrap_or(&solutions[0])
                        .angles;
                    (angles, forward_kinematics(&cfg.geometry, &angles))
                }
            };
            let body_point = leg_to_body_frame(&cfg.layout, leg, &foot_leg)
                .map_err(|source| GaitError::UnreachableSample { leg, t, source })?;
            timeline.samples.push(TimelineSample {
                t,
                angles,
                foot_leg,
                foot_world: [
                    body_point.x + body[0],
                    body_point.y + body[1],
                    body_point.z + height,
                ],
                role,
            });
        }
    }
    Ok(JointTimeline { dt, times, legs })
}
