//! Cubic joint trajectories and swing planning.
//!
//! Each joint follows θ(t) = c0 + c1·t + c2·t² + c3·t³ on a segment, with
//! θ̇(t) = c1 + 2c2·t + 3c3·t². A swing is a chain of such segments through
//! inverse-kinematics knots sampled on a half-ellipse.

use std::f64::consts::{PI, TAU};

use thiserror::Error;

use crate::kinematics::{
    forward_kinematics, inverse_kinematics, Branch, BranchPreference, FootPosition, JointAngles,
    JointVelocities, KinematicsError,
};
use crate::model::{JointLimits, LegGeometry};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TrajectoryError {
    #[error("trajectory duration must be positive, got {0}")]
    NonpositiveDuration(f64),
    #[error("time {t} outside [0, {duration}]")]
    TimeOutOfRange { t: f64, duration: f64 },
    #[error("swing clearance must be positive, got {0}")]
    NonpositiveClearance(f64),
    #[error("a swing needs at least 3 segments, got {0}")]
    TooFewSegments(usize),
    #[error("swing sample {index} at {point} is unreachable: {source}")]
    UnreachableSample {
        index: usize,
        point: FootPosition,
        #[source]
        source: KinematicsError,
    },
    #[error("swing sample {index} at {point} would leave the {branch} branch")]
    BranchFlip {
        index: usize,
        point: FootPosition,
        branch: Branch,
    },
}

/// Coefficients of one joint's cubic.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CubicCoefficients {
    pub c0: f64,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
}

impl CubicCoefficients {
    pub fn position(&self, t: f64) -> f64 {
        self.c0 + t * (self.c1 + t * (self.c2 + t * self.c3))
    }

    pub fn velocity(&self, t: f64) -> f64 {
        self.c1 + t * (2.0 * self.c2 + t * (3.0 * self.c3))
    }

    pub fn acceleration(&self, t: f64) -> f64 {
        2.0 * self.c2 + 6.0 * self.c3 * t
    }
}

/// Unique cubic meeting position and velocity at both ends of `[0, duration]`.
pub fn fit_cubic(
    theta_start: f64,
    theta_end: f64,
    vel_start: f64,
    vel_end: f64,
    duration: f64,
) -> Result<CubicCoefficients, TrajectoryError> {
    if duration <= 0.0 || !duration.is_finite() {
        return Err(TrajectoryError::NonpositiveDuration(duration));
    }
    let delta = theta_end - theta_start;
    let t = duration;
    Ok(CubicCoefficients {
        c0: theta_start,
        c1: vel_start,
        c2: (3.0 * delta - (2.0 * vel_start + vel_end) * t) / (t * t),
        c3: (-2.0 * delta + (vel_start + vel_end) * t) / (t * t * t),
    })
}

/// Three per-joint cubics sharing one duration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CubicJointTrajectory {
    pub joints: [CubicCoefficients; 3],
    pub duration: f64,
    pub start: (JointAngles, JointVelocities),
    pub end: (JointAngles, JointVelocities),
}

impl CubicJointTrajectory {
    pub fn fit(
        start: JointAngles,
        end: JointAngles,
        start_rates: JointVelocities,
        end_rates: JointVelocities,
        duration: f64,
    ) -> Result<Self, TrajectoryError> {
        let (a0, a1) = (start.as_array(), end.as_array());
        let (v0, v1) = (start_rates.as_array(), end_rates.as_array());
        let mut joints = [CubicCoefficients::default(); 3];
        for i in 0..3 {
            joints[i] = fit_cubic(a0[i], a1[i], v0[i], v1[i], duration)?;
        }
        Ok(Self {
            joints,
            duration,
            start: (start, start_rates),
            end: (end, end_rates),
        })
    }

    fn eval(&self, t: f64) -> (JointAngles, JointVelocities) {
        (
            JointAngles::from_array(self.joints.map(|c| c.position(t))),
            JointVelocities::from_array(self.joints.map(|c| c.velocity(t))),
        )
    }
}

/// Joint angles and rates at `t ∈ [0, duration]`.
pub fn sample_trajectory(
    traj: &CubicJointTrajectory,
    t: f64,
) -> Result<(JointAngles, JointVelocities), TrajectoryError> {
    if !(0.0..=traj.duration).contains(&t) {
        return Err(TrajectoryError::TimeOutOfRange {
            t,
            duration: traj.duration,
        });
    }
    Ok(traj.eval(t))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SwingKnot {
    pub t: f64,
    pub angles: JointAngles,
    pub rates: JointVelocities,
    /// Cartesian sample the knot was solved for.
    pub target: FootPosition,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SwingPlan {
    pub knots: Vec<SwingKnot>,
    pub segments: Vec<CubicJointTrajectory>,
    pub clearance: f64,
    pub branch: Branch,
    pub start: FootPosition,
    pub end: FootPosition,
}

impl SwingPlan {
    pub fn duration(&self) -> f64 {
        self.knots.last().map_or(0.0, |k| k.t)
    }

    /// Joint state at `t`, looked up on the segment containing it.
    pub fn sample(&self, t: f64) -> Result<(JointAngles, JointVelocities), TrajectoryError> {
        let duration = self.duration();
        if !(0.0..=duration).contains(&t) {
            return Err(TrajectoryError::TimeOutOfRange { t, duration });
        }
        let n = self.segments.len();
        let h = duration / n as f64;
        let idx = ((t / h) as usize).min(n - 1);
        let local = (t - self.knots[idx].t).clamp(0.0, self.segments[idx].duration);
        Ok(self.segments[idx].eval(local))
    }

    /// Foot position along the planned joint motion (leg frame).
    pub fn foot_at(&self, geometry: &LegGeometry, t: f64) -> Result<FootPosition, TrajectoryError> {
        let (angles, _) = self.sample(t)?;
        Ok(forward_kinematics(geometry, &angles))
    }
}

/// Point on the half-ellipse from `start` to `end` at phase `u ∈ [0, 1]`,
/// raised `clearance` above the chord at `u = ½`.
pub fn swing_point(
    start: &FootPosition,
    end: &FootPosition,
    clearance: f64,
    u: f64,
) -> FootPosition {
    let along = 0.5 * (1.0 - (PI * u).cos());
    let lift = clearance * (PI * u).sin();
    FootPosition::new(
        start.x + (end.x - start.x) * along,
        start.y + (end.y - start.y) * along,
        start.z + (end.z - start.z) * along + lift,
    )
}

/// Plans a swing of `duration` seconds from `start` to `end` (leg frame)
/// through `segments + 1` evenly timed knots.
///
/// Every knot is solved by inverse kinematics on the branch of the first
/// sample. Endpoint rates are zero; interior rates are centred differences of
/// the neighbouring knot angles.
#[allow(clippy::too_many_arguments)]
pub fn plan_swing(
    geometry: &LegGeometry,
    limits: &JointLimits,
    start: &FootPosition,
    end: &FootPosition,
    clearance: f64,
    duration: f64,
    segments: usize,
    branch: Branch,
) -> Result<SwingPlan, TrajectoryError> {
    if duration <= 0.0 || !duration.is_finite() {
        return Err(TrajectoryError::NonpositiveDuration(duration));
    }
    if clearance <= 0.0 || !clearance.is_finite() {
        return Err(TrajectoryError::NonpositiveClearance(clearance));
    }
    if segments < 3 {
        return Err(TrajectoryError::TooFewSegments(segments));
    }

    let h = duration / segments as f64;
    let mut targets = Vec::with_capacity(segments + 1);
    let mut angles: Vec<JointAngles> = Vec::with_capacity(segments + 1);
    for index in 0..=segments {
        let u = index as f64 / segments as f64;
        let point = if index == 0 {
            *start
        } else if index == segments {
            *end
        } else {
            swing_point(start, end, clearance, u)
        };
        let solutions =
            inverse_kinematics(geometry, limits, &point, BranchPreference::Prefer(branch))
                .map_err(|source| TrajectoryError::UnreachableSample {
                    index,
                    point,
                    source,
                })?;
        let solution =
            solutions
                .iter()
                .find(|s| s.branch == branch)
                .ok_or(TrajectoryError::BranchFlip {
                    index,
                    point,
                    branch,
                })?;
        let mut a = solution.angles;
        // keep each joint continuous across the ±π cut
        if let Some(prev) = angles.last() {
            a = JointAngles::from_array(
                a.as_array()
                    .into_iter()
                    .zip(prev.as_array())
                    .map(|(x, p)| x + TAU * ((p - x) / TAU).round())
                    .collect::<Vec<_>>()
                    .try_into()
                    .expect("three joints"),
            );
        }
        targets.push(point);
        angles.push(a);
    }

    let rates: Vec<JointVelocities> = (0..=segments)
        .map(|k| {
            if k == 0 || k == segments {
                JointVelocities::default()
            } else {
                let (prev, next) = (angles[k - 1].as_array(), angles[k + 1].as_array());
                JointVelocities::from_array([0, 1, 2].map(|j| (next[j] - prev[j]) / (2.0 * h)))
            }
        })
        .collect();

    let knots: Vec<SwingKnot> = (0..=segments)
        .map(|k| SwingKnot {
            t: if k == segments {
                duration
            } else {
                k as f64 * h
            },
            angles: angles[k],
            rates: rates[k],
            target: targets[k],
        })
        .collect();

    let segments = knots
        .windows(2)
        .map(|w| {
            CubicJointTrajectory::fit(
                w[0].angles,
                w[1].angles,
                w[0].rates,
                w[1].rates,
                w[1].t - w[0].t,
            )
        })
        .collect::<Result<Vec<_>, _>>()?;

    Ok(SwingPlan {
        knots,
        segments,
        clearance,
        branch,
        start: *start,
        end: *end,
    })
}
