use std::fmt;
use std::str::FromStr;

use super::{FootPosition, JointAngles, KinematicsError};
use crate::model::{JointLimits, LegGeometry};

/// Slack on |cos θ₃| before a target is declared out of reach.
pub const REACH_TOLERANCE: f64 = 1e-9;
/// |cos θ₃| at or beyond `1 - KNEE_STRAIGHT_TOLERANCE` is treated as a
/// straight (or fully folded) knee, where both elbow branches coincide.
pub const KNEE_STRAIGHT_TOLERANCE: f64 = 1e-14;
/// Horizontal distance, relative to the leg length, below which a target is
/// considered to sit on the joint-1 axis.
pub const AXIS_TOLERANCE: f64 = 1e-12;

/// Elbow branch. Elbow-down means sin θ₃ ≤ 0: the knee bends so the tibia
/// hangs below the femur.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    ElbowDown,
    ElbowUp,
}

impl Branch {
    pub fn of(theta3: f64) -> Self {
        if theta3.sin() <= 0.0 {
            Branch::ElbowDown
        } else {
            Branch::ElbowUp
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Branch::ElbowDown => "elbow-down",
            Branch::ElbowUp => "elbow-up",
        }
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Branch {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "down" | "elbow-down" => Ok(Branch::ElbowDown),
            "up" | "elbow-up" => Ok(Branch::ElbowUp),
            _ => Err(format!("unknown branch `{s}` (expected up or down)")),
        }
    }
}

/// Which branch to list first. `Any` lists elbow-down first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BranchPreference {
    #[default]
    Any,
    Prefer(Branch),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IkSolution {
    pub angles: JointAngles,
    pub branch: Branch,
    pub within_limits: bool,
}

/// Closed-form inverse kinematics.
///
/// θ₁ = atan2(Y, X). Projecting onto the femur/tibia plane gives the planar
/// two-link problem with horizontal reach `r = √(X²+Y²) − a1` and height `Z`,
/// solved by the law of cosines for θ₃ and the two-argument arctangent
/// decomposition for θ₂.
///
/// Returns one solution when the knee is straight (the branches coincide),
/// otherwise two, ordered by `preference`.
pub fn inverse_kinematics(
    geometry: &LegGeometry,
    limits: &JointLimits,
    target: &FootPosition,
    preference: BranchPreference,
) -> Result<Vec<IkSolution>, KinematicsError> {
    let LegGeometry { a1, a2, a3 } = *geometry;
    let FootPosition { x, y, z } = *target;

    let horizontal = x.hypot(y);
    let (theta1, r) = if horizontal <= AXIS_TOLERANCE * geometry.total_length() {
        if a1 > 0.0 {
            return Err(KinematicsError::DegenerateTarget);
        }
        (0.0, horizontal)
    } else {
        (y.atan2(x), horizontal - a1)
    };

    let cos3 = (r * r + z * z - a2 * a2 - a3 * a3) / (2.0 * a2 * a3);
    if !cos3.is_finite() || cos3.abs() > 1.0 + REACH_TOLERANCE {
        return Err(KinematicsError::Unreachable {
            x,
            y,
            z,
            cos_theta3: cos3,
        });
    }

    let (cos3, sin3) = if cos3.abs() >= 1.0 - KNEE_STRAIGHT_TOLERANCE {
        (cos3.signum(), 0.0)
    } else {
        (cos3, ((1.0 - cos3) * (1.0 + cos3)).sqrt())
    };

    let order: &[f64] = match preference {
        _ if sin3 == 0.0 => &[0.0],
        BranchPreference::Prefer(Branch::ElbowUp) => &[1.0, -1.0],
        _ => &[-1.0, 1.0],
    };

    let solutions = order
        .iter()
        .map(|&sign| {
            let s3 = sign * sin3;
            let theta3 = s3.atan2(cos3);
            let theta2 = z.atan2(r) - (a3 * s3).atan2(a2 + a3 * cos3);
            let angles = JointAngles::new(theta1, theta2, theta3).normalized();
            IkSolution {
                angles,
                branch: Branch::of(angles.theta3),
                within_limits: limits.contains(angles.as_array()),
            }
        })
        .collect();
    Ok(solutions)
}
