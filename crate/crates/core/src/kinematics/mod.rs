//! Kinematics of one RRR leg.
//!
//! The leg frame has its origin on the joint-1 axis at hip height, x pointing
//! along the mount direction when θ₁ = 0 and z pointing up. With the DH table
//!
//! | joint | θ  | α    | a  | d |
//! |-------|----|------|----|---|
//! | 1     | θ₁ | π/2  | a1 | 0 |
//! | 2     | θ₂ | 0    | a2 | 0 |
//! | 3     | θ₃ | 0    | a3 | 0 |
//!
//! the foot tip lands at
//!
//! ```text
//! X = (a1 + a2 cos θ₂ + a3 cos(θ₂+θ₃)) cos θ₁
//! Y = (a1 + a2 cos θ₂ + a3 cos(θ₂+θ₃)) sin θ₁
//! Z =  a2 sin θ₂ + a3 sin(θ₂+θ₃)
//! ```

mod dh;
mod frames;
mod ik;
mod jacobian;

use std::f64::consts::{PI, TAU};
use std::fmt;

use nalgebra::Vector3;
use thiserror::Error;

use crate::model::{LegGeometry, LegId};

pub use dh::{dh_transform, leg_transform, HomogeneousTransform};
pub use frames::{body_to_leg_frame, leg_to_body_frame};
pub use ik::{
    inverse_kinematics, Branch, BranchPreference, IkSolution, AXIS_TOLERANCE,
    KNEE_STRAIGHT_TOLERANCE, REACH_TOLERANCE,
};
pub use jacobian::{jacobian, joint_velocities, JacobianMatrix, SINGULARITY_THRESHOLD};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum KinematicsError {
    #[error("target ({x:.6}, {y:.6}, {z:.6}) is unreachable (cos θ3 = {cos_theta3:.9})")]
    Unreachable {
        x: f64,
        y: f64,
        z: f64,
        cos_theta3: f64,
    },
    #[error("target lies on the joint-1 axis; θ1 is undefined")]
    DegenerateTarget,
    #[error("singular configuration: |det J| = {det:e} below {threshold:e}")]
    SingularConfiguration { det: f64, threshold: f64 },
    #[error("unknown leg id {0}")]
    UnknownLeg(LegId),
}

/// Maps an angle into (−π, π]. Angles already in range are returned untouched.
pub fn normalize_angle(angle: f64) -> f64 {
    if angle > -PI && angle <= PI {
        return angle;
    }
    let r = angle.rem_euclid(TAU);
    if r > PI {
        r - TAU
    } else {
        r
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct JointAngles {
    pub theta1: f64,
    pub theta2: f64,
    pub theta3: f64,
}

impl JointAngles {
    pub const fn new(theta1: f64, theta2: f64, theta3: f64) -> Self {
        Self {
            theta1,
            theta2,
            theta3,
        }
    }

    pub fn from_degrees(deg: [f64; 3]) -> Self {
        Self::new(
            deg[0].to_radians(),
            deg[1].to_radians(),
            deg[2].to_radians(),
        )
    }

    pub fn to_degrees(self) -> [f64; 3] {
        self.as_array().map(f64::to_degrees)
    }

    pub fn as_array(self) -> [f64; 3] {
        [self.theta1, self.theta2, self.theta3]
    }

    pub fn from_array(a: [f64; 3]) -> Self {
        Self::new(a[0], a[1], a[2])
    }

    pub fn normalized(self) -> Self {
        Self::from_array(self.as_array().map(normalize_angle))
    }

    /// Largest per-joint difference, measured on the circle.
    pub fn max_abs_diff(&self, other: &JointAngles) -> f64 {
        self.as_array()
            .into_iter()
            .zip(other.as_array())
            .map(|(a, b)| normalize_angle(a - b).abs())
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct JointVelocities {
    pub theta1: f64,
    pub theta2: f64,
    pub theta3: f64,
}

impl JointVelocities {
    pub const fn new(theta1: f64, theta2: f64, theta3: f64) -> Self {
        Self {
            theta1,
            theta2,
            theta3,
        }
    }

    pub fn as_array(self) -> [f64; 3] {
        [self.theta1, self.theta2, self.theta3]
    }

    pub fn from_array(a: [f64; 3]) -> Self {
        Self::new(a[0], a[1], a[2])
    }
}

/// Foot tip position in a leg frame (m).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FootPosition {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl FootPosition {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn to_vector(self) -> Vector3<f64> {
        Vector3::new(self.x, self.y, self.z)
    }

    pub fn from_vector(v: Vector3<f64>) -> Self {
        Self::new(v.x, v.y, v.z)
    }

    pub fn distance(&self, other: &FootPosition) -> f64 {
        (self.to_vector() - other.to_vector()).norm()
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }
}

impl fmt::Display for FootPosition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:.6}, {:.6}, {:.6})", self.x, self.y, self.z)
    }
}

/// Foot tip velocity in a leg frame (m/s).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FootVelocity {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl FootVelocity {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn to_vector(self) -> Vector3<f64> {
        Vector3::new(self.x, self.y, self.z)
    }

    pub fn from_vector(v: Vector3<f64>) -> Self {
        Self::new(v.x, v.y, v.z)
    }
}

/// Foot position from the closed-form position equations.
pub fn forward_kinematics(geometry: &LegGeometry, angles: &JointAngles) -> FootPosition {
    let LegGeometry { a1, a2, a3 } = *geometry;
    let (s1, c1) = angles.theta1.sin_cos();
    let (s2, c2) = angles.theta2.sin_cos();
    let (s23, c23) = (angles.theta2 + angles.theta3).sin_cos();
    let radial = a1 + a2 * c2 + a3 * c23;
    FootPosition::new(radial * c1, radial * s1, a2 * s2 + a3 * s23)
}
