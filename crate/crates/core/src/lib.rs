//! Leg kinematics and quasi-static gait planning for a quadruped whose legs are
//! three-revolute (RRR) serial chains.
//!
//! The crate is organised bottom-up:
//!
//! * [`model`] holds the robot description (leg geometry, body layout, joint
//!   limits, servo calibration, gait defaults) and its TOML loader.
//! * [`kinematics`] implements Denavit-Hartenberg forward kinematics, the
//!   closed-form inverse, the analytic Jacobian and frame changes between the
//!   body and each leg.
//! * [`trajectory`] fits cubic joint polynomials and plans swing motions.
//! * [`gait`] sequences a statically stable crawl and reports its stability
//!   margin.
//! * [`servo_export`] turns joint timelines into hobby-servo pulse widths.

pub mod gait;
pub mod kinematics;
pub mod model;
pub mod servo_export;
pub mod trajectory;

pub use gait::{
    generate_crawl, stability_margin, stance_joint_timeline, support_polygon, CrawlParams,
    GaitError, GaitPhase, GaitPlan, JointTimeline, LegRole, LegTimeline, StabilityReport,
};
pub use kinematics::{
    body_to_leg_frame, dh_transform, forward_kinematics, inverse_kinematics, jacobian,
    joint_velocities, leg_to_body_frame, leg_transform, Branch, BranchPreference, FootPosition,
    FootVelocity, HomogeneousTransform, IkSolution, JacobianMatrix, JointAngles, JointVelocities,
    KinematicsError,
};
pub use model::{
    load_config, save_config, validate_config, BodyLayout, ChannelCalibration, ConfigError,
    GaitSettings, JointLimits, LegGeometry, LegId, LegMount, RobotConfig, ServoCalibration,
    ValidationReport, Violation,
};
pub use servo_export::{angle_to_pulse, emit_timeline, pulse_to_angle, ServoCommand, ServoError};
pub use trajectory::{
    fit_cubic, plan_swing, sample_trajectory, CubicCoefficients, CubicJointTrajectory, SwingKnot,
    SwingPlan, TrajectoryError,
};
