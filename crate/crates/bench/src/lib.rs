//! Shared fixtures for the criterion benches.

use quadkin_core::{JointAngles, LegGeometry};

/// Deterministic spread of joint configurations away from the straight-knee
/// singularity.
pub fn sample_angles(n: usize) -> Vec<JointAngles> {
    (0..n)
        .map(|i| {
            let u = i as f64 / n as f64;
            JointAngles::new(
                -1.2 + 2.4 * u,
                -0.8 + 1.6 * ((7.0 * u).fract()),
                -2.6 + 2.2 * ((13.0 * u).fract()),
            )
        })
        .collect()
}

pub fn geometry() -> LegGeometry {
    LegGeometry::default()
}
