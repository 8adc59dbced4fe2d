use nalgebra::Matrix3;

use super::{FootVelocity, JointAngles, JointVelocities, KinematicsError};
use crate::model::LegGeometry;

/// Relative determinant threshold; scaled by (a1+a2+a3)³ to stay dimension
/// consistent.
pub const SINGULARITY_THRESHOLD: f64 = 1e-8;

/// ∂(X, Y, Z)/∂(θ₁, θ₂, θ₃); rows are position components.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobianMatrix(pub Matrix3<f64>);

impl JacobianMatrix {
    pub fn matrix(&self) -> &Matrix3<f64> {
        &self.0
    }

    pub fn determinant(&self) -> f64 {
        self.0.determinant()
    }

    pub fn apply(&self, rates: &JointVelocities) -> FootVelocity {
        let v = self.0 * nalgebra::Vector3::from(rates.as_array());
        FootVelocity::from_vector(v)
    }
}

pub fn jacobian(geometry: &LegGeometry, angles: &JointAngles) -> JacobianMatrix {
    let LegGeometry { a1, a2, a3 } = *geometry;
    let (s1, c1) = angles.theta1.sin_cos();
    let (s2, c2) = angles.theta2.sin_cos();
    let (s23, c23) = (angles.theta2 + angles.theta3).sin_cos();
    let radial = a1 + a2 * c2 + a3 * c23;
    let height = a2 * s2 + a3 * s23;
    #[rustfmt::skip]
    let m = Matrix3::new(
        -radial * s1, -height * c1, -a3 * s23 * c1,
         radial * c1, -height * s1, -a3 * s23 * s1,
         0.0,          a2 * c2 + a3 * c23, a3 * c23,
    );
    JacobianMatrix(m)
}

/// Solves J·θ̇ = Ṗ for the joint rates.
pub fn joint_velocities(
    geometry: &LegGeometry,
    angles: &JointAngles,
    foot_velocity: &FootVelocity,
) -> Result<JointVelocities, KinematicsError> {
    let j = jacobian(geometry, angles);
    let det = j.determinant();
    let threshold = SINGULARITY_THRESHOLD * geometry.total_length().powi(3);
    if det.is_nan() || det.abs() < threshold {
        return Err(KinematicsError::SingularConfiguration { det, threshold });
    }
    let rates =
        j.0.lu()
            .solve(&foot_velocity.to_vector())
            .ok_or(KinematicsError::SingularConfiguration { det, threshold })?;
    Ok(JointVelocities::new(rates.x, rates.y, rates.z))
}
