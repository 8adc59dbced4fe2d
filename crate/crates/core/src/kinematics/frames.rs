use nalgebra::Vector3;

use super::{FootPosition, KinematicsError};
use crate::model::{BodyLayout, LegId};

/// Expresses a body-frame point in the leg frame of `leg`: subtract the hip
/// mount position, then undo the mount yaw. Both frames share the z axis.
pub fn body_to_leg_frame(
    layout: &BodyLayout,
    leg: LegId,
    point: Vector3<f64>,
) -> Result<FootPosition, KinematicsError> {
    let mount = layout.mount(leg).ok_or(KinematicsError::UnknownLeg(leg))?;
    let (s, c) = mount.yaw.sin_cos();
    let dx = point.x - mount.x;
    let dy = point.y - mount.y;
    Ok(FootPosition::new(
        c * dx + s * dy,
        -s * dx + c * dy,
        point.z,
    ))
}

/// Inverse of [`body_to_leg_frame`].
pub fn leg_to_body_frame(
    layout: &BodyLayout,
    leg: LegId,
    point: &FootPosition,
) -> Result<Vector3<f64>, KinematicsError> {
    let mount = layout.mount(leg).ok_or(KinematicsError::UnknownLeg(leg))?;
    let (s, c) = mount.yaw.sin_cos();
    Ok(Vector3::new(
        mount.x + c * point.x - s * point.y,
        mount.y + s * point.x + c * point.y,
        point.z,
    ))
}
