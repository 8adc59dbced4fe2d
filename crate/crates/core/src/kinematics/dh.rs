use std::ops::Mul;

use nalgebra::{Matrix3, Matrix4, Vector3};

use super::JointAngles;
use crate::model::LegGeometry;

/// Rigid 4×4 homogeneous transform.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HomogeneousTransform(pub Matrix4<f64>);

impl HomogeneousTransform {
    pub fn identity() -> Self {
        Self(Matrix4::identity())
    }

    pub fn matrix(&self) -> &Matrix4<f64> {
        &self.0
    }

    pub fn rotation(&self) -> Matrix3<f64> {
        self.0.fixed_view::<3, 3>(0, 0).into_owned()
    }

    pub fn translation(&self) -> Vector3<f64> {
        self.0.fixed_view::<3, 1>(0, 3).into_owned()
    }

    /// Bottom row exactly (0, 0, 0, 1) and an orthonormal, right-handed
    /// rotation block within `tol`.
    pub fn is_rigid(&self, tol: f64) -> bool {
        let m = &self.0;
        let bottom = m[(3, 0)] == 0.0 && m[(3, 1)] == 0.0 && m[(3, 2)] == 0.0 && m[(3, 3)] == 1.0;
        let r = self.rotation();
        let gram = r.transpose() * r - Matrix3::identity();
        bottom && gram.amax() <= tol && (r.determinant() - 1.0).abs() <= tol
    }
}

impl Mul for HomogeneousTransform {
    type Output = HomogeneousTransform;

    fn mul(self, rhs: Self) -> Self::Output {
        HomogeneousTransform(self.0 * rhs.0)
    }
}

/// Single-joint Denavit-Hartenberg transform `Rz(θ)·Tz(d)·Tx(a)·Rx(α)`.
pub fn dh_transform(theta: f64, alpha: f64, a: f64, d: f64) -> HomogeneousTransform {
    let (st, ct) = theta.sin_cos();
    let (sa, ca) = alpha.sin_cos();
    #[rustfmt::skip]
    let m = Matrix4::new(
        ct, -st * ca,  st * sa, a * ct,
        st,  ct * ca, -ct * sa, a * st,
        0.0,      sa,       ca,      d,
        0.0,     0.0,      0.0,    1.0,
    );
    HomogeneousTransform(m)
}

/// Hip-to-foot transform ⁰T₃ = ⁰T₁·¹T₂·²T₃.
pub fn leg_transform(geometry: &LegGeometry, angles: &JointAngles) -> HomogeneousTransform {
    let alpha = geometry.alpha();
    let offsets = geometry.offsets();
    geometry
        .lengths()
        .into_iter()
        .zip(angles.as_array())
        .enumerate()
        .map(|(i, (a, theta))| dh_transform(theta, alpha[i], a, offsets[i]))
        .fold(HomogeneousTransform::identity(), |acc, t| acc * t)
}
