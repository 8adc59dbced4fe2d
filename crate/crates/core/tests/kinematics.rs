mod common;

use std::f64::consts::PI;

use common::{angle_gap, chain_oracle, fk_oracle, random_angles, random_geometry, rng};
use nalgebra::Vector3;
use proptest::prelude::*;
use quadkin_core::kinematics::{normalize_angle, SINGULARITY_THRESHOLD};
use quadkin_core::{
    body_to_leg_frame, forward_kinematics, inverse_kinematics, jacobian, joint_velocities,
    leg_to_body_frame, leg_transform, Branch, BranchPreference, FootPosition, FootVelocity,
    JointAngles, JointLimits, KinematicsError, LegGeometry, RobotConfig,
};
use rand::Rng;

fn geometry_strategy() -> impl Strategy<Value = LegGeometry> {
    (0.0..0.1f64, 0.02..0.2f64, 0.02..0.2f64).prop_map(|(a1, a2, a3)| LegGeometry::new(a1, a2, a3))
}

fn angles_strategy() -> impl Strategy<Value = JointAngles> {
    (-PI..PI, -PI..PI, -PI..PI).prop_map(|(a, b, c)| JointAngles::new(a, b, c))
}

#[test]
fn zero_pose_is_full_extension() {
    let mut r = rng(1);
    for _ in 0..100 {
        let g = random_geometry(&mut r);
        let p = forward_kinematics(&g, &JointAngles::default());
        let l = g.total_length();
        assert!((p.x - l).abs() < 1e-12 * l);
        assert!(p.y.abs() < 1e-12 * l && p.z.abs() < 1e-12 * l);
    }
}

#[test]
fn fk_matches_position_equations() {
    let mut r = rng(2);
    for _ in 0..10_000 {
        let g = random_geometry(&mut r);
        let q = random_angles(&mut r);
        let p = forward_kinematics(&g, &q);
        let o = fk_oracle(&g, &q);
        let tol = 1e-12 * g.total_length();
        assert!((p.x - o[0]).abs() < tol && (p.y - o[1]).abs() < tol && (p.z - o[2]).abs() < tol);
    }
}

#[test]
fn transform_matches_hand_multiplied_chain() {
    let mut r = rng(3);
    for _ in 0..2_000 {
        let g = random_geometry(&mut r);
        let q = random_angles(&mut r);
        let m = leg_transform(&g, &q);
        let o = chain_oracle(&g, &q);
        for (row, orow) in o.iter().enumerate() {
            for (col, &expected) in orow.iter().enumerate() {
                assert!((m.matrix()[(row, col)] - expected).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn known_pose_values() {
    let g = LegGeometry::new(0.04, 0.08, 0.12);
    let p = forward_kinematics(&g, &JointAngles::from_degrees([0.0, 45.0, -90.0]));
    assert!((p.x - 0.181421).abs() < 5e-7);
    assert!(p.y.abs() < 1e-12);
    assert!((p.z + 0.028284).abs() < 5e-7);

    let p = forward_kinematics(&g, &JointAngles::from_degrees([90.0, 0.0, 0.0]));
    assert!(p.x.abs() < 1e-12 && (p.y - 0.24).abs() < 1e-12);
}

#[test]
fn ik_round_trip_within_limits() {
    let mut r = rng(4);
    let limits = JointLimits::default();
    let mut checked = 0;
    while checked < 10_000 {
        let g = random_geometry(&mut r);
        let q = JointAngles::new(
            r.random_range(-PI / 2.0..PI / 2.0),
            r.random_range(-PI..PI),
            r.random_range(-PI..PI),
        );
        let reach = g.a1 + g.a2 * q.theta2.cos() + g.a3 * (q.theta2 + q.theta3).cos();
        // θ1 is only recoverable when the foot lies outward of the hip axis
        if q.theta3.sin().abs() <= 1e-6 || reach <= 1e-3 * g.total_length() {
            continue;
        }
        let target = forward_kinematics(&g, &q);
        let sols = inverse_kinematics(&g, &limits, &target, BranchPreference::Any).unwrap();
        let best = sols
            .iter()
            .map(|s| {
                (0..3)
                    .map(|i| angle_gap(s.angles.as_array()[i], q.as_array()[i]))
                    .fold(0.0, f64::max)
            })
            .fold(f64::INFINITY, f64::min);
        assert!(best < 1e-9, "q = {q:?}, best = {best}");
        checked += 1;
    }
}

#[test]
fn degenerate_and_unreachable_targets() {
    let g = LegGeometry::new(0.04, 0.08, 0.12);
    let limits = JointLimits::default();
    let on_axis = FootPosition::new(0.0, 0.0, 0.05);
    assert_eq!(
        inverse_kinematics(&g, &limits, &on_axis, BranchPreference::Any),
        Err(KinematicsError::DegenerateTarget)
    );
    let far = FootPosition::new(0.3, 0.1, 0.0);
    assert!(matches!(
        inverse_kinematics(&g, &limits, &far, BranchPreference::Any),
        Err(KinematicsError::Unreachable { .. })
    ));
    // inside the hip link the femur/tibia plane reach goes negative
    let folded = forward_kinematics(&g, &JointAngles::new(0.0, PI, -0.5));
    assert!(inverse_kinematics(&g, &limits, &folded, BranchPreference::Any).is_ok());
}

#[test]
fn jacobian_matches_central_differences() {
    let mut r = rng(5);
    let h = 1e-6;
    for _ in 0..1_000 {
        let g = random_geometry(&mut r);
        let q = random_angles(&mut r);
        let j = jacobian(&g, &q);
        for col in 0..3 {
            let mut plus = q.as_array();
            let mut minus = q.as_array();
            plus[col] += h;
            minus[col] -= h;
            let fp = fk_oracle(&g, &JointAngles::from_array(plus));
            let fm = fk_oracle(&g, &JointAngles::from_array(minus));
            for row in 0..3 {
                let fd = (fp[row] - fm[row]) / (2.0 * h);
                let an = j.matrix()[(row, col)];
                let err = (fd - an).abs();
                assert!(
                    err <= 1e-9 || err <= 1e-6 * an.abs(),
                    "entry ({row},{col}): {an} vs {fd}"
                );
            }
        }
    }
}

#[test]
fn velocity_round_trip() {
    let mut r = rng(6);
    let mut checked = 0;
    while checked < 1_000 {
        let g = random_geometry(&mut r);
        let q = random_angles(&mut r);
        let j = jacobian(&g, &q);
        if j.determinant().abs() < 1e-4 * g.total_length().powi(3) {
            continue;
        }
        let v = FootVelocity::new(
            r.random_range(-1.0..1.0),
            r.random_range(-1.0..1.0),
            r.random_range(-1.0..1.0),
        );
        let rates = joint_velocities(&g, &q, &v).unwrap();
        let back = j.apply(&rates);
        assert!((back.to_vector() - v.to_vector()).amax() < 1e-9);
        checked += 1;
    }
}

#[test]
fn straight_or_folded_knee_is_singular() {
    let mut r = rng(7);
    for _ in 0..200 {
        let g = random_geometry(&mut r);
        for theta3 in [0.0, PI] {
            let q = JointAngles::new(r.random_range(-PI..PI), r.random_range(-PI..PI), theta3);
            let det = jacobian(&g, &q).determinant();
            assert!(det.abs() < SINGULARITY_THRESHOLD * g.total_length().powi(3));
            assert!(matches!(
                joint_velocities(&g, &q, &FootVelocity::new(0.0, 0.0, 0.1)),
                Err(KinematicsError::SingularConfiguration { .. })
            ));
        }
    }
}

#[test]
fn frame_change_example() {
    let mut cfg = RobotConfig::default();
    let lf = cfg
        .layout
        .legs
        .iter_mut()
        .find(|m| m.id.as_str() == "LF")
        .unwrap();
    lf.x = 0.05;
    lf.y = 0.03;
    lf.yaw = PI / 2.0;
    let id = lf.id;
    let mut r = rng(8);
    for _ in 0..1_000 {
        let p = Vector3::new(
            r.random_range(-0.5..0.5),
            r.random_range(-0.5..0.5),
            r.random_range(-0.5..0.5),
        );
        let local = body_to_leg_frame(&cfg.layout, id, p).unwrap();
        // a quarter turn maps body (dx, dy) to leg (dy, −dx)
        assert!((local.x - (p.y - 0.03)).abs() < 1e-12);
        assert!((local.y + (p.x - 0.05)).abs() < 1e-12);
        let back = leg_to_body_frame(&cfg.layout, id, &local).unwrap();
        assert!((back - p).amax() < 1e-12);
    }
}

proptest! {
    #[test]
    fn transform_translation_is_fk(g in geometry_strategy(), q in angles_strategy()) {
        let t = leg_transform(&g, &q).translation();
        let p = forward_kinematics(&g, &q);
        prop_assert!((t - p.to_vector()).amax() < 1e-12 * g.total_length());
    }

    #[test]
    fn transforms_are_rigid(g in geometry_strategy(), q in angles_strategy()) {
        prop_assert!(leg_transform(&g, &q).is_rigid(1e-9));
    }

    #[test]
    fn both_branches_when_knee_is_bent(g in geometry_strategy(), q in angles_strategy()) {
        let target = forward_kinematics(&g, &q);
        let reach = g.a1 + g.a2 * q.theta2.cos() + g.a3 * (q.theta2 + q.theta3).cos();
        prop_assume!(reach > 1e-6 * g.total_length());
        prop_assume!(q.theta3.cos().abs() < 1.0 - 1e-9);
        let sols = inverse_kinematics(&g, &JointLimits::default(), &target, BranchPreference::Any).unwrap();
        prop_assert_eq!(sols.len(), 2);
        prop_assert_eq!(sols[0].branch, Branch::ElbowDown);
        prop_assert_eq!(sols[1].branch, Branch::ElbowUp);
        for s in &sols {
            prop_assert!(forward_kinematics(&g, &s.angles).distance(&target) < 1e-9);
            for a in s.angles.as_array() {
                prop_assert!(a > -PI && a <= PI);
            }
        }
    }

    #[test]
    fn normalization_is_idempotent(a in -100.0..100.0f64) {
        let n = normalize_angle(a);
        prop_assert!(n > -PI && n <= PI);
        prop_assert_eq!(normalize_angle(n), n);
        prop_assert!(angle_gap(n, a) < 1e-12);
    }

    #[test]
    fn body_frame_round_trip(x in -1.0..1.0f64, y in -1.0..1.0f64, z in -1.0..1.0f64) {
        let cfg = RobotConfig::default();
        for m in &cfg.layout.legs {
            let p = Vector3::new(x, y, z);
            let local = body_to_leg_frame(&cfg.layout, m.id, p).unwrap();
            let back = leg_to_body_frame(&cfg.layout, m.id, &local).unwrap();
            prop_assert!((back - p).amax() < 1e-12);
        }
    }
}
