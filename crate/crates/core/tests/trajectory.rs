mod common;

use common::{random_geometry, rng};
use proptest::prelude::*;
use quadkin_core::trajectory::swing_point;
use quadkin_core::{
    fit_cubic, forward_kinematics, plan_swing, sample_trajectory, Branch, CubicJointTrajectory,
    JointAngles, JointLimits, JointVelocities, TrajectoryError,
};
use rand::Rng;

#[test]
fn rest_to_rest_unit_fit() {
    let c = fit_cubic(0.0, 1.0, 0.0, 0.0, 1.0).unwrap();
    for (got, want) in [(c.c0, 0.0), (c.c1, 0.0), (c.c2, 3.0), (c.c3, -2.0)] {
        assert!((got - want).abs() < 1e-12);
    }
}

#[test]
fn nonpositive_duration_is_rejected() {
    for t in [0.0, -1.0, f64::NAN] {
        assert!(matches!(
            fit_cubic(0.0, 1.0, 0.0, 0.0, t),
            Err(TrajectoryError::NonpositiveDuration(_))
        ));
    }
}

#[test]
fn sampling_outside_the_segment_fails() {
    let traj = CubicJointTrajectory::fit(
        JointAngles::default(),
        JointAngles::new(0.1, 0.2, 0.3),
        JointVelocities::default(),
        JointVelocities::default(),
        0.5,
    )
    .unwrap();
    assert!(sample_trajectory(&traj, 0.6).is_err());
    assert!(sample_trajectory(&traj, -0.1).is_err());
}

#[test]
fn random_fits_meet_their_boundary_conditions() {
    let mut r = rng(11);
    for _ in 0..10_000 {
        let (a0, a1) = (r.random_range(-3.0..3.0), r.random_range(-3.0..3.0));
        let (v0, v1) = (r.random_range(-5.0..5.0), r.random_range(-5.0..5.0));
        let t = r.random_range(0.05..5.0);
        let c = fit_cubic(a0, a1, v0, v1, t).unwrap();
        assert!((c.position(0.0) - a0).abs() < 1e-12);
        assert!((c.velocity(0.0) - v0).abs() < 1e-12);
        assert!((c.position(t) - a1).abs() < 1e-12);
        assert!((c.velocity(t) - v1).abs() < 1e-12);
    }
}

#[test]
fn random_swings_are_smooth() {
    let mut r = rng(12);
    let limits = JointLimits::default();
    let mut planned = 0;
    while planned < 1_000 {
        let g = random_geometry(&mut r);
        let q = JointAngles::new(
            r.random_range(-0.8..0.8),
            r.random_range(-0.3..0.8),
            r.random_range(-2.2..-0.6),
        );
        let start = forward_kinematics(&g, &q);
        let span = 0.25 * (g.a2 + g.a3);
        let mut end = start;
        end.x += r.random_range(-span..span);
        end.y += r.random_range(-span..span);
        let clearance = r.random_range(0.05..0.3) * (g.a2 + g.a3);
        let duration = r.random_range(0.1..2.0);
        let n = 2 * r.random_range(2..9);
        let Ok(plan) = plan_swing(
            &g,
            &limits,
            &start,
            &end,
            clearance,
            duration,
            n,
            Branch::ElbowDown,
        ) else {
            continue;
        };
        planned += 1;

        for pair in plan.segments.windows(2) {
            let (a_end, v_end) = sample_trajectory(&pair[0], pair[0].duration).unwrap();
            let (a_start, v_start) = sample_trajectory(&pair[1], 0.0).unwrap();
            for j in 0..3 {
                assert!((a_end.as_array()[j] - a_start.as_array()[j]).abs() < 1e-9);
                assert!((v_end.as_array()[j] - v_start.as_array()[j]).abs() < 1e-9);
            }
        }
        let (_, v0) = plan.sample(0.0).unwrap();
        let (_, v1) = plan.sample(plan.duration()).unwrap();
        assert!(v0
            .as_array()
            .iter()
            .chain(&v1.as_array())
            .all(|v| v.abs() < 1e-12));

        let mid = plan.knots[n / 2].t;
        let apex = plan.foot_at(&g, mid).unwrap();
        let chord_z = 0.5 * (start.z + end.z);
        assert!(apex.z - chord_z >= 0.99 * clearance);
        assert!(plan.foot_at(&g, 0.0).unwrap().distance(&start) < 1e-9);
        assert!(plan.foot_at(&g, plan.duration()).unwrap().distance(&end) < 1e-9);
        assert!(plan.knots.iter().all(|k| k.angles.theta3.sin() <= 0.0));
    }
}

#[test]
fn too_few_segments_and_flat_swings_are_rejected() {
    let g = quadkin_core::LegGeometry::new(0.04, 0.08, 0.12);
    let limits = JointLimits::default();
    let start = forward_kinematics(&g, &JointAngles::new(0.0, 0.3, -1.2));
    let mut end = start;
    end.x += 0.02;
    assert!(matches!(
        plan_swing(&g, &limits, &start, &end, 0.02, 1.0, 2, Branch::ElbowDown),
        Err(TrajectoryError::TooFewSegments(2))
    ));
    assert!(matches!(
        plan_swing(&g, &limits, &start, &end, 0.0, 1.0, 8, Branch::ElbowDown),
        Err(TrajectoryError::NonpositiveClearance(_))
    ));
    let mut far = start;
    far.x += 1.0;
    assert!(matches!(
        plan_swing(&g, &limits, &start, &far, 0.02, 1.0, 8, Branch::ElbowDown),
        Err(TrajectoryError::UnreachableSample { .. })
    ));
}

proptest! {
    #[test]
    fn fits_are_deterministic(
        a0 in -3.0..3.0f64, a1 in -3.0..3.0f64,
        v0 in -5.0..5.0f64, v1 in -5.0..5.0f64,
        t in 0.05..5.0f64,
    ) {
        prop_assert_eq!(fit_cubic(a0, a1, v0, v1, t).unwrap(), fit_cubic(a0, a1, v0, v1, t).unwrap());
    }

    #[test]
    fn swing_point_hits_its_ends_and_apex(
        x0 in -1.0..1.0f64, y0 in -1.0..1.0f64, z0 in -1.0..1.0f64,
        x1 in -1.0..1.0f64, y1 in -1.0..1.0f64, z1 in -1.0..1.0f64,
        clearance in 0.001..0.5f64,
    ) {
        let a = quadkin_core::FootPosition::new(x0, y0, z0);
        let b = quadkin_core::FootPosition::new(x1, y1, z1);
        prop_assert!(swing_point(&a, &b, clearance, 0.0).distance(&a) < 1e-12);
        prop_assert!(swing_point(&a, &b, clearance, 1.0).distance(&b) < 1e-12);
        let apex = swing_point(&a, &b, clearance, 0.5);
        prop_assert!((apex.z - 0.5 * (z0 + z1) - clearance).abs() < 1e-12);
    }
}
