#![allow(dead_code)]

use std::f64::consts::PI;

use quadkin_core::{JointAngles, LegGeometry};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_geometry(rng: &mut impl Rng) -> LegGeometry {
    LegGeometry::new(
        rng.random_range(0.0..0.1),
        rng.random_range(0.02..0.2),
        rng.random_range(0.02..0.2),
    )
}

pub fn random_angles(rng: &mut impl Rng) -> JointAngles {
    JointAngles::new(
        rng.random_range(-PI..PI),
        rng.random_range(-PI..PI),
        rng.random_range(-PI..PI),
    )
}

/// Foot position written out term by term from the leg's position equations.
pub fn fk_oracle(g: &LegGeometry, q: &JointAngles) -> [f64; 3] {
    let (t1, t2, t3) = (q.theta1, q.theta2, q.theta3);
    let reach = g.a1 + g.a2 * t2.cos() + g.a3 * (t2 + t3).cos();
    [
        reach * t1.cos(),
        reach * t1.sin(),
        g.a2 * t2.sin() + g.a3 * (t2 + t3).sin(),
    ]
}

/// Plain 4×4 product of the three link transforms, without nalgebra.
pub fn chain_oracle(g: &LegGeometry, q: &JointAngles) -> [[f64; 4]; 4] {
    let links = [
        (q.theta1, PI / 2.0, g.a1),
        (q.theta2, 0.0, g.a2),
        (q.theta3, 0.0, g.a3),
    ];
    let mut acc = [[0.0; 4]; 4];
    for (i, row) in acc.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    for (theta, alpha, a) in links {
        let (st, ct) = theta.sin_cos();
        let (sa, ca) = if alpha == 0.0 { (0.0, 1.0) } else { (1.0, 0.0) };
        let link = [
            [ct, -st * ca, st * sa, a * ct],
            [st, ct * ca, -ct * sa, a * st],
            [0.0, sa, ca, 0.0],
            [0.0, 0.0, 0.0, 1.0],
        ];
        let mut next = [[0.0; 4]; 4];
        for r in 0..4 {
            for c in 0..4 {
                next[r][c] = (0..4).map(|k| acc[r][k] * link[k][c]).sum();
            }
        }
        acc = next;
    }
    acc
}

pub fn angle_gap(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(2.0 * PI);
    d.min(2.0 * PI - d)
}
