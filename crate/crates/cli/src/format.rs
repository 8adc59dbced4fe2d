use std::io::{self, Write};

use quadkin_core::JointTimeline;

pub const GAIT_CSV_HEADER: &str =
    "t_s,leg,theta1_deg,theta2_deg,theta3_deg,foot_x_m,foot_y_m,foot_z_m,phase,margin_m";

/// Fixed-point rendering that never prints a negative zero.
pub fn fixed(value: f64, decimals: usize) -> String {
    let s = format!("{value:.decimals$}");
    match s.strip_prefix('-') {
        Some(rest) if rest.bytes().all(|b| b == b'0' || b == b'.') => rest.to_string(),
        _ => s,
    }
}

pub fn meters(value: f64) -> String {
    fixed(value, 6)
}

pub fn degrees(value: f64) -> String {
    fixed(value, 4)
}

/// One row per (sample, leg), time-major, legs in layout order.
pub fn write_gait_csv<W: Write>(
    timeline: &JointTimeline,
    margins: &[f64],
    mut out: W,
) -> io::Result<()> {
    writeln!(out, "{GAIT_CSV_HEADER}")?;
    for (k, &t) in timeline.times.iter().enumerate() {
        for leg in &timeline.legs {
            let s = &leg.samples[k];
            let [d1, d2, d3] = s.angles.to_degrees();
            writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{}",
                meters(t),
                leg.leg,
                degrees(d1),
                degrees(d2),
                degrees(d3),
                meters(s.foot_world[0]),
                meters(s.foot_world[1]),
                meters(s.foot_world[2]),
                s.role.label(),
                meters(margins[k]),
            )?;
        }
    }
    Ok(())
}
