//! Joint-angle timelines to hobby-servo pulse widths.
//!
//! A channel angle is the servo horn angle in the calibration's frame; joint
//! angle zero sits at the middle of the calibrated range. Trim and direction
//! are applied before the linear angle-to-pulse map:
//!
//! ```text
//! effective = mid + direction·(angle + trim − mid)
//! pulse     = pulse_at_min + (effective − angle_min)/(angle_max − angle_min)·(pulse_at_max − pulse_at_min)
//! ```

use std::io::{self, Write};

use thiserror::Error;

use crate::gait::JointTimeline;
use crate::model::{ChannelCalibration, LegId, RobotConfig};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ServoError {
    #[error(
        "channel {channel}: angle {angle_deg:.4}° maps to {effective_deg:.4}°, outside [{min_deg}, {max_deg}]°"
    )]
    AngleOutOfRange {
        channel: u8,
        angle_deg: f64,
        effective_deg: f64,
        min_deg: f64,
        max_deg: f64,
    },
    #[error("at t = {t:.6} s, leg {leg} joint {joint}: {source}")]
    AtSample {
        t: f64,
        leg: LegId,
        joint: usize,
        #[source]
        source: Box<ServoError>,
    },
    #[error("leg {leg} is not in the layout")]
    UnknownLeg { leg: LegId },
    #[error("channel {0} has no calibration")]
    Uncalibrated(u8),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ServoCommand {
    pub time_ms: u64,
    pub channel: u8,
    pub pulse_us: u32,
}

/// Calibration-frame angle (rad) commanded for a joint angle (rad).
pub fn joint_to_channel_angle(cal: &ChannelCalibration, joint_angle: f64) -> f64 {
    cal.mid_deg().to_radians() + joint_angle
}

fn effective_deg(cal: &ChannelCalibration, angle: f64) -> f64 {
    let mid = cal.mid_deg();
    mid + f64::from(cal.direction) * (angle.to_degrees() + cal.trim_deg - mid)
}

/// Unrounded pulse width (µs) for a channel angle (rad).
pub fn pulse_exact(cal: &ChannelCalibration, angle: f64) -> Result<f64, ServoError> {
    let eff = effective_deg(cal, angle);
    // tolerate round-off at the range ends
    let slack = 1e-9 * (cal.angle_max_deg - cal.angle_min_deg);
    if !(eff >= cal.angle_min_deg - slack && eff <= cal.angle_max_deg + slack) {
        return Err(ServoError::AngleOutOfRange {
            channel: cal.channel,
            angle_deg: angle.to_degrees(),
            effective_deg: eff,
            min_deg: cal.angle_min_deg,
            max_deg: cal.angle_max_deg,
        });
    }
    let eff = eff.clamp(cal.angle_min_deg, cal.angle_max_deg);
    let u = (eff - cal.angle_min_deg) / (cal.angle_max_deg - cal.angle_min_deg);
    Ok(cal.pulse_at_min_us + u * (cal.pulse_at_max_us - cal.pulse_at_min_us))
}

/// Pulse width rounded to the nearest microsecond.
pub fn angle_to_pulse(cal: &ChannelCalibration, angle: f64) -> Result<u32, ServoError> {
    let pulse = pulse_exact(cal, angle)?;
    let (lo, hi) = cal.pulse_bounds();
    Ok(pulse.round().clamp(lo.ceil(), hi.floor()) as u32)
}

/// Channel angle (rad) that commands `pulse_us`; inverse of [`pulse_exact`].
pub fn pulse_to_angle(cal: &ChannelCalibration, pulse_us: f64) -> f64 {
    let u = (pulse_us - cal.pulse_at_min_us) / (cal.pulse_at_max_us - cal.pulse_at_min_us);
    let eff = cal.angle_min_deg + u * (cal.angle_max_deg - cal.angle_min_deg);
    let mid = cal.mid_deg();
    (mid + f64::from(cal.direction) * (eff - mid) - cal.trim_deg).to_radians()
}

/// Worst-case angle error (rad) introduced by rounding to whole microseconds.
pub fn quantization_bound(cal: &ChannelCalibration) -> f64 {
    let angle_range = (cal.angle_max_deg - cal.angle_min_deg).to_radians();
    let pulse_range = (cal.pulse_at_max_us - cal.pulse_at_min_us).abs();
    0.5 * angle_range / pulse_range
}

/// One command per (sample, channel), ordered by time then channel.
pub fn emit_timeline(
    cfg: &RobotConfig,
    timeline: &JointTimeline,
) -> Result<Vec<ServoCommand>, ServoError> {
    let mut commands = Vec::with_capacity(timeline.times.len() * 3 * timeline.legs.len());
    for leg in &timeline.legs {
        let mount = cfg
            .layout
            .mount(leg.leg)
            .ok_or(ServoError::UnknownLeg { leg: leg.leg })?;
        let cals = mount.channels.map(|ch| {
            cfg.calibration
                .channel(ch)
                .ok_or(ServoError::Uncalibrated(ch))
        });
        for sample in &leg.samples {
            let time_ms = (sample.t * 1000.0).round() as u64;
            for (joint, angle) in sample.angles.as_array().into_iter().enumerate() {
                let cal = cals[joint].clone()?;
                let pulse_us =
                    angle_to_pulse(cal, joint_to_channel_angle(cal, angle)).map_err(|e| {
                        ServoError::AtSample {
                            t: sample.t,
                            leg: leg.leg,
                            joint: joint + 1,
                            source: Box::new(e),
                        }
                    })?;
                commands.push(ServoCommand {
                    time_ms,
                    channel: cal.channel,
                    pulse_us,
                });
            }
        }
    }
    commands.sort_by_key(|c| (c.time_ms, c.channel));
    Ok(commands)
}

/// Writes the servo CSV (`t_ms,channel,pulse_us`, LF line endings).
pub fn write_servo_csv<W: Write>(commands: &[ServoCommand], mut out: W) -> io::Result<()> {
    out.write_all(SERVO_CSV_HEADER.as_bytes())?;
    out.write_all(b"\n")?;
    for c in commands {
        writeln!(out, "{},{},{}", c.time_ms, c.channel, c.pulse_us)?;
    }
    Ok(())
}

pub const SERVO_CSV_HEADER: &str = "t_ms,channel,pulse_us";
