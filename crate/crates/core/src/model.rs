//! Robot description: leg geometry, body layout, joint limits, servo
//! calibration and gait defaults, plus the TOML file loader.
//!
//! Every angle held by these types is in radians. Degrees only appear in the
//! file representation (`*_deg` keys).

use std::collections::BTreeSet;
use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Shipped default configuration file.
pub const DEFAULT_CONFIG_TOML: &str = include_str!("../config/default.toml");

/// Highest servo channel index addressable by the controller board.
pub const MAX_CHANNEL: u8 = 15;
/// Accepted pulse-width window for any calibrated channel, in microseconds.
pub const PULSE_BOUNDS_US: (f64, f64) = (400.0, 2600.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum LegId {
    #[serde(rename = "LF")]
    LeftFront,
    #[serde(rename = "RF")]
    RightFront,
    #[serde(rename = "LR")]
    LeftRear,
    #[serde(rename = "RR")]
    RightRear,
}

impl LegId {
    pub const ALL: [LegId; 4] = [
        LegId::LeftFront,
        LegId::RightFront,
        LegId::LeftRear,
        LegId::RightRear,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            LegId::LeftFront => "LF",
            LegId::RightFront => "RF",
            LegId::LeftRear => "LR",
            LegId::RightRear => "RR",
        }
    }
}

impl fmt::Display for LegId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for LegId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "LF" => Ok(LegId::LeftFront),
            "RF" => Ok(LegId::RightFront),
            "LR" => Ok(LegId::LeftRear),
            "RR" => Ok(LegId::RightRear),
            _ => Err(format!("unknown leg id `{s}` (expected LF, RF, LR or RR)")),
        }
    }
}

/// Link lengths of one RRR leg. The DH twists and offsets are fixed by the
/// leg's construction and exposed as constants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LegGeometry {
    /// Hip yaw link, joint 1 to joint 2 (m).
    pub a1: f64,
    /// Femur (m).
    pub a2: f64,
    /// Tibia (m).
    pub a3: f64,
}

impl LegGeometry {
    /// Link twists α₁..α₃. Joint 2 is rolled a quarter turn against joint 1 so
    /// that the femur and tibia move in a vertical plane with z pointing up.
    pub const ALPHA: [f64; 3] = [FRAC_PI_2, 0.0, 0.0];
    /// Joint offsets d₁..d₃; the leg has none.
    pub const OFFSETS: [f64; 3] = [0.0, 0.0, 0.0];

    pub const fn new(a1: f64, a2: f64, a3: f64) -> Self {
        Self { a1, a2, a3 }
    }

    pub fn lengths(&self) -> [f64; 3] {
        [self.a1, self.a2, self.a3]
    }

    pub fn alpha(&self) -> [f64; 3] {
        Self::ALPHA
    }

    pub fn offsets(&self) -> [f64; 3] {
        Self::OFFSETS
    }

    /// a1 + a2 + a3, the reach at full extension. Used to scale tolerances.
    pub fn total_length(&self) -> f64 {
        self.a1 + self.a2 + self.a3
    }
}

impl Default for LegGeometry {
    fn default() -> Self {
        Self::new(0.040, 0.080, 0.120)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngleRange {
    pub min: f64,
    pub max: f64,
}

impl AngleRange {
    pub const fn new(min: f64, max: f64) -> Self {
        Self { min, max }
    }

    pub fn contains(&self, angle: f64) -> bool {
        angle >= self.min && angle <= self.max
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointLimits {
    pub joints: [AngleRange; 3],
}

impl JointLimits {
    pub fn contains(&self, angles: [f64; 3]) -> bool {
        self.joints
            .iter()
            .zip(angles)
            .all(|(range, angle)| range.contains(angle))
    }
}

impl Default for JointLimits {
    fn default() -> Self {
        Self {
            joints: [
                AngleRange::new(-FRAC_PI_2, FRAC_PI_2),
                AngleRange::new(-PI, PI),
                AngleRange::new(-PI, PI),
            ],
        }
    }
}

/// Where a leg's hip (joint 1) sits on the base plate.
#[derive(Debug, Clone, PartialEq)]
pub struct LegMount {
    pub id: LegId,
    /// Hip position in the body frame (m).
    pub x: f64,
    pub y: f64,
    /// Direction of the leg-frame x axis in the body frame (rad).
    pub yaw: f64,
    /// Servo channels driving joints 1, 2 and 3.
    pub channels: [u8; 3],
}

#[derive(Debug, Clone, PartialEq)]
pub struct BodyLayout {
    pub legs: Vec<LegMount>,
    /// Height of the body frame (and every hip) above the ground plane (m).
    pub body_height: f64,
}

impl BodyLayout {
    pub fn mount(&self, id: LegId) -> Option<&LegMount> {
        self.legs.iter().find(|leg| leg.id == id)
    }

    pub fn ids(&self) -> impl Iterator<Item = LegId> + '_ {
        self.legs.iter().map(|leg| leg.id)
    }
}

/// Linear angle-to-pulse calibration of one servo channel.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelCalibration {
    pub channel: u8,
    /// Pulse width commanded at `angle_min_deg` (µs).
    pub pulse_at_min_us: f64,
    /// Pulse width commanded at `angle_max_deg` (µs).
    pub pulse_at_max_us: f64,
    pub angle_min_deg: f64,
    pub angle_max_deg: f64,
    /// +1, or -1 for a servo mounted mirrored.
    pub direction: i8,
    /// Offset added to the joint angle before direction is applied, so it is
    /// expressed in the joint's own sense.
    pub trim_deg: f64,
}

impl ChannelCalibration {
    pub fn standard(channel: u8) -> Self {
        Self {
            channel,
            pulse_at_min_us: 500.0,
            pulse_at_max_us: 2500.0,
            angle_min_deg: 0.0,
            angle_max_deg: 180.0,
            direction: 1,
            trim_deg: 0.0,
        }
    }

    pub fn mid_deg(&self) -> f64 {
        0.5 * (self.angle_min_deg + self.angle_max_deg)
    }

    pub fn pulse_bounds(&self) -> (f64, f64) {
        let (a, b) = (self.pulse_at_min_us, self.pulse_at_max_us);
        (a.min(b), a.max(b))
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ServoCalibration {
    pub channels: Vec<ChannelCalibration>,
}

impl ServoCalibration {
    pub fn channel(&self, channel: u8) -> Option<&ChannelCalibration> {
        self.channels.iter().find(|c| c.channel == channel)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GaitSettings {
    /// Fraction of the cycle each leg spends on the ground.
    pub duty_factor: f64,
    pub stride: f64,
    /// Swing apex height above the lift-off/touch-down chord (m).
    pub clearance: f64,
    pub cycle_period: f64,
    pub min_margin: f64,
    pub swing_order: Vec<LegId>,
    /// Horizontal hip-to-foot distance of the neutral stance; `None` derives
    /// it from the geometry (see [`RobotConfig::neutral_reach`]).
    pub foot_reach: Option<f64>,
    /// Cubic segments per swing.
    pub swing_segments: usize,
}

impl Default for GaitSettings {
    fn default() -> Self {
        Self {
            duty_factor: 0.8,
            stride: 0.04,
            clearance: 0.03,
            cycle_period: 4.0,
            min_margin: 0.005,
            swing_order: vec![
                LegId::LeftFront,
                LegId::RightRear,
                LegId::RightFront,
                LegId::LeftRear,
            ],
            foot_reach: None,
            swing_segments: 8,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RobotConfig {
    pub geometry: LegGeometry,
    pub layout: BodyLayout,
    pub limits: JointLimits,
    pub calibration: ServoCalibration,
    pub gait: GaitSettings,
}

impl RobotConfig {
    /// Neutral horizontal hip-to-foot distance. Defaults to the hip link plus
    /// 55 % of the femur+tibia span, which keeps the knee clear of both the
    /// straight-leg singularity and the fully folded pose.
    pub fn neutral_reach(&self) -> f64 {
        self.gait
            .foot_reach
            .unwrap_or(self.geometry.a1 + 0.55 * (self.geometry.a2 + self.geometry.a3))
    }
}

impl Default for RobotConfig {
    fn default() -> Self {
        let deg = f64::to_radians;
        let mount = |id, x, y, yaw_deg: f64, first: u8| LegMount {
            id,
            x,
            y,
            yaw: deg(yaw_deg),
            channels: [first, first + 1, first + 2],
        };
        let mut calibration = ServoCalibration {
            channels: (0..12).map(ChannelCalibration::standard).collect(),
        };
        // right-side femur and tibia servos are mounted mirrored
        for ch in [4, 5, 10, 11] {
            calibration.channels[ch].direction = -1;
        }
        // knee horns are centred on a right-angle knee
        for ch in [2, 5, 8, 11] {
            calibration.channels[ch].trim_deg = 90.0;
        }
        Self {
            geometry: LegGeometry::default(),
            layout: BodyLayout {
                legs: vec![
                    mount(LegId::LeftFront, 0.10, 0.06, 45.0, 0),
                    mount(LegId::RightFront, 0.10, -0.06, -45.0, 3),
                    mount(LegId::LeftRear, -0.10, 0.06, 135.0, 6),
                    mount(LegId::RightRear, -0.10, -0.06, -135.0, 9),
                ],
                body_height: 0.10,
            },
            limits: JointLimits::default(),
            calibration,
            gait: GaitSettings::default(),
        }
    }
}

/// One violated invariant.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    /// Config key the violation is attached to, e.g. `geometry.a2`.
    pub key: String,
    /// The invariant, e.g. `a2 > 0`.
    pub rule: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: violates {}", self.key, self.rule)
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn len(&self) -> usize {
        self.violations.len()
    }

    fn push(&mut self, key: impl Into<String>, rule: impl Into<String>) {
        self.violations.push(Violation {
            key: key.into(),
            rule: rule.into(),
        });
    }

    fn check(&mut self, ok: bool, key: impl Into<String>, rule: impl Into<String>) {
        if !ok {
            self.push(key, rule);
        }
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed config {path}: {message}")]
    Parse { path: PathBuf, message: String },
    #[error("invalid config:\n{0}")]
    Validation(ValidationReport),
    #[error("config cannot be written in the file schema: {0}")]
    Unrepresentable(String),
}

/// Checks every invariant of the configuration. Violations are collected, not
/// short-circuited.
pub fn validate_config(cfg: &RobotConfig) -> ValidationReport {
    let mut report = ValidationReport::default();

    let g = &cfg.geometry;
    report.check(g.a1.is_finite() && g.a1 >= 0.0, "geometry.a1", "a1 ≥ 0");
    report.check(g.a2.is_finite() && g.a2 > 0.0, "geometry.a2", "a2 > 0");
    report.check(g.a3.is_finite() && g.a3 > 0.0, "geometry.a3", "a3 > 0");

    for (i, range) in cfg.limits.joints.iter().enumerate() {
        let ok = range.min.is_finite() && range.max.is_finite() && range.min < range.max;
        report.check(ok, format!("limits.joint{}", i + 1), "min < max");
    }

    validate_layout(&cfg.layout, &mut report);
    validate_calibration(cfg, &mut report);
    validate_gait(cfg, &mut report);
    report
}

fn validate_layout(layout: &BodyLayout, report: &mut ValidationReport) {
    report.check(layout.legs.len() == 4, "legs", "exactly 4 legs");
    let ids: BTreeSet<LegId> = layout.ids().collect();
    report.check(
        ids.len() == layout.legs.len(),
        "legs.id",
        "leg ids distinct",
    );
    for (i, leg) in layout.legs.iter().enumerate() {
        let finite = leg.x.is_finite() && leg.y.is_finite() && leg.yaw.is_finite();
        report.check(finite, format!("legs[{i}]"), "finite mount pose");
    }
    report.check(
        mounts_span_area(layout),
        "legs.mount",
        "support polygon must have area",
    );
    report.check(
        layout.body_height.is_finite() && layout.body_height > 0.0,
        "gait.body_height_m",
        "body height > 0",
    );
}

fn mounts_span_area(layout: &BodyLayout) -> bool {
    let pts: Vec<(f64, f64)> = layout.legs.iter().map(|l| (l.x, l.y)).collect();
    // farthest pair defines the reference line
    let mut best = (0, 0, 0.0);
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            let d = (pts[i].0 - pts[j].0).hypot(pts[i].1 - pts[j].1);
            if d > best.2 {
                best = (i, j, d);
            }
        }
    }
    let (i, j, len) = best;
    if len <= 1e-9 {
        return false;
    }
    let (ax, ay) = pts[i];
    let (ux, uy) = ((pts[j].0 - ax) / len, (pts[j].1 - ay) / len);
    pts.iter()
        .any(|&(x, y)| ((x - ax) * uy - (y - ay) * ux).abs() > 1e-9)
}

fn validate_calibration(cfg: &RobotConfig, report: &mut ValidationReport) {
    let (lo, hi) = PULSE_BOUNDS_US;
    for cal in &cfg.calibration.channels {
        let key = format!("servo.channel[{}]", cal.channel);
        report.check(
            cal.channel <= MAX_CHANNEL,
            key.clone(),
            "channel index within 0–15",
        );
        let pulses_ok = [cal.pulse_at_min_us, cal.pulse_at_max_us]
            .iter()
            .all(|p| p.is_finite() && (lo..=hi).contains(p));
        report.check(pulses_ok, key.clone(), "pulse widths within [400, 2600] µs");
        report.check(
            cal.pulse_at_min_us != cal.pulse_at_max_us,
            key.clone(),
            "distinct pulse widths at angle_min and angle_max",
        );
        report.check(
            cal.angle_min_deg.is_finite()
                && cal.angle_max_deg.is_finite()
                && cal.angle_min_deg < cal.angle_max_deg,
            key.clone(),
            "angle_min < angle_max",
        );
        report.check(
            cal.direction == 1 || cal.direction == -1,
            key.clone(),
            "direction ±1",
        );
        report.check(cal.trim_deg.is_finite(), key, "finite trim");
    }

    let mut seen = BTreeSet::new();
    for leg in &cfg.layout.legs {
        for (j, &ch) in leg.channels.iter().enumerate() {
            let key = format!("legs.{}.channels[{j}]", leg.id);
            report.check(ch <= MAX_CHANNEL, key.clone(), "channel index within 0–15");
            report.check(
                seen.insert(ch),
                key.clone(),
                "each (leg, joint) maps to exactly one channel",
            );
            report.check(
                cfg.calibration.channel(ch).is_some(),
                key,
                "every mapped channel is calibrated",
            );
        }
    }
}

fn validate_gait(cfg: &RobotConfig, report: &mut ValidationReport) {
    let gait = &cfg.gait;
    report.check(
        gait.duty_factor > 0.5 && gait.duty_factor < 1.0,
        "gait.duty_factor",
        "duty factor ∈ (0.5, 1.0)",
    );
    report.check(
        gait.stride.is_finite() && gait.stride > 0.0,
        "gait.stride_m",
        "stride > 0",
    );
    report.check(
        gait.clearance.is_finite() && gait.clearance > 0.0,
        "gait.clearance_m",
        "clearance > 0",
    );
    report.check(
        gait.cycle_period.is_finite() && gait.cycle_period > 0.0,
        "gait.cycle_s",
        "cycle period > 0",
    );
    report.check(
        gait.min_margin.is_finite() && gait.min_margin >= 0.0,
        "gait.margin_min_m",
        "minimum margin ≥ 0",
    );
    let order: BTreeSet<LegId> = gait.swing_order.iter().copied().collect();
    let layout_ids: BTreeSet<LegId> = cfg.layout.ids().collect();
    report.check(
        gait.swing_order.len() == 4 && order.len() == 4 && order == layout_ids,
        "gait.swing_order",
        "swing order is a permutation of the 4 leg ids",
    );
    if let Some(reach) = gait.foot_reach {
        report.check(
            reach.is_finite() && reach > 0.0,
            "gait.foot_reach_m",
            "foot reach > 0",
        );
    }
    report.check(
        gait.swing_segments >= 3,
        "gait.swing_segments",
        "swing segments ≥ 3",
    );
}

// ---------------------------------------------------------------------------
// file schema

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    geometry: RawGeometry,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    limits: Option<RawLimits>,
    legs: Vec<RawLeg>,
    servo: RawServo,
    gait: RawGait,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGeometry {
    a1: f64,
    a2: f64,
    a3: f64,
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawLimits {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    joint1: Option<RawRange>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    joint2: Option<RawRange>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    joint3: Option<RawRange>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRange {
    min_deg: f64,
    max_deg: f64,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawLeg {
    id: LegId,
    mount_x: f64,
    mount_y: f64,
    mount_yaw_deg: f64,
    channels: [u8; 3],
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawServo {
    pulse_min_us: f64,
    pulse_max_us: f64,
    angle_min_deg: f64,
    angle_max_deg: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    channels: Vec<RawChannelOverride>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawChannelOverride {
    channel: u8,
    #[serde(default)]
    invert: bool,
    #[serde(default)]
    trim_deg: f64,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGait {
    duty_factor: f64,
    stride_m: f64,
    clearance_m: f64,
    body_height_m: f64,
    cycle_s: f64,
    margin_min_m: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    swing_order: Option<Vec<LegId>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    foot_reach_m: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    swing_segments: Option<usize>,
}

impl RawConfig {
    fn into_config(self) -> RobotConfig {
        let defaults = JointLimits::default();
        let limits = self.limits.unwrap_or_default();
        let range = |raw: Option<RawRange>, fallback: AngleRange| {
            raw.map_or(fallback, |r| {
                AngleRange::new(r.min_deg.to_radians(), r.max_deg.to_radians())
            })
        };
        let limits = JointLimits {
            joints: [
                range(limits.joint1, defaults.joints[0]),
                range(limits.joint2, defaults.joints[1]),
                range(limits.joint3, defaults.joints[2]),
            ],
        };

        let legs: Vec<LegMount> = self
            .legs
            .iter()
            .map(|l| LegMount {
                id: l.id,
                x: l.mount_x,
                y: l.mount_y,
                yaw: l.mount_yaw_deg.to_radians(),
                channels: l.channels,
            })
            .collect();

        // one calibration entry per mapped channel, plus any override target
        let mut channels: BTreeSet<u8> = legs.iter().flat_map(|l| l.channels).collect();
        channels.extend(self.servo.channels.iter().map(|o| o.channel));
        let calibration = ServoCalibration {
            channels: channels
                .into_iter()
                .map(|ch| {
                    let over = self.servo.channels.iter().rev().find(|o| o.channel == ch);
                    ChannelCalibration {
                        channel: ch,
                        pulse_at_min_us: self.servo.pulse_min_us,
                        pulse_at_max_us: self.servo.pulse_max_us,
                        angle_min_deg: self.servo.angle_min_deg,
                        angle_max_deg: self.servo.angle_max_deg,
                        direction: if over.is_some_and(|o| o.invert) {
                            -1
                        } else {
                            1
                        },
                        trim_deg: over.map_or(0.0, |o| o.trim_deg),
                    }
                })
                .collect(),
        };

        let defaults = GaitSettings::default();
        RobotConfig {
            geometry: LegGeometry::new(self.geometry.a1, self.geometry.a2, self.geometry.a3),
            layout: BodyLayout {
                legs,
                body_height: self.gait.body_height_m,
            },
            limits,
            calibration,
            gait: GaitSettings {
                duty_factor: self.gait.duty_factor,
                stride: self.gait.stride_m,
                clearance: self.gait.clearance_m,
                cycle_period: self.gait.cycle_s,
                min_margin: self.gait.margin_min_m,
                swing_order: self.gait.swing_order.unwrap_or(defaults.swing_order),
                foot_reach: self.gait.foot_reach_m,
                swing_segments: self.gait.swing_segments.unwrap_or(defaults.swing_segments),
            },
        }
    }

    fn from_config(cfg: &RobotConfig) -> Result<Self, ConfigError> {
        let first = cfg
            .calibration
            .channels
            .first()
            .cloned()
            .unwrap_or_else(|| ChannelCalibration::standard(0));
        let uniform = cfg.calibration.channels.iter().all(|c| {
            c.pulse_at_min_us == first.pulse_at_min_us
                && c.pulse_at_max_us == first.pulse_at_max_us
                && c.angle_min_deg == first.angle_min_deg
                && c.angle_max_deg == first.angle_max_deg
        });
        if !uniform {
            return Err(ConfigError::Unrepresentable(
                "servo pulse/angle ranges differ between channels".into(),
            ));
        }
        let range = |r: &AngleRange| RawRange {
            min_deg: r.min.to_degrees(),
            max_deg: r.max.to_degrees(),
        };
        Ok(RawConfig {
            geometry: RawGeometry {
                a1: cfg.geometry.a1,
                a2: cfg.geometry.a2,
                a3: cfg.geometry.a3,
            },
            limits: Some(RawLimits {
                joint1: Some(range(&cfg.limits.joints[0])),
                joint2: Some(range(&cfg.limits.joints[1])),
                joint3: Some(range(&cfg.limits.joints[2])),
            }),
            legs: cfg
                .layout
                .legs
                .iter()
                .map(|l| RawLeg {
                    id: l.id,
                    mount_x: l.x,
                    mount_y: l.y,
                    mount_yaw_deg: l.yaw.to_degrees(),
                    channels: l.channels,
                })
                .collect(),
            servo: RawServo {
                pulse_min_us: first.pulse_at_min_us,
                pulse_max_us: first.pulse_at_max_us,
                angle_min_deg: first.angle_min_deg,
                angle_max_deg: first.angle_max_deg,
                channels: cfg
                    .calibration
                    .channels
                    .iter()
                    .filter(|c| c.direction != 1 || c.trim_deg != 0.0)
                    .map(|c| RawChannelOverride {
                        channel: c.channel,
                        invert: c.direction == -1,
                        trim_deg: c.trim_deg,
                    })
                    .collect(),
            },
            gait: RawGait {
                duty_factor: cfg.gait.duty_factor,
                stride_m: cfg.gait.stride,
                clearance_m: cfg.gait.clearance,
                body_height_m: cfg.layout.body_height,
                cycle_s: cfg.gait.cycle_period,
                margin_min_m: cfg.gait.min_margin,
                swing_order: Some(cfg.gait.swing_order.clone()),
                foot_reach_m: cfg.gait.foot_reach,
                swing_segments: Some(cfg.gait.swing_segments),
            },
        })
    }
}

/// Parses a config document without validating it.
pub fn parse_config(text: &str, origin: &Path) -> Result<RobotConfig, ConfigError> {
    let raw: RawConfig = toml::from_str(text).map_err(|e| ConfigError::Parse {
        path: origin.to_path_buf(),
        message: e.to_string().trim_end().to_string(),
    })?;
    Ok(raw.into_config())
}

/// Reads, parses and validates a config file.
pub fn load_config(path: impl AsRef<Path>) -> Result<RobotConfig, ConfigError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let cfg = parse_config(&text, path)?;
    let report = validate_config(&cfg);
    if report.is_empty() {
        Ok(cfg)
    } else {
        Err(ConfigError::Validation(report))
    }
}

/// Renders a config in the file schema.
pub fn config_to_toml(cfg: &RobotConfig) -> Result<String, ConfigError> {
    let raw = RawConfig::from_config(cfg)?;
    toml::to_string(&raw).map_err(|e| ConfigError::Unrepresentable(e.to_string()))
}

pub fn save_config(cfg: &RobotConfig, path: impl AsRef<Path>) -> Result<(), ConfigError> {
    let path = path.as_ref();
    let text = config_to_toml(cfg)?;
    fs::write(path, text).map_err(|source| ConfigError::Io {
        path: path.to_path_buf(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rules(report: &ValidationReport) -> Vec<&str> {
        report.violations.iter().map(|v| v.rule.as_str()).collect()
    }

    #[test]
    fn shipped_default_matches_programmatic_default() {
        let cfg = parse_config(DEFAULT_CONFIG_TOML, Path::new("default.toml")).unwrap();
        assert_eq!(cfg, RobotConfig::default());
        assert_eq!(cfg.geometry.lengths(), [0.040, 0.080, 0.120]);
        assert!(validate_config(&cfg).is_empty());
    }

    #[test]
    fn zero_femur_is_reported() {
        let mut cfg = RobotConfig::default();
        cfg.geometry.a2 = 0.0;
        let report = validate_config(&cfg);
        assert_eq!(rules(&report), ["a2 > 0"]);
        assert_eq!(report.violations[0].key, "geometry.a2");
    }

    #[test]
    fn three_legs_is_reported() {
        let mut cfg = RobotConfig::default();
        cfg.layout.legs.pop();
        let report = validate_config(&cfg);
        assert!(rules(&report).contains(&"exactly 4 legs"));
    }

    #[test]
    fn low_duty_factor_is_the_only_violation() {
        let mut cfg = RobotConfig::default();
        cfg.gait.duty_factor = 0.4;
        assert_eq!(rules(&validate_config(&cfg)), ["duty factor ∈ (0.5, 1.0)"]);
    }

    #[test]
    fn collinear_mounts_are_reported() {
        let mut cfg = RobotConfig::default();
        for leg in &mut cfg.layout.legs {
            leg.y = 0.0;
        }
        assert_eq!(
            rules(&validate_config(&cfg)),
            ["support polygon must have area"]
        );
    }

    #[test]
    fn duplicate_ids_and_channels_are_reported() {
        let mut cfg = RobotConfig::default();
        cfg.layout.legs[1].id = LegId::LeftFront;
        cfg.layout.legs[1].channels = [0, 1, 2];
        let report = validate_config(&cfg);
        let r = rules(&report);
        assert!(r.contains(&"leg ids distinct"));
        assert!(r.contains(&"each (leg, joint) maps to exactly one channel"));
        assert!(r.contains(&"swing order is a permutation of the 4 leg ids"));
    }

    #[test]
    fn pulse_window_is_enforced() {
        let mut cfg = RobotConfig::default();
        cfg.calibration.channels[3].pulse_at_max_us = 2700.0;
        assert_eq!(
            rules(&validate_config(&cfg)),
            ["pulse widths within [400, 2600] µs"]
        );
    }

    #[test]
    fn unknown_keys_are_parse_errors_with_location() {
        let text = DEFAULT_CONFIG_TOML.replace("a1 = ", "a0 = ");
        let err = parse_config(&text, Path::new("x.toml")).unwrap_err();
        let msg = err.to_string();
        assert!(matches!(err, ConfigError::Parse { .. }));
        assert!(msg.contains("line"), "{msg}");
        assert!(msg.contains("a0"), "{msg}");
    }

    #[test]
    fn leg_ids_round_trip_through_strings() {
        for id in LegId::ALL {
            assert_eq!(id.as_str().parse::<LegId>().unwrap(), id);
        }
        assert!("XX".parse::<LegId>().is_err());
    }
}
