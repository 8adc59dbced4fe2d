//! Batch command-line front end for `quadkin-core`.
//!
//! [`run`] parses arguments, executes one command and returns a
//! [`CommandOutcome`]; the `quadkin` binary only prints it and exits.

pub mod format;

use std::ffi::OsString;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use quadkin_core::gait::standing_margin;
use quadkin_core::servo_export::write_servo_csv;
use quadkin_core::{
    emit_timeline, forward_kinematics, generate_crawl, inverse_kinematics, load_config,
    stance_joint_timeline, Branch, BranchPreference, ConfigError, CrawlParams, FootPosition,
    GaitError, JointAngles, LegId, RobotConfig,
};

use format::{degrees, meters, write_gait_csv};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "quadkin",
    version,
    about = "Quadruped leg kinematics and crawl gait tool"
)]
pub struct Cli {
    /// Robot config file.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Load and validate the config.
    Check,
    /// Foot position (leg frame, m) for three joint angles in degrees.
    #[command(allow_negative_numbers = true)]
    Fk {
        #[arg(long, default_value = "LF")]
        leg: LegId,
        theta1: f64,
        theta2: f64,
        theta3: f64,
    },
    /// Joint angles (degrees) reaching a leg-frame target in meters.
    #[command(allow_negative_numbers = true)]
    Ik {
        #[arg(long, default_value = "LF")]
        leg: LegId,
        /// Only report this elbow branch.
        #[arg(long, value_parser = parse_branch)]
        branch: Option<Branch>,
        x: f64,
        y: f64,
        z: f64,
    },
    /// Generate a crawl and write the gait (and optionally servo) CSV.
    Gait(GaitArgs),
}

#[derive(Debug, Args)]
pub struct GaitArgs {
    #[arg(long, default_value = "gait.csv", value_name = "PATH")]
    pub out: PathBuf,
    #[arg(long, value_name = "PATH")]
    pub servo_out: Option<PathBuf>,
    /// Sample period of the output (s).
    #[arg(long, default_value_t = 0.02, value_name = "S")]
    pub dt: f64,
    #[arg(long, default_value_t = 1, value_name = "N")]
    pub cycles: usize,
    /// Stride length (m); defaults to the config value.
    #[arg(long, value_name = "M")]
    pub stride: Option<f64>,
    /// Cycle period (s); defaults to the config value.
    #[arg(long, value_name = "S")]
    pub period: Option<f64>,
    /// Write the outputs even if the stability margin falls short.
    #[arg(long)]
    pub force: bool,
}

fn parse_branch(s: &str) -> Result<Branch, String> {
    match s {
        "up" => Ok(Branch::ElbowUp),
        "down" => Ok(Branch::ElbowDown),
        _ => Err(format!("expected `up` or `down`, got `{s}`")),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommandOutcome {
    pub code: i32,
    /// Text for stdout on success, stderr otherwise.
    pub message: String,
    pub outputs: Vec<PathBuf>,
}

impl CommandOutcome {
    fn ok(message: String) -> Self {
        Self {
            code: EXIT_OK,
            message,
            outputs: Vec::new(),
        }
    }

    fn fail(code: i32, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
            outputs: Vec::new(),
        }
    }
}

pub fn run<I, T>(args: I) -> CommandOutcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            return CommandOutcome::fail(code, e.render().to_string());
        }
    };
    let Some(path) = cli.config.as_deref() else {
        return CommandOutcome::fail(EXIT_USAGE, "error: --config PATH is required");
    };
    match cli.command {
        Command::Check => cmd_check(path),
        Command::Fk {
            leg,
            theta1,
            theta2,
            theta3,
        } => with_config(path, |cfg| cmd_fk(cfg, leg, [theta1, theta2, theta3])),
        Command::Ik {
            leg,
            branch,
            x,
            y,
            z,
        } => with_config(path, |cfg| {
            cmd_ik(cfg, leg, FootPosition::new(x, y, z), branch)
        }),
        Command::Gait(args) => with_config(path, |cfg| cmd_gait(cfg, &args)),
    }
}

fn config_failure(e: ConfigError) -> CommandOutcome {
    match e {
        ConfigError::Validation(report) => CommandOutcome::fail(EXIT_DOMAIN, report.to_string()),
        other => CommandOutcome::fail(EXIT_USAGE, other.to_string()),
    }
}

fn with_config(path: &Path, f: impl FnOnce(&RobotConfig) -> CommandOutcome) -> CommandOutcome {
    match load_config(path) {
        Ok(cfg) => f(&cfg),
        Err(e) => config_failure(e),
    }
}

pub fn cmd_check(path: &Path) -> CommandOutcome {
    match load_config(path) {
        Ok(_) => CommandOutcome::ok("OK".into()),
        Err(e) => config_failure(e),
    }
}

pub fn cmd_fk(cfg: &RobotConfig, leg: LegId, angles_deg: [f64; 3]) -> CommandOutcome {
    if cfg.layout.mount(leg).is_none() {
        return CommandOutcome::fail(EXIT_DOMAIN, format!("leg {leg} is not in the layout"));
    }
    if angles_deg.iter().any(|a| !a.is_finite()) {
        return CommandOutcome::fail(EXIT_USAGE, "angles must be finite numbers of degrees");
    }
    let p = forward_kinematics(&cfg.geometry, &JointAngles::from_degrees(angles_deg));
    CommandOutcome::ok(format!("{} {} {}", meters(p.x), meters(p.y), meters(p.z)))
}

pub fn cmd_ik(
    cfg: &RobotConfig,
    leg: LegId,
    target: FootPosition,
    branch: Option<Branch>,
) -> CommandOutcome {
    if cfg.layout.mount(leg).is_none() {
        return CommandOutcome::fail(EXIT_DOMAIN, format!("leg {leg} is not in the layout"));
    }
    if !target.is_finite() {
        return CommandOutcome::fail(EXIT_USAGE, "target must be finite numbers of meters");
    }
    let preference = branch.map_or(BranchPreference::Any, BranchPreference::Prefer);
    let solutions = match inverse_kinematics(&cfg.geometry, &cfg.limits, &target, preference) {
        Ok(s) => s,
        Err(e) => return CommandOutcome::fail(EXIT_DOMAIN, format!("unreachable: {e}")),
    };
    // a straight knee is one pose shared by both branches
    let shown: Vec<_> = match branch {
        Some(b) if solutions.len() > 1 => solutions.into_iter().filter(|s| s.branch == b).collect(),
        _ => solutions,
    };
    let lines: Vec<String> = shown
        .iter()
        .map(|s| {
            let [d1, d2, d3] = s.angles.to_degrees();
            let mut line = format!(
                "{} {} {} {}",
                degrees(d1),
                degrees(d2),
                degrees(d3),
                s.branch
            );
            if !s.within_limits {
                line.push_str(" outside-limits");
            }
            line
        })
        .collect();
    CommandOutcome::ok(lines.join("\n"))
}

pub fn cmd_gait(cfg: &RobotConfig, args: &GaitArgs) -> CommandOutcome {
    if args.dt <= 0.0 || !args.dt.is_finite() {
        return CommandOutcome::fail(
            EXIT_USAGE,
            format!("--dt must be positive, got {}", args.dt),
        );
    }
    let params = CrawlParams {
        cycles: args.cycles,
        stride: args.stride.unwrap_or(cfg.gait.stride),
        cycle_period: args.period.unwrap_or(cfg.gait.cycle_period),
        force: args.force,
    };
    let plan = match generate_crawl(cfg, &params) {
        Ok(plan) => plan,
        Err(e @ GaitError::InvalidParameter(_)) => {
            return CommandOutcome::fail(EXIT_USAGE, e.to_string())
        }
        Err(e) => return CommandOutcome::fail(EXIT_DOMAIN, e.to_string()),
    };
    let timeline = match stance_joint_timeline(cfg, &plan, args.dt) {
        Ok(t) => t,
        Err(e) => return CommandOutcome::fail(EXIT_DOMAIN, e.to_string()),
    };
    let margins: Result<Vec<f64>, _> = timeline.times.iter().map(|&t| plan.margin_at(t)).collect();
    let margins = match margins {
        Ok(m) => m,
        Err(e) => return CommandOutcome::fail(EXIT_DOMAIN, e.to_string()),
    };

    let mut gait_csv = Vec::new();
    write_gait_csv(&timeline, &margins, &mut gait_csv).expect("writing to memory");
    let servo_csv = match &args.servo_out {
        Some(_) => match emit_timeline(cfg, &timeline) {
            Ok(commands) => {
                let mut buf = Vec::new();
                write_servo_csv(&commands, &mut buf).expect("writing to memory");
                Some(buf)
            }
            Err(e) => return CommandOutcome::fail(EXIT_DOMAIN, e.to_string()),
        },
        None => None,
    };

    let mut outputs = vec![args.out.clone()];
    if let Err(e) = write_atomic(&args.out, &gait_csv) {
        return CommandOutcome::fail(
            EXIT_USAGE,
            format!("cannot write {}: {e}", args.out.display()),
        );
    }
    if let (Some(path), Some(bytes)) = (&args.servo_out, &servo_csv) {
        if let Err(e) = write_atomic(path, bytes) {
            return CommandOutcome::fail(
                EXIT_USAGE,
                format!("cannot write {}: {e}", path.display()),
            );
        }
        outputs.push(path.clone());
    }

    let mut message = format!("min margin: {} m", meters(plan.report.min_margin));
    if let Ok(standing) = standing_margin(cfg) {
        message.push_str(&format!("\nstanding margin: {} m", meters(standing)));
    }
    if plan.report.min_margin < cfg.gait.min_margin {
        message.push_str(&format!(
            "\nwarning: below the required {} m at t = {:.3} s",
            meters(cfg.gait.min_margin),
            plan.report.min_margin_time
        ));
    }
    for path in &outputs {
        message.push_str(&format!("\nwrote {}", path.display()));
    }
    CommandOutcome {
        code: EXIT_OK,
        message,
        outputs,
    }
}

/// Writes `bytes` next to `path` and renames it into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> io::Result<()> {
    let dir = path
        .parent()
        .filter(|d| !d.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    let name = path
        .file_name()
        .ok_or_else(|| io::Error::new(io::ErrorKind::InvalidInput, "not a file path"))?;
    let mut tmp_name = OsString::from(".");
    tmp_name.push(name);
    tmp_name.push(format!(".{}.tmp", std::process::id()));
    let tmp = dir.join(tmp_name);
    fs::write(&tmp, bytes)?;
    fs::rename(&tmp, path).inspect_err(|_| {
        let _ = fs::remove_file(&tmp);
    })
}
