use std::path::PathBuf;

use clap::{Parser, ValueEnum};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// Exact payoffs and Stokes vector for a pure state.
    Exact,
    /// Finite-shot tomography of a pure state.
    Sample,
    /// Exact or sampled tomography over a θ×φ grid.
    Sweep,
    /// Density matrix from given Stokes parameters.
    Reconstruct,
    /// Measurement planes and their intersection on the Bloch sphere.
    Bloch,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Exact => "exact",
            Command::Sample => "sample",
            Command::Sweep => "sweep",
            Command::Reconstruct => "reconstruct",
            Command::Bloch => "bloch",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

pub const DEFAULT_SHOTS: u64 = 8192;
pub const DEFAULT_THETA_STEPS: usize = 11;
pub const DEFAULT_PHI_STEPS: usize = 21;

/// Single-qubit tomography from the payoffs of a quantized two-player game.
#[derive(Debug, Parser)]
#[command(name = "qtomo", version, about)]
pub struct Cli {
    #[arg(value_enum)]
    pub command: Command,
    /// Polar angle of the input state (radians unless --degrees).
    #[arg(long, allow_negative_numbers = true)]
    pub theta: Option<f64>,
    /// Azimuthal angle of the input state (radians unless --degrees); defaults to 0.
    #[arg(long, allow_negative_numbers = true)]
    pub phi: Option<f64>,
    /// Interpret --theta and --phi as degrees.
    #[arg(long)]
    pub degrees: bool,
    /// Shots per protocol step.
    #[arg(long)]
    pub shots: Option<u64>,
    /// Master seed; falls back to QTOMO_SEED, then to a fresh random seed.
    #[arg(long, env = "QTOMO_SEED")]
    pub seed: Option<u64>,
    /// Independent repetitions of `sample`, each with a derived seed.
    #[arg(long, default_value_t = 1)]
    pub trials: u32,
    #[arg(long, default_value_t = DEFAULT_THETA_STEPS)]
    pub theta_steps: usize,
    #[arg(long, default_value_t = DEFAULT_PHI_STEPS)]
    pub phi_steps: usize,
    /// Evaluate the sweep with exact payoffs instead of sampling.
    #[arg(long)]
    pub exact: bool,
    #[arg(long, allow_negative_numbers = true)]
    pub s1: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub s2: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub s3: Option<f64>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Validated run parameters. Angles are in radians.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub theta: Option<f64>,
    pub phi: Option<f64>,
    pub degrees: bool,
    pub shots: u64,
    /// True when `shots` was given explicitly.
    pub shots_given: bool,
    pub seed: u64,
    pub trials: u32,
    pub theta_steps: usize,
    pub phi_steps: usize,
    pub exact: bool,
    pub stokes: Option<[f64; 3]>,
    pub format: Format,
    pub out: Option<PathBuf>,
}

fn finite(name: &str, x: Option<f64>) -> Result<Option<f64>, CliError> {
    match x {
        Some(v) if !v.is_finite() => Err(CliError::Validation(format!("--{name} must be finite, got {v}"))),
        other => Ok(other),
    }
}

impl RunConfig {
    /// Validates parsed arguments. `entropy_seed` is only called when neither
    /// --seed nor QTOMO_SEED is set.
    pub fn from_cli(cli: Cli, entropy_seed: impl FnOnce() -> u64) -> Result<Self, CliError> {
        let to_rad = |x: f64| if cli.degrees { x.to_radians() } else { x };
        let theta = finite("theta", cli.theta)?.map(to_rad);
        let phi = finite("phi", cli.phi)?.map(to_rad);

        let needs_angles = matches!(cli.command, Command::Exact | Command::Sample | Command::Bloch);
        if needs_angles && theta.is_none() {
            return Err(CliError::Validation(format!("`{}` requires --theta", cli.command.name())));
        }

        let shots = cli.shots.unwrap_or(DEFAULT_SHOTS);
        if shots < 1 {
            return Err(CliError::Validation("--shots must be at least 1".into()));
        }
        if cli.trials < 1 {
            return Err(CliError::Validation("--trials must be at least 1".into()));
        }
        if cli.command == Command::Sweep && (cli.theta_steps < 2 || cli.phi_steps < 2) {
            return Err(CliError::Validation(
                "--theta-steps and --phi-steps must each be at least 2".into(),
            ));
        }

        let stokes = match (finite("s1", cli.s1)?, finite("s2", cli.s2)?, finite("s3", cli.s3)?) {
            (Some(a), Some(b), Some(c)) => Some([a, b, c]),
            (None, None, None) => None,
            _ => return Err(CliError::Validation("--s1, --s2 and --s3 must be given together".into())),
        };
        if cli.command == Command::Reconstruct && stokes.is_none() {
            return Err(CliError::Validation("`reconstruct` requires --s1, --s2 and --s3".into()));
        }

        Ok(Self {
            command: cli.command,
            theta,
            phi,
            degrees: cli.degrees,
            shots,
            shots_given: cli.shots.is_some(),
            seed: cli.seed.unwrap_or_else(entropy_seed),
            trials: cli.trials,
            theta_steps: cli.theta_steps,
            phi_steps: cli.phi_steps,
            exact: cli.exact,
            stokes,
            format: cli.format,
            out: cli.out,
        })
    }
}
