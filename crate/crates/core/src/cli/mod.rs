//! Command-line front end: argument parsing, curve files, and artifact output.

pub mod curve_file;
mod run;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::error::{Error, Result};

pub use curve_file::{load_curve, parse_curve};
pub use run::{run, RunOutcome};

#[derive(Debug, Parser)]
#[command(
    name = "holocurve",
    version,
    about = "Growth of holomorphic curves omitting coordinate hyperplanes"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, PartialEq, Subcommand)]
pub enum Command {
    /// Growth estimate, both characteristic routes and the reduced characteristic.
    Analyze(CommonArgs),
    /// T(r) by the area and Jensen routes plus n(t), as CSV.
    Characteristic(CommonArgs),
    /// Trace the equal-value locus of the reduced curve out to --rmax.
    Locus(CommonArgs),
    /// Randomized harnesses for the two disc lemmas.
    Lemmas(CommonArgs),
    /// Check the four estimates and the assembled bound on a radius grid.
    VerifyBound(CommonArgs),
}

#[derive(Debug, Clone, PartialEq, Args)]
pub struct CommonArgs {
    /// Curve specification (TOML); required by every command except `lemmas`.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Output directory for CSV/JSON artifacts.
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
    #[arg(long, default_value_t = 1.0)]
    pub rmin: f64,
    #[arg(long, default_value_t = 50.0)]
    pub rmax: f64,
    /// Number of geometrically spaced radii.
    #[arg(long, default_value_t = 16)]
    pub grid: usize,
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    /// Slack in the second estimate; C(n, sigma) depends on it.
    #[arg(long, default_value_t = 0.01)]
    pub epsilon: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Instances per lemma (`lemmas` only).
    #[arg(long, default_value_t = 1000)]
    pub count: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Analyze,
    Characteristic,
    Locus,
    Lemmas,
    VerifyBound,
}

impl CommandKind {
    pub fn name(self) -> &'static str {
        match self {
            CommandKind::Analyze => "analyze",
            CommandKind::Characteristic => "characteristic",
            CommandKind::Locus => "locus",
            CommandKind::Lemmas => "lemmas",
            CommandKind::VerifyBound => "verify-bound",
        }
    }
}

/// Validated run parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: CommandKind,
    pub input: Option<PathBuf>,
    pub out: PathBuf,
    pub r_min: f64,
    pub r_max: f64,
    pub grid: usize,
    pub tol: f64,
    pub epsilon: f64,
    pub seed: u64,
    pub count: usize,
}

impl RunConfig {
    pub fn from_command(cmd: Command) -> Result<Self> {
        let (command, a) = match cmd {
            Command::Analyze(a) => (CommandKind::Analyze, a),
            Command::Characteristic(a) => (CommandKind::Characteristic, a),
            Command::Locus(a) => (CommandKind::Locus, a),
            Command::Lemmas(a) => (CommandKind::Lemmas, a),
            Command::VerifyBound(a) => (CommandKind::VerifyBound, a),
        };
        let cfg = RunConfig {
            command,
            input: a.input,
            out: a.out,
            r_min: a.rmin,
            r_max: a.rmax,
            grid: a.grid,
            tol: a.tol,
            epsilon: a.epsilon,
            seed: a.seed,
            count: a.count,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.r_min > 0.0 && self.r_min < self.r_max && self.r_max.is_finite()) {
            return Err(Error::Input(format!(
                "need 0 < --rmin < --rmax, got {} and {}",
                self.r_min, self.r_max
            )));
        }
        if !(self.tol > 0.0) {
            return Err(Error::Input(format!("--tol must be positive, got {}", self.tol)));
        }
        if self.grid < 8 {
            return Err(Error::Input(format!("--grid must be at least 8, got {}", self.grid)));
        }
        if !(self.epsilon > 0.0) {
            return Err(Error::Input(format!(
                "--epsilon must be positive, got {}",
                self.epsilon
            )));
        }
        if self.command != CommandKind::Lemmas && self.input.is_none() {
            return Err(Error::Input(format!("{} needs --input", self.command.name())));
        }
        Ok(())
    }

    /// `grid` radii spaced geometrically over `[r_min, r_max]`.
    pub fn radii(&self) -> Vec<f64> {
        let step = (self.r_max / self.r_min).ln() / (self.grid - 1) as f64;
        (0..self.grid)
            .map(|i| {
                if i + 1 == self.grid {
                    self.r_max
                } else {
                    self.r_min * (step * i as f64).exp()
                }
            })
            .collect()
    }
}
