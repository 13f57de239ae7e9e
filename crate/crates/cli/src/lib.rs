//! The `modn` command line: scalar evaluation, kaleidoscope states and their
//! observables, coordinate-space grids, and operator identity checks.

mod commands;
pub mod output;

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use modn_core::Complex64;

pub use commands::{execute_command, Emitted};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_INVALID_INPUT: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;
pub const EXIT_UNCERTIFIED: i32 = 4;

/// Environment variable capping the Fock dimension.
pub const MAX_DIM_ENV: &str = "MODN_MAX_DIM";
pub const DEFAULT_MAX_DIM: usize = 512;

#[derive(Debug, Parser)]
#[command(
    name = "modn",
    version,
    about = "Mod-n exponentials and kaleidoscope coherent states"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate ₖe^z by series and by root-of-unity superposition.
    #[command(allow_negative_numbers = true)]
    Eval(EvalArgs),
    /// Build the kaleidoscope state |k⟩_α and its observables.
    #[command(allow_negative_numbers = true)]
    State(StateArgs),
    /// Photon number and uncertainty, closed form next to the Fock basis.
    #[command(allow_negative_numbers = true)]
    Observables(StateArgs),
    /// Sample ψ(x) and |ψ(x)|² on a uniform grid.
    #[command(allow_negative_numbers = true)]
    Grid(GridArgs),
    /// Check the operator identities for A = α a†, B = β a.
    #[command(allow_negative_numbers = true)]
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Output format (grid defaults to csv, everything else to json).
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write to this file instead of standard output.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct ModulusArgs {
    /// Polygon order n.
    #[arg(long)]
    pub n: usize,
    /// Component index k in 0..n.
    #[arg(long)]
    pub k: usize,
}

#[derive(Debug, Clone, Args)]
pub struct EvalArgs {
    #[command(flatten)]
    pub modulus: ModulusArgs,
    #[arg(long, default_value_t = 0.0)]
    pub z_re: f64,
    #[arg(long, default_value_t = 0.0)]
    pub z_im: f64,
    /// Also evaluate the Gaussian component ₖe^{−z²+2zx} at this x.
    #[arg(long)]
    pub x: Option<f64>,
    #[command(flatten)]
    pub out: OutputArgs,
}

impl EvalArgs {
    pub fn z(&self) -> Complex64 {
        Complex64::new(self.z_re, self.z_im)
    }
}

#[derive(Debug, Clone, Args)]
pub struct AlphaArgs {
    #[arg(long, default_value_t = 0.0)]
    pub alpha_re: f64,
    #[arg(long, default_value_t = 0.0)]
    pub alpha_im: f64,
}

impl AlphaArgs {
    pub fn alpha(&self) -> Complex64 {
        Complex64::new(self.alpha_re, self.alpha_im)
    }
}

#[derive(Debug, Clone, Args)]
pub struct StateArgs {
    #[command(flatten)]
    pub modulus: ModulusArgs,
    #[command(flatten)]
    pub alpha: AlphaArgs,
    /// Fock dimension; chosen from |α| when omitted.
    #[arg(long)]
    pub dim: Option<usize>,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct GridArgs {
    #[command(flatten)]
    pub modulus: ModulusArgs,
    #[command(flatten)]
    pub alpha: AlphaArgs,
    #[arg(long)]
    pub x_min: Option<f64>,
    #[arg(long)]
    pub x_max: Option<f64>,
    /// Odd number of samples.
    #[arg(long, default_value_t = modn_core::coordinate::DEFAULT_SAMPLES)]
    pub samples: usize,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    /// Mod-2 factorization and the four exchange rules.
    Mod2Identities,
    Addition,
    QCommutation,
    All,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = Suite::All)]
    pub suite: Suite,
    #[arg(long, default_value_t = 64)]
    pub dim: usize,
    #[arg(long)]
    pub alpha_re: Option<f64>,
    #[arg(long)]
    pub alpha_im: Option<f64>,
    #[arg(long)]
    pub beta_re: Option<f64>,
    #[arg(long)]
    pub beta_im: Option<f64>,
    /// Residual tolerance (default 1e-8).
    #[arg(long)]
    pub tol: Option<f64>,
    #[command(flatten)]
    pub out: OutputArgs,
}

impl VerifyArgs {
    /// The single point given on the command line, if any flag was set.
    pub fn point(&self) -> Option<(Complex64, Complex64)> {
        let given = [self.alpha_re, self.alpha_im, self.beta_re, self.beta_im];
        given.iter().any(Option::is_some).then(|| {
            (
                Complex64::new(self.alpha_re.unwrap_or(0.0), self.alpha_im.unwrap_or(0.0)),
                Complex64::new(self.beta_re.unwrap_or(0.0), self.beta_im.unwrap_or(0.0)),
            )
        })
    }
}

/// Reads the dimension cap from [`MAX_DIM_ENV`].
pub fn max_dim_from_env() -> Result<usize, String> {
    match std::env::var(MAX_DIM_ENV) {
        Err(_) => Ok(DEFAULT_MAX_DIM),
        Ok(text) => match text.trim().parse::<usize>() {
            Ok(v) if v >= 2 => Ok(v),
            _ => Err(format!(
                "{MAX_DIM_ENV} must be an integer >= 2, got {text:?}"
            )),
        },
    }
}

/// Runs one parsed invocation, writing the payload to `stdout` (or the
/// `--output` file) and diagnostics to `stderr`. Returns the exit code.
pub fn run(cli: &Cli, max_dim: usize, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let emitted = execute_command(&cli.command, max_dim);
    if let Some(message) = &emitted.message {
        let _ = writeln!(stderr, "modn: {message}");
    }
    if let Some(body) = &emitted.body {
        let written = match output_path(&cli.command) {
            Some(path) => std::fs::write(path, body.as_bytes())
                .map_err(|e| format!("cannot write {}: {e}", path.display())),
            None => stdout
                .write_all(body.as_bytes())
                .map_err(|e| format!("cannot write output: {e}")),
        };
        if let Err(message) = written {
            let _ = writeln!(stderr, "modn: {message}");
            return EXIT_INVALID_INPUT;
        }
    }
    emitted.code
}

fn output_path(command: &Command) -> Option<&PathBuf> {
    match command {
        Command::Eval(a) => a.out.output.as_ref(),
        Command::State(a) | Command::Observables(a) => a.out.output.as_ref(),
        Command::Grid(a) => a.out.output.as_ref(),
        Command::Verify(a) => a.out.output.as_ref(),
    }
}
