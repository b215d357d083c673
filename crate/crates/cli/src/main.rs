//! `ncrad`: real radicals of left ideals in the free *-algebra.

mod commands;
mod input;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ncrad_core::{FeasConfig, RealRadConfig};

pub const EXIT_NO: u8 = 1;
pub const EXIT_UNKNOWN: u8 = 2;
pub const EXIT_USAGE: u8 = 64;
pub const EXIT_PARSE: u8 = 65;

#[derive(Parser, Debug)]
#[command(name = "ncrad", version, about = "Real radicals of left ideals in the free *-algebra over Q")]
struct Cli {
    #[command(flatten)]
    opts: Options,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Options {
    /// Seed of the numeric solver.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Numeric tolerance of the solver.
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tol: f64,
    /// Iteration budget of the numeric solver.
    #[arg(long = "max-iter", global = true, default_value_t = 10_000)]
    pub max_iter: usize,
    /// Largest denominator tried when rounding.
    #[arg(long = "den-cap", global = true, default_value_t = 1_000_000)]
    pub den_cap: u64,
    /// Degree cap for α-radical searches and univariate factoring.
    #[arg(long = "degree-cap", global = true)]
    pub degree_cap: Option<usize>,
    /// Include the full round-by-round trace.
    #[arg(long, global = true)]
    pub trace: bool,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Number of variables (default: largest index in the input).
    #[arg(long, global = true)]
    pub vars: Option<usize>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Real radical of the ideal generated by FILE (one polynomial per line).
    Realrad { file: PathBuf },
    /// Is POLY in the left ideal?
    Member {
        file: PathBuf,
        #[arg(long)]
        poly: String,
    },
    /// Is the ideal real?
    Isreal { file: PathBuf },
    /// Is POLY in the α-radical?
    Alpha {
        file: PathBuf,
        #[arg(long)]
        poly: String,
    },
    /// Does every generator added by the real radical lie in the α-radical?
    Beta { file: PathBuf },
    /// Evaluate the generators at a matrix point.
    Eval {
        file: PathBuf,
        #[arg(long)]
        point: PathBuf,
        /// Also compress the point to the words of length at most D.
        #[arg(long, value_name = "D")]
        compress: Option<usize>,
    },
    /// Matrices over Q[x].
    Matpoly {
        #[command(subcommand)]
        cmd: MatpolyCommand,
    },
}

#[derive(Subcommand, Debug)]
enum MatpolyCommand {
    /// Smith normal form of the square matrix in FILE.
    Smith { file: PathBuf },
    /// Real radical of the left ideal generated by the matrices in FILE (one per line).
    Realrad { file: PathBuf },
    /// Is MATRIX in the real radical?
    Member {
        file: PathBuf,
        #[arg(long)]
        matrix: String,
    },
}

impl Options {
    fn validate(&self) -> Result<(), String> {
        if !(self.tol.is_finite() && self.tol > 0.0) {
            return Err(format!("--tol must be a positive number, got {}", self.tol));
        }
        if self.max_iter == 0 {
            return Err("--max-iter must be at least 1".into());
        }
        if self.den_cap == 0 {
            return Err("--den-cap must be at least 1".into());
        }
        if self.vars == Some(0) {
            return Err("--vars must be at least 1".into());
        }
        Ok(())
    }

    pub fn config(&self) -> RealRadConfig {
        RealRadConfig {
            feas: FeasConfig {
                max_iterations: self.max_iter,
                numeric_tolerance: self.tol,
                rounding_denominator_cap: self.den_cap,
                random_seed: self.seed,
            },
            vars: self.vars,
            ..Default::default()
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    if let Err(msg) = cli.opts.validate() {
        eprintln!("error: {msg}");
        return ExitCode::from(EXIT_USAGE);
    }
    let o = &cli.opts;
    let result = match &cli.cmd {
        Command::Realrad { file } => commands::realrad(file, o),
        Command::Member { file, poly } => commands::member(file, poly, o),
        Command::Isreal { file } => commands::isreal(file, o),
        Command::Alpha { file, poly } => commands::alpha(file, poly, o),
        Command::Beta { file } => commands::beta(file, o),
        Command::Eval { file, point, compress } => commands::eval(file, point, *compress, o),
        Command::Matpoly { cmd } => match cmd {
            MatpolyCommand::Smith { file } => commands::smith(file, o),
            MatpolyCommand::Realrad { file } => commands::mat_realrad(file, o),
            MatpolyCommand::Member { file, matrix } => commands::mat_member(file, matrix, o),
        },
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("{}", f.message);
            ExitCode::from(f.code)
        }
    }
}
