//! `pincode`: batch front end for building pin codes and analysing them.

mod commands;
mod report;
mod spec;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use pincode::f2la::MatrixFormat;

/// Worker threads for the parallel searches; unset means one per core.
pub const THREADS_ENV: &str = "PINCODE_THREADS";

#[derive(Debug)]
pub enum CliError {
    Spec(String),
    Core(pincode::Error),
    Constraint(String),
    Io(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        use pincode::Error as E;
        match self {
            CliError::Spec(_) => 2,
            CliError::Constraint(_) => 3,
            CliError::Io(_) => 1,
            CliError::Core(e) => match e {
                E::Parse { .. } | E::InvalidType(_) | E::MalformedCollection(_) => 2,
                E::Dimension(_) | E::RelationMismatch | E::InvalidParameters(_) | E::NotPinCodeRelation(_) => 3,
                E::EnumerationBudget { .. } | E::DistanceRefused(_) | E::Precondition(_) => 4,
                E::Io(_) => 1,
            },
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Spec(m) => write!(f, "invalid job spec: {m}"),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Constraint(m) => write!(f, "{m}"),
            CliError::Io(m) => write!(f, "io error: {m}"),
        }
    }
}

impl From<pincode::Error> for CliError {
    fn from(e: pincode::Error) -> Self {
        CliError::Core(e)
    }
}

#[derive(Parser)]
#[command(name = "pincode", version, about = "Build quantum pin codes and analyse them")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
pub struct Common {
    /// Job specification in TOML.
    pub spec: PathBuf,
    /// Output directory, overriding `[output] dir`.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Matrix format for written files: dense or alist.
    #[arg(long)]
    pub format: Option<MatrixFormat>,
}

#[derive(Args, Clone, Default)]
pub struct CodeArgs {
    #[arg(long)]
    pub x: Option<usize>,
    #[arg(long)]
    pub z: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Build and validate the relation, writing it to the output directory.
    Build {
        #[command(flatten)]
        common: Common,
    },
    /// Parameters, stabilizer weights and distance of the pin code.
    Analyze {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        code: CodeArgs,
        /// exact or bound.
        #[arg(long)]
        distance_mode: Option<String>,
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Exact and quasi-transversality of the phase gate at one level.
    Transversality {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        code: CodeArgs,
        #[arg(long)]
        level: Option<usize>,
    },
    /// Subsystem code from the complementary pinned sets.
    Gauge {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        code: CodeArgs,
    },
    /// Shrunk chain complex of one type and its lifted homology.
    Shrunk {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        code: CodeArgs,
        /// Comma-separated ranks of the type.
        #[arg(long = "type", value_delimiter = ',')]
        type_ranks: Option<Vec<usize>>,
    },
    /// Random puncturing of a triorthogonal generator matrix.
    Puncture {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        target_k: Option<usize>,
        #[arg(long)]
        target_d: Option<usize>,
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Write stabilizer and logical matrices of the code.
    Export {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        code: CodeArgs,
    },
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(value) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let threads: usize = value
        .trim()
        .parse()
        .map_err(|_| CliError::Spec(format!("{THREADS_ENV} must be a positive integer, got {value:?}")))?;
    if threads == 0 {
        return Err(CliError::Spec(format!("{THREADS_ENV} must be a positive integer")));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Io(e.to_string()))
}

fn run(cli: Cli) -> Result<(), CliError> {
    configure_threads()?;
    match cli.command {
        Command::Build { common } => commands::build(&common),
        Command::Analyze {
            common,
            code,
            distance_mode,
            budget,
            seed,
        } => commands::analyze(&common, &code, distance_mode, budget, seed),
        Command::Transversality { common, code, level } => commands::transversality(&common, &code, level),
        Command::Gauge { common, code } => commands::gauge(&common, &code),
        Command::Shrunk {
            common,
            code,
            type_ranks,
        } => commands::shrunk(&common, &code, type_ranks),
        Command::Puncture {
            common,
            target_k,
            target_d,
            budget,
            seed,
        } => commands::puncture(&common, target_k, target_d, budget, seed),
        Command::Export { common, code } => commands::export(&common, &code),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
