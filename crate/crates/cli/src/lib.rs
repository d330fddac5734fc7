//! Command-line front end for `mfres`: corpus parsing, command dispatch and
//! deterministic reports. All mathematics lives in the `mfres` library.

pub mod commands;
pub mod corpus;
pub mod report;
pub mod selftest;

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use mfres::pairings::PairingKind;
use mfres::MonomialOrder;

pub use report::{Report, Status};

#[derive(Debug)]
pub enum CliError {
    /// Malformed input or arguments (exit code 2).
    Usage(String),
    /// A mathematical precondition failed (exit code 1).
    Domain(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Domain(_) => 1,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Domain(m) => m,
        }
    }
}

impl From<mfres::Error> for CliError {
    fn from(e: mfres::Error) -> Self {
        use mfres::Error::*;
        match e {
            Syntax { .. } | UnknownVariable { .. } | VariableIndex { .. } | RingMismatch | RankMismatch { .. }
            | Shape(_) | OutOfRange { .. } => CliError::Usage(e.to_string()),
            _ => CliError::Domain(e.to_string()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Parser)]
#[command(name = "mfres", version, about = "Exact invariants of matrix factorizations")]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "json")]
    pub format: Format,

    /// Monomial order used for Gröbner computations.
    #[arg(long, global = true, default_value = "degrevlex")]
    pub order: MonomialOrder,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check AB = BA = f·I for every factorization in a corpus.
    Validate { corpus: PathBuf },
    /// Milnor number and monomial basis of the Milnor algebra.
    Milnor { corpus: PathBuf },
    /// Chern character form of a factorization and its Milnor class.
    Chern {
        corpus: PathBuf,
        #[arg(long)]
        name: String,
    },
    /// Residue pairing of the Chern character forms of two factorizations.
    Residue {
        corpus: PathBuf,
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
    },
    /// Euler pairing χ of two factorizations.
    Euler {
        corpus: PathBuf,
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
    },
    /// Hochster theta pairing of two modules.
    Theta {
        corpus: PathBuf,
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
    },
    /// Herbrand difference of two factorizations.
    Herbrand {
        corpus: PathBuf,
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
    },
    /// Compare χ with the residue of Chern characters.
    Hrr {
        corpus: PathBuf,
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
    },
    /// Gram matrix of a pairing on a list of items.
    Gram {
        corpus: PathBuf,
        #[arg(long)]
        pairing: PairingKind,
        #[arg(long, value_delimiter = ',', required = true)]
        items: Vec<String>,
    },
    /// Positive semi-definiteness of a Gram report.
    Psd { report: PathBuf },
    /// Weight filtration of a nilpotent matrix.
    WeightFiltration {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        center: usize,
    },
    /// Check f·tr((dA dB)^j) = j df ∧ tr(A dB (dA dB)^{j-1}).
    LemmaCheck {
        corpus: PathBuf,
        #[arg(long)]
        j: usize,
        #[arg(long)]
        name: Option<String>,
    },
    /// Run every expectation recorded in a directory of corpus files.
    Selftest {
        #[arg(default_value = "corpus")]
        dir: PathBuf,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Validate { .. } => "validate",
            Command::Milnor { .. } => "milnor",
            Command::Chern { .. } => "chern",
            Command::Residue { .. } => "residue",
            Command::Euler { .. } => "euler",
            Command::Theta { .. } => "theta",
            Command::Herbrand { .. } => "herbrand",
            Command::Hrr { .. } => "hrr",
            Command::Gram { .. } => "gram",
            Command::Psd { .. } => "psd",
            Command::WeightFiltration { .. } => "weight-filtration",
            Command::LemmaCheck { .. } => "lemma-check",
            Command::Selftest { .. } => "selftest",
        }
    }
}

/// Result of one invocation: exit code and standard output.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
}

/// Parses `argv` (including the program name) and runs the command.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                return Outcome {
                    code: 0,
                    stdout: e.to_string(),
                };
            }
            return Outcome {
                code: 2,
                stdout: Report::error("mfres", e.to_string().trim_end().to_string()).to_json(),
            };
        }
    };
    let name = cli.command.name();
    let (code, report) = match commands::execute(&cli.command, cli.order) {
        Ok((code, report)) => (code, report),
        Err(e) => (e.exit_code(), Report::error(name, e.message().to_string())),
    };
    let stdout = match cli.format {
        Format::Json => report.to_json(),
        Format::Text => report.to_text(),
    };
    Outcome { code, stdout }
}
