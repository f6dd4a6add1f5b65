//! The `latrep` command line.
//!
//! Exit codes: 0 when everything checked holds, 1 when a checked property
//! fails (a witness is printed), 2 for input or precondition errors.

pub mod commands;
pub mod document;

use std::path::PathBuf;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use thiserror::Error;

pub use commands::run;
pub use document::LatticeDocument;

pub const EXIT_OK: u8 = 0;
pub const EXIT_CLAIM_FAILED: u8 = 1;
pub const EXIT_INPUT: u8 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("malformed JSON: {0}")]
    Parse(String),
    #[error(transparent)]
    Lattice(#[from] latrep::Error),
}

#[derive(Debug, Parser)]
#[command(name = "latrep", version, about = "Represent finite lattices as lattices of sets of filters")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check that a document describes a lattice and summarize it.
    Validate {
        path: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Print a filter family and the point map a ↦ f(a).
    Represent {
        path: PathBuf,
        #[arg(long, default_value = "all")]
        family: FamilySpec,
        #[arg(long)]
        json: bool,
    },
    /// Check representation claims over all element pairs.
    Verify {
        path: PathBuf,
        #[arg(long, default_value = "all")]
        family: FamilySpec,
        #[arg(long, value_delimiter = ',', default_value = "prop1,prop2,iso,coincidence,symmetry")]
        claims: Vec<ClaimArg>,
        /// Run the coincidence check on prime/custom families too.
        #[arg(long)]
        force: bool,
        #[arg(long)]
        json: bool,
    },
    /// Search for a witness of a known failure.
    Counterexample {
        path: PathBuf,
        #[arg(long)]
        kind: CounterexampleKind,
        /// Family searched by `union-closure`.
        #[arg(long, default_value = "all")]
        family: FamilySpec,
        #[arg(long)]
        json: bool,
    },
    /// Enumerate all lattices up to a size and tally every claim.
    Census {
        #[arg(long)]
        max_size: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write the Hasse diagram in DOT format.
    ExportDot {
        path: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// `all`, `principal`, `prime`, or `custom:<path>`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FamilySpec {
    All,
    Principal,
    Prime,
    Custom(PathBuf),
}

impl FromStr for FamilySpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "all" => Ok(FamilySpec::All),
            "principal" => Ok(FamilySpec::Principal),
            "prime" => Ok(FamilySpec::Prime),
            _ => match s.strip_prefix("custom:") {
                Some(path) if !path.is_empty() => Ok(FamilySpec::Custom(PathBuf::from(path))),
                _ => Err(format!("expected all, principal, prime or custom:<path>, got `{s}`")),
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ClaimArg {
    Prop1,
    Prop2,
    Iso,
    Coincidence,
    Symmetry,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CounterexampleKind {
    #[value(name = "veestar2-gap")]
    Veestar2Gap,
    UnionClosure,
}
