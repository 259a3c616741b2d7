//! `lyat`: command-line front end for Lie-Yamaguti algebra computations.
//!
//! Exit codes: 0 when the check passes (or the answer is yes), 1 when it is
//! mathematically false, 2 on bad input or usage.

mod commands;
mod report;

use std::process::ExitCode;

use anyhow::{bail, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use lyat_core::FieldSpec;

use report::{Inputs, Output};

#[derive(Parser, Debug)]
#[command(name = "lyat", version, about = "Exact computations for Lie-Yamaguti algebras")]
pub struct Cli {
    /// Report format; data commands always emit JSON documents.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    /// Write output to a file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<String>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FieldKind {
    Rational,
    Prime,
}

#[derive(Args, Debug, Clone, Default)]
pub struct FieldArgs {
    /// Ground field.
    #[arg(long, value_enum)]
    pub field: Option<FieldKind>,
    /// Characteristic for a prime field; implies `--field prime`.
    #[arg(long)]
    pub p: Option<u32>,
}

impl FieldArgs {
    pub fn resolve(&self) -> Result<FieldSpec> {
        match (self.field, self.p) {
            (None | Some(FieldKind::Rational), None) => Ok(FieldSpec::Rational),
            (Some(FieldKind::Rational), Some(_)) => bail!("--p is only meaningful with a prime field"),
            (Some(FieldKind::Prime), None) => bail!("--field prime needs --p"),
            (_, Some(p)) => Ok(FieldSpec::prime(p)?),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum DocKind {
    Algebra,
    Representation,
    Cochain,
    Extension,
    Pair,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Check {
    /// `Ker 𝒲 = Im τ` over the enumerated groups.
    Wells,
    /// Exactness of both sequences, the kernel/H¹ match and the split-case factorizations.
    Sequences,
    /// Cohomological decision against exhaustive lift search on every pair.
    Inducible,
    /// Search for pairs on which the Wells map is not additive.
    WellsHom,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    AsStated,
    Corrected,
    Both,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check a document (kind detected from its keys unless given).
    Validate {
        /// File, or `-` for stdin.
        input: String,
        #[arg(long, value_enum)]
        kind: Option<DocKind>,
        /// Extension for a pair, or representation for a cochain (cocycle test).
        #[arg(long)]
        against: Option<String>,
    },
    /// Dimensions, center and lower central series of an algebra.
    Info { algebra: String },
    /// H¹ and H^(2,3) of a representation (an algebra file means its adjoint representation).
    Cohomology {
        input: String,
        /// Use the trivial representation of this dimension when the input is an algebra.
        #[arg(long)]
        trivial: Option<usize>,
        /// Also compute H^(4,5).
        #[arg(long)]
        h45: bool,
        /// Largest algebra dimension for H^(4,5).
        #[arg(long, default_value_t = 4)]
        guard: usize,
    },
    #[command(subcommand)]
    Extension(ExtensionCmd),
    /// Whether a pair (φ, ψ) is compatible with the representation.
    Compatible { ext: String, pair: String },
    /// Wells class of a compatible pair.
    Wells { ext: String, pair: String },
    /// Decide inducibility, with a lift γ or a reason.
    Induce { ext: String, pair: String },
    /// Polynomial relations on (ψ, φ) for a nilpotent-index-2 algebra or extension.
    Relations { input: String },
    /// Block conditions for a pair on the central extension of 𝔥_n.
    Conditions {
        pair: String,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = ModeArg::Both)]
        mode: ModeArg,
        #[command(flatten)]
        field: FieldArgs,
    },
    /// Finite-field enumeration checks.
    Enumerate {
        ext: String,
        #[arg(long, value_enum)]
        check: Check,
        /// Reduce a rational extension modulo p.
        #[arg(long)]
        p: Option<u32>,
        /// Cap on search nodes.
        #[arg(long)]
        budget: Option<u64>,
        /// Witness cap for `--check wells-hom`.
        #[arg(long, default_value_t = 5)]
        max_witnesses: usize,
    },
    #[command(subcommand)]
    Builtin(BuiltinCmd),
    /// Compare the block conditions with the direct test on seeded random pairs.
    Crosscheck {
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long, default_value_t = 500)]
        samples: usize,
        #[arg(long, default_value_t = 2024)]
        seed: u64,
        #[command(flatten)]
        field: FieldArgs,
    },
}

#[derive(Subcommand, Debug)]
pub enum ExtensionCmd {
    /// `0 → Z(L) → L → L/Z(L) → 0`.
    Central { algebra: String },
    /// Extension from a representation and a (2,3)-cocycle.
    Build { base: String, rep: String, cocycle: String },
    /// Extension read off an abelian ideal of a total algebra.
    FromTotal {
        total: String,
        /// JSON array of spanning vectors; defaults to the center.
        #[arg(long)]
        span: Option<String>,
    },
}

#[derive(Subcommand, Debug)]
pub enum BuiltinCmd {
    /// Heisenberg algebra 𝔥_n.
    Heisenberg(BuiltinAlg),
    /// Generalized Heisenberg algebra 𝔊_n.
    Gheisenberg(BuiltinAlg),
    /// Pair (κ, ψ) from the inducible family on 𝔥_n.
    FamilyPair {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "1")]
        kappa: String,
        /// 0-based permutation, comma separated; identity by default.
        #[arg(long, value_delimiter = ',')]
        perm: Vec<usize>,
        /// Shifts, comma separated; zero by default.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        s: Vec<String>,
        #[command(flatten)]
        field: FieldArgs,
    },
}

#[derive(Args, Debug)]
pub struct BuiltinAlg {
    #[arg(long)]
    pub n: usize,
    /// Emit the central extension instead of the algebra.
    #[arg(long)]
    pub central: bool,
    #[command(flatten)]
    pub field: FieldArgs,
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Validate { .. } => "validate",
        Command::Info { .. } => "info",
        Command::Cohomology { .. } => "cohomology",
        Command::Extension(_) => "extension",
        Command::Compatible { .. } => "compatible",
        Command::Wells { .. } => "wells",
        Command::Induce { .. } => "induce",
        Command::Relations { .. } => "relations",
        Command::Conditions { .. } => "conditions",
        Command::Enumerate { .. } => "enumerate",
        Command::Builtin(_) => "builtin",
        Command::Crosscheck { .. } => "crosscheck",
    }
}

fn emit(cli: &Cli, body: &str) -> Result<()> {
    match &cli.out {
        Some(path) => std::fs::write(path, body)?,
        None => print!("{body}"),
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<i32> {
    let mut inputs = Inputs::default();
    let out = commands::run(&cli.command, cli.format, &mut inputs)?;
    match out {
        Output::Document(doc) => {
            emit(cli, &doc)?;
            Ok(0)
        }
        Output::Report(rep) => {
            let body = match cli.format {
                Format::Json => report::render_json(command_name(&cli.command), &inputs, &rep),
                Format::Text => report::render_text(&rep),
            };
            emit(cli, &body)?;
            Ok(rep.verdict.exit_code())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
