use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use frobex::doc::{self, Document, JobSpec, Operation};
use frobex::{Error, Result};

#[derive(Parser)]
#[command(name = "frobex", version, about = "Frobenius extensions and Gorenstein projective modules, exactly")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// Seed for randomized searches
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Syzygy and period search bound
    #[arg(long, global = true, default_value_t = 12)]
    bound: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a document and check all of its invariants
    Validate { file: PathBuf },
    #[command(subcommand)]
    Ext(ExtCommand),
    #[command(subcommand, name = "mod")]
    Module(ModCommand),
    #[command(subcommand)]
    Graded(GradedCommand),
    #[command(subcommand)]
    Complex(ComplexCommand),
    /// Extract an acyclic projective subcomplex containing a submodule of degree 0
    Zigzag { complex: PathBuf, submodule: PathBuf },
    /// Re-check a certificate from its embedded inputs
    Verify { file: PathBuf },
}

#[derive(Subcommand)]
enum ExtCommand {
    /// Search for a Frobenius system of an extension
    CheckFrobenius { file: PathBuf },
    /// Search for a separability element
    Separability { file: PathBuf },
}

#[derive(Subcommand)]
enum ModCommand {
    /// Gorenstein projective test over the ambient algebra
    GpTest { file: PathBuf },
    /// Compare GP verdicts over the ambient and the subalgebra
    Transfer { extension: PathBuf, module: PathBuf },
}

#[derive(Subcommand)]
enum GradedCommand {
    /// Graded, ungraded and itemwise GP verdicts of a complex
    #[command(name = "thm31")]
    ThreeWay { file: PathBuf },
}

#[derive(Subcommand)]
enum ComplexCommand {
    /// GP test of a complex as a graded module over R[x]/(x^2)
    GpTest { file: PathBuf },
}

fn read(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    doc::parse_json(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn job(op: Operation, files: &[(&str, &Path)], common: &Common) -> Result<(Value, u8)> {
    let inputs = files.iter().map(|(name, p)| Ok((*name, read(p)?))).collect::<Result<Vec<_>>>()?;
    let out = doc::run_job(&JobSpec::new(op, inputs, common.bound, common.seed))?;
    let code = if out.is_undetermined() { 2 } else { 0 };
    Ok((out.document, code))
}

fn run(cli: &Cli) -> Result<(Value, u8)> {
    let c = &cli.common;
    match &cli.command {
        Command::Validate { file } => Ok((doc::validate(&Document::from_value(read(file)?)?)?, 0)),
        Command::Ext(ExtCommand::CheckFrobenius { file }) => job(Operation::CheckFrobenius, &[("extension", file)], c),
        Command::Ext(ExtCommand::Separability { file }) => job(Operation::Separability, &[("extension", file)], c),
        Command::Module(ModCommand::GpTest { file }) => job(Operation::GpTest, &[("module", file)], c),
        Command::Module(ModCommand::Transfer { extension, module }) => {
            job(Operation::Transfer, &[("extension", extension), ("module", module)], c)
        }
        Command::Graded(GradedCommand::ThreeWay { file }) => job(Operation::ThreeWay, &[("complex", file)], c),
        Command::Complex(ComplexCommand::GpTest { file }) => job(Operation::ComplexGpTest, &[("complex", file)], c),
        Command::Zigzag { complex, submodule } => {
            job(Operation::Zigzag, &[("complex", complex), ("submodule", submodule)], c)
        }
        Command::Verify { file } => {
            let rep = doc::verify(&read(file)?)?;
            let code = if rep.accepted { 0 } else { 1 };
            let out = json!({
                "schema": doc::SCHEMA_VERSION,
                "kind": "report",
                "operation": "verify",
                "accepted": rep.accepted,
                "reasons": rep.reasons,
            });
            Ok((out, code))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let Format::Json = cli.common.format;
    match run(&cli) {
        Ok((out, code)) => {
            print!("{}", doc::to_pretty(&out));
            ExitCode::from(code)
        }
        Err(e) => {
            eprint!("{}", doc::to_pretty(&json!({ "error": e.to_string() })));
            ExitCode::from(1)
        }
    }
}
