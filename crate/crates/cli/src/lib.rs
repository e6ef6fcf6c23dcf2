//! `gdefect`: algebra description files in, JSON verdict reports out.

pub mod commands;
pub mod format;
pub mod load;
pub mod report;
pub mod roles;
pub mod selftest;
pub mod verify;

use std::path::{Path, PathBuf};

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use thiserror::Error;

use commands::{ModuleChoice, OracleOptions};
use format::ParseError;
use load::{load, Loaded, Overrides};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Io(String),
    #[error("parse error: {0}")]
    Parse(#[from] ParseError),
    #[error("{0}")]
    Validation(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Internal(_) => 2,
            _ => 1,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "gdefect", version, about = "Gorenstein homological algebra of finite-dimensional quiver algebras")]
pub struct Cli {
    /// Characteristic of the ground field (overrides the file).
    #[arg(long, global = true)]
    pub prime: Option<u32>,
    /// Syzygy search bound (overrides the file).
    #[arg(long, global = true)]
    pub bound: Option<usize>,
    /// Seed for randomized searches (overrides the file).
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Structure, dimensions and Gorenstein checks of an algebra.
    Info { file: PathBuf },
    /// Gorenstein projectivity and dimensions of one module.
    #[command(group(ArgGroup::new("which").required(true).args(["module", "simple", "projective"])))]
    Gproj {
        file: PathBuf,
        /// A module named in the file.
        #[arg(long)]
        module: Option<String>,
        /// The simple module at a vertex.
        #[arg(long)]
        simple: Option<String>,
        /// The indecomposable projective at a vertex.
        #[arg(long)]
        projective: Option<String>,
        /// Work over the corner algebra at these vertices (labels or an
        /// idempotent name); named modules are restricted to it.
        #[arg(long)]
        corner: Option<String>,
    },
    /// Conditions for the Schur functor at an idempotent.
    Schur {
        file: PathBuf,
        /// Vertex labels `v1,v2,...` or an idempotent name from the file.
        #[arg(long)]
        idempotent: String,
    },
    /// Triangular matrix algebras.
    Trimat {
        #[command(subcommand)]
        action: TrimatAction,
    },
    /// Invariant suites on the shipped algebras.
    Selftest {
        #[arg(long, hide = true, value_enum)]
        inject_fault: Option<FaultArg>,
    },
    /// Re-check every certificate of a report against its input.
    Verify {
        file: PathBuf,
        #[arg(long)]
        report: PathBuf,
    },
}

#[derive(Debug, Args)]
pub struct SplitArgs {
    /// The algebra to split.
    #[arg(long = "from")]
    pub from: PathBuf,
    /// Vertices of the first corner (labels or an idempotent name); the
    /// second corner is the complement.
    #[arg(long)]
    pub split: String,
}

#[derive(Debug, Subcommand)]
pub enum TrimatAction {
    /// Decompose the algebra and report the pieces.
    Build {
        #[command(flatten)]
        split: SplitArgs,
    },
    /// Compatibility, the two Schur functor checks and the oracle suites.
    Check {
        #[command(flatten)]
        split: SplitArgs,
        /// Random triples for the Gorenstein projectivity criterion.
        #[arg(long, default_value_t = 50)]
        triples: usize,
        /// Maximal component dimension of random modules.
        #[arg(long, default_value_t = 4)]
        max_dim: usize,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum FaultArg {
    ConeSign,
}

/// A rendered report and the process exit code it calls for.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub json: String,
    pub exit_code: i32,
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn file_name(path: &Path) -> String {
    path.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
}

fn overrides(cli: &Cli) -> Overrides {
    Overrides {
        prime: cli.prime,
        bound: cli.bound,
        seed: cli.seed,
    }
}

fn load_file(path: &Path, o: Overrides) -> Result<(Loaded, String), CliError> {
    let text = read(path)?;
    Ok((load(&text, o)?, file_name(path)))
}

pub fn run(cli: &Cli) -> Result<Output, CliError> {
    let o = overrides(cli);
    let ok = |v: Value| Output {
        json: report::render(&v),
        exit_code: 0,
    };
    match &cli.command {
        Command::Info { file } => {
            let (l, name) = load_file(file, o)?;
            let r = commands::info(&l)?;
            Ok(ok(report::envelope(&l, &name, json!({"name": "info"}), r)))
        }
        Command::Gproj {
            file,
            module,
            simple,
            projective,
            corner,
        } => {
            let (l, name) = load_file(file, o)?;
            let choice = match (module, simple, projective) {
                (Some(m), _, _) => ModuleChoice::Named(m.clone()),
                (_, Some(v), _) => ModuleChoice::Simple(v.clone()),
                (_, _, Some(v)) => ModuleChoice::Projective(v.clone()),
                _ => return Err(CliError::Usage("choose --module, --simple or --projective".into())),
            };
            let r = commands::gproj(&l, &choice, corner.as_deref())?;
            let command = json!({"name": "gproj", "corner": corner});
            Ok(ok(report::envelope(&l, &name, command, r)))
        }
        Command::Schur { file, idempotent } => {
            let (l, name) = load_file(file, o)?;
            let r = commands::schur(&l, idempotent)?;
            Ok(ok(report::envelope(&l, &name, json!({"name": "schur", "idempotent": idempotent}), r)))
        }
        Command::Trimat { action } => match action {
            TrimatAction::Build { split } => {
                let (l, name) = load_file(&split.from, o)?;
                let r = commands::trimat_build(&l, &split.split)?;
                let command = json!({"name": "trimat build", "split": split.split});
                Ok(ok(report::envelope(&l, &name, command, r)))
            }
            TrimatAction::Check {
                split,
                triples,
                max_dim,
            } => {
                if *max_dim == 0 {
                    return Err(CliError::Usage("--max-dim must be positive".into()));
                }
                let (l, name) = load_file(&split.from, o)?;
                let oracle = OracleOptions {
                    triples: *triples,
                    max_dim: *max_dim,
                };
                let r = commands::trimat_check(&l, &split.split, oracle)?;
                let command = json!({"name": "trimat check", "split": split.split, "triples": triples, "max_dim": max_dim});
                Ok(ok(report::envelope(&l, &name, command, r)))
            }
        },
        Command::Selftest { inject_fault } => {
            let fault = match inject_fault {
                Some(FaultArg::ConeSign) => selftest::Fault::ConeSign,
                None => selftest::Fault::None,
            };
            let r = selftest::run(cli.prime, cli.seed.unwrap_or(0), fault);
            let exit_code = if r["verdict"] == "holds" { 0 } else { 2 };
            let v = json!({
                "schema_version": report::SCHEMA_VERSION,
                "tool": {"name": "gdefect", "version": env!("CARGO_PKG_VERSION")},
                "command": {"name": "selftest"},
                "results": r,
            });
            Ok(Output {
                json: report::render(&v),
                exit_code,
            })
        }
        Command::Verify { file, report: path } => {
            let rep: Value = serde_json::from_str(&read(path)?)
                .map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
            // load with the report's field and bounds unless overridden
            let from_report = Overrides {
                prime: o.prime.or(rep["field_p"].as_u64().map(|p| p as u32)),
                bound: o.bound.or(rep["bounds"]["bound"].as_u64().map(|b| b as usize)),
                seed: o.seed.or(rep["seed"].as_u64()),
            };
            let (l, name) = load_file(file, from_report)?;
            let r = verify::verify(&l, &rep);
            let exit_code = if r["verdict"] == "holds" { 0 } else { 1 };
            let v = report::envelope(&l, &name, json!({"name": "verify", "report": file_name(path)}), r);
            Ok(Output {
                json: report::render(&v),
                exit_code,
            })
        }
    }
}

/// Parses arguments and runs; for in-process use.
pub fn run_args<I, T>(args: I) -> Result<Output, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| CliError::Usage(e.to_string()))?;
    run(&cli)
}
