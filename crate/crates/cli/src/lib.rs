//! `tropkp` command-line surface: config ingestion, subcommand dispatch and
//! JSON/CSV emission.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde_json::Value;
use thiserror::Error;
use tropkp_core::scalar::parse_rational;
use tropkp_core::{KappaConfig, VertexChoice};

pub mod commands;
pub mod config;

pub use config::{DivisorSpec, Parametrization, RunConfig, Validated};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_CERTIFICATION: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("config: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] tropkp_core::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

#[derive(Debug, Parser)]
#[command(name = "tropkp", version, about = "Banana-graph Voronoi combinatorics and KP soliton certification")]
struct Cli {
    /// Emit JSON instead of the indented text rendering.
    #[arg(long, global = true)]
    json: bool,
    /// Write output to this file instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Voronoi vertices by class and the f-vector.
    Voronoi {
        #[arg(long)]
        genus: usize,
    },
    /// Delaunay sets, hypersimplex labels and shift vectors.
    Delaunay {
        #[arg(long)]
        genus: usize,
        #[arg(long, conflicts_with = "vertex")]
        class: Option<usize>,
        /// Comma-separated rational coordinates of one vertex.
        #[arg(long, allow_hyphen_values = true)]
        vertex: Option<String>,
    },
    /// Vertex-orientation table and circuits between vertices of one class.
    Orient {
        #[arg(long)]
        genus: usize,
    },
    /// Matroid bases of each vertex, read at graph vertex v1 or v2.
    Matroid {
        #[arg(long)]
        genus: usize,
        #[arg(long, default_value = "v1")]
        at: VertexChoice,
        #[arg(long)]
        class: Option<usize>,
    },
    /// Limit Riemann matrix, period vectors and Abel map.
    Limits {
        #[arg(long, conflicts_with = "kappas")]
        config: Option<PathBuf>,
        /// Comma-separated rational kappas.
        #[arg(long, allow_hyphen_values = true)]
        kappas: Option<String>,
    },
    /// Coefficients, Grassmannian matrices, Pluecker vectors and conversions.
    Param {
        #[arg(long)]
        config: PathBuf,
    },
    /// Exact Hirota residuals, numeric KP residual and inversion checks.
    Certify {
        #[arg(long)]
        config: PathBuf,
        /// Replace a coefficient before certifying, as LABEL=VALUE with a 0/1 label.
        #[arg(long = "set-alpha", value_name = "LABEL=VALUE")]
        set_alpha: Vec<String>,
    },
    /// Quartic relations of the Hirota variety of the hypersimplex.
    Eqs {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: usize,
    },
    /// CSV grid of u over a box.
    Field {
        #[arg(long)]
        config: PathBuf,
        /// "min,max,count"
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, allow_hyphen_values = true, default_value = "0,0,1")]
        y: String,
        #[arg(long, allow_hyphen_values = true, default_value = "0,0,1")]
        t: String,
    },
}

/// Indented text rendering of a JSON value.
fn render_text(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                if x.is_object() || x.as_array().is_some_and(|a| a.iter().any(|e| e.is_object())) {
                    out.push_str(&format!("{pad}{k}:\n"));
                    render_text(x, indent + 1, out);
                } else {
                    out.push_str(&format!("{pad}{k}: {}\n", inline(x)));
                }
            }
        }
        Value::Array(items) => {
            for x in items {
                if x.is_object() {
                    out.push_str(&format!("{pad}-\n"));
                    render_text(x, indent + 1, out);
                } else {
                    out.push_str(&format!("{pad}- {}\n", inline(x)));
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", inline(other))),
    }
}

fn inline(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(items) => format!("[{}]", items.iter().map(inline).collect::<Vec<_>>().join(", ")),
        other => other.to_string(),
    }
}

fn format_report(v: &Value, json: bool) -> Result<String, CliError> {
    if json {
        Ok(serde_json::to_string_pretty(v)? + "\n")
    } else {
        let mut s = String::new();
        render_text(v, 0, &mut s);
        Ok(s)
    }
}

fn load(path: &Path) -> Result<(RunConfig, Validated), CliError> {
    let cfg = RunConfig::load(path)?;
    let v = cfg.validate()?;
    Ok((cfg, v))
}

fn execute(cli: &Cli) -> Result<(String, i32), CliError> {
    let report = |v: Value| -> Result<(String, i32), CliError> { Ok((format_report(&v, cli.json)?, EXIT_OK)) };
    match &cli.command {
        Command::Voronoi { genus } => report(commands::voronoi(*genus)?),
        Command::Delaunay { genus, class, vertex } => report(commands::delaunay(*genus, *class, vertex.as_deref())?),
        Command::Orient { genus } => report(commands::orient(*genus)?),
        Command::Matroid { genus, at, class } => report(commands::matroid(*genus, *at, *class)?),
        Command::Limits { config, kappas } => match (config, kappas) {
            (Some(path), None) => {
                let (_, v) = load(path)?;
                report(commands::limits(&v.kc, Some(&v))?)
            }
            (None, Some(text)) => {
                let ks = text.split(',').map(parse_rational).collect::<Result<Vec<_>, _>>()?;
                report(commands::limits(&KappaConfig::new(ks)?, None)?)
            }
            _ => Err(CliError::Usage("limits needs exactly one of --config or --kappas".into())),
        },
        Command::Param { config } => {
            let (cfg, v) = load(config)?;
            report(commands::param(&cfg, &v)?)
        }
        Command::Certify { config, set_alpha } => {
            let (cfg, v) = load(config)?;
            let c = commands::certify(&cfg, &v, set_alpha)?;
            let code = if c.certified { EXIT_OK } else { EXIT_CERTIFICATION };
            Ok((format_report(&c.report, cli.json)?, code))
        }
        Command::Eqs { k, n } => report(commands::eqs(*k, *n)?),
        Command::Field { config, x, y, t } => {
            let (_, v) = load(config)?;
            let grid = [x, y, t].map(|r| commands::parse_range(r));
            let [xs, ys, ts] = grid;
            Ok((commands::field(&v, &xs?, &ys?, &ts?)?, EXIT_OK))
        }
    }
}

/// Runs the CLI on `argv` (including the program name) and returns the exit code:
/// 0 on success, 1 on usage or config errors, 2 on certification failure.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let (text, code) = match execute(&cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    let written = match &cli.out {
        Some(path) => std::fs::write(path, text.as_bytes()),
        None => std::io::stdout().lock().write_all(text.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: io: {e}");
        return EXIT_USAGE;
    }
    if code == EXIT_CERTIFICATION {
        eprintln!("certification failed");
    }
    code
}
