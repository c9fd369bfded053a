//! The `zpkit` command line: argument parsing, run configuration, output and exit codes.
//!
//! Exit codes: 0 on success, 1 on a domain error (bad input data, failed resource bound,
//! failed demo), 2 on a usage error.

mod abelian;
mod count;
pub mod demo;
mod modular;
mod torus;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rug::Float;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::numeric;

#[derive(Parser, Debug)]
#[command(name = "zpkit", version, about = "Defect calculus, modular polynomials, heights and bounded-height counts")]
pub struct Cli {
    /// Working precision of high-precision reals.
    #[arg(long, global = true, default_value_t = 128, value_parser = clap::value_parser!(u32).range(53..=4096))]
    pub precision_bits: u32,
    /// Seed for every randomized sweep.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write the primary output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Algebraic tori: defects, torsion points on curves, unlikely intersections.
    Torus {
        #[command(subcommand)]
        cmd: torus::TorusCmd,
    },
    /// The j-function, modular polynomials and special subvarieties of Y(1)^n.
    Modular {
        #[command(subcommand)]
        cmd: modular::ModularCmd,
    },
    /// Polarized complex tori and elliptic curves.
    Abelian {
        #[command(subcommand)]
        cmd: abelian::AbelianCmd,
    },
    /// Bounded-height point counts and growth fits.
    Count {
        #[command(subcommand)]
        cmd: count::CountCmd,
    },
    /// Bundled end-to-end scenarios with a pass/fail report.
    Demo {
        #[arg(value_enum)]
        name: demo::DemoName,
    },
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct OutputSpec {
    pub path: Option<String>,
    pub format: Format,
}

/// Everything that determines a run's output; embedded in every result.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct RunConfig {
    pub precision_bits: u32,
    pub seed: u64,
    pub tolerances: BTreeMap<String, f64>,
    pub bounds: BTreeMap<String, u64>,
    pub output: OutputSpec,
    pub version: String,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            precision_bits: numeric::DEFAULT_PRECISION,
            seed: 0,
            tolerances: BTreeMap::new(),
            bounds: BTreeMap::new(),
            output: OutputSpec { path: None, format: Format::Json },
            version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }
}

impl RunConfig {
    fn from_cli(cli: &Cli) -> Self {
        RunConfig {
            precision_bits: cli.precision_bits,
            seed: cli.seed,
            output: OutputSpec { path: cli.out.as_ref().map(|p| p.display().to_string()), format: cli.format },
            ..Default::default()
        }
    }

    pub fn tolerance(&mut self, name: &str, v: f64) -> Result<f64> {
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::InvalidInput(format!("tolerance {name} must be positive")));
        }
        self.tolerances.insert(name.into(), v);
        Ok(v)
    }

    pub fn bound(&mut self, name: &str, v: u64) -> Result<u64> {
        if v == 0 {
            return Err(Error::InvalidInput(format!("bound {name} must be positive")));
        }
        self.bounds.insert(name.into(), v);
        Ok(v)
    }

    /// Decimal digits printed for reals at this precision.
    pub fn digits(&self) -> usize {
        ((self.precision_bits as f64 * std::f64::consts::LOG10_2).floor() as usize).saturating_sub(2).max(6)
    }

    pub fn real(&self, x: &Float) -> Value {
        Value::String(numeric::fmt_real(x, self.digits()))
    }

    pub fn complex(&self, z: &numeric::Complex) -> Value {
        serde_json::json!([self.real(&z.re), self.real(&z.im)])
    }
}

/// A command's result before the envelope is added.
pub struct Outcome {
    pub json: Value,
    pub csv: Option<String>,
    /// Demos report failure through the exit code as well.
    pub failed: bool,
}

impl Outcome {
    fn json(json: Value) -> Self {
        Outcome { json, csv: None, failed: false }
    }
}

pub(crate) fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))?;
    serde_json::from_str(&text).map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))
}

fn execute(cli: &Cli, config: &mut RunConfig) -> Result<(String, Outcome)> {
    Ok(match &cli.command {
        Command::Torus { cmd } => (format!("torus {}", cmd.name()), torus::run(cmd, config)?),
        Command::Modular { cmd } => (format!("modular {}", cmd.name()), modular::run(cmd, config)?),
        Command::Abelian { cmd } => (format!("abelian {}", cmd.name()), abelian::run(cmd, config)?),
        Command::Count { cmd } => (format!("count {}", cmd.name()), count::run(cmd, config)?),
        Command::Demo { name } => (format!("demo {}", name.as_str()), demo::run(*name, config)?),
    })
}

/// Wraps a result object with the command name and configuration.
pub fn envelope(command: &str, config: &RunConfig, result: Value) -> Value {
    let mut obj = match result {
        Value::Object(m) => m,
        other => {
            let mut m = serde_json::Map::new();
            m.insert("result".into(), other);
            m
        }
    };
    obj.insert("command".into(), Value::String(command.into()));
    obj.insert("config".into(), serde_json::to_value(config).expect("plain data"));
    Value::Object(obj)
}

/// Runs the tool on `argv` (including the program name), writing primary output to
/// `stdout` unless `--out` is given and diagnostics to `stderr`. Returns the exit code.
pub fn run_with<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(stderr, "{text}");
                2
            } else {
                let _ = write!(stdout, "{text}");
                0
            };
        }
    };
    let mut config = RunConfig::from_cli(&cli);
    let (command, outcome) = match execute(&cli, &mut config) {
        Ok(x) => x,
        Err(e) => {
            let code = if matches!(e, Error::Usage(_)) { 2 } else { 1 };
            let _ = writeln!(stderr, "error: {e}");
            return code;
        }
    };
    let body = match cli.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&envelope(&command, &config, outcome.json)).expect("serializable");
            s.push('\n');
            s
        }
        Format::Csv => match outcome.csv {
            Some(c) => format!("# {}\n{c}", serde_json::to_string(&config).expect("serializable")),
            None => {
                let _ = writeln!(stderr, "error: `{command}` has no CSV output; use --format json");
                return 2;
            }
        },
    };
    let written = match &cli.out {
        Some(p) => std::fs::write(p, body).map_err(|e| e.to_string()),
        None => stdout.write_all(body.as_bytes()).map_err(|e| e.to_string()),
    };
    if let Err(e) = written {
        let _ = writeln!(stderr, "error: cannot write output: {e}");
        return 1;
    }
    i32::from(outcome.failed)
}

pub fn main_entry() -> i32 {
    let mut out = std::io::stdout().lock();
    let mut err = std::io::stderr().lock();
    run_with(std::env::args_os(), &mut out, &mut err)
}
