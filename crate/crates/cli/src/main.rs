//! `isubdiv`: construct, inspect, search, verify and run pipelines.
//!
//! Exit codes: 0 success, 1 negative answer, 2 malformed input, 3 I/O
//! failure, 4 budget exhausted. Every run echoes its resolved configuration
//! as one JSON line on stderr.

mod commands;
mod io;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use isubdiv_core::format::Format;
use isubdiv_core::pipeline::Profile;
use serde::Serialize;
use serde_json::{json, Value};

use crate::io::Failure;

#[derive(Parser, Debug)]
#[command(
    name = "isubdiv",
    version,
    about = "Induced subdivisions of complete graphs in high-girth graphs"
)]
struct Cli {
    #[command(flatten)]
    flags: Flags,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Serialize)]
struct Flags {
    /// Graph format for input and output: graph6, edge-list or json.
    /// Input defaults to the file extension, then to the content.
    #[arg(long, global = true, value_parser = parse_format)]
    #[serde(serialize_with = "serialize_format")]
    format: Option<Format>,
    /// Profile name (`paper`, `desk`) or a JSON object of overrides.
    #[arg(long, global = true)]
    profile: Option<String>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Search budget; defaults to the profile's finder budget.
    #[arg(long, global = true)]
    budget: Option<u64>,
    #[arg(long, global = true)]
    retries: Option<u32>,
    /// Require proper subdivisions.
    #[arg(long, global = true)]
    proper: bool,
    /// Turn failed girth preconditions into warnings.
    #[arg(long, global = true)]
    relax_girth: bool,
    /// Record stage durations in pipeline traces. Traces are then no
    /// longer byte-reproducible.
    #[arg(long, global = true)]
    timings: bool,
}

fn parse_format(s: &str) -> Result<Format, String> {
    s.parse()
}

fn serialize_format<S: serde::Serializer>(
    format: &Option<Format>,
    s: S,
) -> Result<S::Ok, S::Error> {
    format.serialize(s)
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check a subdivision certificate against a host graph.
    Verify {
        certificate: PathBuf,
        graph: PathBuf,
    },
    /// Search for an induced subdivision of K_s.
    Find {
        graph: PathBuf,
        #[arg(short, long)]
        s: usize,
        /// Certificate destination; stdout when absent.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Build a projective plane, its incidence graph, or a regular graph.
    Construct {
        #[command(subcommand)]
        what: Construct,
    },
    /// Report graph invariants as JSON.
    Invariants {
        graph: PathBuf,
        /// Restrict the report; all when absent.
        #[arg(long, value_enum, value_delimiter = ',')]
        only: Vec<Invariant>,
    },
    /// Run a pipeline descriptor.
    Pipeline {
        descriptor: PathBuf,
        /// Run result with its trace; stdout when absent.
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Written only when the certificate re-verifies.
        #[arg(long)]
        certificate: Option<PathBuf>,
    },
    /// Compare the K_3 finder with the chordless-cycle oracle.
    OracleDiff {
        /// graph6 lines; random connected graphs when absent.
        #[arg(long)]
        corpus: Option<PathBuf>,
        #[arg(long, default_value_t = 1000)]
        count: usize,
        #[arg(long, default_value_t = 9)]
        max_n: usize,
    },
}

#[derive(Subcommand, Debug)]
enum Construct {
    /// PG(2, q) as a JSON incidence list.
    Plane {
        #[arg(short, long)]
        q: usize,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Point-line incidence graph of PG(2, q).
    Incidence {
        #[arg(short, long)]
        q: usize,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// A d-regular graph on n vertices of girth at least `girth`.
    Regular {
        #[arg(short, long)]
        d: usize,
        #[arg(short, long)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        girth: usize,
        /// Edge swaps allowed while raising the girth.
        #[arg(long, default_value_t = 1_000_000)]
        swaps: u64,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Invariant {
    Girth,
    Degeneracy,
    Connectivity,
    Moore,
}

/// Flags after defaults and profile resolution.
#[derive(Debug, Clone, Serialize)]
struct Resolved {
    #[serde(flatten)]
    flags: Flags,
    seed: u64,
    profile: Profile,
    /// The profile as given, with `--relax-girth` folded in.
    #[serde(skip)]
    profile_spec: Value,
}

impl Resolved {
    fn budget(&self) -> u64 {
        self.flags.budget.unwrap_or(self.profile.finder_budget)
    }
}

fn resolve(flags: &Flags) -> Result<Resolved, Failure> {
    let mut spec = match flags.profile.as_deref() {
        None => Value::String("desk".into()),
        Some(text) if text.trim_start().starts_with('{') => serde_json::from_str(text)
            .map_err(|e| Failure::malformed(anyhow::anyhow!("--profile: {e}")))?,
        Some(name) => Value::String(name.into()),
    };
    if flags.relax_girth {
        spec = relax_girth(spec);
    }
    let profile = Profile::resolve(&spec).map_err(Failure::malformed)?;
    Ok(Resolved {
        flags: flags.clone(),
        seed: flags.seed.unwrap_or(0),
        profile,
        profile_spec: spec,
    })
}

/// Folds `relax_girth: true` into a profile name or override object.
pub(crate) fn relax_girth(spec: Value) -> Value {
    match spec {
        Value::Object(mut map) => {
            map.insert("relax_girth".into(), Value::Bool(true));
            Value::Object(map)
        }
        base => json!({"base": base, "relax_girth": true}),
    }
}

fn echo_config(command: &Command, config: &Resolved) {
    let line = json!({"command": format!("{command:?}"), "config": config});
    eprintln!("config: {line}");
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = resolve(&cli.flags).and_then(|config| {
        echo_config(&cli.command, &config);
        commands::run(&cli.command, &config)
    });
    let exit = match outcome {
        Ok(exit) => exit,
        Err(failure) => {
            eprintln!("error: {failure}");
            failure.exit
        }
    };
    ExitCode::from(exit as u8)
}
