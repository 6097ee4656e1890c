//! Batch runner for the `reclab` experiments.
//!
//! Every subcommand builds a [`output::Report`] and prints it as an aligned
//! text table, CSV with a single header row, or one JSON object holding an
//! `args` echo and a `rows` array.

mod commands;
pub mod output;

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, CommandFactory, FromArgMatches, Parser, Subcommand};
use reclab_core::Error;
use serde_json::{Map, Value as Json};

use output::Format;

/// Default upper bound on sieve entries.
pub const DEFAULT_SIEVE_CAP: u64 = 100_000_000;

/// Environment variable overriding the default sieve cap.
pub const SIEVE_CAP_ENV: &str = "RECLAB_SIEVE_CAP";

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;
pub const EXIT_DEGENERATE: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "reclab",
    version,
    about = "Prime recurrence and uniformity-norm experiments"
)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "text")]
    format: Format,
    /// Write results to this file instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads for the parallel reductions.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    /// Largest sieve the run may allocate (defaults to RECLAB_SIEVE_CAP, then 10^8).
    #[arg(long = "sieve-cap", global = true)]
    sieve_cap: Option<u64>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parallelepiped degree of a polynomial system.
    PetDegree(commands::PetDegreeArgs),
    /// Local V_k, V_P and Gowers norms of a test sequence.
    Norms(commands::NormsArgs),
    /// Mass, domination and distance checks for the W-tricked majorant.
    MajorantAudit(commands::MajorantArgs),
    /// Smallest shifted prime in the return set of a finite set.
    Recurrence(commands::RecurrenceArgs),
    /// Weighted multiple averages on a cyclic system.
    Averages(commands::AveragesArgs),
    /// Prime and von Mangoldt averages along a sequence of lengths.
    Convergence(commands::ConvergenceArgs),
    /// Correlation of the Möbius function with a torus sequence.
    MobiusOrth(commands::MobiusArgs),
}

/// Settings shared by every subcommand.
pub(crate) struct Context {
    pub sieve_cap: u64,
}

/// Runs one invocation. `argv[0]` is the program name.
///
/// Results go to `out` (or the `--out` file); diagnostics go to `err`.
/// Returns the process exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let matches = match Cli::command().try_get_matches_from(argv) {
        Ok(m) => m,
        Err(e) => return clap_exit(e, out, err),
    };
    let cli = match Cli::from_arg_matches(&matches) {
        Ok(c) => c,
        Err(e) => return clap_exit(e, out, err),
    };
    let args = echo_args(&matches);
    let sieve_cap = match resolve_sieve_cap(cli.common.sieve_cap) {
        Ok(c) => c,
        Err(e) => return report_error(&e, err),
    };
    if cli.common.threads == 0 {
        return report_error(
            &Error::InvalidArgument("--threads must be at least 1".into()),
            err,
        );
    }
    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(cli.common.threads)
        .build()
    {
        Ok(p) => p,
        Err(e) => return report_error(&Error::Internal(e.to_string()), err),
    };
    let ctx = Context { sieve_cap };
    let report = match pool.install(|| dispatch(&cli.command, &ctx)) {
        Ok(r) => r,
        Err(e) => return report_error(&e, err),
    };
    let written = match &cli.common.out {
        Some(path) => File::create(path).and_then(|f| {
            let mut w = BufWriter::new(f);
            report.write(cli.common.format, &args, &mut w)?;
            w.flush()
        }),
        None => report
            .write(cli.common.format, &args, out)
            .and_then(|_| out.flush()),
    };
    match written {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: cannot write output: {e}");
            EXIT_FAILURE
        }
    }
}

fn dispatch(cmd: &Command, ctx: &Context) -> reclab_core::Result<output::Report> {
    match cmd {
        Command::PetDegree(a) => commands::pet_degree(a),
        Command::Norms(a) => commands::norms(a),
        Command::MajorantAudit(a) => commands::majorant_audit(a, ctx),
        Command::Recurrence(a) => commands::recurrence(a, ctx),
        Command::Averages(a) => commands::averages(a, ctx),
        Command::Convergence(a) => commands::convergence(a, ctx),
        Command::MobiusOrth(a) => commands::mobius_orth(a, ctx),
    }
}

fn resolve_sieve_cap(flag: Option<u64>) -> reclab_core::Result<u64> {
    if let Some(c) = flag {
        return Ok(c);
    }
    match std::env::var(SIEVE_CAP_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| {
            Error::InvalidArgument(format!(
                "{SIEVE_CAP_ENV}={v:?} is not a non-negative integer"
            ))
        }),
        Err(_) => Ok(DEFAULT_SIEVE_CAP),
    }
}

/// Exit code for a library error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::ResourceLimit(_) => EXIT_RESOURCE,
        Error::Degenerate(_) => EXIT_DEGENERATE,
        Error::Internal(_) => EXIT_FAILURE,
        _ => EXIT_INVALID,
    }
}

fn report_error(e: &Error, err: &mut dyn Write) -> i32 {
    let _ = writeln!(err, "error: {e}");
    exit_code(e)
}

fn clap_exit(e: clap::Error, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let text = e.render().to_string();
    if e.use_stderr() {
        let _ = write!(err, "{text}");
        EXIT_INVALID
    } else {
        let _ = write!(out, "{text}");
        EXIT_OK
    }
}

/// Subcommand name plus every argument value clap resolved, defaults included.
fn echo_args(matches: &clap::ArgMatches) -> Map<String, Json> {
    let mut map = Map::new();
    let Some((name, sub)) = matches.subcommand() else {
        return map;
    };
    map.insert("command".into(), Json::String(name.to_string()));
    let cli = Cli::command();
    let groups: Vec<String> = cli
        .get_groups()
        .chain(
            cli.find_subcommand(name)
                .into_iter()
                .flat_map(|c| c.get_groups()),
        )
        .map(|g| g.get_id().to_string())
        .collect();
    for id in sub.ids() {
        let id = id.as_str();
        if groups.iter().any(|g| g == id) {
            continue;
        }
        let Ok(Some(raw)) = sub.try_get_raw(id) else {
            continue;
        };
        let vals: Vec<Json> = raw
            .map(|v| Json::String(v.to_string_lossy().into_owned()))
            .collect();
        let v = if vals.len() == 1 {
            vals.into_iter().next().unwrap()
        } else {
            Json::Array(vals)
        };
        map.insert(id.to_string(), v);
    }
    map
}
