//! Command-line driver: one subcommand per experiment, strict config files,
//! CSV tables and JSON manifests.

// `!(x > 0)` style checks are deliberate: they reject NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod params;
pub mod verify;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Arg, ArgAction, ArgMatches, Command};
use serde_json::{json, Map, Value as Json};

use crate::error::{invalid, CliError, Result};
use crate::output::{ensure_dir, output_stem, to_pretty_json, with_ext, write_file, Table};
use crate::params::{Kind, ParamSpec, Resolved, Value, COMMON};

pub const VERSION: &str = env!("PERSISTQ_VERSION");

/// Result of one subcommand before anything touches the disk.
#[derive(Debug, Clone, Default)]
pub struct Outcome {
    pub table: Table,
    pub summary: Map<String, Json>,
    /// Deterministic report written next to the manifest (verify-all).
    pub report: Option<Json>,
    /// Set when the run completed but an invariant failed.
    pub failure: Option<String>,
}

impl Outcome {
    pub fn new(table: Table) -> Self {
        Self {
            table,
            ..Self::default()
        }
    }

    pub fn with(mut self, key: &str, value: impl Into<Json>) -> Self {
        self.summary.insert(key.to_string(), value.into());
        self
    }

    pub fn set(&mut self, key: &str, value: impl Into<Json>) {
        self.summary.insert(key.to_string(), value.into());
    }
}

pub struct CommandSpec {
    pub name: &'static str,
    pub about: &'static str,
    pub params: &'static [ParamSpec],
    pub run: fn(&Resolved) -> Result<Outcome>,
}

impl CommandSpec {
    pub fn all_params(&self) -> Vec<&'static ParamSpec> {
        COMMON.iter().chain(self.params.iter()).collect()
    }
}

pub fn commands() -> Vec<CommandSpec> {
    use commands::*;
    vec![
        stochastic::KAC_SIM,
        stochastic::MASTER,
        stochastic::TELEGRAPHER,
        stochastic::DIFFUSION_LIMIT,
        dirac::DIRAC1D,
        dirac::DIRAC3D,
        dirac::DISPERSION,
        gauge::GAUGE,
        maxwell::MAXWELL,
        maxwell::PHOTON_KAC,
        nelson::NELSON,
        nelson::GORDON,
        verify::VERIFY_ALL,
    ]
}

fn flag_name(param: &str) -> String {
    param.replace('_', "-")
}

fn build_cli(specs: &[CommandSpec]) -> Command {
    let mut cli = Command::new("persistq")
        .version(VERSION)
        .about("Persistent Kac processes, relativistic wave equations and Nelson analysis")
        .subcommand_required(true)
        .arg_required_else_help(true);
    for spec in specs {
        let mut sub = Command::new(spec.name).about(spec.about).arg(
            Arg::new("config")
                .long("config")
                .value_name("FILE")
                .help("key = value file with optional [section] headers"),
        );
        for p in spec.all_params() {
            let arg = Arg::new(p.name).long(flag_name(p.name)).help(p.help);
            let arg = match p.kind {
                Kind::Bool => arg.action(ArgAction::SetTrue),
                _ => arg
                    .value_name("VALUE")
                    .allow_hyphen_values(true)
                    .help(format!("{} [default: {}]", p.help, p.default)),
            };
            sub = sub.arg(arg);
        }
        cli = cli.subcommand(sub);
    }
    cli
}

fn flag_values(spec: &CommandSpec, m: &ArgMatches) -> Result<BTreeMap<&'static str, Value>> {
    let mut out = BTreeMap::new();
    for p in spec.all_params() {
        match p.kind {
            Kind::Bool => {
                if m.get_flag(p.name) {
                    out.insert(p.name, Value::Bool(true));
                }
            }
            _ => {
                if let Some(raw) = m.get_one::<String>(p.name) {
                    let v = Value::parse(p, raw)
                        .map_err(|e| invalid(format!("--{}: {e}", flag_name(p.name))))?;
                    out.insert(p.name, v);
                }
            }
        }
    }
    Ok(out)
}

fn thread_pool() -> Result<rayon::ThreadPool> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Ok(raw) = std::env::var("PERSISTQ_THREADS") {
        let n: usize = raw.trim().parse().ok().filter(|n| *n >= 1).ok_or_else(|| {
            invalid(format!(
                "PERSISTQ_THREADS must be a positive integer, got `{raw}`"
            ))
        })?;
        b = b.num_threads(n);
    }
    b.build()
        .map_err(|e| invalid(format!("cannot start worker pool: {e}")))
}

fn unique_stem(outdir: &Path, name: &str) -> PathBuf {
    let stamp = chrono::Utc::now().format("%Y%m%dT%H%M%S%.3fZ").to_string();
    let mut stem = output_stem(outdir, name, &stamp);
    let mut k = 1;
    while with_ext(&stem, "json").exists() || with_ext(&stem, "csv").exists() {
        stem = output_stem(outdir, name, &format!("{stamp}-{k}"));
        k += 1;
    }
    stem
}

/// Files written by a successful run.
#[derive(Debug, Clone, Default)]
pub struct Written {
    pub csv: Option<PathBuf>,
    pub manifest: Option<PathBuf>,
    pub report: Option<PathBuf>,
}

fn emit(
    spec: &CommandSpec,
    resolved: &Resolved,
    outcome: &Outcome,
    wall: f64,
    threads: usize,
) -> Result<Written> {
    let outdir = PathBuf::from(resolved.text("outdir"));
    ensure_dir(&outdir)?;
    let stem = unique_stem(&outdir, spec.name);
    let format = resolved.text("format");
    let mut written = Written::default();
    let file_name = |p: &Path| p.file_name().map(|s| s.to_string_lossy().into_owned());
    if format != "json" {
        let p = with_ext(&stem, "csv");
        write_file(&p, &outcome.table.to_csv())?;
        written.csv = Some(p);
    }
    if let Some(report) = &outcome.report {
        let p = with_ext(&stem, "report.json");
        write_file(&p, &to_pretty_json(report))?;
        written.report = Some(p);
    }
    if format != "csv" {
        let p = with_ext(&stem, "json");
        let manifest = json!({
            "subcommand": spec.name,
            "version": VERSION,
            "seed": resolved.seed(),
            "timestamp": chrono::Utc::now().to_rfc3339(),
            "wall_time_s": wall,
            "threads": threads,
            "config": resolved.to_json(),
            "results": Json::Object(outcome.summary.clone()),
            "status": if outcome.failure.is_some() { "failed" } else { "ok" },
            "files": {
                "csv": written.csv.as_deref().and_then(file_name),
                "report": written.report.as_deref().and_then(file_name),
            },
        });
        write_file(&p, &to_pretty_json(&manifest))?;
        written.manifest = Some(p);
    }
    Ok(written)
}

/// Parses `argv`, runs the subcommand and writes its outputs.
pub fn execute<I, S>(argv: I) -> Result<(Outcome, Written)>
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let specs = commands();
    let matches = match build_cli(&specs).try_get_matches_from(argv) {
        Ok(m) => m,
        Err(e) => {
            use clap::error::ErrorKind::*;
            if matches!(
                e.kind(),
                DisplayHelp | DisplayVersion | DisplayHelpOnMissingArgumentOrSubcommand
            ) {
                let _ = e.print();
                return Ok((Outcome::default(), Written::default()));
            }
            return Err(CliError::Validation(
                e.render().to_string().trim_end().to_string(),
            ));
        }
    };
    let (name, sub) = matches.subcommand().expect("subcommand is required");
    let spec = specs
        .iter()
        .find(|s| s.name == name)
        .expect("registered subcommand");
    let schemas: Vec<(&str, Vec<&'static ParamSpec>)> =
        specs.iter().map(|s| (s.name, s.all_params())).collect();
    let config_path = sub.get_one::<String>("config").cloned();
    let file = match &config_path {
        Some(p) => config::load_config(Path::new(p), name, &schemas)?,
        None => BTreeMap::new(),
    };
    let flags = flag_values(spec, sub)?;
    let resolved = Resolved::new(&spec.all_params(), file, flags, config_path);
    let pool = thread_pool()?;
    let threads = pool.current_num_threads();
    let start = Instant::now();
    let outcome = pool.install(|| (spec.run)(&resolved))?;
    let wall = start.elapsed().as_secs_f64();
    let written = emit(spec, &resolved, &outcome, wall, threads)?;
    Ok((outcome, written))
}

/// Entry point used by the binary; returns the process exit code.
pub fn run<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    match execute(argv) {
        Ok((outcome, written)) => {
            for p in [&written.csv, &written.report, &written.manifest]
                .into_iter()
                .flatten()
            {
                println!("{}", p.display());
            }
            match outcome.failure {
                Some(msg) => {
                    eprintln!("error: {msg}");
                    1
                }
                None => 0,
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
