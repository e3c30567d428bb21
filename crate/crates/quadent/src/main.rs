use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use quadent::report::catalog_dump;
use quadent::run::{run_all, RunReport};
use quadent::scenario::{self, Kind, Resolved};
use quadent::suite::run_suite;
use quadent::{text, CliError, Settings, DEFAULT_SEED};
use quadent_core::catalog::{make_state, RESOURCE_NAMES};
use quadent_core::densecode::SenderChoice;
use quadent_core::locc;
use quadent_core::teleport::{builtin_ids, builtin_scenario};

#[derive(Parser)]
#[command(name = "quadent", version, about = "Teleportation, dense coding and LOCC checks on four-qubit resources")]
struct Cli {
    /// Seed for random probe states.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Fidelity tolerance for feasibility.
    #[arg(long, global = true, default_value_t = 1e-10)]
    tolerance: f64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Both)]
    format: Format,
    /// Write reports into this directory instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
    Both,
}

#[derive(Subcommand)]
enum Command {
    /// List catalog states and bases.
    Catalog {
        /// Print every state and basis as JSON.
        #[arg(long)]
        dump: bool,
    },
    /// Run teleportation scenarios (all built-ins by default).
    Teleport {
        #[arg(long)]
        scenario: Vec<String>,
        /// Run the teleport entries of a scenario file.
        #[arg(long)]
        file: Option<PathBuf>,
    },
    /// Dense-coding capacity (DC1 to DC3 of every resource by default).
    Densecode {
        #[arg(long)]
        state: Option<String>,
        /// Comma-separated sender qubits, 0-based.
        #[arg(long, value_delimiter = ',', conflicts_with = "best")]
        senders: Option<Vec<usize>>,
        /// Try every sender subset of this size.
        #[arg(long)]
        best: Option<usize>,
        /// Use σ2 instead of iσ2 among the encodings.
        #[arg(long)]
        plain_sigma2: bool,
        #[arg(long)]
        file: Option<PathBuf>,
    },
    /// LOCC discrimination (all built-in runs by default).
    Locc {
        #[arg(long, requires = "protocol")]
        set: Option<String>,
        #[arg(long, requires = "set")]
        protocol: Option<String>,
        #[arg(long)]
        file: Option<PathBuf>,
    },
    /// Entanglement profiles (the five resources by default).
    Diagnose {
        #[arg(long)]
        state: Vec<String>,
        #[arg(long)]
        file: Option<PathBuf>,
    },
    /// Check every built-in claim and tabulate PASS/FAIL.
    PaperSuite,
}

fn json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("reports serialize") + "\n"
}

fn write(path: &Path, body: &str) -> Result<(), CliError> {
    std::fs::write(path, body).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

fn emit(cli: &Cli, name: &str, json_body: &str, text_body: &str) -> Result<(), CliError> {
    let (want_json, want_text) = match cli.format {
        Format::Json => (true, false),
        Format::Text => (false, true),
        Format::Both => (true, true),
    };
    match &cli.out {
        Some(dir) => {
            std::fs::create_dir_all(dir).map_err(|source| CliError::Io { path: dir.display().to_string(), source })?;
            if want_json {
                write(&dir.join(format!("{name}.json")), json_body)?;
            }
            if want_text {
                write(&dir.join(format!("{name}.txt")), text_body)?;
                print!("{text_body}");
            }
        }
        None => {
            if want_text {
                print!("{text_body}");
            }
            if want_json {
                print!("{json_body}");
            }
        }
    }
    Ok(())
}

fn from_file(path: &Path, kind: Kind) -> Result<Vec<Resolved>, CliError> {
    let body = std::fs::read_to_string(path).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    let file = scenario::parse(&body)?;
    let picked: Vec<Resolved> =
        file.entries.iter().filter(|e| e.kind() == kind).map(scenario::resolve).collect::<Result<_, _>>()?;
    if picked.is_empty() {
        return Err(CliError::Parse(format!("{} has no {} entries", path.display(), kind.as_str())));
    }
    Ok(picked)
}

fn teleports(ids: &[String]) -> Result<Vec<Resolved>, CliError> {
    let ids = if ids.is_empty() { builtin_ids() } else { ids.to_vec() };
    ids.iter().map(|id| Ok(Resolved::Teleport { scenario: Box::new(builtin_scenario(id)?) })).collect()
}

fn densecodes(
    state: Option<&str>,
    senders: Option<&[usize]>,
    best: Option<usize>,
    plain_sigma2: bool,
) -> Result<Vec<Resolved>, CliError> {
    let mk = |name: &str, choice: SenderChoice| -> Result<Resolved, CliError> {
        Ok(Resolved::Densecode { state: make_state(name, &[])?, choice, plain_sigma2, expect_n: None })
    };
    match (state, senders, best) {
        (Some(s), Some(q), _) => Ok(vec![mk(s, SenderChoice::Fixed(q.to_vec()))?]),
        (Some(s), None, b) => Ok(vec![mk(s, SenderChoice::Best(b.unwrap_or(1)))?]),
        (None, None, None) => {
            RESOURCE_NAMES.iter().flat_map(|n| (1..4).map(move |k| mk(n, SenderChoice::Best(k)))).collect()
        }
        _ => Err(CliError::Parse("--senders and --best need --state".into())),
    }
}

fn loccs(set: Option<&str>, protocol: Option<&str>) -> Result<Vec<Resolved>, CliError> {
    let mk = |set: &str, p: &str, expect: Option<bool>| -> Result<Resolved, CliError> {
        Ok(Resolved::Locc {
            set: set.into(),
            candidates: locc::candidate_set(set)?,
            protocol: locc::protocol(p)?,
            expect_success: expect,
        })
    };
    match (set, protocol) {
        (Some(s), Some(p)) => Ok(vec![mk(s, p, None)?]),
        _ => locc::builtin_scenarios().iter().map(|s| mk(s.set, s.protocol, Some(s.expect_success))).collect(),
    }
}

fn diagnoses(states: &[String]) -> Result<Vec<Resolved>, CliError> {
    let names: Vec<String> =
        if states.is_empty() { RESOURCE_NAMES.iter().map(|s| s.to_string()).collect() } else { states.to_vec() };
    names.iter().map(|n| Ok(Resolved::Diagnose { state: make_state(n, &[])?, expect_genuine: None })).collect()
}

fn report(cli: &Cli, name: &str, r: &RunReport) -> Result<u8, CliError> {
    emit(cli, name, &json(r), &text::run(r))?;
    Ok(if r.all_ok() { 0 } else { 1 })
}

fn dispatch(cli: &Cli) -> Result<u8, CliError> {
    let settings = Settings { seed: cli.seed, tolerance: cli.tolerance };
    if !(cli.tolerance.is_finite() && cli.tolerance >= 0.0) {
        return Err(CliError::Parse(format!("tolerance must be a non-negative number, got {}", cli.tolerance)));
    }
    match &cli.command {
        Command::Catalog { dump } => {
            let d = catalog_dump()?;
            if *dump {
                let body = json(&d);
                match &cli.out {
                    Some(dir) => {
                        std::fs::create_dir_all(dir)
                            .map_err(|source| CliError::Io { path: dir.display().to_string(), source })?;
                        write(&dir.join("catalog.json"), &body)?;
                    }
                    None => print!("{body}"),
                }
            } else {
                emit(cli, "catalog", &json(&d), &text::catalog(&d))?;
            }
            Ok(0)
        }
        Command::Teleport { scenario, file } => {
            let entries = match file {
                Some(f) => from_file(f, Kind::Teleport)?,
                None => teleports(scenario)?,
            };
            report(cli, "teleport", &run_all(&entries, settings)?)
        }
        Command::Densecode { state, senders, best, plain_sigma2, file } => {
            let entries = match file {
                Some(f) => from_file(f, Kind::Densecode)?,
                None => densecodes(state.as_deref(), senders.as_deref(), *best, *plain_sigma2)?,
            };
            report(cli, "densecode", &run_all(&entries, settings)?)
        }
        Command::Locc { set, protocol, file } => {
            let entries = match file {
                Some(f) => from_file(f, Kind::Locc)?,
                None => loccs(set.as_deref(), protocol.as_deref())?,
            };
            report(cli, "locc", &run_all(&entries, settings)?)
        }
        Command::Diagnose { state, file } => {
            let entries = match file {
                Some(f) => from_file(f, Kind::Diagnose)?,
                None => diagnoses(state)?,
            };
            report(cli, "diagnose", &run_all(&entries, settings)?)
        }
        Command::PaperSuite => {
            let r = run_suite(settings)?;
            emit(cli, "paper-suite", &json(&r), &text::suite(&r))?;
            Ok(if r.all_pass() { 0 } else { 1 })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
