//! Batch front end: argument and config handling, the worker pool and
//! output encoding.

pub mod args;
pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod tables;

use std::collections::BTreeMap;
use std::io::Write;

use clap::{ArgMatches, CommandFactory, FromArgMatches};

use args::{Cli, Command, Format, COMMANDS};
use error::{CliError, Result};
use output::Record;

/// Global options whose value is the next argument.
const VALUE_OPTIONS: [&str; 5] = ["--format", "--seed", "--threads", "--config", "--output"];

/// Exit code 4: a recomputed table missed a reference value.
pub const EXIT_REGRESSION: i32 = 4;

/// Runs the command line and returns the process exit code.
pub fn run(argv: Vec<String>) -> i32 {
    let root = Cli::command().args_override_self(true);
    let argv = match with_config(&root, argv) {
        Ok(a) => a,
        Err(e) => return fail(&e),
    };
    let matches = match root.try_get_matches_from(&argv) {
        Ok(m) => m,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let cli = match Cli::from_arg_matches(&matches) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return 2;
        }
    };
    let threads = match thread_count(cli.threads) {
        Ok(t) => t,
        Err(e) => return fail(&e),
    };
    let pool = match threads
        .map_or_else(rayon::ThreadPoolBuilder::new, |n| {
            rayon::ThreadPoolBuilder::new().num_threads(n)
        })
        .build()
    {
        Ok(p) => p,
        Err(e) => return fail(&CliError::Config(format!("thread pool: {e}"))),
    };
    let outcome = pool.install(|| execute(&cli));
    match outcome {
        Ok((mut record, passed)) => {
            record.seed = cli.seed;
            record.params = echo(&matches);
            let text = match cli.format {
                Format::Csv => record.to_csv(),
                Format::Json => record.to_json(),
            };
            let written = match &cli.output {
                Some(path) => std::fs::write(path, text),
                None => std::io::stdout().lock().write_all(text.as_bytes()),
            };
            if let Err(e) = written {
                return fail(&CliError::Config(format!("cannot write output: {e}")));
            }
            if passed {
                0
            } else {
                eprintln!("regression mismatch: some cells exceed their tolerance");
                EXIT_REGRESSION
            }
        }
        Err(e) => fail(&e),
    }
}

fn fail(e: &CliError) -> i32 {
    eprintln!("error: {e}");
    e.exit_code()
}

fn execute(cli: &Cli) -> Result<(Record, bool)> {
    let seed = cli.seed;
    let record = match &cli.command {
        Command::Constants(a) => commands::constants(a)?,
        Command::Critical(a) => commands::critical(a, seed)?,
        Command::Bound(a) => commands::bound(a, seed)?,
        Command::Lmax(a) => commands::lmax(a)?,
        Command::BelowEnergy(a) => commands::below_energy(a, seed)?,
        Command::Table(a) => return tables::table(a.which, seed),
    };
    Ok((record, true))
}

/// `--threads`, then `SALPETER_THREADS`, then the rayon default.
fn thread_count(flag: Option<usize>) -> Result<Option<usize>> {
    let value = match flag {
        Some(n) => n,
        None => match std::env::var("SALPETER_THREADS") {
            Ok(text) => text.trim().parse().map_err(|_| {
                CliError::Config(format!("SALPETER_THREADS must be a positive integer, got '{text}'"))
            })?,
            Err(_) => return Ok(None),
        },
    };
    if value == 0 {
        return Err(CliError::Config("thread count must be positive".into()));
    }
    Ok(Some(value))
}

/// Moves config arguments in front of the user's arguments, right after the
/// subcommand, so that flags given on the command line win.
fn with_config(root: &clap::Command, argv: Vec<String>) -> Result<Vec<String>> {
    let mut config = None;
    let mut sub = None;
    let mut i = 1;
    while i < argv.len() {
        let arg = &argv[i];
        if arg == "--" {
            break;
        }
        if let Some(path) = arg.strip_prefix("--config=") {
            config = Some(path.to_string());
        } else if arg == "--config" {
            config = argv.get(i + 1).cloned();
        }
        if VALUE_OPTIONS.contains(&arg.as_str()) {
            i += 2;
            continue;
        }
        if sub.is_none() && COMMANDS.contains(&arg.as_str()) {
            sub = Some(i);
        }
        i += 1;
    }
    let (Some(path), Some(index)) = (config, sub) else {
        return Ok(argv);
    };
    let injected = config::config_args(path.as_ref(), root, &argv[index])?;
    let mut out = vec![argv[0].clone(), argv[index].clone()];
    out.extend(injected);
    out.extend(
        argv.iter()
            .enumerate()
            .filter(|&(j, _)| j != 0 && j != index)
            .map(|(_, a)| a.clone()),
    );
    Ok(out)
}

/// Effective options of the run, excluding those that cannot change the
/// numbers (threads, config and output paths).
fn echo(matches: &ArgMatches) -> BTreeMap<String, String> {
    let mut out = BTreeMap::new();
    let root = Cli::command();
    let mut collect = |m: &ArgMatches, cmd: &clap::Command| {
        for id in m.ids() {
            let key = id.as_str();
            let is_arg = root.get_arguments().chain(cmd.get_arguments()).any(|a| a.get_id() == id);
            if !is_arg || ["threads", "config", "output"].contains(&key) {
                continue;
            }
            if let Ok(Some(values)) = m.try_get_raw(key) {
                let text: Vec<String> =
                    values.map(|v| v.to_string_lossy().into_owned()).collect();
                out.insert(key.to_string(), text.join(","));
            }
        }
    };
    collect(matches, &root);
    if let Some((name, sub)) = matches.subcommand() {
        if let Some(cmd) = root.find_subcommand(name) {
            collect(sub, cmd);
        }
    }
    out
}
