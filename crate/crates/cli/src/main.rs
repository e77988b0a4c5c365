//! `homcav`: sweeps, region analysis, the XOR gate and oracle checks for a
//! HOM interferometer with Fabry-Perot cavities.

mod config;
mod run;

use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Arg, ArgAction, Command};

use config::{parse_kv, Settings, KEYS};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] hom_cavity::Error),
    #[error("i/o: {0}")]
    Io(#[from] io::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) if e.is_numerical() => 2,
            _ => 1,
        }
    }
}

fn command() -> Command {
    let mut cmd = Command::new("homcav")
        .version(env!("CARGO_PKG_VERSION"))
        .about("Coincidence rates of a HOM interferometer with Fabry-Perot cavities")
        .arg(
            Arg::new("mode_arg")
                .value_name("MODE")
                .help("run mode; same as --mode"),
        )
        .arg(
            Arg::new("config")
                .long("config")
                .value_name("FILE")
                .value_parser(clap::value_parser!(PathBuf))
                .help("key = value file; flags override its entries"),
        );
    for (key, help) in KEYS {
        cmd = cmd.arg(
            Arg::new(*key)
                .long(*key)
                .value_name("VALUE")
                .action(ArgAction::Set)
                .allow_negative_numbers(true)
                .help(*help),
        );
    }
    cmd
}

fn settings_from_args() -> Result<Settings, CliError> {
    let matches = match command().try_get_matches() {
        Ok(m) => m,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                e.exit();
            }
            let msg = e.render().to_string();
            return Err(CliError::Config(
                msg.lines().next().unwrap_or("usage error").to_string(),
            ));
        }
    };
    let mut map = match matches.get_one::<PathBuf>("config") {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
            parse_kv(&text)?
        }
        None => BTreeMap::new(),
    };
    for (key, _) in KEYS {
        if let Some(value) = matches.get_one::<String>(key) {
            map.insert(key.to_string(), value.clone());
        }
    }
    if let Some(mode) = matches.get_one::<String>("mode_arg") {
        map.insert("mode".into(), mode.clone());
    }
    Ok(Settings::new(map))
}

fn execute() -> Result<(), CliError> {
    let settings = settings_from_args()?;
    if let Some(threads) = settings.get::<usize>("threads")? {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| CliError::Config(format!("threads: {e}")))?;
    }
    let outcome = run::run(&settings)?;
    match settings.get::<PathBuf>("output")? {
        Some(path) => fs::write(path, &outcome.body)?,
        None => io::stdout().lock().write_all(&outcome.body)?,
    }
    outcome.failure.map_or(Ok(()), Err)
}

fn main() -> ExitCode {
    match execute() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("homcav: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
