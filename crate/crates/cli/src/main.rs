//! `spinwreath`: spin character tables, class data and relation certificates
//! for the double covers of wreath products.

mod commands;
mod config;
mod error;
mod output;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{Suite, XxForm};
use config::{CommonArgs, FileConfig, RunConfig};
use error::CliError;
use output::Document;

/// Environment variable holding the log filter.
const LOG_ENV: &str = "SPINWREATH_LOG";

#[derive(Parser)]
#[command(name = "spinwreath", version, about)]
struct Cli {
    /// TOML file with defaults for the common flags.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify signed cycle types into split and non-split classes.
    Classes {
        #[command(flatten)]
        common: CommonArgs,
        /// Compare against brute-force conjugacy classes (n <= 4, built-in groups).
        #[arg(long)]
        oracle: bool,
    },
    /// Spin super character table.
    Chartable {
        #[command(flatten)]
        common: CommonArgs,
        /// Run the orthogonality, degree and transition checks.
        #[arg(long)]
        check: bool,
    },
    /// Certify a family of relations on a finite window.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        #[command(flatten)]
        common: CommonArgs,
        /// Normalization of the x-x relation in the affine suite.
        #[arg(long, value_enum, default_value_t = XxForm::Literal)]
        xx_form: XxForm,
    },
    /// Weighted Cartan matrix of the McKay form and its affine type.
    Mckay {
        #[command(flatten)]
        common: CommonArgs,
    },
}

fn emit(doc: &Document, cfg: &RunConfig) -> Result<(), CliError> {
    let text = doc.render(cfg.format)?;
    match &cfg.output {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    let file = match &cli.config {
        Some(p) => FileConfig::load(p)?,
        None => FileConfig::default(),
    };
    let (doc, cfg, ok) = match cli.command {
        Command::Classes { common, oracle } => {
            let cfg = RunConfig::merge(common, file)?;
            let (doc, ok) = commands::cmd_classes(&cfg, oracle)?;
            (doc, cfg, ok)
        }
        Command::Chartable { common, check } => {
            let cfg = RunConfig::merge(common, file)?;
            let doc = commands::cmd_chartable(&cfg, check)?;
            (doc, cfg, true)
        }
        Command::Verify { suite, common, xx_form } => {
            let cfg = RunConfig::merge(common, file)?;
            let (doc, ok) = commands::cmd_verify(&cfg, suite, xx_form)?;
            (doc, cfg, ok)
        }
        Command::Mckay { common } => {
            let cfg = RunConfig::merge(common, file)?;
            let (doc, ok) = commands::cmd_mckay(&cfg)?;
            (doc, cfg, ok)
        }
    };
    emit(&doc, &cfg)?;
    if ok {
        Ok(())
    } else {
        Err(CliError::Verification("see the report above".into()))
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or(LOG_ENV, "warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
