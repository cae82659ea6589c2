//! `orthomotion` command-line interface.
//!
//! Exit status: 0 when every check passes, 1 when a check fails, 2 on a
//! usage error (bad arguments, unsupported combination, unwritable output).

mod cli;
mod commands;
mod output;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::Parser;
use serde::Serialize;

use cli::{Cli, Command, Format, Sink};
use output::Record;

const CHECK_FAILED: u8 = 1;
const USAGE: u8 = 2;

fn emit<C: Serialize>(config: &C, sink: &Sink, rows: &[Record]) -> Result<()> {
    let mut out: Box<dyn Write> = match &sink.output {
        Some(path) => {
            let file = File::create(path).with_context(|| format!("cannot write {}", path.display()))?;
            Box::new(BufWriter::new(file))
        }
        None => Box::new(std::io::stdout().lock()),
    };
    match sink.format {
        Format::Json => output::write_json(&mut out, config, rows)?,
        Format::Csv => output::write_csv(&mut out, rows)?,
    }
    out.flush()?;
    Ok(())
}

fn run(cli: &Cli) -> Result<bool> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("cannot start worker threads")?;
    }
    let (sink, (rows, pass)) = match &cli.command {
        Command::Simulate(a) => (&a.sink, commands::simulate(a)?),
        Command::Masses(a) => (&a.sink, commands::masses(a)?),
        Command::Density(a) => (&a.sink, commands::density(a)?),
        Command::Verify(a) => (&a.sink, commands::verify(a)?),
        Command::PdeCheck(a) => (&a.sink, commands::pde_check(a)?),
    };
    emit(&cli.command, sink, &rows)?;
    Ok(pass)
}

fn exit_code(e: &anyhow::Error) -> u8 {
    if e.chain().any(|c| c.is::<std::io::Error>()) {
        return USAGE;
    }
    match e.downcast_ref::<orthomotion::Error>() {
        Some(
            orthomotion::Error::InvalidParameter(_)
            | orthomotion::Error::Domain(_)
            | orthomotion::Error::Unsupported(_),
        ) => USAGE,
        _ => CHECK_FAILED,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("orthomotion: one or more checks failed");
            ExitCode::from(CHECK_FAILED)
        }
        Err(e) => {
            eprintln!("orthomotion: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
