use std::io::{self, BufReader, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand};

use dialog_core::dialog::DialogEngine;
use dialog_core::dl::{load_facts, load_terminology, parse_facts};
use dialog_core::service::{run_repl, serve, LogMode, SessionStore};
use dialog_core::solver::{eval_query, render_rows, ConjunctiveQuery};
use dialog_core::tau::{render_theory, translate_terminology};

#[derive(Parser)]
#[command(name = "dialog", version, about = "Dialog manager over a description-logic domain")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Interactive dialog on standard input and output.
    Repl {
        #[arg(long)]
        domain: PathBuf,
        #[arg(long)]
        facts: PathBuf,
        /// Also write the turn transcript to this file.
        #[arg(long)]
        transcript: Option<PathBuf>,
    },
    /// Serve the session API over HTTP.
    Serve {
        #[arg(long)]
        domain: PathBuf,
        #[arg(long)]
        facts: PathBuf,
        #[arg(long, default_value_t = 8080)]
        port: u16,
    },
    /// Print the translated theory, one formula per line.
    Translate {
        #[arg(long)]
        domain: PathBuf,
    },
    /// Answer a conjunctive query such as `At(t,x) & From(t,Milan)`.
    Query {
        #[arg(long)]
        facts: PathBuf,
        /// Check predicates against this domain file.
        #[arg(long)]
        domain: Option<PathBuf>,
        query: String,
    },
}

/// A failure that ends the process with exit status 2.
struct Fatal(String);

impl<E: std::fmt::Display> From<E> for Fatal {
    fn from(e: E) -> Self {
        Fatal(e.to_string())
    }
}

fn read(path: &Path) -> Result<String, Fatal> {
    std::fs::read_to_string(path).map_err(|e| match e.kind() {
        io::ErrorKind::NotFound => Fatal(format!("not found: {}", path.display())),
        _ => Fatal(format!("{}: {e}", path.display())),
    })
}

fn engine(domain: &Path, facts: &Path) -> Result<DialogEngine, Fatal> {
    let d = read(domain)?;
    let f = read(facts)?;
    DialogEngine::from_sources(&d, &f).map_err(|e| Fatal(e.to_string()))
}

fn run(cli: Cli) -> Result<(), Fatal> {
    match cli.command {
        Command::Repl {
            domain,
            facts,
            transcript,
        } => {
            let engine = engine(&domain, &facts)?;
            let stdin = io::stdin();
            let st = run_repl(&engine, BufReader::new(stdin.lock()), io::stdout().lock(), LogMode::from_env())?;
            if let Some(path) = transcript {
                std::fs::write(path, st.transcript())?;
            }
        }
        Command::Serve { domain, facts, port } => {
            let engine = Arc::new(engine(&domain, &facts)?);
            let store = Arc::new(SessionStore::with_log(engine, LogMode::from_env()));
            let rt = tokio::runtime::Builder::new_multi_thread().enable_all().build()?;
            eprintln!("listening on port {port}");
            rt.block_on(serve(store, port))?;
        }
        Command::Translate { domain } => {
            let t = load_terminology(&read(&domain)?)?;
            io::stdout().write_all(render_theory(&translate_terminology(&t)).as_bytes())?;
        }
        Command::Query { facts, domain, query } => {
            let src = read(&facts)?;
            let kb = match domain {
                Some(d) => load_facts(&src, &load_terminology(&read(&d)?)?)?,
                None => parse_facts(&src)?,
            };
            let q = ConjunctiveQuery::parse(&query, &kb)?;
            let rows = eval_query(&q, &kb)?;
            io::stdout().write_all(render_rows(&q, &rows).as_bytes())?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Fatal(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
