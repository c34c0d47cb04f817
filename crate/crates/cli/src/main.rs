use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use theoria::prover::{step_budget, AutoKind, DEFAULT_ORDER};
use theoria::workspace::{cmd_check, cmd_prove, ProveOptions};
use theoria_cli::{router, AppState};

#[derive(Parser)]
#[command(name = "theoria", version, about = "Check theories, prove sequents and serve the proof API")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate theory files or directories of theories.
    Check {
        #[arg(required = true)]
        paths: Vec<PathBuf>,
    },
    /// Prove every obligation of a sequent file and store the proofs.
    Prove {
        file: PathBuf,
        /// Run the automatic tactics.
        #[arg(long)]
        auto: bool,
        /// Check and replay stored proofs first.
        #[arg(long)]
        replay: bool,
        /// Order of the automatic tactics, e.g. `expand,rewrite,inference`.
        #[arg(long, value_delimiter = ',')]
        order: Option<Vec<AutoKind>>,
        /// Directory of theories; defaults to the sequent file's directory.
        #[arg(long)]
        theories: Option<PathBuf>,
    },
    /// Serve the JSON API for the proof obligations under a directory.
    Serve {
        #[arg(default_value = ".")]
        root: PathBuf,
        #[arg(long, default_value_t = 7878)]
        port: u16,
    },
}

fn code(c: i32) -> ExitCode {
    ExitCode::from(c as u8)
}

#[tokio::main]
async fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = std::io::stdout();
    match cli.command {
        Command::Check { paths } => code(cmd_check(&paths, &mut out)),
        Command::Prove { file, auto, replay, order, theories } => {
            let opts = ProveOptions {
                auto,
                replay,
                order: order.unwrap_or_else(|| DEFAULT_ORDER.to_vec()),
                budget: step_budget(),
                theories,
            };
            code(cmd_prove(&file, &opts, &mut out))
        }
        Command::Serve { root, port } => {
            let state = match AppState::load(&root) {
                Ok(s) => s,
                Err(e) => {
                    eprintln!("{e}");
                    return code(if e.is_io() { 2 } else { 1 });
                }
            };
            let listener = match tokio::net::TcpListener::bind(("127.0.0.1", port)).await {
                Ok(l) => l,
                Err(e) => {
                    eprintln!("cannot listen on port {port}: {e}");
                    return code(2);
                }
            };
            eprintln!(
                "serving {} on http://{}",
                root.display(),
                listener.local_addr().map(|a| a.to_string()).unwrap_or_default()
            );
            match axum::serve(listener, router(state)).await {
                Ok(()) => code(0),
                Err(e) => {
                    eprintln!("{e}");
                    code(2)
                }
            }
        }
    }
}
