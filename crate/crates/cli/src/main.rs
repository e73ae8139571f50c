mod run;
mod tasks;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use tasks::{Task, EXIT_INPUT};

#[derive(Parser, Debug)]
#[command(name = "cubicsym", version, about = "Symmetry groups of smooth cubic hypersurfaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    #[command(flatten)]
    Task(Task),
    /// Run a JSON-lines manifest of tasks.
    Run {
        manifest: PathBuf,
    },
}

fn init_threads() {
    if let Some(n) = std::env::var("CUBICSYM_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        // fails only if a pool already exists
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    init_threads();
    let code = match cli.command {
        Command::Run { manifest } => run::run_manifest(&manifest),
        Command::Task(task) => match task.execute() {
            Ok(out) => {
                // a closed pipe (`| head`) is not an error
                let mut stdout = std::io::stdout().lock();
                for l in &out.lines {
                    if writeln!(stdout, "{l}").is_err() {
                        break;
                    }
                }
                out.code
            }
            Err(e) => {
                eprintln!("error: {e}");
                match e {
                    tasks::TaskError::Input(_) => EXIT_INPUT,
                    tasks::TaskError::Compute(cubicsym::Error::Exhausted) => tasks::EXIT_EXHAUSTED,
                    tasks::TaskError::Compute(_) => EXIT_INPUT,
                }
            }
        },
    };
    ExitCode::from(code as u8)
}
