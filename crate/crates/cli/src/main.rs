use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use enlarge_cli::catalog;
use enlarge_cli::{run_file, run_spec, validate_text, RunError, RunOptions};

#[derive(Parser)]
#[command(
    name = "enlarge",
    version,
    about = "Run percolation enlargement experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a spec file, or a catalog entry given as `catalog:<name>`.
    Run {
        spec: String,
        /// Replace the spec's master seed.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        #[arg(long, env = "ENLARGE_WORKERS")]
        workers: Option<usize>,
        /// Replace the window size (radius, depth or levels).
        #[arg(long)]
        window_override: Option<usize>,
    },
    /// Check a spec without running it; prints one line per problem.
    Validate { spec: PathBuf },
    /// List the built-in experiments.
    List {
        /// Print the TOML of one entry instead.
        #[arg(long)]
        show: Option<String>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run {
            spec,
            seed,
            out,
            workers,
            window_override,
        } => {
            let opts = RunOptions {
                seed,
                out_dir: out,
                workers,
                window_override,
            };
            let res = match spec.strip_prefix("catalog:") {
                Some(name) => match catalog::find(name) {
                    Some(e) => run_spec(&e.spec(), &opts),
                    None => {
                        eprintln!("no catalog entry named `{name}`");
                        return ExitCode::from(2);
                    }
                },
                None => run_file(spec.as_ref(), &opts),
            };
            match res {
                Ok(o) => {
                    println!("{}", o.csv_path.display());
                    println!("{}", o.summary_path.display());
                    ExitCode::SUCCESS
                }
                Err(e) => {
                    eprintln!("{e}");
                    ExitCode::from(e.exit_code() as u8)
                }
            }
        }
        Command::Validate { spec } => {
            let text = match std::fs::read_to_string(&spec) {
                Ok(t) => t,
                Err(e) => {
                    eprintln!("reading {}: {e}", spec.display());
                    return ExitCode::from(RunError::Runtime(e.into()).exit_code() as u8);
                }
            };
            let (_, report) = validate_text(&text);
            if report.is_ok() {
                println!("ok");
                ExitCode::SUCCESS
            } else {
                print!("{report}");
                ExitCode::from(2)
            }
        }
        Command::List { show } => match show {
            Some(name) => match catalog::find(&name) {
                Some(e) => {
                    print!("{}", e.spec().to_toml());
                    ExitCode::SUCCESS
                }
                None => {
                    eprintln!("no catalog entry named `{name}`");
                    ExitCode::from(2)
                }
            },
            None => {
                print!("{}", catalog::listing());
                ExitCode::SUCCESS
            }
        },
    }
}
