use std::path::PathBuf;
use std::process::ExitCode;

use algebroid_cli::{catalog_lines, load, run, Overrides, EXIT_INTERNAL, EXIT_SCHEMA};
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "algebroid",
    version,
    about = "Run algebroid checks on scenario files"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the checks of a scenario file.
    Check {
        file: PathBuf,
        /// Comma-separated checks replacing the scenario's list.
        #[arg(long, value_delimiter = ',')]
        checks: Option<Vec<String>>,
        /// Grid intervals per axis for numeric checks.
        #[arg(long)]
        grid: Option<usize>,
        /// Numeric tolerance; defaults to the scenario value, then to
        /// the ALGEBROID_TOL environment variable.
        #[arg(long)]
        tol: Option<f64>,
        /// Write the JSON report to this path (`-` for standard output).
        #[arg(long)]
        json: Option<PathBuf>,
        /// Suppress the text report.
        #[arg(long)]
        quiet: bool,
    },
    /// List the available checks.
    ListChecks,
}

fn code(c: i32) -> ExitCode {
    ExitCode::from(c as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::ListChecks => {
            for line in catalog_lines() {
                println!("{}", line);
            }
            ExitCode::SUCCESS
        }
        Command::Check {
            file,
            checks,
            grid,
            tol,
            json,
            quiet,
        } => {
            let mut world = match load(&file) {
                Ok(w) => w,
                Err(e) => {
                    eprintln!("error: {}", e);
                    return code(EXIT_SCHEMA);
                }
            };
            if let Some(names) = checks {
                if let Err(e) = world.select(&names) {
                    eprintln!("error: {}", e);
                    return code(EXIT_SCHEMA);
                }
            }
            if let Err(e) = world.validate() {
                eprintln!("error: {}", e);
                return code(EXIT_SCHEMA);
            }
            let report = run(
                &world,
                &Overrides {
                    grid,
                    tolerance: tol,
                },
            );
            if !quiet {
                print!("{}", report.render_text());
            }
            if let Some(path) = json {
                let text = report.to_json();
                if path.as_os_str() == "-" {
                    print!("{}", text);
                } else if let Err(e) = std::fs::write(&path, text) {
                    eprintln!("error: {}: {}", path.display(), e);
                    return code(EXIT_INTERNAL);
                }
            }
            code(report.exit_code())
        }
    }
}
