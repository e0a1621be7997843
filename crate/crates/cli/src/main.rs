use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use gspin_core::suite::{run_matrix, run_suite, Format, MatrixConfig, RunConfig, RunError, RunReport, Suite};
use gspin_core::{FiniteGroup, DEFAULT_BASIS_CAP};

#[derive(Parser)]
#[command(name = "gspin", version, about = "Exact verification of G-spin chain field algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run verification suites on one instance.
    Verify {
        /// Group spec: Z<n>, D<n>, S<n>, Q8, cyclic:<n>, ..., or file:<path>.
        #[arg(long)]
        group: String,
        /// Generators of H by name, or `center` / `whole`. Omit for the trivial subgroup.
        #[arg(long, value_delimiter = ',')]
        subgroup: Vec<String>,
        /// Observable window as `n,m`.
        #[arg(long, value_parser = parse_window, allow_hyphen_values = true)]
        window: [i64; 2],
        /// Comma-separated suites; defaults to every suite except double-negative.
        #[arg(long, value_delimiter = ',')]
        suites: Vec<String>,
        #[arg(long, default_value = "auto")]
        mode: String,
        #[arg(long, env = "GSPIN_BASIS_CAP", default_value_t = DEFAULT_BASIS_CAP)]
        cap: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value = "json")]
        format: String,
    },
    /// Run every `[[run]]` entry of a TOML configuration.
    Run {
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value = "json")]
        format: String,
        /// Overrides the cap of entries that do not set one.
        #[arg(long, env = "GSPIN_BASIS_CAP")]
        cap: Option<usize>,
    },
    /// Validate a multiplication table file and print a summary.
    IngestGroup { file: PathBuf },
}

fn parse_window(s: &str) -> Result<[i64; 2], String> {
    let (a, b) = s.split_once(',').ok_or("expected `n,m`")?;
    let p = |t: &str| t.trim().parse::<i64>().map_err(|e| format!("`{t}`: {e}"));
    Ok([p(a)?, p(b)?])
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<(), RunError> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| RunError::Config(format!("{}: {e}", p.display()))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn timings(r: &RunReport) {
    for s in &r.suites {
        eprintln!("{:>16} {:>10.2?}  {:?}", s.suite.name(), s.elapsed, s.status);
    }
}

fn run(cli: Cli) -> Result<bool, RunError> {
    match cli.command {
        Command::Verify { group, subgroup, window, suites, mode, cap, out, format } => {
            let format: Format = format.parse()?;
            let mut cfg = RunConfig::new(&group, &[], window);
            cfg.subgroup = subgroup;
            if !suites.is_empty() {
                cfg.suites = suites.iter().map(|s| s.parse()).collect::<Result<Vec<Suite>, _>>()?;
            }
            cfg.mode = mode;
            cfg.cap = cap;
            cfg.output = out.as_ref().map(|p| p.display().to_string());
            let report = run_suite(&cfg)?;
            timings(&report);
            let text = match format {
                Format::Json => report.to_json(),
                Format::Markdown => report.to_markdown(),
            };
            emit(&text, out.as_ref())?;
            Ok(report.overall)
        }
        Command::Run { config, out, format, cap } => {
            let format: Format = format.parse()?;
            let text =
                std::fs::read_to_string(&config).map_err(|e| RunError::Config(format!("{}: {e}", config.display())))?;
            let mut matrix = MatrixConfig::parse(&text)?;
            if let Some(cap) = cap {
                for r in matrix.runs.iter_mut().filter(|r| r.cap == DEFAULT_BASIS_CAP) {
                    r.cap = cap;
                }
            }
            let report = run_matrix(&matrix)?;
            for r in &report.runs {
                eprintln!("{}: {}", r.config.label(), if r.overall { "pass" } else { "FAIL" });
                timings(r);
            }
            let text = match format {
                Format::Json => report.to_json(),
                Format::Markdown => report.to_markdown(),
            };
            emit(&text, out.as_ref())?;
            Ok(report.overall)
        }
        Command::IngestGroup { file } => {
            let g = FiniteGroup::read_table(&file).map_err(|e| RunError::Config(e.to_string()))?;
            println!("order: {}", g.order());
            println!("abelian: {}", g.is_abelian());
            println!("elements: {}", g.names().join(" "));
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
