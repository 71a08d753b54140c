use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use ringtime_core::{studies, Error, Table};

mod config;
mod output;

use config::RunConfig;

const EXIT_FAIL: u8 = 1;
const EXIT_CONFIG: u8 = 2;

#[derive(Parser)]
#[command(name = "ringtime", version, about = "Time operators on a quantum ring: identity checks, spectra, dynamics and limits")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Flat `section.key = value` configuration file; flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Momentum cutoff L (levels -L..=L).
    #[arg(long = "L", global = true)]
    cutoff: Option<String>,
    /// Ring radius.
    #[arg(long = "R", global = true)]
    radius: Option<String>,
    #[arg(long, global = true)]
    mass: Option<String>,
    #[arg(long, global = true)]
    hbar: Option<String>,
    /// Grid points for angle-space quadrature, or `auto`.
    #[arg(long, global = true)]
    grid: Option<String>,
    #[arg(long, global = true, value_parser = ["csv", "json"])]
    format: Option<String>,
    /// Output file; written atomically. Defaults to stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, env = "RINGTIME_SEED")]
    seed: Option<String>,
    /// Identity and periodicity tolerance.
    #[arg(long, global = true)]
    tol: Option<String>,
    /// Print the resolved configuration in canonical form and exit.
    #[arg(long, global = true)]
    print_config: bool,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Commutator, Weyl-relation and PT suites.
    Check,
    /// Eigenvalues and biorthogonal eigenfunctions of the PT time operator.
    Spectrum,
    /// Time-crystal periodicity of Heisenberg-evolved operators.
    Evolve,
    /// Infinite-radius comparisons with the line (see `limit.table`).
    Limit,
    /// Uncertainty relations on seeded random states.
    Uncertainty,
    /// Pulsed spin-1/2 drive and its stroboscopic period.
    Floquet,
}

fn resolve(cli: &Cli) -> Result<RunConfig, String> {
    let mut cfg = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
            RunConfig::parse(&text).map_err(|e| format!("{}: {e}", path.display()))?
        }
        None => RunConfig::default(),
    };
    let overrides = [
        ("basis.L", &cli.cutoff),
        ("basis.R", &cli.radius),
        ("basis.mass", &cli.mass),
        ("basis.hbar", &cli.hbar),
        ("basis.grid", &cli.grid),
        ("run.format", &cli.format),
        ("run.seed", &cli.seed),
        ("tolerance.algebra", &cli.tol),
    ];
    for (key, value) in overrides {
        if let Some(v) = value {
            cfg.set(key, v).map_err(|e| e.to_string())?;
        }
    }
    Ok(cfg)
}

fn run(command: Command, cfg: &RunConfig) -> ringtime_core::Result<Table> {
    let p = &cfg.params;
    match command {
        Command::Check => studies::check_table(p),
        Command::Spectrum => studies::spectrum_table(p),
        Command::Evolve => studies::evolve_table(p),
        Command::Limit => studies::limit_table(p),
        Command::Uncertainty => studies::uncertainty_table(p),
        Command::Floquet => studies::floquet_table(p),
    }
}

/// Writes to a sibling temporary file and renames it into place, so a
/// failed run never leaves a partial output behind.
fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match resolve(&cli) {
        Ok(c) => c,
        Err(msg) => {
            eprintln!("ringtime: config error: {msg}");
            return ExitCode::from(EXIT_CONFIG);
        }
    };
    if cli.print_config {
        print!("{}", cfg.canonical());
        return ExitCode::SUCCESS;
    }
    let table = match run(cli.command, &cfg) {
        Ok(t) => t,
        Err(e @ (Error::Config(_) | Error::Domain(_))) => {
            eprintln!("ringtime: config error: {e}");
            return ExitCode::from(EXIT_CONFIG);
        }
        Err(e) => {
            eprintln!("ringtime: {e}");
            return ExitCode::from(EXIT_FAIL);
        }
    };
    let bytes = output::render(&table, cfg.format);
    let written = match &cli.out {
        Some(path) => write_atomic(path, &bytes).map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => std::io::stdout().write_all(&bytes).map_err(|e| format!("cannot write to stdout: {e}")),
    };
    if let Err(msg) = written {
        eprintln!("ringtime: {msg}");
        return ExitCode::from(EXIT_CONFIG);
    }
    eprintln!("{}: {} rows, {}", table.name, table.rows.len(), if table.pass { "pass" } else { "FAIL" });
    if table.pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_FAIL)
    }
}
