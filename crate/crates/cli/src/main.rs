use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

use entclt::dist;
use entclt_cli::config::{parse_grid, parse_tol, Format, RunConfig};
use entclt_cli::{commands, output};

/// Exact entropic CLT computations for lattice laws.
#[derive(Debug, Parser)]
#[command(name = "entclt", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Tabulate entropy gap, relative entropy and TV distance over an n grid.
    Scan(Common),
    /// Run every applicable bound check over an n grid.
    Verify(Common),
    /// Print the Bernoulli part decomposition of the law.
    Decompose(Common),
    /// Check the integral de Bruijn identity at a single n.
    Debruijn {
        #[command(flatten)]
        common: Common,
        /// Number of summands.
        #[arg(long)]
        n: usize,
    },
}

#[derive(Debug, Args)]
struct Common {
    /// JSON distribution file, or a named law: bern:p, uniform:k, bin:n.
    #[arg(long)]
    dist: String,
    /// Comma-separated, strictly increasing list of n.
    #[arg(long)]
    n_grid: Option<String>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Write output here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Per-check tolerance override, name=value. Repeatable.
    #[arg(long = "tol")]
    tol: Vec<String>,
    /// Gauss-Legendre nodes for the t integral.
    #[arg(long)]
    quad_points: Option<usize>,
    /// Largest support size, in cells.
    #[arg(long)]
    cap: Option<usize>,
    /// Default config file (JSON).
    #[arg(long, env = "ENTCLT_CONFIG", hide_env_values = true)]
    config: Option<PathBuf>,
}

impl Common {
    fn config(&self) -> Result<RunConfig> {
        let mut config = match &self.config {
            Some(path) => RunConfig::from_file(path)?,
            None => RunConfig::default(),
        };
        if let Some(grid) = &self.n_grid {
            config.n_grid = parse_grid(grid)?;
        }
        if let Some(format) = self.format {
            config.format = format;
        }
        for item in &self.tol {
            let (name, value) = parse_tol(item)?;
            config.tolerances.insert(name, value);
        }
        if let Some(q) = self.quad_points {
            config.t_nodes = q;
        }
        if let Some(cap) = self.cap {
            config.cap = cap;
        }
        config.validate()?;
        Ok(config)
    }

    fn emit(&self, text: &str) -> Result<()> {
        match &self.out {
            Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display())),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }
}

/// Runs the command; `Ok(false)` means a bound was violated.
fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Scan(common) => {
            let config = common.config()?;
            let base = dist::load(&common.dist)?;
            let rows = commands::scan(&base, &config)?;
            common.emit(&output::scan(&rows, config.format)?)?;
            Ok(true)
        }
        Command::Verify(common) => {
            let config = common.config()?;
            let base = dist::load(&common.dist)?;
            let report = commands::verify(&base, &config)?;
            common.emit(&output::verify(&report, config.format)?)?;
            Ok(report.all_pass)
        }
        Command::Decompose(common) => {
            let base = dist::load(&common.dist)?;
            common.emit(&output::decompose(&commands::decompose(&base)?)?)?;
            Ok(true)
        }
        Command::Debruijn { common, n } => {
            let config = common.config()?;
            let base = dist::load(&common.dist)?;
            let outcome = commands::debruijn(&base, n, &config)?;
            common.emit(&output::debruijn(&outcome, config.format)?)?;
            Ok(outcome.report.pass)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}
