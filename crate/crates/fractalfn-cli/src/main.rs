//! `fractalfn`: construct fractal perturbations of continuous functions,
//! report their box-counting dimension, tabulate minimax errors, and run the
//! verification suite.

mod commands;
mod config;
mod output;

use clap::{Parser, Subcommand};
use std::path::PathBuf;

#[derive(Parser)]
#[command(name = "fractalfn", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Render the seed, base, and fractal perturbation to graph.csv (and
    /// optionally graph.svg / quotient.csv).
    Render {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value = ".")]
        out: PathBuf,
        /// Override the evaluation grid size.
        #[arg(long)]
        grid: Option<usize>,
        /// Also write an SVG polyline plot.
        #[arg(long)]
        svg: bool,
    },
    /// Solve the box-dimension equation and optionally cross-check with the
    /// column-counting estimator.
    Dimension {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value = ".")]
        out: PathBuf,
        #[arg(long)]
        grid: Option<usize>,
    },
    /// Run the inequality checks for one configuration, or the full fixture
    /// suite with `--suite full`. Exit code 1 when any check fails.
    Verify {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        suite: Option<String>,
        #[arg(long, default_value = ".")]
        out: PathBuf,
        #[arg(long)]
        grid: Option<usize>,
    },
    /// Tabulate minimax error proxies, fractal bounds, witnesses, and
    /// interpolation-operator bounds over the corpus.
    Minimax {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value = ".")]
        out: PathBuf,
        #[arg(long)]
        grid: Option<usize>,
    },
}

/// Worker cap from FRACTALFN_THREADS; 0 means all cores.
fn thread_cap() -> usize {
    std::env::var("FRACTALFN_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .unwrap_or(0)
}

fn main() {
    let cli = Cli::parse();
    let code = match &cli.command {
        Command::Render {
            config,
            out,
            grid,
            svg,
        } => commands::cmd_render(config, out, *grid, *svg),
        Command::Dimension { config, out, grid } => commands::cmd_dimension(config, out, *grid),
        Command::Verify {
            config,
            suite,
            out,
            grid,
        } => commands::cmd_verify(
            config.as_deref(),
            suite.as_deref(),
            out,
            *grid,
            thread_cap(),
        ),
        Command::Minimax { config, out, grid } => {
            commands::cmd_minimax(config, out, *grid, thread_cap())
        }
    };
    std::process::exit(code);
}
