use std::path::PathBuf;
use std::process::ExitCode;

use anscy::montecarlo::ChannelModel;
use anscy_cli::{load_config, run_experiment, CliError, Experiment, ExperimentSpec};
use clap::{Parser, Subcommand};

/// Analytic and simulated outage and secrecy-throughput experiments.
#[derive(Debug, Parser)]
#[command(name = "anscy", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run one experiment and write `<out>.csv`, `<out>.gp` and `<out>.timing`.
    Run {
        experiment: Experiment,
        /// `key=value` file overriding the preset parameters.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Monte Carlo trials per point.
        #[arg(long)]
        trials: Option<u64>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Output CSV path (default `<experiment>.csv`).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Skip the Monte Carlo columns.
        #[arg(long)]
        no_mc: bool,
        /// Simulate full channel vectors instead of scalar gain laws.
        #[arg(long)]
        vector_channels: bool,
        /// Comma-separated replacement for the sweep grid.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        grid: Option<Vec<f64>>,
    },
    /// Inspect the built-in presets.
    Presets {
        #[command(subcommand)]
        action: PresetAction,
    },
}

#[derive(Debug, Subcommand)]
enum PresetAction {
    /// List every experiment with a one-line description.
    List,
    /// Print the parameter file of an experiment's preset.
    Show { experiment: Experiment },
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var("ANSCY_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Usage(format!("ANSCY_THREADS must be a positive integer, got `{v}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Usage(format!("cannot start {n} worker threads: {e}")))
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    match cli.command {
        Command::Presets {
            action: PresetAction::List,
        } => {
            for e in Experiment::ALL {
                println!("{:<20} {}", e.name(), e.summary());
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Presets {
            action: PresetAction::Show { experiment },
        } => {
            print!("{}", anscy_cli::preset(experiment).base.to_config_string());
            Ok(ExitCode::SUCCESS)
        }
        Command::Run {
            experiment,
            config,
            trials,
            seed,
            out,
            no_mc,
            vector_channels,
            grid,
        } => {
            configure_threads()?;
            let mut spec = ExperimentSpec::new(experiment);
            if let Some(path) = config {
                // Validate the file on its own first so errors name the file's line.
                load_config(&path)?;
                spec.overrides = Some(std::fs::read_to_string(&path).map_err(|source| CliError::Io { path, source })?);
            }
            spec.trials = trials;
            spec.seed = seed;
            spec.monte_carlo = !no_mc;
            spec.grid = grid;
            if vector_channels {
                spec.channels = ChannelModel::Vector;
            }
            if let Some(out) = out {
                spec.out_path = out;
            }
            let summary = run_experiment(&spec)?;
            println!(
                "wrote {} ({} rows), {}, {}",
                summary.csv.display(),
                summary.rows,
                summary.gnuplot.display(),
                summary.timing.display()
            );
            if summary.infeasible_only {
                eprintln!("warning: no sweep point satisfies the outage constraints");
                return Ok(ExitCode::from(2));
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    // Exit code 2 is reserved for infeasible-only results, so usage errors map to 1.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
