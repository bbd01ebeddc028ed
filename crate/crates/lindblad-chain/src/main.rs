//! Thin command-line frontend. All real work lives in the library; this
//! binary wires a JSON config file to one experiment runner and emits the
//! rendered report.

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use lindblad_chain::config::{parse_config, Experiment, OutputFormat, RunConfig};
use lindblad_chain::experiments::{
    run_one_way, run_parity_scan, run_solve, run_symmetry_suite, run_three_site_benchmark,
    ParityRow, SymmetryRow,
};
use lindblad_chain::report::{emit, render_csv, render_json, Record, Report};
use lindblad_chain::{Error, Result};

#[derive(Parser)]
#[command(
    name = "lindblad-chain",
    version,
    about = "Steady states, currents, and symmetry checks for boundary-driven spin chains"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one steady state and report site-resolved currents.
    Solve(RunArgs),
    /// Compare steady currents before and after swapping the two baths.
    OneWay(RunArgs),
    /// Check the solver against the three-site perturbative closed form.
    Benchmark3(RunArgs),
    /// Sweep the driving strength and test current parities under f -> -f.
    ParityScan(RunArgs),
    /// Run the full grid of symmetry verifications.
    SymmetrySuite(RunArgs),
}

impl Command {
    fn experiment(&self) -> Experiment {
        match self {
            Command::Solve(_) => Experiment::Solve,
            Command::OneWay(_) => Experiment::OneWay,
            Command::Benchmark3(_) => Experiment::Benchmark3,
            Command::ParityScan(_) => Experiment::ParityScan,
            Command::SymmetrySuite(_) => Experiment::SymmetrySuite,
        }
    }

    fn args(&self) -> &RunArgs {
        match self {
            Command::Solve(a)
            | Command::OneWay(a)
            | Command::Benchmark3(a)
            | Command::ParityScan(a)
            | Command::SymmetrySuite(a) => a,
        }
    }
}

#[derive(Args)]
struct RunArgs {
    /// Path to the JSON run configuration.
    #[arg(long)]
    config: String,

    /// Write the report here instead of the config's output path.
    #[arg(long)]
    out: Option<String>,

    /// Override the config's output format.
    #[arg(long, value_enum)]
    format: Option<FormatArg>,

    /// Override the config's RNG seed.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

impl From<FormatArg> for OutputFormat {
    fn from(arg: FormatArg) -> Self {
        match arg {
            FormatArg::Json => OutputFormat::Json,
            FormatArg::Csv => OutputFormat::Csv,
        }
    }
}

fn main() -> ExitCode {
    cap_blas_threads();
    let cli = Cli::parse();
    match run(&cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

/// LINDBLAD_CHAIN_THREADS caps BLAS parallelism. The backend reads its own
/// variables once at startup, so they must be set before the first
/// linear-algebra call, and explicit settings win over the cap.
fn cap_blas_threads() {
    if let Ok(threads) = std::env::var("LINDBLAD_CHAIN_THREADS") {
        for key in ["OPENBLAS_NUM_THREADS", "OMP_NUM_THREADS"] {
            if std::env::var_os(key).is_none() {
                std::env::set_var(key, &threads);
            }
        }
    }
}

fn run(command: &Command) -> Result<()> {
    let args = command.args();
    let text = std::fs::read_to_string(&args.config)?;
    let mut config = parse_config(&text)?;
    if config.experiment != command.experiment() {
        return Err(Error::Config(format!(
            "config names experiment `{}`, but the `{}` subcommand was invoked",
            config.experiment.name(),
            command.experiment().name(),
        )));
    }
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    if let Some(out) = &args.out {
        config.output.path = Some(out.clone());
    }
    if let Some(format) = args.format {
        config.output.format = format.into();
    }

    let rendered = match config.output.format {
        OutputFormat::Json => {
            let results = run_experiment(&config)?;
            render_json(&Report::new(config.clone(), results))?
        }
        OutputFormat::Csv => match config.experiment {
            Experiment::ParityScan => render_csv(&parity_rows(&config)?)?,
            Experiment::SymmetrySuite => render_csv(&suite_rows(&config)?)?,
            other => {
                return Err(Error::Config(format!(
                    "csv output is only defined for parity_scan and symmetry_suite, not {}",
                    other.name()
                )))
            }
        },
    };
    emit(&rendered, config.output.path.as_deref())
}

fn run_experiment(config: &RunConfig) -> Result<Vec<Record>> {
    let options = config.solver_options();
    Ok(match config.experiment {
        Experiment::Solve => {
            let record = run_solve(
                &config.model()?,
                &config.drive()?,
                &options,
                config.solver.time_evolution_crosscheck,
            )?;
            vec![Record::Solve(record)]
        }
        Experiment::OneWay => {
            vec![Record::OneWay(run_one_way(&config.model()?, &config.drive()?, &options)?)]
        }
        Experiment::Benchmark3 => {
            let block = config.benchmark3.clone().ok_or_else(|| {
                Error::Config("experiment benchmark3 needs a `benchmark3` block".into())
            })?;
            vec![Record::Benchmark(run_three_site_benchmark(block.parameters(), &options)?)]
        }
        Experiment::ParityScan => parity_rows(config)?.into_iter().map(Record::Parity).collect(),
        Experiment::SymmetrySuite => {
            suite_rows(config)?.into_iter().map(Record::Symmetry).collect()
        }
    })
}

fn parity_rows(config: &RunConfig) -> Result<Vec<ParityRow>> {
    let block = config.parity_scan.clone().unwrap_or_default();
    run_parity_scan(&config.model()?, block.gamma, &block.f_grid, &config.solver_options())
}

fn suite_rows(config: &RunConfig) -> Result<Vec<SymmetryRow>> {
    let block = config.symmetry_suite.clone().unwrap_or_default();
    run_symmetry_suite(&block.grid(config.seed), &config.solver_options())
}
