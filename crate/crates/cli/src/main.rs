use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use windowed_bandit::bounds::BoundReport;
use windowed_bandit::experiment::{
    first_trace, fit_loglog_slope, read_results, run_experiment, sweep, sweep_rows, write_results, Axis,
    ExperimentConfig, Generator, PolicyKind, Windows,
};
use windowed_bandit::format::g17;
use windowed_bandit::instance::write_instance;
use windowed_bandit::instance_gen::{generate_lb_instance, plan_batches_case1, plan_batches_case2};
use windowed_bandit::rng::{mix, stream, tag};
use windowed_bandit::{Error, WindowPartition};

/// Windowed-oracle bandit simulations.
#[derive(Parser)]
#[command(name = "wbandit", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Draw a hard instance and write it as an instance file.
    Gen(GenArgs),
    /// Run a policy and write the first replication's trace.
    Run(RunArgs),
    /// Sweep one parameter and write a results CSV.
    Sweep(SweepArgs),
    /// Print the regret bounds of a uniform partition.
    Bounds(BoundsArgs),
    /// Fit a log-log slope to two columns of a results CSV.
    Slope(SlopeArgs),
}

#[derive(Args)]
struct GenArgs {
    /// 1 = small-window construction, 2 = large-window construction.
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
    case: u8,
    #[arg(long = "T", value_name = "T")]
    horizon: usize,
    #[arg(long = "K", value_name = "K")]
    arms: usize,
    #[arg(long = "V", value_name = "V")]
    budget: f64,
    #[arg(long = "W", value_name = "W")]
    width: usize,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

/// Experiment settings shared by `run` and `sweep`. Flags override `--config`.
#[derive(Args)]
struct ExperimentArgs {
    /// `key = value` configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long = "K", value_name = "K")]
    arms: Option<usize>,
    #[arg(long = "T", value_name = "T")]
    horizon: Option<usize>,
    #[arg(long = "V", value_name = "V")]
    budget: Option<f64>,
    /// Uniform window width.
    #[arg(long = "W", value_name = "W", conflicts_with = "windows")]
    width: Option<usize>,
    /// Explicit window sizes, comma separated.
    #[arg(long, value_delimiter = ',')]
    windows: Option<Vec<usize>>,
    /// Hard-instance construction (1 or 2).
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2), conflicts_with_all = ["means", "instance"])]
    case: Option<u8>,
    /// Stationary arm means, comma separated.
    #[arg(long, value_delimiter = ',', conflicts_with = "instance")]
    means: Option<Vec<f64>>,
    /// Instance file; its K, T, V and windows take precedence.
    #[arg(long)]
    instance: Option<PathBuf>,
    #[arg(long, value_parser = ["exp3", "we3"])]
    policy: Option<String>,
    #[arg(long)]
    reps: Option<usize>,
    #[arg(long)]
    seed: u64,
}

impl ExperimentArgs {
    fn resolve(&self) -> Result<ExperimentConfig, Error> {
        let mut cfg = match &self.config {
            Some(path) => ExperimentConfig::from_kv(&fs::read_to_string(path)?)?,
            None => ExperimentConfig::default(),
        };
        cfg.seed = self.seed;
        if let Some(k) = self.arms {
            cfg.arms = k;
        }
        if let Some(t) = self.horizon {
            cfg.horizon = t;
        }
        if let Some(v) = self.budget {
            cfg.budget = v;
        }
        if let Some(w) = self.width {
            cfg.windows = Windows::Uniform(w);
        }
        if let Some(sizes) = &self.windows {
            cfg.windows = Windows::Explicit(sizes.clone());
        }
        match (self.case, &self.means, &self.instance) {
            (Some(1), _, _) => cfg.generator = Generator::LbCase1,
            (Some(_), _, _) => cfg.generator = Generator::LbCase2,
            (_, Some(m), _) => cfg.generator = Generator::Stationary(m.clone()),
            (_, _, Some(p)) => cfg.generator = Generator::File(p.clone()),
            _ => {}
        }
        if let Some(p) = &self.policy {
            cfg.policy = p.parse::<PolicyKind>()?;
        }
        if let Some(r) = self.reps {
            cfg.reps = r;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    experiment: ExperimentArgs,
    /// Trace CSV of replication 0.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, value_parser = ["V", "K", "T", "W"])]
    axis: String,
    /// Comma-separated axis values.
    #[arg(long, value_delimiter = ',', required = true)]
    values: Vec<f64>,
    #[command(flatten)]
    experiment: ExperimentArgs,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct BoundsArgs {
    #[arg(long = "T", value_name = "T")]
    horizon: usize,
    #[arg(long = "K", value_name = "K")]
    arms: usize,
    #[arg(long = "V", value_name = "V")]
    budget: f64,
    #[arg(long = "W", value_name = "W")]
    width: usize,
    /// Also print the CSV header and row.
    #[arg(long)]
    csv: bool,
}

#[derive(Args)]
struct SlopeArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// Column used as x.
    #[arg(long)]
    x: String,
    /// Column used as y.
    #[arg(long, default_value = "mean_regret")]
    y: String,
}

fn gen(args: &GenArgs) -> Result<(), Error> {
    let partition = WindowPartition::uniform(args.width, args.horizon)?;
    let plan = match args.case {
        1 => plan_batches_case1(&partition, args.arms, args.budget, args.horizon)?,
        _ => plan_batches_case2(&partition, args.arms, args.budget, args.horizon)?,
    };
    let instance = generate_lb_instance(&plan, &mut stream(mix(args.seed, tag::INSTANCE)))?;
    write_instance(&args.out, &instance, &partition)?;
    println!("wrote {} ({} batches)", args.out.display(), plan.batches.len());
    Ok(())
}

fn run(args: &RunArgs) -> Result<(), Error> {
    let cfg = args.experiment.resolve()?;
    let summary = run_experiment(&cfg)?;
    if let Some(out) = &args.out {
        let (_, trace) = first_trace(&cfg)?;
        trace.write_csv_file(out)?;
    }
    println!("policy:      {}", cfg.policy);
    println!("K T V:       {} {} {}", summary.arms, summary.horizon, g17(summary.budget));
    println!("windows:     {}", summary.partition.len());
    println!("regime:      {}", summary.regime);
    println!("reps:        {}", summary.regrets.len());
    println!("mean_regret: {}", g17(summary.mean_regret));
    println!("std_regret:  {}", g17(summary.std_regret));
    Ok(())
}

fn run_sweep(args: &SweepArgs) -> Result<(), Error> {
    let cfg = args.experiment.resolve()?;
    let axis: Axis = args.axis.parse()?;
    let summaries = sweep(&cfg, axis, &args.values)?;
    let rows = sweep_rows(axis, &args.values, &summaries);
    write_results(&rows, &args.out)?;
    for row in &rows {
        println!("{} = {}: regret {} ({})", axis, g17(row.value), g17(row.mean_regret), row.regime);
    }
    Ok(())
}

fn bounds(args: &BoundsArgs) -> Result<(), Error> {
    let partition = WindowPartition::uniform(args.width, args.horizon)?;
    let report = BoundReport::evaluate(&partition, args.arms, args.budget)?;
    println!("{report}");
    if args.csv {
        println!("{}", BoundReport::csv_header());
        println!("{}", report.csv_row());
    }
    Ok(())
}

fn slope(args: &SlopeArgs) -> Result<(), Error> {
    let rows = read_results(&args.input)?;
    let column = |row: &windowed_bandit::experiment::ResultRow, name: &str| {
        row.column(name).ok_or_else(|| Error::ConfigInvalid(format!("unknown numeric column {name:?}")))
    };
    let points = rows
        .iter()
        .map(|r| Ok((column(r, &args.x)?, column(r, &args.y)?)))
        .collect::<Result<Vec<_>, Error>>()?;
    let fit = fit_loglog_slope(&points)?;
    println!("slope:     {}", g17(fit.slope));
    println!("intercept: {}", g17(fit.intercept));
    println!("r_squared: {}", g17(fit.r_squared));
    Ok(())
}

fn main() -> ExitCode {
    // clap prints the offending flag plus usage and exits with status 2.
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Gen(a) => gen(a),
        Command::Run(a) => run(a),
        Command::Sweep(a) => run_sweep(a),
        Command::Bounds(a) => bounds(a),
        Command::Slope(a) => slope(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
