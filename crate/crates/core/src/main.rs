use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use nircal::active_learning::{PcaRefit, Strategy};
use nircal::dataset::InitMethod;
use nircal::ensemble::Disagreement;
use nircal::harness::{
    average_curves, averaged_samples_to_target, read_curves, read_metadata, run_experiment, write_report,
    ExperimentConfig,
};
use nircal::neuralnet::TrainConfig;

#[derive(Parser)]
#[command(name = "nircal", version, about = "Ensemble-based active learning for NIR calibration")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run learning-curve experiments and write CSV reports.
    Run(RunArgs),
    /// Summarize a report directory: samples needed to reach the target RMSE.
    Report {
        #[arg(long = "in")]
        input: PathBuf,
        /// Overrides the target stored in metadata.txt.
        #[arg(long)]
        target_rmse: Option<f64>,
    },
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    data: PathBuf,
    #[arg(long, value_delimiter = ',', default_value = "active,random")]
    strategies: Vec<Strategy>,
    #[arg(long = "init-size", value_delimiter = ',', default_value = "80")]
    init_sizes: Vec<usize>,
    #[arg(long, default_value = "random")]
    init_method: InitMethod,
    #[arg(long, default_value_t = 5)]
    batch: usize,
    #[arg(long, default_value_t = 100)]
    ensemble: usize,
    #[arg(long, default_value_t = 5)]
    repeats: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 40)]
    val_size: usize,
    #[arg(long, default_value_t = 10)]
    pca_k: usize,
    #[arg(long, default_value = "each_iteration")]
    pca_refit: PcaRefit,
    #[arg(long, default_value = "std")]
    disagreement: Disagreement,
    #[arg(long, default_value_t = 3.5)]
    target_rmse: f64,
    /// End each run as soon as the target RMSE is reached.
    #[arg(long)]
    stop_at_target: bool,
    #[arg(long, default_value_t = TrainConfig::prediction().max_epochs)]
    epochs: usize,
    #[arg(long, default_value_t = TrainConfig::prediction().learning_rate)]
    learning_rate: f64,
    #[arg(long, default_value_t = TrainConfig::prediction().momentum)]
    momentum: f64,
    #[arg(long, default_value_t = TrainConfig::inversion().learning_rate)]
    inversion_learning_rate: f64,
    #[arg(long)]
    out: PathBuf,
}

impl RunArgs {
    fn config(&self) -> ExperimentConfig {
        let prediction = TrainConfig {
            max_epochs: self.epochs,
            learning_rate: self.learning_rate,
            momentum: self.momentum,
            ..TrainConfig::prediction()
        };
        let inversion = TrainConfig { learning_rate: self.inversion_learning_rate, ..TrainConfig::inversion() };
        ExperimentConfig {
            data_path: self.data.clone(),
            val_size: self.val_size,
            init_sizes: self.init_sizes.clone(),
            init_method: self.init_method,
            batch_size: self.batch,
            ensemble_size: self.ensemble,
            repeats: self.repeats,
            strategies: self.strategies.clone(),
            master_seed: self.seed,
            pca_k: self.pca_k,
            pca_refit: self.pca_refit,
            disagreement: self.disagreement,
            target_rmse: Some(self.target_rmse),
            stop_at_target: self.stop_at_target,
            prediction,
            inversion,
        }
    }
}

fn run(args: &RunArgs) -> nircal::Result<()> {
    let config = args.config();
    let curve = run_experiment(&config)?;
    write_report(&curve, &args.out)?;
    println!("wrote {} curve rows to {}", curve.rows.len(), args.out.display());
    Ok(())
}

fn report(input: &Path, target: Option<f64>) -> nircal::Result<()> {
    let rows = read_curves(input)?;
    let target = match target {
        Some(t) => t,
        None => read_metadata(input)?
            .iter()
            .find(|(k, _)| k == "target_rmse")
            .and_then(|(_, v)| v.parse().ok())
            .unwrap_or(3.5),
    };
    let averages = average_curves(&rows);
    let mut keys: Vec<(usize, Strategy)> = averages.iter().map(|a| (a.init_size, a.strategy)).collect();
    keys.dedup();

    println!("target RMSE {target}");
    println!(
        "{:>9}  {:<10} {:>7} {:>9} {:>11} {:>10}",
        "init_size", "strategy", "repeats", "final_n", "final_rmse", "to_target"
    );
    for (init_size, strategy) in keys {
        let last = averages.iter().rfind(|a| a.init_size == init_size && a.strategy == strategy).unwrap();
        let reached = averaged_samples_to_target(&averages, init_size, strategy, target)
            .map_or("never".to_string(), |n| n.to_string());
        println!(
            "{:>9}  {:<10} {:>7} {:>9} {:>11.4} {:>10}",
            init_size, strategy, last.repeats, last.n_train, last.mean, reached
        );
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Run(args) => run(args),
        Command::Report { input, target_rmse } => report(input, *target_rmse),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
