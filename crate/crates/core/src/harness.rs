//! Repeated learning-curve experiments and their CSV reports.
//!
//! One experiment fixes a validation split, then for each initial-set size
//! and repeat draws an initial calibration set and runs every requested
//! strategy from that identical starting partition. The output files are:
//!
//! * `curves.csv`: one row per curve point;
//! * `curves_avg.csv`: pointwise mean and population standard deviation of
//!   the RMSE over repeats, per initial size, strategy and training size;
//! * `selections.csv`: one row per added sample;
//! * `metadata.txt`: the resolved configuration and every seed.

use std::collections::BTreeMap;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::active_learning::{run_loop, LoopConfig, PcaRefit, Strategy};
use crate::dataset::{draw_initial, load_samples, split_validation, InitMethod, Partition, SampleSet};
use crate::ensemble::Disagreement;
use crate::error::ResultExt;
use crate::neuralnet::TrainConfig;
use crate::rng::derive_seed;
use crate::{Error, Result};

const SEED_VALIDATION: u64 = 0x7A11;
const SEED_REPEAT: u64 = 0x4E9E;

/// Root mean square error.
pub fn rmse(predicted: &[f64], actual: &[f64]) -> Result<f64> {
    if predicted.len() != actual.len() {
        return Err(Error::Size(format!("rmse of {} predictions against {} targets", predicted.len(), actual.len())));
    }
    if predicted.is_empty() {
        return Err(Error::Size("rmse of an empty set".into()));
    }
    let sum: f64 = predicted.iter().zip(actual).map(|(y, d)| (y - d) * (y - d)).sum();
    Ok((sum / predicted.len() as f64).sqrt())
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub data_path: PathBuf,
    pub val_size: usize,
    pub init_sizes: Vec<usize>,
    pub init_method: InitMethod,
    pub batch_size: usize,
    pub ensemble_size: usize,
    pub repeats: usize,
    pub strategies: Vec<Strategy>,
    pub master_seed: u64,
    pub pca_k: usize,
    pub pca_refit: PcaRefit,
    pub disagreement: Disagreement,
    /// RMSE threshold used by reports.
    pub target_rmse: Option<f64>,
    /// Also end each run once `target_rmse` is reached.
    pub stop_at_target: bool,
    pub prediction: TrainConfig,
    pub inversion: TrainConfig,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            data_path: PathBuf::from("data/tecator.csv"),
            val_size: 40,
            init_sizes: vec![20, 40, 80],
            init_method: InitMethod::Random,
            batch_size: 5,
            ensemble_size: 100,
            repeats: 5,
            strategies: vec![Strategy::Active, Strategy::Random],
            master_seed: 42,
            pca_k: 10,
            pca_refit: PcaRefit::EachIteration,
            disagreement: Disagreement::Std,
            target_rmse: Some(3.5),
            stop_at_target: false,
            prediction: TrainConfig::prediction(),
            inversion: TrainConfig::inversion(),
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self, dataset_size: usize) -> Result<()> {
        if self.repeats == 0 {
            return Err(Error::State("repeats must be at least 1".into()));
        }
        if self.strategies.is_empty() || self.init_sizes.is_empty() {
            return Err(Error::State("at least one strategy and one initial size are required".into()));
        }
        let largest = self.init_sizes.iter().copied().max().unwrap_or(0);
        if self.val_size + largest >= dataset_size {
            return Err(Error::Size(format!(
                "validation ({}) plus largest initial set ({largest}) must be below the dataset size ({dataset_size})",
                self.val_size
            )));
        }
        if self.ensemble_size < 2 {
            return Err(Error::Size("ensemble size must be at least 2".into()));
        }
        self.prediction.validate()?;
        self.inversion.validate()
    }

    fn loop_config(&self, seed: u64) -> LoopConfig {
        LoopConfig {
            n0: self.batch_size,
            ensemble_size: self.ensemble_size,
            prediction: self.prediction.clone(),
            inversion: self.inversion.clone(),
            pca_k: self.pca_k,
            pca_refit: self.pca_refit,
            disagreement: self.disagreement,
            target_rmse: if self.stop_at_target { self.target_rmse } else { None },
            seed,
        }
    }

    pub fn validation_seed(&self) -> u64 {
        derive_seed(self.master_seed, SEED_VALIDATION)
    }

    pub fn repeat_seed(&self, repeat: usize) -> u64 {
        derive_seed(derive_seed(self.master_seed, SEED_REPEAT), repeat as u64)
    }

    /// Seed of the initial draw for one initial size within a repeat.
    pub fn draw_seed(&self, init_size: usize, repeat: usize) -> u64 {
        derive_seed(self.repeat_seed(repeat), init_size as u64)
    }

    /// Seed of the acquisition loop, shared by all strategies of a run.
    pub fn loop_seed(&self, init_size: usize, repeat: usize) -> u64 {
        derive_seed(self.draw_seed(init_size, repeat), 1)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurveRow {
    pub init_size: usize,
    pub strategy: Strategy,
    pub repeat: usize,
    pub iteration: usize,
    pub n_train: usize,
    pub rmse_val: f64,
    pub chosen_ids: Vec<usize>,
    pub chosen_fats: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LearningCurve {
    /// Sorted by `(init_size, strategy, repeat, iteration)`.
    pub rows: Vec<CurveRow>,
    /// Ordered `key = value` pairs.
    pub metadata: Vec<(String, String)>,
}

impl LearningCurve {
    /// Rows of one `(init_size, strategy)` pair.
    pub fn rows_for(&self, init_size: usize, strategy: Strategy) -> impl Iterator<Item = &CurveRow> {
        self.rows.iter().filter(move |r| r.init_size == init_size && r.strategy == strategy)
    }
}

/// Starting partition of one `(init_size, repeat)` run.
pub fn initial_partition(
    config: &ExperimentConfig,
    samples: &SampleSet,
    init_size: usize,
    repeat: usize,
) -> Result<Partition> {
    let split = split_validation(samples, config.val_size, config.validation_seed())?;
    draw_initial(&split, init_size, config.init_method, config.draw_seed(init_size, repeat))
}

pub fn run_experiment(config: &ExperimentConfig) -> Result<LearningCurve> {
    let file = File::open(&config.data_path)
        .map_err(Error::from)
        .context(|| format!("opening {}", config.data_path.display()))?;
    let samples =
        load_samples(std::io::BufReader::new(file)).context(|| format!("reading {}", config.data_path.display()))?;
    run_experiment_on(config, &samples)
}

/// Runs every `(init_size, repeat, strategy)` combination on `samples`.
pub fn run_experiment_on(config: &ExperimentConfig, samples: &SampleSet) -> Result<LearningCurve> {
    config.validate(samples.len())?;
    let split = split_validation(samples, config.val_size, config.validation_seed())?;

    let mut starts = Vec::new();
    for &init_size in &config.init_sizes {
        for repeat in 0..config.repeats {
            let partition = draw_initial(&split, init_size, config.init_method, config.draw_seed(init_size, repeat))
                .context(|| format!("initial draw of {init_size} (repeat {repeat})"))?;
            starts.push((init_size, repeat, partition));
        }
    }
    let jobs: Vec<(usize, usize, &Partition, Strategy)> =
        starts.iter().flat_map(|(i, r, p)| config.strategies.iter().map(move |&s| (*i, *r, p, s))).collect();

    let runs = jobs
        .par_iter()
        .map(|&(init_size, repeat, partition, strategy)| {
            let loop_config = config.loop_config(config.loop_seed(init_size, repeat));
            let points = run_loop(partition, strategy, &loop_config)
                .context(|| format!("strategy {strategy}, initial size {init_size}, repeat {repeat}"))?;
            Ok(points
                .into_iter()
                .map(|p| CurveRow {
                    init_size,
                    strategy,
                    repeat,
                    iteration: p.iteration,
                    n_train: p.n_train,
                    rmse_val: p.rmse_val,
                    chosen_ids: p.chosen.iter().map(|c| c.0).collect(),
                    chosen_fats: p.chosen.iter().map(|c| c.1).collect(),
                })
                .collect::<Vec<_>>())
        })
        .collect::<Result<Vec<_>>>()?;

    let mut rows: Vec<CurveRow> = runs.into_iter().flatten().collect();
    rows.sort_by(|a, b| {
        (a.init_size, a.strategy, a.repeat, a.iteration).cmp(&(b.init_size, b.strategy, b.repeat, b.iteration))
    });

    Ok(LearningCurve { rows, metadata: metadata(config, samples, &split, &starts) })
}

fn join<T: ToString>(values: impl IntoIterator<Item = T>, sep: &str) -> String {
    values.into_iter().map(|v| v.to_string()).collect::<Vec<_>>().join(sep)
}

fn metadata(
    config: &ExperimentConfig,
    samples: &SampleSet,
    split: &Partition,
    starts: &[(usize, usize, Partition)],
) -> Vec<(String, String)> {
    let mut m: Vec<(String, String)> = Vec::new();
    let mut put = |k: &str, v: String| m.push((k.to_string(), v));
    put("version", env!("CARGO_PKG_VERSION").to_string());
    put("data_path", config.data_path.display().to_string());
    put("n_samples", samples.len().to_string());
    put("val_size", config.val_size.to_string());
    put("init_sizes", join(&config.init_sizes, ","));
    put("init_method", config.init_method.to_string());
    put("batch_size", config.batch_size.to_string());
    put("ensemble_size", config.ensemble_size.to_string());
    put("repeats", config.repeats.to_string());
    put("strategies", join(&config.strategies, ","));
    put("pca_k", config.pca_k.to_string());
    put("pca_refit", config.pca_refit.to_string());
    put("disagreement", config.disagreement.to_string());
    put("target_rmse", config.target_rmse.map_or("none".into(), |t| t.to_string()));
    put("stop_at_target", config.stop_at_target.to_string());
    for (name, t) in [("prediction", &config.prediction), ("inversion", &config.inversion)] {
        put(&format!("{name}.max_epochs"), t.max_epochs.to_string());
        put(&format!("{name}.learning_rate"), t.learning_rate.to_string());
        put(&format!("{name}.momentum"), t.momentum.to_string());
        put(&format!("{name}.early_stop_patience"), t.early_stop_patience.to_string());
        put(&format!("{name}.holdout_fraction"), t.holdout_fraction.to_string());
    }
    put("master_seed", config.master_seed.to_string());
    put("validation_seed", config.validation_seed().to_string());
    put("validation_ids", join(split.validation.ids(), ";"));
    for (init_size, repeat, partition) in starts {
        let key = format!("init{init_size}.repeat{repeat}");
        put(&format!("{key}.draw_seed"), config.draw_seed(*init_size, *repeat).to_string());
        put(&format!("{key}.loop_seed"), config.loop_seed(*init_size, *repeat).to_string());
        put(&format!("{key}.initial_ids"), join(partition.training.ids(), ";"));
    }
    m
}

/// Pointwise summary over repeats at one training-set size.
#[derive(Debug, Clone, PartialEq)]
pub struct AveragePoint {
    pub init_size: usize,
    pub strategy: Strategy,
    pub n_train: usize,
    pub repeats: usize,
    pub mean: f64,
    pub std: f64,
}

/// Pointwise mean and population standard deviation of `rmse_val` per
/// `(init_size, strategy, n_train)`.
pub fn average_curves(rows: &[CurveRow]) -> Vec<AveragePoint> {
    let mut groups: BTreeMap<(usize, Strategy, usize), Vec<f64>> = BTreeMap::new();
    for r in rows {
        groups.entry((r.init_size, r.strategy, r.n_train)).or_default().push(r.rmse_val);
    }
    groups
        .into_iter()
        .map(|((init_size, strategy, n_train), values)| {
            let n = values.len() as f64;
            let mean = values.iter().sum::<f64>() / n;
            let std = (values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n).sqrt();
            AveragePoint { init_size, strategy, n_train, repeats: values.len(), mean, std }
        })
        .collect()
}

/// Smallest training size whose RMSE is at or below `target`, scanning
/// `(n_train, rmse)` points in order.
pub fn samples_to_target(points: &[(usize, f64)], target: f64) -> Option<usize> {
    points.iter().find(|(_, r)| *r <= target).map(|(n, _)| *n)
}

/// [`samples_to_target`] on the averaged curve of one `(init_size, strategy)`.
pub fn averaged_samples_to_target(
    averages: &[AveragePoint],
    init_size: usize,
    strategy: Strategy,
    target: f64,
) -> Option<usize> {
    let points: Vec<(usize, f64)> = averages
        .iter()
        .filter(|a| a.init_size == init_size && a.strategy == strategy)
        .map(|a| (a.n_train, a.mean))
        .collect();
    samples_to_target(&points, target)
}

const CURVES_HEADER: [&str; 8] =
    ["init_size", "strategy", "repeat", "iteration", "n_train", "rmse_val", "chosen_ids", "chosen_fats"];

pub fn write_report(curve: &LearningCurve, out_dir: &Path) -> Result<()> {
    if curve.rows.is_empty() {
        return Err(Error::Size("cannot report an empty learning curve".into()));
    }
    fs::create_dir_all(out_dir).map_err(Error::from).context(|| format!("creating {}", out_dir.display()))?;
    let open = |name: &str| -> Result<BufWriter<File>> {
        let path = out_dir.join(name);
        File::create(&path).map(BufWriter::new).map_err(Error::from).context(|| format!("creating {}", path.display()))
    };

    let mut w = open("curves.csv")?;
    writeln!(w, "{}", CURVES_HEADER.join(","))?;
    for r in &curve.rows {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{}",
            r.init_size,
            r.strategy,
            r.repeat,
            r.iteration,
            r.n_train,
            r.rmse_val,
            join(&r.chosen_ids, ";"),
            join(&r.chosen_fats, ";")
        )?;
    }
    w.flush()?;

    let mut w = open("curves_avg.csv")?;
    writeln!(w, "init_size,strategy,n_train,repeats,rmse_mean,rmse_std")?;
    for a in average_curves(&curve.rows) {
        writeln!(w, "{},{},{},{},{},{}", a.init_size, a.strategy, a.n_train, a.repeats, a.mean, a.std)?;
    }
    w.flush()?;

    let mut w = open("selections.csv")?;
    writeln!(w, "init_size,strategy,repeat,iteration,order,id,fat")?;
    for r in &curve.rows {
        for (order, (id, fat)) in r.chosen_ids.iter().zip(&r.chosen_fats).enumerate() {
            writeln!(w, "{},{},{},{},{},{},{}", r.init_size, r.strategy, r.repeat, r.iteration, order, id, fat)?;
        }
    }
    w.flush()?;

    let mut w = open("metadata.txt")?;
    for (k, v) in &curve.metadata {
        writeln!(w, "{k} = {v}")?;
    }
    w.flush()?;
    Ok(())
}

/// Reads `curves.csv` back from a report directory.
pub fn read_curves(dir: &Path) -> Result<Vec<CurveRow>> {
    let path = dir.join("curves.csv");
    let mut reader =
        csv::Reader::from_path(&path).map_err(Error::from).context(|| format!("reading {}", path.display()))?;
    let mut rows = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record?;
        let row = i + 1;
        if record.len() != CURVES_HEADER.len() {
            return Err(Error::Parse {
                row,
                column: None,
                message: format!("expected {} fields", CURVES_HEADER.len()),
            });
        }
        let bad = |col: usize| Error::Parse {
            row,
            column: Some(CURVES_HEADER[col].into()),
            message: format!("cannot parse `{}`", &record[col]),
        };
        let int = |col: usize| record[col].parse::<usize>().map_err(|_| bad(col));
        let list = |col: usize| -> Result<Vec<String>> {
            Ok(if record[col].is_empty() { Vec::new() } else { record[col].split(';').map(String::from).collect() })
        };
        rows.push(CurveRow {
            init_size: int(0)?,
            strategy: record[1].parse().map_err(|_| bad(1))?,
            repeat: int(2)?,
            iteration: int(3)?,
            n_train: int(4)?,
            rmse_val: record[5].parse().map_err(|_| bad(5))?,
            chosen_ids: list(6)?.iter().map(|v| v.parse().map_err(|_| bad(6))).collect::<Result<_>>()?,
            chosen_fats: list(7)?.iter().map(|v| v.parse().map_err(|_| bad(7))).collect::<Result<_>>()?,
        });
    }
    Ok(rows)
}

/// Reads `metadata.txt` back as ordered pairs.
pub fn read_metadata(dir: &Path) -> Result<Vec<(String, String)>> {
    let path = dir.join("metadata.txt");
    let text = fs::read_to_string(&path).map_err(Error::from).context(|| format!("reading {}", path.display()))?;
    Ok(text.lines().filter_map(|l| l.split_once(" = ").map(|(k, v)| (k.to_string(), v.to_string()))).collect())
}
