//! Bootstrap committees of prediction networks.
//!
//! Member `i` of an ensemble trained with seed `s` uses the derived seed
//! `derive_seed(s, i)` for its bootstrap resample, weight initialization and
//! holdout split, so members can be trained in any order (or in parallel)
//! with bit-identical results.

use rand::Rng as _;
use rayon::prelude::*;

use crate::error::ResultExt;
use crate::neuralnet::{init_network, train, Architecture, Network, TrainConfig};
use crate::rng::{self, derive_seed, stream};
use crate::{Error, Result};

/// How committee spread is reported.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Disagreement {
    /// Population standard deviation of member predictions.
    #[default]
    Std,
    /// Population variance of member predictions.
    Var,
}

impl std::str::FromStr for Disagreement {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "std" => Ok(Disagreement::Std),
            "var" => Ok(Disagreement::Var),
            other => Err(format!("unknown disagreement metric `{other}` (expected std or var)")),
        }
    }
}

impl std::fmt::Display for Disagreement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Disagreement::Std => "std",
            Disagreement::Var => "var",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnsemblePrediction {
    pub mean: f64,
    pub disagreement: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Ensemble {
    members: Vec<Network>,
    pca_epoch: u64,
}

impl Ensemble {
    pub fn new(members: Vec<Network>, pca_epoch: u64) -> Result<Self> {
        if members.len() < 2 {
            return Err(Error::Size(format!("an ensemble needs at least 2 members, got {}", members.len())));
        }
        let arch = members[0].architecture();
        if members.iter().any(|m| m.architecture() != arch) {
            return Err(Error::Invariant("ensemble members must share one architecture".into()));
        }
        Ok(Ensemble { members, pca_epoch })
    }

    pub fn members(&self) -> &[Network] {
        &self.members
    }

    pub fn size(&self) -> usize {
        self.members.len()
    }

    /// Identifier of the feature extraction the members were trained against.
    pub fn pca_epoch(&self) -> u64 {
        self.pca_epoch
    }

    pub fn with_pca_epoch(mut self, epoch: u64) -> Self {
        self.pca_epoch = epoch;
        self
    }

    /// Member mean and population standard deviation.
    pub fn predict(&self, x: &[f64]) -> Result<EnsemblePrediction> {
        self.predict_with(x, Disagreement::Std)
    }

    pub fn predict_with(&self, x: &[f64], metric: Disagreement) -> Result<EnsemblePrediction> {
        let outputs = self.members.iter().map(|m| m.forward(x).map(|y| y[0])).collect::<Result<Vec<f64>>>()?;
        let m = outputs.len() as f64;
        let mean = outputs.iter().sum::<f64>() / m;
        let var = outputs.iter().map(|y| (y - mean) * (y - mean)).sum::<f64>() / m;
        let disagreement = match metric {
            Disagreement::Std => var.sqrt(),
            Disagreement::Var => var,
        };
        Ok(EnsemblePrediction { mean, disagreement })
    }
}

/// `data.len()` uniform draws with replacement.
pub fn bootstrap_resample<T: Clone>(data: &[T], seed: u64) -> Result<Vec<T>> {
    if data.is_empty() {
        return Err(Error::Size("cannot resample an empty set".into()));
    }
    let mut rng = rng::rng(seed, stream::BOOTSTRAP);
    Ok((0..data.len()).map(|_| data[rng.gen_range(0..data.len())].clone()).collect())
}

/// Seeds used for the members of an ensemble trained with `seed`.
pub fn member_seeds(seed: u64, m: usize) -> Vec<u64> {
    (0..m as u64).map(|i| derive_seed(seed, i)).collect()
}

fn check_inputs(features: &[Vec<f64>], targets: &[f64], m: usize) -> Result<Vec<(Vec<f64>, Vec<f64>)>> {
    if features.len() != targets.len() {
        return Err(Error::dimension(features.len(), targets.len(), "target count"));
    }
    if features.len() < 4 {
        return Err(Error::Size(format!("ensemble training needs at least 4 samples, got {}", features.len())));
    }
    if m < 2 {
        return Err(Error::Size(format!("ensemble size must be at least 2, got {m}")));
    }
    Ok(features.iter().cloned().zip(targets.iter().map(|&t| vec![t])).collect())
}

fn train_member(
    data: &[(Vec<f64>, Vec<f64>)],
    arch: &Architecture,
    config: &TrainConfig,
    index: usize,
    seed: u64,
) -> Result<Network> {
    let resample = bootstrap_resample(data, seed)?;
    let config = TrainConfig { seed, ..config.clone() };
    train(&init_network(arch, seed), &resample, &config)
        .map(|(net, _)| net)
        .context(|| format!("ensemble member {index}"))
}

/// Trains `m` bootstrap members of the `k-7-3-1` prediction architecture in
/// parallel.
pub fn train_ensemble(
    features: &[Vec<f64>],
    targets: &[f64],
    m: usize,
    config: &TrainConfig,
    seed: u64,
) -> Result<Ensemble> {
    let data = check_inputs(features, targets, m)?;
    train_with_seeds(&data, &member_seeds(seed, m), config, true)
}

/// Same result as [`train_ensemble`], one member after another.
pub fn train_ensemble_sequential(
    features: &[Vec<f64>],
    targets: &[f64],
    m: usize,
    config: &TrainConfig,
    seed: u64,
) -> Result<Ensemble> {
    let data = check_inputs(features, targets, m)?;
    train_with_seeds(&data, &member_seeds(seed, m), config, false)
}

/// Trains one member per explicit seed.
pub fn train_ensemble_with_seeds(
    features: &[Vec<f64>],
    targets: &[f64],
    seeds: &[u64],
    config: &TrainConfig,
) -> Result<Ensemble> {
    let data = check_inputs(features, targets, seeds.len())?;
    train_with_seeds(&data, seeds, config, true)
}

fn train_with_seeds(
    data: &[(Vec<f64>, Vec<f64>)],
    seeds: &[u64],
    config: &TrainConfig,
    parallel: bool,
) -> Result<Ensemble> {
    let arch = Architecture::prediction(data[0].0.len());
    let members = if parallel {
        seeds
            .par_iter()
            .enumerate()
            .map(|(i, &s)| train_member(data, &arch, config, i, s))
            .collect::<Result<Vec<_>>>()?
    } else {
        seeds.iter().enumerate().map(|(i, &s)| train_member(data, &arch, config, i, s)).collect::<Result<Vec<_>>>()?
    };
    Ensemble::new(members, 0)
}
