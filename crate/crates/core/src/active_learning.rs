//! Sample selection and the sequential acquisition loop.
//!
//! Each iteration fits PCA features on the current calibration set, trains a
//! bootstrap committee, records its validation RMSE, and then picks the next
//! `n0` buffer samples with one of three strategies:
//!
//! * **active**: the committee's disagreement on the calibration samples is
//!   regressed on their fat content by a 1-2-1 inversion network; buffer
//!   samples whose fat value has the highest predicted disagreement win;
//! * **random**: uniform without replacement;
//! * **spacefill**: greedy max-min distance in fat.

use std::fmt;

use rand::seq::index;

use crate::dataset::{move_samples, Partition, SampleSet};
use crate::ensemble::{train_ensemble, Disagreement, Ensemble};
use crate::error::ResultExt;
use crate::harness::rmse;
use crate::neuralnet::{init_network, train, Architecture, Network, TrainConfig};
use crate::pca::{fit_pca, PcaModel};
use crate::rng::{self, derive_seed, stream};
use crate::{Error, Result};

/// Epoch cap of the inversion network.
pub const INVERSION_MAX_EPOCHS: usize = 20;

const SEED_ENSEMBLE: u64 = 0xE5;
const SEED_INVERSION: u64 = 0x1A;
const SEED_RANDOM: u64 = 0x5E;

/// Regression from fat content to predicted committee disagreement.
#[derive(Debug, Clone, PartialEq)]
pub struct InversionModel {
    network: Network,
}

impl InversionModel {
    pub fn new(network: Network) -> Result<Self> {
        if network.architecture() != &Architecture::inversion() {
            return Err(Error::Invariant(format!(
                "inversion network must be 1-2-1 tansig/linear, got {}",
                network.architecture()
            )));
        }
        Ok(InversionModel { network })
    }

    pub fn network(&self) -> &Network {
        &self.network
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Strategy {
    Active,
    Random,
    Spacefill,
}

impl Strategy {
    pub fn name(self) -> &'static str {
        match self {
            Strategy::Active => "active",
            Strategy::Random => "random",
            Strategy::Spacefill => "spacefill",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "active" => Ok(Strategy::Active),
            "random" => Ok(Strategy::Random),
            "spacefill" => Ok(Strategy::Spacefill),
            other => Err(format!("unknown strategy `{other}` (expected active, random or spacefill)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SelectionResult {
    /// Chosen sample ids in selection order.
    pub chosen_ids: Vec<usize>,
    /// Score of each candidate, in candidate order; `None` for random picks.
    pub scores: Option<Vec<f64>>,
}

impl SelectionResult {
    fn empty() -> Self {
        SelectionResult { chosen_ids: Vec::new(), scores: None }
    }
}

/// Fits the inversion network on `(fat, disagreement)` pairs. The epoch
/// budget is capped at [`INVERSION_MAX_EPOCHS`].
pub fn train_inversion(pairs: &[(f64, f64)], config: &TrainConfig) -> Result<InversionModel> {
    if pairs.len() < 4 {
        return Err(Error::Size(format!("inversion training needs at least 4 pairs, got {}", pairs.len())));
    }
    if let Some((f, d)) = pairs.iter().find(|(f, d)| !f.is_finite() || !d.is_finite() || *d < 0.0) {
        return Err(Error::Numerical(format!("invalid inversion pair ({f}, {d})")));
    }
    let data: Vec<(Vec<f64>, Vec<f64>)> = pairs.iter().map(|&(f, d)| (vec![f], vec![d])).collect();
    let config = TrainConfig { max_epochs: config.max_epochs.min(INVERSION_MAX_EPOCHS), ..config.clone() };
    let (network, _) = train(&init_network(&Architecture::inversion(), config.seed), &data, &config)?;
    InversionModel::new(network)
}

pub fn predict_uncertainty(model: &InversionModel, fats: &[f64]) -> Result<Vec<f64>> {
    fats.iter()
        .map(|&f| {
            if !f.is_finite() {
                return Err(Error::Numerical(format!("fat value {f} is not finite")));
            }
            model.network.forward(&[f]).map(|y| y[0])
        })
        .collect()
}

/// Ids of the `k` highest scores; ties go to the lower id.
pub fn top_k(ids: &[usize], scores: &[f64], k: usize) -> Vec<usize> {
    let mut order: Vec<usize> = (0..ids.len()).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]).then(ids[a].cmp(&ids[b])));
    order.into_iter().take(k).map(|i| ids[i]).collect()
}

/// Picks the `n0` candidates whose fat value has the highest predicted
/// disagreement.
pub fn select_active(model: &InversionModel, candidates: &SampleSet, n0: usize) -> Result<SelectionResult> {
    check_batch(n0)?;
    if candidates.is_empty() {
        return Ok(SelectionResult::empty());
    }
    let scores = predict_uncertainty(model, &candidates.fats())?;
    let chosen_ids = top_k(&candidates.ids(), &scores, n0);
    Ok(SelectionResult { chosen_ids, scores: Some(scores) })
}

pub fn select_random(candidates: &SampleSet, n0: usize, seed: u64) -> Result<SelectionResult> {
    check_batch(n0)?;
    let n = n0.min(candidates.len());
    let mut rng = rng::rng(seed, stream::SELECT);
    let ids = candidates.ids();
    let chosen_ids = index::sample(&mut rng, ids.len(), n).into_iter().map(|i| ids[i]).collect();
    Ok(SelectionResult { chosen_ids, scores: None })
}

/// Greedy max-min selection in fat: each pick maximizes the distance to the
/// nearest training or already-picked fat value. Scores are the distances
/// before the first pick.
pub fn select_spacefill(training: &SampleSet, candidates: &SampleSet, n0: usize) -> Result<SelectionResult> {
    check_batch(n0)?;
    if training.is_empty() {
        return Err(Error::State("space-filling selection needs a non-empty training set".into()));
    }
    if candidates.is_empty() {
        return Ok(SelectionResult::empty());
    }
    let fats = candidates.fats();
    let ids = candidates.ids();
    let mut distance: Vec<f64> =
        fats.iter().map(|f| training.iter().map(|t| (f - t.fat).abs()).fold(f64::INFINITY, f64::min)).collect();
    let scores = distance.clone();
    let mut taken = vec![false; fats.len()];
    let mut chosen_ids = Vec::with_capacity(n0.min(fats.len()));
    for _ in 0..n0.min(fats.len()) {
        let best = (0..fats.len())
            .filter(|&i| !taken[i])
            .max_by(|&a, &b| distance[a].total_cmp(&distance[b]).then(ids[b].cmp(&ids[a])))
            .expect("an untaken candidate remains");
        taken[best] = true;
        chosen_ids.push(ids[best]);
        for (d, f) in distance.iter_mut().zip(&fats) {
            *d = d.min((f - fats[best]).abs());
        }
    }
    Ok(SelectionResult { chosen_ids, scores: Some(scores) })
}

/// Equispaced concentration grid for deployment without a sample pool.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FatGrid {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl Default for FatGrid {
    fn default() -> Self {
        FatGrid { start: 0.0, stop: 100.0, step: 0.5 }
    }
}

impl FatGrid {
    pub fn values(&self) -> Vec<f64> {
        if self.step.is_nan() || self.step <= 0.0 || self.stop < self.start {
            return Vec::new();
        }
        let n = ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1;
        (0..n).map(|i| self.start + i as f64 * self.step).collect()
    }
}

/// Deployment mode: the `n0` grid concentrations with the highest predicted
/// disagreement, as `(fat, predicted disagreement)` in descending order.
pub fn select_concentrations(model: &InversionModel, grid: &FatGrid, n0: usize) -> Result<Vec<(f64, f64)>> {
    check_batch(n0)?;
    let fats = grid.values();
    let scores = predict_uncertainty(model, &fats)?;
    let positions: Vec<usize> = (0..fats.len()).collect();
    Ok(top_k(&positions, &scores, n0).into_iter().map(|i| (fats[i], scores[i])).collect())
}

fn check_batch(n0: usize) -> Result<()> {
    if n0 == 0 {
        return Err(Error::Size("batch size n0 must be at least 1".into()));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PcaRefit {
    #[default]
    EachIteration,
    InitialOnly,
}

impl std::str::FromStr for PcaRefit {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "each_iteration" => Ok(PcaRefit::EachIteration),
            "initial_only" => Ok(PcaRefit::InitialOnly),
            other => Err(format!("unknown PCA refit mode `{other}` (expected each_iteration or initial_only)")),
        }
    }
}

impl fmt::Display for PcaRefit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PcaRefit::EachIteration => "each_iteration",
            PcaRefit::InitialOnly => "initial_only",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LoopConfig {
    pub n0: usize,
    pub ensemble_size: usize,
    pub prediction: TrainConfig,
    pub inversion: TrainConfig,
    pub pca_k: usize,
    pub pca_refit: PcaRefit,
    pub disagreement: Disagreement,
    /// Stop once the validation RMSE is at or below this value.
    pub target_rmse: Option<f64>,
    pub seed: u64,
}

impl Default for LoopConfig {
    fn default() -> Self {
        LoopConfig {
            n0: 5,
            ensemble_size: 100,
            prediction: TrainConfig::prediction(),
            inversion: TrainConfig::inversion(),
            pca_k: 10,
            pca_refit: PcaRefit::EachIteration,
            disagreement: Disagreement::Std,
            target_rmse: None,
            seed: 0,
        }
    }
}

/// One point of a learning curve.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvePoint {
    /// 0 for the initial calibration set.
    pub iteration: usize,
    pub n_train: usize,
    pub rmse_val: f64,
    /// `(id, fat)` of the samples added to reach this point.
    pub chosen: Vec<(usize, f64)>,
}

fn features(pca: &PcaModel, set: &SampleSet) -> Result<Vec<Vec<f64>>> {
    set.iter().map(|s| pca.features(&s.spectrum)).collect()
}

/// Runs the acquisition loop until the buffer is exhausted or the target RMSE
/// is met.
pub fn run_loop(partition: &Partition, strategy: Strategy, config: &LoopConfig) -> Result<Vec<CurvePoint>> {
    partition.check()?;
    if partition.training.is_empty() {
        return Err(Error::State("the loop needs an initial calibration set".into()));
    }
    if partition.validation.is_empty() {
        return Err(Error::State("the loop needs a non-empty validation set".into()));
    }
    check_batch(config.n0)?;

    let ensemble_seed = derive_seed(config.seed, SEED_ENSEMBLE);
    let inversion_seed = derive_seed(config.seed, SEED_INVERSION);
    let random_seed = derive_seed(config.seed, SEED_RANDOM);

    let mut partition = partition.clone();
    let mut fixed_pca: Option<PcaModel> = None;
    let mut chosen: Vec<(usize, f64)> = Vec::new();
    let mut curve = Vec::new();

    for iteration in 0usize.. {
        let mut step = || -> Result<Option<Vec<usize>>> {
            let training = &partition.training;
            let pca = match (config.pca_refit, &fixed_pca) {
                (PcaRefit::InitialOnly, Some(p)) => p.clone(),
                _ => fit_pca(&training.spectra(), config.pca_k)?,
            };
            if config.pca_refit == PcaRefit::InitialOnly && fixed_pca.is_none() {
                fixed_pca = Some(pca.clone());
            }
            let train_x = features(&pca, training)?;
            let train_y = training.fats();
            let ensemble: Ensemble = train_ensemble(
                &train_x,
                &train_y,
                config.ensemble_size,
                &config.prediction,
                derive_seed(ensemble_seed, iteration as u64),
            )?
            .with_pca_epoch(iteration as u64);

            let val_x = features(&pca, &partition.validation)?;
            let predicted = val_x.iter().map(|x| ensemble.predict(x).map(|p| p.mean)).collect::<Result<Vec<_>>>()?;
            let rmse_val = rmse(&predicted, &partition.validation.fats())?;
            curve.push(CurvePoint {
                iteration,
                n_train: training.len(),
                rmse_val,
                chosen: std::mem::take(&mut chosen),
            });

            if partition.buffer.is_empty() || config.target_rmse.is_some_and(|t| rmse_val <= t) {
                return Ok(None);
            }

            let selection = match strategy {
                Strategy::Active => {
                    let pairs = train_x
                        .iter()
                        .zip(&train_y)
                        .map(|(x, &fat)| ensemble.predict_with(x, config.disagreement).map(|p| (fat, p.disagreement)))
                        .collect::<Result<Vec<_>>>()?;
                    let inversion_config =
                        TrainConfig { seed: derive_seed(inversion_seed, iteration as u64), ..config.inversion.clone() };
                    let model = train_inversion(&pairs, &inversion_config)?;
                    select_active(&model, &partition.buffer, config.n0)?
                }
                Strategy::Random => {
                    select_random(&partition.buffer, config.n0, derive_seed(random_seed, iteration as u64))?
                }
                Strategy::Spacefill => select_spacefill(training, &partition.buffer, config.n0)?,
            };
            Ok(Some(selection.chosen_ids))
        };

        let Some(ids) = step().context(|| format!("iteration {iteration}"))? else { break };
        chosen = ids
            .iter()
            .map(|&id| (id, partition.buffer.iter().find(|s| s.id == id).map_or(f64::NAN, |s| s.fat)))
            .collect();
        partition = move_samples(&partition, &ids).context(|| format!("iteration {iteration}"))?;
    }
    Ok(curve)
}
