//! Ensemble-based active learning for multivariate calibration.
//!
//! Bootstrap committees of small feedforward networks predict a constituent
//! concentration (fat) from PCA-reduced NIR spectra. An inversion network maps
//! concentration to the committee's predicted disagreement, and the sequential
//! loop adds calibration samples where that disagreement is highest. Random and
//! space-filling selection are provided as baselines, together with a harness
//! that produces learning curves over repeated runs.
//!
//! Module map:
//!
//! * [`dataset`]: samples, CSV I/O and validation/training/buffer partitions
//! * [`pca`]: covariance PCA feature extraction
//! * [`neuralnet`]: feedforward networks, backpropagation and training
//! * [`ensemble`]: bootstrap committees and their disagreement
//! * [`active_learning`]: inversion model, selectors and the acquisition loop
//! * [`harness`]: repeated experiments, RMSE curves and CSV reports

pub mod active_learning;
pub mod dataset;
pub mod ensemble;
mod error;
pub mod harness;
pub mod neuralnet;
pub mod pca;
pub mod rng;

pub use error::{Error, Result};
