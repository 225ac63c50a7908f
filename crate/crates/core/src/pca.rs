//! Principal component analysis of spectra.
//!
//! Components are the leading eigenvectors of the sample covariance (divisor
//! `n - 1`) of the mean-centered spectra. Each component is oriented so that
//! its largest-magnitude entry is positive.
//!
//! Besides the raw scores returned by [`PcaModel::transform`], the model
//! carries a per-coordinate scale (the score standard deviation over the
//! fitting set) so that [`PcaModel::features`] yields zero-mean, unit-variance
//! inputs for the networks.

use std::io::Write;

use nalgebra::{DMatrix, SymmetricEigen};

use crate::{Error, Result};

/// Sweeps allowed for the symmetric eigen-solver.
pub const MAX_EIGEN_ITERATIONS: usize = 10_000;

#[derive(Debug, Clone, PartialEq)]
pub struct PcaModel {
    mean: Vec<f64>,
    /// Row-major `k × dim`.
    components: Vec<Vec<f64>>,
    explained_variance: Vec<f64>,
    score_scale: Vec<f64>,
}

impl PcaModel {
    pub fn k(&self) -> usize {
        self.components.len()
    }

    pub fn dim(&self) -> usize {
        self.mean.len()
    }

    pub fn mean(&self) -> &[f64] {
        &self.mean
    }

    pub fn components(&self) -> &[Vec<f64>] {
        &self.components
    }

    pub fn explained_variance(&self) -> &[f64] {
        &self.explained_variance
    }

    /// PC scores `components · (spectrum − mean)`.
    pub fn transform(&self, spectrum: &[f64]) -> Result<Vec<f64>> {
        if spectrum.len() != self.dim() {
            return Err(Error::dimension(self.dim(), spectrum.len(), "spectrum length"));
        }
        if spectrum.iter().any(|v| !v.is_finite()) {
            return Err(Error::Numerical("spectrum has non-finite entries".into()));
        }
        Ok(self
            .components
            .iter()
            .map(|row| row.iter().zip(spectrum.iter().zip(&self.mean)).map(|(c, (x, m))| c * (x - m)).sum())
            .collect())
    }

    /// Standardized scores: [`transform`](Self::transform) divided by the
    /// fitting-set score standard deviation.
    pub fn features(&self, spectrum: &[f64]) -> Result<Vec<f64>> {
        let mut scores = self.transform(spectrum)?;
        for (s, scale) in scores.iter_mut().zip(&self.score_scale) {
            *s /= scale;
        }
        Ok(scores)
    }

    /// Maps scores back to spectrum space: `mean + componentsᵀ · scores`.
    pub fn reconstruct(&self, scores: &[f64]) -> Result<Vec<f64>> {
        if scores.len() != self.k() {
            return Err(Error::dimension(self.k(), scores.len(), "score length"));
        }
        let mut out = self.mean.clone();
        for (row, s) in self.components.iter().zip(scores) {
            for (o, c) in out.iter_mut().zip(row) {
                *o += c * s;
            }
        }
        Ok(out)
    }

    /// Debug dump: mean row, one row per component, then the explained
    /// variances.
    pub fn write_csv<W: Write>(&self, mut sink: W) -> Result<()> {
        let line = |v: &[f64]| v.iter().map(|x| format!("{x:.17e}")).collect::<Vec<_>>().join(",");
        writeln!(sink, "{}", line(&self.mean))?;
        for row in &self.components {
            writeln!(sink, "{}", line(row))?;
        }
        writeln!(sink, "{}", line(&self.explained_variance))?;
        Ok(())
    }
}

/// Fits a `k`-component PCA to `spectra`.
pub fn fit_pca<S: AsRef<[f64]>>(spectra: &[S], k: usize) -> Result<PcaModel> {
    let n = spectra.len();
    if n < 2 {
        return Err(Error::Dimension(format!("PCA needs at least 2 spectra, got {n}")));
    }
    let dim = spectra[0].as_ref().len();
    if let Some(bad) = spectra.iter().position(|s| s.as_ref().len() != dim) {
        return Err(Error::Dimension(format!("spectrum {bad} has a different length than spectrum 0")));
    }
    if k == 0 || k > dim.min(n - 1) {
        return Err(Error::Dimension(format!(
            "k = {k} must lie in 1..={} for {n} spectra of length {dim}",
            dim.min(n - 1)
        )));
    }

    let mut mean = vec![0.0; dim];
    for s in spectra {
        for (m, x) in mean.iter_mut().zip(s.as_ref()) {
            *m += x;
        }
    }
    mean.iter_mut().for_each(|m| *m /= n as f64);

    let centered = DMatrix::from_fn(n, dim, |i, j| spectra[i].as_ref()[j] - mean[j]);
    let covariance = centered.tr_mul(&centered) / (n - 1) as f64;

    let eigen = SymmetricEigen::try_new(covariance, f64::EPSILON, MAX_EIGEN_ITERATIONS).ok_or_else(|| {
        Error::Numerical(format!(
            "covariance eigen-decomposition did not converge within {MAX_EIGEN_ITERATIONS} iterations"
        ))
    })?;

    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| eigen.eigenvalues[b].total_cmp(&eigen.eigenvalues[a]).then(a.cmp(&b)));

    let mut components = Vec::with_capacity(k);
    let mut explained_variance = Vec::with_capacity(k);
    for &j in order.iter().take(k) {
        let mut row: Vec<f64> = eigen.eigenvectors.column(j).iter().copied().collect();
        let pivot = row
            .iter()
            .copied()
            .enumerate()
            .max_by(|(ia, a), (ib, b)| a.abs().total_cmp(&b.abs()).then(ib.cmp(ia)))
            .map(|(_, v)| v)
            .unwrap_or(1.0);
        if pivot < 0.0 {
            row.iter_mut().for_each(|v| *v = -*v);
        }
        components.push(row);
        explained_variance.push(eigen.eigenvalues[j].max(0.0));
    }

    let score_scale = explained_variance.iter().map(|&v| if v.sqrt() > 1e-12 { v.sqrt() } else { 1.0 }).collect();

    Ok(PcaModel { mean, components, explained_variance, score_scale })
}
