//! Per-class Gaussian mixture classifier trained by expectation
//! maximization.
//!
//! One mixture is fitted per posture class; prediction takes the argmax of
//! log prior plus mixture log likelihood. Covariances can be constrained to
//! spherical, diagonal, tied or full form. Every fit records its
//! per-iteration log likelihood so the non-decreasing EM objective can be
//! checked from the outside.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::eval::ConfusionMatrix;
use crate::numeric::{derive_seed, logsumexp};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CovarianceKind {
    Spherical,
    Diagonal,
    Tied,
    Full,
}

impl CovarianceKind {
    pub fn name(&self) -> &'static str {
        match self {
            CovarianceKind::Spherical => "spherical",
            CovarianceKind::Diagonal => "diagonal",
            CovarianceKind::Tied => "tied",
            CovarianceKind::Full => "full",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "spherical" => CovarianceKind::Spherical,
            "diagonal" => CovarianceKind::Diagonal,
            "tied" => CovarianceKind::Tied,
            "full" => CovarianceKind::Full,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GmmConfig {
    /// Mixture components per class.
    pub components: usize,
    /// When set, the component count is chosen per class from
    /// 1..=max_components by the Bayesian information criterion.
    pub max_components: Option<usize>,
    pub covariance: CovarianceKind,
    pub max_iter: usize,
    /// Relative log-likelihood improvement below which EM stops.
    pub rel_tol: f64,
    /// Ridge added to every covariance estimate.
    pub reg_eps: f64,
    pub seed: u64,
}

impl Default for GmmConfig {
    fn default() -> Self {
        Self {
            components: 1,
            max_components: None,
            covariance: CovarianceKind::Full,
            max_iter: 100_000,
            rel_tol: 1e-8,
            reg_eps: 1e-6,
            seed: 0,
        }
    }
}

/// One mixture component in plain storage form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaussianComponent {
    pub weight: f64,
    pub mean: Vec<f64>,
    /// Row-major d x d covariance.
    pub covariance: Vec<f64>,
}

/// Component prepared for scoring: Cholesky factor and log determinant.
#[derive(Debug, Clone)]
struct Prepared {
    log_weight: f64,
    mean: DVector<f64>,
    chol_lower: DMatrix<f64>,
    log_det: f64,
}

impl Prepared {
    fn log_pdf(&self, x: &DVector<f64>) -> f64 {
        let d = self.mean.len() as f64;
        let diff = x - &self.mean;
        let z = self
            .chol_lower
            .solve_lower_triangular(&diff)
            .expect("cholesky factor is invertible");
        let maha = z.norm_squared();
        -0.5 * (d * (2.0 * std::f64::consts::PI).ln() + self.log_det + maha)
    }
}

#[derive(Debug, Clone)]
pub struct GmmClassifier {
    classes: Vec<String>,
    priors: Vec<f64>,
    dim: usize,
    config: GmmConfig,
    mixtures: Vec<Vec<GaussianComponent>>,
    prepared: Vec<Vec<Prepared>>,
    /// Per-class EM log-likelihood histories from the winning fit.
    pub traces: Vec<Vec<f64>>,
}

impl GmmClassifier {
    /// Fits one mixture per class. Classes are taken in sorted order; the
    /// per-class seed derives deterministically from the config seed.
    pub fn fit(features: &[Vec<f64>], labels: &[String], config: &GmmConfig) -> Result<Self> {
        if features.len() != labels.len() {
            return Err(Error::InvalidParameter(format!(
                "{} feature rows but {} labels",
                features.len(),
                labels.len()
            )));
        }
        if features.is_empty() {
            return Err(Error::InvalidParameter("empty training set".into()));
        }
        if config.components == 0 {
            return Err(Error::InvalidParameter("components must be >= 1".into()));
        }
        let dim = features[0].len();
        if dim == 0 {
            return Err(Error::InvalidParameter("zero feature dimension".into()));
        }
        for f in features {
            if f.len() != dim {
                return Err(Error::Dimension {
                    expected: dim,
                    got: f.len(),
                });
            }
        }

        let mut by_class: BTreeMap<&str, Vec<DVector<f64>>> = BTreeMap::new();
        for (x, y) in features.iter().zip(labels) {
            by_class
                .entry(y.as_str())
                .or_default()
                .push(DVector::from_column_slice(x));
        }

        let n_total = features.len() as f64;
        let mut classes = Vec::new();
        let mut priors = Vec::new();
        let mut mixtures = Vec::new();
        let mut traces = Vec::new();
        for (idx, (class, data)) in by_class.iter().enumerate() {
            let seed = derive_seed(config.seed, idx as u64);
            let (components, trace) = fit_class_mixture(class, data, dim, config, seed)?;
            classes.push(class.to_string());
            priors.push(data.len() as f64 / n_total);
            mixtures.push(components);
            traces.push(trace);
        }

        let prepared = prepare_all(&mixtures, config.reg_eps)?;
        Ok(Self {
            classes,
            priors,
            dim,
            config: *config,
            mixtures,
            prepared,
            traces,
        })
    }

    /// Rebuilds a classifier from stored parts (model file loading).
    pub fn from_parts(
        classes: Vec<String>,
        priors: Vec<f64>,
        dim: usize,
        config: GmmConfig,
        mixtures: Vec<Vec<GaussianComponent>>,
    ) -> Result<Self> {
        if classes.len() != priors.len() || classes.len() != mixtures.len() {
            return Err(Error::Model("class/prior/mixture count mismatch".into()));
        }
        for mix in &mixtures {
            for c in mix {
                if c.mean.len() != dim || c.covariance.len() != dim * dim {
                    return Err(Error::Model("component dimension mismatch".into()));
                }
            }
        }
        let prepared = prepare_all(&mixtures, config.reg_eps)?;
        Ok(Self {
            classes,
            priors,
            dim,
            config,
            mixtures,
            prepared,
            traces: Vec::new(),
        })
    }

    pub fn classes(&self) -> &[String] {
        &self.classes
    }

    pub fn priors(&self) -> &[f64] {
        &self.priors
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn config(&self) -> &GmmConfig {
        &self.config
    }

    pub fn mixtures(&self) -> &[Vec<GaussianComponent>] {
        &self.mixtures
    }

    /// Mixture log density of `x` under one class.
    pub fn log_likelihood(&self, class: &str, x: &[f64]) -> Result<f64> {
        let idx = self
            .classes
            .iter()
            .position(|c| c == class)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown class {class}")))?;
        self.check_dim(x)?;
        let xv = DVector::from_column_slice(x);
        Ok(self.mixture_log_pdf(idx, &xv))
    }

    /// Predicted class and the per-class scores (log prior + log likelihood)
    /// in class order. Ties go to the lowest class id.
    pub fn predict(&self, x: &[f64]) -> Result<(String, Vec<f64>)> {
        self.check_dim(x)?;
        let xv = DVector::from_column_slice(x);
        let scores: Vec<f64> = (0..self.classes.len())
            .map(|i| self.priors[i].ln() + self.mixture_log_pdf(i, &xv))
            .collect();
        let best = argmax_first(&scores);
        Ok((self.classes[best].clone(), scores))
    }

    pub fn evaluate(&self, features: &[Vec<f64>], labels: &[String]) -> Result<ConfusionMatrix> {
        let mut pairs = Vec::with_capacity(features.len());
        for (x, y) in features.iter().zip(labels) {
            let (pred, _) = self.predict(x)?;
            pairs.push((y.clone(), pred));
        }
        Ok(ConfusionMatrix::from_pairs(pairs))
    }

    fn mixture_log_pdf(&self, class_idx: usize, x: &DVector<f64>) -> f64 {
        let terms: Vec<f64> = self.prepared[class_idx]
            .iter()
            .map(|p| p.log_weight + p.log_pdf(x))
            .collect();
        logsumexp(&terms)
    }

    fn check_dim(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim {
            return Err(Error::Dimension {
                expected: self.dim,
                got: x.len(),
            });
        }
        Ok(())
    }
}

/// First index of the maximum value (lowest id wins ties).
pub(crate) fn argmax_first(scores: &[f64]) -> usize {
    let mut best = 0;
    for (i, &s) in scores.iter().enumerate().skip(1) {
        if s > scores[best] {
            best = i;
        }
    }
    best
}

fn prepare_all(
    mixtures: &[Vec<GaussianComponent>],
    reg_eps: f64,
) -> Result<Vec<Vec<Prepared>>> {
    mixtures
        .iter()
        .map(|mix| mix.iter().map(|c| prepare(c, reg_eps)).collect())
        .collect()
}

fn prepare(component: &GaussianComponent, reg_eps: f64) -> Result<Prepared> {
    let d = component.mean.len();
    let cov = DMatrix::from_row_slice(d, d, &component.covariance);
    // escalate jitter only if the stored covariance is numerically indefinite
    let mut jitter = 0.0;
    for _ in 0..8 {
        let attempt = if jitter == 0.0 {
            cov.clone()
        } else {
            &cov + DMatrix::identity(d, d) * jitter
        };
        if let Some(chol) = attempt.clone().cholesky() {
            let lower = chol.l();
            let log_det = 2.0 * lower.diagonal().iter().map(|v| v.ln()).sum::<f64>();
            return Ok(Prepared {
                log_weight: component.weight.ln(),
                mean: DVector::from_column_slice(&component.mean),
                chol_lower: lower,
                log_det,
            });
        }
        jitter = if jitter == 0.0 { reg_eps } else { jitter * 10.0 };
    }
    Err(Error::Numeric(
        "covariance matrix is not positive definite".into(),
    ))
}

/// Fits the mixture for one class, choosing the component count by BIC when
/// configured. Returns the components and the EM log-likelihood trace.
fn fit_class_mixture(
    class: &str,
    data: &[DVector<f64>],
    dim: usize,
    config: &GmmConfig,
    seed: u64,
) -> Result<(Vec<GaussianComponent>, Vec<f64>)> {
    let n = data.len();
    let candidates: Vec<usize> = match config.max_components {
        Some(max) => (1..=max.max(1)).filter(|k| k * (dim + 1) <= n).collect(),
        None => vec![config.components],
    };
    if candidates.is_empty() || n < candidates[0] * (dim + 1) {
        return Err(Error::InsufficientSamples {
            class: class.to_string(),
            got: n,
            required: candidates.first().copied().unwrap_or(config.components) * (dim + 1),
        });
    }

    let mut best: Option<(f64, Vec<GaussianComponent>, Vec<f64>)> = None;
    for (attempt, &k) in candidates.iter().enumerate() {
        let rng_seed = derive_seed(seed, attempt as u64);
        let (components, trace) = fit_mixture_em(data, dim, k, config, rng_seed)?;
        let ll = *trace.last().expect("em records at least one iteration");
        let bic = -2.0 * ll + parameter_count(k, dim, config.covariance) * (n as f64).ln();
        let better = match &best {
            Some((best_bic, _, _)) => bic < *best_bic,
            None => true,
        };
        if better {
            best = Some((bic, components, trace));
        }
    }
    let (_, components, trace) = best.expect("at least one candidate fitted");
    Ok((components, trace))
}

fn parameter_count(k: usize, d: usize, kind: CovarianceKind) -> f64 {
    let cov = match kind {
        CovarianceKind::Full => k * d * (d + 1) / 2,
        CovarianceKind::Diagonal => k * d,
        CovarianceKind::Spherical => k,
        CovarianceKind::Tied => d * (d + 1) / 2,
    };
    ((k - 1) + k * d + cov) as f64
}

fn fit_mixture_em(
    data: &[DVector<f64>],
    dim: usize,
    k: usize,
    config: &GmmConfig,
    seed: u64,
) -> Result<(Vec<GaussianComponent>, Vec<f64>)> {
    let n = data.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut means = seed_means_kmeanspp(data, k, &mut rng);
    let mut weights = vec![1.0 / k as f64; k];
    let shared = shaped_covariance(&pooled_scatter(data, &sample_mean(data, dim)), config);
    let mut covs = vec![shared; k];

    let mut prepared = build_prepared(&weights, &means, &covs, config.reg_eps)?;
    let mut trace = Vec::new();
    let mut resp = vec![vec![0.0f64; k]; n];

    for _ in 0..config.max_iter.max(1) {
        // E step
        let mut total_ll = 0.0;
        for (i, x) in data.iter().enumerate() {
            let terms: Vec<f64> = prepared.iter().map(|p| p.log_weight + p.log_pdf(x)).collect();
            let ll_i = logsumexp(&terms);
            total_ll += ll_i;
            for j in 0..k {
                resp[i][j] = (terms[j] - ll_i).exp();
            }
        }
        let converged = trace.last().is_some_and(|&prev: &f64| {
            (total_ll - prev).abs() <= config.rel_tol * total_ll.abs().max(1.0)
        });
        trace.push(total_ll);
        if converged {
            break;
        }

        // M step
        for j in 0..k {
            let nk: f64 = (0..n).map(|i| resp[i][j]).sum();
            if nk < 1e-10 {
                continue; // starved component keeps its parameters
            }
            weights[j] = nk / n as f64;
            let mut mean = DVector::zeros(dim);
            for (i, x) in data.iter().enumerate() {
                mean += x * resp[i][j];
            }
            mean /= nk;
            means[j] = mean;
        }
        match config.covariance {
            CovarianceKind::Tied => {
                let mut scatter = DMatrix::zeros(dim, dim);
                for (i, x) in data.iter().enumerate() {
                    for j in 0..k {
                        let diff = x - &means[j];
                        scatter += &diff * diff.transpose() * resp[i][j];
                    }
                }
                scatter /= n as f64;
                let cov = shaped_covariance(&scatter, config);
                covs = vec![cov; k];
            }
            _ => {
                for j in 0..k {
                    let nk: f64 = (0..n).map(|i| resp[i][j]).sum();
                    if nk < 1e-10 {
                        continue;
                    }
                    let mut scatter = DMatrix::zeros(dim, dim);
                    for (i, x) in data.iter().enumerate() {
                        let diff = x - &means[j];
                        scatter += &diff * diff.transpose() * resp[i][j];
                    }
                    scatter /= nk;
                    covs[j] = shaped_covariance(&scatter, config);
                }
            }
        }
        prepared = build_prepared(&weights, &means, &covs, config.reg_eps)?;
    }

    let components = (0..k)
        .map(|j| GaussianComponent {
            weight: weights[j],
            mean: means[j].iter().copied().collect(),
            covariance: covs[j].iter().copied().collect::<Vec<f64>>(),
        })
        .collect::<Vec<_>>();
    // nalgebra iterates column-major; covariances are symmetric so row-major
    // storage comes out identical
    Ok((components, trace))
}

fn sample_mean(data: &[DVector<f64>], dim: usize) -> DVector<f64> {
    let mut mean = DVector::zeros(dim);
    for x in data {
        mean += x;
    }
    mean / data.len() as f64
}

fn pooled_scatter(data: &[DVector<f64>], mean: &DVector<f64>) -> DMatrix<f64> {
    let dim = mean.len();
    let mut scatter = DMatrix::zeros(dim, dim);
    for x in data {
        let diff = x - mean;
        scatter += &diff * diff.transpose();
    }
    scatter / data.len() as f64
}

/// Constrains a scatter matrix to the configured covariance shape and adds
/// the ridge.
fn shaped_covariance(scatter: &DMatrix<f64>, config: &GmmConfig) -> DMatrix<f64> {
    let d = scatter.nrows();
    let eps = config.reg_eps;
    match config.covariance {
        CovarianceKind::Full | CovarianceKind::Tied => {
            scatter + DMatrix::identity(d, d) * eps
        }
        CovarianceKind::Diagonal => {
            DMatrix::from_diagonal(&(scatter.diagonal().add_scalar(eps)))
        }
        CovarianceKind::Spherical => {
            let avg = scatter.diagonal().mean();
            DMatrix::identity(d, d) * (avg + eps)
        }
    }
}

fn build_prepared(
    weights: &[f64],
    means: &[DVector<f64>],
    covs: &[DMatrix<f64>],
    reg_eps: f64,
) -> Result<Vec<Prepared>> {
    weights
        .iter()
        .zip(means)
        .zip(covs)
        .map(|((w, m), c)| {
            prepare(
                &GaussianComponent {
                    weight: *w,
                    mean: m.iter().copied().collect(),
                    covariance: c.iter().copied().collect(),
                },
                reg_eps,
            )
        })
        .collect()
}

/// k-means++ style seeding: first mean uniform, the rest sampled
/// proportionally to squared distance from the nearest chosen mean.
fn seed_means_kmeanspp(
    data: &[DVector<f64>],
    k: usize,
    rng: &mut ChaCha8Rng,
) -> Vec<DVector<f64>> {
    let n = data.len();
    let mut means: Vec<DVector<f64>> = Vec::with_capacity(k);
    means.push(data[rng.random_range(0..n)].clone());
    let mut dist_sq: Vec<f64> = data
        .iter()
        .map(|x| (x - &means[0]).norm_squared())
        .collect();
    while means.len() < k {
        let total: f64 = dist_sq.iter().sum();
        let chosen = if total <= 0.0 {
            rng.random_range(0..n)
        } else {
            let mut target = rng.random::<f64>() * total;
            let mut pick = n - 1;
            for (i, &w) in dist_sq.iter().enumerate() {
                if target < w {
                    pick = i;
                    break;
                }
                target -= w;
            }
            pick
        };
        means.push(data[chosen].clone());
        for (i, x) in data.iter().enumerate() {
            dist_sq[i] = dist_sq[i].min((x - means.last().unwrap()).norm_squared());
        }
    }
    means
}
