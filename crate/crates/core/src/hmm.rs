//! Gaussian-emission hidden Markov models for whole-sequence recognition.
//!
//! One ergodic HMM with diagonal-covariance Gaussian emissions is trained per
//! Adavu by Baum-Welch; an unknown posture sequence is classified by the
//! model with the highest forward log likelihood. The forward pass used in
//! training is the classic per-step scaled recursion (with a per-step shift
//! of the log emissions so huge densities cannot overflow); the public query
//! path runs fully in log space. Both must agree, and tests hold them to it.

// indexed recursions mirror the math throughout this module
#![allow(clippy::needless_range_loop)]

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::eval::ConfusionMatrix;
use crate::gmm::argmax_first;
use crate::numeric::{derive_seed, log_gaussian_diag, logsumexp};

/// Hidden Markov model with per-state diagonal Gaussian emissions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaussianHmm {
    pub label: String,
    /// Initial state distribution, length S.
    pub initial: Vec<f64>,
    /// Row-stochastic S x S transition matrix.
    pub transition: Vec<Vec<f64>>,
    /// Per-state emission means, S x d.
    pub means: Vec<Vec<f64>>,
    /// Per-state diagonal emission variances, S x d.
    pub variances: Vec<Vec<f64>>,
}

impl GaussianHmm {
    pub fn n_states(&self) -> usize {
        self.initial.len()
    }

    pub fn dim(&self) -> usize {
        self.means.first().map(|m| m.len()).unwrap_or(0)
    }

    pub fn validate(&self) -> Result<()> {
        let s = self.n_states();
        let d = self.dim();
        if s == 0 || d == 0 {
            return Err(Error::InvalidParameter("empty model".into()));
        }
        if self.transition.len() != s
            || self.transition.iter().any(|r| r.len() != s)
            || self.means.len() != s
            || self.variances.len() != s
            || self.means.iter().any(|m| m.len() != d)
            || self.variances.iter().any(|v| v.len() != d)
        {
            return Err(Error::InvalidParameter("inconsistent model shapes".into()));
        }
        if (self.initial.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidParameter(
                "initial distribution does not sum to 1".into(),
            ));
        }
        for (i, row) in self.transition.iter().enumerate() {
            if (row.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
                return Err(Error::InvalidParameter(format!(
                    "transition row {i} does not sum to 1"
                )));
            }
        }
        if self
            .variances
            .iter()
            .flatten()
            .any(|&v| v <= 0.0 || !v.is_finite())
        {
            return Err(Error::InvalidParameter("non-positive variance".into()));
        }
        Ok(())
    }

    fn check_seq(&self, seq: &ObservationSequence) -> Result<()> {
        if seq.observations.is_empty() {
            return Err(Error::EmptyStream);
        }
        let d = self.dim();
        for o in &seq.observations {
            if o.len() != d {
                return Err(Error::Dimension {
                    expected: d,
                    got: o.len(),
                });
            }
        }
        Ok(())
    }

    fn log_emissions(&self, seq: &ObservationSequence) -> Vec<Vec<f64>> {
        seq.observations
            .iter()
            .map(|o| {
                (0..self.n_states())
                    .map(|j| log_gaussian_diag(o, &self.means[j], &self.variances[j]))
                    .collect()
            })
            .collect()
    }

    /// Forward log likelihood log P(O | model), computed in log space.
    pub fn log_likelihood(&self, seq: &ObservationSequence) -> Result<f64> {
        self.check_seq(seq)?;
        let s = self.n_states();
        let logb = self.log_emissions(seq);
        let log_a: Vec<Vec<f64>> = self
            .transition
            .iter()
            .map(|r| r.iter().map(|&p| p.ln()).collect())
            .collect();
        let mut cur: Vec<f64> = (0..s)
            .map(|j| self.initial[j].ln() + logb[0][j])
            .collect();
        let mut scratch = vec![0.0f64; s];
        for t in 1..seq.observations.len() {
            let mut next = vec![0.0f64; s];
            for (j, next_j) in next.iter_mut().enumerate() {
                for i in 0..s {
                    scratch[i] = cur[i] + log_a[i][j];
                }
                *next_j = logsumexp(&scratch) + logb[t][j];
            }
            cur = next;
        }
        Ok(logsumexp(&cur))
    }

    /// Forward log likelihood via the scaled linear-space recursion used
    /// inside Baum-Welch. Agrees with [`GaussianHmm::log_likelihood`] up to
    /// rounding; kept public so the two routes can be compared.
    pub fn log_likelihood_scaled(&self, seq: &ObservationSequence) -> Result<f64> {
        self.check_seq(seq)?;
        let logb = self.log_emissions(seq);
        Ok(scaled_forward_backward(self, &logb, false).log_likelihood)
    }

    /// Most probable state path and its joint log probability. Ties at each
    /// step go to the lower state index.
    pub fn viterbi(&self, seq: &ObservationSequence) -> Result<(Vec<usize>, f64)> {
        self.check_seq(seq)?;
        let s = self.n_states();
        let t_len = seq.observations.len();
        let logb = self.log_emissions(seq);
        let log_a: Vec<Vec<f64>> = self
            .transition
            .iter()
            .map(|r| r.iter().map(|&p| p.ln()).collect())
            .collect();

        let mut delta: Vec<f64> = (0..s)
            .map(|j| self.initial[j].ln() + logb[0][j])
            .collect();
        let mut back: Vec<Vec<usize>> = Vec::with_capacity(t_len);
        for t in 1..t_len {
            let mut next = vec![f64::NEG_INFINITY; s];
            let mut choice = vec![0usize; s];
            for j in 0..s {
                let mut best = f64::NEG_INFINITY;
                let mut best_i = 0;
                for i in 0..s {
                    let v = delta[i] + log_a[i][j];
                    if v > best {
                        best = v;
                        best_i = i;
                    }
                }
                next[j] = best + logb[t][j];
                choice[j] = best_i;
            }
            back.push(choice);
            delta = next;
        }

        let mut state = argmax_first(&delta);
        let log_prob = delta[state];
        let mut path = vec![state; t_len];
        for (t, choice) in back.iter().enumerate().rev() {
            state = choice[state];
            path[t] = state;
        }
        Ok((path, log_prob))
    }
}

/// One performance rendered as an ordered list of feature vectors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObservationSequence {
    pub observations: Vec<Vec<f64>>,
    /// Identifier of the source performance.
    pub source: String,
}

impl ObservationSequence {
    pub fn new(observations: Vec<Vec<f64>>, source: impl Into<String>) -> Result<Self> {
        if observations.is_empty() {
            return Err(Error::EmptyStream);
        }
        let d = observations[0].len();
        if d == 0 || observations.iter().any(|o| o.len() != d) {
            return Err(Error::InvalidParameter(
                "observations must share a positive dimension".into(),
            ));
        }
        Ok(Self {
            observations,
            source: source.into(),
        })
    }

    pub fn len(&self) -> usize {
        self.observations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.observations.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.observations[0].len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HmmConfig {
    pub n_states: usize,
    pub max_iter: usize,
    /// Relative log-likelihood improvement below which training stops.
    pub rel_tol: f64,
    /// Lower bound applied to every emission variance.
    pub var_floor: f64,
    /// Independent EM runs from different seedings; the model with the best
    /// final log likelihood wins. Baum-Welch is prone to local optima where
    /// one state smears over two posture clusters.
    pub restarts: usize,
    pub seed: u64,
}

impl Default for HmmConfig {
    fn default() -> Self {
        Self {
            n_states: 1,
            max_iter: 200,
            rel_tol: 1e-8,
            var_floor: 1e-4,
            restarts: 5,
            seed: 0,
        }
    }
}

/// Result of one Baum-Welch run: the model plus the per-iteration total log
/// likelihood (non-decreasing up to tiny slack).
#[derive(Debug, Clone)]
pub struct HmmFit {
    pub hmm: GaussianHmm,
    pub log_likelihoods: Vec<f64>,
}

/// Trains one model on all sequences of a label via Baum-Welch.
///
/// Emission means are seeded by clustering the pooled observations into
/// `n_states` groups (k-means with deterministic seeding), so states line up
/// with recurring postures even though an Adavu revisits the same posture
/// many times per cycle; transitions start ergodic-uniform and EM learns the
/// order. A small seeded jitter breaks exact duplicates.
pub fn hmm_fit(
    label: &str,
    sequences: &[ObservationSequence],
    config: &HmmConfig,
) -> Result<HmmFit> {
    if sequences.is_empty() {
        return Err(Error::InvalidParameter(format!(
            "label {label}: no training sequences"
        )));
    }
    let s = config.n_states;
    if s == 0 {
        return Err(Error::InvalidParameter("n_states must be >= 1".into()));
    }
    let d = sequences[0].dim();
    for seq in sequences {
        if seq.observations.is_empty() {
            return Err(Error::EmptyStream);
        }
        if seq.dim() != d {
            return Err(Error::Dimension {
                expected: d,
                got: seq.dim(),
            });
        }
    }
    let total_obs: usize = sequences.iter().map(|s| s.len()).sum();
    if total_obs < s {
        return Err(Error::InsufficientSamples {
            class: label.to_string(),
            got: total_obs,
            required: s,
        });
    }

    let mut best: Option<HmmFit> = None;
    for restart in 0..config.restarts.max(1) {
        let run_cfg = HmmConfig {
            seed: derive_seed(config.seed, restart as u64),
            ..*config
        };
        let fit = run_em(label, sequences, d, &run_cfg)?;
        let ll = fit.log_likelihoods.last().copied().unwrap_or(f64::NEG_INFINITY);
        let better = match &best {
            Some(b) => ll > b.log_likelihoods.last().copied().unwrap_or(f64::NEG_INFINITY),
            None => true,
        };
        if better {
            best = Some(fit);
        }
    }
    Ok(best.expect("at least one restart runs"))
}

fn run_em(
    label: &str,
    sequences: &[ObservationSequence],
    d: usize,
    config: &HmmConfig,
) -> Result<HmmFit> {
    let s = config.n_states;
    let mut hmm = initialize(label, sequences, d, config);
    let mut trace: Vec<f64> = Vec::new();

    for _ in 0..config.max_iter.max(1) {
        let mut total_ll = 0.0;
        let mut pi_acc = vec![0.0f64; s];
        let mut trans_acc = vec![vec![0.0f64; s]; s];
        let mut occupancy = vec![0.0f64; s];
        let mut sum_x = vec![vec![0.0f64; d]; s];
        let mut sum_x2 = vec![vec![0.0f64; d]; s];

        for seq in sequences {
            let logb = hmm.log_emissions(seq);
            let pass = scaled_forward_backward(&hmm, &logb, true);
            total_ll += pass.log_likelihood;
            let gamma = pass.gamma.as_ref().expect("gamma requested");
            for j in 0..s {
                pi_acc[j] += gamma[0][j];
            }
            for (t, obs) in seq.observations.iter().enumerate() {
                for j in 0..s {
                    let g = gamma[t][j];
                    occupancy[j] += g;
                    for k in 0..d {
                        sum_x[j][k] += g * obs[k];
                        sum_x2[j][k] += g * obs[k] * obs[k];
                    }
                }
            }
            let xi = pass.xi_sums.as_ref().expect("xi requested");
            for i in 0..s {
                for j in 0..s {
                    trans_acc[i][j] += xi[i][j];
                }
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
        let pi_total: f64 = pi_acc.iter().sum();
        if pi_total > 0.0 {
            for j in 0..s {
                hmm.initial[j] = pi_acc[j] / pi_total;
            }
        }
        for i in 0..s {
            let row_sum: f64 = trans_acc[i].iter().sum();
            if row_sum > 1e-300 {
                for j in 0..s {
                    hmm.transition[i][j] = trans_acc[i][j] / row_sum;
                }
            }
        }
        for j in 0..s {
            if occupancy[j] > 1e-300 {
                for k in 0..d {
                    let mean = sum_x[j][k] / occupancy[j];
                    let var = (sum_x2[j][k] / occupancy[j] - mean * mean)
                        .max(config.var_floor);
                    hmm.means[j][k] = mean;
                    hmm.variances[j][k] = var;
                }
            }
        }
        debug_assert!(hmm.validate().is_ok());
    }

    Ok(HmmFit {
        hmm,
        log_likelihoods: trace,
    })
}

fn initialize(
    label: &str,
    sequences: &[ObservationSequence],
    d: usize,
    config: &HmmConfig,
) -> GaussianHmm {
    let s = config.n_states;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);

    // global statistics as fallback for starved states
    let total: usize = sequences.iter().map(|q| q.len()).sum();
    let mut gmean = vec![0.0f64; d];
    let mut gsq = vec![0.0f64; d];
    for seq in sequences {
        for o in &seq.observations {
            for k in 0..d {
                gmean[k] += o[k];
                gsq[k] += o[k] * o[k];
            }
        }
    }
    for k in 0..d {
        gmean[k] /= total as f64;
        gsq[k] = (gsq[k] / total as f64 - gmean[k] * gmean[k]).max(config.var_floor);
    }

    // pool the observations and cluster them into one group per state
    let pooled: Vec<&[f64]> = sequences
        .iter()
        .flat_map(|q| q.observations.iter().map(|o| o.as_slice()))
        .collect();
    let assignment = kmeans_assign(&pooled, s, &mut rng);

    let mut counts = vec![0usize; s];
    let mut means = vec![vec![0.0f64; d]; s];
    let mut sq = vec![vec![0.0f64; d]; s];
    for (&state, obs) in assignment.iter().zip(&pooled) {
        counts[state] += 1;
        for k in 0..d {
            means[state][k] += obs[k];
            sq[state][k] += obs[k] * obs[k];
        }
    }
    let jitter_scale: f64 =
        1e-3 * (gsq.iter().sum::<f64>() / d as f64).sqrt() + 1e-9;
    let mut variances = vec![vec![0.0f64; d]; s];
    for j in 0..s {
        for k in 0..d {
            if counts[j] > 0 {
                means[j][k] /= counts[j] as f64;
                variances[j][k] = (sq[j][k] / counts[j] as f64 - means[j][k] * means[j][k])
                    .max(config.var_floor);
            } else {
                means[j][k] = gmean[k];
                variances[j][k] = gsq[k];
            }
            let z: f64 = StandardNormal.sample(&mut rng);
            means[j][k] += jitter_scale * z;
        }
    }

    GaussianHmm {
        label: label.to_string(),
        initial: vec![1.0 / s as f64; s],
        transition: vec![vec![1.0 / s as f64; s]; s],
        means,
        variances,
    }
}

/// k-means over pooled observations: k-means++ seeding followed by Lloyd
/// iterations until assignments stabilize. Deterministic given the rng.
fn kmeans_assign(points: &[&[f64]], k: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    use rand::Rng;
    let n = points.len();
    let d = points[0].len();
    let dist_sq = |a: &[f64], b: &[f64]| -> f64 {
        a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
    };

    let mut centers: Vec<Vec<f64>> = Vec::with_capacity(k);
    centers.push(points[rng.random_range(0..n)].to_vec());
    let mut best_d: Vec<f64> = points.iter().map(|p| dist_sq(p, &centers[0])).collect();
    while centers.len() < k {
        let total: f64 = best_d.iter().sum();
        let pick = if total <= 0.0 {
            rng.random_range(0..n)
        } else {
            let mut target = rng.random::<f64>() * total;
            let mut idx = n - 1;
            for (i, &w) in best_d.iter().enumerate() {
                if target < w {
                    idx = i;
                    break;
                }
                target -= w;
            }
            idx
        };
        centers.push(points[pick].to_vec());
        for (i, p) in points.iter().enumerate() {
            best_d[i] = best_d[i].min(dist_sq(p, centers.last().unwrap()));
        }
    }

    let mut assignment = vec![0usize; n];
    for _ in 0..50 {
        let mut changed = false;
        for (i, p) in points.iter().enumerate() {
            let mut best = (f64::INFINITY, 0usize);
            for (c, center) in centers.iter().enumerate() {
                let ds = dist_sq(p, center);
                if ds < best.0 {
                    best = (ds, c);
                }
            }
            if assignment[i] != best.1 {
                assignment[i] = best.1;
                changed = true;
            }
        }
        if !changed {
            break;
        }
        let mut sums = vec![vec![0.0f64; d]; k];
        let mut counts = vec![0usize; k];
        for (&a, p) in assignment.iter().zip(points) {
            counts[a] += 1;
            for j in 0..d {
                sums[a][j] += p[j];
            }
        }
        for c in 0..k {
            if counts[c] > 0 {
                for j in 0..d {
                    centers[c][j] = sums[c][j] / counts[c] as f64;
                }
            }
        }
    }
    assignment
}

struct ForwardBackward {
    log_likelihood: f64,
    /// gamma[t][j]: posterior state occupancy.
    gamma: Option<Vec<Vec<f64>>>,
    /// xi_sums[i][j]: expected transition counts summed over t.
    xi_sums: Option<Vec<Vec<f64>>>,
}

/// Scaled forward(-backward) pass. Log emissions are shifted per step by
/// their maximum before exponentiation, so the recursion stays in a safe
/// floating-point range for any variance scale.
fn scaled_forward_backward(
    hmm: &GaussianHmm,
    logb: &[Vec<f64>],
    with_posteriors: bool,
) -> ForwardBackward {
    let s = hmm.n_states();
    let t_len = logb.len();

    let mut shifts = Vec::with_capacity(t_len);
    let mut w = vec![vec![0.0f64; s]; t_len];
    for t in 0..t_len {
        let m = logb[t].iter().copied().fold(f64::NEG_INFINITY, f64::max);
        shifts.push(m);
        for j in 0..s {
            w[t][j] = (logb[t][j] - m).exp();
        }
    }

    let mut alpha = vec![vec![0.0f64; s]; t_len];
    let mut scales = vec![0.0f64; t_len];
    for j in 0..s {
        alpha[0][j] = hmm.initial[j] * w[0][j];
    }
    scales[0] = alpha[0].iter().sum();
    if scales[0] > 0.0 {
        for j in 0..s {
            alpha[0][j] /= scales[0];
        }
    }
    for t in 1..t_len {
        for j in 0..s {
            let mut acc = 0.0;
            for i in 0..s {
                acc += alpha[t - 1][i] * hmm.transition[i][j];
            }
            alpha[t][j] = acc * w[t][j];
        }
        scales[t] = alpha[t].iter().sum();
        if scales[t] > 0.0 {
            for j in 0..s {
                alpha[t][j] /= scales[t];
            }
        }
    }
    let log_likelihood = scales
        .iter()
        .zip(&shifts)
        .map(|(&c, &m)| if c > 0.0 { c.ln() + m } else { f64::NEG_INFINITY })
        .sum();

    if !with_posteriors {
        return ForwardBackward {
            log_likelihood,
            gamma: None,
            xi_sums: None,
        };
    }

    let mut beta = vec![vec![0.0f64; s]; t_len];
    for j in 0..s {
        beta[t_len - 1][j] = 1.0;
    }
    for t in (0..t_len - 1).rev() {
        for i in 0..s {
            let mut acc = 0.0;
            for j in 0..s {
                acc += hmm.transition[i][j] * w[t + 1][j] * beta[t + 1][j];
            }
            beta[t][i] = if scales[t + 1] > 0.0 {
                acc / scales[t + 1]
            } else {
                0.0
            };
        }
    }

    let mut gamma = vec![vec![0.0f64; s]; t_len];
    for t in 0..t_len {
        let mut norm = 0.0;
        for j in 0..s {
            gamma[t][j] = alpha[t][j] * beta[t][j];
            norm += gamma[t][j];
        }
        if norm > 0.0 {
            for j in 0..s {
                gamma[t][j] /= norm;
            }
        }
    }

    let mut xi_sums = vec![vec![0.0f64; s]; s];
    for t in 0..t_len - 1 {
        if scales[t + 1] <= 0.0 {
            continue;
        }
        for i in 0..s {
            for j in 0..s {
                xi_sums[i][j] += alpha[t][i]
                    * hmm.transition[i][j]
                    * w[t + 1][j]
                    * beta[t + 1][j]
                    / scales[t + 1];
            }
        }
    }

    ForwardBackward {
        log_likelihood,
        gamma: Some(gamma),
        xi_sums: Some(xi_sums),
    }
}

/// One trained model per Adavu label, kept in label order.
#[derive(Debug, Clone, PartialEq)]
pub struct AdavuBank {
    models: Vec<GaussianHmm>,
}

impl AdavuBank {
    pub fn new(mut models: Vec<GaussianHmm>) -> Result<Self> {
        if models.is_empty() {
            return Err(Error::InvalidParameter("empty model bank".into()));
        }
        models.sort_by(|a, b| a.label.cmp(&b.label));
        let d = models[0].dim();
        for m in &models {
            m.validate()?;
            if m.dim() != d {
                return Err(Error::Dimension {
                    expected: d,
                    got: m.dim(),
                });
            }
        }
        for pair in models.windows(2) {
            if pair[0].label == pair[1].label {
                return Err(Error::InvalidParameter(format!(
                    "duplicate label {}",
                    pair[0].label
                )));
            }
        }
        Ok(Self { models })
    }

    pub fn models(&self) -> &[GaussianHmm] {
        &self.models
    }

    pub fn labels(&self) -> Vec<String> {
        self.models.iter().map(|m| m.label.clone()).collect()
    }

    pub fn dim(&self) -> usize {
        self.models[0].dim()
    }

    /// Label of the highest-scoring model plus all per-model log
    /// likelihoods in label order. Ties go to the lowest label.
    pub fn classify(&self, seq: &ObservationSequence) -> Result<(String, Vec<f64>)> {
        let scores: Vec<f64> = self
            .models
            .iter()
            .map(|m| m.log_likelihood(seq))
            .collect::<Result<_>>()?;
        let best = argmax_first(&scores);
        Ok((self.models[best].label.clone(), scores))
    }

    pub fn evaluate(
        &self,
        dataset: &[(String, ObservationSequence)],
    ) -> Result<ConfusionMatrix> {
        let mut pairs = Vec::with_capacity(dataset.len());
        for (label, seq) in dataset {
            let (pred, _) = self.classify(seq)?;
            pairs.push((label.clone(), pred));
        }
        Ok(ConfusionMatrix::from_pairs(pairs))
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct BankConfig {
    /// Baseline training parameters; `n_states` acts as the default when a
    /// label has no explicit entry.
    pub base: HmmConfig,
    /// Hidden-state count per label, normally the number of distinct Key
    /// Postures in that Adavu.
    pub states_per_label: BTreeMap<String, usize>,
}

/// Output of [`train_bank`]: the bank plus per-label EM traces.
#[derive(Debug, Clone)]
pub struct BankFit {
    pub bank: AdavuBank,
    pub traces: Vec<(String, Vec<f64>)>,
}

/// Trains one model per label present in the dataset.
pub fn train_bank(
    dataset: &[(String, ObservationSequence)],
    config: &BankConfig,
) -> Result<BankFit> {
    if dataset.is_empty() {
        return Err(Error::InvalidParameter("empty sequence dataset".into()));
    }
    let mut by_label: BTreeMap<&str, Vec<ObservationSequence>> = BTreeMap::new();
    for (label, seq) in dataset {
        by_label.entry(label.as_str()).or_default().push(seq.clone());
    }
    let mut models = Vec::new();
    let mut traces = Vec::new();
    for (idx, (label, seqs)) in by_label.iter().enumerate() {
        let n_states = config
            .states_per_label
            .get(*label)
            .copied()
            .unwrap_or(config.base.n_states);
        let cfg = HmmConfig {
            n_states,
            seed: derive_seed(config.base.seed, idx as u64),
            ..config.base
        };
        let fit = hmm_fit(label, seqs, &cfg)?;
        models.push(fit.hmm);
        traces.push((label.to_string(), fit.log_likelihoods));
    }
    Ok(BankFit {
        bank: AdavuBank::new(models)?,
        traces,
    })
}
