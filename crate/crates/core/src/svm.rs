//! One-vs-rest soft-margin SVM trained by sequential minimal optimization.
//!
//! One binary model is trained per class against the rest, so a 23-class
//! posture set needs 23 models instead of 253 pairwise ones. The SMO solver
//! follows the classic two-multiplier working-set scheme with an error cache
//! and terminates when no example violates the KKT conditions beyond the
//! working tolerance.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::eval::ConfusionMatrix;
use crate::gmm::argmax_first;
use crate::numeric::{derive_seed, euclidean, squared_euclidean};

/// exp(-|x - x'|^2 / (2 sigma^2)).
pub fn rbf_kernel(x: &[f64], y: &[f64], sigma: f64) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::Dimension {
            expected: x.len(),
            got: y.len(),
        });
    }
    if sigma <= 0.0 || !sigma.is_finite() {
        return Err(Error::InvalidParameter(format!("sigma {sigma}")));
    }
    Ok((-squared_euclidean(x, y) / (2.0 * sigma * sigma)).exp())
}

/// Resolved kernel as stored in a trained model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Kernel {
    Linear,
    Rbf { sigma: f64 },
}

impl Kernel {
    pub fn eval(&self, a: &[f64], b: &[f64]) -> f64 {
        match self {
            Kernel::Linear => a.iter().zip(b).map(|(x, y)| x * y).sum(),
            Kernel::Rbf { sigma } => {
                (-squared_euclidean(a, b) / (2.0 * sigma * sigma)).exp()
            }
        }
    }
}

/// Kernel request; an unset RBF width is resolved to the median pairwise
/// distance of the training set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KernelSpec {
    Linear,
    Rbf { sigma: Option<f64> },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SvmConfig {
    /// Soft-margin penalty.
    pub c: f64,
    pub kernel: KernelSpec,
    /// KKT tolerance; the solver works at half of it internally.
    pub tol: f64,
    /// Scale each class's penalty inversely to its frequency.
    pub balance_classes: bool,
    /// Cap on optimization passes before giving up.
    pub max_rounds: usize,
    pub seed: u64,
}

impl Default for SvmConfig {
    fn default() -> Self {
        Self {
            c: 1.0,
            kernel: KernelSpec::Rbf { sigma: None },
            tol: 1e-3,
            balance_classes: false,
            max_rounds: 100_000,
            seed: 0,
        }
    }
}

/// One class-vs-rest decision function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SvmBinaryModel {
    pub class: String,
    pub support_vectors: Vec<Vec<f64>>,
    /// alpha_i * y_i per support vector.
    pub coefficients: Vec<f64>,
    pub bias: f64,
    pub kernel: Kernel,
    /// Largest KKT violation measured over the full training set after
    /// convergence.
    pub kkt_violation: f64,
}

impl SvmBinaryModel {
    pub fn decision(&self, x: &[f64]) -> f64 {
        self.support_vectors
            .iter()
            .zip(&self.coefficients)
            .map(|(sv, &c)| c * self.kernel.eval(sv, x))
            .sum::<f64>()
            + self.bias
    }
}

#[derive(Debug, Clone)]
pub struct SvmOvrClassifier {
    classes: Vec<String>,
    models: Vec<SvmBinaryModel>,
    dim: usize,
}

impl SvmOvrClassifier {
    /// Trains one binary model per class, classes in sorted order.
    pub fn fit(features: &[Vec<f64>], labels: &[String], config: &SvmConfig) -> Result<Self> {
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
        let dim = features[0].len();
        for f in features {
            if f.len() != dim {
                return Err(Error::Dimension {
                    expected: dim,
                    got: f.len(),
                });
            }
        }
        let mut classes: Vec<String> = labels.to_vec();
        classes.sort();
        classes.dedup();
        if classes.len() < 2 {
            return Err(Error::InvalidParameter(
                "one-vs-rest needs at least two classes".into(),
            ));
        }

        let kernel = match config.kernel {
            KernelSpec::Linear => Kernel::Linear,
            KernelSpec::Rbf { sigma: Some(s) } => {
                if s <= 0.0 {
                    return Err(Error::InvalidParameter(format!("sigma {s}")));
                }
                Kernel::Rbf { sigma: s }
            }
            KernelSpec::Rbf { sigma: None } => Kernel::Rbf {
                sigma: median_pairwise_distance(features),
            },
        };

        let n = features.len();
        // full Gram table when it fits comfortably in memory
        let gram = if n <= 2500 {
            let mut g = vec![vec![0.0f64; n]; n];
            for i in 0..n {
                for j in 0..=i {
                    let v = kernel.eval(&features[i], &features[j]);
                    g[i][j] = v;
                    g[j][i] = v;
                }
            }
            Some(g)
        } else {
            None
        };

        let mut models = Vec::with_capacity(classes.len());
        for (idx, class) in classes.iter().enumerate() {
            let y: Vec<f64> = labels
                .iter()
                .map(|l| if l == class { 1.0 } else { -1.0 })
                .collect();
            let n_pos = y.iter().filter(|&&v| v > 0.0).count();
            if n_pos == 0 || n_pos == n {
                return Err(Error::InvalidParameter(format!(
                    "class {class} has no counterexamples"
                )));
            }
            let box_c: Vec<f64> = if config.balance_classes {
                let n_neg = n - n_pos;
                y.iter()
                    .map(|&v| {
                        if v > 0.0 {
                            config.c * n as f64 / (2.0 * n_pos as f64)
                        } else {
                            config.c * n as f64 / (2.0 * n_neg as f64)
                        }
                    })
                    .collect()
            } else {
                vec![config.c; n]
            };

            let mut smo = Smo {
                x: features,
                y: &y,
                box_c: &box_c,
                kernel: &kernel,
                gram: gram.as_ref(),
                work_tol: config.tol * 0.5,
                alphas: vec![0.0; n],
                bias: 0.0,
                errors: y.iter().map(|v| -v).collect(),
                rng: ChaCha8Rng::seed_from_u64(derive_seed(config.seed, idx as u64)),
            };
            smo.solve(config.max_rounds)?;

            let kkt = max_kkt_violation(
                features,
                &y,
                &smo.alphas,
                smo.bias,
                &kernel,
                &box_c,
            );
            let mut support_vectors = Vec::new();
            let mut coefficients = Vec::new();
            for i in 0..n {
                if smo.alphas[i] > 1e-12 {
                    support_vectors.push(features[i].clone());
                    coefficients.push(smo.alphas[i] * y[i]);
                }
            }
            models.push(SvmBinaryModel {
                class: class.clone(),
                support_vectors,
                coefficients,
                bias: smo.bias,
                kernel,
                kkt_violation: kkt,
            });
        }
        Ok(Self {
            classes,
            models,
            dim,
        })
    }

    pub fn from_parts(models: Vec<SvmBinaryModel>, dim: usize) -> Result<Self> {
        if models.is_empty() {
            return Err(Error::Model("no binary models".into()));
        }
        for m in &models {
            if m.support_vectors.is_empty() {
                return Err(Error::Model(format!("class {} has no support vectors", m.class)));
            }
            if m.support_vectors.iter().any(|sv| sv.len() != dim) {
                return Err(Error::Model("support vector dimension mismatch".into()));
            }
        }
        let classes = models.iter().map(|m| m.class.clone()).collect();
        Ok(Self {
            classes,
            models,
            dim,
        })
    }

    pub fn classes(&self) -> &[String] {
        &self.classes
    }

    pub fn models(&self) -> &[SvmBinaryModel] {
        &self.models
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Predicted class and per-class decision values in class order. Ties go
    /// to the lowest class id.
    pub fn predict(&self, x: &[f64]) -> Result<(String, Vec<f64>)> {
        if x.len() != self.dim {
            return Err(Error::Dimension {
                expected: self.dim,
                got: x.len(),
            });
        }
        let decisions: Vec<f64> = self.models.iter().map(|m| m.decision(x)).collect();
        let best = argmax_first(&decisions);
        Ok((self.classes[best].clone(), decisions))
    }

    pub fn evaluate(&self, features: &[Vec<f64>], labels: &[String]) -> Result<ConfusionMatrix> {
        let mut pairs = Vec::with_capacity(features.len());
        for (x, y) in features.iter().zip(labels) {
            let (pred, _) = self.predict(x)?;
            pairs.push((y.clone(), pred));
        }
        Ok(ConfusionMatrix::from_pairs(pairs))
    }
}

/// Largest KKT violation over a labeled set: interior alphas must sit on the
/// margin, zero alphas outside it, boxed alphas inside it.
pub fn max_kkt_violation(
    x: &[Vec<f64>],
    y: &[f64],
    alphas: &[f64],
    bias: f64,
    kernel: &Kernel,
    box_c: &[f64],
) -> f64 {
    let n = x.len();
    let mut worst = 0.0f64;
    for i in 0..n {
        let mut f = bias;
        for j in 0..n {
            if alphas[j] > 0.0 {
                f += alphas[j] * y[j] * kernel.eval(&x[j], &x[i]);
            }
        }
        let margin = y[i] * f;
        let violation = if alphas[i] <= 1e-10 {
            (1.0 - margin).max(0.0)
        } else if alphas[i] >= box_c[i] - 1e-10 {
            (margin - 1.0).max(0.0)
        } else {
            (margin - 1.0).abs()
        };
        worst = worst.max(violation);
    }
    worst
}

/// Median distance between a deterministic subset of point pairs; the usual
/// default width for an RBF kernel.
fn median_pairwise_distance(features: &[Vec<f64>]) -> f64 {
    let n = features.len();
    let cap = 256usize.min(n);
    let idx: Vec<usize> = (0..cap).map(|i| i * n / cap).collect();
    let mut dists = Vec::with_capacity(cap * (cap - 1) / 2);
    for a in 0..idx.len() {
        for b in (a + 1)..idx.len() {
            dists.push(euclidean(&features[idx[a]], &features[idx[b]]));
        }
    }
    if dists.is_empty() {
        return 1.0;
    }
    dists.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mid = dists.len() / 2;
    let median = if dists.len() % 2 == 0 {
        0.5 * (dists[mid - 1] + dists[mid])
    } else {
        dists[mid]
    };
    if median > 0.0 {
        median
    } else {
        1.0
    }
}

struct Smo<'a> {
    x: &'a [Vec<f64>],
    y: &'a [f64],
    box_c: &'a [f64],
    kernel: &'a Kernel,
    gram: Option<&'a Vec<Vec<f64>>>,
    work_tol: f64,
    alphas: Vec<f64>,
    bias: f64,
    /// errors[i] = f(x_i) - y_i, kept current for every point.
    errors: Vec<f64>,
    rng: ChaCha8Rng,
}

impl Smo<'_> {
    fn k(&self, i: usize, j: usize) -> f64 {
        match self.gram {
            Some(g) => g[i][j],
            None => self.kernel.eval(&self.x[i], &self.x[j]),
        }
    }

    fn is_non_bound(&self, i: usize) -> bool {
        self.alphas[i] > 0.0 && self.alphas[i] < self.box_c[i]
    }

    fn solve(&mut self, max_rounds: usize) -> Result<()> {
        let n = self.x.len();
        let mut num_changed = 0usize;
        let mut examine_all = true;
        let mut rounds = 0usize;
        while num_changed > 0 || examine_all {
            rounds += 1;
            if rounds > max_rounds {
                return Err(Error::Numeric(format!(
                    "SMO did not converge within {max_rounds} passes"
                )));
            }
            num_changed = 0;
            for i in 0..n {
                if (examine_all || self.is_non_bound(i)) && self.examine(i) {
                    num_changed += 1;
                }
            }
            if examine_all {
                examine_all = false;
            } else if num_changed == 0 {
                examine_all = true;
            }
        }
        Ok(())
    }

    fn examine(&mut self, i2: usize) -> bool {
        let y2 = self.y[i2];
        let alph2 = self.alphas[i2];
        let e2 = self.errors[i2];
        let r2 = e2 * y2;
        let violates = (r2 < -self.work_tol && alph2 < self.box_c[i2])
            || (r2 > self.work_tol && alph2 > 0.0);
        if !violates {
            return false;
        }
        let n = self.x.len();
        let non_bound: Vec<usize> = (0..n).filter(|&i| self.is_non_bound(i)).collect();

        // best heuristic: maximize |e1 - e2|
        if non_bound.len() > 1 {
            let mut best = None;
            let mut best_gap = -1.0;
            for &i in &non_bound {
                let gap = (self.errors[i] - e2).abs();
                if gap > best_gap {
                    best_gap = gap;
                    best = Some(i);
                }
            }
            if let Some(i1) = best {
                if self.take_step(i1, i2) {
                    return true;
                }
            }
        }
        // sweep non-bound points from a random start
        if !non_bound.is_empty() {
            let start = self.rng.random_range(0..non_bound.len());
            for offset in 0..non_bound.len() {
                let i1 = non_bound[(start + offset) % non_bound.len()];
                if self.take_step(i1, i2) {
                    return true;
                }
            }
        }
        // sweep everything from a random start
        let start = self.rng.random_range(0..n);
        for offset in 0..n {
            let i1 = (start + offset) % n;
            if self.take_step(i1, i2) {
                return true;
            }
        }
        false
    }

    fn take_step(&mut self, i1: usize, i2: usize) -> bool {
        if i1 == i2 {
            return false;
        }
        let (y1, y2) = (self.y[i1], self.y[i2]);
        let (alph1, alph2) = (self.alphas[i1], self.alphas[i2]);
        let (e1, e2) = (self.errors[i1], self.errors[i2]);
        let (c1, c2) = (self.box_c[i1], self.box_c[i2]);
        let s = y1 * y2;

        let (low, high) = if (y1 - y2).abs() > f64::EPSILON {
            ((alph2 - alph1).max(0.0), (c1 + alph2 - alph1).min(c2))
        } else {
            ((alph1 + alph2 - c1).max(0.0), (alph1 + alph2).min(c2))
        };
        if high - low < 1e-12 {
            return false;
        }

        let k11 = self.k(i1, i1);
        let k12 = self.k(i1, i2);
        let k22 = self.k(i2, i2);
        let eta = k11 + k22 - 2.0 * k12;

        let mut a2 = if eta > 1e-12 {
            (alph2 + y2 * (e1 - e2) / eta).clamp(low, high)
        } else {
            // flat direction: evaluate the objective at both clip ends
            let f1 = y1 * (e1 + self.bias) - alph1 * k11 - s * alph2 * k12;
            let f2 = y2 * (e2 + self.bias) - s * alph1 * k12 - alph2 * k22;
            let l1 = alph1 + s * (alph2 - low);
            let h1 = alph1 + s * (alph2 - high);
            let obj_low = l1 * f1 + low * f2
                + 0.5 * l1 * l1 * k11
                + 0.5 * low * low * k22
                + s * low * l1 * k12;
            let obj_high = h1 * f1 + high * f2
                + 0.5 * h1 * h1 * k11
                + 0.5 * high * high * k22
                + s * high * h1 * k12;
            if obj_low < obj_high - 1e-12 {
                low
            } else if obj_low > obj_high + 1e-12 {
                high
            } else {
                return false;
            }
        };
        if (a2 - alph2).abs() < 1e-12 * (a2 + alph2 + 1e-12) {
            return false;
        }
        let mut a1 = alph1 + s * (alph2 - a2);
        if a1 < 0.0 {
            a2 += s * a1;
            a1 = 0.0;
        } else if a1 > c1 {
            a2 += s * (a1 - c1);
            a1 = c1;
        }

        let d1 = y1 * (a1 - alph1);
        let d2 = y2 * (a2 - alph2);
        let b1 = self.bias - e1 - d1 * k11 - d2 * k12;
        let b2 = self.bias - e2 - d1 * k12 - d2 * k22;
        let new_bias = if a1 > 0.0 && a1 < c1 {
            b1
        } else if a2 > 0.0 && a2 < c2 {
            b2
        } else {
            0.5 * (b1 + b2)
        };
        let delta_b = new_bias - self.bias;

        for i in 0..self.x.len() {
            self.errors[i] += d1 * self.k(i1, i) + d2 * self.k(i2, i) + delta_b;
        }
        self.alphas[i1] = a1;
        self.alphas[i2] = a2;
        self.bias = new_bias;
        true
    }
}
