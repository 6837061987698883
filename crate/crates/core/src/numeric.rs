//! Small numeric helpers shared by the probabilistic models.

/// log(sum(exp(v))) with the usual max shift; empty input and all -inf both
/// give -inf.
pub fn logsumexp(values: &[f64]) -> f64 {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !max.is_finite() {
        return max;
    }
    let sum: f64 = values.iter().map(|v| (v - max).exp()).sum();
    max + sum.ln()
}

/// Log density of a diagonal-covariance Gaussian.
pub fn log_gaussian_diag(x: &[f64], mean: &[f64], variance: &[f64]) -> f64 {
    debug_assert_eq!(x.len(), mean.len());
    debug_assert_eq!(x.len(), variance.len());
    let mut acc = 0.0;
    for i in 0..x.len() {
        let d = x[i] - mean[i];
        acc += (2.0 * std::f64::consts::PI * variance[i]).ln() + d * d / variance[i];
    }
    -0.5 * acc
}

/// Deterministic per-stream seed derivation (splitmix64 of base xor stream).
pub fn derive_seed(base: u64, stream: u64) -> u64 {
    let mut z = base ^ stream.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Euclidean distance between two equal-length vectors.
pub fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    squared_euclidean(a, b).sqrt()
}

pub fn squared_euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn logsumexp_matches_direct() {
        let v: [f64; 3] = [-1.0, -2.0, -3.0];
        let direct = v.iter().map(|x| x.exp()).sum::<f64>().ln();
        assert_relative_eq!(logsumexp(&v), direct, epsilon = 1e-12);
    }

    #[test]
    fn logsumexp_handles_neg_inf() {
        assert_eq!(logsumexp(&[]), f64::NEG_INFINITY);
        assert_eq!(logsumexp(&[f64::NEG_INFINITY]), f64::NEG_INFINITY);
        assert_relative_eq!(
            logsumexp(&[0.0, f64::NEG_INFINITY]),
            0.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn standard_normal_at_zero() {
        let lp = log_gaussian_diag(&[0.0], &[0.0], &[1.0]);
        assert_relative_eq!(lp, -0.9189385332046727, epsilon = 1e-12);
    }

    #[test]
    fn derive_seed_is_stable() {
        assert_eq!(derive_seed(42, 0), derive_seed(42, 0));
        assert_ne!(derive_seed(42, 0), derive_seed(42, 1));
        assert_ne!(derive_seed(42, 0), derive_seed(43, 0));
    }
}
