//! Small statistics helpers for the convergence experiments.

/// Two-sided 95% normal quantile.
pub const Z_95: f64 = 1.959963984540054;

/// Median of a slice (mean of the two middle values for even lengths).
///
/// Returns `NaN` for an empty slice.
pub fn median(values: &[f64]) -> f64 {
    if values.is_empty() {
        return f64::NAN;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let mid = v.len() / 2;
    if v.len().is_multiple_of(2) {
        (v[mid - 1] + v[mid]) / 2.0
    } else {
        v[mid]
    }
}

pub fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// `P(X >= successes)` for `X ~ Binomial(trials, 1/2)`: the one-sided sign-test p-value.
pub fn sign_test_p_value(successes: usize, trials: usize) -> f64 {
    if successes == 0 {
        return 1.0;
    }
    if successes > trials {
        return 0.0;
    }
    // log C(n, k) accumulated to stay finite for large n
    let n = trials as f64;
    let mut log_c = 0.0f64;
    let mut total = 0.0f64;
    let log_half_n = -n * std::f64::consts::LN_2;
    for k in 0..=trials {
        if k > 0 {
            log_c += ((trials - k + 1) as f64).ln() - (k as f64).ln();
        }
        if k >= successes {
            total += (log_c + log_half_n).exp();
        }
    }
    total.min(1.0)
}

/// Outcome of a paired one-sided sign test.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct SignTest {
    /// Pairs where the tested direction held strictly.
    pub positive: usize,
    /// Pairs where it failed strictly.
    pub negative: usize,
    /// Exact ties, discarded.
    pub ties: usize,
    pub p_value: f64,
}

impl SignTest {
    /// Test whether `greater[i] > lesser[i]` holds more often than chance.
    pub fn greater(greater: &[f64], lesser: &[f64]) -> Self {
        let mut positive = 0;
        let mut negative = 0;
        let mut ties = 0;
        for (a, b) in greater.iter().zip(lesser) {
            if a > b {
                positive += 1;
            } else if a < b {
                negative += 1;
            } else {
                ties += 1;
            }
        }
        Self {
            positive,
            negative,
            ties,
            p_value: sign_test_p_value(positive, positive + negative),
        }
    }

    pub fn significant(&self, level: f64) -> bool {
        self.p_value < level
    }
}

/// Wilson score interval for `successes / trials` at normal quantile `z`.
pub fn wilson_interval(successes: usize, trials: usize, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    let lo = if successes == 0 { 0.0 } else { (center - half).max(0.0) };
    let hi = if successes >= trials { 1.0 } else { (center + half).min(1.0) };
    (lo, hi)
}
