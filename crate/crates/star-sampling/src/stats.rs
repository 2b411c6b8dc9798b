//! Small numeric helpers shared by estimators and the Monte Carlo harness.

/// Kahan compensated accumulator.
///
/// Some cost sums run over ~1e5 terms (small edge densities push the SSS
/// horizon toward the graph order), so plain summation drift is avoided.
#[derive(Clone, Copy, Debug, Default)]
pub struct KahanSum {
    sum: f64,
    comp: f64,
}

impl KahanSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let y = x - self.comp;
        let t = self.sum + y;
        self.comp = (t - self.sum) - y;
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum
    }
}

/// Sample mean, Bessel-corrected standard deviation, and 95% CI half-width.
pub fn mean_sd_ci95(values: &[f64]) -> (f64, f64, f64) {
    let n = values.len();
    assert!(n > 0, "mean of an empty sample");
    // Welford's recurrence; numerically stable for long trial vectors.
    let mut mean = 0.0;
    let mut m2 = 0.0;
    for (i, &x) in values.iter().enumerate() {
        let delta = x - mean;
        mean += delta / (i + 1) as f64;
        m2 += delta * (x - mean);
    }
    if n < 2 {
        return (mean, 0.0, 0.0);
    }
    let sd = (m2 / (n - 1) as f64).sqrt();
    let half_width = 1.96 * sd / (n as f64).sqrt();
    (mean, sd, half_width)
}

/// `(1-s)^k` for real `k`, accurate across the whole `s` range.
pub(crate) fn sbar_pow(s: f64, k: f64) -> f64 {
    if k == 0.0 {
        1.0
    } else {
        (k * (-s).ln_1p()).exp()
    }
}

/// `1 - (1-s)^k` without cancellation for small `s`.
pub(crate) fn one_minus_sbar_pow(s: f64, k: f64) -> f64 {
    if k == 0.0 {
        0.0
    } else {
        -(k * (-s).ln_1p()).exp_m1()
    }
}
