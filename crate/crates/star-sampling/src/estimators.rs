//! Closed-form, bound, and approximate expected-cost estimators for the
//! three star-sampling variants.
//!
//! Everything here is a pure function of `(n, n0*, s)` or of measured graph
//! quantities; nothing samples. Unit costs count star samples; linear costs
//! count extended degrees (center plus points) over all samples taken.
//!
//! Indexing convention: conditional hit probabilities are indexed by the
//! 1-based sample number `t`, i.e. the probability that sample `t` hits given
//! the first `t - 1` samples missed. Error-bound arguments instead count the
//! number of completed (missed) samples, matching the recursions they come
//! from; see [`sss_error_bound`].

use crate::er::ErParams;
use crate::error::{Error, Result};
use crate::graph::ExtendedTarget;
use crate::stats::{one_minus_sbar_pow, sbar_pow, KahanSum};

/// The three scalars every ER estimator needs: graph order, target
/// cardinality, and edge probability.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EstimatorInput {
    n: usize,
    n0_star: usize,
    s: f64,
}

impl EstimatorInput {
    /// Requires `1 <= n0* <= n` and `s` in `[0, 1]`. Operations that divide
    /// by `s` or `log(1/s̄)` additionally reject the endpoints themselves.
    pub fn new(n: usize, n0_star: usize, s: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        if n0_star == 0 {
            return Err(Error::EmptyTarget);
        }
        if n0_star > n {
            return Err(Error::TargetTooLarge { n0_star, n });
        }
        if !(0.0..=1.0).contains(&s) {
            return Err(Error::InvalidProbability { value: s });
        }
        Ok(EstimatorInput { n, n0_star, s })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn n0_star(&self) -> usize {
        self.n0_star
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    fn er(&self) -> ErParams {
        ErParams::new(self.n, self.s).expect("validated on construction")
    }

    /// `E[n_0^{e,*}]`, the mean extended-target order.
    pub fn ext_mean(&self) -> f64 {
        self.er()
            .ext_target_moments(self.n0_star)
            .expect("validated on construction")
            .mean
    }

    fn require_interior_s(&self, op: &'static str) -> Result<()> {
        if self.s <= 0.0 || self.s >= 1.0 {
            Err(Error::DegenerateDensity { op, s: self.s })
        } else {
            Ok(())
        }
    }
}

/// A lower/upper pair bracketing an expected cost.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Bounds {
    pub lower: f64,
    pub upper: f64,
}

impl Bounds {
    pub fn contains(&self, x: f64) -> bool {
        self.lower <= x && x <= self.upper
    }

    pub fn scale(&self, factor: f64) -> Bounds {
        Bounds {
            lower: self.lower * factor,
            upper: self.upper * factor,
        }
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lower + self.upper)
    }
}

/// Expected draws to find one of `n_star` marked balls among `n` without
/// replacement: `(n + 1) / (n* + 1)`.
pub fn urn_mean_without_replacement(n: usize, n_star: usize) -> Result<f64> {
    if n_star == 0 || n_star > n {
        return Err(Error::CountOutOfRange {
            name: "n_star",
            value: n_star,
        });
    }
    Ok((n as f64 + 1.0) / (n_star as f64 + 1.0))
}

/// Exact SSR expected unit cost on any graph: `n / n^{e,*}`.
pub fn ssr_unit_exact(n: usize, n_e_star: usize) -> Result<f64> {
    if n_e_star == 0 || n_e_star > n {
        return Err(Error::CountOutOfRange {
            name: "n_e_star",
            value: n_e_star,
        });
    }
    Ok(n as f64 / n_e_star as f64)
}

/// Exact SSC expected unit cost on any graph: `(n + 1) / (n^{e,*} + 1)`.
/// Strictly below [`ssr_unit_exact`] whenever `n^{e,*} < n`.
pub fn ssc_unit_exact(n: usize, n_e_star: usize) -> Result<f64> {
    if n_e_star == 0 || n_e_star > n {
        return Err(Error::CountOutOfRange {
            name: "n_e_star",
            value: n_e_star,
        });
    }
    Ok((n as f64 + 1.0) / (n_e_star as f64 + 1.0))
}

/// Bounds on `E[1 / (a + x)]` for `x ~ bin(m, p)` and `a > 0`:
/// `1/(a + mp)` below, `(a + 1 - p) / (a (a + 1 + (m-1) p))` above.
pub fn inverse_moment_bounds(a: f64, m: usize, p: f64) -> Result<Bounds> {
    if a <= 0.0 {
        return Err(Error::NonPositive {
            name: "a",
            value: a,
        });
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidProbability { value: p });
    }
    let m = m as f64;
    Ok(Bounds {
        lower: 1.0 / (a + m * p),
        upper: (a + 1.0 - p) / (a * (a + 1.0 + (m - 1.0) * p)),
    })
}

/// SSR expected-unit-cost bounds on an ER graph:
/// `n E[1 / n_0^{e,*}]` bracketed through [`inverse_moment_bounds`] with
/// `a = n0*`, `m = n - n0*`, `p = 1 - s̄^{n0*}`.
pub fn ssr_unit_bounds_er(input: &EstimatorInput) -> Bounds {
    let a = input.n0_star as f64;
    let p = one_minus_sbar_pow(input.s, input.n0_star as f64);
    let inv = inverse_moment_bounds(a, input.n - input.n0_star, p).expect("validated input");
    inv.scale(input.n as f64)
}

/// SSC expected-unit-cost bounds on an ER graph:
/// `(n + 1) E[1 / (n_0^{e,*} + 1)]`, i.e. `a = n0* + 1`.
pub fn ssc_unit_bounds_er(input: &EstimatorInput) -> Bounds {
    let a = input.n0_star as f64 + 1.0;
    let p = one_minus_sbar_pow(input.s, input.n0_star as f64);
    let inv = inverse_moment_bounds(a, input.n - input.n0_star, p).expect("validated input");
    inv.scale(input.n as f64 + 1.0)
}

/// Conditional means after `misses` missed SSS samples:
/// `(E[n_t^{e,*} | misses], E[n_t | misses])` with `t = misses`.
fn sss_conditional_means(input: &EstimatorInput, misses: f64) -> (f64, f64) {
    let n = input.n as f64;
    let n0 = input.n0_star as f64;
    let s = input.s;
    let s_bar = 1.0 - s;
    let decay = sbar_pow(s, misses);
    let gone = one_minus_sbar_pow(s, misses);
    let ext = (input.ext_mean() - n0) * decay + n0;
    let order = n * decay - (s_bar / s) * gone;
    (ext, order)
}

/// Unclamped ratio-of-means hit probability for sample `t` (exponent `t-1`).
pub(crate) fn sss_hit_prob_raw(input: &EstimatorInput, t: usize) -> f64 {
    let (ext, order) = sss_conditional_means(input, (t - 1) as f64);
    ext / order
}

/// Horizons of the SSS conditional hit probability, `(t1, t2)`: the
/// (continuous) miss counts where the approximation reaches 1 and where its
/// denominator degenerates. Always `t1 < t2`.
pub fn sss_horizons(input: &EstimatorInput) -> Result<(f64, f64)> {
    input.require_interior_s("sss_horizons")?;
    let n = input.n as f64;
    let n0 = input.n0_star as f64;
    let s = input.s;
    let s_bar = 1.0 - s;
    let log_inv_sbar = -(-s).ln_1p();
    let t1 = ((s * (n - input.ext_mean() + n0) + s_bar).ln() - (s_bar + n0 * s).ln())
        / log_inv_sbar;
    let t2 = (n * s / s_bar).ln_1p() / log_inv_sbar;
    Ok((t1, t2))
}

/// Truncation horizon `T = max(1, floor(t1))` in sample-number indexing.
fn sss_horizon_samples(input: &EstimatorInput) -> Result<usize> {
    let (t1, _) = sss_horizons(input)?;
    Ok((t1.floor() as usize).max(1))
}

/// Approximate probability that SSS sample `t` hits the target given the
/// first `t - 1` samples missed.
///
/// Sample 1 returns the exact value `E[n_0^{e,*}] / n`. The value at the
/// horizon `t = T` is forced to 1 so the first-hit law normalizes; between,
/// values are defensively clamped to `[0, 1]`.
pub fn sss_conditional_hit_prob(input: &EstimatorInput, t: usize) -> Result<f64> {
    input.require_interior_s("sss_conditional_hit_prob")?;
    if t == 0 {
        return Err(Error::CountOutOfRange { name: "t", value: t });
    }
    let horizon = sss_horizon_samples(input)?;
    if t > horizon {
        return Err(Error::BeyondHorizon { t, horizon });
    }
    if t == horizon {
        return Ok(1.0);
    }
    if t == 1 {
        return Ok(input.ext_mean() / input.n as f64);
    }
    Ok(sss_hit_prob_raw(input, t).clamp(0.0, 1.0))
}

/// Upper bound on the first-order error of the ratio-of-means approximation
/// after `t` missed samples (so `t = 0` means nothing sampled yet and the
/// bound is 0).
///
/// Assembled as `var(n_t | misses) * E[n_t^{e,*} | misses] / E[n_t | misses]^3`
/// from the watch/draw moments: the subset-draw variance with the whole
/// vertex set watched, and the two conditional means.
pub fn sss_error_bound(input: &EstimatorInput, t: usize) -> Result<f64> {
    input.require_interior_s("sss_error_bound")?;
    let horizon = sss_horizon_samples(input)?;
    if t > horizon {
        return Err(Error::BeyondHorizon { t, horizon });
    }
    let (ext, order) = sss_conditional_means(input, t as f64);
    let variance = subset_draw_variance(input.n as f64, input.s, t as f64);
    Ok(variance * ext / (order * order * order))
}

/// Approximate SSS first-hit schedule and expected unit cost.
///
/// `p_tilde[t-1]` is the conditional hit probability of sample `t` over
/// `t = 1..=T` with the terminal probability forced to 1, `q_tilde` the
/// induced unconditional first-hit law (sums to 1), and `expected_unit_cost`
/// its mean.
#[derive(Clone, Debug)]
pub struct SssSchedule {
    pub p_tilde: Vec<f64>,
    pub q_tilde: Vec<f64>,
    /// Continuous horizon where the conditional probability reaches 1.
    pub t1: f64,
    /// Continuous horizon where the denominator degenerates.
    pub t2: f64,
    /// Approximate expected unit cost `c̃_u^{SSS}`.
    pub expected_unit_cost: f64,
    /// First sample index strictly before the terminal one where the
    /// defensive clamp fired; a signal the parameters sit outside the
    /// approximation's validity regime.
    pub early_clamp: Option<usize>,
}

impl SssSchedule {
    /// Truncation horizon `T` (number of support points).
    pub fn horizon(&self) -> usize {
        self.p_tilde.len()
    }
}

/// Builds the full SSS schedule for `input`; see [`SssSchedule`].
pub fn sss_schedule(input: &EstimatorInput) -> Result<SssSchedule> {
    input.require_interior_s("sss_schedule")?;
    let (t1, t2) = sss_horizons(input)?;
    let horizon = (t1.floor() as usize).max(1);
    let mut p_tilde = Vec::with_capacity(horizon);
    let mut early_clamp = None;
    for t in 1..=horizon {
        let p = if t == horizon {
            1.0
        } else if t == 1 {
            input.ext_mean() / input.n as f64
        } else {
            let raw = sss_hit_prob_raw(input, t);
            if !(0.0..=1.0).contains(&raw) && early_clamp.is_none() {
                early_clamp = Some(t);
            }
            raw.clamp(0.0, 1.0)
        };
        p_tilde.push(p);
    }

    let mut q_tilde = Vec::with_capacity(horizon);
    let mut survival = 1.0; // P(first t - 1 samples all miss)
    let mut mean = KahanSum::new();
    for &p in &p_tilde {
        q_tilde.push(p * survival);
        mean.add(survival);
        survival *= 1.0 - p;
    }
    Ok(SssSchedule {
        p_tilde,
        q_tilde,
        t1,
        t2,
        expected_unit_cost: mean.value(),
        early_clamp,
    })
}

/// Finite-`n` conditional hit-probability ratios of the three variants at
/// sample `t`, with the ER density coupled to the order as `s = c / n`:
/// `(p̃^SSS/p^SSR, p^SSR/p^SSC, p̃^SSS/p^SSC)`. All three approach 1 as `n`
/// grows.
pub fn variant_ratio_check(n: usize, c: f64, n0_star: usize, t: usize) -> Result<(f64, f64, f64)> {
    if c <= 0.0 {
        return Err(Error::NonPositive { name: "c", value: c });
    }
    if t == 0 || t >= n {
        return Err(Error::CountOutOfRange { name: "t", value: t });
    }
    let input = EstimatorInput::new(n, n0_star, c / n as f64)?;
    input.require_interior_s("variant_ratio_check")?;
    let ext_mean = input.ext_mean();
    let p_ssr = ext_mean / n as f64;
    let p_ssc = ext_mean / (n - t + 1) as f64;
    let p_sss = sss_hit_prob_raw(&input, t);
    Ok((p_sss / p_ssr, p_ssr / p_ssc, p_sss / p_ssc))
}

/// Exact SSR expected linear cost on any graph, from the measured extended
/// target: miss samples cost the complement's mean extended degree, the
/// final sample costs the extended target's mean extended degree.
pub fn ssr_linear_exact(ext: &ExtendedTarget, n: usize) -> f64 {
    let hit_cost = ext.d_in() + 1.0;
    match ext.d_out() {
        None => hit_cost,
        Some(d_out) => {
            let misses = n as f64 / ext.n_e_star() as f64 - 1.0;
            (d_out + 1.0) * misses + hit_cost
        }
    }
}

/// Approximate SSR expected linear cost on an ER graph:
/// `(1 + (n-1)s)` times the unit-cost bounds, propagated.
pub fn ssr_linear_er(input: &EstimatorInput) -> Bounds {
    let mean_ext_degree = 1.0 + (input.n as f64 - 1.0) * input.s;
    ssr_unit_bounds_er(input).scale(mean_ext_degree)
}

/// Approximate SSC expected linear cost on an ER graph, conditioned on the
/// extended-target order: `sum_t (1 + (n-t)s) prod_u (1 - n^{e,*}/(n-u+1))`.
pub fn ssc_linear_er(n: usize, n_e_star: usize, s: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    if n_e_star == 0 || n_e_star > n {
        return Err(Error::CountOutOfRange {
            name: "n_e_star",
            value: n_e_star,
        });
    }
    if !(0.0..=1.0).contains(&s) {
        return Err(Error::InvalidProbability { value: s });
    }
    let nf = n as f64;
    let ne = n_e_star as f64;
    let mut sum = KahanSum::new();
    let mut survival = 1.0;
    for t in 1..=(n - n_e_star + 1) {
        sum.add((1.0 + (nf - t as f64) * s) * survival);
        survival *= 1.0 - ne / (nf - t as f64 + 1.0);
        if survival <= 0.0 {
            break;
        }
    }
    Ok(sum.value())
}

/// [`ssc_linear_er`] averaged over the binomial-shifted law of the
/// extended-target order, by exact pmf summation.
pub fn ssc_linear_er_expected(input: &EstimatorInput) -> f64 {
    let p = one_minus_sbar_pow(input.s, input.n0_star as f64);
    let m = input.n - input.n0_star;
    let conditional =
        |k: usize| ssc_linear_er(input.n, k, input.s).expect("k within 1..=n by construction");
    if p <= 0.0 || m == 0 {
        return conditional(input.n0_star);
    }
    if p >= 1.0 {
        return conditional(input.n);
    }
    // Log-space pmf recurrence, skipping the numerically invisible tails.
    let ln_p = p.ln();
    let ln_q = (-p).ln_1p();
    let mut ln_pmf = Vec::with_capacity(m + 1);
    let mut cur = m as f64 * ln_q;
    ln_pmf.push(cur);
    for j in 0..m {
        cur += ((m - j) as f64 / (j + 1) as f64).ln() + ln_p - ln_q;
        ln_pmf.push(cur);
    }
    let peak = ln_pmf.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mut sum = KahanSum::new();
    let mut weight = KahanSum::new();
    for (j, &lp) in ln_pmf.iter().enumerate() {
        if lp < peak - 60.0 {
            continue;
        }
        let w = lp.exp();
        weight.add(w);
        sum.add(w * conditional(input.n0_star + j));
    }
    // Renormalize over the retained window.
    sum.value() / weight.value()
}

/// Approximate SSS expected linear cost on an ER graph:
/// `sum_t ((n-1)s + 1) s̄^{t-1} prod_u (1 - p̃_u)` over the schedule horizon.
pub fn sss_linear_er(input: &EstimatorInput) -> Result<f64> {
    let schedule = sss_schedule(input)?;
    let mean_first_degree = (input.n as f64 - 1.0) * input.s + 1.0;
    let mut sum = KahanSum::new();
    let mut survival = 1.0;
    for (idx, &p) in schedule.p_tilde.iter().enumerate() {
        sum.add(mean_first_degree * sbar_pow(input.s, idx as f64) * survival);
        survival *= 1.0 - p;
    }
    Ok(sum.value())
}

/// Which watch/draw configuration a moment pair describes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WatchDrawCase {
    /// Star centers are never drawn from the watch set (`D0 ∩ W0 = ∅`).
    DisjointDraw,
    /// Star centers are always drawn from the watch set (`D0 ⊆ W0`),
    /// with no immune vertices.
    SubsetDraw,
}

/// Conditional mean and variance of the surviving watch-set size after `t`
/// draws from the draw set.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WatchDrawMoments {
    pub mean: f64,
    pub variance: f64,
    pub case: WatchDrawCase,
}

fn disjoint_draw_mean(n_w0: f64, n_z0: f64, s: f64, t: f64) -> f64 {
    (n_w0 - n_z0) * sbar_pow(s, t) + n_z0
}

fn subset_draw_mean(n_w0: f64, s: f64, t: f64) -> f64 {
    n_w0 * sbar_pow(s, t) - ((1.0 - s) / s) * one_minus_sbar_pow(s, t)
}

/// Solution of the subset-draw variance recursion
/// `v_t = s̄² v_{t-1} + s s̄ (μ_{t-1} - 1)`, `v_0 = 0`:
/// the disjoint-draw variance minus `s̄/(s(1+s̄)) (1-s̄^t)(1-s̄^{t+1})`.
fn subset_draw_variance(n_w0: f64, s: f64, t: f64) -> f64 {
    let s_bar = 1.0 - s;
    let gone_t = one_minus_sbar_pow(s, t);
    let gone_t1 = one_minus_sbar_pow(s, t + 1.0);
    let base = n_w0 * sbar_pow(s, t) * gone_t;
    (base - (s_bar / (s * (1.0 + s_bar))) * gone_t * gone_t1).max(0.0)
}

/// Watch/draw moment recursions: the surviving size of a watched vertex set
/// while star centers are drawn (and stars removed, SSS-style) from a draw
/// set, after `t` draws. `n_z0` counts watch vertices immune to removal
/// (those with no draw-set neighbors); the subset case requires it be 0.
pub fn watch_draw_moments(
    n_w0: usize,
    n_z0: usize,
    s: f64,
    t: usize,
    case: WatchDrawCase,
) -> Result<WatchDrawMoments> {
    if !(0.0..=1.0).contains(&s) {
        return Err(Error::InvalidProbability { value: s });
    }
    if n_z0 > n_w0 {
        return Err(Error::ImmuneSetTooLarge { n_z0, n_w0 });
    }
    let (w, z, tf) = (n_w0 as f64, n_z0 as f64, t as f64);
    match case {
        WatchDrawCase::DisjointDraw => {
            let decay = sbar_pow(s, tf);
            Ok(WatchDrawMoments {
                mean: disjoint_draw_mean(w, z, s, tf),
                variance: (w - z) * decay * (1.0 - decay),
                case,
            })
        }
        WatchDrawCase::SubsetDraw => {
            if n_z0 > 0 {
                return Err(Error::ImmuneSetNotEmpty { n_z0 });
            }
            if s <= 0.0 {
                return Err(Error::NonPositive { name: "s", value: s });
            }
            Ok(WatchDrawMoments {
                mean: subset_draw_mean(w, s, tf),
                variance: subset_draw_variance(w, s, tf),
                case,
            })
        }
    }
}
