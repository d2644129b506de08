use serde::{Deserialize, Serialize};

use super::zeta::hurwitz_zeta;
use super::PowerLawError;

/// Fewest observations accepted by [`fit_power_law`].
pub const MIN_OBSERVATIONS: usize = 10;
/// Above this many observations the tail must keep [`LARGE_SAMPLE_MIN_TAIL`].
pub const LARGE_SAMPLE: usize = 500;
pub const LARGE_SAMPLE_MIN_TAIL: usize = 50;
pub const ALPHA_LOWER: f64 = 1.0 + 1e-6;
pub const ALPHA_UPPER: f64 = 6.0;
pub const ALPHA_TOL: f64 = 1e-4;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub alpha: f64,
    pub x_min: u64,
    pub ks_distance: f64,
    pub tail_count: usize,
}

/// Sorted distinct values with counts, plus suffix statistics per cutoff.
struct Histogram {
    values: Vec<u64>,
    counts: Vec<usize>,
    /// observations `>= values[j]`
    tail_n: Vec<usize>,
    /// `Σ ln x` over observations `>= values[j]`
    tail_log: Vec<f64>,
}

impl Histogram {
    fn new(data: &[u64]) -> Self {
        let mut sorted = data.to_vec();
        sorted.sort_unstable();
        let mut values = Vec::new();
        let mut counts: Vec<usize> = Vec::new();
        for x in sorted {
            if values.last() == Some(&x) {
                *counts.last_mut().unwrap() += 1;
            } else {
                values.push(x);
                counts.push(1);
            }
        }
        let k = values.len();
        let mut tail_n = vec![0; k];
        let mut tail_log = vec![0.0; k];
        let (mut n, mut acc) = (0usize, 0.0);
        for j in (0..k).rev() {
            n += counts[j];
            acc += counts[j] as f64 * (values[j] as f64).ln();
            tail_n[j] = n;
            tail_log[j] = acc;
        }
        Histogram {
            values,
            counts,
            tail_n,
            tail_log,
        }
    }
}

/// Discrete power-law log-likelihood of `n` tail points with `Σ ln x = log_sum`.
fn log_likelihood(alpha: f64, x_min: u64, n: usize, log_sum: f64) -> f64 {
    -(n as f64) * hurwitz_zeta(alpha, x_min as f64).ln() - alpha * log_sum
}

/// Golden-section maximisation of the (concave) likelihood over the α bracket.
pub(crate) fn mle_alpha(x_min: u64, n: usize, log_sum: f64) -> f64 {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let f = |a: f64| log_likelihood(a, x_min, n, log_sum);
    let (mut lo, mut hi) = (ALPHA_LOWER, ALPHA_UPPER);
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while hi - lo > ALPHA_TOL {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        }
    }
    0.5 * (lo + hi)
}

/// KS distance between the empirical CDF of a tail (distinct `values` with
/// `counts`, all `>= values[0] = x_min`) and the fitted discrete CDF.
///
/// Both CDFs are step functions on the integers, so the supremum is attained
/// at an observed value or just before the next one.
fn ks_tail(values: &[u64], counts: &[usize], n: usize, alpha: f64) -> f64 {
    let norm = hurwitz_zeta(alpha, values[0] as f64);
    let model_cdf = |x_plus_one: u64| 1.0 - hurwitz_zeta(alpha, x_plus_one as f64) / norm;
    let mut cum = 0usize;
    let mut worst: f64 = 0.0;
    for (i, (&v, &c)) in values.iter().zip(counts).enumerate() {
        cum += c;
        let emp = cum as f64 / n as f64;
        worst = worst.max((emp - model_cdf(v + 1)).abs());
        if let Some(&next) = values.get(i + 1) {
            if next > v + 1 {
                worst = worst.max((emp - model_cdf(next)).abs());
            }
        }
    }
    worst
}

/// KS distance between the observations `>= x_min` in `data` and a discrete
/// power law with the given parameters.
pub fn ks_distance(data: &[u64], alpha: f64, x_min: u64) -> f64 {
    let tail: Vec<u64> = data.iter().copied().filter(|&x| x >= x_min).collect();
    if tail.is_empty() {
        return 1.0;
    }
    let h = Histogram::new(&tail);
    if h.values[0] != x_min {
        // the model puts mass on x_min that the sample lacks
        let mut values = vec![x_min];
        values.extend(&h.values);
        let mut counts = vec![0];
        counts.extend(&h.counts);
        return ks_tail(&values, &counts, tail.len(), alpha);
    }
    ks_tail(&h.values, &h.counts, tail.len(), alpha)
}

fn validate(data: &[u64]) -> Result<(), PowerLawError> {
    if data.len() < MIN_OBSERVATIONS {
        return Err(PowerLawError::InsufficientData {
            observations: data.len(),
            required: MIN_OBSERVATIONS,
        });
    }
    if data.contains(&0) {
        return Err(PowerLawError::NonPositive);
    }
    Ok(())
}

/// Fits a discrete power law to `data` (values `>= 1`).
///
/// Every distinct value is tried as `x_min`; α maximises the zeta-normalised
/// likelihood of the tail and the cutoff with the smallest KS distance wins
/// (ties to the smaller cutoff). A candidate needs at least two distinct tail
/// values, and samples of 500+ observations keep at least 50 in the tail.
pub fn fit_power_law(data: &[u64]) -> Result<FitResult, PowerLawError> {
    validate(data)?;
    let h = Histogram::new(data);
    let min_tail = if data.len() >= LARGE_SAMPLE { LARGE_SAMPLE_MIN_TAIL } else { 2 };
    let mut best: Option<FitResult> = None;
    // the last distinct value leaves a constant tail
    for j in 0..h.values.len().saturating_sub(1) {
        let tail_count = h.tail_n[j];
        if tail_count < min_tail {
            break;
        }
        let x_min = h.values[j];
        let alpha = mle_alpha(x_min, tail_count, h.tail_log[j]);
        let ks = ks_tail(&h.values[j..], &h.counts[j..], tail_count, alpha);
        if best.is_none_or(|b| ks < b.ks_distance) {
            best = Some(FitResult {
                alpha,
                x_min,
                ks_distance: ks,
                tail_count,
            });
        }
    }
    best.ok_or(PowerLawError::NoValidCutoff)
}
