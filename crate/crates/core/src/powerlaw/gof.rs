use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::rng::{replicate_seed, stream, STREAM_BOOTSTRAP};

use super::fit::{fit_power_law, FitResult};
use super::zeta::hurwitz_zeta;
use super::PowerLawError;

/// Rejection threshold for the bootstrap p-value.
pub const REJECT_AT_OR_BELOW: f64 = 0.1;
pub const DEFAULT_SYNTHETIC_RUNS: usize = 1000;
/// Fewer runs than this resolve the p-value too coarsely; a warning is attached.
pub const MIN_ADVISED_RUNS: usize = 100;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GofResult {
    pub p_value: f64,
    pub synthetic_runs: usize,
    pub reject: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
}

const TABLE_LEN: usize = 1 << 16;

/// Exact inverse-CDF sampler of a discrete power law on `x >= x_min`.
#[derive(Clone, Debug)]
pub struct DiscretePowerLaw {
    alpha: f64,
    x_min: u64,
    norm: f64,
    /// `P(X >= x_min + i)`
    survival: Vec<f64>,
}

impl DiscretePowerLaw {
    pub fn new(alpha: f64, x_min: u64) -> Self {
        assert!(alpha > 1.0 && x_min >= 1);
        let norm = hurwitz_zeta(alpha, x_min as f64);
        let survival = (0..TABLE_LEN as u64)
            .map(|i| hurwitz_zeta(alpha, (x_min + i) as f64) / norm)
            .collect();
        DiscretePowerLaw {
            alpha,
            x_min,
            norm,
            survival,
        }
    }

    pub fn survival(&self, x: u64) -> f64 {
        if x <= self.x_min {
            return 1.0;
        }
        match self.survival.get((x - self.x_min) as usize) {
            Some(&s) => s,
            None => hurwitz_zeta(self.alpha, x as f64) / self.norm,
        }
    }

    /// Largest `x` with `P(X >= x) >= u`, for `u` in `(0, 1]`.
    pub fn quantile(&self, u: f64) -> u64 {
        let idx = self.survival.partition_point(|&s| s >= u);
        if idx < self.survival.len() {
            return self.x_min + idx as u64 - 1;
        }
        // beyond the table: bracket by doubling, then bisect
        let mut lo = self.x_min + self.survival.len() as u64 - 1;
        let mut hi = lo.saturating_mul(2);
        while self.survival(hi) >= u && hi < u64::MAX / 2 {
            lo = hi;
            hi = hi.saturating_mul(2);
        }
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if self.survival(mid) >= u {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        let u = 1.0 - rng.random::<f64>();
        self.quantile(u)
    }
}

/// Semi-parametric bootstrap goodness-of-fit test.
///
/// Each synthetic data set has `data.len()` points: with probability
/// `tail_count / n` a point is drawn from the fitted power law, otherwise it is
/// resampled from the observed values below `x_min`. Every synthetic set is
/// refitted from scratch (cutoff included) and the p-value is the fraction of
/// synthetic KS distances at least as large as the observed one. Replicate `i`
/// draws from its own derived seed.
pub fn goodness_of_fit(data: &[u64], fit: &FitResult, synthetic_runs: usize, seed: u64) -> Result<GofResult, PowerLawError> {
    if synthetic_runs == 0 {
        return Err(PowerLawError::NoSyntheticRuns);
    }
    let n = data.len();
    let body: Vec<u64> = data.iter().copied().filter(|&x| x < fit.x_min).collect();
    let tail_count = n - body.len();
    if tail_count != fit.tail_count {
        return Err(PowerLawError::FitMismatch);
    }
    let tail_prob = tail_count as f64 / n as f64;
    let law = DiscretePowerLaw::new(fit.alpha, fit.x_min);

    let mut synthetic = Vec::with_capacity(n);
    let mut exceed = 0usize;
    for run in 0..synthetic_runs {
        let mut rng = stream(replicate_seed(seed, run as u64), STREAM_BOOTSTRAP);
        synthetic.clear();
        for _ in 0..n {
            if body.is_empty() || rng.random::<f64>() < tail_prob {
                synthetic.push(law.sample(&mut rng));
            } else {
                synthetic.push(body[rng.random_range(0..body.len())]);
            }
        }
        // an unfittable replicate cannot beat the observed fit
        let ks = fit_power_law(&synthetic).map_or(f64::INFINITY, |f| f.ks_distance);
        if ks >= fit.ks_distance {
            exceed += 1;
        }
    }
    let p_value = exceed as f64 / synthetic_runs as f64;
    Ok(GofResult {
        p_value,
        synthetic_runs,
        reject: p_value <= REJECT_AT_OR_BELOW,
        warning: (synthetic_runs < MIN_ADVISED_RUNS)
            .then(|| format!("only {synthetic_runs} synthetic runs; p-value resolution is coarse")),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CcdfPoint {
    pub k: u64,
    /// empirical `P(K >= k)`
    pub empirical: f64,
    /// fitted `P(K >= k)` scaled by the tail fraction; `None` below `x_min`
    pub fitted: Option<f64>,
}

/// Empirical complementary CDF at every distinct value, with the fitted tail.
pub fn ccdf_table(data: &[u64], fit: &FitResult) -> Vec<CcdfPoint> {
    let mut sorted = data.to_vec();
    sorted.sort_unstable();
    let n = sorted.len() as f64;
    let norm = hurwitz_zeta(fit.alpha, fit.x_min as f64);
    let tail_frac = fit.tail_count as f64 / n;
    let mut out = Vec::new();
    let mut i = 0;
    while i < sorted.len() {
        let k = sorted[i];
        out.push(CcdfPoint {
            k,
            empirical: (sorted.len() - i) as f64 / n,
            fitted: (k >= fit.x_min).then(|| tail_frac * hurwitz_zeta(fit.alpha, k as f64) / norm),
        });
        while i < sorted.len() && sorted[i] == k {
            i += 1;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;

    #[test]
    fn quantile_inverts_survival() {
        let law = DiscretePowerLaw::new(2.5, 5);
        assert_eq!(law.quantile(1.0), 5);
        for &u in &[0.9, 0.5, 0.1, 1e-3, 1e-6, 1e-9] {
            let x = law.quantile(u);
            assert!(law.survival(x) >= u);
            assert!(law.survival(x + 1) < u);
        }
    }

    #[test]
    fn sampler_frequency_at_cutoff() {
        let law = DiscretePowerLaw::new(2.5, 1);
        let mut rng = stream(5, 0);
        let hits = (0..100_000).filter(|_| law.sample(&mut rng) == 1).count();
        let p1 = 1.0 / hurwitz_zeta(2.5, 1.0);
        assert!((hits as f64 / 1e5 - p1).abs() < 0.01);
    }

    #[test]
    fn ccdf_starts_at_one() {
        let data: Vec<u64> = (1..=20).collect();
        let fit = FitResult {
            alpha: 2.0,
            x_min: 5,
            ks_distance: 0.1,
            tail_count: 16,
        };
        let t = ccdf_table(&data, &fit);
        assert_eq!(t.len(), 20);
        assert_eq!(t[0].empirical, 1.0);
        assert_eq!(t[0].fitted, None);
        assert!((t[4].fitted.unwrap() - 0.8).abs() < 1e-12);
    }

    #[test]
    fn few_runs_warn_and_mismatch_errors() {
        let data: Vec<u64> = (0..200).map(|i| 1 + (i * 7919 % 13) as u64 + (i % 17 == 0) as u64 * 30).collect();
        let fit = fit_power_law(&data).unwrap();
        let gof = goodness_of_fit(&data, &fit, 20, 3).unwrap();
        assert!(gof.warning.is_some());
        assert!((gof.p_value * 20.0).fract() == 0.0);
        assert_eq!(gof.reject, gof.p_value <= 0.1);
        let bad = FitResult { tail_count: 1, ..fit };
        assert!(matches!(goodness_of_fit(&data, &bad, 20, 3), Err(PowerLawError::FitMismatch)));
    }
}
