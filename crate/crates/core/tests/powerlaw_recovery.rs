mod common;

use common::zipf_tail;
use pcn_resilience::powerlaw::{fit_power_law, goodness_of_fit, ks_distance, DiscretePowerLaw};
use pcn_resilience::rng::replicate_seed;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn recovers_exponent_and_cutoff() {
    for seed in 0..5 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let data = zipf_tail(&mut rng, 2.5, 5, 10_000);
        let fit = fit_power_law(&data).unwrap();
        assert!((2.4..=2.6).contains(&fit.alpha), "seed {seed}: {fit:?}");
        assert!((3..=10).contains(&fit.x_min), "seed {seed}: {fit:?}");
        assert!(fit.alpha > 1.0 && (0.0..=1.0).contains(&fit.ks_distance) && fit.tail_count >= 2);
    }
}

#[test]
fn library_sampler_agrees_with_independent_sampler() {
    // compare empirical frequencies of the two samplers on the first values
    let law = DiscretePowerLaw::new(2.5, 5);
    let mut a = ChaCha8Rng::seed_from_u64(1);
    let mut b = ChaCha8Rng::seed_from_u64(2);
    let n = 200_000;
    let lib: Vec<u64> = (0..n).map(|_| law.sample(&mut a)).collect();
    let oracle = zipf_tail(&mut b, 2.5, 5, n);
    for k in 5..12 {
        let p = lib.iter().filter(|&&x| x == k).count() as f64 / n as f64;
        let q = oracle.iter().filter(|&&x| x == k).count() as f64 / n as f64;
        let sd = (q * (1.0 - q) / n as f64).sqrt();
        assert!((p - q).abs() < 6.0 * sd, "k={k}: {p} vs {q}");
    }
}

#[test]
fn ks_of_true_model_shrinks_with_sample_size() {
    let law = DiscretePowerLaw::new(2.5, 5);
    let mean_ks = |n: usize| {
        (0..20u64)
            .map(|seed| {
                let mut rng = ChaCha8Rng::seed_from_u64(replicate_seed(seed, n as u64));
                let data: Vec<u64> = (0..n).map(|_| law.sample(&mut rng)).collect();
                ks_distance(&data, 2.5, 5)
            })
            .sum::<f64>()
            / 20.0
    };
    let (k3, k4, k5) = (mean_ks(1_000), mean_ks(10_000), mean_ks(100_000));
    assert!(k3 > k4 && k4 > k5, "{k3} {k4} {k5}");
}

#[test]
fn fit_ignores_input_order() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut data = zipf_tail(&mut rng, 2.2, 3, 3000);
    let fit = fit_power_law(&data).unwrap();
    for _ in 0..3 {
        data.shuffle(&mut rng);
        assert_eq!(fit_power_law(&data).unwrap(), fit);
    }
}

#[test]
fn p_value_is_a_proportion() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let data = zipf_tail(&mut rng, 2.5, 2, 1500);
    let fit = fit_power_law(&data).unwrap();
    for runs in [100, 137, 250] {
        let gof = goodness_of_fit(&data, &fit, runs, 3).unwrap();
        let scaled = gof.p_value * runs as f64;
        assert!((scaled - scaled.round()).abs() < 1e-9);
        assert_eq!(gof.reject, gof.p_value <= 0.1);
        assert_eq!(gof, goodness_of_fit(&data, &fit, runs, 3).unwrap());
    }
}

#[test]
fn genuine_power_law_is_accepted() {
    let accepted = (0..20u64)
        .filter(|&seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(1000 + seed);
            let data = zipf_tail(&mut rng, 2.5, 5, 2000);
            let fit = fit_power_law(&data).unwrap();
            goodness_of_fit(&data, &fit, 500, seed).unwrap().p_value > 0.1
        })
        .count();
    assert!(accepted >= 18, "accepted in {accepted}/20 seeds");
}

#[test]
fn exponential_degrees_are_rejected() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    // 1 + floor(Exp(mean 0.5)), i.e. P(k) ∝ e^{-2k}
    let data: Vec<u64> = (0..2000)
        .map(|_| 1 + (-(1.0 - rng.random::<f64>()).ln() * 0.5).floor() as u64)
        .collect();
    let fit = fit_power_law(&data).unwrap();
    let gof = goodness_of_fit(&data, &fit, 500, 1).unwrap();
    assert!(gof.reject, "{fit:?} {gof:?}");
}
