//! Seeded ARMA simulation, used by examples, calibration tests, and the
//! synthetic sample data generator.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rand_distr::StandardNormal;

/// Simulates `n` observations of a Gaussian ARMA(p,q) process around
/// `mean` with innovation variance `sigma2`. The first `burn_in` draws
/// are discarded so the series starts near stationarity. Fully
/// deterministic given `seed`.
pub fn simulate_arma(
    ar: &[f64],
    ma: &[f64],
    mean: f64,
    sigma2: f64,
    n: usize,
    seed: u64,
    burn_in: usize,
) -> Vec<f64> {
    let mut rng = StdRng::seed_from_u64(seed);
    let sigma = sigma2.sqrt();
    let total = n + burn_in;
    let eps: Vec<f64> = (0..total)
        .map(|_| sigma * rng.sample::<f64, _>(StandardNormal))
        .collect();

    let mut deviations = vec![0.0; total];
    for t in 0..total {
        let mut value = eps[t];
        for (j, &theta) in ma.iter().enumerate() {
            if t > j {
                value += theta * eps[t - j - 1];
            }
        }
        for (i, &phi) in ar.iter().enumerate() {
            if t > i {
                value += phi * deviations[t - i - 1];
            }
        }
        deviations[t] = value;
    }

    deviations[burn_in..].iter().map(|d| d + mean).collect()
}

/// A pure random walk: cumulative sum of unit-variance Gaussian steps.
pub fn simulate_random_walk(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut y = Vec::with_capacity(n);
    let mut level = 0.0;
    for _ in 0..n {
        level += rng.sample::<f64, _>(StandardNormal);
        y.push(level);
    }
    y
}
