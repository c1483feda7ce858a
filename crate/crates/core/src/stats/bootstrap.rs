//! Non-parametric bootstrap standard error of a sample mean.
//!
//! Randomness comes from ChaCha8 (a counter-based generator): resample `l`
//! of a run seeded with `seed` draws from stream `l` of
//! `ChaCha8Rng::seed_from_u64(seed)`. Each resample therefore has its own
//! independent stream, and results do not depend on evaluation order.
//!
//! The sample is treated as a multiset of distinct values with counts.
//! When there are far fewer distinct values than observations, a resample
//! is drawn as multinomial counts over the distinct values, which has the
//! same distribution as drawing `n` indices with replacement.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};

use super::StatsError;

pub const DEFAULT_RESAMPLES: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BootstrapEstimate {
    /// Mean of the original sample.
    pub point: f64,
    /// Sample standard deviation of the resample means.
    pub stderr: f64,
    pub resamples: usize,
    pub seed: u64,
}

/// Mixes a base seed with an index (SplitMix64 finalizer).
pub fn derive_seed(base: u64, index: u64) -> u64 {
    let mut z = base ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn bootstrap_stderr(samples: &[f64], resamples: usize, seed: u64) -> Result<BootstrapEstimate, StatsError> {
    if samples.iter().any(|x| !x.is_finite()) {
        return Err(StatsError::NonFinite);
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut counts: Vec<(f64, u64)> = Vec::new();
    for x in sorted {
        match counts.last_mut() {
            Some((v, c)) if *v == x => *c += 1,
            _ => counts.push((x, 1)),
        }
    }
    bootstrap_stderr_counts(&counts, resamples, seed)
}

/// Bootstrap over a multiset given as `(value, multiplicity)` pairs.
///
/// Results are deterministic in `(multiset, resamples, seed)` as long as the
/// pairs are given in the same order; pass them sorted by value for
/// permutation invariance.
pub fn bootstrap_stderr_counts(
    counts: &[(f64, u64)],
    resamples: usize,
    seed: u64,
) -> Result<BootstrapEstimate, StatsError> {
    if resamples == 0 {
        return Err(StatsError::NoResamples);
    }
    let n: u64 = counts.iter().map(|(_, c)| c).sum();
    if n == 0 {
        return Err(StatsError::EmptySample);
    }
    if counts.iter().any(|(v, _)| !v.is_finite()) {
        return Err(StatsError::NonFinite);
    }
    let point = counts.iter().map(|(v, c)| v * *c as f64).sum::<f64>() / n as f64;

    let distinct = counts.iter().filter(|(_, c)| *c > 0).count() as u64;
    let means: Vec<f64> = if distinct <= 1 {
        vec![point; resamples]
    } else if distinct.saturating_mul(4) < n {
        (0..resamples)
            .map(|l| multinomial_mean(counts, n, &mut resample_rng(seed, l)))
            .collect()
    } else {
        let expanded: Vec<f64> = counts
            .iter()
            .flat_map(|(v, c)| std::iter::repeat_n(*v, *c as usize))
            .collect();
        (0..resamples)
            .map(|l| {
                let mut rng = resample_rng(seed, l);
                let sum: f64 = (0..n).map(|_| expanded[rng.random_range(0..expanded.len())]).sum();
                sum / n as f64
            })
            .collect()
    };

    Ok(BootstrapEstimate {
        point,
        stderr: sample_std(&means),
        resamples,
        seed,
    })
}

fn resample_rng(seed: u64, l: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(l as u64);
    rng
}

fn multinomial_mean(counts: &[(f64, u64)], n: u64, rng: &mut ChaCha8Rng) -> f64 {
    let mut left_draws = n;
    let mut left_weight = n;
    let mut sum = 0.0;
    for &(value, count) in counts {
        if left_draws == 0 {
            break;
        }
        if count == 0 {
            continue;
        }
        let k = if count == left_weight {
            left_draws
        } else {
            let p = count as f64 / left_weight as f64;
            Binomial::new(left_draws, p).expect("valid binomial").sample(rng)
        };
        sum += value * k as f64;
        left_draws -= k;
        left_weight -= count;
    }
    sum / n as f64
}

fn sample_std(values: &[f64]) -> f64 {
    if values.len() < 2 {
        return 0.0;
    }
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    let ss: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
    (ss / (values.len() - 1) as f64).sqrt()
}
