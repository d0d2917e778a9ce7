//! Seeded measurement of how often the zero-divisor step succeeds on its
//! first attempt.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::decompose::{find_zero_divisor, EigenRing, DEFAULT_MAX_TRIES};
use crate::error::{Error, Result};
use crate::field::FieldCtx;
use crate::skew::SkewPoly;

const Z95: f64 = 1.959963984540054;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SplitStats {
    pub trials: usize,
    pub first_try_successes: usize,
    /// Mean number of tries over trials that succeeded within the retry cap.
    pub mean_tries: f64,
    /// Wilson score interval for the first-try success probability.
    pub ci95: [f64; 2],
    pub seed: u64,
}

impl SplitStats {
    pub fn first_try_fraction(&self) -> f64 {
        if self.trials == 0 {
            0.0
        } else {
            self.first_try_successes as f64 / self.trials as f64
        }
    }
}

/// Per-trial generator: stream `index` of the master seed, so results do
/// not depend on scheduling.
pub fn trial_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// A decomposable monic polynomial: the product of two uniformly random
/// monic factors whose degrees sum to `degree`.
pub fn random_decomposable<R: rand::Rng + ?Sized>(ctx: &FieldCtx, s: u32, degree: usize, rng: &mut R) -> SkewPoly {
    let k = rng.gen_range(1..degree);
    let a = SkewPoly::random_monic(ctx, s, k, rng);
    let b = SkewPoly::random_monic(ctx, s, degree - k, rng);
    a.mul_unchecked(&b)
}

fn wilson(successes: usize, trials: usize) -> [f64; 2] {
    if trials == 0 {
        return [0.0, 1.0];
    }
    let n = trials as f64;
    let phat = successes as f64 / n;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / n;
    let centre = (phat + z2 / (2.0 * n)) / denom;
    let half = Z95 * (phat * (1.0 - phat) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    [(centre - half).max(0.0), (centre + half).min(1.0)]
}

pub fn estimate_split_success(ctx: &FieldCtx, s: u32, degree: usize, trials: usize, seed: u64) -> Result<SplitStats> {
    if degree < 2 {
        return Err(Error::InvalidArgument("degree must be at least 2".into()));
    }
    if s == 0 {
        return Err(Error::InvalidArgument("twist step must be positive".into()));
    }
    // (first try succeeded, tries needed with retry)
    let outcomes: Vec<(bool, Option<usize>)> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = trial_rng(seed, i as u64);
            let f = random_decomposable(ctx, s, degree, &mut rng);
            let ring = EigenRing::new(&f).expect("monic of positive degree");
            let first = find_zero_divisor(&ring, &mut rng, 1).found.is_some();
            if first {
                return (true, Some(1));
            }
            let retry = find_zero_divisor(&ring, &mut rng, DEFAULT_MAX_TRIES - 1);
            (false, retry.found.map(|_| retry.tries + 1))
        })
        .collect();
    let first_try_successes = outcomes.iter().filter(|o| o.0).count();
    let tries: Vec<usize> = outcomes.iter().filter_map(|o| o.1).collect();
    let mean_tries = if tries.is_empty() {
        0.0
    } else {
        tries.iter().sum::<usize>() as f64 / tries.len() as f64
    };
    Ok(SplitStats {
        trials,
        first_try_successes,
        mean_tries,
        ci95: wilson(first_try_successes, trials),
        seed,
    })
}
