//! Discrepancy of uniformly random colourings against a fixed family of
//! random relabellings, and the Gaussian extreme-value heuristic.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::discrepancy::numerator_with_masks;
use crate::error::{Error, Result};
use crate::seed::{derive_seed, rng_for, STREAM_FAMILY, STREAM_TRIALS};
use crate::sts::{construct, sample_labellings, LabelledFamily};
use crate::types::{Colouring, Order};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RandomStatsReport {
    pub n: Order,
    pub r: u8,
    pub trials: u64,
    pub labellings: usize,
    pub mean_max_disc: f64,
    /// Standard error of the mean over trials.
    pub std_error: f64,
    /// `None` when `labellings < 2`.
    pub heuristic_prediction: Option<f64>,
    pub seed: u64,
}

/// Each triple independently uniform over `[0, r)`.
pub fn random_colouring(order: Order, r: u8, seed: u64) -> Result<Colouring> {
    if r < 2 {
        return Err(Error::Domain(format!("need r >= 2, got {r}")));
    }
    let mut rng = rng_for(seed);
    let colours = (0..order.triples()).map(|_| rng.random_range(0..r)).collect();
    Colouring::new(order, r, colours)
}

/// Pairwise summation; the result does not depend on how trials were scheduled.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    if values.len() <= 8 {
        return values.iter().sum();
    }
    let (a, b) = values.split_at(values.len() / 2);
    pairwise_sum(a) + pairwise_sum(b)
}

/// `max_S disc(S, χ)` for `trials` random colourings against `family`.
/// Trial `i` draws its colouring from `derive_seed(seed, i)` on the trial stream.
pub fn max_disc_samples(family: &LabelledFamily, r: u8, trials: u64, seed: u64) -> Result<Vec<f64>> {
    if family.is_empty() {
        return Err(Error::EmptyDomain("no systems to maximise over"));
    }
    let order = family.order();
    let master = derive_seed(seed, STREAM_TRIALS);
    (0..trials)
        .into_par_iter()
        .map(|i| {
            let chi = random_colouring(order, r, derive_seed(master, i))?;
            let masks = chi.class_masks();
            let worst = family
                .systems()
                .iter()
                .map(|s| numerator_with_masks(s, &masks))
                .max()
                .unwrap_or(0);
            Ok(worst as f64 / r as f64)
        })
        .collect()
}

/// Mean of `max_S disc(S, χ)` over `trials` random `r`-colourings, where the
/// maximum runs over one family of `labellings` random relabellings of the
/// canonical system, drawn once from `seed`.
pub fn mean_max_disc(order: Order, r: u8, trials: u64, labellings: usize, seed: u64) -> Result<RandomStatsReport> {
    if trials == 0 {
        return Err(Error::Domain("need at least one trial".into()));
    }
    let family = sample_labellings(&construct(order)?, labellings, derive_seed(seed, STREAM_FAMILY))?;
    let samples = max_disc_samples(&family, r, trials, seed)?;
    let count = samples.len() as f64;
    let mean = pairwise_sum(&samples) / count;
    let squares: Vec<f64> = samples.iter().map(|v| (v - mean).powi(2)).collect();
    let std_error = if samples.len() > 1 {
        (pairwise_sum(&squares) / (count - 1.0)).sqrt() / count.sqrt()
    } else {
        0.0
    };
    Ok(RandomStatsReport {
        n: order,
        r,
        trials,
        labellings,
        mean_max_disc: mean,
        std_error,
        heuristic_prediction: gaussian_heuristic(order, r, labellings).ok(),
        seed,
    })
}

/// `sqrt(m / r) · sqrt(2 ln K)` with `m = n(n − 1)/6`.
pub fn gaussian_heuristic(order: Order, r: u8, labellings: usize) -> Result<f64> {
    if labellings < 2 {
        return Err(Error::Domain("the heuristic needs at least two labellings".into()));
    }
    if r == 0 {
        return Err(Error::Domain("need r >= 1".into()));
    }
    let m = order.blocks() as f64;
    Ok((m / r as f64).sqrt() * (2.0 * (labellings as f64).ln()).sqrt())
}
