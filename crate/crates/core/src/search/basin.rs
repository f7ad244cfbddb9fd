use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::discrepancy::max_disc_over_systems;
use crate::error::{Error, Result};
use crate::sts::LabelledFamily;
use crate::types::{Colouring, ScaledDiscrepancy};

/// Discrepancies of every two-flip neighbour of a base colouring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasinHistogram {
    pub base_disc: ScaledDiscrepancy,
    pub counts: BTreeMap<ScaledDiscrepancy, u64>,
}

impl BasinHistogram {
    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn count_of(&self, value: ScaledDiscrepancy) -> u64 {
        self.counts.get(&value).copied().unwrap_or(0)
    }
}

/// Share of neighbours that keep the base discrepancy.
pub fn basin_fraction_optimal(hist: &BasinHistogram) -> Result<f64> {
    let total = hist.total();
    if total == 0 {
        return Err(Error::EmptyDomain("empty basin histogram"));
    }
    Ok(hist.count_of(hist.base_disc) as f64 / total as f64)
}

/// Flips every unordered pair of distinct triples of a 2-colouring and
/// records `max_S disc(S, χ')` over `family`.
///
/// Only systems containing a flipped triple change, so each neighbour costs
/// the incidence of the two triples plus a scan for the largest untouched
/// system in a precomputed descending order.
pub fn two_flip_basin(base: &Colouring, family: &LabelledFamily) -> Result<BasinHistogram> {
    if base.r() != 2 {
        return Err(Error::Domain("two-flip basin needs a 2-colouring".into()));
    }
    let base_disc = max_disc_over_systems(family.systems(), base)?;
    let m = family.order().blocks() as i64;
    let systems = family.systems();
    let blue: Vec<i64> = systems
        .iter()
        .map(|s| s.blocks().iter().filter(|&&b| base.colour(b) == 1).count() as i64)
        .collect();
    let base_num: Vec<u64> = blue.iter().map(|&b| (2 * b - m).unsigned_abs()).collect();
    let mut by_value: Vec<u32> = (0..systems.len() as u32).collect();
    by_value.sort_by_key(|&s| std::cmp::Reverse(base_num[s as usize]));
    let incidence = family.incidence();
    let delta = |t: usize| if base.colour(t) == 1 { -1i64 } else { 1 };
    let t = family.order().triples();

    let counts = (0..t)
        .into_par_iter()
        .map(|i| {
            let mut local = BTreeMap::new();
            for j in i + 1..t {
                let untouched = by_value
                    .iter()
                    .find(|&&s| {
                        let s = &systems[s as usize];
                        !s.contains_rank(i) && !s.contains_rank(j)
                    })
                    .map_or(0, |&s| base_num[s as usize]);
                let mut worst = untouched;
                for &s in &incidence[i] {
                    let s = s as usize;
                    let d = delta(i) + if systems[s].contains_rank(j) { delta(j) } else { 0 };
                    worst = worst.max((2 * (blue[s] + d) - m).unsigned_abs());
                }
                for &s in &incidence[j] {
                    let s = s as usize;
                    if !systems[s].contains_rank(i) {
                        worst = worst.max((2 * (blue[s] + delta(j)) - m).unsigned_abs());
                    }
                }
                *local.entry(ScaledDiscrepancy::new(worst, 2)).or_insert(0u64) += 1;
            }
            local
        })
        .reduce(BTreeMap::new, |mut a, b| {
            for (k, v) in b {
                *a.entry(k).or_insert(0) += v;
            }
            a
        });
    Ok(BasinHistogram { base_disc, counts })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::colourings::cut_colouring_of_size;
    use crate::sts::enumerate_all_labelled;
    use crate::types::Order;

    #[test]
    fn matches_direct_recomputation_at_n7() {
        let o = Order::new(7).unwrap();
        let family = enumerate_all_labelled(o).unwrap();
        let base = cut_colouring_of_size(o, 1).unwrap();
        let hist = two_flip_basin(&base, &family).unwrap();
        assert_eq!(hist.total(), 35 * 34 / 2);

        let mut direct = BTreeMap::new();
        for i in 0..35 {
            for j in i + 1..35 {
                let flipped = base.flipped(&[i, j]).unwrap();
                let v = max_disc_over_systems(family.systems(), &flipped).unwrap();
                *direct.entry(v).or_insert(0u64) += 1;
                assert_eq!(flipped.flipped(&[i, j]).unwrap(), base);
            }
        }
        assert_eq!(hist.counts, direct);
    }

    #[test]
    fn fraction_edge_cases() {
        let one = ScaledDiscrepancy::new(2, 2);
        let hist = BasinHistogram {
            base_disc: one,
            counts: BTreeMap::from([(one, 1)]),
        };
        assert_eq!(basin_fraction_optimal(&hist).unwrap(), 1.0);
        let without = BasinHistogram {
            base_disc: one,
            counts: BTreeMap::from([(ScaledDiscrepancy::new(4, 2), 3)]),
        };
        assert_eq!(basin_fraction_optimal(&without).unwrap(), 0.0);
        let empty = BasinHistogram {
            base_disc: one,
            counts: BTreeMap::new(),
        };
        assert!(basin_fraction_optimal(&empty).is_err());
    }

    #[test]
    fn rejects_three_colourings() {
        let o = Order::new(7).unwrap();
        let family = enumerate_all_labelled(o).unwrap();
        let chi = Colouring::uniform(o, 3, 0).unwrap();
        assert!(two_flip_basin(&chi, &family).is_err());
    }
}
