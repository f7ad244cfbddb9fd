//! Exact discrepancy of a colouring on one system or a family of systems.

use crate::bitset::TripleSet;
use crate::error::{Error, Result};
use crate::types::{Colouring, Order, ScaledDiscrepancy, SteinerSystem};

/// `max_c |r·count_c − m|`, the numerator of the discrepancy over `r`.
#[inline]
pub fn numerator_from_counts(counts: &[u32], blocks: usize) -> u64 {
    let r = counts.len() as i64;
    let m = blocks as i64;
    counts
        .iter()
        .map(|&c| (r * c as i64 - m).unsigned_abs())
        .max()
        .unwrap_or(0)
}

fn check_order(expected: Order, found: Order) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::OrderMismatch {
            expected: expected.n(),
            found: found.n(),
        })
    }
}

/// Numerator of `disc(S, χ)` given precomputed colour-class masks.
#[inline]
pub(crate) fn numerator_with_masks(system: &SteinerSystem, masks: &[TripleSet]) -> u64 {
    let m = system.blocks().len();
    let r = masks.len() as i64;
    let mut rest = m as i64;
    let mut worst = 0u64;
    // The last class count is implied by the others.
    for (i, mask) in masks.iter().enumerate() {
        let count = if i + 1 == masks.len() {
            rest
        } else {
            let c = system.mask().intersection_count(mask) as i64;
            rest -= c;
            c
        };
        worst = worst.max((r * count - m as i64).unsigned_abs());
    }
    worst
}

/// `disc(S, χ) = max_c |#{T ∈ S : χ(T) = c} − |S|/r|`, exactly.
pub fn disc_on_system(system: &SteinerSystem, chi: &Colouring) -> Result<ScaledDiscrepancy> {
    check_order(chi.order(), system.order())?;
    let masks = chi.class_masks();
    Ok(ScaledDiscrepancy::new(
        numerator_with_masks(system, &masks),
        chi.r() as u32,
    ))
}

/// Maximum of [`disc_on_system`] over `systems`. Exact `disc(χ)` when the
/// slice is the complete labelled family, a lower estimate otherwise.
pub fn max_disc_over_systems(systems: &[SteinerSystem], chi: &Colouring) -> Result<ScaledDiscrepancy> {
    if systems.is_empty() {
        return Err(Error::EmptyDomain("no systems to maximise over"));
    }
    for s in systems {
        check_order(chi.order(), s.order())?;
    }
    let masks = chi.class_masks();
    let worst = systems
        .iter()
        .map(|s| numerator_with_masks(s, &masks))
        .max()
        .unwrap_or(0);
    Ok(ScaledDiscrepancy::new(worst, chi.r() as u32))
}

/// Per-colour block counts of `system` under `chi`.
pub fn colour_counts(system: &SteinerSystem, chi: &Colouring) -> Result<Vec<u32>> {
    check_order(chi.order(), system.order())?;
    let mut counts = vec![0u32; chi.r() as usize];
    for &b in system.blocks() {
        counts[chi.colour(b) as usize] += 1;
    }
    Ok(counts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::rank_triple;

    fn fano() -> SteinerSystem {
        let blocks = [
            [0, 1, 2],
            [0, 3, 4],
            [0, 5, 6],
            [1, 3, 5],
            [1, 4, 6],
            [2, 3, 6],
            [2, 4, 5],
        ];
        SteinerSystem::new(Order::new(7).unwrap(), blocks).unwrap()
    }

    #[test]
    fn monochromatic_fano() {
        let chi = Colouring::uniform(Order::new(7).unwrap(), 2, 0).unwrap();
        let d = disc_on_system(&fano(), &chi).unwrap();
        assert_eq!((d.numerator(), d.denominator()), (7, 2));
    }

    #[test]
    fn fano_single_vertex_cut() {
        // X = {0}: blue iff the triple contains 0.
        let o = Order::new(7).unwrap();
        let colours = (0..o.triples())
            .map(|r| crate::types::unrank_triple(r, o).unwrap().contains(0) as u8)
            .collect();
        let chi = Colouring::new(o, 2, colours).unwrap();
        assert_eq!(colour_counts(&fano(), &chi).unwrap(), vec![4, 3]);
        assert_eq!(disc_on_system(&fano(), &chi).unwrap(), ScaledDiscrepancy::new(1, 2));
    }

    #[test]
    fn order_mismatch_and_empty() {
        let chi = Colouring::uniform(Order::new(9).unwrap(), 2, 0).unwrap();
        assert!(matches!(
            disc_on_system(&fano(), &chi),
            Err(Error::OrderMismatch { expected: 9, found: 7 })
        ));
        assert!(matches!(max_disc_over_systems(&[], &chi), Err(Error::EmptyDomain(_))));
    }

    #[test]
    fn masks_agree_with_direct_counts() {
        let o = Order::new(7).unwrap();
        let colours = (0..35).map(|i| (i * 7 % 3) as u8).collect();
        let chi = Colouring::new(o, 3, colours).unwrap();
        let s = fano();
        let direct = numerator_from_counts(&colour_counts(&s, &chi).unwrap(), 7);
        assert_eq!(disc_on_system(&s, &chi).unwrap().numerator(), direct);
        let rank = rank_triple([0, 1, 2], o).unwrap().rank();
        assert!(s.contains_rank(rank));
    }
}
