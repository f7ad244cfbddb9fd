use proptest::prelude::*;

use stsdisc_core::anneal::{sa_minimise, AnnealConfig, Energy};
use stsdisc_core::colourings::blue_count;
use stsdisc_core::discrepancy::colour_counts;
use stsdisc_core::search::{exact_min_disc, parity_lower_bound, two_flip_basin, SearchOptions};
use stsdisc_core::stats::random_colouring;
use stsdisc_core::sts::{construct, enumerate_all_labelled, random_permutation, relabel, sample_labellings};
use stsdisc_core::*;

const ORDERS: [u32; 8] = [7, 9, 13, 15, 19, 21, 25, 27];

fn order(n: u32) -> Order {
    Order::new(n).unwrap()
}

fn any_order() -> impl Strategy<Value = Order> {
    prop::sample::select(ORDERS.to_vec()).prop_map(order)
}

/// Every pair of points lies in exactly one block.
fn covers_pairs_once(system: &SteinerSystem) -> bool {
    let n = system.order().n() as usize;
    let mut seen = vec![0u8; n * n];
    for t in system.triples() {
        let [a, b, c] = t.vertices().map(|v| v as usize);
        for (x, y) in [(a, b), (a, c), (b, c)] {
            seen[x * n + y] += 1;
        }
    }
    (0..n).all(|x| (x + 1..n).all(|y| seen[x * n + y] == 1))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn relabelled_systems_cover_every_pair_once(o in any_order(), seed in any::<u64>()) {
        let s = relabel(&construct(o).unwrap(), &random_permutation(o.n(), seed)).unwrap();
        prop_assert!(covers_pairs_once(&s));
        prop_assert_eq!(s.blocks().len(), o.blocks());
    }

    #[test]
    fn rank_roundtrip(o in any_order(), raw in any::<u64>()) {
        let rank = (raw % o.triples() as u64) as usize;
        let t = unrank_triple(rank, o).unwrap();
        let [a, b, c] = t.vertices();
        prop_assert!(a < b && b < c && c < o.n());
        prop_assert_eq!(rank_triple([a, b, c], o).unwrap().rank(), rank);
        prop_assert!(rank_triple([c, a, b], o).is_err());
    }

    #[test]
    fn colour_relabelling_preserves_disc(
        o in any_order(),
        r in 2u8..=4,
        seed in any::<u64>(),
        perm in Just(()).prop_perturb(|_, mut rng| {
            let mut p: Vec<u8> = (0..4).collect();
            for i in (1..p.len()).rev() {
                p.swap(i, (rng.next_u32() as usize) % (i + 1));
            }
            p
        }),
    ) {
        let s = construct(o).unwrap();
        let chi = random_colouring(o, r, seed).unwrap();
        let perm: Vec<u8> = perm.into_iter().filter(|&c| c < r).collect();
        let moved = chi.permute_colours(&perm).unwrap();
        prop_assert_eq!(disc_on_system(&s, &chi).unwrap(), disc_on_system(&s, &moved).unwrap());
    }

    #[test]
    fn two_colour_numerator_has_parity_of_m(o in any_order(), seed in any::<u64>()) {
        let s = construct(o).unwrap();
        let chi = random_colouring(o, 2, seed).unwrap();
        let d = disc_on_system(&s, &chi).unwrap();
        prop_assert_eq!(d.denominator(), 2);
        prop_assert_eq!(d.numerator() % 2, o.blocks() as u64 % 2);
        prop_assert!(d >= parity_lower_bound(o, 2).unwrap());
    }

    #[test]
    fn counts_sum_to_block_count(o in any_order(), r in 2u8..=5, seed in any::<u64>()) {
        let s = construct(o).unwrap();
        let counts = colour_counts(&s, &random_colouring(o, r, seed).unwrap()).unwrap();
        prop_assert_eq!(counts.len(), r as usize);
        prop_assert_eq!(counts.iter().map(|&c| c as usize).sum::<usize>(), o.blocks());
    }

    #[test]
    fn blue_count_depends_only_on_cut_size(o in any_order(), seed in any::<u64>(), x_raw in any::<u32>()) {
        let x = x_raw % (o.n() + 1);
        let cut: Vec<u32> = random_permutation(o.n(), seed ^ 1)[..x as usize].to_vec();
        let s = relabel(&construct(o).unwrap(), &random_permutation(o.n(), seed)).unwrap();
        prop_assert_eq!(blue_count(&s, &cut).unwrap() as u32 * 2, x * (o.n() - x));
    }
}

#[test]
fn rank_unrank_bijection_exhaustive_up_to_21() {
    for n in [7, 9, 13, 15, 19, 21] {
        let o = order(n);
        let mut rank = 0;
        for c in 2..n {
            for b in 1..c {
                for a in 0..b {
                    assert_eq!(rank_triple([a, b, c], o).unwrap().rank(), rank);
                    assert_eq!(unrank_triple(rank, o).unwrap().vertices(), [a, b, c]);
                    rank += 1;
                }
            }
        }
        assert_eq!(rank, o.triples());
    }
}

#[test]
fn exhaustive_families_cover_pairs() {
    for n in [7, 9] {
        let family = enumerate_all_labelled(order(n)).unwrap();
        assert!(family.systems().iter().all(covers_pairs_once));
    }
}

#[test]
fn exact_min_disc_is_monotone_in_the_family() {
    let full = enumerate_all_labelled(order(7)).unwrap();
    let mut previous = ScaledDiscrepancy::zero(2);
    for size in [1, 2, 5, 10, 20, 30] {
        let indices: Vec<usize> = (0..size).collect();
        let sub = full.subfamily(&indices).unwrap();
        let out = exact_min_disc(&sub, &SearchOptions::default()).unwrap();
        assert!(out.proved_optimal, "size {size}");
        assert!(out.best_value >= parity_lower_bound(order(7), 2).unwrap());
        assert!(
            out.best_value >= previous,
            "size {size}: {} < {previous}",
            out.best_value
        );
        previous = out.best_value;
    }
}

#[test]
fn basin_spread_is_at_most_one_unit_of_two() {
    for (n, x) in [(7, 1), (9, 2)] {
        let family = enumerate_all_labelled(order(n)).unwrap();
        let base = cut_colouring_of_size(order(n), x).unwrap();
        let hist = two_flip_basin(&base, &family).unwrap();
        let base_value = hist.base_disc.as_f64();
        for value in hist.counts.keys() {
            assert!((value.as_f64() - base_value).abs() <= 2.0, "n={n}: {value}");
        }
    }
}

#[test]
fn anneal_values_are_bounded_and_exact() {
    let o = order(13);
    let family = sample_labellings(&construct(o).unwrap(), 20, 7).unwrap();
    for energy in [Energy::Max, Energy::L4] {
        for r in [2u8, 3] {
            let cfg = AnnealConfig {
                restarts: 4,
                steps_per_restart: Some(2_000),
                energy,
                ..AnnealConfig::new(r)
            };
            let out = sa_minimise(&family, &cfg).unwrap();
            let mono = disc_on_system(&family.systems()[0], &Colouring::uniform(o, r, 0).unwrap()).unwrap();
            assert_eq!(out.best_value.denominator(), r as u32);
            assert!(out.best_value <= mono);
            assert!(out.best_value >= parity_lower_bound(o, r as u32).unwrap());
            let witness = out.witness.unwrap();
            assert_eq!(
                max_disc_over_systems(family.systems(), &witness).unwrap(),
                out.best_value
            );
        }
    }
}
