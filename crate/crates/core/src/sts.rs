//! Labelled Steiner triple systems: exhaustive enumeration for small orders,
//! the Bose and Skolem constructions, relabelling and random labellings.

use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seed::{derive_seed, rng_for, STREAM_FAMILY};
use crate::types::{pair_index, rank_triple, Order, SteinerSystem};

/// Largest order accepted by [`enumerate_all_labelled`].
pub const MAX_ENUMERATION_ORDER: u32 = 9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    /// Every labelled system of the order, each exactly once.
    Exhaustive,
    /// Random relabellings of one constructed system; may repeat.
    ConstructedRelabellings,
}

#[derive(Debug, Clone)]
pub struct LabelledFamily {
    order: Order,
    systems: Vec<SteinerSystem>,
    provenance: Provenance,
}

impl LabelledFamily {
    pub fn new(order: Order, systems: Vec<SteinerSystem>, provenance: Provenance) -> Result<Self> {
        if let Some(s) = systems.iter().find(|s| s.order() != order) {
            return Err(Error::OrderMismatch {
                expected: order.n(),
                found: s.order().n(),
            });
        }
        Ok(LabelledFamily {
            order,
            systems,
            provenance,
        })
    }

    #[inline]
    pub fn order(&self) -> Order {
        self.order
    }

    #[inline]
    pub fn systems(&self) -> &[SteinerSystem] {
        &self.systems
    }

    #[inline]
    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.systems.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.systems.is_empty()
    }

    /// A sub-family holding the systems at `indices` (in that order).
    pub fn subfamily(&self, indices: &[usize]) -> Result<Self> {
        let systems = indices
            .iter()
            .map(|&i| {
                self.systems
                    .get(i)
                    .cloned()
                    .ok_or_else(|| Error::Domain(format!("no system at index {i}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(LabelledFamily {
            order: self.order,
            systems,
            provenance: self.provenance,
        })
    }

    /// For every triple rank, the indices of the systems containing it.
    pub fn incidence(&self) -> Vec<Vec<u32>> {
        let mut by_triple = vec![Vec::new(); self.order.triples()];
        for (i, s) in self.systems.iter().enumerate() {
            for &b in s.blocks() {
                by_triple[b].push(i as u32);
            }
        }
        by_triple
    }
}

/// Lists every labelled STS of order `n ≤ 9` by backtracking.
///
/// The search always extends the lexicographically smallest uncovered pair
/// `{a, b}` with a third point `c`; every other pair below `{a, b}` is already
/// covered, so `c > b` and each system is produced exactly once.
pub fn enumerate_all_labelled(order: Order) -> Result<LabelledFamily> {
    if order.n() > MAX_ENUMERATION_ORDER {
        return Err(Error::Infeasible {
            order: order.n(),
            reason: "exhaustive labelled enumeration is limited to n <= 9",
        });
    }
    let n = order.n();
    let mut out = Vec::new();
    let mut blocks = Vec::with_capacity(order.blocks());
    extend(n, 0u64, &mut blocks, &mut out);

    let mut systems: Vec<SteinerSystem> = out
        .into_iter()
        .map(|ranks| SteinerSystem::from_valid_ranks(order, ranks))
        .collect();
    systems.sort();
    systems.dedup();
    Ok(LabelledFamily {
        order,
        systems,
        provenance: Provenance::Exhaustive,
    })
}

fn extend(n: u32, covered: u64, blocks: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    let bit = |a: u32, b: u32| 1u64 << pair_index(a, b);
    let Some((a, b)) = (1..n)
        .flat_map(|b| (0..b).map(move |a| (a, b)))
        .filter(|&(a, b)| covered & bit(a, b) == 0)
        .min()
    else {
        out.push(blocks.clone());
        return;
    };
    for c in b + 1..n {
        let need = bit(a, c) | bit(b, c);
        if covered & need != 0 {
            continue;
        }
        let order = Order::new(n).expect("enumeration order");
        blocks.push(rank_triple([a, b, c], order).expect("valid triple").rank());
        extend(n, covered | need | bit(a, b), blocks, out);
        blocks.pop();
    }
}

/// Bose construction for `n = 6k + 3` over `Z_{2k+1} × {0, 1, 2}` with the
/// idempotent commutative quasigroup `x ∘ y = (x + y)(k + 1) mod (2k + 1)`.
///
/// Point `(x, i)` is labelled `x + (2k + 1)·i`.
pub fn construct_bose(order: Order) -> Result<SteinerSystem> {
    let n = order.n();
    if n % 6 != 3 {
        return Err(Error::ConstructionDomain {
            construction: "Bose",
            requirement: "n = 3 mod 6",
            order: n,
        });
    }
    let v = n / 3;
    let k = (v - 1) / 2;
    let op = |x: u32, y: u32| ((x + y) * (k + 1)) % v;
    let p = |x: u32, i: u32| x + v * (i % 3);
    let mut blocks = Vec::with_capacity(order.blocks());
    for x in 0..v {
        blocks.push([p(x, 0), p(x, 1), p(x, 2)]);
    }
    for i in 0..3 {
        for y in 0..v {
            for x in 0..y {
                blocks.push([p(x, i), p(y, i), p(op(x, y), i + 1)]);
            }
        }
    }
    SteinerSystem::new(order, blocks)
}

/// Skolem construction for `n = 6k + 1` over `{∞} ∪ Z_{2k} × {0, 1, 2}` with
/// the half-idempotent commutative quasigroup obtained from addition in
/// `Z_{2k}` by renaming symbol `2j ↦ j` and `2j + 1 ↦ k + j`.
///
/// Point `(x, i)` is labelled `x + 2k·i`; `∞` is `6k`.
pub fn construct_skolem(order: Order) -> Result<SteinerSystem> {
    let n = order.n();
    if n % 6 != 1 {
        return Err(Error::ConstructionDomain {
            construction: "Skolem",
            requirement: "n = 1 mod 6",
            order: n,
        });
    }
    let k = (n - 1) / 6;
    let q = 2 * k;
    let op = |x: u32, y: u32| {
        let s = (x + y) % q;
        if s.is_multiple_of(2) {
            s / 2
        } else {
            k + s / 2
        }
    };
    let p = |x: u32, i: u32| x + q * (i % 3);
    let infinity = n - 1;
    let mut blocks = Vec::with_capacity(order.blocks());
    for x in 0..k {
        blocks.push([p(x, 0), p(x, 1), p(x, 2)]);
        for i in 0..3 {
            blocks.push([infinity, p(x + k, i), p(x, i + 1)]);
        }
    }
    for i in 0..3 {
        for y in 0..q {
            for x in 0..y {
                blocks.push([p(x, i), p(y, i), p(op(x, y), i + 1)]);
            }
        }
    }
    SteinerSystem::new(order, blocks)
}

/// The canonical system of an order: Skolem for `n ≡ 1`, Bose for `n ≡ 3 (mod 6)`.
pub fn construct(order: Order) -> Result<SteinerSystem> {
    if order.n() % 6 == 1 {
        construct_skolem(order)
    } else {
        construct_bose(order)
    }
}

fn check_permutation(perm: &[u32], n: u32) -> Result<()> {
    let mut seen = vec![false; n as usize];
    if perm.len() != n as usize {
        return Err(Error::InvalidPermutation(n));
    }
    for &p in perm {
        match seen.get_mut(p as usize) {
            Some(s) if !*s => *s = true,
            _ => return Err(Error::InvalidPermutation(n)),
        }
    }
    Ok(())
}

/// Maps every block `{a, b, c}` to `{perm[a], perm[b], perm[c]}`.
pub fn relabel(system: &SteinerSystem, perm: &[u32]) -> Result<SteinerSystem> {
    let order = system.order();
    check_permutation(perm, order.n())?;
    let ranks = system
        .triples()
        .map(|t| {
            let mut v = t.vertices().map(|x| perm[x as usize]);
            v.sort_unstable();
            rank_triple(v, order).map(|t| t.rank())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SteinerSystem::from_valid_ranks(order, ranks))
}

pub fn invert_permutation(perm: &[u32]) -> Result<Vec<u32>> {
    check_permutation(perm, perm.len() as u32)?;
    let mut inv = vec![0; perm.len()];
    for (i, &p) in perm.iter().enumerate() {
        inv[p as usize] = i as u32;
    }
    Ok(inv)
}

/// Uniform random permutation of `[0, n)` drawn from `seed`.
pub fn random_permutation(n: u32, seed: u64) -> Vec<u32> {
    let mut perm: Vec<u32> = (0..n).collect();
    perm.shuffle(&mut rng_for(seed));
    perm
}

/// `count` independent uniform relabellings of `system`. Sample `i` uses the
/// seed `derive_seed(seed, i)`, so a smaller count yields a prefix of a larger one.
pub fn sample_labellings(system: &SteinerSystem, count: usize, seed: u64) -> Result<LabelledFamily> {
    if count == 0 {
        return Err(Error::Domain("need at least one labelling".into()));
    }
    let n = system.order().n();
    let systems = (0..count as u64)
        .into_par_iter()
        .map(|i| relabel(system, &random_permutation(n, derive_seed(seed, i))))
        .collect::<Result<Vec<_>>>()?;
    Ok(LabelledFamily {
        order: system.order(),
        systems,
        provenance: Provenance::ConstructedRelabellings,
    })
}

/// The family experiments maximise over: every labelled system for
/// `n ≤ 9`, otherwise `labellings` random relabellings of [`construct`].
pub fn working_family(order: Order, labellings: usize, seed: u64) -> Result<LabelledFamily> {
    if order.n() <= MAX_ENUMERATION_ORDER {
        enumerate_all_labelled(order)
    } else {
        sample_labellings(&construct(order)?, labellings, seed)
    }
}

/// [`working_family`] with its seed drawn from the family stream of
/// `master`, as every experiment does.
pub fn seeded_working_family(order: Order, labellings: usize, master: u64) -> Result<LabelledFamily> {
    working_family(order, labellings, derive_seed(master, STREAM_FAMILY))
}

/// Writes the exchange format: a header line `n=<order>`, then one block per
/// line as `a b c` with `a < b < c`.
pub fn to_text(system: &SteinerSystem) -> String {
    let mut out = format!("n={}\n", system.order());
    for t in system.triples() {
        let [a, b, c] = t.vertices();
        writeln!(out, "{a} {b} {c}").expect("write to String");
    }
    out
}

/// Parses the exchange format written by [`to_text`]. Blank lines and lines
/// starting with `#` are ignored.
pub fn parse_text(text: &str) -> Result<SteinerSystem> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (hline, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        message: "missing header `n=<order>`".into(),
    })?;
    let n = header
        .strip_prefix("n=")
        .and_then(|s| s.trim().parse::<u32>().ok())
        .ok_or_else(|| Error::Parse {
            line: hline,
            message: format!("expected `n=<order>`, found `{header}`"),
        })?;
    let order = Order::new(n)?;
    let mut blocks = Vec::with_capacity(order.blocks());
    for (line, l) in lines {
        let parsed: Vec<u32> = l
            .split_whitespace()
            .map(|t| t.parse::<u32>())
            .collect::<Result<_, _>>()
            .map_err(|e| Error::Parse {
                line,
                message: e.to_string(),
            })?;
        match parsed[..] {
            [a, b, c] if a < b && b < c && c < n => blocks.push([a, b, c]),
            _ => {
                return Err(Error::Parse {
                    line,
                    message: format!("expected `a b c` with a < b < c < {n}, found `{l}`"),
                })
            }
        }
    }
    SteinerSystem::new(order, blocks)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn order(n: u32) -> Order {
        Order::new(n).unwrap()
    }

    #[test]
    fn labelled_counts() {
        assert_eq!(enumerate_all_labelled(order(3)).unwrap().len(), 1);
        let f7 = enumerate_all_labelled(order(7)).unwrap();
        assert_eq!(f7.len(), 30);
        assert_eq!(f7.provenance(), Provenance::Exhaustive);
        assert_eq!(enumerate_all_labelled(order(9)).unwrap().len(), 840);
    }

    #[test]
    fn enumeration_rejects_large_orders() {
        assert!(matches!(
            enumerate_all_labelled(order(13)),
            Err(Error::Infeasible { order: 13, .. })
        ));
    }

    #[test]
    fn constructions_have_expected_sizes() {
        for n in [9, 15, 21, 27] {
            assert_eq!(construct_bose(order(n)).unwrap().blocks().len(), order(n).blocks());
        }
        for n in [7, 13, 19, 25] {
            assert_eq!(construct_skolem(order(n)).unwrap().blocks().len(), order(n).blocks());
        }
        assert_eq!(construct_bose(order(15)).unwrap().blocks().len(), 35);
        assert_eq!(construct_bose(order(21)).unwrap().blocks().len(), 70);
        assert_eq!(construct_skolem(order(13)).unwrap().blocks().len(), 26);
        assert_eq!(construct_skolem(order(19)).unwrap().blocks().len(), 57);
        assert_eq!(construct_bose(order(3)).unwrap().blocks().len(), 1);
    }

    #[test]
    fn constructions_reject_wrong_residue() {
        assert!(matches!(
            construct_bose(order(7)),
            Err(Error::ConstructionDomain {
                construction: "Bose",
                ..
            })
        ));
        assert!(matches!(
            construct_skolem(order(9)),
            Err(Error::ConstructionDomain {
                construction: "Skolem",
                ..
            })
        ));
    }

    #[test]
    fn relabel_identity_and_inverse() {
        let s = construct(order(13)).unwrap();
        let id: Vec<u32> = (0..13).collect();
        assert_eq!(relabel(&s, &id).unwrap(), s);
        let perm = random_permutation(13, 5);
        let inv = invert_permutation(&perm).unwrap();
        assert_eq!(relabel(&relabel(&s, &perm).unwrap(), &inv).unwrap(), s);
    }

    #[test]
    fn relabel_rejects_non_bijections() {
        let s = construct(order(7)).unwrap();
        assert!(relabel(&s, &[0, 1, 2, 3, 4, 5, 5]).is_err());
        assert!(relabel(&s, &[0, 1, 2, 3, 4, 5]).is_err());
        assert!(relabel(&s, &[0, 1, 2, 3, 4, 5, 7]).is_err());
    }

    #[test]
    fn sampling_is_deterministic_and_prefix_stable() {
        let s = construct(order(15)).unwrap();
        let a = sample_labellings(&s, 20, 42).unwrap();
        let b = sample_labellings(&s, 20, 42).unwrap();
        assert_eq!(a.systems(), b.systems());
        let c = sample_labellings(&s, 5, 42).unwrap();
        assert_eq!(c.systems(), &a.systems()[..5]);
        assert_eq!(sample_labellings(&s, 1, 0).unwrap().len(), 1);
        assert!(sample_labellings(&s, 0, 0).is_err());
        assert_eq!(a.provenance(), Provenance::ConstructedRelabellings);
    }

    #[test]
    fn text_roundtrip_and_errors() {
        let s = construct(order(9)).unwrap();
        let text = to_text(&s);
        assert!(text.starts_with("n=9\n"));
        assert_eq!(parse_text(&text).unwrap(), s);

        assert!(matches!(parse_text(""), Err(Error::Parse { .. })));
        assert!(matches!(parse_text("n=8\n"), Err(Error::InvalidOrder(8))));
        assert!(matches!(parse_text("n=7\n0 2 1\n"), Err(Error::Parse { line: 2, .. })));
        // Drop the last block: three pairs left uncovered.
        let truncated: String = text.lines().take(12).map(|l| format!("{l}\n")).collect();
        assert!(matches!(
            parse_text(&truncated),
            Err(Error::PairCoverage { count: 0, .. })
        ));
    }
}
