//! Domain types: orders, triples, Steiner triple systems, colourings and
//! exact discrepancy values.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bitset::TripleSet;
use crate::error::{Error, Result};

/// `C(n, k)` for the small arguments used here.
pub const fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = if k > n - k { n - k } else { k };
    let mut acc = 1u64;
    let mut i = 0;
    while i < k {
        acc = acc * (n - i) / (i + 1);
        i += 1;
    }
    acc
}

/// An admissible Steiner triple system order: `n ≡ 1, 3 (mod 6)`, `n ≥ 3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct Order(u32);

impl Order {
    pub fn new(n: u32) -> Result<Self> {
        if n >= 3 && matches!(n % 6, 1 | 3) {
            Ok(Order(n))
        } else {
            Err(Error::InvalidOrder(n))
        }
    }

    #[inline]
    pub fn n(self) -> u32 {
        self.0
    }

    /// Number of blocks in any STS of this order, `n(n-1)/6`.
    #[inline]
    pub fn blocks(self) -> usize {
        let n = self.0 as usize;
        n * (n - 1) / 6
    }

    /// Size of the triple universe, `C(n, 3)`.
    #[inline]
    pub fn triples(self) -> usize {
        binomial(self.0 as u64, 3) as usize
    }

    #[inline]
    pub fn pairs(self) -> usize {
        binomial(self.0 as u64, 2) as usize
    }
}

impl TryFrom<u32> for Order {
    type Error = Error;

    fn try_from(n: u32) -> Result<Self> {
        Order::new(n)
    }
}

impl From<Order> for u32 {
    fn from(o: Order) -> u32 {
        o.0
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Colex index of the pair `a < b`.
#[inline]
pub(crate) fn pair_index(a: u32, b: u32) -> usize {
    debug_assert!(a < b);
    let b = b as usize;
    b * (b - 1) / 2 + a as usize
}

/// A 3-subset of `[0, n)` together with its colexicographic rank.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Triple {
    rank: usize,
    vertices: [u32; 3],
}

impl Triple {
    #[inline]
    pub fn vertices(&self) -> [u32; 3] {
        self.vertices
    }

    #[inline]
    pub fn rank(&self) -> usize {
        self.rank
    }

    #[inline]
    pub fn contains(&self, v: u32) -> bool {
        self.vertices.contains(&v)
    }
}

#[inline]
fn colex_rank([a, b, c]: [u32; 3]) -> usize {
    (binomial(c as u64, 3) + binomial(b as u64, 2) + a as u64) as usize
}

/// Ranks an increasing vertex triple: `C(c,3) + C(b,2) + a`.
pub fn rank_triple(vertices: [u32; 3], order: Order) -> Result<Triple> {
    let [a, b, c] = vertices;
    if !(a < b && b < c && c < order.n()) {
        return Err(Error::InvalidTriple {
            vertices,
            order: order.n(),
        });
    }
    Ok(Triple {
        rank: colex_rank(vertices),
        vertices,
    })
}

/// Inverse of [`rank_triple`].
pub fn unrank_triple(rank: usize, order: Order) -> Result<Triple> {
    if rank >= order.triples() {
        return Err(Error::Domain(format!(
            "triple rank {rank} out of range for order {order}"
        )));
    }
    let rank_u = rank as u64;
    // Largest c with C(c,3) <= rank, starting from the cube-root estimate.
    let mut c = ((6.0 * rank_u as f64).cbrt() as u64).max(2);
    while binomial(c + 1, 3) <= rank_u {
        c += 1;
    }
    while binomial(c, 3) > rank_u {
        c -= 1;
    }
    let rest = rank_u - binomial(c, 3);
    let mut b = ((2.0 * rest as f64).sqrt() as u64).max(1);
    while binomial(b + 1, 2) <= rest {
        b += 1;
    }
    while binomial(b, 2) > rest {
        b -= 1;
    }
    let a = rest - binomial(b, 2);
    Ok(Triple {
        rank,
        vertices: [a as u32, b as u32, c as u32],
    })
}

/// A labelled Steiner triple system on `[0, n)`.
///
/// Construction validates that every pair of points lies in exactly one block.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SteinerSystem {
    order: Order,
    blocks: Vec<usize>,
    mask: TripleSet,
}

impl SteinerSystem {
    /// Builds a system from vertex triples; the vertices of each block may be
    /// given in any order.
    pub fn new<I>(order: Order, blocks: I) -> Result<Self>
    where
        I: IntoIterator<Item = [u32; 3]>,
    {
        let mut ranks = Vec::with_capacity(order.blocks());
        let mut coverage = vec![0u32; order.pairs()];
        for block in blocks {
            let mut v = block;
            v.sort_unstable();
            let t = rank_triple(v, order).map_err(|_| Error::InvalidTriple {
                vertices: block,
                order: order.n(),
            })?;
            for (i, j) in [(0, 1), (0, 2), (1, 2)] {
                coverage[pair_index(v[i], v[j])] += 1;
            }
            ranks.push(t.rank);
        }
        for b in 1..order.n() {
            for a in 0..b {
                let count = coverage[pair_index(a, b)];
                if count != 1 {
                    return Err(Error::PairCoverage { pair: (a, b), count });
                }
            }
        }
        Ok(Self::from_valid_ranks(order, ranks))
    }

    /// Builds from ranks already known to form a valid system.
    pub(crate) fn from_valid_ranks(order: Order, mut ranks: Vec<usize>) -> Self {
        ranks.sort_unstable();
        debug_assert_eq!(ranks.len(), order.blocks());
        let mask = TripleSet::from_ranks(order.triples(), ranks.iter().copied());
        SteinerSystem {
            order,
            blocks: ranks,
            mask,
        }
    }

    /// Builds from triple ranks, with the same validation as [`SteinerSystem::new`].
    pub fn from_ranks(order: Order, ranks: &[usize]) -> Result<Self> {
        let blocks = ranks
            .iter()
            .map(|&r| unrank_triple(r, order).map(|t| t.vertices))
            .collect::<Result<Vec<_>>>()?;
        Self::new(order, blocks)
    }

    #[inline]
    pub fn order(&self) -> Order {
        self.order
    }

    /// Block ranks, ascending.
    #[inline]
    pub fn blocks(&self) -> &[usize] {
        &self.blocks
    }

    #[inline]
    pub fn mask(&self) -> &TripleSet {
        &self.mask
    }

    #[inline]
    pub fn contains_rank(&self, rank: usize) -> bool {
        self.mask.contains(rank)
    }

    pub fn triples(&self) -> impl Iterator<Item = Triple> + '_ {
        self.blocks
            .iter()
            .map(move |&r| unrank_triple(r, self.order).expect("block rank in range"))
    }
}

impl fmt::Debug for SteinerSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SteinerSystem")
            .field("order", &self.order.n())
            .field("blocks", &self.triples().map(|t| t.vertices).collect::<Vec<_>>())
            .finish()
    }
}

impl PartialOrd for SteinerSystem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for SteinerSystem {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.order, &self.blocks).cmp(&(other.order, &other.blocks))
    }
}

/// An `r`-colouring of the whole triple universe, indexed by colex rank.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Colouring {
    order: Order,
    r: u8,
    colours: Vec<u8>,
}

impl Colouring {
    pub fn new(order: Order, r: u8, colours: Vec<u8>) -> Result<Self> {
        if r < 2 {
            return Err(Error::InvalidColouring(format!("need r >= 2, got {r}")));
        }
        if colours.len() != order.triples() {
            return Err(Error::InvalidColouring(format!(
                "expected {} entries, got {}",
                order.triples(),
                colours.len()
            )));
        }
        if let Some((i, &c)) = colours.iter().enumerate().find(|(_, &c)| c >= r) {
            return Err(Error::InvalidColouring(format!("entry {i} has colour {c} >= r = {r}")));
        }
        Ok(Colouring { order, r, colours })
    }

    /// Every triple gets `colour`.
    pub fn uniform(order: Order, r: u8, colour: u8) -> Result<Self> {
        Self::new(order, r, vec![colour; order.triples()])
    }

    #[inline]
    pub fn order(&self) -> Order {
        self.order
    }

    #[inline]
    pub fn r(&self) -> u8 {
        self.r
    }

    #[inline]
    pub fn colour(&self, rank: usize) -> u8 {
        self.colours[rank]
    }

    #[inline]
    pub fn colours(&self) -> &[u8] {
        &self.colours
    }

    pub fn into_colours(self) -> Vec<u8> {
        self.colours
    }

    /// One bit set per colour class, indexed by colour.
    pub fn class_masks(&self) -> Vec<TripleSet> {
        let mut masks = vec![TripleSet::new(self.colours.len()); self.r as usize];
        for (rank, &c) in self.colours.iter().enumerate() {
            masks[c as usize].insert(rank);
        }
        masks
    }

    /// Copy with the given `(rank, colour)` assignments applied.
    pub fn recoloured(&self, changes: &[(usize, u8)]) -> Result<Self> {
        let mut colours = self.colours.clone();
        for &(rank, c) in changes {
            if rank >= colours.len() || c >= self.r {
                return Err(Error::InvalidColouring(format!("cannot set rank {rank} to colour {c}")));
            }
            colours[rank] = c;
        }
        Ok(Colouring { colours, ..*self })
    }

    /// Copy of a 2-colouring with the colour of each listed rank toggled.
    pub fn flipped(&self, ranks: &[usize]) -> Result<Self> {
        if self.r != 2 {
            return Err(Error::Domain("flipping needs a 2-colouring".into()));
        }
        let changes: Vec<_> = ranks
            .iter()
            .map(|&rank| (rank, 1 - self.colours.get(rank).copied().unwrap_or(0)))
            .collect();
        self.recoloured(&changes)
    }

    /// Applies a permutation of colour labels: colour `c` becomes `perm[c]`.
    pub fn permute_colours(&self, perm: &[u8]) -> Result<Self> {
        let mut seen = vec![false; self.r as usize];
        if perm.len() != self.r as usize
            || perm
                .iter()
                .any(|&c| (c as usize) >= seen.len() || std::mem::replace(&mut seen[c as usize], true))
        {
            return Err(Error::InvalidPermutation(self.r as u32));
        }
        let colours = self.colours.iter().map(|&c| perm[c as usize]).collect();
        Ok(Colouring { colours, ..*self })
    }
}

/// An exact discrepancy `numerator / denominator`, where the denominator is
/// the number of colours.
#[derive(Debug, Clone, Copy, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawScaled")]
pub struct ScaledDiscrepancy {
    #[serde(rename = "num")]
    numerator: u64,
    #[serde(rename = "den")]
    denominator: u32,
}

impl ScaledDiscrepancy {
    pub fn new(numerator: u64, denominator: u32) -> Self {
        assert!(denominator > 0, "zero denominator");
        ScaledDiscrepancy { numerator, denominator }
    }

    pub const fn zero(denominator: u32) -> Self {
        ScaledDiscrepancy {
            numerator: 0,
            denominator,
        }
    }

    #[inline]
    pub fn numerator(self) -> u64 {
        self.numerator
    }

    #[inline]
    pub fn denominator(self) -> u32 {
        self.denominator
    }

    #[inline]
    pub fn as_f64(self) -> f64 {
        self.numerator as f64 / self.denominator as f64
    }

    fn reduced(self) -> (u64, u64) {
        let g = gcd(self.numerator, self.denominator as u64).max(1);
        (self.numerator / g, self.denominator as u64 / g)
    }

    /// `"num/den"` in lowest terms.
    pub fn fraction(self) -> String {
        let (p, q) = self.reduced();
        if q == 1 {
            p.to_string()
        } else {
            format!("{p}/{q}")
        }
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

#[derive(Deserialize)]
struct RawScaled {
    num: u64,
    den: u32,
}

impl TryFrom<RawScaled> for ScaledDiscrepancy {
    type Error = String;

    fn try_from(raw: RawScaled) -> std::result::Result<Self, String> {
        if raw.den == 0 {
            return Err("discrepancy denominator must be positive".into());
        }
        Ok(ScaledDiscrepancy::new(raw.num, raw.den))
    }
}

impl std::hash::Hash for ScaledDiscrepancy {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.reduced().hash(state);
    }
}

impl PartialEq for ScaledDiscrepancy {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl PartialOrd for ScaledDiscrepancy {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Compares by value; `1/2 == 2/4`.
impl Ord for ScaledDiscrepancy {
    fn cmp(&self, other: &Self) -> Ordering {
        let lhs = self.numerator as u128 * other.denominator as u128;
        let rhs = other.numerator as u128 * self.denominator as u128;
        lhs.cmp(&rhs)
    }
}

/// Decimal with one place when exact to tenths, otherwise two places.
impl fmt::Display for ScaledDiscrepancy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (num, den) = (self.numerator, self.denominator as u64);
        if (num * 10) % den == 0 {
            write!(f, "{:.1}", self.as_f64())
        } else {
            write!(f, "{:.2}", self.as_f64())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn order(n: u32) -> Order {
        Order::new(n).unwrap()
    }

    #[test]
    fn order_validation() {
        for n in [3, 7, 9, 13, 15, 19, 21, 31] {
            assert!(Order::new(n).is_ok(), "{n}");
        }
        for n in [0, 1, 2, 4, 5, 6, 8, 10, 11, 12, 14] {
            assert_eq!(Order::new(n), Err(Error::InvalidOrder(n)));
        }
        let o = order(9);
        assert_eq!((o.blocks(), o.triples(), o.pairs()), (12, 84, 36));
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank_triple([0, 1, 2], order(7)).unwrap().rank(), 0);
        assert_eq!(rank_triple([4, 5, 6], order(7)).unwrap().rank(), 34);
        assert!(rank_triple([0, 0, 2], order(7)).is_err());
        assert!(rank_triple([2, 1, 3], order(7)).is_err());
        assert!(rank_triple([0, 1, 7], order(7)).is_err());
    }

    /// Rank of (1,2,4) at n = 9 found by listing triples in colex order.
    #[test]
    fn rank_matches_colex_enumeration() {
        let mut colex = Vec::new();
        for c in 0..9u32 {
            for b in 0..c {
                for a in 0..b {
                    colex.push([a, b, c]);
                }
            }
        }
        let expected = colex.iter().position(|&t| t == [1, 2, 4]).unwrap();
        assert_eq!(expected, 6);
        assert_eq!(rank_triple([1, 2, 4], order(9)).unwrap().rank(), expected);
        for (i, &t) in colex.iter().enumerate() {
            assert_eq!(rank_triple(t, order(9)).unwrap().rank(), i);
        }
    }

    #[test]
    fn unrank_roundtrip_exhaustive_to_21() {
        for n in [3, 7, 9, 13, 15, 19, 21] {
            let o = order(n);
            for rank in 0..o.triples() {
                let t = unrank_triple(rank, o).unwrap();
                assert_eq!(rank_triple(t.vertices(), o).unwrap(), t);
            }
            assert!(unrank_triple(o.triples(), o).is_err());
        }
    }

    #[test]
    fn fano_plane_validates() {
        let fano = [
            [0, 1, 2],
            [0, 3, 4],
            [0, 5, 6],
            [1, 3, 5],
            [1, 4, 6],
            [2, 3, 6],
            [2, 4, 5],
        ];
        let s = SteinerSystem::new(order(7), fano).unwrap();
        assert_eq!(s.blocks().len(), 7);
        assert!(s.blocks().windows(2).all(|w| w[0] < w[1]));

        let mut broken = fano;
        broken[6] = [2, 4, 6];
        assert!(matches!(
            SteinerSystem::new(order(7), broken),
            Err(Error::PairCoverage { .. })
        ));
        assert!(matches!(
            SteinerSystem::new(order(7), fano[..6].iter().copied()),
            Err(Error::PairCoverage { count: 0, .. })
        ));
    }

    #[test]
    fn colouring_validation() {
        let o = order(7);
        assert!(Colouring::new(o, 2, vec![0; 35]).is_ok());
        assert!(Colouring::new(o, 2, vec![0; 34]).is_err());
        assert!(Colouring::new(o, 2, vec![2; 35]).is_err());
        assert!(Colouring::new(o, 1, vec![0; 35]).is_err());
        let c = Colouring::uniform(o, 2, 0).unwrap();
        let f = c.flipped(&[3, 9]).unwrap();
        assert_eq!((f.colour(3), f.colour(9), f.colour(4)), (1, 1, 0));
        assert_eq!(f.flipped(&[3, 9]).unwrap(), c);
    }

    #[test]
    fn scaled_discrepancy_ordering_and_display() {
        let half = ScaledDiscrepancy::new(1, 2);
        assert_eq!(half, ScaledDiscrepancy::new(2, 4));
        assert!(ScaledDiscrepancy::new(2, 3) > half);
        assert_eq!(half.to_string(), "0.5");
        assert_eq!(ScaledDiscrepancy::new(2, 2).to_string(), "1.0");
        assert_eq!(ScaledDiscrepancy::new(5, 3).to_string(), "1.67");
        assert_eq!(ScaledDiscrepancy::new(9, 3).to_string(), "3.0");
        assert_eq!(ScaledDiscrepancy::new(17, 3).fraction(), "17/3");
        assert_eq!(ScaledDiscrepancy::new(4, 2).fraction(), "2");
    }

    #[test]
    fn scaled_discrepancy_hash_agrees_with_eq() {
        let set: std::collections::HashSet<_> = [
            ScaledDiscrepancy::new(1, 2),
            ScaledDiscrepancy::new(2, 4),
            ScaledDiscrepancy::new(3, 6),
        ]
        .into();
        assert_eq!(set.len(), 1);
    }

    #[test]
    fn scaled_discrepancy_json() {
        let d: ScaledDiscrepancy = serde_json::from_str(r#"{"num": 5, "den": 3}"#).unwrap();
        assert_eq!((d.numerator(), d.denominator()), (5, 3));
        assert_eq!(serde_json::to_string(&d).unwrap(), r#"{"num":5,"den":3}"#);
        assert!(serde_json::from_str::<ScaledDiscrepancy>(r#"{"num": 1, "den": 0}"#).is_err());
    }
}
