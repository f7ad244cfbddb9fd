//! Fixed-width bit set over the triple universe.

use std::fmt;

/// A set of triple ranks stored one bit per rank.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TripleSet {
    words: Box<[u64]>,
    len: usize,
}

impl TripleSet {
    pub fn new(len: usize) -> Self {
        TripleSet {
            words: vec![0; len.div_ceil(64)].into_boxed_slice(),
            len,
        }
    }

    pub fn from_ranks<I: IntoIterator<Item = usize>>(len: usize, ranks: I) -> Self {
        let mut set = TripleSet::new(len);
        for r in ranks {
            set.insert(r);
        }
        set
    }

    /// Capacity in bits (the size of the triple universe).
    #[inline]
    pub fn capacity(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn insert(&mut self, rank: usize) {
        assert!(rank < self.len, "rank {rank} out of range {}", self.len);
        self.words[rank / 64] |= 1 << (rank % 64);
    }

    #[inline]
    pub fn remove(&mut self, rank: usize) {
        assert!(rank < self.len, "rank {rank} out of range {}", self.len);
        self.words[rank / 64] &= !(1 << (rank % 64));
    }

    #[inline]
    pub fn contains(&self, rank: usize) -> bool {
        rank < self.len && self.words[rank / 64] >> (rank % 64) & 1 == 1
    }

    #[inline]
    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// `|self ∩ other|` without materialising the intersection.
    #[inline]
    pub fn intersection_count(&self, other: &TripleSet) -> usize {
        debug_assert_eq!(self.len, other.len);
        self.words
            .iter()
            .zip(other.words.iter())
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let bit = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(i * 64 + bit)
            })
        })
    }
}

impl fmt::Debug for TripleSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}
