//! Fixed-capacity state sets and binary relations over `0..n`.

use smallvec::SmallVec;
use std::fmt;

type Words = SmallVec<[u64; 2]>;

fn word_count(n: usize) -> usize {
    n.div_ceil(64)
}

/// A subset of `0..len`, stored as a bitset.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StateSet {
    len: usize,
    words: Words,
}

impl StateSet {
    pub fn empty(len: usize) -> Self {
        StateSet { len, words: SmallVec::from_elem(0, word_count(len)) }
    }

    pub fn full(len: usize) -> Self {
        let mut s = StateSet { len, words: SmallVec::from_elem(!0, word_count(len)) };
        s.trim();
        s
    }

    pub fn singleton(len: usize, i: usize) -> Self {
        let mut s = Self::empty(len);
        s.insert(i);
        s
    }

    pub fn from_states<I: IntoIterator<Item = usize>>(len: usize, states: I) -> Self {
        let mut s = Self::empty(len);
        for i in states {
            s.insert(i);
        }
        s
    }

    /// Builds the set whose members are the set bits of `mask` (requires `len <= 64`).
    pub fn from_mask(len: usize, mask: u64) -> Self {
        assert!(len <= 64);
        let mut s = Self::empty(len);
        if len > 0 {
            s.words[0] = mask;
            s.trim();
        }
        s
    }

    /// Low 64 bits of the set; exact when `len <= 64`.
    pub fn mask(&self) -> u64 {
        self.words.first().copied().unwrap_or(0)
    }

    fn trim(&mut self) {
        let r = self.len % 64;
        if r != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << r) - 1;
            }
        }
    }

    pub fn universe(&self) -> usize {
        self.len
    }

    pub fn contains(&self, i: usize) -> bool {
        i < self.len && self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn insert(&mut self, i: usize) {
        assert!(i < self.len, "state {i} out of range {}", self.len);
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn remove(&mut self, i: usize) {
        if i < self.len {
            self.words[i / 64] &= !(1 << (i % 64));
        }
    }

    /// Sets every bit in `lo..hi`.
    pub fn insert_range(&mut self, lo: usize, hi: usize) {
        let mut i = lo;
        while i < hi {
            let w = i / 64;
            let b = i % 64;
            let take = (64 - b).min(hi - i);
            let bits = if take == 64 { !0 } else { ((1u64 << take) - 1) << b };
            self.words[w] |= bits;
            i += take;
        }
    }

    /// Number of members inside `lo..hi`.
    pub fn count_range(&self, lo: usize, hi: usize) -> usize {
        let mut i = lo;
        let mut c = 0;
        while i < hi {
            let w = i / 64;
            let b = i % 64;
            let take = (64 - b).min(hi - i);
            let bits = if take == 64 { !0 } else { ((1u64 << take) - 1) << b };
            c += (self.words[w] & bits).count_ones() as usize;
            i += take;
        }
        c
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_full(&self) -> bool {
        self.count() == self.len
    }

    pub fn first(&self) -> Option<usize> {
        self.iter().next()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(wi * 64 + b)
                }
            })
        })
    }

    pub fn union_with(&mut self, other: &StateSet) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn intersect_with(&mut self, other: &StateSet) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn subtract(&mut self, other: &StateSet) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
    }

    pub fn union(&self, other: &StateSet) -> StateSet {
        let mut r = self.clone();
        r.union_with(other);
        r
    }

    pub fn intersection(&self, other: &StateSet) -> StateSet {
        let mut r = self.clone();
        r.intersect_with(other);
        r
    }

    pub fn difference(&self, other: &StateSet) -> StateSet {
        let mut r = self.clone();
        r.subtract(other);
        r
    }

    pub fn complement(&self) -> StateSet {
        let mut r = self.clone();
        for w in r.words.iter_mut() {
            *w = !*w;
        }
        r.trim();
        r
    }

    pub fn is_subset(&self, other: &StateSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn intersects(&self, other: &StateSet) -> bool {
        self.words.iter().zip(&other.words).any(|(a, b)| a & b != 0)
    }
}

impl fmt::Debug for StateSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// A binary relation on `0..n`, one row per source state.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rel {
    rows: Vec<StateSet>,
}

impl Rel {
    pub fn empty(n: usize) -> Self {
        Rel { rows: vec![StateSet::empty(n); n] }
    }

    pub fn identity(n: usize) -> Self {
        Rel { rows: (0..n).map(|i| StateSet::singleton(n, i)).collect() }
    }

    pub fn total(n: usize) -> Self {
        Rel { rows: vec![StateSet::full(n); n] }
    }

    pub fn from_pairs<I: IntoIterator<Item = (usize, usize)>>(n: usize, pairs: I) -> Self {
        let mut r = Self::empty(n);
        for (i, j) in pairs {
            r.insert(i, j);
        }
        r
    }

    /// Relation whose pair `(i, j)` is bit `i * n + j` of `mask` (requires `n * n <= 64`).
    pub fn from_mask(n: usize, mask: u64) -> Self {
        let mut r = Self::empty(n);
        for i in 0..n {
            for j in 0..n {
                if mask >> (i * n + j) & 1 == 1 {
                    r.insert(i, j);
                }
            }
        }
        r
    }

    pub fn to_mask(&self) -> u64 {
        let n = self.size();
        let mut m = 0;
        for (i, j) in self.pairs() {
            m |= 1 << (i * n + j);
        }
        m
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.rows[i].contains(j)
    }

    pub fn insert(&mut self, i: usize, j: usize) {
        self.rows[i].insert(j);
    }

    pub fn row(&self, i: usize) -> &StateSet {
        &self.rows[i]
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.rows.iter().enumerate().flat_map(|(i, r)| r.iter().map(move |j| (i, j)))
    }

    pub fn pair_count(&self) -> usize {
        self.rows.iter().map(StateSet::count).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.iter().all(StateSet::is_empty)
    }

    /// `i (self ∘ other) k` iff some `j` has `i self j` and `j other k`.
    pub fn compose(&self, other: &Rel) -> Rel {
        let n = self.size();
        let rows = self
            .rows
            .iter()
            .map(|r| {
                let mut out = StateSet::empty(n);
                for j in r.iter() {
                    out.union_with(&other.rows[j]);
                }
                out
            })
            .collect();
        Rel { rows }
    }

    pub fn transpose(&self) -> Rel {
        let n = self.size();
        let mut t = Rel::empty(n);
        for (i, j) in self.pairs() {
            t.insert(j, i);
        }
        t
    }

    pub fn union(&self, other: &Rel) -> Rel {
        Rel { rows: self.rows.iter().zip(&other.rows).map(|(a, b)| a.union(b)).collect() }
    }

    pub fn intersection(&self, other: &Rel) -> Rel {
        Rel { rows: self.rows.iter().zip(&other.rows).map(|(a, b)| a.intersection(b)).collect() }
    }

    pub fn is_subset(&self, other: &Rel) -> bool {
        self.rows.iter().zip(&other.rows).all(|(a, b)| a.is_subset(b))
    }

    pub fn is_reflexive(&self) -> bool {
        (0..self.size()).all(|i| self.contains(i, i))
    }

    pub fn is_symmetric(&self) -> bool {
        self.pairs().all(|(i, j)| self.contains(j, i))
    }

    pub fn is_transitive(&self) -> bool {
        self.compose(self).is_subset(self)
    }

    pub fn reflexive_transitive_closure(&self) -> Rel {
        let mut r = self.union(&Rel::identity(self.size()));
        loop {
            let next = r.union(&r.compose(&r));
            if next == r {
                return r;
            }
            r = next;
        }
    }

    /// `{j : some i ∈ x with i self j}`.
    pub fn image(&self, x: &StateSet) -> StateSet {
        let mut out = StateSet::empty(self.size());
        for i in x.iter() {
            out.union_with(&self.rows[i]);
        }
        out
    }

    /// `{i : some j ∈ x with i self j}`.
    pub fn preimage(&self, x: &StateSet) -> StateSet {
        let n = self.size();
        StateSet::from_states(n, (0..n).filter(|&i| self.rows[i].intersects(x)))
    }
}

impl fmt::Debug for Rel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.pairs()).finish()
    }
}
