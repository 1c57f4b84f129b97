//! Alphabets, error graphs, words, clouds and nonadaptive codes.
//!
//! A [`Word`] is a fixed-length sequence over `{0, .., q-1}` packed into a
//! base-`q` integer, first transmitted symbol most significant. For `q = 2` a
//! word of length `n` is simply an `n`-bit integer, so an output space can be
//! swept with a bitset indexed by [`Word::value`].

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::math::checked_pow;

/// Largest output space (number of words) that codes in this crate enumerate.
pub const MAX_ENUMERATED_SPACE: u64 = 1 << 32;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ChannelError {
    AlphabetTooSmall(u8),
    SymbolOutOfRange { symbol: u8, q: u8 },
    SelfLoop(u8),
    SpaceTooLarge { q: u8, len: usize },
    LengthMismatch { expected: usize, found: usize },
    AlphabetMismatch { expected: u8, found: u8 },
    BadSymbol(char),
    /// Clouds of two codewords share `word`.
    Overlap { first: usize, second: usize, word: Word },
}

impl fmt::Display for ChannelError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChannelError::AlphabetTooSmall(q) => write!(f, "alphabet size {q} is below 2"),
            ChannelError::SymbolOutOfRange { symbol, q } => {
                write!(f, "symbol {symbol} is outside the alphabet of size {q}")
            }
            ChannelError::SelfLoop(s) => write!(f, "error graph has a self-loop on symbol {s}"),
            ChannelError::SpaceTooLarge { q, len } => {
                write!(f, "space of {q}-ary words of length {len} is too large")
            }
            ChannelError::LengthMismatch { expected, found } => {
                write!(f, "expected a word of length {expected}, found length {found}")
            }
            ChannelError::AlphabetMismatch { expected, found } => {
                write!(f, "expected a {expected}-ary word, found a {found}-ary word")
            }
            ChannelError::BadSymbol(c) => write!(f, "cannot parse symbol {c:?}"),
            ChannelError::Overlap {
                first,
                second,
                word,
            } => write!(f, "clouds of codewords {first} and {second} intersect at {word}"),
        }
    }
}

impl core::error::Error for ChannelError {}

/// Number of `q`-ary words of length `len`, if it fits in a `u64` below `2^63`.
pub fn space_size(q: u8, len: usize) -> Option<u64> {
    checked_pow(u64::from(q), len).filter(|&s| s <= 1 << 63)
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word {
    len: u8,
    q: u8,
    value: u64,
}

impl Word {
    /// Binary word of length `len` whose bits (most significant first) are `value`.
    ///
    /// Panics if `len > 63` or `value` has bits at or above `len`.
    pub fn binary(value: u64, len: usize) -> Word {
        assert!(len <= 63, "binary words are limited to 63 symbols");
        assert!(value >> len == 0, "value {value} does not fit in {len} bits");
        Word {
            len: len as u8,
            q: 2,
            value,
        }
    }

    pub fn empty(q: u8) -> Word {
        Word { len: 0, q, value: 0 }
    }

    pub fn from_value(value: u64, len: usize, q: u8) -> Result<Word, ChannelError> {
        if q < 2 {
            return Err(ChannelError::AlphabetTooSmall(q));
        }
        let size = space_size(q, len).ok_or(ChannelError::SpaceTooLarge { q, len })?;
        if value >= size {
            return Err(ChannelError::SpaceTooLarge { q, len });
        }
        Ok(Word {
            len: len as u8,
            q,
            value,
        })
    }

    pub fn from_symbols(symbols: &[u8], q: u8) -> Result<Word, ChannelError> {
        if q < 2 {
            return Err(ChannelError::AlphabetTooSmall(q));
        }
        space_size(q, symbols.len()).ok_or(ChannelError::SpaceTooLarge {
            q,
            len: symbols.len(),
        })?;
        let mut value = 0u64;
        for &s in symbols {
            if s >= q {
                return Err(ChannelError::SymbolOutOfRange { symbol: s, q });
            }
            value = value * u64::from(q) + u64::from(s);
        }
        Ok(Word {
            len: symbols.len() as u8,
            q,
            value,
        })
    }

    /// Parses a symbol string such as `"0011"`; digits then `a..z` for `q > 10`.
    pub fn parse(text: &str, q: u8) -> Result<Word, ChannelError> {
        let symbols = text
            .chars()
            .map(|c| c.to_digit(36).map(|d| d as u8).ok_or(ChannelError::BadSymbol(c)))
            .collect::<Result<Vec<u8>, _>>()?;
        Word::from_symbols(&symbols, q)
    }

    #[inline]
    pub fn len(&self) -> usize {
        usize::from(self.len)
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn q(&self) -> u8 {
        self.q
    }

    /// Packed base-`q` value; also the word's index in its output space.
    #[inline]
    pub fn value(&self) -> u64 {
        self.value
    }

    #[inline]
    fn place(&self, i: usize) -> u64 {
        let e = self.len() - 1 - i;
        if self.q == 2 {
            1 << e
        } else {
            u64::from(self.q).pow(e as u32)
        }
    }

    /// Symbol at position `i` (0 is transmitted first).
    #[inline]
    pub fn symbol(&self, i: usize) -> u8 {
        debug_assert!(i < self.len());
        if self.q == 2 {
            (self.value >> (self.len() - 1 - i) & 1) as u8
        } else {
            (self.value / self.place(i) % u64::from(self.q)) as u8
        }
    }

    pub fn symbols(&self) -> Vec<u8> {
        (0..self.len()).map(|i| self.symbol(i)).collect()
    }

    pub fn with_symbol(&self, i: usize, s: u8) -> Word {
        debug_assert!(s < self.q);
        let p = self.place(i);
        let old = u64::from(self.symbol(i));
        Word {
            value: self.value - old * p + u64::from(s) * p,
            ..*self
        }
    }

    /// Number of nonzero symbols.
    pub fn weight(&self) -> usize {
        if self.q == 2 {
            self.value.count_ones() as usize
        } else {
            (0..self.len()).filter(|&i| self.symbol(i) != 0).count()
        }
    }

    /// First `p` symbols.
    pub fn prefix(&self, p: usize) -> Word {
        assert!(p <= self.len());
        let drop = self.len() - p;
        let div = checked_pow(u64::from(self.q), drop).expect("word fits");
        Word {
            len: p as u8,
            q: self.q,
            value: self.value / div,
        }
    }

    /// Symbols from position `p` to the end.
    pub fn suffix(&self, p: usize) -> Word {
        assert!(p <= self.len());
        let keep = self.len() - p;
        let m = checked_pow(u64::from(self.q), keep).expect("word fits");
        Word {
            len: keep as u8,
            q: self.q,
            value: self.value % m,
        }
    }

    /// Symbols `from..to`.
    pub fn slice(&self, from: usize, to: usize) -> Word {
        self.prefix(to).suffix(from)
    }

    pub fn concat(&self, tail: &Word) -> Word {
        assert_eq!(self.q, tail.q, "alphabet mismatch in concat");
        let len = self.len() + tail.len();
        let shift = checked_pow(u64::from(self.q), tail.len())
            .filter(|_| space_size(self.q, len).is_some())
            .expect("concatenated word too long");
        Word {
            len: len as u8,
            q: self.q,
            value: self.value * shift + tail.value,
        }
    }
}

fn symbol_char(s: u8) -> char {
    char::from_digit(u32::from(s), 36).unwrap_or('?')
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = (0..self.len()).map(|i| symbol_char(self.symbol(i))).collect();
        f.write_str(&s)
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

/// Directed corruption relation on `{0, .., q-1}`: an edge `(a, b)` means a
/// single error may turn a transmitted `a` into a received `b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ErrorGraph {
    q: u8,
    edges: Vec<(u8, u8)>,
    targets: Vec<Vec<u8>>,
}

impl ErrorGraph {
    pub fn new(q: u8, edges: impl IntoIterator<Item = (u8, u8)>) -> Result<Self, ChannelError> {
        if q < 2 {
            return Err(ChannelError::AlphabetTooSmall(q));
        }
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            for s in [a, b] {
                if s >= q {
                    return Err(ChannelError::SymbolOutOfRange { symbol: s, q });
                }
            }
            if a == b {
                return Err(ChannelError::SelfLoop(a));
            }
            set.insert((a, b));
        }
        let edges: Vec<(u8, u8)> = set.into_iter().collect();
        let mut targets = vec![Vec::new(); usize::from(q)];
        for &(a, b) in &edges {
            targets[usize::from(a)].push(b);
        }
        Ok(ErrorGraph { q, edges, targets })
    }

    /// Binary symmetric channel: `0 -> 1` and `1 -> 0`.
    pub fn bsc() -> Self {
        ErrorGraph::new(2, [(0, 1), (1, 0)]).expect("valid graph")
    }

    /// Z-channel: a transmitted 1 may arrive as 0, a 0 always arrives intact.
    pub fn z_channel() -> Self {
        ErrorGraph::new(2, [(1, 0)]).expect("valid graph")
    }

    /// One-way ternary channel: `1 -> 0`, `2 -> 0`, `2 -> 1`.
    pub fn one_way_ternary() -> Self {
        ErrorGraph::new(3, [(1, 0), (2, 0), (2, 1)]).expect("valid graph")
    }

    /// Every symbol may be replaced by every other one.
    pub fn symmetric(q: u8) -> Result<Self, ChannelError> {
        ErrorGraph::new(q, (0..q).flat_map(|a| (0..q).filter(move |&b| b != a).map(move |b| (a, b))))
    }

    #[inline]
    pub fn q(&self) -> u8 {
        self.q
    }

    pub fn edges(&self) -> &[(u8, u8)] {
        &self.edges
    }

    /// Symbols a transmitted `s` may turn into.
    #[inline]
    pub fn targets(&self, s: u8) -> &[u8] {
        &self.targets[usize::from(s)]
    }

    pub fn has_edge(&self, from: u8, to: u8) -> bool {
        self.edges.binary_search(&(from, to)).is_ok()
    }

    pub fn is_bsc(&self) -> bool {
        *self == ErrorGraph::bsc()
    }

    pub fn is_z_channel(&self) -> bool {
        *self == ErrorGraph::z_channel()
    }
}

/// All words obtainable from `w` by changing at most `t` positions, each along
/// a graph edge. Always contains `w`.
pub fn error_ball(w: &Word, graph: &ErrorGraph, t: usize) -> BTreeSet<Word> {
    fn spread(cur: Word, orig: &Word, start: usize, left: usize, graph: &ErrorGraph, out: &mut BTreeSet<Word>) {
        for p in start..orig.len() {
            for &r in graph.targets(orig.symbol(p)) {
                let next = cur.with_symbol(p, r);
                out.insert(next);
                if left > 1 {
                    spread(next, orig, p + 1, left - 1, graph, out);
                }
            }
        }
    }
    assert_eq!(w.q(), graph.q(), "word and graph alphabets differ");
    let mut out = BTreeSet::new();
    out.insert(*w);
    if t > 0 {
        spread(*w, w, 0, t, graph, &mut out);
    }
    out
}

/// Words reachable from `w` by exactly one error, in increasing order.
pub fn single_error_neighbors(w: &Word, graph: &ErrorGraph) -> Vec<Word> {
    let mut out: Vec<Word> = (0..w.len())
        .flat_map(|p| graph.targets(w.symbol(p)).iter().map(move |&r| w.with_symbol(p, r)))
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cloud {
    pub message: usize,
    pub center: Word,
    pub members: BTreeSet<Word>,
}

/// Code without feedback: each codeword's cloud is its error ball.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NonadaptiveCode {
    n: usize,
    t: usize,
    graph: ErrorGraph,
    centers: Vec<Word>,
}

const NO_OWNER: u32 = u32::MAX;

impl NonadaptiveCode {
    pub fn new(n: usize, t: usize, graph: ErrorGraph, centers: Vec<Word>) -> Result<Self, ChannelError> {
        let q = graph.q();
        match space_size(q, n) {
            Some(s) if s <= MAX_ENUMERATED_SPACE => {}
            _ => return Err(ChannelError::SpaceTooLarge { q, len: n }),
        }
        for c in &centers {
            if c.len() != n {
                return Err(ChannelError::LengthMismatch {
                    expected: n,
                    found: c.len(),
                });
            }
            if c.q() != q {
                return Err(ChannelError::AlphabetMismatch {
                    expected: q,
                    found: c.q(),
                });
            }
        }
        Ok(NonadaptiveCode { n, t, graph, centers })
    }

    /// Binary code from packed codeword values.
    pub fn binary(n: usize, t: usize, graph: ErrorGraph, values: impl IntoIterator<Item = u64>) -> Result<Self, ChannelError> {
        let centers = values.into_iter().map(|v| Word::from_value(v, n, 2)).collect::<Result<Vec<_>, _>>()?;
        NonadaptiveCode::new(n, t, graph, centers)
    }

    pub fn empty(n: usize, t: usize, graph: ErrorGraph) -> Result<Self, ChannelError> {
        NonadaptiveCode::new(n, t, graph, Vec::new())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn graph(&self) -> &ErrorGraph {
        &self.graph
    }

    pub fn centers(&self) -> &[Word] {
        &self.centers
    }

    /// Cardinality `M`.
    pub fn len(&self) -> usize {
        self.centers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.centers.is_empty()
    }

    pub fn space_size(&self) -> u64 {
        space_size(self.graph.q(), self.n).expect("checked in constructor")
    }

    pub fn cloud(&self, index: usize) -> Cloud {
        let center = self.centers[index];
        Cloud {
            message: index,
            center,
            members: error_ball(&center, &self.graph, self.t),
        }
    }

    pub fn clouds(&self) -> Vec<Cloud> {
        (0..self.len()).map(|i| self.cloud(i)).collect()
    }

    /// Total cloud volume `Σ |cloud|`.
    pub fn cloud_volume(&self) -> u64 {
        self.centers
            .iter()
            .map(|c| error_ball(c, &self.graph, self.t).len() as u64)
            .sum()
    }

    /// Dense owner table: cloud index for each word of the space.
    pub fn cloud_lookup(&self) -> Result<CloudLookup, ChannelError> {
        let mut owner = vec![NO_OWNER; self.space_size() as usize];
        for (i, c) in self.centers.iter().enumerate() {
            for y in error_ball(c, &self.graph, self.t) {
                let slot = &mut owner[y.value() as usize];
                if *slot != NO_OWNER {
                    return Err(ChannelError::Overlap {
                        first: *slot as usize,
                        second: i,
                        word: y,
                    });
                }
                *slot = i as u32;
            }
        }
        Ok(CloudLookup {
            n: self.n,
            q: self.graph.q(),
            owner,
        })
    }

    /// Complement of the union of clouds, in increasing order.
    pub fn free_points(&self) -> Result<Vec<Word>, ChannelError> {
        Ok(self.cloud_lookup()?.free_points())
    }

    pub fn free_count(&self) -> Result<u64, ChannelError> {
        Ok(self.free_points()?.len() as u64)
    }

    pub fn validate(&self) -> ValidationReport {
        let size = self.space_size() as usize;
        let mut first_owner = vec![NO_OWNER; size];
        let mut overlaps = BTreeSet::new();
        let mut volume = 0u64;
        for (i, c) in self.centers.iter().enumerate() {
            let ball = error_ball(c, &self.graph, self.t);
            volume += ball.len() as u64;
            for y in ball {
                let slot = &mut first_owner[y.value() as usize];
                if *slot == NO_OWNER {
                    *slot = i as u32;
                } else {
                    overlaps.insert((*slot as usize, i));
                }
            }
        }
        // a word inside three clouds only records pairs with its first owner
        if !overlaps.is_empty() {
            let clouds = self.clouds();
            overlaps = BTreeSet::new();
            for a in 0..clouds.len() {
                for b in a + 1..clouds.len() {
                    if !clouds[a].members.is_disjoint(&clouds[b].members) {
                        overlaps.insert((a, b));
                    }
                }
            }
        }
        let covered = first_owner.iter().filter(|&&o| o != NO_OWNER).count() as u64;
        ValidationReport {
            overlaps: overlaps.into_iter().collect(),
            cloud_volume: volume,
            free_points: size as u64 - covered,
        }
    }
}

/// Word → owning cloud, for decoding nonadaptive codes.
#[derive(Clone, Debug)]
pub struct CloudLookup {
    n: usize,
    q: u8,
    owner: Vec<u32>,
}

impl CloudLookup {
    pub fn owner(&self, w: &Word) -> Option<usize> {
        match self.owner.get(w.value() as usize) {
            Some(&o) if o != NO_OWNER => Some(o as usize),
            _ => None,
        }
    }

    pub fn is_free(&self, w: &Word) -> bool {
        self.owner(w).is_none()
    }

    pub fn free_points(&self) -> Vec<Word> {
        self.owner
            .iter()
            .enumerate()
            .filter(|(_, &o)| o == NO_OWNER)
            .map(|(v, _)| Word::from_value(v as u64, self.n, self.q).expect("in space"))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    /// Pairs of codeword indices whose clouds intersect.
    pub overlaps: Vec<(usize, usize)>,
    pub cloud_volume: u64,
    /// Words of the space outside every cloud.
    pub free_points: u64,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.overlaps.is_empty()
    }
}

pub fn free_points(code: &NonadaptiveCode) -> Result<Vec<Word>, ChannelError> {
    code.free_points()
}

pub fn validate_code(code: &NonadaptiveCode) -> ValidationReport {
    code.validate()
}
