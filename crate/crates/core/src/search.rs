//! Code search: Hamming codes, maximum single-error-correcting BSC codes of
//! small length, and Z-channel codes with the most free points.
//!
//! The Z-channel search walks candidate weight distributions from the
//! free-point bound downwards and, for each, tries to realise it with a
//! depth-first search over the weight layers. The first distribution that
//! can be realised is optimal provided every better one was refuted
//! exhaustively.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::bitset::BitSet;
use crate::bounds::{BoundError, BoundProblem, WeightDistribution};
use crate::channel::{error_ball, ChannelError, ErrorGraph, NonadaptiveCode, Word};
use crate::clique::{CliqueSearch, Graph};
use crate::constant_weight::CwTable;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchError {
    /// No code of this cardinality exists (the bound system is infeasible).
    Infeasible { n: usize, m: u64 },
    /// The node budget ran out before any code was found.
    BudgetExhausted { n: usize, m: u64 },
    Unsupported(&'static str),
    Bound(BoundError),
    Channel(ChannelError),
}

impl fmt::Display for SearchError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SearchError::Infeasible { n, m } => write!(f, "no single-error Z-code of length {n} with {m} words"),
            SearchError::BudgetExhausted { n, m } => {
                write!(f, "search budget exhausted before finding a code (n={n}, M={m})")
            }
            SearchError::Unsupported(what) => write!(f, "unsupported: {what}"),
            SearchError::Bound(e) => write!(f, "{e}"),
            SearchError::Channel(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for SearchError {}

impl From<BoundError> for SearchError {
    fn from(e: BoundError) -> Self {
        match e {
            BoundError::Infeasible { n, m, .. } => SearchError::Infeasible { n, m },
            e => SearchError::Bound(e),
        }
    }
}

impl From<ChannelError> for SearchError {
    fn from(e: ChannelError) -> Self {
        SearchError::Channel(e)
    }
}

/// Hamming code of length `2^k - 1`, codewords in increasing order.
///
/// Position `i` (0 transmitted first) has parity-check column `i + 1`.
pub fn hamming_code(k: usize) -> Result<NonadaptiveCode, SearchError> {
    if k == 0 || k > 4 {
        return Err(SearchError::Unsupported("Hamming parameter must be 1..=4"));
    }
    shortened_hamming_code((1 << k) - 1)
}

/// Hamming code shortened to `len` positions (the first `len` columns).
pub fn shortened_hamming_code(len: usize) -> Result<NonadaptiveCode, SearchError> {
    if len == 0 || len > 20 {
        return Err(SearchError::Unsupported("shortened Hamming length must be 1..=20"));
    }
    let words = (0u64..1 << len).filter(|&x| {
        (0..len).filter(|&i| x >> (len - 1 - i) & 1 == 1).fold(0, |s, i| s ^ (i + 1)) == 0
    });
    Ok(NonadaptiveCode::binary(len, 1, ErrorGraph::bsc(), words)?)
}

/// Result of a maximum BSC code search.
#[derive(Clone, Debug)]
pub struct BscCode {
    pub code: NonadaptiveCode,
    /// No larger code of this length exists.
    pub proven: bool,
}

/// A 20-word length-8 code found once by [`clique_bsc_code`]
/// (about 40 s, not exhaustive). Twenty is the known optimum at this length.
const LENGTH_8_CODE: [u64; 20] = [
    0, 29, 51, 62, 78, 87, 101, 107, 120, 143, 154, 166, 169, 181, 195, 212, 217, 236, 242, 255,
];

/// Largest single-error-correcting BSC code of length `n` this crate can
/// find: clique search up to length 7, a stored code at 8, shortened
/// Hamming codes beyond.
pub fn bsc_max_code(n: usize, node_limit: u64) -> Result<BscCode, SearchError> {
    if n == 0 {
        return Err(SearchError::Unsupported("length must be positive"));
    }
    if n == 8 {
        return Ok(BscCode {
            code: NonadaptiveCode::binary(8, 1, ErrorGraph::bsc(), LENGTH_8_CODE)?,
            proven: false,
        });
    }
    if n > 8 {
        return Ok(BscCode {
            code: shortened_hamming_code(n)?,
            proven: (n + 1).is_power_of_two(),
        });
    }
    clique_bsc_code(n, node_limit)
}

/// Clique search for a maximum BSC code, fixing the zero word.
pub fn clique_bsc_code(n: usize, node_limit: u64) -> Result<BscCode, SearchError> {
    if n == 0 || n > 10 {
        return Err(SearchError::Unsupported("clique search limited to lengths 1..=10"));
    }
    let size = 1usize << n;
    let g = Graph::from_fn(size, |a, b| (a ^ b).count_ones() >= 3);
    let exhaustive = CliqueSearch {
        target: None,
        node_limit: Some(node_limit),
    }
    .run(&g, &[0], None);
    let mut best = exhaustive.clique.clone();
    // a code with a pair at distance 3 can be moved to contain 0 and 0..0111
    if !exhaustive.complete && n >= 3 {
        let r = CliqueSearch {
            target: None,
            node_limit: Some(node_limit),
        }
        .run(&g, &[0, 7], None);
        if r.clique.len() > best.len() {
            best = r.clique;
        }
    }
    best.sort_unstable();
    Ok(BscCode {
        code: NonadaptiveCode::binary(n, 1, ErrorGraph::bsc(), best.into_iter().map(|v| v as u64))?,
        proven: exhaustive.complete,
    })
}

/// A Z-channel single-error code with many free points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FOptimalEntry {
    pub n: usize,
    pub m: u64,
    pub t: usize,
    pub free_points: i64,
    pub distribution: WeightDistribution,
    /// Codewords in increasing order.
    pub centers: Vec<Word>,
    /// `free_points` equals the bound, so the code is optimal.
    pub optimal_flag: bool,
    /// No code with more free points exists (bound met, or every better
    /// distribution refuted exhaustively).
    pub proven: bool,
    pub bound: i64,
}

impl FOptimalEntry {
    pub fn code(&self) -> NonadaptiveCode {
        NonadaptiveCode::new(self.n, self.t, ErrorGraph::z_channel(), self.centers.clone()).expect("valid entry")
    }

    pub fn values(&self) -> Vec<u64> {
        self.centers.iter().map(Word::value).collect()
    }
}

/// Shared data for Z-channel searches of one length.
pub struct ZSpace {
    n: usize,
    conflicts: Vec<BitSet>,
    layers: Vec<Vec<usize>>,
    cw: Arc<CwTable>,
}

impl ZSpace {
    pub fn new(n: usize) -> Result<Self, SearchError> {
        if !(2..=12).contains(&n) {
            return Err(SearchError::Unsupported("Z-channel search supports lengths 2..=12"));
        }
        let size = 1usize << n;
        let z = ErrorGraph::z_channel();
        let balls: Vec<BitSet> = (0..size as u64)
            .map(|v| error_ball(&Word::binary(v, n), &z, 1).iter().map(|w| w.value() as usize).fold(BitSet::new(size), |mut s, i| {
                s.insert(i);
                s
            }))
            .collect();
        // two words conflict iff their balls meet; each ball has a word and
        // some of its one-lower neighbours, so it suffices to scan neighbours
        let mut conflicts = vec![BitSet::new(size); size];
        for x in 0..size {
            for y in balls[x].iter() {
                // every z whose ball contains y: y itself and y with one extra bit
                let mut owners = vec![y];
                for b in 0..n {
                    if y >> b & 1 == 0 {
                        owners.push(y | 1 << b);
                    }
                }
                for o in owners {
                    if o != x && balls[o].contains(y) {
                        conflicts[x].insert(o);
                    }
                }
            }
        }
        let mut layers = vec![Vec::new(); n + 1];
        for x in 0..size {
            layers[(x as u64).count_ones() as usize].push(x);
        }
        Ok(ZSpace {
            n,
            conflicts,
            layers,
            cw: Arc::new(CwTable::standard(4, 2 * n)),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn conflicts(&self, x: usize) -> &BitSet {
        &self.conflicts[x]
    }

    /// Words that can join `centers` without breaking cloud disjointness.
    pub fn extensions(&self, centers: &[usize]) -> Vec<usize> {
        let mut blocked = BitSet::new(1 << self.n);
        for &c in centers {
            blocked.insert(c);
            blocked.union_with(&self.conflicts[c]);
        }
        (0..1 << self.n).filter(|&x| !blocked.contains(x)).collect()
    }
}

/// Outcome of trying to realise one weight distribution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Realisation {
    Found(Vec<usize>),
    /// Exhaustively refuted.
    Impossible,
    /// Budget ran out.
    Unknown,
}

struct Realiser<'a> {
    space: &'a ZSpace,
    /// Layer weights in processing order.
    order: Vec<usize>,
    need: Vec<usize>,
    chosen: Vec<usize>,
    nodes: u64,
    limit: u64,
    aborted: bool,
    group_mark: BitSet,
}

impl Realiser<'_> {
    fn tick(&mut self) -> bool {
        self.nodes += 1;
        if self.nodes > self.limit {
            self.aborted = true;
        }
        !self.aborted
    }

    /// Upper bound on how many pairwise compatible words `avail` holds, from
    /// partitions of a weight layer into cliques of the conflict graph.
    fn packing_bound(&mut self, w: usize, avail: &[usize]) -> usize {
        let n = self.space.n;
        let mut best = avail.len();
        if w == 0 || avail.len() <= 1 {
            return best;
        }
        for kind in 0..4 {
            if (kind >= 2 && w == n) || best <= 1 {
                continue;
            }
            self.group_mark.clear();
            let mut groups = 0;
            for &x in avail {
                let key = match kind {
                    0 => x & !(1 << (usize::BITS - 1 - x.leading_zeros())),
                    1 => x & (x - 1),
                    2 => x | (!x & (x + 1)),
                    _ => {
                        let free = !x & ((1 << n) - 1);
                        x | 1 << (usize::BITS - 1 - free.leading_zeros())
                    }
                };
                if self.group_mark.insert(key) {
                    groups += 1;
                }
            }
            best = best.min(groups);
        }
        best
    }

    fn feasible(&mut self, li: usize, blocked: &BitSet, from: usize, restrict: Option<&BitSet>) -> bool {
        for lj in li..self.order.len() {
            let w = self.order[lj];
            let need = self.need[lj];
            if need == 0 {
                continue;
            }
            let avail: Vec<usize> = self.space.layers[w]
                .iter()
                .copied()
                .filter(|&x| !blocked.contains(x) && (lj != li || (x >= from && restrict.is_none_or(|r| r.contains(x)))))
                .collect();
            if avail.len() < need || self.packing_bound(w, &avail) < need {
                return false;
            }
        }
        true
    }

    fn place(&mut self, x: usize, blocked: &BitSet) -> BitSet {
        let mut next = blocked.clone();
        next.insert(x);
        next.union_with(&self.space.conflicts[x]);
        self.chosen.push(x);
        next
    }

    fn rec(&mut self, li: usize, blocked: &BitSet, from: usize, restrict: Option<&BitSet>) -> bool {
        if li == self.order.len() {
            return true;
        }
        if self.need[li] == 0 {
            return self.rec(li + 1, blocked, 0, None);
        }
        if !self.tick() || !self.feasible(li, blocked, from, restrict) {
            return false;
        }
        let w = self.order[li];
        let layer: &[usize] = &self.space.layers[w];
        let start = layer.partition_point(|&x| x < from);
        for idx in start..layer.len() {
            let x = self.space.layers[w][idx];
            if blocked.contains(x) || restrict.is_some_and(|r| !r.contains(x)) {
                continue;
            }
            let next = self.place(x, blocked);
            self.need[li] -= 1;
            let done = self.rec(li, &next, x + 1, restrict);
            self.need[li] += 1;
            if done {
                return true;
            }
            self.chosen.pop();
            if self.aborted {
                return false;
            }
        }
        false
    }

    /// Fixes the first word of the first nonempty layer by symmetry and
    /// branches on the largest overlap it has with another word of that layer.
    fn run(&mut self) -> bool {
        let n = self.space.n;
        let size = 1usize << n;
        let blocked = BitSet::new(size);
        let Some(li) = self.order.iter().zip(&self.need).position(|(&w, &c)| c > 0 && w > 0) else {
            return self.rec(0, &blocked, 0, None);
        };
        // layers before li are weight 0 or empty; place them first
        let mut blocked = blocked;
        for lj in 0..li {
            if self.need[lj] > 0 {
                blocked = self.place(0, &blocked);
                self.need[lj] -= 1;
            }
        }
        let w = self.order[li];
        let first = (1usize << w) - 1;
        if blocked.contains(first) {
            return false;
        }
        let blocked = self.place(first, &blocked);
        self.need[li] -= 1;
        if self.need[li] == 0 {
            return self.rec(li + 1, &blocked, 0, None);
        }
        for k in (0..w.saturating_sub(1)).rev() {
            if 2 * w - k > n {
                continue;
            }
            let rep = ((1usize << k) - 1) | (((1usize << (w - k)) - 1) << w);
            if blocked.contains(rep) {
                continue;
            }
            let mut restrict = BitSet::new(size);
            for &x in &self.space.layers[w] {
                if (x & first).count_ones() as usize <= k && x != rep {
                    restrict.insert(x);
                }
            }
            let next = self.place(rep, &blocked);
            self.need[li] -= 1;
            let done = self.rec(li, &next, 0, Some(&restrict));
            self.need[li] += 1;
            if done {
                return true;
            }
            self.chosen.pop();
            if self.aborted {
                return false;
            }
        }
        false
    }
}

/// Tries to build a Z-channel single-error code with weight distribution `z`.
pub fn realise_distribution(space: &ZSpace, z: &WeightDistribution, node_limit: u64) -> (Realisation, u64) {
    let n = space.n;
    assert_eq!(z.n(), n, "distribution length");
    let mut order: Vec<usize> = (0..=n).filter(|&w| z.get(w) > 0).collect();
    // most constrained layers first
    order.sort_by(|&a, &b| {
        let ta = z.get(a) as u128 * space.cw.upper(n, b).max(1) as u128;
        let tb = z.get(b) as u128 * space.cw.upper(n, a).max(1) as u128;
        (a != 0).cmp(&(b != 0)).then(tb.cmp(&ta)).then(a.cmp(&b))
    });
    let need: Vec<usize> = order.iter().map(|&w| z.get(w) as usize).collect();
    if order.iter().zip(&need).any(|(&w, &c)| c > space.layers[w].len()) {
        return (Realisation::Impossible, 0);
    }
    let mut r = Realiser {
        space,
        order,
        need,
        chosen: Vec::new(),
        nodes: 0,
        limit: node_limit,
        aborted: false,
        group_mark: BitSet::new(1 << n),
    };
    let found = r.run();
    let outcome = if found {
        let mut c = r.chosen.clone();
        c.sort_unstable();
        Realisation::Found(c)
    } else if r.aborted {
        Realisation::Unknown
    } else {
        Realisation::Impossible
    };
    (outcome, r.nodes)
}

/// Search budget in branch nodes, shared across all distributions tried.
#[derive(Clone, Copy, Debug)]
pub struct SearchLimit {
    pub nodes: u64,
    /// Per-distribution cap, so one hard distribution cannot starve the rest.
    pub nodes_per_distribution: u64,
}

impl Default for SearchLimit {
    fn default() -> Self {
        SearchLimit {
            nodes: 200_000_000,
            nodes_per_distribution: 20_000_000,
        }
    }
}

/// Z-channel code of length `n` with `m` words and as many free points as the
/// search can certify.
pub fn search_f_optimal(n: usize, m: u64, t: usize, limit: SearchLimit) -> Result<FOptimalEntry, SearchError> {
    let space = ZSpace::new(n)?;
    search_f_optimal_in(&space, m, t, limit)
}

pub fn search_f_optimal_in(space: &ZSpace, m: u64, t: usize, limit: SearchLimit) -> Result<FOptimalEntry, SearchError> {
    if t != 1 {
        return Err(SearchError::Unsupported("code search is implemented for a single error"));
    }
    let n = space.n;
    let problem = BoundProblem::with_table(n, m, t, space.cw.clone())?;
    let bound = problem.upper_bound()?.free_points;
    let mut spent = 0u64;
    let mut all_refuted = true;
    let mut floor = bound;
    let mut tried_down_to = i64::MAX;
    loop {
        let candidates = problem.feasible_distributions(floor);
        for (f, z) in candidates.iter().filter(|(f, _)| *f < tried_down_to) {
            if spent >= limit.nodes {
                return Err(SearchError::BudgetExhausted { n, m });
            }
            let cap = limit.nodes_per_distribution.min(limit.nodes - spent);
            let (outcome, used) = realise_distribution(space, z, cap);
            spent += used;
            match outcome {
                Realisation::Found(words) => {
                    let centers: Vec<Word> = words.iter().map(|&v| Word::binary(v as u64, n)).collect();
                    let proven = all_refuted || *f == bound;
                    return Ok(FOptimalEntry {
                        n,
                        m,
                        t,
                        free_points: *f,
                        distribution: z.clone(),
                        centers,
                        optimal_flag: *f == bound,
                        proven,
                        bound,
                    });
                }
                Realisation::Impossible => {}
                Realisation::Unknown => all_refuted = false,
            }
        }
        if floor <= 0 {
            return Err(if all_refuted {
                SearchError::Infeasible { n, m }
            } else {
                SearchError::BudgetExhausted { n, m }
            });
        }
        tried_down_to = floor;
        floor -= (bound - floor).max(4);
        floor = floor.max(0);
    }
}

/// Nested codes `C_1 ⊂ .. ⊂ C_top`: the top code is searched, smaller ones
/// drop a heaviest codeword (the largest such value) at each step.
/// Entries are indexed by `M - 1`.
pub fn search_nested_family(n: usize, t: usize, top: u64, limit: SearchLimit) -> Result<Vec<FOptimalEntry>, SearchError> {
    let space = ZSpace::new(n)?;
    let top_entry = search_f_optimal_in(&space, top, t, limit)?;
    Ok(nested_from(&space, &top_entry)?)
}

/// Nested family obtained from `top` by repeatedly deleting a heaviest word.
pub fn nested_from(space: &ZSpace, top: &FOptimalEntry) -> Result<Vec<FOptimalEntry>, BoundError> {
    let n = space.n;
    let problem = BoundProblem::with_table(n, top.m, top.t, space.cw.clone())?;
    let mut words: Vec<u64> = top.values();
    let mut out = Vec::with_capacity(words.len());
    out.push(top.clone());
    while words.len() > 1 {
        let (pos, _) = words
            .iter()
            .enumerate()
            .max_by_key(|(_, &v)| (v.count_ones(), v))
            .expect("nonempty");
        words.remove(pos);
        let m = words.len() as u64;
        let z = WeightDistribution::of_words(n, words.iter().copied());
        let f = z.free_points(top.t);
        let bound = problem.with_cardinality(m)?.upper_bound()?.free_points;
        out.push(FOptimalEntry {
            n,
            m,
            t: top.t,
            free_points: f,
            distribution: z,
            centers: words.iter().map(|&v| Word::binary(v, n)).collect(),
            optimal_flag: f == bound,
            proven: f == bound,
            bound,
        });
    }
    out.reverse();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    #[test]
    fn hamming_codes_are_perfect() {
        assert_eq!(hamming_code(1).unwrap().centers(), &[Word::binary(0, 1)]);
        let h2 = hamming_code(2).unwrap();
        assert_eq!(h2.centers(), &[Word::binary(0, 3), Word::binary(7, 3)]);
        for k in 1..=4 {
            let h = hamming_code(k).unwrap();
            assert_eq!(h.len(), 1 << ((1 << k) - 1 - k));
            let r = h.validate();
            assert!(r.passed());
            assert_eq!(r.free_points, 0);
        }
        assert!(hamming_code(0).is_err());
    }

    #[test]
    fn shortened_hamming_sizes() {
        for (len, size) in [(4, 2), (5, 4), (6, 8), (9, 32), (10, 64)] {
            let c = shortened_hamming_code(len).unwrap();
            assert_eq!(c.len(), size);
            assert!(c.validate().passed());
        }
    }

    #[test]
    fn small_bsc_maxima() {
        for (n, a) in [(1, 1), (2, 1), (3, 2), (4, 2), (5, 4), (6, 8), (7, 16)] {
            let c = bsc_max_code(n, 5_000_000).unwrap();
            assert_eq!(c.code.len(), a, "A({n},3)");
            assert!(c.code.validate().passed());
        }
        let c = bsc_max_code(8, 0).unwrap();
        assert_eq!(c.code.len(), 20);
        assert!(c.code.validate().passed());
    }

    #[test]
    fn z_conflicts_match_cloud_intersection() {
        let space = ZSpace::new(5).unwrap();
        let z = ErrorGraph::z_channel();
        for x in 0..32u64 {
            for y in 0..32u64 {
                if x == y {
                    continue;
                }
                let bx = error_ball(&Word::binary(x, 5), &z, 1);
                let by = error_ball(&Word::binary(y, 5), &z, 1);
                assert_eq!(space.conflicts(x as usize).contains(y as usize), !bx.is_disjoint(&by));
            }
        }
    }

    #[test]
    fn length_six_optimum() {
        let e = search_f_optimal(6, 12, 1, SearchLimit::default()).unwrap();
        assert_eq!(e.free_points, 16);
        assert_eq!(e.distribution.to_string(), "1+0+3+4+3+0+1");
        assert!(e.optimal_flag && e.proven);
        let code = e.code();
        assert!(code.validate().passed());
        assert_eq!(code.free_count().unwrap() as i64, e.free_points);
    }

    #[test]
    fn nested_family_length_six() {
        let fam = search_nested_family(6, 1, 12, SearchLimit::default()).unwrap();
        let fs: Vec<i64> = fam[7..].iter().map(|e| e.free_points).collect();
        assert_eq!(fs, vec![38, 33, 28, 23, 16]);
        for pair in fam.windows(2) {
            assert!(pair[0].centers.iter().all(|c| pair[1].centers.contains(c)));
            assert!(pair[0].free_points > pair[1].free_points);
        }
    }

    #[test]
    fn infeasible_cardinality() {
        assert_eq!(
            search_f_optimal(6, 13, 1, SearchLimit::default()),
            Err(SearchError::Infeasible { n: 6, m: 13 })
        );
    }

    #[test]
    fn realise_rejects_impossible_layer() {
        let space = ZSpace::new(4).unwrap();
        let z: WeightDistribution = "1+0+3+0+0".parse().unwrap();
        assert_eq!(realise_distribution(&space, &z, 1000).0, Realisation::Impossible);
        let ok: WeightDistribution = "1+0+2+0+1".parse().unwrap();
        assert!(matches!(realise_distribution(&space, &ok, 1000).0, Realisation::Found(_)));
    }
}
