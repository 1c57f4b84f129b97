//! Executable feedback strategies and the constructions that produce them.
//!
//! A [`FeedbackStrategy`] splits the `n` channel uses into blocks. The first
//! block depends on the message only; every later block is looked up from the
//! symbols received so far (the feedback). The decoder is a table over the
//! whole output space.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::channel::{single_error_neighbors, space_size, ChannelError, CloudLookup, ErrorGraph, NonadaptiveCode, Word};
use crate::math::{binomial, checked_pow};
use crate::search::{bsc_max_code, hamming_code, BscCode, SearchError};

/// Largest output space for which a dense decoder table is kept.
pub const MAX_DECODER_SPACE: u64 = 1 << 24;

const NONE: u32 = u32::MAX;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StrategyError {
    /// The free points of `C(vertex)` cannot absorb every message whose first
    /// block can be corrupted into `vertex`.
    ConstraintViolation { vertex: Word, required: u64, available: u64 },
    /// Two messages reach the same received word.
    Collision { word: Word, first: usize, second: usize },
    MissingTransition { message: usize, prefix: Word },
    Malformed(&'static str),
    Unsupported(&'static str),
    EmptyTable,
    Channel(ChannelError),
    Search(SearchError),
}

impl fmt::Display for StrategyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StrategyError::ConstraintViolation {
                vertex,
                required,
                available,
            } => write!(f, "vertex {vertex} needs {required} free points but its code has {available}"),
            StrategyError::Collision { word, first, second } => {
                write!(f, "messages {first} and {second} both reach {word}")
            }
            StrategyError::MissingTransition { message, prefix } => {
                write!(f, "message {message} has no block for received prefix {prefix}")
            }
            StrategyError::Malformed(what) => write!(f, "malformed strategy: {what}"),
            StrategyError::Unsupported(what) => write!(f, "unsupported: {what}"),
            StrategyError::EmptyTable => f.write_str("free-point table is empty"),
            StrategyError::Channel(e) => write!(f, "{e}"),
            StrategyError::Search(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for StrategyError {}

impl From<ChannelError> for StrategyError {
    fn from(e: ChannelError) -> Self {
        StrategyError::Channel(e)
    }
}

impl From<SearchError> for StrategyError {
    fn from(e: SearchError) -> Self {
        StrategyError::Search(e)
    }
}

/// Encoder of one message.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MessagePlan {
    pub first: Word,
    /// `next[i]` maps the received prefix at feedback point `i` to the next block.
    pub next: Vec<BTreeMap<Word, Word>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FeedbackStrategy {
    graph: ErrorGraph,
    block_lengths: Vec<usize>,
    plans: Vec<MessagePlan>,
    decoder: Vec<u32>,
}

impl FeedbackStrategy {
    pub fn new(
        graph: ErrorGraph,
        block_lengths: Vec<usize>,
        plans: Vec<MessagePlan>,
        decoder: impl IntoIterator<Item = (Word, usize)>,
    ) -> Result<Self, StrategyError> {
        if block_lengths.is_empty() || block_lengths.contains(&0) {
            return Err(StrategyError::Malformed("block lengths must be positive"));
        }
        let q = graph.q();
        let n: usize = block_lengths.iter().sum();
        let size = space_size(q, n)
            .filter(|&s| s <= MAX_DECODER_SPACE)
            .ok_or(ChannelError::SpaceTooLarge { q, len: n })?;
        if plans.len() >= NONE as usize {
            return Err(StrategyError::Malformed("too many messages"));
        }
        let ends: Vec<usize> = block_lengths
            .iter()
            .scan(0, |acc, &l| {
                *acc += l;
                Some(*acc)
            })
            .collect();
        for p in &plans {
            if p.first.len() != block_lengths[0] || p.first.q() != q {
                return Err(StrategyError::Malformed("first block has the wrong length"));
            }
            if p.next.len() != block_lengths.len() - 1 {
                return Err(StrategyError::Malformed("one transition table per feedback point is required"));
            }
            for (i, table) in p.next.iter().enumerate() {
                for (k, v) in table {
                    if k.len() != ends[i] || v.len() != block_lengths[i + 1] || k.q() != q || v.q() != q {
                        return Err(StrategyError::Malformed("transition entry has the wrong length"));
                    }
                }
            }
        }
        let mut table = vec![NONE; size as usize];
        for (w, m) in decoder {
            if w.len() != n || w.q() != q || m >= plans.len() {
                return Err(StrategyError::Malformed("decoder entry out of range"));
            }
            table[w.value() as usize] = m as u32;
        }
        Ok(FeedbackStrategy {
            graph,
            block_lengths,
            plans,
            decoder: table,
        })
    }

    /// Builds a strategy from an encoding rule by running every message
    /// through every single-error transcript. The decoder maps each
    /// received word to the message that produced it.
    pub fn tabulate(
        graph: ErrorGraph,
        block_lengths: Vec<usize>,
        messages: usize,
        encode: &dyn Fn(usize, &Word) -> Option<Word>,
    ) -> Result<Self, StrategyError> {
        let q = graph.q();
        let mut plans = Vec::with_capacity(messages);
        for m in 0..messages {
            let first = encode(m, &Word::empty(q)).ok_or(StrategyError::MissingTransition {
                message: m,
                prefix: Word::empty(q),
            })?;
            plans.push(MessagePlan {
                first,
                next: vec![BTreeMap::new(); block_lengths.len().saturating_sub(1)],
            });
        }
        let mut s = FeedbackStrategy::new(graph, block_lengths, plans, core::iter::empty())?;
        for m in 0..messages {
            let root = s.run(m, None, &mut |prefix| encode(m, prefix))?;
            let record = |s: &mut FeedbackStrategy, act: Option<(usize, u8)>| -> Result<(), StrategyError> {
                let mut fresh: Vec<(usize, Word, Word)> = Vec::new();
                let plans = &s.plans;
                let got = s.run_with(m, act, &mut |i, prefix| {
                    if let Some(b) = plans[m].next[i].get(prefix) {
                        return Some(*b);
                    }
                    let b = encode(m, prefix)?;
                    fresh.push((i, *prefix, b));
                    Some(b)
                })?;
                for (i, k, v) in fresh {
                    s.plans[m].next[i].insert(k, v);
                }
                let slot = &mut s.decoder[got.value() as usize];
                if *slot != NONE && *slot as usize != m {
                    return Err(StrategyError::Collision {
                        word: got,
                        first: *slot as usize,
                        second: m,
                    });
                }
                *slot = m as u32;
                Ok(())
            };
            record(&mut s, None)?;
            for pos in 0..root.len() {
                for &r in s.graph.clone().targets(root.symbol(pos)) {
                    record(&mut s, Some((pos, r)))?;
                }
            }
        }
        Ok(s)
    }

    pub fn graph(&self) -> &ErrorGraph {
        &self.graph
    }

    pub fn block_lengths(&self) -> &[usize] {
        &self.block_lengths
    }

    /// Total length `n`.
    pub fn n(&self) -> usize {
        self.block_lengths.iter().sum()
    }

    /// Number of feedback points.
    pub fn feedbacks(&self) -> usize {
        self.block_lengths.len() - 1
    }

    /// Number of messages `M`.
    pub fn len(&self) -> usize {
        self.plans.len()
    }

    pub fn is_empty(&self) -> bool {
        self.plans.is_empty()
    }

    pub fn plans(&self) -> &[MessagePlan] {
        &self.plans
    }

    pub fn decode(&self, received: &Word) -> Option<usize> {
        match self.decoder.get(received.value() as usize) {
            Some(&m) if m != NONE && received.len() == self.n() => Some(m as usize),
            _ => None,
        }
    }

    /// Assigned decoder entries in increasing word order.
    pub fn decoder_entries(&self) -> impl Iterator<Item = (Word, usize)> + '_ {
        let (n, q) = (self.n(), self.graph.q());
        self.decoder
            .iter()
            .enumerate()
            .filter(|(_, &m)| m != NONE)
            .map(move |(v, &m)| (Word::from_value(v as u64, n, q).expect("in space"), m as usize))
    }

    /// Block sent after receiving `prefix` (the first block for an empty prefix).
    pub fn next_block(&self, m: usize, prefix: &Word) -> Option<Word> {
        let plan = self.plans.get(m)?;
        if prefix.is_empty() {
            return Some(plan.first);
        }
        let mut end = 0;
        for (i, l) in self.block_lengths[..self.block_lengths.len() - 1].iter().enumerate() {
            end += l;
            if end == prefix.len() {
                return plan.next[i].get(prefix).copied();
            }
        }
        None
    }

    fn run_with(
        &self,
        m: usize,
        act: Option<(usize, u8)>,
        lookup: &mut dyn FnMut(usize, &Word) -> Option<Word>,
    ) -> Result<Word, StrategyError> {
        let q = self.graph.q();
        let mut received = Word::empty(q);
        for (i, _) in self.block_lengths.iter().enumerate() {
            let block = if i == 0 {
                self.plans[m].first
            } else {
                lookup(i - 1, &received).ok_or(StrategyError::MissingTransition { message: m, prefix: received })?
            };
            let start = received.len();
            let mut got = block;
            if let Some((pos, r)) = act {
                if pos >= start && pos < start + block.len() && self.graph.has_edge(block.symbol(pos - start), r) {
                    got = block.with_symbol(pos - start, r);
                }
            }
            received = received.concat(&got);
        }
        Ok(received)
    }

    fn run(
        &self,
        m: usize,
        act: Option<(usize, u8)>,
        encode: &mut dyn FnMut(&Word) -> Option<Word>,
    ) -> Result<Word, StrategyError> {
        self.run_with(m, act, &mut |_, p| encode(p))
    }

    /// Received word when message `m` is sent and the channel replaces the
    /// symbol at `act.0` by `act.1`. A replacement that is not an edge of the
    /// error graph for the symbol actually sent leaves the symbol intact.
    pub fn transmit(&self, m: usize, act: Option<(usize, u8)>) -> Result<Word, StrategyError> {
        self.run_with(m, act, &mut |i, p| self.plans[m].next[i].get(p).copied())
    }

    /// Received word with no error.
    pub fn root(&self, m: usize) -> Result<Word, StrategyError> {
        self.transmit(m, None)
    }

    /// Every word message `m` can produce with at most one error.
    pub fn cloud(&self, m: usize) -> Result<BTreeSet<Word>, StrategyError> {
        let root = self.root(m)?;
        let mut out = BTreeSet::new();
        out.insert(root);
        for pos in 0..root.len() {
            for &r in self.graph.targets(root.symbol(pos)) {
                out.insert(self.transmit(m, Some((pos, r)))?);
            }
        }
        Ok(out)
    }
}

/// One code `C(u)` of length `n2` per first block `u` of length `n1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CodeFamily {
    n1: usize,
    n2: usize,
    graph: ErrorGraph,
    codes: Vec<NonadaptiveCode>,
}

/// Load on one vertex: messages that may arrive there by an error in the
/// first block, against the free points of its code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexLoad {
    pub vertex: Word,
    pub required: u64,
    pub available: u64,
}

impl CodeFamily {
    pub fn new(n1: usize, n2: usize, graph: ErrorGraph, codes: Vec<NonadaptiveCode>) -> Result<Self, StrategyError> {
        let q = graph.q();
        let count = space_size(q, n1).ok_or(ChannelError::SpaceTooLarge { q, len: n1 })?;
        if codes.len() as u64 != count {
            return Err(StrategyError::Malformed("a family needs one code per first block"));
        }
        if codes.iter().any(|c| c.n() != n2 || c.graph() != &graph || c.t() != 1) {
            return Err(StrategyError::Malformed("family codes must share length, channel and t = 1"));
        }
        Ok(CodeFamily { n1, n2, graph, codes })
    }

    pub fn from_fn(
        n1: usize,
        n2: usize,
        graph: ErrorGraph,
        mut code_for: impl FnMut(&Word) -> NonadaptiveCode,
    ) -> Result<Self, StrategyError> {
        let q = graph.q();
        let count = space_size(q, n1).ok_or(ChannelError::SpaceTooLarge { q, len: n1 })?;
        let codes = (0..count)
            .map(|v| code_for(&Word::from_value(v, n1, q).expect("in space")))
            .collect();
        CodeFamily::new(n1, n2, graph, codes)
    }

    pub fn n1(&self) -> usize {
        self.n1
    }

    pub fn n2(&self) -> usize {
        self.n2
    }

    pub fn graph(&self) -> &ErrorGraph {
        &self.graph
    }

    pub fn codes(&self) -> &[NonadaptiveCode] {
        &self.codes
    }

    pub fn code(&self, u: &Word) -> &NonadaptiveCode {
        &self.codes[u.value() as usize]
    }

    fn vertex(&self, v: usize) -> Word {
        Word::from_value(v as u64, self.n1, self.graph.q()).expect("in space")
    }

    pub fn message_count(&self) -> u64 {
        self.codes.iter().map(|c| c.len() as u64).sum()
    }

    /// First blocks `u != v` that one error can turn into `v`, increasing.
    pub fn predecessors(&self, v: &Word) -> Vec<Word> {
        (0..self.codes.len())
            .map(|u| self.vertex(u))
            .filter(|u| single_error_neighbors(u, &self.graph).contains(v))
            .collect()
    }

    fn predecessor_lists(&self) -> Vec<Vec<usize>> {
        let mut preds = vec![Vec::new(); self.codes.len()];
        for u in 0..self.codes.len() {
            for v in single_error_neighbors(&self.vertex(u), &self.graph) {
                preds[v.value() as usize].push(u);
            }
        }
        preds
    }

    /// Per-vertex loads, in vertex order.
    pub fn loads(&self) -> Result<Vec<VertexLoad>, StrategyError> {
        let preds = self.predecessor_lists();
        let mut out = Vec::with_capacity(self.codes.len());
        for (v, p) in preds.iter().enumerate() {
            out.push(VertexLoad {
                vertex: self.vertex(v),
                required: p.iter().map(|&u| self.codes[u].len() as u64).sum(),
                available: self.codes[v].free_count()?,
            });
        }
        Ok(out)
    }

    /// Vertices whose load exceeds their free points.
    pub fn violations(&self) -> Result<Vec<VertexLoad>, StrategyError> {
        Ok(self.loads()?.into_iter().filter(|l| l.required > l.available).collect())
    }
}

/// Assembles the one-feedback strategy of a code family: send `u`, then a
/// codeword of `C(u)` if `u` arrived intact, otherwise a free point of the
/// received vertex's code reserved for this message.
pub fn assemble_one_feedback(family: &CodeFamily) -> Result<FeedbackStrategy, StrategyError> {
    let graph = family.graph.clone();
    let q = graph.q();
    let (n1, n2) = (family.n1, family.n2);
    if n1 == 0 {
        let code = &family.codes[0];
        let lookup = code.cloud_lookup()?;
        let plans = code
            .centers()
            .iter()
            .map(|&c| MessagePlan {
                first: c,
                next: Vec::new(),
            })
            .collect();
        let size = code.space_size();
        let entries = (0..size).filter_map(|v| {
            let w = Word::from_value(v, n2, q).expect("in space");
            lookup.owner(&w).map(|m| (w, m))
        });
        return FeedbackStrategy::new(graph, vec![n2], plans, entries);
    }

    let vertices = family.codes.len();
    let lookups: Vec<CloudLookup> = family
        .codes
        .iter()
        .map(|c| c.cloud_lookup())
        .collect::<Result<_, _>>()?;
    let mut offset = Vec::with_capacity(vertices + 1);
    offset.push(0usize);
    for c in &family.codes {
        offset.push(offset.last().unwrap() + c.len());
    }
    let preds = family.predecessor_lists();

    // reserved[v]: free point value -> message; reserve_of[(message, v)] -> free point
    let mut reserved: Vec<BTreeMap<u64, usize>> = vec![BTreeMap::new(); vertices];
    let mut reserve_of: BTreeMap<(usize, usize), Word> = BTreeMap::new();
    for v in 0..vertices {
        let free = lookups[v].free_points();
        let required: usize = preds[v].iter().map(|&u| family.codes[u].len()).sum();
        if required > free.len() {
            return Err(StrategyError::ConstraintViolation {
                vertex: family.vertex(v),
                required: required as u64,
                available: free.len() as u64,
            });
        }
        let mut k = 0;
        for &u in &preds[v] {
            for j in 0..family.codes[u].len() {
                let msg = offset[u] + j;
                reserved[v].insert(free[k].value(), msg);
                reserve_of.insert((msg, v), free[k]);
                k += 1;
            }
        }
    }

    let mut plans = Vec::with_capacity(offset[vertices]);
    for u in 0..vertices {
        let uw = family.vertex(u);
        let neighbours = single_error_neighbors(&uw, &graph);
        for (j, &c) in family.codes[u].centers().iter().enumerate() {
            let msg = offset[u] + j;
            let mut table = BTreeMap::new();
            table.insert(uw, c);
            for v in &neighbours {
                table.insert(*v, reserve_of[&(msg, v.value() as usize)]);
            }
            plans.push(MessagePlan {
                first: uw,
                next: vec![table],
            });
        }
    }

    let tail = checked_pow(u64::from(q), n2).expect("checked by code");
    let mut entries = Vec::new();
    for v in 0..vertices {
        let vw = family.vertex(v);
        for b in 0..tail {
            let bw = Word::from_value(b, n2, q).expect("in space");
            let msg = match lookups[v].owner(&bw) {
                Some(j) => Some(offset[v] + j),
                None => reserved[v].get(&b).copied(),
            };
            if let Some(m) = msg {
                entries.push((vw.concat(&bw), m));
            }
        }
    }
    FeedbackStrategy::new(graph, vec![n1, n2], plans, entries)
}

/// Message count `2^{n1} floor(2^{n2} / (n + 1))` for `n2 = 2^k - 1 <= n`.
pub fn corollary1_count(n: usize, k: usize) -> Option<u64> {
    let n2 = (1usize << k).checked_sub(1)?;
    if k == 0 || n2 > n || n >= 63 {
        return None;
    }
    let n1 = n - n2;
    Some((1u64 << n1) * ((1u64 << n2) / (n as u64 + 1)))
}

/// Best Hamming parameter for [`corollary1_count`]; ties go to the smaller `k`.
pub fn corollary1_best(n: usize) -> Option<(usize, u64)> {
    let mut best: Option<(usize, u64)> = None;
    for k in 1..=6 {
        if let Some(c) = corollary1_count(n, k) {
            if best.is_none_or(|b| c > b.1) {
                best = Some((k, c));
            }
        }
    }
    best
}

/// Family with the same Hamming code, minus its last `x` codewords, at every vertex.
pub fn corollary1_family(n: usize, k: usize) -> Result<CodeFamily, StrategyError> {
    corollary1_count(n, k).ok_or(StrategyError::Unsupported("Hamming length exceeds n"))?;
    let n2 = (1 << k) - 1;
    let n1 = n - n2;
    let h = hamming_code(k)?;
    let size = 1u64 << (n2 - k);
    let x = (n1 as u64 * size).div_ceil(n1 as u64 + (1 << k));
    let keep: Vec<Word> = h.centers()[..(size - x) as usize].to_vec();
    let code = NonadaptiveCode::new(n2, 1, ErrorGraph::bsc(), keep)?;
    CodeFamily::from_fn(n1, n2, ErrorGraph::bsc(), |_| code.clone())
}

pub fn corollary1_strategy(n: usize, k: usize) -> Result<FeedbackStrategy, StrategyError> {
    assemble_one_feedback(&corollary1_family(n, k)?)
}

/// Per-weight cardinalities for a family whose codes depend on the weight
/// of the first block only.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightPlan {
    pub n1: usize,
    pub n2: usize,
    /// `counts[w]` is the code size at vertices of weight `w`.
    pub counts: Vec<u64>,
    pub total: u64,
}

/// Largest weight-class family over a binary symmetric channel when every
/// code is a subset of one code with `capacity` words: a vertex of weight
/// `w` has `w` predecessors of weight `w-1` and `n1-w` of weight `w+1`.
pub fn bsc_weight_plan(n1: usize, n2: usize, capacity: u64) -> WeightPlan {
    let space = 1i64 << n2;
    let per = n2 as i64 + 1;
    let cap = capacity.min((space / per) as u64) as usize;
    let states = cap + 1;
    let idx = |a: usize, b: usize| a * states + b;
    let c = |w: usize| binomial(n1 as u64, w as u64) as i64;
    let fits = |w: usize, a: usize, b: usize, next: usize| {
        per * b as i64 + w as i64 * a as i64 + (n1 - w) as i64 * next as i64 <= space
    };
    // value[(a, b)] with a = M_{w-1}, b = M_w, for the current w
    let mut value = vec![i64::MIN; states * states];
    let mut back: Vec<Vec<usize>> = Vec::with_capacity(n1 + 1);
    for b in 0..states {
        value[idx(0, b)] = b as i64;
    }
    back.push(vec![usize::MAX; states * states]);
    for w in 0..n1 {
        let mut nv = vec![i64::MIN; states * states];
        let mut nb = vec![usize::MAX; states * states];
        for a in 0..states {
            for b in 0..states {
                let v = value[idx(a, b)];
                if v == i64::MIN {
                    continue;
                }
                for next in 0..states {
                    if !fits(w, a, b, next) {
                        break;
                    }
                    let cand = v + c(w + 1) * next as i64;
                    if cand > nv[idx(b, next)] {
                        nv[idx(b, next)] = cand;
                        nb[idx(b, next)] = a;
                    }
                }
            }
        }
        value = nv;
        back.push(nb);
    }
    let mut best = (i64::MIN, 0, 0);
    for a in 0..states {
        for b in 0..states {
            let v = value[idx(a, b)];
            if v > best.0 && fits(n1, a, b, 0) {
                best = (v, a, b);
            }
        }
    }
    let mut counts = vec![0u64; n1 + 1];
    let (mut a, mut b) = (best.1, best.2);
    for w in (0..=n1).rev() {
        counts[w] = b as u64;
        if w > 0 {
            let prev = back[w][idx(a, b)];
            b = a;
            a = prev;
        }
    }
    WeightPlan {
        n1,
        n2,
        counts,
        total: best.0.max(0) as u64,
    }
}

/// Family where a vertex of weight `w` gets the first `counts[w]` words of `base`.
pub fn weight_family(plan: &WeightPlan, graph: ErrorGraph, codes: &dyn Fn(u64) -> NonadaptiveCode) -> Result<CodeFamily, StrategyError> {
    let by_weight: Vec<NonadaptiveCode> = plan.counts.iter().map(|&m| codes(m)).collect();
    CodeFamily::from_fn(plan.n1, plan.n2, graph, |u| by_weight[u.weight()].clone())
}

/// Prefix of `code` with `m` codewords.
pub fn truncate_code(code: &NonadaptiveCode, m: u64) -> NonadaptiveCode {
    NonadaptiveCode::new(code.n(), code.t(), code.graph().clone(), code.centers()[..m as usize].to_vec())
        .expect("prefix of a valid code")
}

/// Maximum BSC codes by length, found once and reused.
#[derive(Clone, Debug)]
pub struct BscCodeBook {
    node_limit: u64,
    codes: BTreeMap<usize, BscCode>,
}

impl BscCodeBook {
    pub fn new(node_limit: u64) -> Self {
        BscCodeBook {
            node_limit,
            codes: BTreeMap::new(),
        }
    }

    pub fn get(&mut self, n: usize) -> Result<&BscCode, StrategyError> {
        if !self.codes.contains_key(&n) {
            let c = bsc_max_code(n, self.node_limit)?;
            self.codes.insert(n, c);
        }
        Ok(&self.codes[&n])
    }

    /// Inserts a known code, replacing a smaller one.
    pub fn offer(&mut self, code: NonadaptiveCode) {
        let n = code.n();
        if self.codes.get(&n).is_none_or(|c| c.code.len() < code.len()) {
            self.codes.insert(n, BscCode { code, proven: false });
        }
    }
}

impl Default for BscCodeBook {
    fn default() -> Self {
        BscCodeBook::new(2_000_000)
    }
}

/// Longest second block considered by the weight-class family search.
pub const WEIGHT_FAMILY_MAX_N2: usize = 10;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OneFeedbackConstruction {
    Corollary1 { k: usize },
    WeightFamily(WeightPlan),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OneFeedbackChoice {
    pub construction: OneFeedbackConstruction,
    pub count: u64,
}

/// Best of the Hamming-code construction and the weight-class families
/// for a binary symmetric channel with one feedback.
pub fn best_one_feedback_bsc_plan(n: usize, book: &mut BscCodeBook) -> Result<OneFeedbackChoice, StrategyError> {
    let mut best = corollary1_best(n).map(|(k, c)| OneFeedbackChoice {
        construction: OneFeedbackConstruction::Corollary1 { k },
        count: c,
    });
    for n2 in 1..=n.saturating_sub(1).min(WEIGHT_FAMILY_MAX_N2) {
        let cap = book.get(n2)?.code.len() as u64;
        let plan = bsc_weight_plan(n - n2, n2, cap);
        if best.as_ref().is_none_or(|b| plan.total > b.count) {
            best = Some(OneFeedbackChoice {
                count: plan.total,
                construction: OneFeedbackConstruction::WeightFamily(plan),
            });
        }
    }
    best.ok_or(StrategyError::Unsupported("length too short"))
}

pub fn build_one_feedback_bsc(choice: &OneFeedbackChoice, book: &mut BscCodeBook) -> Result<FeedbackStrategy, StrategyError> {
    match &choice.construction {
        OneFeedbackConstruction::Corollary1 { k } => {
            let n = match corollary1_count_n(choice.count, *k) {
                Some(n) => n,
                None => return Err(StrategyError::Malformed("inconsistent choice")),
            };
            corollary1_strategy(n, *k)
        }
        OneFeedbackConstruction::WeightFamily(plan) => {
            let base = book.get(plan.n2)?.code.clone();
            let fam = weight_family(plan, ErrorGraph::bsc(), &|m| truncate_code(&base, m))?;
            assemble_one_feedback(&fam)
        }
    }
}

fn corollary1_count_n(count: u64, k: usize) -> Option<usize> {
    (1..63).find(|&n| corollary1_count(n, k) == Some(count))
}

/// Best one-feedback BSC strategy of length `n`.
pub fn best_one_feedback_bsc(n: usize, book: &mut BscCodeBook) -> Result<FeedbackStrategy, StrategyError> {
    let choice = best_one_feedback_bsc_plan(n, book)?;
    match choice.construction {
        OneFeedbackConstruction::Corollary1 { k } => corollary1_strategy(n, k),
        _ => build_one_feedback_bsc(&choice, book),
    }
}

/// Weight-class assignment for a Z-channel family (a vertex of weight `w`
/// is reached by error from its `n1 - w` covers of weight `w + 1`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Corollary2Plan {
    pub n1: usize,
    pub n2: usize,
    pub counts: Vec<u64>,
    /// Free points available at each weight.
    pub free: Vec<i64>,
    pub total: u64,
}

/// Free points usable with `m` codewords: the best entry with at least `m`
/// words (a subset of a code has at least its free points); zero words
/// leave the whole space free.
fn effective_free(n2: usize, table: &[(u64, i64)], m: u64) -> Option<i64> {
    if m == 0 {
        return Some(1i64 << n2);
    }
    table.iter().filter(|e| e.0 >= m).map(|e| e.1).max()
}

/// Maximises `Σ C(n1, w) M_w` subject to `(n1 - w) M_{w+1} <= F(M_w)`.
pub fn corollary2_optimize(n1: usize, n2: usize, table: &[(u64, i64)]) -> Result<Corollary2Plan, StrategyError> {
    let top = table.iter().map(|e| e.0).max().ok_or(StrategyError::EmptyTable)?;
    let options: Vec<u64> = (0..=top).collect();
    let free: Vec<i64> = options.iter().map(|&m| effective_free(n2, table, m).expect("m <= top")).collect();
    // best[w][m]: largest Σ_{w' >= w} C(n1, w') M_{w'} with M_w = m
    let mut best = vec![vec![0i64; options.len()]; n1 + 1];
    let mut choice = vec![vec![0usize; options.len()]; n1 + 1];
    for (i, &m) in options.iter().enumerate() {
        best[n1][i] = m as i64;
    }
    for w in (0..n1).rev() {
        let c = binomial(n1 as u64, w as u64) as i64;
        for (i, &m) in options.iter().enumerate() {
            let room = free[i];
            let mut top = (i64::MIN, 0);
            for (j, &next) in options.iter().enumerate() {
                if (n1 - w) as i64 * next as i64 <= room && best[w + 1][j] >= top.0 {
                    top = (best[w + 1][j], j);
                }
            }
            best[w][i] = c * m as i64 + top.0;
            choice[w][i] = top.1;
        }
    }
    let (mut i, total) = best[0]
        .iter()
        .enumerate()
        .fold((0, i64::MIN), |acc, (i, &v)| if v >= acc.1 { (i, v) } else { acc });
    let mut counts = Vec::with_capacity(n1 + 1);
    let mut frees = Vec::with_capacity(n1 + 1);
    for w in 0..=n1 {
        counts.push(options[i]);
        frees.push(free[i]);
        if w < n1 {
            i = choice[w][i];
        }
    }
    Ok(Corollary2Plan {
        n1,
        n2,
        counts,
        free: frees,
        total: total as u64,
    })
}

/// Best split for length `n` given free-point tables per second-block length.
pub fn corollary2_best(n: usize, tables: &dyn Fn(usize) -> Option<Vec<(u64, i64)>>) -> Option<Corollary2Plan> {
    let mut best: Option<Corollary2Plan> = None;
    for n2 in 1..n {
        let Some(table) = tables(n2) else { continue };
        let Ok(plan) = corollary2_optimize(n - n2, n2, &table) else { continue };
        if best.as_ref().is_none_or(|b| plan.total > b.total) {
            best = Some(plan);
        }
    }
    best
}

/// Z-channel family realising a plan; `codes(m)` must return a code with
/// `m` words and at least the plan's free points.
pub fn corollary2_family(plan: &Corollary2Plan, codes: &dyn Fn(u64) -> NonadaptiveCode) -> Result<CodeFamily, StrategyError> {
    let wp = WeightPlan {
        n1: plan.n1,
        n2: plan.n2,
        counts: plan.counts.clone(),
        total: plan.total,
    };
    weight_family(&wp, ErrorGraph::z_channel(), codes)
}

fn z_code(n: usize, words: &[&str]) -> NonadaptiveCode {
    let centers = words.iter().map(|s| Word::parse(s, 2).expect("binary literal")).collect();
    NonadaptiveCode::new(n, 1, ErrorGraph::z_channel(), centers).expect("valid code")
}

/// Length-8 Z-channel family with 53 messages: `{00, 11}` at `111111`, the
/// empty code at twelve vertices and `{00}` elsewhere.
pub fn example_family_8() -> CodeFamily {
    const EMPTY: [&str; 12] = [
        "111000", "001110", "010101", "100011", "100100", "010010", "001001", "110000", "010100", "001000", "000010",
        "000001",
    ];
    sparse_family(6, &EMPTY, "111111")
}

/// Length-9 Z-channel family with 97 messages, same shape with `n1 = 7`.
pub fn example_family_9() -> CodeFamily {
    const EMPTY: [&str; 32] = [
        "0000011", "0000100", "0000111", "0001000", "0001010", "0001011", "0010000", "0010001", "0010010", "0010101",
        "0011100", "0011110", "0100001", "0100100", "0100110", "0101001", "0101101", "0110000", "0110011", "0111000",
        "1000000", "1000100", "1000111", "1001000", "1001100", "1010001", "1010010", "1011001", "1100001", "1100010",
        "1101010", "1110100",
    ];
    sparse_family(7, &EMPTY, "1111111")
}

fn sparse_family(n1: usize, empty: &[&str], double: &str) -> CodeFamily {
    let empty: BTreeSet<Word> = empty.iter().map(|s| Word::parse(s, 2).expect("binary literal")).collect();
    let double = Word::parse(double, 2).expect("binary literal");
    CodeFamily::from_fn(n1, 2, ErrorGraph::z_channel(), |u| {
        if *u == double {
            z_code(2, &["00", "11"])
        } else if empty.contains(u) {
            z_code(2, &[])
        } else {
            z_code(2, &["00"])
        }
    })
    .expect("valid family")
}

/// Weight-class configuration of length 9 with 96 messages: codes
/// `{0000, 0011}`, `{0000, 0011, 1100}` and `{0000, 0011, 1100, 1111}`.
pub fn example_weight_family_9() -> CodeFamily {
    let codes = [
        z_code(4, &["0000", "0011"]),
        z_code(4, &["0000", "0011", "1100"]),
        z_code(4, &["0000", "0011", "1100", "1111"]),
    ];
    CodeFamily::from_fn(5, 4, ErrorGraph::z_channel(), |u| codes[u.weight() / 2].clone()).expect("valid family")
}

/// Length-11 Z-channel family with 329 messages. Vertex `v` (first block
/// of length 7, read as a binary number) gets the first `m` words of
/// `0000, 0011, 1100, 1111`, with `m` the `v`-th digit below.
pub fn example_family_11() -> CodeFamily {
    const COUNTS: &str = "31132223133122231331222322233333133122232223333322233333333303342113233032232333322323331333333422232333233333342333333433343444";
    const NESTED: [&str; 4] = ["0000", "0011", "1100", "1111"];
    CodeFamily::from_fn(7, 4, ErrorGraph::z_channel(), |u| {
        let m = usize::from(COUNTS.as_bytes()[u.value() as usize] - b'0');
        z_code(4, &NESTED[..m])
    })
    .expect("valid family")
}

/// `U(n) = 2 floor(2^n / (2(n+1)))`.
pub fn u_even(n: usize) -> u128 {
    assert!(n < 127);
    2 * ((1u128 << n) / (2 * (n as u128 + 1)))
}

/// `r(n) = 2^n - (n+1) U(n)`, which is `2^n mod 2(n+1)`.
pub fn r_rem(n: usize) -> u128 {
    pow2_mod(n, 2 * (n as u128 + 1))
}

fn pow2_mod(n: usize, m: u128) -> u128 {
    let mut acc = 1 % m;
    let mut base = 2 % m;
    let mut e = n;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        e >>= 1;
    }
    acc
}

/// Whether the complete-feedback optimum is `U(n) + 1` rather than `U(n)`.
pub fn m_ad_is_odd_case(n: usize) -> bool {
    r_rem(n) >= 2 * n as u128
}

/// Optimal message count with complete feedback over a binary symmetric
/// channel with one error.
pub fn m_ad(n: usize) -> u128 {
    u_even(n) + u128::from(m_ad_is_odd_case(n))
}

/// Messages after one double-and-delete step from `m_prev` messages at length `n - 1`.
pub fn theorem2_count(m_prev: u128, n: usize) -> u128 {
    if 2 * m_prev * (n as u128 + 1) <= 1u128 << n {
        2 * m_prev
    } else {
        m_ad(n)
    }
}

/// Lifts a binary symmetric strategy of length `n - 1` to length `n` with
/// one more feedback point, placed after the first symbol.
///
/// Every inner cloud is copied behind a leading 0 and a leading 1. A copy
/// behind `b` is completed by one word starting with `1 - b`, which the
/// message sends (as its fallback) when the first symbol arrives flipped.
/// Copies with the smallest roots are dropped, one per half, until the
/// fallbacks fit; a last dropped copy is restored when room allows.
pub fn dada_lift(inner: &FeedbackStrategy) -> Result<FeedbackStrategy, StrategyError> {
    if !inner.graph().is_bsc() {
        return Err(StrategyError::Unsupported("the double-and-delete lift needs a binary symmetric channel"));
    }
    let len = inner.n();
    let half = 1usize << len;
    let mut order: Vec<(Word, usize, BTreeSet<Word>)> = (0..inner.len())
        .map(|m| Ok((inner.root(m)?, m, inner.cloud(m)?)))
        .collect::<Result<_, StrategyError>>()?;
    order.sort_by_key(|e| e.0);
    let total = order.len();

    // words used on half `b` by kept clouds there plus fallbacks of the other half
    let fits = |k0: usize, k1: usize| {
        let used = |keep: usize, other: usize| -> usize {
            order[total - keep..].iter().map(|e| e.2.len()).sum::<usize>() + other
        };
        used(k0, k1) <= half && used(k1, k0) <= half
    };
    let mut k = total;
    while k > 0 && !fits(k, k) {
        k -= 1;
    }
    let (k0, k1) = if k < total && fits(k + 1, k) { (k + 1, k) } else { (k, k) };

    let kept = |keep: usize| -> &[(Word, usize, BTreeSet<Word>)] { &order[total - keep..] };
    let free_on = |keep: usize| -> Vec<Word> {
        let mut taken = vec![false; half];
        for e in kept(keep) {
            for w in &e.2 {
                taken[w.value() as usize] = true;
            }
        }
        (0..half)
            .filter(|&v| !taken[v])
            .map(|v| Word::binary(v as u64, len))
            .collect()
    };
    // lifted messages: half 0 then half 1, each by increasing root
    let mut lifted: Vec<(u8, usize, Word)> = Vec::with_capacity(k0 + k1);
    let free1 = free_on(k1);
    let free0 = free_on(k0);
    for (i, e) in kept(k0).iter().enumerate() {
        lifted.push((0, e.1, free1[i]));
    }
    for (i, e) in kept(k1).iter().enumerate() {
        lifted.push((1, e.1, free0[i]));
    }

    let mut block_lengths = vec![1];
    block_lengths.extend_from_slice(inner.block_lengths());
    let encode = |m: usize, prefix: &Word| -> Option<Word> {
        let (b, im, fallback) = lifted[m];
        if prefix.is_empty() {
            return Some(Word::binary(u64::from(b), 1));
        }
        let rest = prefix.suffix(1);
        if prefix.symbol(0) == b {
            inner.next_block(im, &rest)
        } else {
            let start = rest.len();
            let end = inner_block_end(inner, start)?;
            Some(fallback.slice(start, end))
        }
    };
    FeedbackStrategy::tabulate(ErrorGraph::bsc(), block_lengths, lifted.len(), &encode)
}

fn inner_block_end(inner: &FeedbackStrategy, start: usize) -> Option<usize> {
    let mut end = 0;
    for l in inner.block_lengths() {
        if end == start {
            return Some(end + l);
        }
        end += l;
    }
    None
}

/// One message over a single binary channel use.
pub fn trivial_strategy() -> FeedbackStrategy {
    let zero = Word::binary(0, 1);
    FeedbackStrategy::new(
        ErrorGraph::bsc(),
        vec![1],
        vec![MessagePlan {
            first: zero,
            next: Vec::new(),
        }],
        [(zero, 0), (Word::binary(1, 1), 0)],
    )
    .expect("valid strategy")
}

/// Complete-feedback strategy of length `n` obtained by repeated lifting
/// from a single channel use.
pub fn build_complete_feedback(n: usize) -> Result<FeedbackStrategy, StrategyError> {
    if n == 0 {
        return Err(StrategyError::Unsupported("length must be positive"));
    }
    let mut s = trivial_strategy();
    for _ in 1..n {
        s = dada_lift(&s)?;
    }
    Ok(s)
}

/// Strategy with at most two feedbacks reaching the complete-feedback optimum:
/// the best one-feedback strategy for `n <= 9`, a lift of the best
/// one-feedback strategy of length `n - 1` beyond.
pub fn build_two_feedback(n: usize, book: &mut BscCodeBook) -> Result<FeedbackStrategy, StrategyError> {
    if n < 3 {
        return Err(StrategyError::Unsupported("two-feedback construction needs n >= 3"));
    }
    if n <= 9 {
        return best_one_feedback_bsc(n, book);
    }
    dada_lift(&best_one_feedback_bsc(n - 1, book)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn bsc_code(n: usize, values: &[u64]) -> NonadaptiveCode {
        NonadaptiveCode::binary(n, 1, ErrorGraph::bsc(), values.iter().copied()).unwrap()
    }

    #[test]
    fn identical_codes_on_length_three_fail() {
        let fam = CodeFamily::from_fn(2, 1, ErrorGraph::bsc(), |_| bsc_code(1, &[0])).unwrap();
        assert!(matches!(assemble_one_feedback(&fam), Err(StrategyError::ConstraintViolation { .. })));
        // two different codes: one message behind 00, one behind 11
        let fam = CodeFamily::from_fn(2, 1, ErrorGraph::bsc(), |u| match u.value() {
            0 | 3 => bsc_code(1, &[0]),
            _ => bsc_code(1, &[]),
        })
        .unwrap();
        let s = assemble_one_feedback(&fam).unwrap();
        assert_eq!(s.len(), 2);
    }

    #[test]
    fn example_eight_loads() {
        let fam = example_family_8();
        assert_eq!(fam.message_count(), 53);
        assert!(fam.violations().unwrap().is_empty());
        let v = Word::parse("101000", 2).unwrap();
        let preds = fam.predecessors(&v);
        let names: Vec<alloc::string::String> = preds.iter().map(|w| alloc::format!("{w}")).collect();
        assert_eq!(names, ["101001", "101010", "101100", "111000"]);
        let load = fam.loads().unwrap().into_iter().find(|l| l.vertex == v).unwrap();
        assert_eq!((load.required, load.available), (3, 3));
    }

    #[test]
    fn example_nine_families() {
        assert_eq!(example_family_9().message_count(), 97);
        assert!(example_family_9().violations().unwrap().is_empty());
        let w = example_weight_family_9();
        assert_eq!(w.message_count(), 96);
        assert!(w.violations().unwrap().is_empty());
        let f = example_family_11();
        assert_eq!(f.message_count(), 329);
        assert!(f.violations().unwrap().is_empty());
    }

    #[test]
    fn corollary1_counts() {
        assert_eq!(corollary1_count(8, 3), Some(28));
        assert_eq!(corollary1_count(15, 3), Some(2048));
        assert_eq!(corollary1_count(16, 4), Some(3854));
        assert_eq!(corollary1_count(3, 3), None);
        assert_eq!(corollary1_best(3), Some((2, 2)));
        assert_eq!(corollary1_best(10), Some((3, 88)));
    }

    #[test]
    fn corollary1_strategy_matches_count() {
        for (n, k) in [(4, 2), (5, 2), (8, 3), (9, 3)] {
            let s = corollary1_strategy(n, k).unwrap();
            assert_eq!(s.len() as u64, corollary1_count(n, k).unwrap());
            assert_eq!(s.block_lengths(), &[n - ((1 << k) - 1), (1 << k) - 1]);
        }
    }

    #[test]
    fn weight_plan_small() {
        // length 9 from a length-7 Hamming code
        let p = bsc_weight_plan(2, 7, 16);
        assert_eq!(p.total, 50);
        assert_eq!(p.counts.iter().zip([1, 2, 1]).map(|(m, c)| m * c).sum::<u64>(), 50);
        assert_eq!(bsc_weight_plan(3, 7, 16).total, 90);
        assert_eq!(bsc_weight_plan(4, 7, 16).total, 168);
    }

    #[test]
    fn corollary2_example() {
        let plan = corollary2_optimize(5, 4, &[(2, 12), (3, 9), (4, 4)]).unwrap();
        assert_eq!(plan.total, 96);
        for w in 0..5 {
            assert!((5 - w) as i64 * plan.counts[w + 1] as i64 <= plan.free[w]);
        }
        assert!(matches!(corollary2_optimize(5, 4, &[]), Err(StrategyError::EmptyTable)));
    }

    #[test]
    fn closed_forms() {
        let want = [2u128, 2, 4, 8, 16, 28, 50, 92, 170, 314, 584, 1092, 2048, 3854];
        let got: Vec<u128> = (3..=16).map(m_ad).collect();
        assert_eq!(got, want);
        assert_eq!(m_ad(1), 1);
        assert_eq!(m_ad(2), 1);
        assert!(m_ad_is_odd_case(49736));
        assert!((3..49736).all(|n| !m_ad_is_odd_case(n)));
        assert_eq!(theorem2_count(1, 5), 2);
        assert_eq!(theorem2_count(50, 10), 92);
        assert_eq!(theorem2_count(1088, 15), 2048);
        assert_eq!(theorem2_count(0, 7), 0);
    }

    #[test]
    fn lift_counts_follow_closed_form() {
        let s = build_complete_feedback(8).unwrap();
        assert_eq!(s.len(), 28);
        let inner = corollary1_strategy(8, 3).unwrap();
        let lifted = dada_lift(&inner).unwrap();
        assert_eq!(lifted.len() as u128, theorem2_count(28, 9));
        assert_eq!(lifted.block_lengths(), &[1, 1, 7]);
    }

    #[test]
    fn clouds_are_disjoint_and_decoded() {
        let s = corollary1_strategy(5, 2).unwrap();
        let mut seen = BTreeSet::new();
        for m in 0..s.len() {
            for w in s.cloud(m).unwrap() {
                assert!(seen.insert(w));
                assert_eq!(s.decode(&w), Some(m));
            }
        }
    }

    proptest! {
        #[test]
        fn m_ad_below_hamming_bound(n in 1usize..=30) {
            prop_assert!(m_ad(n) <= (1u128 << n) / (n as u128 + 1));
            if !m_ad_is_odd_case(n) {
                prop_assert_eq!(m_ad(n) % 2, 0);
            }
        }

        #[test]
        fn theorem2_never_exceeds_optimum(m in 0u128..5000, n in 3usize..20) {
            prop_assert!(theorem2_count(m, n) <= m_ad(n).max(2 * m));
        }
    }
}
