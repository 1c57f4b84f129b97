//! Builders shared by `build`, `export` and the table reproductions.

use fbcode_core::search::bsc_max_code;
use fbcode_core::strategy::{
    assemble_one_feedback, best_one_feedback_bsc, build_complete_feedback, build_two_feedback, corollary1_strategy,
    corollary2_best, corollary2_family, example_family_11, example_family_8, example_family_9, BscCodeBook,
    CodeFamily, Corollary2Plan, StrategyError,
};
use fbcode_core::{ErrorGraph, FeedbackStrategy, NonadaptiveCode};

use crate::cache::{FoptCache, EXHAUSTIVE_LENGTHS};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Channel {
    Bsc,
    Z,
}

#[derive(Debug, thiserror::Error)]
pub enum BuildError {
    #[error(transparent)]
    Strategy(#[from] StrategyError),
    #[error("{0}")]
    Unsupported(String),
    #[error("no code-family table available for length {0}")]
    NoTable(usize),
}

/// Free-point tables for second blocks, from exhaustively searched lengths only.
pub fn z_tables(cache: &FoptCache) -> impl Fn(usize) -> Option<Vec<(u64, i64)>> + '_ {
    move |n2| (EXHAUSTIVE_LENGTHS.contains(&n2) && !cache.length(n2).is_empty()).then(|| cache.f_table(n2))
}

pub fn corollary2_plan(cache: &FoptCache, n: usize) -> Option<Corollary2Plan> {
    corollary2_best(n, &z_tables(cache))
}

/// A code with `m` words and the free points the plan assumed: a prefix of
/// the cached code with at least `m` words and the most free points.
pub fn cached_subcode(cache: &FoptCache, n2: usize, m: u64) -> NonadaptiveCode {
    if m == 0 {
        return NonadaptiveCode::empty(n2, 1, ErrorGraph::z_channel()).expect("valid length");
    }
    let best = cache
        .length(n2)
        .into_iter()
        .filter(|e| e.m >= m)
        .max_by_key(|e| (e.free_points, std::cmp::Reverse(e.m)))
        .expect("plan only uses cached cardinalities");
    NonadaptiveCode::new(n2, 1, ErrorGraph::z_channel(), best.centers[..m as usize].to_vec()).expect("subcode")
}

pub fn corollary2_family_from_cache(cache: &FoptCache, plan: &Corollary2Plan) -> Result<CodeFamily, StrategyError> {
    corollary2_family(plan, &|m| cached_subcode(cache, plan.n2, m))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ZFamilySource {
    Corollary2,
    /// A stored family with more messages than any weight-class one.
    Stored,
}

/// Largest one-feedback Z-channel family available for length `n`.
pub fn best_z_family(cache: &FoptCache, n: usize) -> Result<(ZFamilySource, CodeFamily), BuildError> {
    let stored = match n {
        8 => Some(example_family_8()),
        9 => Some(example_family_9()),
        11 => Some(example_family_11()),
        _ => None,
    };
    let weight = corollary2_plan(cache, n)
        .map(|p| corollary2_family_from_cache(cache, &p))
        .transpose()?;
    match (weight, stored) {
        (Some(w), Some(s)) if s.message_count() <= w.message_count() => Ok((ZFamilySource::Corollary2, w)),
        (_, Some(s)) => Ok((ZFamilySource::Stored, s)),
        (Some(w), None) => Ok((ZFamilySource::Corollary2, w)),
        (None, None) => Err(BuildError::NoTable(n)),
    }
}

/// What `build` and `export strategy` construct.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BuildSpec {
    pub channel: Channel,
    pub feedbacks: usize,
    pub n: usize,
    pub k: Option<usize>,
}

pub fn build(spec: BuildSpec, cache: Option<&FoptCache>, book: &mut BscCodeBook) -> Result<FeedbackStrategy, BuildError> {
    let n = spec.n;
    match (spec.channel, spec.feedbacks) {
        (Channel::Bsc, 0) => {
            let code = bsc_max_code(n, 2_000_000).map_err(StrategyError::from)?.code;
            nonadaptive(code)
        }
        (Channel::Bsc, 1) => Ok(match spec.k {
            Some(k) => corollary1_strategy(n, k)?,
            None => best_one_feedback_bsc(n, book)?,
        }),
        (Channel::Bsc, 2) => Ok(build_two_feedback(n, book)?),
        (Channel::Bsc, k) if k + 1 == n => Ok(build_complete_feedback(n)?),
        (Channel::Z, 0) => {
            let cache = cache.ok_or(BuildError::NoTable(n))?;
            let top = cache.length(n).last().map(|e| e.code()).ok_or(BuildError::NoTable(n))?;
            nonadaptive(top)
        }
        (Channel::Z, 1) => {
            let cache = cache.ok_or(BuildError::NoTable(n))?;
            let (_, family) = best_z_family(cache, n)?;
            Ok(assemble_one_feedback(&family)?)
        }
        (channel, k) => Err(BuildError::Unsupported(format!(
            "no construction for {channel:?} with {k} feedbacks at length {n}"
        ))),
    }
}

fn nonadaptive(code: NonadaptiveCode) -> Result<FeedbackStrategy, BuildError> {
    let n = code.n();
    let graph = code.graph().clone();
    let family = CodeFamily::new(0, n, graph, vec![code])?;
    Ok(assemble_one_feedback(&family)?)
}
