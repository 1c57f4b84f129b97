//! Exhaustive single-error verification of feedback strategies.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::channel::Word;
use crate::strategy::{FeedbackStrategy, StrategyError};

/// What the channel does during one transmission.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum AdversaryAction {
    NoError,
    /// Replace the symbol at `position` by `symbol`. Ignored when that is not
    /// an edge of the error graph for the symbol actually sent.
    Replace { position: usize, symbol: u8 },
}

impl AdversaryAction {
    fn as_pair(self) -> Option<(usize, u8)> {
        match self {
            AdversaryAction::NoError => None,
            AdversaryAction::Replace { position, symbol } => Some((position, symbol)),
        }
    }
}

/// Runs message `m` through the channel and decodes the result.
pub fn simulate(s: &FeedbackStrategy, m: usize, act: AdversaryAction) -> Result<(Word, Option<usize>), StrategyError> {
    let got = s.transmit(m, act.as_pair())?;
    Ok((got, s.decode(&got)))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Failure {
    pub message: usize,
    pub action: AdversaryAction,
    pub received: Option<Word>,
    pub decoded: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationReport {
    pub messages: usize,
    pub total_cases: u64,
    pub failures: Vec<Failure>,
    /// Number of messages by cloud size.
    pub cloud_census: BTreeMap<usize, usize>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks every message against the error-free case and every
/// `(position, symbol)` replacement, `M (1 + n(q-1))` cases in all.
pub fn verify_strategy(s: &FeedbackStrategy) -> VerificationReport {
    let n = s.n();
    let q = s.graph().q();
    let mut failures = Vec::new();
    let mut census = BTreeMap::new();
    let mut total = 0u64;
    for m in 0..s.len() {
        let mut cloud: Vec<Word> = Vec::new();
        let mut actions = Vec::with_capacity(1 + n * (q as usize - 1));
        actions.push(AdversaryAction::NoError);
        let root = s.root(m).ok();
        for position in 0..n {
            for symbol in 0..q {
                if root.is_none_or(|r| r.symbol(position) != symbol) {
                    actions.push(AdversaryAction::Replace { position, symbol });
                }
            }
        }
        for action in actions {
            total += 1;
            match simulate(s, m, action) {
                Ok((got, decoded)) => {
                    cloud.push(got);
                    if decoded != Some(m) {
                        failures.push(Failure {
                            message: m,
                            action,
                            received: Some(got),
                            decoded,
                        });
                    }
                }
                Err(_) => failures.push(Failure {
                    message: m,
                    action,
                    received: None,
                    decoded: None,
                }),
            }
        }
        cloud.sort();
        cloud.dedup();
        *census.entry(cloud.len()).or_insert(0) += 1;
    }
    VerificationReport {
        messages: s.len(),
        total_cases: total,
        failures,
        cloud_census: census,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::ErrorGraph;
    use crate::strategy::{assemble_one_feedback, corollary1_strategy, example_family_8, MessagePlan};
    use alloc::vec;

    #[test]
    fn hamming_strategy_passes() {
        let s = corollary1_strategy(7, 3).unwrap();
        let r = verify_strategy(&s);
        assert!(r.passed());
        assert_eq!(r.total_cases, 16 * 8);
        assert_eq!(r.cloud_census.get(&8), Some(&16));
    }

    #[test]
    fn z_family_passes_with_illegal_edges_counted() {
        let s = assemble_one_feedback(&example_family_8()).unwrap();
        let r = verify_strategy(&s);
        assert!(r.passed(), "{:?}", r.failures.first());
        assert_eq!(r.total_cases, 53 * 9);
    }

    #[test]
    fn broken_decoder_is_reported() {
        let z = Word::binary(0, 3);
        let plans = vec![MessagePlan { first: z, next: vec![] }];
        let s = FeedbackStrategy::new(ErrorGraph::bsc(), vec![3], plans, [(z, 0)]).unwrap();
        let r = verify_strategy(&s);
        assert_eq!(r.failures.len(), 3);
        assert_eq!(r.failures[0].action, AdversaryAction::Replace { position: 0, symbol: 1 });
    }
}
