//! JSON files for codes and strategies.
//!
//! Words are written as symbol strings, first transmitted symbol first.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use fbcode_core::channel::ChannelError;
use fbcode_core::strategy::{MessagePlan, StrategyError};
use fbcode_core::{ErrorGraph, FeedbackStrategy, NonadaptiveCode, Word};
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("io error on {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("bad json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("bad word or graph: {0}")]
    Channel(#[from] ChannelError),
    #[error("bad strategy: {0}")]
    Strategy(#[from] StrategyError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeFile {
    pub n: usize,
    pub q: u8,
    pub t: usize,
    pub graph: Vec<[u8; 2]>,
    pub centers: Vec<String>,
}

impl CodeFile {
    pub fn from_code(code: &NonadaptiveCode) -> Self {
        CodeFile {
            n: code.n(),
            q: code.graph().q(),
            t: code.t(),
            graph: edges_out(code.graph()),
            centers: code.centers().iter().map(|w| w.to_string()).collect(),
        }
    }

    pub fn to_code(&self) -> Result<NonadaptiveCode, FormatError> {
        let graph = edges_in(self.q, &self.graph)?;
        let centers = self
            .centers
            .iter()
            .map(|s| Word::parse(s, self.q))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(NonadaptiveCode::new(self.n, self.t, graph, centers)?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MessageEntry {
    pub first_block: String,
    /// One table per feedback point: received prefix to next block.
    pub transitions: Vec<BTreeMap<String, String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrategyFile {
    pub q: u8,
    pub graph: Vec<[u8; 2]>,
    pub block_lengths: Vec<usize>,
    pub messages: Vec<MessageEntry>,
    pub decoder: BTreeMap<String, usize>,
}

impl StrategyFile {
    pub fn from_strategy(s: &FeedbackStrategy) -> Self {
        let messages = s
            .plans()
            .iter()
            .map(|p| MessageEntry {
                first_block: p.first.to_string(),
                transitions: p
                    .next
                    .iter()
                    .map(|t| t.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect())
                    .collect(),
            })
            .collect();
        StrategyFile {
            q: s.graph().q(),
            graph: edges_out(s.graph()),
            block_lengths: s.block_lengths().to_vec(),
            messages,
            decoder: s.decoder_entries().map(|(w, m)| (w.to_string(), m)).collect(),
        }
    }

    pub fn to_strategy(&self) -> Result<FeedbackStrategy, FormatError> {
        let q = self.q;
        let graph = edges_in(q, &self.graph)?;
        let plans = self
            .messages
            .iter()
            .map(|m| {
                let next = m
                    .transitions
                    .iter()
                    .map(|t| {
                        t.iter()
                            .map(|(k, v)| Ok((Word::parse(k, q)?, Word::parse(v, q)?)))
                            .collect::<Result<BTreeMap<_, _>, ChannelError>>()
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(MessagePlan {
                    first: Word::parse(&m.first_block, q)?,
                    next,
                })
            })
            .collect::<Result<Vec<_>, ChannelError>>()?;
        let decoder = self
            .decoder
            .iter()
            .map(|(k, &m)| Ok((Word::parse(k, q)?, m)))
            .collect::<Result<Vec<_>, ChannelError>>()?;
        Ok(FeedbackStrategy::new(graph, self.block_lengths.clone(), plans, decoder)?)
    }
}

fn edges_out(g: &ErrorGraph) -> Vec<[u8; 2]> {
    g.edges().iter().map(|&(a, b)| [a, b]).collect()
}

fn edges_in(q: u8, edges: &[[u8; 2]]) -> Result<ErrorGraph, ChannelError> {
    ErrorGraph::new(q, edges.iter().map(|e| (e[0], e[1])))
}

pub fn strategy_to_json(s: &FeedbackStrategy) -> String {
    let mut out = serde_json::to_string_pretty(&StrategyFile::from_strategy(s)).expect("serialisable");
    out.push('\n');
    out
}

pub fn strategy_from_json(text: &str) -> Result<FeedbackStrategy, FormatError> {
    serde_json::from_str::<StrategyFile>(text)?.to_strategy()
}

pub fn code_to_json(c: &NonadaptiveCode) -> String {
    let mut out = serde_json::to_string_pretty(&CodeFile::from_code(c)).expect("serialisable");
    out.push('\n');
    out
}

pub fn code_from_json(text: &str) -> Result<NonadaptiveCode, FormatError> {
    serde_json::from_str::<CodeFile>(text)?.to_code()
}

pub fn read_text(path: &Path) -> Result<String, FormatError> {
    fs::read_to_string(path).map_err(|source| FormatError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn write_text(path: &Path, text: &str) -> Result<(), FormatError> {
    fs::write(path, text).map_err(|source| FormatError::Io {
        path: path.display().to_string(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use fbcode_core::strategy::{assemble_one_feedback, corollary1_strategy, example_family_8};

    #[test]
    fn strategy_round_trip() {
        for s in [corollary1_strategy(8, 3).unwrap(), assemble_one_feedback(&example_family_8()).unwrap()] {
            let text = strategy_to_json(&s);
            let back = strategy_from_json(&text).unwrap();
            assert_eq!(back, s);
            assert_eq!(strategy_to_json(&back), text);
        }
    }

    #[test]
    fn code_round_trip() {
        let c = NonadaptiveCode::binary(4, 1, ErrorGraph::z_channel(), [0, 3]).unwrap();
        let text = code_to_json(&c);
        assert!(text.contains("\"0011\""));
        assert_eq!(code_from_json(&text).unwrap(), c);
    }

    #[test]
    fn rejects_bad_words() {
        let bad = r#"{"n":2,"q":2,"t":1,"graph":[[1,0]],"centers":["02"]}"#;
        assert!(matches!(code_from_json(bad), Err(FormatError::Channel(_))));
    }

    proptest::proptest! {
        #[test]
        fn lifted_round_trip(n in 3usize..=6, seed in proptest::prelude::any::<u64>()) {
            use fbcode_core::strategy::{dada_lift, CodeFamily};
            // greedy distance-3 code over a seeded order of the words
            let mut chosen: Vec<u64> = Vec::new();
            for i in 0..1u64 << n {
                let v = (i ^ seed) & ((1 << n) - 1);
                if chosen.iter().all(|&c| (c ^ v).count_ones() >= 3) {
                    chosen.push(v);
                }
            }
            let code = NonadaptiveCode::binary(n, 1, ErrorGraph::bsc(), chosen).unwrap();
            let family = CodeFamily::new(0, n, ErrorGraph::bsc(), vec![code]).unwrap();
            let s = dada_lift(&assemble_one_feedback(&family).unwrap()).unwrap();
            let text = strategy_to_json(&s);
            let back = strategy_from_json(&text).unwrap();
            proptest::prop_assert_eq!(strategy_to_json(&back), text);
            proptest::prop_assert_eq!(back, s);
        }
    }
}
