//! Sizes of binary constant-weight codes `A(m, d, w)`.
//!
//! Small lengths are solved exactly by clique search; longer ones get a
//! greedy lower bound and the Johnson recursion as upper bound.

use alloc::vec::Vec;

use crate::bitset::BitSet;
use crate::clique::{CliqueSearch, Graph};
use crate::math::binomial;

/// Lengths up to this are solved by exhaustive clique search in [`CwTable`].
pub const DEFAULT_EXACT_LEN: usize = 9;

/// Branch-node budget for a single exact constant-weight computation.
pub const DEFAULT_NODE_LIMIT: u64 = 2_000_000;

const GREEDY_MAX_LEN: usize = 14;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CwValue {
    pub lower: u64,
    pub upper: u64,
}

impl CwValue {
    pub fn exactly(v: u64) -> Self {
        CwValue { lower: v, upper: v }
    }

    pub fn is_exact(&self) -> bool {
        self.lower == self.upper
    }
}

fn trivial(m: usize, d: usize, w: usize) -> Option<u64> {
    if w > m {
        return Some(0);
    }
    let w = w.min(m - w);
    if w == 0 || 2 * w < d {
        Some(1)
    } else if d <= 2 {
        Some(binomial(m as u64, w as u64))
    } else if 2 * w == d {
        Some((m / w) as u64)
    } else {
        None
    }
}

fn weight_words(m: usize, w: usize) -> Vec<u32> {
    (0u32..1 << m).filter(|x| x.count_ones() as usize == w).collect()
}

fn far(a: u32, b: u32, d: usize) -> bool {
    (a ^ b).count_ones() as usize >= d
}

/// Lexicographic greedy code: a valid lower bound.
pub fn greedy_lower(m: usize, d: usize, w: usize) -> u64 {
    if let Some(v) = trivial(m, d, w) {
        return v;
    }
    let mut code: Vec<u32> = Vec::new();
    for x in weight_words(m, w) {
        if code.iter().all(|&c| far(c, x, d)) {
            code.push(x);
        }
    }
    code.len() as u64
}

/// Clique search for `A(m, d, w)` within `node_limit` branch nodes.
///
/// Returns the best code found and whether the search was exhaustive.
pub fn search_constant_weight(m: usize, d: usize, w: usize, node_limit: u64) -> (Vec<u32>, bool) {
    assert!(m <= 24, "constant-weight search limited to length 24");
    let words = weight_words(m, w);
    if words.is_empty() {
        return (Vec::new(), true);
    }
    let g = Graph::from_fn(words.len(), |a, b| far(words[a], words[b], d));
    // the symmetric group is transitive on weight-w words, so fix the first one
    let r = CliqueSearch {
        target: None,
        node_limit: Some(node_limit),
    }
    .run(&g, &[0], None);
    (r.clique.iter().map(|&i| words[i]).collect(), r.complete)
}

/// `A(m, d, w)` as a `(lower, upper)` pair; exact when the search completes.
pub fn constant_weight_exact(m: usize, d: usize, w: usize) -> CwValue {
    CwTable::new(d, m, m.min(14), DEFAULT_NODE_LIMIT).get(m, w)
}

/// Table of `A(m, d, w)` bounds for all `m <= max_len`.
#[derive(Clone, Debug)]
pub struct CwTable {
    d: usize,
    exact_len: usize,
    rows: Vec<Vec<CwValue>>,
}

impl CwTable {
    /// Default table used by the free-point bound for distance `d`.
    pub fn standard(d: usize, max_len: usize) -> Self {
        CwTable::new(d, max_len, DEFAULT_EXACT_LEN, DEFAULT_NODE_LIMIT)
    }

    pub fn new(d: usize, max_len: usize, exact_len: usize, node_limit: u64) -> Self {
        let mut rows: Vec<Vec<CwValue>> = Vec::with_capacity(max_len + 1);
        for m in 0..=max_len {
            let mut row = Vec::with_capacity(m + 1);
            for w in 0..=m {
                let v = if let Some(v) = trivial(m, d, w) {
                    CwValue::exactly(v)
                } else if w > m - w {
                    row[m - w]
                } else {
                    let prev: &Vec<CwValue> = &rows[m - 1];
                    let johnson = (m as u64 * prev[w - 1].upper / w as u64)
                        .min(m as u64 * prev[w].upper / (m - w) as u64);
                    if m <= exact_len {
                        let (code, complete) = search_constant_weight(m, d, w, node_limit);
                        let found = code.len() as u64;
                        CwValue {
                            lower: found,
                            upper: if complete { found } else { johnson },
                        }
                    } else if m <= GREEDY_MAX_LEN {
                        CwValue {
                            lower: greedy_lower(m, d, w),
                            upper: johnson,
                        }
                    } else {
                        CwValue { lower: 1, upper: johnson }
                    }
                };
                row.push(v);
            }
            rows.push(row);
        }
        CwTable { d, exact_len, rows }
    }

    pub fn distance(&self) -> usize {
        self.d
    }

    pub fn exact_len(&self) -> usize {
        self.exact_len
    }

    pub fn max_len(&self) -> usize {
        self.rows.len() - 1
    }

    /// Bounds on `A(m, d, w)`; weights outside `0..=m` give zero.
    ///
    /// Panics if `m` exceeds the table.
    pub fn get(&self, m: usize, w: usize) -> CwValue {
        if w > m {
            return CwValue::exactly(0);
        }
        self.rows[m][w]
    }

    pub fn try_get(&self, m: usize, w: usize) -> Option<CwValue> {
        (m < self.rows.len()).then(|| self.get(m, w))
    }

    pub fn lower(&self, m: usize, w: usize) -> u64 {
        self.get(m, w).lower
    }

    pub fn upper(&self, m: usize, w: usize) -> u64 {
        self.get(m, w).upper
    }
}

/// Checks that `code` is a constant-weight code with minimum distance `d`.
pub fn is_constant_weight_code(code: &[u32], m: usize, d: usize, w: usize) -> bool {
    let mut seen = BitSet::new(1 << m);
    code.iter().all(|&c| c >> m == 0 && c.count_ones() as usize == w && seen.insert(c as usize))
        && code
            .iter()
            .enumerate()
            .all(|(i, &a)| code[i + 1..].iter().all(|&b| far(a, b, d)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(m: usize, d: usize, w: usize) -> u64 {
        // exhaustive over subsets, only for tiny spaces
        let words = weight_words(m, w);
        let k = words.len();
        assert!(k <= 20);
        (0u32..1 << k)
            .filter(|mask| {
                let pick: Vec<u32> = (0..k).filter(|&i| mask >> i & 1 == 1).map(|i| words[i]).collect();
                is_constant_weight_code(&pick, m, d, w)
            })
            .map(|mask| u64::from(mask.count_ones()))
            .max()
            .unwrap()
    }

    #[test]
    fn small_values_match_brute_force() {
        for (m, w) in [(4, 2), (5, 2), (6, 3), (6, 2), (5, 3)] {
            assert_eq!(constant_weight_exact(m, 4, w), CwValue::exactly(brute(m, 4, w)), "m={m} w={w}");
        }
        assert_eq!(constant_weight_exact(4, 4, 2), CwValue::exactly(2));
    }

    #[test]
    fn known_values() {
        let t = CwTable::standard(4, 9);
        for (m, w, a) in [(7, 3, 7), (8, 3, 8), (8, 4, 14), (9, 3, 12), (9, 4, 18), (6, 3, 4)] {
            assert_eq!(t.get(m, w), CwValue::exactly(a), "A({m},4,{w})");
        }
        for m in 0..=9 {
            assert_eq!(t.get(m, 0), CwValue::exactly(1));
        }
    }

    #[test]
    fn complement_symmetry_and_johnson() {
        let t = CwTable::standard(4, 14);
        for m in 0..=14 {
            for w in 0..=m {
                assert_eq!(t.get(m, w), t.get(m, m - w));
                let v = t.get(m, w);
                assert!(v.lower <= v.upper);
            }
        }
        // exact to length 9, Johnson beyond
        assert_eq!(t.upper(10, 3), 13);
        assert_eq!(t.upper(10, 4), 30);
        assert!(!t.get(12, 6).is_exact());
    }

    #[test]
    fn distance_six() {
        assert_eq!(constant_weight_exact(8, 6, 4), CwValue::exactly(2));
        assert_eq!(constant_weight_exact(9, 6, 3), CwValue::exactly(3));
        assert_eq!(constant_weight_exact(7, 6, 4), CwValue::exactly(2));
    }
}
