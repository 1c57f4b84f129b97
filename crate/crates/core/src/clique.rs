//! Maximum clique by branch and bound with greedy colouring bounds.
//!
//! Used for exact constant-weight code sizes and for maximum binary codes of
//! small length, where vertices are words and edges join words far enough
//! apart to coexist in a code.

use alloc::vec;
use alloc::vec::Vec;

use crate::bitset::BitSet;

#[derive(Clone, Debug)]
pub struct Graph {
    adj: Vec<BitSet>,
}

impl Graph {
    pub fn new(n: usize) -> Self {
        Graph {
            adj: vec![BitSet::new(n); n],
        }
    }

    /// Graph on `0..n` with an edge wherever `joined(a, b)` holds (`a < b`).
    pub fn from_fn(n: usize, mut joined: impl FnMut(usize, usize) -> bool) -> Self {
        let mut g = Graph::new(n);
        for a in 0..n {
            for b in a + 1..n {
                if joined(a, b) {
                    g.add_edge(a, b);
                }
            }
        }
        g
    }

    pub fn add_edge(&mut self, a: usize, b: usize) {
        if a != b {
            self.adj[a].insert(b);
            self.adj[b].insert(a);
        }
    }

    pub fn order(&self) -> usize {
        self.adj.len()
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.adj[a].contains(b)
    }

    pub fn neighbors(&self, v: usize) -> &BitSet {
        &self.adj[v]
    }

    pub fn is_clique(&self, vs: &[usize]) -> bool {
        vs.iter()
            .enumerate()
            .all(|(i, &a)| vs[i + 1..].iter().all(|&b| self.adjacent(a, b)))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliqueResult {
    /// Best clique found, vertices in increasing order.
    pub clique: Vec<usize>,
    /// The search finished, so no larger clique (or none reaching the target) exists.
    pub complete: bool,
    pub nodes: u64,
}

/// Search parameters. `target` stops the search as soon as a clique of that
/// size is found; `node_limit` caps the number of branch nodes.
#[derive(Clone, Debug, Default)]
pub struct CliqueSearch {
    pub target: Option<usize>,
    pub node_limit: Option<u64>,
}

struct Solver<'a> {
    adj: &'a [BitSet],
    best: Vec<usize>,
    current: Vec<usize>,
    nodes: u64,
    limit: u64,
    target: usize,
    aborted: bool,
}

impl Solver<'_> {
    fn colour_sort(&self, p: &BitSet) -> (Vec<usize>, Vec<usize>) {
        let mut order = Vec::with_capacity(p.count());
        let mut colours = Vec::with_capacity(order.capacity());
        let mut uncoloured = p.clone();
        let mut k = 0;
        while !uncoloured.is_empty() {
            k += 1;
            let mut q = uncoloured.clone();
            while let Some(v) = q.first() {
                q.remove(v);
                q.difference_with(&self.adj[v]);
                uncoloured.remove(v);
                order.push(v);
                colours.push(k);
            }
        }
        (order, colours)
    }

    fn expand(&mut self, mut p: BitSet) {
        self.nodes += 1;
        if self.nodes > self.limit {
            self.aborted = true;
            return;
        }
        let (order, colours) = self.colour_sort(&p);
        for i in (0..order.len()).rev() {
            if self.current.len() + colours[i] <= self.best.len() || self.best.len() >= self.target {
                return;
            }
            let v = order[i];
            self.current.push(v);
            let mut next = p.clone();
            next.intersect_with(&self.adj[v]);
            if next.is_empty() {
                if self.current.len() > self.best.len() {
                    self.best = self.current.clone();
                }
            } else {
                self.expand(next);
            }
            self.current.pop();
            if self.aborted {
                return;
            }
            p.remove(v);
        }
    }
}

impl CliqueSearch {
    /// Largest clique containing every vertex of `required` (which must
    /// itself be a clique), restricted to vertices in `allowed` if given.
    pub fn run(&self, g: &Graph, required: &[usize], allowed: Option<&BitSet>) -> CliqueResult {
        let n = g.order();
        // relabel by decreasing degree so colour classes form quickly
        let mut perm: Vec<usize> = (0..n).collect();
        perm.sort_by_key(|&v| (core::cmp::Reverse(g.adj[v].count()), v));
        let mut pos = vec![0; n];
        for (i, &v) in perm.iter().enumerate() {
            pos[v] = i;
        }
        let adj: Vec<BitSet> = perm
            .iter()
            .map(|&v| g.adj[v].iter().map(|u| pos[u]).fold(BitSet::new(n), |mut s, u| {
                s.insert(u);
                s
            }))
            .collect();

        let mut p = match allowed {
            Some(a) => a.iter().map(|v| pos[v]).fold(BitSet::new(n), |mut s, u| {
                s.insert(u);
                s
            }),
            None => BitSet::full(n),
        };
        let current: Vec<usize> = required.iter().map(|&v| pos[v]).collect();
        for &v in &current {
            p.intersect_with(&adj[v]);
        }
        let mut solver = Solver {
            adj: &adj,
            best: current.clone(),
            current,
            nodes: 0,
            limit: self.node_limit.unwrap_or(u64::MAX),
            target: self.target.unwrap_or(usize::MAX),
            aborted: false,
        };
        if !p.is_empty() {
            solver.expand(p);
        }
        let mut clique: Vec<usize> = solver.best.iter().map(|&i| perm[i]).collect();
        clique.sort_unstable();
        CliqueResult {
            complete: !solver.aborted,
            nodes: solver.nodes,
            clique,
        }
    }
}

/// Exact maximum clique with no budget.
pub fn max_clique(g: &Graph) -> Vec<usize> {
    CliqueSearch::default().run(g, &[], None).clique
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn brute(g: &Graph) -> usize {
        let n = g.order();
        (0u32..1 << n)
            .filter(|&mask| {
                let vs: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
                g.is_clique(&vs)
            })
            .map(|m| m.count_ones() as usize)
            .max()
            .unwrap_or(0)
    }

    #[test]
    fn cycle_and_complete() {
        let c5 = Graph::from_fn(5, |a, b| b == a + 1 || (a == 0 && b == 4));
        assert_eq!(max_clique(&c5).len(), 2);
        let k6 = Graph::from_fn(6, |_, _| true);
        assert_eq!(max_clique(&k6), vec![0, 1, 2, 3, 4, 5]);
    }

    #[test]
    fn required_and_target() {
        let g = Graph::from_fn(6, |a, b| (a < 3 && b < 3) || (a >= 2 && b >= 2));
        let r = CliqueSearch::default().run(&g, &[0], None);
        assert_eq!(r.clique, vec![0, 1, 2]);
        let t = CliqueSearch {
            target: Some(2),
            node_limit: None,
        }
        .run(&g, &[], None);
        assert!(t.clique.len() >= 2);
    }

    #[test]
    fn node_limit_marks_incomplete() {
        let g = Graph::from_fn(40, |a, b| (a * 7 + b * 3) % 5 != 0);
        let r = CliqueSearch {
            target: None,
            node_limit: Some(1),
        }
        .run(&g, &[], None);
        assert!(!r.complete);
        assert!(g.is_clique(&r.clique));
    }

    proptest! {
        #[test]
        fn matches_brute_force(edges in proptest::collection::vec(any::<bool>(), 66)) {
            let n = 12;
            let mut k = 0;
            let mut g = Graph::new(n);
            for a in 0..n {
                for b in a + 1..n {
                    if edges[k % edges.len()] { g.add_edge(a, b); }
                    k += 1;
                }
            }
            let c = max_clique(&g);
            prop_assert!(g.is_clique(&c));
            prop_assert_eq!(c.len(), brute(&g));
        }
    }
}
