//! The G(T) construction, exact cycle spectra (exhaustive search and the
//! tree translation), pancyclicity, and the no-23-cycle counterexample
//! family.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use thiserror::Error;

use crate::sequences::twenty_avoiding_term;
use crate::trees::{
    build_spine_tree, disjoint_pair_sums_fast, is_13_tree, is_even_tree, leaf_leaf_lengths_fast,
    SpineSequence, Tree, TreeError,
};
use crate::graph::Graph;

pub const DEFAULT_CYCLE_BUDGET: u64 = 100_000_000;

#[derive(Debug, Error)]
pub enum SpectrumError {
    #[error("cycle length {length} out of range 3..={n}")]
    LengthOutOfRange { length: usize, n: usize },
    #[error("cycle search for length {length} exhausted its budget of {budget} expansions")]
    Inconclusive { length: usize, budget: u64 },
    #[error("spectrum incomplete: lengths {inconclusive:?} exhausted their budget")]
    Partial {
        found: BTreeSet<usize>,
        inconclusive: Vec<usize>,
    },
    #[error("tree is not an even 1-3 tree")]
    NotEven13Tree,
    #[error("counterexample index {0} out of range 2..=1000")]
    CounterexampleSize(usize),
    #[error(transparent)]
    Tree(#[from] TreeError),
}

/// Set of cycle lengths present in a graph, with a witness cycle per length
/// when produced by the exhaustive search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleSpectrum {
    pub lengths: BTreeSet<usize>,
    pub witnesses: BTreeMap<usize, Vec<usize>>,
}

/// G(T): two new adjacent vertices x and y, each joined to every leaf of T.
/// x and y receive the two largest labels (x = n, y = n + 1).
pub fn g_of_t(t: &Tree) -> Graph {
    let n = t.n();
    let mut edges = t.graph().edges();
    edges.push((n, n + 1));
    for &leaf in t.leaves() {
        edges.push((leaf, n));
        edges.push((leaf, n + 1));
    }
    Graph::from_edges(n + 2, &edges).expect("G(T) construction is simple by design")
}

struct CycleSearch<'a> {
    g: &'a Graph,
    target: usize,
    anchor: usize,
    dist: Vec<usize>,
    on_path: Vec<bool>,
    path: Vec<usize>,
    expansions: u64,
    budget: u64,
}

impl CycleSearch<'_> {
    /// Extends the path from its last vertex; returns a witness cycle if the
    /// remaining edges can close back to the anchor.
    fn extend(&mut self) -> Result<Option<Vec<usize>>, ()> {
        let current = *self.path.last().unwrap();
        if self.path.len() == self.target {
            if self.g.has_edge(current, self.anchor) {
                return Ok(Some(self.path.clone()));
            }
            return Ok(None);
        }
        let remaining = self.target - self.path.len();
        for &w in self.g.neighbors(current) {
            if w <= self.anchor || self.on_path[w] || self.dist[w] > remaining {
                continue;
            }
            self.expansions += 1;
            if self.expansions > self.budget {
                return Err(());
            }
            self.on_path[w] = true;
            self.path.push(w);
            let found = self.extend()?;
            self.path.pop();
            self.on_path[w] = false;
            if found.is_some() {
                return Ok(found);
            }
        }
        Ok(None)
    }
}

/// Searches for a simple cycle of exactly `length` vertices. Each anchor
/// vertex is tried as the smallest label on the cycle; the search prunes by
/// BFS distance back to the anchor. Budget exhaustion is an explicit error,
/// distinct from a definite "no".
pub fn contains_cycle_of_length(
    g: &Graph,
    length: usize,
    budget: u64,
) -> Result<Option<Vec<usize>>, SpectrumError> {
    let n = g.n();
    if length < 3 || length > n {
        return Err(SpectrumError::LengthOutOfRange { length, n });
    }
    let mut expansions = 0u64;
    for anchor in 0..n {
        // BFS distances within the subgraph of labels >= anchor.
        let mut dist = vec![usize::MAX; n];
        dist[anchor] = 0;
        let mut queue = std::collections::VecDeque::from([anchor]);
        while let Some(u) = queue.pop_front() {
            for &w in g.neighbors(u) {
                if w >= anchor && dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        let mut search = CycleSearch {
            g,
            target: length,
            anchor,
            dist,
            on_path: {
                let mut v = vec![false; n];
                v[anchor] = true;
                v
            },
            path: vec![anchor],
            expansions,
            budget,
        };
        match search.extend() {
            Ok(Some(cycle)) => return Ok(Some(cycle)),
            Ok(None) => expansions = search.expansions,
            Err(()) => return Err(SpectrumError::Inconclusive { length, budget }),
        }
    }
    Ok(None)
}

/// Every cycle length present in `g`, by per-length exhaustive search.
/// Lengths are searched in parallel; any budget exhaustion aborts with a
/// partial-result error listing the inconclusive lengths.
pub fn cycle_spectrum_exhaustive(g: &Graph, budget: u64) -> Result<CycleSpectrum, SpectrumError> {
    let n = g.n();
    let results: Vec<(usize, Result<Option<Vec<usize>>, SpectrumError>)> = (3..=n)
        .into_par_iter()
        .map(|len| (len, contains_cycle_of_length(g, len, budget)))
        .collect();
    let mut lengths = BTreeSet::new();
    let mut witnesses = BTreeMap::new();
    let mut inconclusive = Vec::new();
    for (len, res) in results {
        match res {
            Ok(Some(cycle)) => {
                lengths.insert(len);
                witnesses.insert(len, cycle);
            }
            Ok(None) => {}
            Err(_) => inconclusive.push(len),
        }
    }
    if !inconclusive.is_empty() {
        return Err(SpectrumError::Partial {
            found: lengths,
            inconclusive,
        });
    }
    Ok(CycleSpectrum { lengths, witnesses })
}

/// Cycle lengths of G(T) read off the tree, for an even 1-3 tree T: a
/// (2k+1)-cycle exists iff a leaf-leaf path of length 2k-2 does, and a
/// 2k-cycle exists iff a leaf-leaf path of length 2k-2 or two vertex-disjoint
/// leaf-leaf paths with total length 2k-4 do. The degenerate length-0 path is
/// excluded from the path-to-even-cycle rule (it would be a 2-cycle); the C4
/// case arises from two length-0 paths.
pub fn cycle_spectrum_via_tree(t: &Tree) -> Result<BTreeSet<usize>, SpectrumError> {
    if !is_even_tree(t) || !is_13_tree(t) {
        return Err(SpectrumError::NotEven13Tree);
    }
    let paths = leaf_leaf_lengths_fast(t);
    let pair_sums = disjoint_pair_sums_fast(t);
    let mut out = BTreeSet::new();
    for &l in &paths {
        out.insert(l + 3);
        if l >= 2 {
            out.insert(l + 2);
        }
    }
    for &s in &pair_sums {
        out.insert(s + 4);
    }
    Ok(out)
}

/// True iff the graph contains cycles of every length 3..=n.
pub fn is_pancyclic(g: &Graph, budget: u64) -> Result<bool, SpectrumError> {
    if g.n() < 3 {
        return Ok(false);
    }
    let spectrum = cycle_spectrum_exhaustive(g, budget)?;
    Ok(spectrum.lengths.len() == g.n() - 2)
}

/// The spine tree of the first `n` terms (starting at index 1) of the
/// period-24 twenty-avoiding sequence.
pub fn counterexample_tree(n: usize) -> Result<Tree, SpectrumError> {
    if !(2..=1000).contains(&n) {
        return Err(SpectrumError::CounterexampleSize(n));
    }
    let values: Vec<u32> = (1..=n as i64).map(twenty_avoiding_term).collect();
    let xs = SpineSequence::new(values).expect("period-24 terms are positive");
    Ok(build_spine_tree(&xs)?)
}

/// G_n = G(T_n): degree 3-critical and free of 23-cycles for every n.
pub fn counterexample_graph(n: usize) -> Result<Graph, SpectrumError> {
    Ok(g_of_t(&counterexample_tree(n)?))
}

/// Length of a longest cycle (0 for acyclic graphs), searching downward from
/// n so only the top of the spectrum is explored.
pub fn longest_cycle_length(g: &Graph, budget: u64) -> Result<usize, SpectrumError> {
    for len in (3..=g.n()).rev() {
        if contains_cycle_of_length(g, len, budget)?.is_some() {
            return Ok(len);
        }
    }
    Ok(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::wheel;
    use crate::graph::{is_degree3_critical, Graph};
    use crate::trees::Tree;

    fn claw() -> Tree {
        Tree::from_graph(
            Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap(),
            None,
        )
        .unwrap()
    }

    fn cycle_graph(n: usize) -> Graph {
        let edges: Vec<_> = (0..n)
            .map(|i| (i.min((i + 1) % n), i.max((i + 1) % n)))
            .collect();
        Graph::from_edges(n, &edges).unwrap()
    }

    fn set(v: &[usize]) -> BTreeSet<usize> {
        v.iter().copied().collect()
    }

    #[test]
    fn g_of_t_claw() {
        let g = g_of_t(&claw());
        assert_eq!(g.n(), 6);
        assert_eq!(g.edge_count(), 10);
        assert!(is_degree3_critical(&g));
    }

    #[test]
    fn cycle_search_examples() {
        let c5 = cycle_graph(5);
        assert!(contains_cycle_of_length(&c5, 5, 1000).unwrap().is_some());
        assert!(contains_cycle_of_length(&c5, 4, 1000).unwrap().is_none());
        assert!(contains_cycle_of_length(&c5, 2, 1000).is_err());
        // A found witness really is a cycle of the right length.
        let w = contains_cycle_of_length(&c5, 5, 1000).unwrap().unwrap();
        assert_eq!(w.len(), 5);
        for i in 0..5 {
            assert!(c5.has_edge(w[i], w[(i + 1) % 5]));
        }
    }

    #[test]
    fn budget_exhaustion_is_explicit() {
        let g = wheel(8).unwrap();
        assert!(matches!(
            contains_cycle_of_length(&g, 8, 2),
            Err(SpectrumError::Inconclusive { .. })
        ));
    }

    #[test]
    fn spectrum_examples() {
        let k4 = wheel(4).unwrap();
        assert_eq!(
            cycle_spectrum_exhaustive(&k4, 1_000_000).unwrap().lengths,
            set(&[3, 4])
        );
        let w6 = wheel(6).unwrap();
        assert_eq!(
            cycle_spectrum_exhaustive(&w6, 1_000_000).unwrap().lengths,
            set(&[3, 4, 5, 6])
        );
    }

    #[test]
    fn tree_spectrum_matches_exhaustive_for_claw() {
        let t = claw();
        let via_tree = cycle_spectrum_via_tree(&t).unwrap();
        let exhaustive = cycle_spectrum_exhaustive(&g_of_t(&t), 1_000_000).unwrap();
        assert_eq!(via_tree, exhaustive.lengths);
        assert_eq!(via_tree, set(&[3, 4, 5, 6]));
    }

    #[test]
    fn tree_spectrum_rejects_uneven_trees() {
        let edge = Tree::from_graph(Graph::from_edges(2, &[(0, 1)]).unwrap(), None).unwrap();
        assert!(matches!(
            cycle_spectrum_via_tree(&edge),
            Err(SpectrumError::NotEven13Tree)
        ));
    }

    #[test]
    fn odd_witness_cycles_use_the_xy_edge() {
        // In G(T) for an even tree, G(T) - xy is bipartite, so every odd
        // cycle must traverse the edge xy. Check it on actual witnesses.
        let t = crate::trees::build_spine_tree(
            &crate::trees::SpineSequence::new(vec![1, 2, 1]).unwrap(),
        )
        .unwrap();
        let g = g_of_t(&t);
        let (x, y) = (t.n(), t.n() + 1);
        let spectrum = cycle_spectrum_exhaustive(&g, 10_000_000).unwrap();
        for (&len, cycle) in &spectrum.witnesses {
            if len % 2 == 1 {
                let px = cycle.iter().position(|&v| v == x).expect("odd cycle misses x");
                let py = cycle.iter().position(|&v| v == y).expect("odd cycle misses y");
                let gap = px.abs_diff(py);
                assert!(gap == 1 || gap == len - 1, "xy edge not on the {len}-cycle");
            }
        }
    }

    #[test]
    fn pancyclic_examples() {
        assert!(is_pancyclic(&wheel(7).unwrap(), 1_000_000).unwrap());
        assert!(!is_pancyclic(&cycle_graph(6), 1_000_000).unwrap());
        let glued = crate::family::glue_h(4, 4, false).unwrap();
        assert!(is_pancyclic(&glued, 1_000_000).unwrap());
    }

    #[test]
    fn counterexample_small() {
        let g = counterexample_graph(2).unwrap();
        assert!(is_degree3_critical(&g));
        let t5 = counterexample_tree(5).unwrap();
        assert!(is_13_tree(&t5) && is_even_tree(&t5));
        assert!(!cycle_spectrum_via_tree(&t5).unwrap().contains(&23));
        assert!(counterexample_graph(1).is_err());
        assert!(counterexample_graph(1001).is_err());
    }

    #[test]
    fn counterexample_24_has_no_23_cycle() {
        let t = counterexample_tree(24).unwrap();
        assert!(!cycle_spectrum_via_tree(&t).unwrap().contains(&23));
        assert!(is_degree3_critical(&g_of_t(&t)));
    }

    #[test]
    fn longest_cycle_examples() {
        assert_eq!(longest_cycle_length(&cycle_graph(7), 1_000_000).unwrap(), 7);
        assert_eq!(longest_cycle_length(&wheel(6).unwrap(), 1_000_000).unwrap(), 6);
        let acyclic = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        assert_eq!(longest_cycle_length(&acyclic, 1_000_000).unwrap(), 0);
    }
}
