//! Tree constructions (perfect binary trees, spine trees), the 1-3 / even
//! tree predicates, and leaf-leaf path-length computation.
//!
//! Path lengths are measured in edges. A single leaf counts as a leaf-leaf
//! path of length 0 throughout; the cycle-spectrum translation relies on it.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::bits::LenBits;
use crate::graph::{Graph, GraphError};

pub type LengthSet = BTreeSet<usize>;

#[derive(Debug, Error)]
pub enum TreeError {
    #[error("graph is not a tree (must be connected with n - 1 edges)")]
    NotATree,
    #[error("depth {0} exceeds the size guard of {MAX_PERFECT_DEPTH}")]
    TooDeep(usize),
    #[error("spine sequence needs at least 2 entries, got {0}")]
    SpineTooShort(usize),
    #[error("sequence values must be positive")]
    NonPositiveValue,
    #[error("sequence is not odd-even (x_i + i must have constant parity)")]
    NotOddEven,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

pub const MAX_PERFECT_DEPTH: usize = 20;

/// A graph known to be acyclic and connected, with an optional root and a
/// cached leaf set (degree <= 1; the one-vertex tree is its own leaf).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tree {
    graph: Graph,
    root: Option<usize>,
    leaves: Vec<usize>,
}

impl Tree {
    pub fn from_graph(graph: Graph, root: Option<usize>) -> Result<Tree, TreeError> {
        let n = graph.n();
        if n == 0 || graph.edge_count() != n - 1 || !graph.is_connected() {
            return Err(TreeError::NotATree);
        }
        let leaves = (0..n).filter(|&v| graph.degree(v) <= 1).collect();
        Ok(Tree { graph, root, leaves })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn root(&self) -> Option<usize> {
        self.root
    }

    pub fn leaves(&self) -> &[usize] {
        &self.leaves
    }
}

/// Rooted tree with `2^(depth+1) - 1` vertices in which every non-leaf has two
/// children and every root-leaf path has length `depth`. Root is vertex 0;
/// labels are in level order (children of `i` are `2i + 1` and `2i + 2`).
pub fn perfect_binary_tree(depth: usize) -> Result<Tree, TreeError> {
    if depth > MAX_PERFECT_DEPTH {
        return Err(TreeError::TooDeep(depth));
    }
    let n = (1usize << (depth + 1)) - 1;
    let internal = (1usize << depth) - 1;
    let edges: Vec<(usize, usize)> = (0..internal)
        .flat_map(|i| [(i, 2 * i + 1), (i, 2 * i + 2)])
        .collect();
    Tree::from_graph(Graph::from_edges(n, &edges)?, Some(0))
}

/// A sequence of positive integers used to parametrize a spine tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpineSequence {
    values: Vec<u32>,
}

impl SpineSequence {
    pub fn new(values: Vec<u32>) -> Result<SpineSequence, TreeError> {
        if values.iter().any(|&x| x == 0) {
            return Err(TreeError::NonPositiveValue);
        }
        Ok(SpineSequence { values })
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// x_i has the parity of i (1-based).
    pub fn is_odd_even(&self) -> bool {
        self.values
            .iter()
            .enumerate()
            .all(|(t, &x)| x as usize % 2 == (t + 1) % 2)
    }

    /// x_i + i has the same parity for all i. Holds for odd-even sequences
    /// and their parity mirrors; exactly these spine trees are even, since a
    /// leaf-leaf path between pendants at positions i and j has length
    /// x_i + x_j + |i - j| = (x_i + i) + (x_j + j) - 2 min(i, j).
    pub fn has_consistent_parity(&self) -> bool {
        self.values
            .iter()
            .enumerate()
            .map(|(t, &x)| (x as usize + t) % 2)
            .all(|p| p == (self.values[0] as usize) % 2)
    }
}

/// Builds the spine tree of a sequence x_1..x_n: a path of spine vertices
/// carrying one pendant perfect binary tree of depth x_i - 1 at each internal
/// spine vertex and two such trees at each end.
///
/// Labeling: spine vertices are 0..n-1 in path order, then pendant trees in
/// spine order (two at the first vertex, one at each internal vertex, two at
/// the last), each in level order.
pub fn build_spine_tree(xs: &SpineSequence) -> Result<Tree, TreeError> {
    let n = xs.len();
    if n < 2 {
        return Err(TreeError::SpineTooShort(n));
    }
    let mut edges: Vec<(usize, usize)> = (0..n - 1).map(|i| (i, i + 1)).collect();
    let mut next = n;
    let mut attach_perfect = |depth: usize, spine: usize, edges: &mut Vec<(usize, usize)>| -> Result<(), TreeError> {
        if depth > MAX_PERFECT_DEPTH {
            return Err(TreeError::TooDeep(depth));
        }
        let base = next;
        let size = (1usize << (depth + 1)) - 1;
        edges.push((spine, base));
        for i in 0..(1usize << depth) - 1 {
            edges.push((base + i, base + 2 * i + 1));
            edges.push((base + i, base + 2 * i + 2));
        }
        next += size;
        Ok(())
    };
    for (i, &x) in xs.values().iter().enumerate() {
        let copies = if i == 0 || i == n - 1 { 2 } else { 1 };
        for _ in 0..copies {
            attach_perfect(x as usize - 1, i, &mut edges)?;
        }
    }
    let edges: Vec<(usize, usize)> = edges
        .into_iter()
        .map(|(u, v)| (u.min(v), u.max(v)))
        .collect();
    Tree::from_graph(Graph::from_edges(next, &edges)?, None)
}

/// The Bollobas-Brightwell extremal shape: a root whose three subtrees are
/// perfect binary trees of depth `d`.
pub fn bollobas_brightwell_tree(depth: usize) -> Result<Tree, TreeError> {
    if depth > MAX_PERFECT_DEPTH {
        return Err(TreeError::TooDeep(depth));
    }
    let size = (1usize << (depth + 1)) - 1;
    let mut edges = Vec::new();
    for c in 0..3 {
        let base = 1 + c * size;
        edges.push((0, base));
        for i in 0..(1usize << depth) - 1 {
            edges.push((base + i, base + 2 * i + 1));
            edges.push((base + i, base + 2 * i + 2));
        }
    }
    Tree::from_graph(Graph::from_edges(1 + 3 * size, &edges)?, Some(0))
}

/// True iff every vertex has degree 1 or 3.
pub fn is_13_tree(t: &Tree) -> bool {
    (0..t.n()).all(|v| matches!(t.graph().degree(v), 1 | 3))
}

/// True iff all leaves fall in the same class of the tree's bipartition.
pub fn is_even_tree(t: &Tree) -> bool {
    let color = t.graph().bfs_distances(0);
    t.leaves().iter().all(|&v| color[v] % 2 == color[t.leaves()[0]] % 2)
}

/// All leaf-leaf path lengths, by BFS from every leaf. This is the reference
/// oracle; `leaf_leaf_lengths_fast` must agree with it.
pub fn leaf_leaf_lengths(t: &Tree) -> LengthSet {
    let mut out = LengthSet::new();
    if !t.leaves().is_empty() {
        out.insert(0);
    }
    for &u in t.leaves() {
        let dist = t.graph().bfs_distances(u);
        for &w in t.leaves() {
            if w != u {
                out.insert(dist[w]);
            }
        }
    }
    out
}

fn tree_diameter(t: &Tree) -> usize {
    let d0 = t.graph().bfs_distances(0);
    let far = (0..t.n()).max_by_key(|&v| d0[v]).unwrap();
    let d1 = t.graph().bfs_distances(far);
    d1.iter().copied().max().unwrap()
}

/// Per directed edge u->v: distance set from u to leaves on u's side, and
/// leaf-leaf length set on u's side.
struct EdgeSets {
    dist: LenBits,
    lengths: LenBits,
}

struct PathLengthDp {
    parent: Vec<usize>,
    bfs_order: Vec<usize>,
    /// Sets for child->parent edges, indexed by the child.
    down: Vec<EdgeSets>,
    /// Sets for parent->child edges, indexed by the child.
    up: Vec<EdgeSets>,
    cap: usize,
    is_leaf: Vec<bool>,
}

impl PathLengthDp {
    fn combine(&self, branches: &[&LenBits], branch_lengths: &[&LenBits], leaf_here: bool) -> EdgeSets {
        let mut dist = LenBits::new(self.cap);
        let mut lengths = LenBits::new(self.cap);
        // Branch distance sets as seen from this vertex.
        let mut seen: Vec<LenBits> = Vec::with_capacity(branches.len() + 1);
        for b in branches {
            let mut s = LenBits::new(self.cap);
            s.or_shifted(b, 1);
            seen.push(s);
        }
        if leaf_here {
            let mut s = LenBits::new(self.cap);
            s.insert(0);
            seen.push(s);
        }
        for s in &seen {
            dist.union_with(s);
        }
        for l in branch_lengths {
            lengths.union_with(l);
        }
        for i in 0..seen.len() {
            for j in i + 1..seen.len() {
                seen[i].sum_into(&seen[j], &mut lengths);
            }
        }
        if !dist.is_empty() {
            lengths.insert(0);
        }
        EdgeSets { dist, lengths }
    }

    fn build(t: &Tree) -> PathLengthDp {
        let n = t.n();
        let g = t.graph();
        let cap = tree_diameter(t) + 1;
        let mut parent = vec![usize::MAX; n];
        let mut bfs_order = Vec::with_capacity(n);
        let mut queue = std::collections::VecDeque::from([0usize]);
        let mut seen = vec![false; n];
        seen[0] = true;
        while let Some(u) = queue.pop_front() {
            bfs_order.push(u);
            for &w in g.neighbors(u) {
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = u;
                    queue.push_back(w);
                }
            }
        }
        let is_leaf: Vec<bool> = (0..n).map(|v| g.degree(v) <= 1).collect();
        let empty = || EdgeSets {
            dist: LenBits::new(cap),
            lengths: LenBits::new(cap),
        };
        let mut dp = PathLengthDp {
            parent,
            bfs_order,
            down: (0..n).map(|_| empty()).collect(),
            up: (0..n).map(|_| empty()).collect(),
            cap,
            is_leaf,
        };
        // Down pass: child -> parent edges, deepest first.
        for &v in dp.bfs_order.clone().iter().rev() {
            let children: Vec<usize> = g
                .neighbors(v)
                .iter()
                .copied()
                .filter(|&w| dp.parent[w] == v)
                .collect();
            let branches: Vec<&LenBits> = children.iter().map(|&c| &dp.down[c].dist).collect();
            let lens: Vec<&LenBits> = children.iter().map(|&c| &dp.down[c].lengths).collect();
            dp.down[v] = dp.combine(&branches, &lens, dp.is_leaf[v]);
        }
        // Up pass: parent -> child edges, shallowest first.
        for &v in dp.bfs_order.clone().iter() {
            let children: Vec<usize> = g
                .neighbors(v)
                .iter()
                .copied()
                .filter(|&w| dp.parent[w] == v)
                .collect();
            for &c in &children {
                let mut branches: Vec<&LenBits> = Vec::new();
                let mut lens: Vec<&LenBits> = Vec::new();
                for &o in &children {
                    if o != c {
                        branches.push(&dp.down[o].dist);
                        lens.push(&dp.down[o].lengths);
                    }
                }
                if dp.parent[v] != usize::MAX {
                    branches.push(&dp.up[v].dist);
                    lens.push(&dp.up[v].lengths);
                }
                dp.up[c] = dp.combine(&branches, &lens, dp.is_leaf[v]);
            }
        }
        dp
    }
}

/// Same set as `leaf_leaf_lengths`, via a linear-time rerooting DP over
/// bounded bitsets. Used where brute force is too slow; tested against the
/// oracle.
pub fn leaf_leaf_lengths_fast(t: &Tree) -> LengthSet {
    if t.n() == 1 {
        return [0].into_iter().collect();
    }
    let dp = PathLengthDp::build(t);
    // The whole tree is the "down" side of the root.
    dp.down[0].lengths.to_set()
}

/// Sums of lengths of two vertex-disjoint leaf-leaf paths, brute-forced over
/// all pairs of leaf pairs (single-leaf length-0 paths allowed). This is the
/// mandated oracle; `disjoint_pair_sums_fast` must agree with it.
pub fn disjoint_pair_sums(t: &Tree) -> LengthSet {
    let g = t.graph();
    let words = g.n() / 64 + 1;
    // Every leaf-leaf path as (length, vertex bitmask).
    let mut paths: Vec<(usize, Vec<u64>)> = Vec::new();
    for (i, &u) in t.leaves().iter().enumerate() {
        let mut mask = vec![0u64; words];
        mask[u / 64] |= 1 << (u % 64);
        paths.push((0, mask));
        // BFS parents from u to materialize paths to later leaves.
        let mut par = vec![usize::MAX; g.n()];
        let dist = {
            let mut dist = vec![usize::MAX; g.n()];
            dist[u] = 0;
            let mut q = std::collections::VecDeque::from([u]);
            while let Some(a) = q.pop_front() {
                for &b in g.neighbors(a) {
                    if dist[b] == usize::MAX {
                        dist[b] = dist[a] + 1;
                        par[b] = a;
                        q.push_back(b);
                    }
                }
            }
            dist
        };
        for &w in &t.leaves()[i + 1..] {
            let mut mask = vec![0u64; words];
            let mut cur = w;
            while cur != usize::MAX {
                mask[cur / 64] |= 1 << (cur % 64);
                cur = par[cur];
            }
            mask[u / 64] |= 1 << (u % 64);
            paths.push((dist[w], mask));
        }
    }
    let mut out = LengthSet::new();
    for (i, (l1, m1)) in paths.iter().enumerate() {
        for (l2, m2) in &paths[i + 1..] {
            if m1.iter().zip(m2).all(|(a, b)| a & b == 0) {
                out.insert(l1 + l2);
            }
        }
    }
    out
}

/// Same set as `disjoint_pair_sums` via the edge-split identity: two
/// vertex-disjoint paths are separated by some edge, so it suffices to
/// combine the per-side leaf-leaf length sets over all edges.
pub fn disjoint_pair_sums_fast(t: &Tree) -> LengthSet {
    if t.n() == 1 {
        return LengthSet::new();
    }
    let dp = PathLengthDp::build(t);
    let mut out = LenBits::new(2 * dp.cap);
    for v in 0..t.n() {
        if dp.parent[v] != usize::MAX {
            dp.down[v].lengths.sum_into(&dp.up[v].lengths, &mut out);
        }
    }
    out.to_set()
}

/// Closed-form leaf-leaf length set of the spine tree of an odd-even
/// sequence: every even length below twice the maximum occurs; twice the
/// maximum occurs iff the maximum is attained at an end or by a pair sum; and
/// larger even lengths occur iff attained as x_i + x_j + |i - j|.
pub fn predicted_lengths(xs: &SpineSequence) -> Result<LengthSet, TreeError> {
    if !xs.has_consistent_parity() {
        return Err(TreeError::NotOddEven);
    }
    let v = xs.values();
    let n = v.len();
    let max = *v.iter().max().unwrap() as usize;
    let mut pair_sums = BTreeSet::new();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                pair_sums.insert(v[i] as usize + v[j] as usize + i.abs_diff(j));
            }
        }
    }
    let mut out: LengthSet = (0..max).map(|m| 2 * m).collect();
    if (v[0] as usize == max || v[n - 1] as usize == max) || pair_sums.contains(&(2 * max)) {
        out.insert(2 * max);
    }
    out.extend(pair_sums.into_iter().filter(|&s| s > 2 * max));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path_tree(n: usize) -> Tree {
        let edges: Vec<_> = (0..n - 1).map(|i| (i, i + 1)).collect();
        Tree::from_graph(Graph::from_edges(n, &edges).unwrap(), None).unwrap()
    }

    pub(crate) fn claw() -> Tree {
        Tree::from_graph(
            Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap(),
            None,
        )
        .unwrap()
    }

    fn seq(values: &[u32]) -> SpineSequence {
        SpineSequence::new(values.to_vec()).unwrap()
    }

    #[test]
    fn from_graph_rejects_non_trees() {
        let cyc = Graph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert!(Tree::from_graph(cyc, None).is_err());
        let disc = Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        assert!(Tree::from_graph(disc, None).is_err());
    }

    #[test]
    fn perfect_tree_shapes() {
        assert_eq!(perfect_binary_tree(0).unwrap().n(), 1);
        let t = perfect_binary_tree(2).unwrap();
        assert_eq!(t.n(), 7);
        assert_eq!(t.leaves().len(), 4);
        assert!(perfect_binary_tree(21).is_err());
    }

    #[test]
    fn perfect_tree_leaf_lengths() {
        for d in 0..5 {
            let t = perfect_binary_tree(d).unwrap();
            let want: LengthSet = (0..=d).map(|m| 2 * m).collect();
            assert_eq!(leaf_leaf_lengths(&t), want, "depth {d}");
        }
    }

    #[test]
    fn spine_tree_23232() {
        let t = build_spine_tree(&seq(&[2, 3, 2, 3, 2])).unwrap();
        // 5 spine vertices + pendant trees of depths 1,2,1,2,1 with doubled ends.
        assert_eq!(t.n(), 5 + 3 + 3 + 7 + 3 + 7 + 3 + 3);
        assert!(is_13_tree(&t));
        assert!(is_even_tree(&t));
        assert_eq!(
            leaf_leaf_lengths(&t),
            [0, 2, 4, 6, 8].into_iter().collect::<LengthSet>()
        );
    }

    #[test]
    fn spine_tree_121() {
        let t = build_spine_tree(&seq(&[1, 2, 1])).unwrap();
        assert!(is_13_tree(&t));
        assert!(is_even_tree(&t));
    }

    #[test]
    fn spine_tree_rejects_short() {
        assert!(matches!(
            build_spine_tree(&seq(&[3])),
            Err(TreeError::SpineTooShort(1))
        ));
        assert!(SpineSequence::new(vec![1, 0]).is_err());
    }

    #[test]
    fn predicate_examples() {
        assert!(!is_13_tree(&path_tree(3)));
        assert!(is_13_tree(&claw()));
        assert!(!is_even_tree(&path_tree(2)));
        assert!(is_even_tree(&claw()));
    }

    #[test]
    fn leaf_lengths_examples() {
        assert_eq!(
            leaf_leaf_lengths(&path_tree(5)),
            [0, 4].into_iter().collect::<LengthSet>()
        );
        assert_eq!(
            leaf_leaf_lengths(&claw()),
            [0, 2].into_iter().collect::<LengthSet>()
        );
    }

    #[test]
    fn predicted_lengths_examples() {
        assert_eq!(
            predicted_lengths(&seq(&[2, 3, 2, 3, 2])).unwrap(),
            [0, 2, 4, 6, 8].into_iter().collect::<LengthSet>()
        );
        assert_eq!(
            predicted_lengths(&seq(&[1, 2, 1])).unwrap(),
            [0, 2, 4].into_iter().collect::<LengthSet>()
        );
        assert!(predicted_lengths(&seq(&[2, 2])).is_err());
    }

    #[test]
    fn disjoint_pair_sums_examples() {
        assert_eq!(
            disjoint_pair_sums(&claw()),
            [0, 2].into_iter().collect::<LengthSet>()
        );
        assert_eq!(
            disjoint_pair_sums(&path_tree(4)),
            [0].into_iter().collect::<LengthSet>()
        );
        // In the depth-2 perfect tree every length-4 path passes through both
        // children of the root, so 4 + 2 = 6 is not realizable disjointly.
        assert_eq!(
            disjoint_pair_sums(&perfect_binary_tree(2).unwrap()),
            [0, 2, 4].into_iter().collect::<LengthSet>()
        );
        let sums = disjoint_pair_sums(&perfect_binary_tree(3).unwrap());
        for want in [0, 2, 4, 6, 8] {
            assert!(sums.contains(&want), "missing {want} in {sums:?}");
        }
    }

    #[test]
    fn fast_variants_agree_with_oracles() {
        let mut corpus = vec![claw(), path_tree(2), path_tree(7), perfect_binary_tree(3).unwrap()];
        for values in [
            vec![1, 2],
            vec![1, 2, 1],
            vec![3, 2, 3],
            vec![1, 2, 3, 2],
            vec![2, 3, 2, 3, 2],
            vec![1, 4, 1],
        ] {
            corpus.push(build_spine_tree(&seq(&values)).unwrap());
        }
        corpus.push(bollobas_brightwell_tree(2).unwrap());
        for t in &corpus {
            assert_eq!(leaf_leaf_lengths_fast(t), leaf_leaf_lengths(t));
            assert_eq!(disjoint_pair_sums_fast(t), disjoint_pair_sums(t));
        }
    }

    #[test]
    fn predicted_matches_built_tree_small() {
        // Lemma mechanization at small scale; the acceptance suite widens this.
        for values in [
            vec![1, 2],
            vec![3, 2],
            vec![1, 2, 1],
            vec![3, 2, 3],
            vec![1, 4, 3, 2],
        ] {
            let s = seq(&values);
            let t = build_spine_tree(&s).unwrap();
            assert_eq!(
                predicted_lengths(&s).unwrap(),
                leaf_leaf_lengths(&t),
                "sequence {values:?}"
            );
        }
    }

    #[test]
    fn even_tree_lengths_are_even() {
        for values in [vec![1, 2, 1], vec![3, 2, 1], vec![1, 2, 3, 4]] {
            let t = build_spine_tree(&seq(&values)).unwrap();
            if is_even_tree(&t) {
                assert!(leaf_leaf_lengths(&t).iter().all(|l| l % 2 == 0));
            }
        }
    }

    #[test]
    fn bb_tree_is_13() {
        let t = bollobas_brightwell_tree(3).unwrap();
        assert!(is_13_tree(&t));
        assert!(is_even_tree(&t));
    }
}
