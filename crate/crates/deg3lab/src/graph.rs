//! Simple undirected graphs with dense integer labels, the 3-core, and the
//! degree 3-criticality machinery.

use std::collections::VecDeque;
use std::fmt::Write as _;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("edge ({u}, {v}) out of range for a graph on {n} vertices")]
    EdgeOutOfRange { u: usize, v: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge ({u}, {v})")]
    DuplicateEdge { u: usize, v: usize },
    #[error("graph is not degree 3-critical")]
    NotDegree3Critical,
    #[error("isomorphism search refused: {n} vertices exceeds the limit of {limit}")]
    IsomorphismTooLarge { n: usize, limit: usize },
    #[error("edge-list parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// A simple undirected graph on vertices `0..n`. Adjacency lists are kept
/// sorted and symmetric; self-loops and parallel edges are rejected at
/// construction. Immutable after construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
}

impl Graph {
    pub fn empty(n: usize) -> Graph {
        Graph {
            adj: vec![Vec::new(); n],
        }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Graph, GraphError> {
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(GraphError::EdgeOutOfRange { u, v, n });
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            if adj[u].contains(&v) {
                return Err(GraphError::DuplicateEdge { u, v });
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Ok(Graph { adj })
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|a| a.len()).sum::<usize>() / 2
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    pub fn min_degree(&self) -> usize {
        self.adj.iter().map(|a| a.len()).min().unwrap_or(0)
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(|a| a.len()).max().unwrap_or(0)
    }

    /// Edges as (u, v) pairs with u < v, lexicographically sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for u in 0..self.n() {
            for &v in &self.adj[u] {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn degree_sequence(&self) -> Vec<usize> {
        let mut degs: Vec<usize> = self.adj.iter().map(|a| a.len()).collect();
        degs.sort_unstable();
        degs
    }

    /// Induced subgraph on `keep` (sorted, deduplicated internally). Vertex
    /// `keep[i]` becomes vertex `i` of the result.
    pub fn induced_subgraph(&self, keep: &[usize]) -> Graph {
        let mut verts: Vec<usize> = keep.to_vec();
        verts.sort_unstable();
        verts.dedup();
        let mut relabel = vec![usize::MAX; self.n()];
        for (i, &v) in verts.iter().enumerate() {
            relabel[v] = i;
        }
        let mut adj = vec![Vec::new(); verts.len()];
        for (i, &v) in verts.iter().enumerate() {
            for &w in &self.adj[v] {
                if relabel[w] != usize::MAX {
                    adj[i].push(relabel[w]);
                }
            }
            adj[i].sort_unstable();
        }
        Graph { adj }
    }

    pub fn remove_vertex(&self, v: usize) -> Graph {
        let keep: Vec<usize> = (0..self.n()).filter(|&u| u != v).collect();
        self.induced_subgraph(&keep)
    }

    pub fn remove_edge(&self, u: usize, v: usize) -> Graph {
        let mut adj = self.adj.clone();
        adj[u].retain(|&w| w != v);
        adj[v].retain(|&w| w != u);
        Graph { adj }
    }

    pub fn is_connected(&self) -> bool {
        if self.n() == 0 {
            return true;
        }
        let mut seen = vec![false; self.n()];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = queue.pop_front() {
            for &w in &self.adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    queue.push_back(w);
                }
            }
        }
        count == self.n()
    }

    /// BFS distances from `src`; `usize::MAX` for unreachable vertices.
    pub fn bfs_distances(&self, src: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.n()];
        dist[src] = 0;
        let mut queue = VecDeque::from([src]);
        while let Some(u) = queue.pop_front() {
            for &w in &self.adj[u] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }
}

/// Shared edge-list text format: first line `n m`, then `m` lines `u v` with
/// `0 <= u < v < n`. Trees may append a final line `root r`.
pub fn parse_edge_list(text: &str) -> Result<(Graph, Option<usize>), GraphError> {
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty());
    let (lno, header) = lines
        .next()
        .ok_or_else(|| GraphError::Parse {
            line: 1,
            msg: "empty input".into(),
        })?;
    let parse_num = |tok: &str, line: usize| -> Result<usize, GraphError> {
        tok.parse().map_err(|_| GraphError::Parse {
            line,
            msg: format!("expected integer, got {tok:?}"),
        })
    };
    let mut header_it = header.split_whitespace();
    let n = parse_num(
        header_it.next().ok_or(GraphError::Parse {
            line: lno + 1,
            msg: "missing vertex count".into(),
        })?,
        lno + 1,
    )?;
    let m = parse_num(
        header_it.next().ok_or(GraphError::Parse {
            line: lno + 1,
            msg: "missing edge count".into(),
        })?,
        lno + 1,
    )?;
    let mut edges = Vec::with_capacity(m);
    let mut root = None;
    for (lno, line) in lines {
        let mut it = line.split_whitespace();
        let first = it.next().unwrap();
        if first == "root" {
            let r = parse_num(
                it.next().ok_or(GraphError::Parse {
                    line: lno + 1,
                    msg: "missing root vertex".into(),
                })?,
                lno + 1,
            )?;
            if r >= n {
                return Err(GraphError::Parse {
                    line: lno + 1,
                    msg: format!("root {r} out of range"),
                });
            }
            root = Some(r);
            continue;
        }
        let u = parse_num(first, lno + 1)?;
        let v = parse_num(
            it.next().ok_or(GraphError::Parse {
                line: lno + 1,
                msg: "missing edge endpoint".into(),
            })?,
            lno + 1,
        )?;
        if u >= v {
            return Err(GraphError::Parse {
                line: lno + 1,
                msg: format!("edge ({u}, {v}) violates u < v"),
            });
        }
        edges.push((u, v));
    }
    if edges.len() != m {
        return Err(GraphError::Parse {
            line: 1,
            msg: format!("header promised {m} edges, found {}", edges.len()),
        });
    }
    let g = Graph::from_edges(n, &edges)?;
    Ok((g, root))
}

pub fn write_edge_list(g: &Graph, root: Option<usize>) -> String {
    let mut out = String::new();
    writeln!(out, "{} {}", g.n(), g.edge_count()).unwrap();
    for (u, v) in g.edges() {
        writeln!(out, "{u} {v}").unwrap();
    }
    if let Some(r) = root {
        writeln!(out, "root {r}").unwrap();
    }
    out
}

/// Vertices surviving repeated deletion of vertices of degree <= 2. The
/// result is independent of deletion order.
pub fn three_core_vertices(g: &Graph) -> Vec<usize> {
    let mut deg: Vec<usize> = (0..g.n()).map(|v| g.degree(v)).collect();
    let mut removed = vec![false; g.n()];
    let mut queue: VecDeque<usize> = (0..g.n()).filter(|&v| deg[v] <= 2).collect();
    for &v in &queue {
        removed[v] = true;
    }
    while let Some(v) = queue.pop_front() {
        for &w in g.neighbors(v) {
            if !removed[w] {
                deg[w] -= 1;
                if deg[w] <= 2 {
                    removed[w] = true;
                    queue.push_back(w);
                }
            }
        }
    }
    (0..g.n()).filter(|&v| !removed[v]).collect()
}

/// Maximal induced subgraph with minimum degree >= 3 (possibly empty).
pub fn three_core(g: &Graph) -> Graph {
    g.induced_subgraph(&three_core_vertices(g))
}

/// True iff the 3-core of `g - v` is empty, i.e. deleting `v` triggers a
/// peeling cascade that wipes the whole graph.
fn core_vanishes_without(g: &Graph, v: usize) -> bool {
    let mut deg: Vec<usize> = (0..g.n()).map(|u| g.degree(u)).collect();
    let mut removed = vec![false; g.n()];
    removed[v] = true;
    for &w in g.neighbors(v) {
        deg[w] -= 1;
    }
    let mut remaining = g.n() - 1;
    let mut queue: VecDeque<usize> = (0..g.n()).filter(|&u| !removed[u] && deg[u] <= 2).collect();
    for &u in &queue {
        removed[u] = true;
    }
    remaining -= queue.len();
    while let Some(u) = queue.pop_front() {
        for &w in g.neighbors(u) {
            if !removed[w] {
                deg[w] -= 1;
                if deg[w] <= 2 {
                    removed[w] = true;
                    remaining -= 1;
                    queue.push_back(w);
                }
            }
        }
    }
    remaining == 0
}

/// A graph is degree 3-critical if it has `2n - 2` edges, minimum degree 3
/// (equivalently its 3-core is the whole graph), and no proper induced
/// subgraph of minimum degree 3. Any induced subgraph of minimum degree 3
/// avoiding a vertex `v` lies in the 3-core of `g - v`, so the last condition
/// is checked per vertex.
pub fn is_degree3_critical(g: &Graph) -> bool {
    let n = g.n();
    if n < 2 || g.edge_count() != 2 * n - 2 {
        return false;
    }
    if g.min_degree() < 3 {
        return false;
    }
    // One peeling cascade per deleted vertex, with a shortcut: if u and v are
    // adjacent and both have degree exactly 3, deleting either one peels the
    // other immediately, so three_core(g - u) = three_core(g - {u, v}) =
    // three_core(g - v). One cascade per connected component of the induced
    // degree-3 subgraph therefore covers all its vertices; only vertices of
    // degree >= 4 need individual cascades. A flat adjacency copy and
    // epoch-stamped removal marks keep the inner loop allocation-free; the
    // counterexample graphs run this on thousands of vertices.
    let mut offsets = Vec::with_capacity(n + 1);
    let mut nbrs: Vec<u32> = Vec::with_capacity(2 * g.edge_count());
    offsets.push(0u32);
    for v in 0..n {
        nbrs.extend(g.neighbors(v).iter().map(|&w| w as u32));
        offsets.push(nbrs.len() as u32);
    }
    let base_deg: Vec<u32> = (0..n).map(|v| g.degree(v) as u32).collect();
    let mut reps: Vec<u32> = (0..n as u32).filter(|&v| base_deg[v as usize] >= 4).collect();
    {
        let mut seen = vec![false; n];
        let mut stack = Vec::new();
        for v in 0..n {
            if base_deg[v] != 3 || seen[v] {
                continue;
            }
            reps.push(v as u32);
            seen[v] = true;
            stack.push(v);
            while let Some(u) = stack.pop() {
                for i in offsets[u]..offsets[u + 1] {
                    let w = nbrs[i as usize] as usize;
                    if base_deg[w] == 3 && !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
        }
    }
    let mut deg = vec![0u32; n];
    let mut removed_epoch = vec![u32::MAX; n];
    let mut queue: Vec<u32> = Vec::with_capacity(n);
    for (epoch, &v) in reps.iter().enumerate() {
        let epoch = epoch as u32;
        deg.copy_from_slice(&base_deg);
        queue.clear();
        queue.push(v);
        removed_epoch[v as usize] = epoch;
        // Minimum degree 3 was checked above, so the cascade can start from
        // v alone: no other vertex has degree <= 2 before losing neighbors.
        let mut remaining = n as u32 - 1;
        let mut head = 0;
        while head < queue.len() {
            let u = queue[head] as usize;
            head += 1;
            for i in offsets[u]..offsets[u + 1] {
                let w = nbrs[i as usize] as usize;
                if removed_epoch[w] != epoch {
                    deg[w] -= 1;
                    if deg[w] <= 2 {
                        removed_epoch[w] = epoch;
                        remaining -= 1;
                        queue.push(w as u32);
                    }
                }
            }
        }
        if remaining != 0 {
            return false;
        }
    }
    true
}

/// Witness for a proper (not necessarily induced) subgraph of minimum
/// degree 3.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub enum ProperSubgraphWitness {
    /// Induced subgraph on `vertices` has minimum degree >= 3.
    InducedCore { vertices: Vec<usize> },
    /// Deleting the edge `(u, v)` leaves a spanning subgraph of minimum
    /// degree >= 3.
    SpanningEdgeDeletion { u: usize, v: usize },
}

/// Finds a proper subgraph of minimum degree 3 if one exists.
///
/// A subgraph on a proper vertex subset of minimum degree 3 sits inside the
/// 3-core of `g - v` for some `v`. A proper spanning subgraph of minimum
/// degree 3 exists iff the graph itself has minimum degree >= 3 and some edge
/// joins two vertices of degree >= 4 (removing any further edges only lowers
/// degrees).
pub fn proper_subgraph_min_degree3_witness(g: &Graph) -> Option<ProperSubgraphWitness> {
    for v in 0..g.n() {
        if !core_vanishes_without(g, v) {
            let sub = g.remove_vertex(v);
            let core = three_core_vertices(&sub);
            // translate labels back into g
            let vertices = core
                .into_iter()
                .map(|u| if u >= v { u + 1 } else { u })
                .collect();
            return Some(ProperSubgraphWitness::InducedCore { vertices });
        }
    }
    if g.min_degree() >= 3 {
        for (u, v) in g.edges() {
            if g.degree(u) >= 4 && g.degree(v) >= 4 {
                return Some(ProperSubgraphWitness::SpanningEdgeDeletion { u, v });
            }
        }
    }
    None
}

pub fn has_proper_subgraph_min_degree3(g: &Graph) -> bool {
    proper_subgraph_min_degree3_witness(g).is_some()
}

/// Greedy minimum-degree peeling order of a degree 3-critical graph, with
/// forward degrees following the pattern (3, 2, ..., 2, 1, 0). For n >= 7 the
/// last four positions are rearranged so that the final vertex has degree >= 4
/// in the whole graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CriticalOrdering {
    pub order: Vec<usize>,
    pub forward_degrees: Vec<usize>,
}

fn forward_degrees_of(g: &Graph, order: &[usize]) -> Vec<usize> {
    let mut pos = vec![0usize; g.n()];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    order
        .iter()
        .map(|&v| g.neighbors(v).iter().filter(|&&w| pos[w] > pos[v]).count())
        .collect()
}

fn is_ordering_pattern(fd: &[usize]) -> bool {
    let n = fd.len();
    if n < 2 {
        return false;
    }
    fd[0] == 3
        && fd[n - 1] == 0
        && fd[n - 2] == 1
        && fd[1..n - 2].iter().all(|&d| d == 2)
}

pub fn critical_ordering(g: &Graph) -> Result<CriticalOrdering, GraphError> {
    if !is_degree3_critical(g) {
        return Err(GraphError::NotDegree3Critical);
    }
    let n = g.n();
    // Greedy peeling, ties broken by smallest label.
    let mut deg: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut removed = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let v = (0..n)
            .filter(|&v| !removed[v])
            .min_by_key(|&v| (deg[v], v))
            .unwrap();
        removed[v] = true;
        order.push(v);
        for &w in g.neighbors(v) {
            if !removed[w] {
                deg[w] -= 1;
            }
        }
    }
    let mut fd = forward_degrees_of(g, &order);
    if n >= 7 && g.degree(order[n - 1]) < 4 {
        // Rearrange the last four vertices. Among the last six, some vertex v
        // of the last four has degree >= 4 there; the last four induce a K4
        // minus an edge, and putting a degree-2 vertex of it first keeps the
        // forward-degree pattern intact while ending on v.
        let last6: Vec<usize> = order[n - 6..].to_vec();
        let last4: Vec<usize> = order[n - 4..].to_vec();
        let sub6 = |v: usize| last6.iter().filter(|&&w| g.has_edge(v, w)).count();
        let sub4 = |v: usize| last4.iter().filter(|&&w| g.has_edge(v, w)).count();
        let mut done = false;
        'outer: for &v in &{
            let mut c: Vec<usize> = last4.iter().copied().filter(|&v| sub6(v) >= 4).collect();
            c.sort_unstable();
            c
        } {
            let mut xs: Vec<usize> = last4
                .iter()
                .copied()
                .filter(|&u| u != v && sub4(u) == 2)
                .collect();
            xs.sort_unstable();
            for &x3 in &xs {
                let mut rest: Vec<usize> = last4
                    .iter()
                    .copied()
                    .filter(|&u| u != v && u != x3)
                    .collect();
                rest.sort_unstable();
                for (a, b) in [(rest[0], rest[1]), (rest[1], rest[0])] {
                    let mut cand = order[..n - 4].to_vec();
                    cand.extend([x3, a, b, v]);
                    let cand_fd = forward_degrees_of(g, &cand);
                    if is_ordering_pattern(&cand_fd) && g.degree(v) >= 4 {
                        order = cand;
                        fd = cand_fd;
                        done = true;
                        break 'outer;
                    }
                }
            }
        }
        debug_assert!(done, "ordering rearrangement failed");
    }
    debug_assert!(is_ordering_pattern(&fd));
    Ok(CriticalOrdering {
        order,
        forward_degrees: fd,
    })
}

pub const DEFAULT_ISOMORPHISM_LIMIT: usize = 12;

pub fn is_isomorphic(g1: &Graph, g2: &Graph) -> Result<bool, GraphError> {
    is_isomorphic_with_limit(g1, g2, DEFAULT_ISOMORPHISM_LIMIT)
}

/// Exact isomorphism by degree-sequence filtering plus backtracking over
/// label bijections. Intended for small graphs only.
pub fn is_isomorphic_with_limit(
    g1: &Graph,
    g2: &Graph,
    limit: usize,
) -> Result<bool, GraphError> {
    let n = g1.n();
    if n > limit || g2.n() > limit {
        return Err(GraphError::IsomorphismTooLarge {
            n: n.max(g2.n()),
            limit,
        });
    }
    if n != g2.n() || g1.edge_count() != g2.edge_count() {
        return Ok(false);
    }
    if g1.degree_sequence() != g2.degree_sequence() {
        return Ok(false);
    }
    // Map vertices of g1 in descending degree order.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| std::cmp::Reverse(g1.degree(v)));
    let mut mapping = vec![usize::MAX; n]; // g1 -> g2
    let mut used = vec![false; n];
    fn backtrack(
        g1: &Graph,
        g2: &Graph,
        order: &[usize],
        idx: usize,
        mapping: &mut [usize],
        used: &mut [bool],
    ) -> bool {
        if idx == order.len() {
            return true;
        }
        let v = order[idx];
        for w in 0..g2.n() {
            if used[w] || g1.degree(v) != g2.degree(w) {
                continue;
            }
            let consistent = order[..idx].iter().all(|&u| {
                g1.has_edge(v, u) == g2.has_edge(w, mapping[u])
            });
            if consistent {
                mapping[v] = w;
                used[w] = true;
                if backtrack(g1, g2, order, idx + 1, mapping, used) {
                    return true;
                }
                mapping[v] = usize::MAX;
                used[w] = false;
            }
        }
        false
    }
    Ok(backtrack(g1, g2, &order, 0, &mut mapping, &mut used))
}
