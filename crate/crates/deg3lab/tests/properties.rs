//! Randomized and exhaustive property tests against independent oracles.
//! All randomness is seeded, so every run checks the same cases.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use deg3lab::graph::{
    has_proper_subgraph_min_degree3, three_core, three_core_vertices, Graph,
};
use deg3lab::sequences::{is_k_avoiding_window, step_up, twenty_avoiding_window};
use deg3lab::trees::{
    build_spine_tree, is_13_tree, is_even_tree, leaf_leaf_lengths, leaf_leaf_lengths_fast,
    SpineSequence, Tree,
};

fn random_graph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, &edges).expect("random edges are simple")
}

/// Peel vertices of degree < 3 one at a time in a random order until none
/// remain. The survivors must not depend on the order.
fn three_core_random_peel(g: &Graph, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let mut alive: BTreeSet<usize> = (0..g.n()).collect();
    loop {
        let low: Vec<usize> = alive
            .iter()
            .copied()
            .filter(|&v| g.neighbors(v).iter().filter(|u| alive.contains(u)).count() < 3)
            .collect();
        match low.choose(rng) {
            Some(&v) => {
                alive.remove(&v);
            }
            None => return alive.into_iter().collect(),
        }
    }
}

#[test]
fn three_core_is_order_independent() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for trial in 0..100 {
        let n = rng.gen_range(1..=15);
        let p = rng.gen_range(0.1..0.7);
        let g = random_graph(&mut rng, n, p);
        let expected = three_core_vertices(&g);
        for _ in 0..3 {
            let peeled = three_core_random_peel(&g, &mut rng);
            assert_eq!(peeled, expected, "trial {trial}: peel order changed the core");
        }
        let core = three_core(&g);
        assert!(core.n() == 0 || core.min_degree() >= 3);
    }
}

fn edge_pairs(n: usize) -> Vec<(usize, usize)> {
    let mut pairs = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            pairs.push((u, v));
        }
    }
    pairs
}

#[test]
fn dense_graphs_have_nonempty_core() {
    // Exhaustively for 2 <= n <= 6: e >= 2n - 2 forces a nonempty 3-core.
    for n in 2..=6usize {
        let pairs = edge_pairs(n);
        let need = 2 * n - 2;
        for mask in 0u32..(1 << pairs.len()) {
            if (mask.count_ones() as usize) < need {
                continue;
            }
            let edges: Vec<(usize, usize)> = pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &e)| e)
                .collect();
            let g = Graph::from_edges(n, &edges).unwrap();
            assert!(
                !three_core_vertices(&g).is_empty(),
                "n={n} mask={mask:b} has {} edges but empty core",
                edges.len()
            );
        }
    }
    // Randomly for n <= 15: top up sparse samples to the edge threshold.
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..200 {
        let n = rng.gen_range(4..=15);
        let mut pairs = edge_pairs(n);
        pairs.shuffle(&mut rng);
        let take = rng.gen_range(2 * n - 2..=pairs.len());
        let g = Graph::from_edges(n, &pairs[..take]).unwrap();
        assert!(!three_core_vertices(&g).is_empty());
    }
}

/// Independent oracle: a proper subgraph of minimum degree 3 exists iff some
/// proper induced subgraph has a nonempty 3-core, or the graph itself has
/// minimum degree 3 and stays that way after deleting some single edge.
fn proper_subgraph_oracle(g: &Graph) -> bool {
    let n = g.n();
    for mask in 0u32..(1 << n) - 1 {
        let keep: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
        if !three_core_vertices(&g.induced_subgraph(&keep)).is_empty() {
            return true;
        }
    }
    g.min_degree() >= 3
        && g.edges()
            .iter()
            .any(|&(u, v)| g.remove_edge(u, v).min_degree() >= 3)
}

#[test]
fn proper_subgraph_matches_oracle_exhaustive_n6() {
    let pairs = edge_pairs(6);
    for mask in 0u32..(1 << pairs.len()) {
        let edges: Vec<(usize, usize)> = pairs
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &e)| e)
            .collect();
        let g = Graph::from_edges(6, &edges).unwrap();
        assert_eq!(
            has_proper_subgraph_min_degree3(&g),
            proper_subgraph_oracle(&g),
            "disagreement on mask {mask:b}"
        );
    }
}

#[test]
fn proper_subgraph_matches_oracle_random_n9() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..200 {
        let n = rng.gen_range(4..=9);
        let p = rng.gen_range(0.2..0.9);
        let g = random_graph(&mut rng, n, p);
        assert_eq!(has_proper_subgraph_min_degree3(&g), proper_subgraph_oracle(&g));
    }
}

/// A random rooted binary tree whose leaves all sit at even depth: internal
/// vertices get exactly two children, odd-depth vertices are always internal.
fn random_even_binary_tree(rng: &mut ChaCha8Rng, max_depth: usize) -> Tree {
    let mut edges = Vec::new();
    let mut next = 1usize;
    let mut frontier = vec![(0usize, 0usize)]; // (vertex, depth)
    while let Some((v, d)) = frontier.pop() {
        let must_leaf = d + 2 > max_depth;
        let is_leaf = d > 0 && d % 2 == 0 && (must_leaf || rng.gen_bool(0.5));
        if is_leaf {
            continue;
        }
        for _ in 0..2 {
            edges.push((v, next));
            frontier.push((next, d + 1));
            next += 1;
        }
    }
    Tree::from_graph(Graph::from_edges(next, &edges).unwrap(), Some(0)).unwrap()
}

#[test]
fn even_binary_trees_realize_short_even_lengths() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for _ in 0..200 {
        let t = random_even_binary_tree(&mut rng, 6);
        let depth = t.graph().bfs_distances(0);
        let m = t.leaves().iter().map(|&v| depth[v]).min().unwrap();
        let lengths = leaf_leaf_lengths(&t);
        for len in (0..=2 * m).step_by(2) {
            assert!(lengths.contains(&len), "missing length {len}, min depth {m}");
        }
        assert_eq!(lengths, leaf_leaf_lengths_fast(&t));
    }
}

#[test]
fn stepping_up_preserves_avoidance() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for _ in 0..100 {
        let start = rng.gen_range(-60..60i64);
        let len = rng.gen_range(5..=60usize);
        let w = twenty_avoiding_window(start, len);
        assert!(is_k_avoiding_window(&w, 20).unwrap());
        for l in 1..=4u32 {
            let up = step_up(&w, 20, l).unwrap();
            assert!(is_k_avoiding_window(&up, 20 + 2 * l).unwrap());
        }
    }
}

#[test]
fn period_prefix_trees_avoid_length_twenty() {
    use deg3lab::sequences::twenty_avoiding_term;
    for n in 2..=48usize {
        let values: Vec<u32> = (1..=n as i64).map(twenty_avoiding_term).collect();
        let xs = SpineSequence::new(values).unwrap();
        let t = build_spine_tree(&xs).unwrap();
        assert!(is_13_tree(&t), "n={n}");
        assert!(is_even_tree(&t), "n={n}");
        assert!(!leaf_leaf_lengths_fast(&t).contains(&20), "n={n}");
    }
}
