//! The acceptance suite: one function per criterion, shared by the CLI
//! `acceptance` subcommand and the integration test target. Each criterion is
//! self-contained and reports pass/fail with a human-readable summary.

use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::family::{classify_family_g, glue_h, wheel, Classification};
use crate::graph::{has_proper_subgraph_min_degree3, is_degree3_critical, Graph};
use crate::sequences::{
    is_k_avoiding_periodic, is_k_avoiding_window, search_k_avoiding, step_up,
    twenty_avoiding_window, Verdict, DEFAULT_SEARCH_BUDGET,
};
use crate::spectra::{
    contains_cycle_of_length, counterexample_tree, cycle_spectrum_exhaustive,
    cycle_spectrum_via_tree, g_of_t, is_pancyclic, longest_cycle_length, SpectrumError,
    DEFAULT_CYCLE_BUDGET,
};
use crate::trees::{
    build_spine_tree, leaf_leaf_lengths, predicted_lengths, SpineSequence, Tree,
};

pub const CRITERION_COUNT: usize = 8;

#[derive(Debug, Clone, Serialize)]
pub struct CriterionResult {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    /// True when the criterion passed via its documented fallback (e.g. the
    /// k = 18 search downgrading to bounded periodic enumeration) or when
    /// budget-limited cases were excluded.
    pub partial: bool,
    pub details: String,
    pub millis: u128,
}

/// Cycle-search budget, overridable through the DEG3LAB_BUDGET variable.
pub fn default_budget() -> u64 {
    std::env::var("DEG3LAB_BUDGET")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(DEFAULT_CYCLE_BUDGET)
}

pub fn criterion_names() -> [&'static str; CRITERION_COUNT] {
    [
        "counterexample family is degree 3-critical with no 23-cycle (n = 2..=100)",
        "18-avoiding sequences do not exist; 20-avoiding sequences do",
        "tree-based cycle spectrum equals exhaustive search on the small corpus",
        "predicted leaf-leaf lengths equal BFS lengths (odd-even n <= 6, x_i <= 5)",
        "every degree 3-critical graph on 6 or 7 vertices has cycles 3, 4, 5, 6",
        "family members on 6 or 7 vertices classify as wheel/glued and are pancyclic",
        "stepping up the 20-avoiding window verifies; 22- and 24-avoiding exist",
        "corpus longest cycles reach floor(log2 n)",
    ]
}

/// Named sub-suites for the CLI; `None` means an unknown name.
pub fn suite_ids(name: &str) -> Option<Vec<usize>> {
    match name {
        "all" => Some((1..=CRITERION_COUNT).collect()),
        "counterexample" => Some(vec![1]),
        "sequences" => Some(vec![2, 7]),
        "trees" => Some(vec![3, 4]),
        "small-exhaustive" => Some(vec![5, 6]),
        "corpus" => Some(vec![8]),
        _ => None,
    }
}

pub fn run_criterion(id: usize) -> CriterionResult {
    let start = Instant::now();
    let name = criterion_names()[id - 1];
    let (passed, partial, details) = match id {
        1 => criterion_counterexamples(),
        2 => criterion_sequence_theorems(),
        3 => criterion_cycle_lengths_lemma(),
        4 => criterion_path_lengths_lemma(),
        5 => criterion_small_exhaustive_cycles(),
        6 => criterion_structure_theorem(),
        7 => criterion_stepping_up(),
        8 => criterion_corpus_longest_cycles(),
        _ => panic!("criterion id {id} out of range"),
    };
    CriterionResult {
        id,
        name,
        passed,
        partial,
        details,
        millis: start.elapsed().as_millis(),
    }
}

pub fn run_suite(ids: &[usize]) -> Vec<CriterionResult> {
    ids.iter().map(|&id| run_criterion(id)).collect()
}

fn criterion_counterexamples() -> (bool, bool, String) {
    let failures: Vec<String> = (2..=100usize)
        .into_par_iter()
        .filter_map(|n| {
            let t = match counterexample_tree(n) {
                Ok(t) => t,
                Err(e) => return Some(format!("n={n}: {e}")),
            };
            if !is_degree3_critical(&g_of_t(&t)) {
                return Some(format!("n={n}: not degree 3-critical"));
            }
            match cycle_spectrum_via_tree(&t) {
                Ok(spec) if spec.contains(&23) => Some(format!("n={n}: has a 23-cycle")),
                Ok(_) => None,
                Err(e) => Some(format!("n={n}: {e}")),
            }
        })
        .collect();
    if failures.is_empty() {
        let top = counterexample_tree(100).unwrap().n() + 2;
        (true, false, format!("99 graphs checked, largest on {top} vertices"))
    } else {
        (false, false, failures.join("; "))
    }
}

fn criterion_sequence_theorems() -> (bool, bool, String) {
    let window = twenty_avoiding_window(1, 3 * 24 + 20);
    match is_k_avoiding_window(&window, 20) {
        Ok(true) => {}
        _ => return (false, false, "period-24 window failed 20-avoidance".into()),
    }
    let s20 = match search_k_avoiding(20, DEFAULT_SEARCH_BUDGET) {
        Ok(o) => o,
        Err(e) => return (false, false, format!("k=20 search error: {e}")),
    };
    if s20.verdict != Verdict::Exists {
        return (false, false, format!("k=20 search verdict {:?}", s20.verdict));
    }
    let witness = s20.witness_period.as_deref().unwrap_or(&[]);
    if !is_k_avoiding_periodic(witness, 20).unwrap_or(false) {
        return (false, false, "k=20 witness failed re-verification".into());
    }
    let s18 = match search_k_avoiding(18, 1_000_000_000) {
        Ok(o) => o,
        Err(e) => return (false, false, format!("k=18 search error: {e}")),
    };
    match s18.verdict {
        Verdict::NotExists => (
            true,
            false,
            format!(
                "k=18 NotExists after {} states; k=20 witness period {}",
                s18.states_explored,
                witness.len()
            ),
        ),
        Verdict::Exists => (false, false, "k=18 search found a witness".into()),
        Verdict::Inconclusive => {
            // Documented fallback: bounded periodic enumeration.
            match no_k_avoiding_period_up_to(18, 48) {
                Ok(true) => (
                    true,
                    true,
                    "k=18 budget exhausted; NotExists confirmed for periods <= 48 only".into(),
                ),
                Ok(false) => (false, false, "periodic enumeration found an 18-avoiding sequence".into()),
                Err(e) => (false, false, format!("k=18 fallback failed: {e}")),
            }
        }
    }
}

/// Fallback for the k = 18 criterion: true iff no k-avoiding sequence of
/// period at most `max_period` exists, by depth-limited extension of every
/// conflict-free prefix with on-path cycle detection.
fn no_k_avoiding_period_up_to(k: u32, max_period: usize) -> Result<bool, String> {
    let half = k / 2;
    let window = (k - 2) as usize;
    let max_len = max_period + window;
    fn dfs(seq: &mut Vec<u32>, k: u32, half: u32, window: usize, max_len: usize) -> bool {
        if seq.len() > window {
            // A repeat of the last full window closes a periodic witness.
            let tail = &seq[seq.len() - window..];
            for start in 0..seq.len() - window {
                if &seq[start..start + window] == tail {
                    return true;
                }
            }
        }
        if seq.len() == max_len {
            return false;
        }
        let parity = 1 - seq.last().unwrap() % 2;
        for b in 1..=half {
            if b % 2 != parity {
                continue;
            }
            let start = seq.len().saturating_sub(window);
            let clash = seq[start..]
                .iter()
                .rev()
                .enumerate()
                .any(|(back, &a)| a + b + back as u32 + 1 == k);
            if clash {
                continue;
            }
            seq.push(b);
            if dfs(seq, k, half, window, max_len) {
                seq.pop();
                return true;
            }
            seq.pop();
        }
        false
    }
    for seed in 1..=half {
        let mut seq = vec![seed];
        if dfs(&mut seq, k, half, window, max_len) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// All spine sequences with x_i = i (mod 2), lengths 2..=max_n, values <= max_x.
fn odd_even_sequences(max_n: usize, max_x: u32) -> Vec<SpineSequence> {
    fn extend(cur: &mut Vec<u32>, max_n: usize, max_x: u32, out: &mut Vec<SpineSequence>) {
        if cur.len() >= 2 {
            out.push(SpineSequence::new(cur.clone()).unwrap());
        }
        if cur.len() == max_n {
            return;
        }
        let parity = (cur.len() as u32 + 1) % 2;
        for x in 1..=max_x {
            if x % 2 == parity {
                cur.push(x);
                extend(cur, max_n, max_x, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    extend(&mut Vec::new(), max_n, max_x, &mut out);
    out
}

fn claw() -> Tree {
    Tree::from_graph(Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap(), None).unwrap()
}

fn criterion_cycle_lengths_lemma() -> (bool, bool, String) {
    let budget = default_budget();
    let mut corpus = vec![claw()];
    for xs in odd_even_sequences(4, 3) {
        let t = build_spine_tree(&xs).expect("corpus sequences are valid");
        if t.n() <= 14 {
            corpus.push(t);
        }
    }
    let failures: Vec<String> = corpus
        .par_iter()
        .filter_map(|t| {
            let via_tree = match cycle_spectrum_via_tree(t) {
                Ok(s) => s,
                Err(e) => return Some(format!("{} vertices: {e}", t.n())),
            };
            match cycle_spectrum_exhaustive(&g_of_t(t), budget) {
                Ok(ex) if ex.lengths == via_tree => None,
                Ok(ex) => Some(format!(
                    "{} vertices: tree {:?} vs exhaustive {:?}",
                    t.n(),
                    via_tree,
                    ex.lengths
                )),
                Err(e) => Some(format!("{} vertices: {e}", t.n())),
            }
        })
        .collect();
    if failures.is_empty() {
        (true, false, format!("{} trees agree", corpus.len()))
    } else {
        (false, false, failures.join("; "))
    }
}

fn criterion_path_lengths_lemma() -> (bool, bool, String) {
    let corpus = odd_even_sequences(6, 5);
    let failures: Vec<String> = corpus
        .par_iter()
        .filter_map(|xs| {
            let predicted = match predicted_lengths(xs) {
                Ok(p) => p,
                Err(e) => return Some(format!("{:?}: {e}", xs.values())),
            };
            let t = match build_spine_tree(xs) {
                Ok(t) => t,
                Err(e) => return Some(format!("{:?}: {e}", xs.values())),
            };
            let actual = leaf_leaf_lengths(&t);
            if predicted == actual {
                None
            } else {
                Some(format!(
                    "{:?}: predicted {predicted:?} vs actual {actual:?}",
                    xs.values()
                ))
            }
        })
        .collect();
    if failures.is_empty() {
        (true, false, format!("{} sequences agree", corpus.len()))
    } else {
        (false, false, failures.join("; "))
    }
}

/// All labeled graphs on `n` vertices with exactly `e` edges, as edge masks
/// over the ordered edge list of K_n.
fn complete_graph_edges(n: usize) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            edges.push((u, v));
        }
    }
    edges
}

fn edge_subset_masks(total: u32, take: u32) -> Vec<u32> {
    (0u32..1 << total).filter(|m| m.count_ones() == take).collect()
}

fn graph_from_mask(n: usize, edges: &[(usize, usize)], mask: u32) -> Graph {
    let chosen: Vec<(usize, usize)> = edges
        .iter()
        .enumerate()
        .filter(|&(i, _)| mask & (1 << i) != 0)
        .map(|(_, &e)| e)
        .collect();
    Graph::from_edges(n, &chosen).unwrap()
}

fn criterion_small_exhaustive_cycles() -> (bool, bool, String) {
    let budget = default_budget();
    let mut critical_total = 0usize;
    for n in [6usize, 7] {
        let edges = complete_graph_edges(n);
        let masks = edge_subset_masks(edges.len() as u32, (2 * n - 2) as u32);
        let results: Vec<Result<bool, String>> = masks
            .par_iter()
            .map(|&mask| {
                let g = graph_from_mask(n, &edges, mask);
                if !is_degree3_critical(&g) {
                    return Ok(false);
                }
                for len in 3..=6 {
                    match contains_cycle_of_length(&g, len, budget) {
                        Ok(Some(_)) => {}
                        Ok(None) => {
                            return Err(format!("n={n} mask={mask:#x}: missing a {len}-cycle"))
                        }
                        Err(e) => return Err(format!("n={n} mask={mask:#x}: {e}")),
                    }
                }
                Ok(true)
            })
            .collect();
        for r in results {
            match r {
                Ok(true) => critical_total += 1,
                Ok(false) => {}
                Err(msg) => return (false, false, msg),
            }
        }
    }
    (
        true,
        false,
        format!("{critical_total} degree 3-critical graphs all contain cycles 3..=6"),
    )
}

fn criterion_structure_theorem() -> (bool, bool, String) {
    let budget = default_budget();
    let mut member_total = 0usize;
    for n in [6usize, 7] {
        let edges = complete_graph_edges(n);
        let masks = edge_subset_masks(edges.len() as u32, (2 * n - 2) as u32);
        let results: Vec<Result<bool, String>> = masks
            .par_iter()
            .map(|&mask| {
                let g = graph_from_mask(n, &edges, mask);
                if has_proper_subgraph_min_degree3(&g) {
                    return Ok(false);
                }
                match classify_family_g(&g) {
                    Ok(Classification::Wheel { .. }) | Ok(Classification::Glued { .. }) => {}
                    Ok(other) => {
                        return Err(format!("n={n} mask={mask:#x}: classified {other:?}"))
                    }
                    Err(e) => return Err(format!("n={n} mask={mask:#x}: {e}")),
                }
                match is_pancyclic(&g, budget) {
                    Ok(true) => Ok(true),
                    Ok(false) => Err(format!("n={n} mask={mask:#x}: member not pancyclic")),
                    Err(e) => Err(format!("n={n} mask={mask:#x}: {e}")),
                }
            })
            .collect();
        for r in results {
            match r {
                Ok(true) => member_total += 1,
                Ok(false) => {}
                Err(msg) => return (false, false, msg),
            }
        }
    }
    (
        true,
        false,
        format!("{member_total} family members classified and pancyclic"),
    )
}

fn criterion_stepping_up() -> (bool, bool, String) {
    let window = twenty_avoiding_window(1, 3 * 24 + 20);
    for l in 1..=3u32 {
        let stepped = match step_up(&window, 20, l) {
            Ok(w) => w,
            Err(e) => return (false, false, format!("step l={l}: {e}")),
        };
        match is_k_avoiding_window(&stepped, 20 + 2 * l) {
            Ok(true) => {}
            _ => return (false, false, format!("stepped window fails {}-avoidance", 20 + 2 * l)),
        }
    }
    for k in [22u32, 24] {
        let out = match search_k_avoiding(k, DEFAULT_SEARCH_BUDGET) {
            Ok(o) => o,
            Err(e) => return (false, false, format!("k={k} search error: {e}")),
        };
        if out.verdict != Verdict::Exists {
            return (false, false, format!("k={k} search verdict {:?}", out.verdict));
        }
        let witness = out.witness_period.as_deref().unwrap_or(&[]);
        if !is_k_avoiding_periodic(witness, k).unwrap_or(false) {
            return (false, false, format!("k={k} witness failed re-verification"));
        }
    }
    (true, false, "3 step-ups verified; k=22 and k=24 witnesses found".into())
}

fn criterion_corpus_longest_cycles() -> (bool, bool, String) {
    let budget = default_budget();
    // Graphs checked by exhaustive downward search.
    let mut searched: Vec<(String, Graph)> = Vec::new();
    for n in 4..=12 {
        searched.push((format!("wheel({n})"), wheel(n).unwrap()));
    }
    for i in 4..=8 {
        for j in i..=8 {
            for swap in [false, true] {
                searched.push((format!("glue({i},{j},{swap})"), glue_h(i, j, swap).unwrap()));
            }
        }
    }
    // Tree-backed graphs, where the spectrum is polynomial.
    let mut tree_backed: Vec<(String, Tree)> = vec![("claw".into(), claw())];
    for xs in odd_even_sequences(4, 3) {
        let label = format!("T{:?}", xs.values());
        tree_backed.push((label, build_spine_tree(&xs).unwrap()));
    }
    let mut n = 2;
    while let Ok(t) = counterexample_tree(n) {
        if t.n() > 30 {
            break;
        }
        tree_backed.push((format!("counterexample({n})"), t));
        n += 1;
    }

    let mut checked = 0usize;
    let mut excluded = Vec::new();
    for (label, g) in &searched {
        debug_assert!(is_degree3_critical(g), "{label}");
        let bound = (g.n() as u32).ilog2() as usize;
        match longest_cycle_length(g, budget) {
            Ok(len) if len >= bound => checked += 1,
            Ok(len) => {
                return (false, false, format!("{label}: longest {len} < floor(log2 n) = {bound}"))
            }
            Err(SpectrumError::Inconclusive { .. }) => excluded.push(label.clone()),
            Err(e) => return (false, false, format!("{label}: {e}")),
        }
    }
    for (label, t) in &tree_backed {
        let g = g_of_t(t);
        debug_assert!(is_degree3_critical(&g), "{label}");
        let bound = (g.n() as u32).ilog2() as usize;
        match cycle_spectrum_via_tree(t) {
            Ok(spec) => {
                let longest = spec.iter().max().copied().unwrap_or(0);
                if longest >= bound {
                    checked += 1;
                } else {
                    return (
                        false,
                        false,
                        format!("{label}: longest {longest} < floor(log2 n) = {bound}"),
                    );
                }
            }
            Err(e) => return (false, false, format!("{label}: {e}")),
        }
    }
    let partial = !excluded.is_empty();
    let details = if partial {
        format!("{checked} graphs verified; excluded as inconclusive: {excluded:?}")
    } else {
        format!("{checked} graphs verified")
    };
    (true, partial, details)
}
