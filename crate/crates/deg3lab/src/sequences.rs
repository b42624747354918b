//! k-avoiding odd-even sequences: the conflict predicate, fault lines, the
//! period-24 witness, the stepping-up transform, and an exhaustive
//! transfer-state search deciding whether a k-avoiding sequence exists.
//!
//! A conflict a_i + a_j + |i - j| = k with positive values forces
//! |i - j| <= k - 2, so the constraint has finite range. A two-sided
//! k-avoiding sequence therefore exists iff the transfer graph over
//! conflict-free windows of length k - 2 (edges: one-step extensions that
//! introduce no new conflict) contains a directed cycle: a one-sided infinite
//! sequence over finitely many states revisits a state, and unrolling that
//! cycle yields a two-sided periodic sequence.

use std::collections::{HashMap, HashSet};

use serde::Serialize;
use thiserror::Error;

pub const DEFAULT_SEARCH_BUDGET: u64 = 1_000_000_000;

#[derive(Debug, Error)]
pub enum SequenceError {
    #[error("k must be even and >= 2, got {0}")]
    BadK(u32),
    #[error("k must be even and >= 4 for the search, got {0}")]
    BadSearchK(u32),
    #[error("sequence values must be positive")]
    NonPositiveValue,
    #[error("window is not odd-even at position {index} (value {value})")]
    NotOddEven { index: i64, value: u32 },
    #[error("d = {d} out of range 1..={max}")]
    FaultLineRange { d: u32, max: u32 },
    #[error("window was not verified {k}-avoiding before stepping up")]
    NotVerifiedAvoiding { k: u32 },
    #[error("periodic witness must have even length, got {0}")]
    OddPeriod(usize),
    #[error("periodic witness values do not alternate parity at position {0}")]
    ParityInconsistent(usize),
    #[error("window and fault-line predicates disagree; this is a bug")]
    PredicateMismatch,
}

/// A finite contiguous slice of a two-sided integer sequence. `offset` is the
/// index of the first entry; entries satisfy a_i = i (mod 2).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OddEvenWindow {
    offset: i64,
    values: Vec<u32>,
}

impl OddEvenWindow {
    pub fn new(offset: i64, values: Vec<u32>) -> Result<OddEvenWindow, SequenceError> {
        for (t, &x) in values.iter().enumerate() {
            if x == 0 {
                return Err(SequenceError::NonPositiveValue);
            }
            let index = offset + t as i64;
            if x as i64 % 2 != index.rem_euclid(2) {
                return Err(SequenceError::NotOddEven { index, value: x });
            }
        }
        Ok(OddEvenWindow { offset, values })
    }

    pub fn offset(&self) -> i64 {
        self.offset
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

    /// Index/value pairs (i, a_i).
    pub fn points(&self) -> impl Iterator<Item = (i64, u32)> + '_ {
        self.values
            .iter()
            .enumerate()
            .map(|(t, &x)| (self.offset + t as i64, x))
    }
}

fn check_even_k(k: u32) -> Result<(), SequenceError> {
    if k < 2 || k % 2 != 0 {
        return Err(SequenceError::BadK(k));
    }
    Ok(())
}

/// True iff all values are at most k/2 and no two positions i != j in the
/// window satisfy a_i + a_j + |i - j| = k. Necessary (not sufficient) for the
/// two-sided notion; the periodic checker and the search build on it.
pub fn is_k_avoiding_window(w: &OddEvenWindow, k: u32) -> Result<bool, SequenceError> {
    check_even_k(k)?;
    if w.values.iter().any(|&x| x > k / 2) {
        return Ok(false);
    }
    let v = &w.values;
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            if v[i] + v[j] + (j - i) as u32 == k {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The diagonal line y = -x + b on which all conflicts blamed on a point lie.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FaultLine {
    pub intercept: i64,
}

impl FaultLine {
    pub fn contains(&self, x: i64, y: i64) -> bool {
        y == -x + self.intercept
    }
}

/// Fault line of the point (c, d) for target k: y = -x + (k + c - d).
pub fn fault_line(c: i64, d: u32, k: u32) -> Result<FaultLine, SequenceError> {
    check_even_k(k)?;
    if d == 0 || d > k / 2 {
        return Err(SequenceError::FaultLineRange { d, max: k / 2 });
    }
    Ok(FaultLine {
        intercept: k as i64 + c - d as i64,
    })
}

/// Evaluates the fault-line form of the avoidance predicate (no point of the
/// window on the fault line of another) and cross-checks it against
/// `is_k_avoiding_window`; the two are provably equivalent for values at most
/// k/2, so disagreement is reported as an internal bug.
pub fn fault_line_equivalence(w: &OddEvenWindow, k: u32) -> Result<bool, SequenceError> {
    check_even_k(k)?;
    let direct = is_k_avoiding_window(w, k)?;
    if w.values.iter().any(|&x| x > k / 2) {
        return Ok(direct);
    }
    let points: Vec<(i64, u32)> = w.points().collect();
    let mut hit = false;
    'outer: for &(j, aj) in &points {
        let line = fault_line(j, aj, k)?;
        for &(i, ai) in &points {
            if i != j && line.contains(i, ai as i64) {
                hit = true;
                break 'outer;
            }
        }
    }
    if direct != !hit {
        return Err(SequenceError::PredicateMismatch);
    }
    Ok(direct)
}

/// The period-24 sequence witnessing that a 20-avoiding odd-even sequence
/// exists, indexed two-sidedly with a_1 = 1.
pub fn twenty_avoiding_term(i: i64) -> u32 {
    const PERIOD: [u32; 24] = [
        1, 2, 1, 4, 3, 2, 7, 6, 5, 6, 7, 2, 3, 4, 1, 2, 1, 8, 9, 6, 5, 6, 9, 8,
    ];
    PERIOD[(i - 1).rem_euclid(24) as usize]
}

/// A window of the period-24 sequence starting at index `start`.
pub fn twenty_avoiding_window(start: i64, len: usize) -> OddEvenWindow {
    let values = (0..len as i64).map(|t| twenty_avoiding_term(start + t)).collect();
    OddEvenWindow::new(start, values).expect("period-24 sequence is odd-even")
}

/// The stepping-up transform b_i = a_{i+l} + l, turning a k-avoiding window
/// into a (k + 2l)-avoiding one. The input must verify k-avoiding first.
pub fn step_up(w: &OddEvenWindow, k: u32, l: u32) -> Result<OddEvenWindow, SequenceError> {
    if !is_k_avoiding_window(w, k)? {
        return Err(SequenceError::NotVerifiedAvoiding { k });
    }
    let values = w.values.iter().map(|&x| x + l).collect();
    OddEvenWindow::new(w.offset - l as i64, values)
}

/// True iff the infinite periodic extension of `period_values` is k-avoiding.
/// Checked on a window of 2 * period + k terms, which covers every conflict
/// since the conflict range is at most k - 2.
pub fn is_k_avoiding_periodic(period_values: &[u32], k: u32) -> Result<bool, SequenceError> {
    check_even_k(k)?;
    if period_values.len() % 2 != 0 || period_values.is_empty() {
        return Err(SequenceError::OddPeriod(period_values.len()));
    }
    for (t, &x) in period_values.iter().enumerate() {
        if x == 0 {
            return Err(SequenceError::NonPositiveValue);
        }
        if (x as usize + t) % 2 != (period_values[0] as usize) % 2 {
            return Err(SequenceError::ParityInconsistent(t));
        }
    }
    // Align so positions carry the right parity: first value odd -> offset 1.
    let offset = if period_values[0] % 2 == 1 { 1 } else { 2 };
    let p = period_values.len();
    let len = 2 * p + k as usize;
    let values: Vec<u32> = (0..len).map(|t| period_values[t % p]).collect();
    let w = OddEvenWindow::new(offset, values)?;
    is_k_avoiding_window(&w, k)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Exists,
    NotExists,
    Inconclusive,
}

/// Outcome of the transfer-state search for a k-avoiding sequence.
#[derive(Debug, Clone, Serialize)]
pub struct SearchOutcome {
    pub k: u32,
    pub verdict: Verdict,
    /// Periodic witness for `Exists`, verified by `is_k_avoiding_periodic`.
    pub witness_period: Option<Vec<u32>>,
    /// Distinct states expanded.
    pub states_explored: u64,
    pub budget: u64,
}

/// Encodes a window of up to 22 values (each <= 12, so 4 bits) plus a leading
/// marker bit distinguishing lengths.
fn encode_state(values: &[u8]) -> u128 {
    let mut key: u128 = 1;
    for &v in values {
        key = (key << 4) | v as u128;
    }
    key
}

/// Decides whether a k-avoiding odd-even sequence exists by depth-first
/// exploration of the transfer graph, with a memoized dead-state set and an
/// on-stack set for cycle detection. Extension order is ascending by value,
/// so runs are deterministic. States are never materialized up front.
pub fn search_k_avoiding(k: u32, budget: u64) -> Result<SearchOutcome, SequenceError> {
    if k < 4 || k % 2 != 0 {
        return Err(SequenceError::BadSearchK(k));
    }
    let half = (k / 2) as u8;
    let window = (k - 2) as usize;
    assert!(window <= 22 && half <= 12, "state encoding supports k <= 24");

    let mut dead: HashSet<u128> = HashSet::new();
    // Full windows on the current path, mapped to their end position in `seq`.
    let mut on_stack: HashMap<u128, usize> = HashMap::new();
    let mut states_explored: u64 = 0;

    // One frame per sequence position: the value placed there and the next
    // candidate value to try when we come back.
    struct Frame {
        value: u8,
        next_candidate: u8,
        state_key: u128,
    }

    let conflicts = |seq: &[u8], b: u8| -> bool {
        let start = seq.len().saturating_sub(window);
        seq[start..]
            .iter()
            .rev()
            .enumerate()
            .any(|(back, &a)| a as u32 + b as u32 + back as u32 + 1 == k)
    };

    for seed in 1..=half {
        let mut seq: Vec<u8> = vec![seed];
        let seed_key = encode_state(&seq);
        if dead.contains(&seed_key) {
            continue;
        }
        states_explored += 1;
        let mut frames = vec![Frame {
            value: seed,
            next_candidate: 1,
            state_key: seed_key,
        }];
        if seq.len() >= window {
            on_stack.insert(seed_key, 0);
        }
        while let Some(frame) = frames.last_mut() {
            // Next value must have the opposite parity of the last one.
            let parity = 1 - frame.value % 2;
            let mut chosen = None;
            let mut b = frame.next_candidate;
            while b <= half {
                if b % 2 == parity && !conflicts(&seq, b) {
                    let mut probe = seq.clone();
                    probe.push(b);
                    let start = probe.len().saturating_sub(window);
                    let key = encode_state(&probe[start..]);
                    if probe.len() >= window {
                        if let Some(&pos) = on_stack.get(&key) {
                            // Back edge: the values strictly after `pos` repeat.
                            let period: Vec<u32> =
                                seq[pos + 1..].iter().map(|&v| v as u32).chain([b as u32]).collect();
                            debug_assert!(is_k_avoiding_periodic(&period, k)?);
                            return Ok(SearchOutcome {
                                k,
                                verdict: Verdict::Exists,
                                witness_period: Some(period),
                                states_explored,
                                budget,
                            });
                        }
                    }
                    if !dead.contains(&key) {
                        chosen = Some((b, key));
                        break;
                    }
                }
                b += 1;
            }
            match chosen {
                Some((b, key)) => {
                    frame.next_candidate = b + 1;
                    seq.push(b);
                    states_explored += 1;
                    if states_explored > budget {
                        return Ok(SearchOutcome {
                            k,
                            verdict: Verdict::Inconclusive,
                            witness_period: None,
                            states_explored,
                            budget,
                        });
                    }
                    if seq.len() >= window {
                        on_stack.insert(key, seq.len() - 1);
                    }
                    frames.push(Frame {
                        value: b,
                        next_candidate: 1,
                        state_key: key,
                    });
                }
                None => {
                    // Every extension is dead: this state is dead too.
                    let frame = frames.pop().unwrap();
                    dead.insert(frame.state_key);
                    on_stack.remove(&frame.state_key);
                    seq.pop();
                }
            }
        }
    }
    Ok(SearchOutcome {
        k,
        verdict: Verdict::NotExists,
        witness_period: None,
        states_explored,
        budget,
    })
}
