//! Border searches over the suffix array and the multiple-pattern driver.
//!
//! All suffixes that start with a pattern occupy one contiguous block of
//! ranks. The left and right border searches find the ends of that block by
//! binary search. Each keeps two invariants: `llcp` is the LCP of the pattern
//! with the suffix at the lower bound `le`, and `rlcp` the same for the upper
//! bound `ri`. Comparing the larger of the two against the precomputed LCP of
//! the midpoint suffix decides most steps without looking at the pattern;
//! only when they tie does the search call the simulated quantum LCP, and it
//! resumes from the already known common prefix.

use std::cmp::Ordering;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ledger::QueryLedger;
use crate::qlcp::{CostModelConfig, QlcpSimulator};
use crate::suffix_index::{Text, TextIndex};

/// The patterns to locate, in input order. Duplicates are kept.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dictionary {
    patterns: Vec<Vec<u8>>,
}

impl Dictionary {
    pub fn new(patterns: Vec<Vec<u8>>) -> Result<Self> {
        if patterns.is_empty() {
            return Err(Error::invalid(
                "dictionary must contain at least one pattern",
            ));
        }
        if let Some(j) = patterns.iter().position(Vec::is_empty) {
            return Err(Error::invalid(format!("pattern {} is empty", j + 1)));
        }
        Ok(Dictionary { patterns })
    }

    /// One pattern per line. A missing final newline is accepted; empty lines
    /// are not.
    pub fn parse(bytes: &[u8]) -> Result<Self> {
        let body = bytes.strip_suffix(b"\n").unwrap_or(bytes);
        let mut patterns = Vec::new();
        for (line_no, line) in body.split(|&b| b == b'\n').enumerate() {
            if line.is_empty() {
                return Err(Error::invalid(format!(
                    "dictionary line {} is empty",
                    line_no + 1
                )));
            }
            patterns.push(line.to_vec());
        }
        Self::new(patterns)
    }

    /// Inverse of [`Dictionary::parse`].
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.total_len() + self.len());
        for p in &self.patterns {
            out.extend_from_slice(p);
            out.push(b'\n');
        }
        out
    }

    pub fn patterns(&self) -> &[Vec<u8>] {
        &self.patterns
    }

    pub fn len(&self) -> usize {
        self.patterns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }

    /// Sum of pattern lengths.
    pub fn total_len(&self) -> usize {
        self.patterns.iter().map(Vec::len).sum()
    }

    pub fn max_len(&self) -> usize {
        self.patterns.iter().map(Vec::len).max().unwrap_or(0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BorderResult {
    /// 1-based suffix-array rank.
    Found(usize),
    Absent,
}

impl BorderResult {
    pub fn rank(self) -> Option<usize> {
        match self {
            BorderResult::Found(r) => Some(r),
            BorderResult::Absent => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Border {
    Left,
    Right,
}

/// What happened inside one border search.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SearchTrace {
    /// Binary-search loop iterations.
    pub iterations: usize,
    /// `llcp` after initialisation and after every iteration.
    pub llcp: Vec<usize>,
    /// `rlcp` after initialisation and after every iteration.
    pub rlcp: Vec<usize>,
    /// Quantum queries charged by this search.
    pub quantum_queries: u64,
}

/// Occurrences per pattern plus the cost of finding them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MatchReport {
    /// `occurrences[j]` lists the 1-based start positions of pattern `j + 1`
    /// in ascending order.
    pub occurrences: Vec<Vec<usize>>,
    pub ledger: QueryLedger,
    pub per_pattern_quantum_queries: Vec<u64>,
}

impl MatchReport {
    pub fn same_occurrences(&self, other: &MatchReport) -> bool {
        self.occurrences == other.occurrences
    }
}

/// Minimal rank whose suffix starts with `pattern`.
pub fn left_border_search(
    index: &TextIndex,
    pattern: &[u8],
    sim: &mut QlcpSimulator,
    ledger: &mut QueryLedger,
) -> BorderResult {
    border_search(index, pattern, Border::Left, sim, ledger).0
}

/// Maximal rank whose suffix starts with `pattern`.
pub fn right_border_search(
    index: &TextIndex,
    pattern: &[u8],
    sim: &mut QlcpSimulator,
    ledger: &mut QueryLedger,
) -> BorderResult {
    border_search(index, pattern, Border::Right, sim, ledger).0
}

/// Runs one border search and returns its trace alongside the result.
pub fn border_search(
    index: &TextIndex,
    pattern: &[u8],
    side: Border,
    sim: &mut QlcpSimulator,
    ledger: &mut QueryLedger,
) -> (BorderResult, SearchTrace) {
    let before = ledger.quantum_queries();
    let mut trace = SearchTrace::default();
    let result = search(index, pattern, side, sim, ledger, &mut trace);
    trace.quantum_queries = ledger.quantum_queries() - before;
    (result, trace)
}

/// Order of `suffix` relative to `pattern`, given that they agree on their
/// first `k` symbols and `k < pattern.len()`. An exhausted suffix is smaller.
fn order_at(suffix: &[u8], pattern: &[u8], k: usize, ledger: &mut QueryLedger) -> Ordering {
    match suffix.get(k) {
        None => Ordering::Less,
        Some(&c) => {
            ledger.charge_classical(2);
            c.cmp(&pattern[k])
        }
    }
}

fn search(
    index: &TextIndex,
    pattern: &[u8],
    side: Border,
    sim: &mut QlcpSimulator,
    ledger: &mut QueryLedger,
    trace: &mut SearchTrace,
) -> BorderResult {
    let n = index.len();
    let plen = pattern.len();
    let first = index.suffix0(0);
    let last = index.suffix0(n - 1);

    let mut llcp = sim.qlcp(first, pattern, ledger).lcp_len;
    let mut rlcp = sim.qlcp(last, pattern, ledger).lcp_len;
    trace.llcp.push(llcp);
    trace.rlcp.push(rlcp);

    // pattern sorts before every suffix
    let below_all = |llcp: usize, ledger: &mut QueryLedger| {
        order_at(first, pattern, llcp, ledger) == Ordering::Greater
    };
    // pattern sorts after every suffix
    let above_all = |rlcp: usize, ledger: &mut QueryLedger| {
        order_at(last, pattern, rlcp, ledger) == Ordering::Less
    };

    match side {
        Border::Left => {
            if llcp == plen {
                return BorderResult::Found(1);
            }
            if below_all(llcp, ledger) || (rlcp < plen && above_all(rlcp, ledger)) {
                return BorderResult::Absent;
            }
        }
        Border::Right => {
            if rlcp == plen {
                return BorderResult::Found(n);
            }
            if above_all(rlcp, ledger) || (llcp < plen && below_all(llcp, ledger)) {
                return BorderResult::Absent;
            }
        }
    }

    let mut le = 0usize;
    let mut ri = n - 1;
    while ri - le > 1 {
        trace.iterations += 1;
        let mid = (le + ri) / 2;
        let (shared, known) = if llcp >= rlcp {
            (index.lcp_suf0(le, mid), llcp)
        } else {
            (index.lcp_suf0(mid, ri), rlcp)
        };
        match (shared.cmp(&known), llcp >= rlcp) {
            // mid agrees with le beyond the point where le leaves the pattern
            (Ordering::Greater, true) => le = mid,
            // mid leaves le's prefix before le leaves the pattern
            (Ordering::Less, true) => {
                ri = mid;
                rlcp = shared;
            }
            (Ordering::Greater, false) => ri = mid,
            (Ordering::Less, false) => {
                le = mid;
                llcp = shared;
            }
            (Ordering::Equal, _) => {
                let suffix = index.suffix0(mid);
                let mlcp = sim
                    .qlcp_from(suffix, pattern, known + 1, ledger)
                    .expect("suffix at mid shares the known prefix")
                    .lcp_len;
                let goes_right = if mlcp == plen {
                    side == Border::Left
                } else {
                    order_at(suffix, pattern, mlcp, ledger) == Ordering::Greater
                };
                if goes_right {
                    ri = mid;
                    rlcp = mlcp;
                } else {
                    le = mid;
                    llcp = mlcp;
                }
            }
        }
        trace.llcp.push(llcp);
        trace.rlcp.push(rlcp);
    }

    let (candidate, known) = match side {
        Border::Left => (ri, rlcp),
        Border::Right => (le, llcp),
    };
    if known == plen {
        return BorderResult::Found(candidate + 1);
    }
    let confirmed = sim
        .qlcp_from(index.suffix0(candidate), pattern, known + 1, ledger)
        .expect("known prefix is within both strings")
        .lcp_len;
    if confirmed == plen {
        BorderResult::Found(candidate + 1)
    } else {
        BorderResult::Absent
    }
}

/// Start positions of the suffixes at ranks `left..=right`, ascending.
pub fn expand_occurrences(index: &TextIndex, left: usize, right: usize) -> Result<Vec<usize>> {
    if left == 0 || left > right || right > index.len() {
        return Err(Error::invalid(format!(
            "rank interval {left}..={right} invalid for text of length {}",
            index.len()
        )));
    }
    let mut positions: Vec<usize> = index.suffix_array().offsets()[left - 1..right]
        .iter()
        .map(|&p| p + 1)
        .collect();
    positions.sort_unstable();
    Ok(positions)
}

/// Builds the index for `text` and locates every pattern of `dictionary`.
///
/// Index construction reads are charged to `ledger`, followed by the reads and
/// quantum queries of every border search.
pub fn match_all(
    text: Text,
    dictionary: &Dictionary,
    config: &CostModelConfig,
    ledger: &mut QueryLedger,
) -> Result<MatchReport> {
    config.validate()?;
    let index = TextIndex::build(text, ledger);
    match_index(&index, dictionary, config, ledger)
}

/// Same as [`match_all`] over an already built index.
///
/// Pattern `j` draws its random decisions from stream `j` of the configured
/// seed, so results do not depend on the order patterns are processed in.
pub fn match_index(
    index: &TextIndex,
    dictionary: &Dictionary,
    config: &CostModelConfig,
    ledger: &mut QueryLedger,
) -> Result<MatchReport> {
    let mut occurrences = Vec::with_capacity(dictionary.len());
    let mut per_pattern = Vec::with_capacity(dictionary.len());
    for (j, pattern) in dictionary.patterns().iter().enumerate() {
        let mut sim = QlcpSimulator::with_stream(*config, j as u64)?;
        let mut own = QueryLedger::new();
        let left = left_border_search(index, pattern, &mut sim, &mut own);
        let right = right_border_search(index, pattern, &mut sim, &mut own);
        let found = match (left, right) {
            (BorderResult::Found(l), BorderResult::Found(r)) if l <= r => {
                expand_occurrences(index, l, r)?
            }
            _ => Vec::new(),
        };
        occurrences.push(found);
        per_pattern.push(own.quantum_queries());
        *ledger += own;
    }
    Ok(MatchReport {
        occurrences,
        ledger: *ledger,
        per_pattern_quantum_queries: per_pattern,
    })
}
