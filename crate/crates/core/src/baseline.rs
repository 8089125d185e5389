//! Classical reference matchers: an Aho–Corasick automaton and a
//! brute-force scan.

use std::collections::VecDeque;

use crate::ledger::QueryLedger;
use crate::matcher::{Dictionary, MatchReport};
use crate::suffix_index::Text;

pub const ROOT: usize = 0;
const NONE: usize = usize::MAX;

#[derive(Debug, Clone)]
struct Node {
    // sorted by symbol
    goto: Vec<(u8, usize)>,
    fail: usize,
    // nearest node on the failure chain that ends a pattern
    dict_link: usize,
    // patterns ending exactly here
    output: Vec<usize>,
}

impl Node {
    fn new() -> Self {
        Node {
            goto: Vec::new(),
            fail: ROOT,
            dict_link: NONE,
            output: Vec::new(),
        }
    }

    fn next(&self, c: u8) -> Option<usize> {
        self.goto
            .binary_search_by_key(&c, |&(s, _)| s)
            .ok()
            .map(|i| self.goto[i].1)
    }
}

/// Trie of the dictionary with failure and output links.
#[derive(Debug, Clone)]
pub struct AcAutomaton {
    nodes: Vec<Node>,
    pattern_lens: Vec<usize>,
    build_reads: u64,
}

/// Work done by one automaton scan.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct AcStats {
    /// Pattern symbols read while building plus text symbols read while scanning.
    pub symbol_reads: u64,
    /// Goto and failure transitions taken while scanning.
    pub transitions: u64,
}

impl AcAutomaton {
    pub fn build(dictionary: &Dictionary) -> Self {
        let mut nodes = vec![Node::new()];
        let mut build_reads = 0u64;
        for (j, pattern) in dictionary.patterns().iter().enumerate() {
            let mut cur = ROOT;
            for &c in pattern {
                build_reads += 1;
                cur = match nodes[cur].next(c) {
                    Some(child) => child,
                    None => {
                        let child = nodes.len();
                        nodes.push(Node::new());
                        let slot = nodes[cur].goto.partition_point(|&(s, _)| s < c);
                        nodes[cur].goto.insert(slot, (c, child));
                        child
                    }
                };
            }
            nodes[cur].output.push(j);
        }

        let mut queue: VecDeque<usize> = nodes[ROOT].goto.iter().map(|&(_, v)| v).collect();
        while let Some(u) = queue.pop_front() {
            for k in 0..nodes[u].goto.len() {
                let (c, v) = nodes[u].goto[k];
                let fail = if u == ROOT {
                    ROOT
                } else {
                    let mut f = nodes[u].fail;
                    loop {
                        if let Some(w) = nodes[f].next(c) {
                            break w;
                        }
                        if f == ROOT {
                            break ROOT;
                        }
                        f = nodes[f].fail;
                    }
                };
                nodes[v].fail = fail;
                nodes[v].dict_link = if nodes[fail].output.is_empty() {
                    nodes[fail].dict_link
                } else {
                    fail
                };
                queue.push_back(v);
            }
        }

        AcAutomaton {
            nodes,
            pattern_lens: dictionary.patterns().iter().map(Vec::len).collect(),
            build_reads,
        }
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn pattern_count(&self) -> usize {
        self.pattern_lens.len()
    }

    /// Outgoing trie edges of `node`, sorted by symbol.
    pub fn edges(&self, node: usize) -> &[(u8, usize)] {
        &self.nodes[node].goto
    }

    pub fn failure(&self, node: usize) -> usize {
        self.nodes[node].fail
    }

    /// Indices (0-based) of the patterns that end exactly at `node`.
    pub fn outputs(&self, node: usize) -> &[usize] {
        &self.nodes[node].output
    }

    /// Scans `text` once, reporting 1-based start positions per pattern.
    pub fn find_all(&self, text: &[u8]) -> (Vec<Vec<usize>>, AcStats) {
        let mut occurrences = vec![Vec::new(); self.pattern_lens.len()];
        let mut stats = AcStats {
            symbol_reads: self.build_reads,
            transitions: 0,
        };
        let mut state = ROOT;
        for (i, &c) in text.iter().enumerate() {
            stats.symbol_reads += 1;
            state = loop {
                stats.transitions += 1;
                if let Some(next) = self.nodes[state].next(c) {
                    break next;
                }
                if state == ROOT {
                    break ROOT;
                }
                state = self.nodes[state].fail;
            };
            let mut hit = if self.nodes[state].output.is_empty() {
                self.nodes[state].dict_link
            } else {
                state
            };
            while hit != NONE {
                for &j in &self.nodes[hit].output {
                    // end position i + 1 (1-based) to start position
                    occurrences[j].push(i + 2 - self.pattern_lens[j]);
                }
                hit = self.nodes[hit].dict_link;
            }
        }
        (occurrences, stats)
    }
}

pub fn build_automaton(dictionary: &Dictionary) -> AcAutomaton {
    AcAutomaton::build(dictionary)
}

/// Aho–Corasick matching. The report's classical reads are the automaton's
/// symbol reads; it makes no quantum queries.
pub fn ac_match(automaton: &AcAutomaton, text: &Text) -> MatchReport {
    ac_match_with_stats(automaton, text).0
}

pub fn ac_match_with_stats(automaton: &AcAutomaton, text: &Text) -> (MatchReport, AcStats) {
    let (occurrences, stats) = automaton.find_all(text.as_bytes());
    let mut ledger = QueryLedger::new();
    ledger.charge_classical(stats.symbol_reads);
    let report = MatchReport {
        per_pattern_quantum_queries: vec![0; occurrences.len()],
        occurrences,
        ledger,
    };
    (report, stats)
}

/// Checks every pattern at every text position.
pub fn brute_force_match(text: &Text, dictionary: &Dictionary) -> MatchReport {
    let t = text.as_bytes();
    let mut ledger = QueryLedger::new();
    let occurrences = dictionary
        .patterns()
        .iter()
        .map(|p| {
            if p.len() > t.len() {
                return Vec::new();
            }
            (0..=t.len() - p.len())
                .filter(|&i| {
                    let agree = t[i..].iter().zip(p).take_while(|(a, b)| a == b).count();
                    ledger.charge_classical(2 * (agree + usize::from(agree < p.len())) as u64);
                    agree == p.len()
                })
                .map(|i| i + 1)
                .collect()
        })
        .collect::<Vec<_>>();
    MatchReport {
        per_pattern_quantum_queries: vec![0; occurrences.len()],
        occurrences,
        ledger,
    }
}
