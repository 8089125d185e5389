//! Multiple string matching over a suffix array, with the pattern comparisons
//! delegated to a simulated quantum LCP primitive whose oracle queries are
//! counted.
//!
//! The pipeline has three stages:
//!
//! 1. [`TextIndex::build`] sorts the suffixes of the text and prepares
//!    constant-time LCP queries between any two of them.
//! 2. For each pattern, [`left_border_search`] and [`right_border_search`]
//!    binary-search the suffix array for the block of suffixes that start with
//!    the pattern. Pattern symbols are only examined through
//!    [`QlcpSimulator`], which charges `O(sqrt(d))` queries for an LCP of
//!    length `d`.
//! 3. [`expand_occurrences`] turns the rank block into text positions.
//!
//! [`match_all`] runs the whole pipeline. The [`baseline`] module holds the
//! Aho–Corasick and brute-force references, and [`harness`] the instance
//! generators, the equivalence checker and the benchmark writer behind the
//! `qsa` command-line tool.
//!
//! ```
//! use qsa::{match_all, CostModelConfig, Dictionary, QueryLedger, Text};
//!
//! let text = Text::new(b"banana".to_vec())?;
//! let dict = Dictionary::parse(b"ana\nnan\nx\n")?;
//! let mut ledger = QueryLedger::new();
//! let report = match_all(text, &dict, &CostModelConfig::default(), &mut ledger)?;
//! assert_eq!(report.occurrences, vec![vec![2, 4], vec![3], vec![]]);
//! # Ok::<(), qsa::Error>(())
//! ```

pub mod baseline;
pub mod cli;
mod error;
pub mod harness;
mod ledger;
pub mod matcher;
pub mod qlcp;
pub mod suffix_index;

pub use baseline::{ac_match, brute_force_match, build_automaton, AcAutomaton};
pub use error::{Error, Result};
pub use ledger::QueryLedger;
pub use matcher::{
    border_search, expand_occurrences, left_border_search, match_all, match_index,
    right_border_search, Border, BorderResult, Dictionary, MatchReport, SearchTrace,
};
pub use qlcp::{CostMode, CostModelConfig, ErrorStrategy, LcpResult, QlcpSimulator};
pub use suffix_index::{naive_lcp, LcpArray, RmqTable, SuffixArray, Text, TextIndex};

// The guide's code listings run as doctests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/suffix-index.md")]
    mod suffix_index {}
    #[doc = include_str!("../../../book/src/query-model.md")]
    mod query_model {}
    #[doc = include_str!("../../../book/src/border-search.md")]
    mod border_search {}
    #[doc = include_str!("../../../book/src/baselines.md")]
    mod baselines {}
    #[doc = include_str!("../../../book/src/benchmarking.md")]
    mod benchmarking {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
