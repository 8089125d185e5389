//! Classical simulation of the quantum LCP primitive.
//!
//! The quantum routine is a First-One Search (a Grover-based search for the
//! smallest index where a predicate holds) applied to the predicate "the two
//! strings differ here". The simulator computes the answer classically and
//! charges the oracle calls the quantum routine would have made:
//!
//! * [`CostMode::Deterministic`] charges `ceil(alpha * sqrt(f))`, where `f` is
//!   the returned index, or the domain size when nothing is found.
//! * [`CostMode::Stochastic`] probes windows of size 1, 2, 4, ... and draws a
//!   random Grover iteration count for each probe, then adds one check of the
//!   candidate. The total never exceeds the deterministic charge plus
//!   [`STOCHASTIC_SLACK`].
//!
//! With [`ErrorStrategy::Overshoot`] a search fails with probability `p` by
//! returning the second true index instead of the first.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ledger::QueryLedger;

/// Largest amount by which a stochastic charge can exceed the deterministic one.
pub const STOCHASTIC_SLACK: u64 = 1;

/// Per-call failure probability budget of a single First-One Search.
pub const PER_CALL_ERROR_BUDGET: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CostMode {
    #[default]
    Deterministic,
    Stochastic,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ErrorStrategy {
    #[default]
    None,
    /// With probability `p`, return the second true index.
    Overshoot { p: f64 },
}

/// Constants and error model of the simulated primitive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CostModelConfig {
    /// Multiplier on the square-root charge.
    pub alpha: f64,
    pub mode: CostMode,
    pub error: ErrorStrategy,
    pub seed: u64,
}

impl Default for CostModelConfig {
    fn default() -> Self {
        CostModelConfig {
            alpha: 1.0,
            mode: CostMode::Deterministic,
            error: ErrorStrategy::None,
            seed: 0,
        }
    }
}

impl CostModelConfig {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_overshoot(mut self, p: f64) -> Self {
        self.error = if p > 0.0 {
            ErrorStrategy::Overshoot { p }
        } else {
            ErrorStrategy::None
        };
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha.is_finite() && self.alpha > 0.0) {
            return Err(Error::invalid(format!(
                "alpha must be positive, got {}",
                self.alpha
            )));
        }
        if let ErrorStrategy::Overshoot { p } = self.error {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::invalid(format!(
                    "error probability must be in [0, 1], got {p}"
                )));
            }
        }
        Ok(())
    }

    /// True when the injected error rate stays within the per-call budget of
    /// the quantum routine.
    pub fn within_error_budget(&self) -> bool {
        match self.error {
            ErrorStrategy::None => true,
            ErrorStrategy::Overshoot { p } => p <= PER_CALL_ERROR_BUDGET,
        }
    }

    pub fn injects_errors(&self) -> bool {
        matches!(self.error, ErrorStrategy::Overshoot { p } if p > 0.0)
    }
}

/// Outcome of one simulated LCP computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LcpResult {
    pub lcp_len: usize,
    /// Quantum queries charged for this call.
    pub charged: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FirstOne {
    /// 1-based index, or `None` when the predicate is false everywhere (or
    /// the search overshot past the only true index).
    pub index: Option<usize>,
    pub charged: u64,
}

/// Simulator state for one matcher run: the cost model and its random stream.
#[derive(Debug, Clone)]
pub struct QlcpSimulator {
    config: CostModelConfig,
    rng: ChaCha8Rng,
}

impl QlcpSimulator {
    pub fn new(config: CostModelConfig) -> Result<Self> {
        Self::with_stream(config, 0)
    }

    /// A simulator whose random draws come from stream `stream` of the
    /// configured seed. Distinct streams are independent, so concurrent
    /// searches can each own one.
    pub fn with_stream(config: CostModelConfig, stream: u64) -> Result<Self> {
        config.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        rng.set_stream(stream);
        Ok(QlcpSimulator { config, rng })
    }

    pub fn config(&self) -> &CostModelConfig {
        &self.config
    }

    /// Smallest 1-based `i` in `1..=domain` with `predicate(i)`.
    pub fn first_one_search<P>(
        &mut self,
        domain: usize,
        mut predicate: P,
        ledger: &mut QueryLedger,
    ) -> FirstOne
    where
        P: FnMut(usize) -> bool,
    {
        let mut hits = (1..=domain).filter(|&i| predicate(i));
        let first = hits.next();
        let index = if first.is_some() && self.overshoots() {
            hits.next()
        } else {
            first
        };
        let target = index.unwrap_or(domain);
        let charged = match self.config.mode {
            CostMode::Deterministic => sqrt_charge(self.config.alpha, target),
            CostMode::Stochastic => self.stochastic_charge(target),
        };
        ledger.charge_quantum(charged);
        FirstOne { index, charged }
    }

    /// LCP of `u` and `v`.
    pub fn qlcp(&mut self, u: &[u8], v: &[u8], ledger: &mut QueryLedger) -> LcpResult {
        let common = u.len().min(v.len());
        let found = self.first_one_search(common, |i| u[i - 1] != v[i - 1], ledger);
        LcpResult {
            lcp_len: found.index.map_or(common, |i| i - 1),
            charged: found.charged,
        }
    }

    /// LCP of `u` and `v` given that their first `start - 1` symbols agree;
    /// only symbols from the 1-based position `start` onwards are searched.
    pub fn qlcp_from(
        &mut self,
        u: &[u8],
        v: &[u8],
        start: usize,
        ledger: &mut QueryLedger,
    ) -> Result<LcpResult> {
        let common = u.len().min(v.len());
        if start == 0 || start > common + 1 {
            return Err(Error::invalid(format!(
                "start position {start} outside 1..={}",
                common + 1
            )));
        }
        let tail = self.qlcp(&u[start - 1..], &v[start - 1..], ledger);
        Ok(LcpResult {
            lcp_len: start - 1 + tail.lcp_len,
            charged: tail.charged,
        })
    }

    fn overshoots(&mut self) -> bool {
        match self.config.error {
            ErrorStrategy::Overshoot { p } if p > 0.0 => self.rng.random_bool(p),
            _ => false,
        }
    }

    // Windows [1,1], [2,3], [4,7], ... up to the one holding `target`. A
    // window of width w draws uniformly from 0..=floor(alpha * c * sqrt(w))
    // with c = 1 - 1/sqrt(2); the geometric sum then stays below
    // alpha * sqrt(target). One more query checks the candidate.
    fn stochastic_charge(&mut self, target: usize) -> u64 {
        if target == 0 {
            return 0;
        }
        let scale = self.config.alpha * (1.0 - std::f64::consts::FRAC_1_SQRT_2);
        let mut total = 0u64;
        let mut start = 1usize;
        let mut width = 1usize;
        loop {
            let end = (start + width - 1).min(target);
            let cap = (scale * ((end - start + 1) as f64).sqrt()).floor() as u64;
            total += self.rng.random_range(0..=cap);
            if end >= target {
                break;
            }
            start += width;
            width *= 2;
        }
        total + STOCHASTIC_SLACK
    }
}

/// `ceil(alpha * sqrt(f))`.
pub fn sqrt_charge(alpha: f64, f: usize) -> u64 {
    (alpha * (f as f64).sqrt()).ceil() as u64
}
