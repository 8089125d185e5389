use serde::{Deserialize, Serialize};
use std::ops::AddAssign;

/// Separate tallies of classical symbol reads and simulated quantum oracle
/// queries.
///
/// Counters only ever grow. Merging two ledgers adds them component-wise.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct QueryLedger {
    classical_reads: u64,
    quantum_queries: u64,
}

impl QueryLedger {
    pub fn new() -> Self {
        Self::default()
    }

    /// Symbol reads performed by deterministic classical code.
    pub fn classical_reads(&self) -> u64 {
        self.classical_reads
    }

    /// Oracle calls charged by the simulated quantum primitive.
    pub fn quantum_queries(&self) -> u64 {
        self.quantum_queries
    }

    pub fn charge_classical(&mut self, reads: u64) {
        self.classical_reads += reads;
    }

    pub fn charge_quantum(&mut self, queries: u64) {
        self.quantum_queries += queries;
    }
}

impl AddAssign for QueryLedger {
    fn add_assign(&mut self, rhs: Self) {
        self.classical_reads += rhs.classical_reads;
        self.quantum_queries += rhs.quantum_queries;
    }
}
