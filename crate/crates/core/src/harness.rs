//! Instance generation, equivalence checking and query-count benchmarks.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rand::seq::{index, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::baseline::{ac_match_with_stats, brute_force_match, AcAutomaton};
use crate::error::{Error, Result};
use crate::ledger::QueryLedger;
use crate::matcher::{match_all, match_index, Dictionary};
use crate::qlcp::CostModelConfig;
use crate::suffix_index::{Text, TextIndex};

/// Largest supported alphabet; symbols are `a`, `b`, ... in order.
pub const MAX_ALPHABET: usize = 26;

/// Header of the benchmark CSV.
pub const CSV_HEADER: &str =
    "n,m,L,b,alphabet_size,seed,quantum_queries,classical_reads,ac_symbol_reads,qsa_wall_ms,ac_wall_ms,mismatch";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PatternLengths {
    Uniform(usize),
    Range { min: usize, max: usize },
}

impl PatternLengths {
    pub fn max(&self) -> usize {
        match *self {
            PatternLengths::Uniform(b) => b,
            PatternLengths::Range { max, .. } => max,
        }
    }

    fn min(&self) -> usize {
        match *self {
            PatternLengths::Uniform(b) => b,
            PatternLengths::Range { min, .. } => min,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Planting {
    /// Patterns and text are independent.
    #[default]
    Random,
    /// Every pattern is written into the text at `k` places that do not
    /// overlap any other planted copy.
    Planted { k: usize },
}

/// Shape of one synthetic instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceParams {
    pub n: usize,
    pub m: usize,
    pub b: PatternLengths,
    pub alphabet_size: usize,
    #[serde(default)]
    pub planting: Planting,
    pub seed: u64,
}

impl InstanceParams {
    pub fn validate(&self) -> Result<()> {
        let (lo, hi) = (self.b.min(), self.b.max());
        if lo == 0 || lo > hi {
            return Err(Error::invalid(format!(
                "pattern lengths {lo}..={hi} are not a valid range"
            )));
        }
        if self.n < hi {
            return Err(Error::invalid(format!(
                "text length {} below pattern length {hi}",
                self.n
            )));
        }
        if self.m == 0 {
            return Err(Error::invalid("need at least one pattern"));
        }
        if !(2..=MAX_ALPHABET).contains(&self.alphabet_size) {
            return Err(Error::invalid(format!(
                "alphabet size {} outside 2..={MAX_ALPHABET}",
                self.alphabet_size
            )));
        }
        if let Planting::Planted { k } = self.planting {
            if k == 0 {
                return Err(Error::invalid("planted instances need k >= 1"));
            }
            if k * hi > self.n {
                return Err(Error::invalid(format!(
                    "cannot plant {k} copies of length {hi} into {} symbols",
                    self.n
                )));
            }
        }
        Ok(())
    }
}

fn symbol(rng: &mut ChaCha8Rng, alphabet: usize) -> u8 {
    b'a' + rng.random_range(0..alphabet) as u8
}

/// Draws a text and dictionary; identical params give identical output.
pub fn generate_instance(params: &InstanceParams) -> Result<(Text, Dictionary)> {
    params.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let sigma = params.alphabet_size;
    let mut text: Vec<u8> = (0..params.n).map(|_| symbol(&mut rng, sigma)).collect();
    let patterns: Vec<Vec<u8>> = (0..params.m)
        .map(|_| {
            let len = match params.b {
                PatternLengths::Uniform(b) => b,
                PatternLengths::Range { min, max } => rng.random_range(min..=max),
            };
            (0..len).map(|_| symbol(&mut rng, sigma)).collect()
        })
        .collect();

    if let Planting::Planted { k } = params.planting {
        let mut pieces: Vec<usize> = (0..patterns.len())
            .flat_map(|j| std::iter::repeat_n(j, k))
            .collect();
        let planted: usize = pieces.iter().map(|&j| patterns[j].len()).sum();
        if planted > params.n {
            return Err(Error::invalid(format!(
                "planting {planted} symbols does not fit into a text of {} symbols",
                params.n
            )));
        }
        pieces.shuffle(&mut rng);
        // choose the free-space split uniformly: pieces.len() bars among
        // free + pieces.len() slots
        let free = params.n - planted;
        let mut bars = index::sample(&mut rng, free + pieces.len(), pieces.len()).into_vec();
        bars.sort_unstable();
        let mut used = 0;
        for (i, (&j, &bar)) in pieces.iter().zip(&bars).enumerate() {
            let start = bar - i + used;
            let p = &patterns[j];
            text[start..start + p.len()].copy_from_slice(p);
            used += p.len();
        }
    }

    Ok((Text::new(text)?, Dictionary::new(patterns)?))
}

fn mix_seed(a: u64, b: u64) -> u64 {
    // splitmix64 finaliser over the combined words
    let mut z = a ^ b.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Settings for a randomized equivalence run.
#[derive(Debug, Clone, PartialEq)]
pub struct VerifyConfig {
    pub trials: usize,
    pub max_n: usize,
    pub max_m: usize,
    pub max_pattern_len: usize,
    pub alphabets: Vec<usize>,
    pub seed: u64,
    pub cost: CostModelConfig,
    /// Where to write reproduction directories for failing trials.
    pub dump_dir: Option<PathBuf>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            trials: 1000,
            max_n: 2000,
            max_m: 50,
            max_pattern_len: 20,
            alphabets: vec![2, 4],
            seed: 0,
            cost: CostModelConfig::default(),
            dump_dir: None,
        }
    }
}

impl VerifyConfig {
    /// Instance parameters of trial `t`.
    pub fn trial_params(&self, t: usize) -> InstanceParams {
        let seed = mix_seed(self.seed, t as u64);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.random_range(1..=self.max_n.max(1));
        let b_max = rng.random_range(1..=self.max_pattern_len.clamp(1, n));
        let b_min = rng.random_range(1..=b_max);
        let m = rng.random_range(1..=self.max_m.max(1));
        let alphabet_size = self.alphabets[rng.random_range(0..self.alphabets.len())];
        let room = n / (m * b_max);
        let planting = if room >= 1 && rng.random_bool(0.5) {
            Planting::Planted {
                k: rng.random_range(1..=room.min(3)),
            }
        } else {
            Planting::Random
        };
        InstanceParams {
            n,
            m,
            b: PatternLengths::Range {
                min: b_min,
                max: b_max,
            },
            alphabet_size,
            planting,
            seed,
        }
    }
}

/// A trial where the matchers disagreed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Mismatch {
    pub trial: usize,
    pub params: InstanceParams,
    pub cost: CostModelConfig,
    pub dump: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct VerifyReport {
    pub trials: usize,
    pub mismatches: Vec<Mismatch>,
}

impl VerifyReport {
    pub fn is_clean(&self) -> bool {
        self.mismatches.is_empty()
    }

    pub fn mismatch_rate(&self) -> f64 {
        if self.trials == 0 {
            0.0
        } else {
            self.mismatches.len() as f64 / self.trials as f64
        }
    }
}

/// Result of running every matcher on one instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialOutcome {
    pub qsa: Vec<Vec<usize>>,
    pub ac: Vec<Vec<usize>>,
    pub brute: Vec<Vec<usize>>,
}

impl TrialOutcome {
    pub fn agrees(&self) -> bool {
        self.qsa == self.brute && self.ac == self.brute
    }
}

/// Runs the suffix-array matcher, Aho–Corasick and brute force on `params`.
pub fn run_trial(params: &InstanceParams, cost: &CostModelConfig) -> Result<TrialOutcome> {
    let (text, dict) = generate_instance(params)?;
    let brute = brute_force_match(&text, &dict).occurrences;
    let (ac, _) = ac_match_with_stats(&AcAutomaton::build(&dict), &text);
    let qsa = match_all(text, &dict, cost, &mut QueryLedger::new())?.occurrences;
    Ok(TrialOutcome {
        qsa,
        ac: ac.occurrences,
        brute,
    })
}

/// Compares the three matchers over `config.trials` random instances. Each
/// trial's quantum simulator is seeded with the trial's instance seed.
pub fn verify_equivalence(config: &VerifyConfig) -> Result<VerifyReport> {
    config.cost.validate()?;
    if config.alphabets.is_empty() {
        return Err(Error::invalid("no alphabet sizes to draw from"));
    }
    let mut report = VerifyReport {
        trials: config.trials,
        mismatches: Vec::new(),
    };
    for t in 0..config.trials {
        let params = config.trial_params(t);
        let cost = config.cost.with_seed(params.seed);
        let outcome = run_trial(&params, &cost)?;
        if outcome.agrees() {
            continue;
        }
        let dump = match &config.dump_dir {
            Some(dir) => Some(write_dump(dir, t, &params, &cost, &outcome)?),
            None => None,
        };
        report.mismatches.push(Mismatch {
            trial: t,
            params,
            cost,
            dump,
        });
    }
    Ok(report)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct DumpParams {
    trial: usize,
    params: InstanceParams,
    cost: CostModelConfig,
}

const DUMP_TEXT: &str = "text.txt";
const DUMP_DICT: &str = "dict.txt";
const DUMP_PARAMS: &str = "params.json";
const DUMP_OUTCOME: &str = "outcome.json";

/// Writes `text.txt`, `dict.txt`, `params.json` and `outcome.json` into a
/// fresh directory under `root`.
pub fn write_dump(
    root: &Path,
    trial: usize,
    params: &InstanceParams,
    cost: &CostModelConfig,
    outcome: &TrialOutcome,
) -> Result<PathBuf> {
    let dir = root.join(format!("trial-{trial:05}-seed-{:016x}", params.seed));
    fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
    let (text, dict) = generate_instance(params)?;
    let meta = DumpParams {
        trial,
        params: *params,
        cost: *cost,
    };
    let files: [(&str, Vec<u8>); 4] = [
        (DUMP_TEXT, text.into_bytes()),
        (DUMP_DICT, dict.to_bytes()),
        (DUMP_PARAMS, serde_json::to_vec_pretty(&meta)?),
        (DUMP_OUTCOME, serde_json::to_vec_pretty(outcome)?),
    ];
    for (name, bytes) in files {
        let path = dir.join(name);
        fs::write(&path, bytes).map_err(|e| Error::io(&path, e))?;
    }
    Ok(dir)
}

/// What a dump replay found.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Replay {
    /// The regenerated instance equals the stored text and dictionary.
    pub instance_matches: bool,
    /// The rerun produced exactly the stored outcome.
    pub outcome_matches: bool,
    pub outcome: TrialOutcome,
}

/// Regenerates a dumped instance from its parameters and reruns it.
pub fn replay_dump(dir: &Path) -> Result<Replay> {
    let read = |name: &str| {
        let path = dir.join(name);
        fs::read(&path).map_err(|e| Error::io(&path, e))
    };
    let meta: DumpParams = serde_json::from_slice(&read(DUMP_PARAMS)?)?;
    let stored: TrialOutcome = serde_json::from_slice(&read(DUMP_OUTCOME)?)?;
    let (text, dict) = generate_instance(&meta.params)?;
    let instance_matches = text.as_bytes() == read(DUMP_TEXT)?.as_slice()
        && Dictionary::parse(&read(DUMP_DICT)?)? == dict;
    let outcome = run_trial(&meta.params, &meta.cost)?;
    Ok(Replay {
        instance_matches,
        outcome_matches: outcome == stored,
        outcome,
    })
}

/// One benchmark row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRecord {
    pub n: usize,
    pub m: usize,
    #[serde(rename = "L")]
    pub total_len: usize,
    pub b: usize,
    pub alphabet_size: usize,
    pub seed: u64,
    /// Border-search queries only; index construction is classical.
    pub quantum_queries: u64,
    /// Index construction reads plus symbol comparisons in the searches.
    pub classical_reads: u64,
    pub ac_symbol_reads: u64,
    pub qsa_wall_ms: f64,
    pub ac_wall_ms: f64,
    pub mismatch: bool,
}

/// Runs one instance through both matchers.
pub fn bench_instance(params: &InstanceParams, config: &CostModelConfig) -> Result<BenchRecord> {
    let (text, dict) = generate_instance(params)?;
    let cost = config.with_seed(mix_seed(config.seed, params.seed));

    let started = Instant::now();
    let mut ledger = QueryLedger::new();
    let index = TextIndex::build(text.clone(), &mut ledger);
    let qsa = match_index(&index, &dict, &cost, &mut ledger)?;
    let qsa_wall_ms = started.elapsed().as_secs_f64() * 1e3;

    let started = Instant::now();
    let (ac, stats) = ac_match_with_stats(&AcAutomaton::build(&dict), &text);
    let ac_wall_ms = started.elapsed().as_secs_f64() * 1e3;

    Ok(BenchRecord {
        n: text.len(),
        m: dict.len(),
        total_len: dict.total_len(),
        b: dict.max_len(),
        alphabet_size: params.alphabet_size,
        seed: params.seed,
        quantum_queries: ledger.quantum_queries(),
        classical_reads: ledger.classical_reads(),
        ac_symbol_reads: stats.symbol_reads,
        qsa_wall_ms,
        ac_wall_ms,
        mismatch: !qsa.same_occurrences(&ac),
    })
}

/// Benchmarks every instance of `sweep` in order and writes the CSV to `sink`.
pub fn run_benchmark<W: Write>(
    sweep: &[InstanceParams],
    config: &CostModelConfig,
    sink: W,
) -> Result<Vec<BenchRecord>> {
    config.validate()?;
    let mut writer = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(sink);
    writer.write_record(CSV_HEADER.split(','))?;
    let mut rows = Vec::with_capacity(sweep.len());
    for params in sweep {
        let row = bench_instance(params, config)?;
        writer.serialize(&row)?;
        rows.push(row);
    }
    writer
        .flush()
        .map_err(|e| Error::io("<benchmark sink>", e))?;
    Ok(rows)
}

/// A rectangular sweep: every combination of `n`, `m` and `b`, each with
/// `seeds` consecutive seeds starting at `base_seed`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepGrid {
    pub n: Vec<usize>,
    pub m: Vec<usize>,
    pub b: Vec<usize>,
    pub alphabet_size: usize,
    #[serde(default)]
    pub planting: Planting,
    pub seeds: u64,
    #[serde(default)]
    pub base_seed: u64,
}

impl SweepGrid {
    pub fn expand(&self) -> Vec<InstanceParams> {
        let mut out = Vec::new();
        for &n in &self.n {
            for &m in &self.m {
                for &b in &self.b {
                    for s in 0..self.seeds {
                        out.push(InstanceParams {
                            n,
                            m,
                            b: PatternLengths::Uniform(b),
                            alphabet_size: self.alphabet_size,
                            planting: self.planting,
                            seed: self.base_seed + s,
                        });
                    }
                }
            }
        }
        out
    }

    /// n = 65536; m in {8, 32, 128}; b in {16, ..., 256}; 20 seeds per cell;
    /// four-letter alphabet with one planted copy of every pattern.
    pub fn scaling_default() -> Self {
        SweepGrid {
            n: vec![65_536],
            m: vec![8, 32, 128],
            b: vec![16, 32, 64, 128, 256],
            alphabet_size: 4,
            planting: Planting::Planted { k: 1 },
            seeds: 20,
            base_seed: 1,
        }
    }
}

/// Contents of a `--sweep` file: either an explicit list of instances or a grid.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Sweep {
    List(Vec<InstanceParams>),
    Grid { grid: SweepGrid },
}

impl Sweep {
    pub fn from_json(bytes: &[u8]) -> Result<Self> {
        Ok(serde_json::from_slice(bytes)?)
    }

    pub fn instances(&self) -> Vec<InstanceParams> {
        match self {
            Sweep::List(v) => v.clone(),
            Sweep::Grid { grid } => grid.expand(),
        }
    }
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 || points.iter().any(|&(x, y)| x <= 0.0 || y <= 0.0) {
        return None;
    }
    let logs: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let k = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / k;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Mean quantum queries per `(n, m, b)` cell, keyed by `m * L`.
pub fn cell_means(rows: &[BenchRecord]) -> Vec<(f64, f64)> {
    // (key, sum of m * L, sum of queries, rows)
    type Cell = ((usize, usize, usize), f64, f64, usize);
    let mut cells: Vec<Cell> = Vec::new();
    for r in rows {
        let key = (r.n, r.m, r.b);
        let ml = (r.m * r.total_len) as f64;
        match cells.iter_mut().find(|c| c.0 == key) {
            Some(c) => {
                c.1 += ml;
                c.2 += r.quantum_queries as f64;
                c.3 += 1;
            }
            None => cells.push((key, ml, r.quantum_queries as f64, 1)),
        }
    }
    cells
        .into_iter()
        .map(|(_, ml, q, k)| (ml / k as f64, q / k as f64))
        .collect()
}
