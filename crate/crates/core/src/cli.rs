//! The `qsa` command-line interface.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::baseline::{ac_match, brute_force_match, AcAutomaton};
use crate::error::{Error, Result};
use crate::harness::{self, Sweep, VerifyConfig};
use crate::ledger::QueryLedger;
use crate::matcher::{match_all, Dictionary, MatchReport};
use crate::qlcp::{CostMode, CostModelConfig};
use crate::suffix_index::Text;

#[derive(Debug, Parser)]
#[command(
    name = "qsa",
    version,
    about = "Suffix-array multiple string matching with simulated quantum LCP query accounting"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Locate every dictionary pattern in a text file.
    Match(MatchArgs),
    /// Compare all matchers on random instances.
    Verify(VerifyArgs),
    /// Write query counts and timings for a sweep of instances as CSV.
    Bench(BenchArgs),
    /// Rerun a reproduction directory written by `verify --dump-dir`.
    Replay { dir: PathBuf },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Engine {
    Qsa,
    Ac,
    Brute,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Tsv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CostModeArg {
    Deterministic,
    Stochastic,
}

#[derive(Debug, Args)]
struct CostArgs {
    /// Multiplier on the square-root query charge.
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    #[arg(long, value_enum, default_value_t = CostModeArg::Deterministic)]
    cost_mode: CostModeArg,
    /// Probability that a simulated First-One Search overshoots.
    #[arg(long, default_value_t = 0.0)]
    error_p: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl CostArgs {
    fn config(&self) -> Result<CostModelConfig> {
        let mode = match self.cost_mode {
            CostModeArg::Deterministic => CostMode::Deterministic,
            CostModeArg::Stochastic => CostMode::Stochastic,
        };
        let config = CostModelConfig {
            alpha: self.alpha,
            mode,
            ..Default::default()
        }
        .with_overshoot(self.error_p)
        .with_seed(self.seed);
        config.validate()?;
        Ok(config)
    }
}

#[derive(Debug, Args)]
struct MatchArgs {
    #[arg(long)]
    text: PathBuf,
    /// One pattern per line.
    #[arg(long)]
    dict: PathBuf,
    #[arg(long, value_enum, default_value_t = Engine::Qsa)]
    engine: Engine,
    #[arg(long, value_enum, default_value_t = OutputFormat::Tsv)]
    output: OutputFormat,
    /// Print the query ledger to stderr.
    #[arg(long)]
    stats: bool,
    #[command(flatten)]
    cost: CostArgs,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    #[arg(long, default_value_t = 2000)]
    max_n: usize,
    #[arg(long, default_value_t = 50)]
    max_m: usize,
    #[arg(long, default_value_t = 20)]
    max_len: usize,
    /// Alphabet sizes to draw from.
    #[arg(long, value_delimiter = ',', default_values_t = [2usize, 4])]
    alphabets: Vec<usize>,
    /// Write a reproduction directory for every failing trial.
    #[arg(long)]
    dump_dir: Option<PathBuf>,
    /// Exit successfully even when trials disagree.
    #[arg(long)]
    allow_mismatch: bool,
    #[command(flatten)]
    cost: CostArgs,
}

#[derive(Debug, Args)]
struct BenchArgs {
    /// JSON list of instances, or {"grid": {...}}.
    #[arg(long)]
    sweep: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[command(flatten)]
    cost: CostArgs,
}

#[derive(Serialize)]
struct JsonMatch<'a> {
    pattern_index: usize,
    positions: &'a [usize],
}

fn read(path: &Path) -> Result<Vec<u8>> {
    fs::read(path).map_err(|e| Error::io(path, e))
}

/// Renders occurrences as `index<TAB>p1,p2,...` lines.
pub fn format_tsv(occurrences: &[Vec<usize>]) -> String {
    let mut out = String::new();
    for (j, positions) in occurrences.iter().enumerate() {
        let list: Vec<String> = positions.iter().map(usize::to_string).collect();
        out.push_str(&format!("{}\t{}\n", j + 1, list.join(",")));
    }
    out
}

/// Renders occurrences as a JSON list of `{pattern_index, positions}`.
pub fn format_json(occurrences: &[Vec<usize>]) -> Result<String> {
    let items: Vec<JsonMatch> = occurrences
        .iter()
        .enumerate()
        .map(|(j, positions)| JsonMatch {
            pattern_index: j + 1,
            positions,
        })
        .collect();
    Ok(serde_json::to_string(&items)? + "\n")
}

fn run_match(args: &MatchArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let config = args.cost.config()?;
    let text = Text::new(read(&args.text)?)?;
    let dict = Dictionary::parse(&read(&args.dict)?)?;
    let report: MatchReport = match args.engine {
        Engine::Qsa => match_all(text, &dict, &config, &mut QueryLedger::new())?,
        Engine::Ac => ac_match(&AcAutomaton::build(&dict), &text),
        Engine::Brute => brute_force_match(&text, &dict),
    };
    let rendered = match args.output {
        OutputFormat::Tsv => format_tsv(&report.occurrences),
        OutputFormat::Json => format_json(&report.occurrences)?,
    };
    write_all(out, rendered.as_bytes())?;
    if args.stats {
        let line = format!(
            "classical_reads={} quantum_queries={}\n",
            report.ledger.classical_reads(),
            report.ledger.quantum_queries()
        );
        write_all(err, line.as_bytes())?;
    }
    Ok(0)
}

fn run_verify(args: &VerifyArgs, out: &mut dyn Write) -> Result<i32> {
    let config = VerifyConfig {
        trials: args.trials,
        max_n: args.max_n,
        max_m: args.max_m,
        max_pattern_len: args.max_len,
        alphabets: args.alphabets.clone(),
        seed: args.cost.seed,
        cost: args.cost.config()?,
        dump_dir: args.dump_dir.clone(),
    };
    let report = harness::verify_equivalence(&config)?;
    let mut text = format!(
        "trials={} mismatches={}\n",
        report.trials,
        report.mismatches.len()
    );
    for m in &report.mismatches {
        text.push_str(&format!(
            "mismatch trial={} seed={}",
            m.trial, m.params.seed
        ));
        if let Some(dir) = &m.dump {
            text.push_str(&format!(" dump={}", dir.display()));
        }
        text.push('\n');
    }
    write_all(out, text.as_bytes())?;
    Ok(if report.is_clean() || args.allow_mismatch {
        0
    } else {
        1
    })
}

fn run_bench(args: &BenchArgs, out: &mut dyn Write) -> Result<i32> {
    let config = args.cost.config()?;
    let sweep = Sweep::from_json(&read(&args.sweep)?)?.instances();
    let file = fs::File::create(&args.out).map_err(|e| Error::io(&args.out, e))?;
    let rows = harness::run_benchmark(&sweep, &config, file)?;
    let line = format!("rows={} out={}\n", rows.len(), args.out.display());
    write_all(out, line.as_bytes())?;
    Ok(0)
}

fn run_replay(dir: &Path, out: &mut dyn Write) -> Result<i32> {
    let replay = harness::replay_dump(dir)?;
    let line = format!(
        "instance_matches={} outcome_matches={} agrees={}\n",
        replay.instance_matches,
        replay.outcome_matches,
        replay.outcome.agrees()
    );
    write_all(out, line.as_bytes())?;
    Ok(if replay.instance_matches && replay.outcome_matches {
        0
    } else {
        1
    })
}

fn write_all(w: &mut dyn Write, bytes: &[u8]) -> Result<()> {
    w.write_all(bytes).map_err(|e| Error::io("<output>", e))
}

/// Parses `argv` (including the program name) and runs the command,
/// returning the process exit status.
pub fn cli_main<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let status = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = target.write_all(rendered.as_bytes());
            return status;
        }
    };
    let result = match &cli.command {
        Command::Match(args) => run_match(args, out, err),
        Command::Verify(args) => run_verify(args, out),
        Command::Bench(args) => run_bench(args, out),
        Command::Replay { dir } => run_replay(dir, out),
    };
    match result {
        Ok(status) => status,
        Err(e) => {
            let _ = writeln!(err, "qsa: {e}");
            1
        }
    }
}
