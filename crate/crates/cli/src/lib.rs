//! Command implementations behind the `cpm` binary.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use cpm_core::persist::{load_index, save_index};
use cpm_core::synth::{RepetitiveCorpus, SynthError};
use cpm_core::{
    oracle_contexts, ContextMatch, CpmIndex, MappingStrategy, QueryStats, Symbol, Text,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

pub mod escape;

use escape::{escape_bytes, parse_pattern};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("{0}")]
    Index(#[from] cpm_core::Error),
    #[error(transparent)]
    Output(#[from] io::Error),
    #[error("verification failed: {0} of {1} queries disagree with the oracle")]
    VerifyFailed(usize, usize),
}

impl From<SynthError> for CliError {
    fn from(e: SynthError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl CliError {
    /// 1 verification failure, 2 usage error, 3 IO/format error.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::VerifyFailed(..) => 1,
            CliError::Usage(_) => 2,
            CliError::Index(cpm_core::Error::EmptyPattern | cpm_core::Error::SentinelInPattern) => {
                2
            }
            CliError::Io { .. } | CliError::Index(_) | CliError::Output(_) => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "cpm", version, about = "Contextual pattern matching indexes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build an index over a text file.
    Build {
        text: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Report one range per distinct context of a pattern.
    Query(QueryArgs),
    /// Compare query results with the brute-force oracle.
    Verify {
        text: PathBuf,
        #[arg(long, default_value_t = 100)]
        queries: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 8)]
        max_ell: usize,
    },
    /// Time queries and write one CSV row per query.
    Bench(BenchArgs),
    /// Write a random base string followed by mutated copies of it.
    GenCorpus {
        #[arg(long)]
        base: usize,
        #[arg(long)]
        copies: usize,
        #[arg(long, default_value_t = 0.0)]
        mut_rate: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Alphabet size; letters are drawn from `a..`.
        #[arg(long, default_value_t = 4)]
        sigma: usize,
        #[arg(short, long)]
        output: PathBuf,
    },
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Tsv,
    Json,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Strategy {
    #[default]
    PsvNsv,
    Cmin,
}

impl From<Strategy> for MappingStrategy {
    fn from(s: Strategy) -> Self {
        match s {
            Strategy::PsvNsv => MappingStrategy::PsvNsv,
            Strategy::Cmin => MappingStrategy::CMin,
        }
    }
}

#[derive(Debug, Args)]
pub struct QueryArgs {
    pub index: PathBuf,
    /// Pattern bytes; `\xNN` and `\\` are escapes.
    #[arg(long)]
    pub pattern: String,
    #[arg(long)]
    pub context: usize,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
    /// Also list every occurrence position.
    #[arg(long)]
    pub enumerate: bool,
    #[arg(long, value_enum, default_value_t)]
    pub strategy: Strategy,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("source").required(true).args(["patterns", "random"])))]
pub struct BenchArgs {
    pub index: PathBuf,
    /// One pattern per line, optionally followed by a tab and a context length.
    #[arg(long)]
    pub patterns: Option<PathBuf>,
    /// Number of patterns to sample from the text.
    #[arg(long)]
    pub random: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Context length for pattern lines without one.
    #[arg(long, default_value_t = 2)]
    pub context: usize,
    /// Largest context length drawn with `--random`.
    #[arg(long, default_value_t = 8)]
    pub max_ell: usize,
    #[arg(long, value_enum, default_value_t)]
    pub strategy: Strategy,
    #[arg(long)]
    pub csv: PathBuf,
}

pub fn run(cli: Cli, out: &mut dyn Write) -> Result<()> {
    match cli.command {
        Command::Build { text, output } => cmd_build(&text, &output, out),
        Command::Query(args) => cmd_query(&args, out),
        Command::Verify {
            text,
            queries,
            seed,
            max_ell,
        } => {
            let text = read_text(&text)?;
            let cfg = VerifyConfig {
                queries,
                seed,
                max_ell,
            };
            verify(&text, &cfg, &default_engine, out)
        }
        Command::Bench(args) => cmd_bench(&args, out),
        Command::GenCorpus {
            base,
            copies,
            mut_rate,
            seed,
            sigma,
            output,
        } => {
            let corpus = RepetitiveCorpus {
                base_len: base,
                copies,
                mutation_rate: mut_rate,
                sigma,
                seed,
            }
            .generate()?;
            std::fs::write(&output, &corpus).map_err(|source| CliError::Io {
                path: output,
                source,
            })?;
            Ok(())
        }
    }
}

fn read_text(path: &Path) -> Result<Text> {
    let raw = std::fs::read(path).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })?;
    Ok(Text::from_bytes(&raw)?)
}

fn open_index(path: &Path) -> Result<CpmIndex> {
    let file = File::open(path).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })?;
    Ok(load_index(io::BufReader::new(file))?)
}

pub fn cmd_build(text: &Path, output: &Path, out: &mut dyn Write) -> Result<()> {
    let ix = CpmIndex::build(read_text(text)?)?;
    let file = File::create(output).map_err(|source| CliError::Io {
        path: output.to_owned(),
        source,
    })?;
    save_index(&ix, BufWriter::new(file))?;
    let runs = ix.runs();
    writeln!(
        out,
        "n={}\tsigma={}\tr={}\tr_rev={}\tr_bar={}",
        ix.n(),
        ix.text().sigma(),
        runs.r,
        runs.r_rev,
        runs.r_bar()
    )?;
    Ok(())
}

/// Renders a context, showing the sentinel as `$`.
fn render_context(t: &Text, context: &[Symbol]) -> String {
    t.decode_symbols(context)
        .into_iter()
        .map(|b| match b {
            Some(b) => escape_bytes(&[b]),
            None => "$".to_string(),
        })
        .collect()
}

pub fn cmd_query(args: &QueryArgs, out: &mut dyn Write) -> Result<()> {
    let pattern = parse_pattern(&args.pattern)?;
    if pattern.is_empty() {
        return Err(CliError::Usage("pattern is empty".into()));
    }
    let ix = open_index(&args.index)?;
    let mut stats = QueryStats::default();
    let matches = ix.query_bytes(&pattern, args.context, args.strategy.into(), &mut stats)?;
    for mch in &matches {
        let context = render_context(ix.text(), &mch.context);
        let positions = args.enumerate.then(|| {
            let mut p = ix.enumerate_occurrences(mch);
            p.sort_unstable();
            p
        });
        match args.format {
            Format::Tsv => {
                write!(
                    out,
                    "{}\t{}\t{}\t{}\t{}",
                    context, mch.range.lo, mch.range.hi, mch.count, mch.rep_position
                )?;
                if let Some(p) = positions {
                    let joined: Vec<String> = p.iter().map(usize::to_string).collect();
                    write!(out, "\t{}", joined.join(","))?;
                }
                writeln!(out)?;
            }
            Format::Json => {
                let mut rec = serde_json::json!({
                    "context": context,
                    "ds": mch.range.lo,
                    "de": mch.range.hi,
                    "count": mch.count,
                    "rep_position": mch.rep_position,
                });
                if let Some(p) = positions {
                    rec["positions"] = serde_json::json!(p);
                }
                writeln!(out, "{}", rec)?;
            }
        }
    }
    Ok(())
}

/// Settings for [`verify`].
#[derive(Clone, Copy, Debug)]
pub struct VerifyConfig {
    pub queries: usize,
    pub seed: u64,
    pub max_ell: usize,
}

/// A query implementation under test.
pub type Engine =
    dyn Fn(&CpmIndex, &[u8], usize, MappingStrategy) -> cpm_core::Result<Vec<ContextMatch>>;

pub fn default_engine(
    ix: &CpmIndex,
    pattern: &[u8],
    ell: usize,
    strategy: MappingStrategy,
) -> cpm_core::Result<Vec<ContextMatch>> {
    ix.query_bytes(pattern, ell, strategy, &mut QueryStats::default())
}

type ContextMap = BTreeMap<Vec<Symbol>, Vec<usize>>;

fn describe(t: &Text, map: &ContextMap) -> String {
    if map.is_empty() {
        return "(none)".into();
    }
    map.iter()
        .map(|(ctx, pos)| format!("{}:{:?}", render_context(t, ctx), pos))
        .collect::<Vec<_>>()
        .join(" ")
}

/// Samples patterns (mostly from the text, some random) and context lengths,
/// and checks both mapping strategies against the oracle. Prints a
/// reproduction for the first disagreement.
pub fn verify(text: &Text, cfg: &VerifyConfig, engine: &Engine, out: &mut dyn Write) -> Result<()> {
    let ix = CpmIndex::build(text.clone())?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let raw = text.to_bytes();
    let alphabet = text.alphabet().bytes().to_vec();
    let mut failures = 0;

    for _ in 0..cfg.queries {
        let pattern: Vec<u8> = if rng.gen_bool(0.8) {
            let start = rng.gen_range(0..raw.len());
            let len = rng.gen_range(1..=8usize.min(raw.len() - start));
            raw[start..start + len].to_vec()
        } else {
            let len = rng.gen_range(1..=6);
            (0..len)
                .map(|_| {
                    if rng.gen_bool(0.1) {
                        // Usually a byte the text lacks.
                        rng.gen_range(1..=255u8)
                    } else {
                        alphabet[rng.gen_range(0..alphabet.len())]
                    }
                })
                .collect()
        };
        let ell = rng.gen_range(0..=cfg.max_ell);

        let expected: ContextMap = match text.encode_pattern(&pattern) {
            Some(p) => oracle_contexts(text, &p, ell).contexts,
            None => ContextMap::new(),
        };

        for strategy in [MappingStrategy::PsvNsv, MappingStrategy::CMin] {
            let got = engine(&ix, &pattern, ell, strategy).map(|ms| {
                let mut map = ContextMap::new();
                let mut dupes = 0;
                for m in &ms {
                    let mut p = ix.enumerate_occurrences(m);
                    p.sort_unstable();
                    if map.insert(m.context.clone(), p).is_some() {
                        dupes += 1;
                    }
                }
                (map, dupes)
            });
            let ok = matches!(&got, Ok((map, 0)) if *map == expected);
            if ok {
                continue;
            }
            failures += 1;
            if failures == 1 {
                let excerpt = if raw.len() <= 200 {
                    escape_bytes(&raw)
                } else {
                    format!("{}... ({} bytes)", escape_bytes(&raw[..200]), raw.len())
                };
                writeln!(out, "MISMATCH")?;
                writeln!(out, "text:     {}", excerpt)?;
                writeln!(out, "pattern:  {}", escape_bytes(&pattern))?;
                writeln!(out, "context:  {}", ell)?;
                writeln!(out, "strategy: {:?}", strategy)?;
                writeln!(out, "expected: {}", describe(text, &expected))?;
                match &got {
                    Ok((map, dupes)) => {
                        writeln!(out, "got:      {}", describe(text, map))?;
                        if *dupes > 0 {
                            writeln!(out, "          ({} duplicate contexts)", dupes)?;
                        }
                    }
                    Err(e) => writeln!(out, "got:      error: {}", e)?,
                }
            }
        }
    }

    let total = 2 * cfg.queries;
    if failures > 0 {
        return Err(CliError::VerifyFailed(failures, total));
    }
    writeln!(
        out,
        "ok: {} queries x 2 strategies agree with the oracle",
        cfg.queries
    )?;
    Ok(())
}

/// One timed query.
#[derive(Clone, Debug, PartialEq)]
pub struct BenchRecord {
    pub m: usize,
    pub ell: usize,
    pub c: usize,
    pub occ: usize,
    pub wall_ns: u128,
    pub rmq_calls: u64,
    pub psv_calls: u64,
    pub nsv_calls: u64,
    pub r: usize,
    pub r_rev: usize,
    pub r_bar: usize,
    pub n: usize,
}

pub const BENCH_HEADER: &str = "m,ell,c,occ,wall_ns,rmq_calls,psv_calls,nsv_calls,r,r_rev,r_bar,n";

impl BenchRecord {
    fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            self.m,
            self.ell,
            self.c,
            self.occ,
            self.wall_ns,
            self.rmq_calls,
            self.psv_calls,
            self.nsv_calls,
            self.r,
            self.r_rev,
            self.r_bar,
            self.n
        )
    }
}

fn bench_workload(ix: &CpmIndex, args: &BenchArgs) -> Result<Vec<(Vec<u8>, usize)>> {
    if let Some(path) = &args.patterns {
        let body = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        })?;
        let mut work = Vec::new();
        for (lineno, line) in body.lines().enumerate() {
            if line.is_empty() {
                continue;
            }
            let (pat, ell) = match line.split_once('\t') {
                Some((p, e)) => {
                    let ell = e.trim().parse().map_err(|_| {
                        CliError::Usage(format!(
                            "{}:{}: bad context length {:?}",
                            path.display(),
                            lineno + 1,
                            e
                        ))
                    })?;
                    (p, ell)
                }
                None => (line, args.context),
            };
            let pattern = parse_pattern(pat)?;
            if pattern.is_empty() {
                return Err(CliError::Usage(format!(
                    "{}:{}: empty pattern",
                    path.display(),
                    lineno + 1
                )));
            }
            work.push((pattern, ell));
        }
        return Ok(work);
    }
    let count = args.random.unwrap_or(0);
    let raw = ix.text().to_bytes();
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    Ok((0..count)
        .map(|_| {
            let start = rng.gen_range(0..raw.len());
            let len = rng.gen_range(1..=8usize.min(raw.len() - start));
            (
                raw[start..start + len].to_vec(),
                rng.gen_range(0..=args.max_ell),
            )
        })
        .collect())
}

pub fn cmd_bench(args: &BenchArgs, out: &mut dyn Write) -> Result<()> {
    let ix = open_index(&args.index)?;
    let runs = ix.runs();
    let work = bench_workload(&ix, args)?;
    let file = File::create(&args.csv).map_err(|source| CliError::Io {
        path: args.csv.clone(),
        source,
    })?;
    let mut csv = BufWriter::new(file);
    writeln!(csv, "{}", BENCH_HEADER)?;
    for (pattern, ell) in &work {
        let mut stats = QueryStats::default();
        let start = Instant::now();
        let matches = ix.query_bytes(pattern, *ell, args.strategy.into(), &mut stats)?;
        let wall_ns = start.elapsed().as_nanos();
        let rec = BenchRecord {
            m: pattern.len(),
            ell: *ell,
            c: matches.len(),
            occ: matches.iter().map(|m| m.count).sum(),
            wall_ns,
            rmq_calls: stats.rmq_calls,
            psv_calls: stats.psv_calls,
            nsv_calls: stats.nsv_calls,
            r: runs.r,
            r_rev: runs.r_rev,
            r_bar: runs.r_bar(),
            n: ix.n(),
        };
        writeln!(csv, "{}", rec.csv_row())?;
    }
    csv.flush()?;
    writeln!(out, "wrote {} rows to {}", work.len(), args.csv.display())?;
    Ok(())
}
