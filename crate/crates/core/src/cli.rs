//! Command-line surface. `main.rs` only parses arguments and forwards here,
//! so everything below is testable in-process.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, BufReader};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use crate::assembler::{generate, BuildError, BuildOptions, BuildState, GenerateConfig};
use crate::corpus::{build_index, convert_plain, load_corpus, write_corpus, CorpusError};
use crate::criteria::Criterion;
use crate::report::{evaluate_poem, format_value, render, OutputFormat};
use crate::scheme::{parse_scheme, CriterionWeights, MeterPlan, SchemeError};

#[derive(Debug, Parser)]
#[command(name = "metrica", version, about = "Assemble metrical poems from a corpus of scanned sentences")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate one poem.
    Generate(GenerateArgs),
    /// Convert a plain file of scansion lines into a JSONL corpus.
    Convert(ConvertArgs),
}

#[derive(Debug, Clone, Args)]
pub struct GenerateArgs {
    /// JSONL corpus file.
    #[arg(long)]
    pub corpus: PathBuf,
    /// Rhyme scheme, stanzas separated by spaces (e.g. "ABAB ABAB CDC CDC").
    #[arg(long)]
    pub scheme: String,
    /// One meter for all verses, or one per verse; "random" draws it.
    #[arg(long, num_args = 1.., value_delimiter = ',', default_value = "random")]
    pub meters: Vec<String>,
    /// Five weights in ER,ST,AC,RI,RTC order.
    #[arg(long, default_value = "1,1,1,1,1")]
    pub weights: String,
    /// Random seed; drawn from entropy when omitted.
    #[arg(long)]
    pub seed: Option<u64>,
    /// text, table or structured.
    #[arg(long, default_value = "text")]
    pub format: OutputFormat,
    /// Dump every scored candidate per slot to stderr.
    #[arg(long)]
    pub replay_candidates: bool,
    /// Score candidates on a thread pool. Output is identical either way.
    #[arg(long)]
    pub parallel: bool,
}

#[derive(Debug, Clone, Args)]
pub struct ConvertArgs {
    /// Plain text file, one scansion per line.
    pub input: PathBuf,
    /// Output path; stdout when omitted.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

/// Validated generate options.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub corpus_path: PathBuf,
    pub scheme: String,
    pub meters: Vec<String>,
    pub weights: CriterionWeights<f64>,
    pub seed: Option<u64>,
    pub format: OutputFormat,
    pub replay_candidates: bool,
    pub parallel: bool,
}

impl TryFrom<GenerateArgs> for RunConfig {
    type Error = RunError;

    fn try_from(a: GenerateArgs) -> Result<Self, RunError> {
        Ok(RunConfig {
            corpus_path: a.corpus,
            scheme: a.scheme,
            meters: a.meters.iter().flat_map(|m| m.split_whitespace()).map(str::to_string).collect(),
            weights: CriterionWeights::parse(&a.weights)?,
            seed: a.seed,
            format: a.format,
            replay_candidates: a.replay_candidates,
            parallel: a.parallel,
        })
    }
}

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Corpus(#[from] CorpusError),
    #[error(transparent)]
    Config(#[from] SchemeError),
    #[error(transparent)]
    Build(#[from] BuildError),
    #[error("output: {0}")]
    Output(#[from] io::Error),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Corpus(CorpusError::FileNotFound { .. } | CorpusError::Io(_)) => 3,
            RunError::Corpus(_) => 4,
            RunError::Config(_) => 5,
            RunError::Build(BuildError::Scheme(_) | BuildError::Infeasible { .. }) => 6,
            RunError::Build(BuildError::ExhaustedCandidates { .. }) => 7,
            RunError::Build(BuildError::PlacementMismatch { .. }) => 5,
            RunError::Output(_) => 8,
        }
    }

    pub fn stage(&self) -> &'static str {
        match self {
            RunError::Corpus(CorpusError::FileNotFound { .. } | CorpusError::Io(_)) => "corpus",
            RunError::Corpus(_) | RunError::Config(_) => "parse",
            RunError::Build(BuildError::ExhaustedCandidates { .. }) => "exhaustion",
            RunError::Build(_) => "feasibility",
            RunError::Output(_) => "output",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunOutcome {
    pub exit_code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl RunOutcome {
    fn failure(err: RunError, mut stderr: String) -> Self {
        let _ = writeln!(stderr, "error [{}]: {err}", err.stage());
        RunOutcome { exit_code: err.exit_code(), stdout: String::new(), stderr }
    }
}

/// Generate a poem. The effective seed is always the first stderr line.
pub fn run(config: &RunConfig) -> RunOutcome {
    let seed = config.seed.unwrap_or_else(rand::random);
    let stderr = format!("seed: {seed}\n");
    match run_inner(config, seed) {
        Ok((stdout, replay)) => RunOutcome { exit_code: 0, stdout, stderr: stderr + &replay },
        Err(e) => RunOutcome::failure(e, stderr),
    }
}

fn run_inner(config: &RunConfig, seed: u64) -> Result<(String, String), RunError> {
    let entries = load_corpus(&config.corpus_path)?;
    let scheme = parse_scheme(&config.scheme)?;
    let meters = MeterPlan::parse(&config.meters, scheme.verse_count())?;
    let index = build_index(&entries);
    let gen = GenerateConfig {
        scheme,
        meters,
        weights: config.weights,
        seed,
        options: BuildOptions { parallel: config.parallel, trace: config.replay_candidates },
    };
    let state = generate(&gen, &index)?;
    let replay = if config.replay_candidates { render_replay(&state) } else { String::new() };
    Ok((render(&evaluate_poem(&state), config.format), replay))
}

/// Per scored slot, every candidate with its criteria; the winner is starred.
pub fn render_replay(state: &BuildState<f64>) -> String {
    let mut out = String::new();
    for t in &state.trace {
        let _ = writeln!(
            out,
            "slot {} (letter {}, {} candidates)",
            t.slot.verse_index + 1,
            t.slot.letter,
            t.candidates.len()
        );
        for (i, (verse, score)) in t.candidates.iter().enumerate() {
            let mark = if i == t.chosen { '*' } else { ' ' };
            let crit: Vec<String> = Criterion::ALL
                .iter()
                .map(|&c| format!("{}={}", c, score.get(c).map(format_value).unwrap_or_else(|| "-".into())))
                .collect();
            let total = score.score.map(format_value).unwrap_or_else(|| "-".into());
            let _ = writeln!(out, " {mark} {total:>6}  {}  {}", crit.join(" "), verse.scansion);
        }
    }
    out
}

pub fn run_convert(args: &ConvertArgs) -> RunOutcome {
    let result = (|| -> Result<String, RunError> {
        let file = fs::File::open(&args.input).map_err(|e| match e.kind() {
            io::ErrorKind::NotFound => CorpusError::FileNotFound { path: args.input.clone() },
            _ => CorpusError::Io(e),
        })?;
        let entries = convert_plain(BufReader::new(file))?;
        let mut buf = Vec::new();
        write_corpus(&entries, &mut buf)?;
        match &args.output {
            Some(path) => {
                fs::write(path, &buf)?;
                Ok(String::new())
            }
            None => Ok(String::from_utf8(buf).expect("json is utf-8")),
        }
    })();
    match result {
        Ok(stdout) => RunOutcome { exit_code: 0, stdout, stderr: String::new() },
        Err(e) => RunOutcome::failure(e, String::new()),
    }
}

/// Dispatch a parsed command line.
pub fn dispatch(cli: Cli) -> RunOutcome {
    match cli.command {
        Command::Generate(args) => match RunConfig::try_from(args) {
            Ok(config) => run(&config),
            Err(e) => RunOutcome::failure(e, String::new()),
        },
        Command::Convert(args) => run_convert(&args),
    }
}
