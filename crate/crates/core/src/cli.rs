//! Command line driver.
//!
//! Exit codes: 0 success, 1 usage, 2 input parse or I/O, 3 contract
//! violation (including a brute-force refusal).

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::corpus::{parse_corpus, Corpus, PhonemeInventory};
use crate::error::Error;
use crate::evaluation::{boundary_score, type_score};
use crate::hypothesis::build_lexicon;
use crate::mdl::{total_dl, DLReport};
use crate::phonotactics::{extract_rules, ClusterRules};
use crate::report::{
    fmt_percent, BaselineReport, CorpusSummary, HypothesisSummary, RunMetadata, ScoreReport,
    SegmentReport, Verdict, VerifyReport,
};
use crate::search::{
    brute_force, greedy_search, run_trials, SearchConfig, DEFAULT_BRUTE_FORCE_LIMIT, TIE_TOLERANCE,
};

pub const EXIT_USAGE: u8 = 1;
pub const EXIT_INPUT: u8 = 2;
pub const EXIT_CONTRACT: u8 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "mdlseg",
    version,
    about = "MDL word segmentation of phoneme sequences"
)]
pub struct Cli {
    /// Worker threads for candidate evaluation and trials.
    #[arg(long, global = true, env = "MDLSEG_THREADS")]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Greedy MDL segmentation (dist-free, dist-phono).
    Segment(SegmentArgs),
    /// Random insertion baselines (rand-free, rand-phono).
    Baseline(BaselineArgs),
    /// Compare the greedy search with exhaustive enumeration.
    #[command(alias = "verify")]
    Brute(BruteArgs),
    /// Score a segmented hypothesis file against a gold corpus.
    Score(ScoreArgs),
    /// Read word-boundary cluster rules off a gold corpus.
    ExtractRules(ExtractArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    DistFree,
    DistPhono,
    RandFree,
    RandPhono,
}

impl Mode {
    fn name(self) -> &'static str {
        match self {
            Mode::DistFree => "dist-free",
            Mode::DistPhono => "dist-phono",
            Mode::RandFree => "rand-free",
            Mode::RandPhono => "rand-phono",
        }
    }

    fn phono(self) -> bool {
        matches!(self, Mode::DistPhono | Mode::RandPhono)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Table,
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct InputArgs {
    #[arg(long)]
    pub corpus: PathBuf,
    #[arg(long)]
    pub inventory: PathBuf,
    /// Cluster rules file; required by the phono modes.
    #[arg(long)]
    pub rules: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long = "out", value_enum, default_value = "table")]
    pub format: OutputFormat,
    /// Write the report here instead of standard output.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SegmentArgs {
    #[arg(long, value_enum)]
    pub mode: Mode,
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub output: OutputArgs,
    /// Recorded in the report; the greedy search itself is deterministic.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Also write the step trace as CSV.
    #[arg(long)]
    pub trace: Option<PathBuf>,
    /// Stop once no candidate shortens the committed hypothesis.
    #[arg(long)]
    pub stop_early: bool,
}

#[derive(Debug, Args)]
pub struct BaselineArgs {
    #[arg(long, value_enum)]
    pub mode: Mode,
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub output: OutputArgs,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
    /// Points to insert per trial; defaults to the gold boundary count.
    #[arg(long)]
    pub k: Option<usize>,
}

#[derive(Debug, Args)]
pub struct BruteArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub output: OutputArgs,
    #[arg(long, default_value_t = DEFAULT_BRUTE_FORCE_LIMIT)]
    pub limit: usize,
}

#[derive(Debug, Args)]
pub struct ScoreArgs {
    /// Gold corpus.
    #[arg(long)]
    pub corpus: PathBuf,
    /// Hypothesis in the same word-separated format.
    #[arg(long)]
    pub hypothesis: PathBuf,
    #[arg(long)]
    pub inventory: PathBuf,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ExtractArgs {
    #[arg(long)]
    pub corpus: PathBuf,
    #[arg(long)]
    pub inventory: PathBuf,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Run(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Run(e)
    }
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Run(Error::Parse { .. } | Error::Io { .. }) => EXIT_INPUT,
            CliError::Run(Error::Contract(_) | Error::TooManyCandidates { .. }) => EXIT_CONTRACT,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "usage error: {msg}"),
            CliError::Run(e) => write!(f, "{e}"),
        }
    }
}

/// Parses arguments, runs, prints diagnostics, and maps errors to exit codes.
pub fn main_with_args<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    ExitCode::SUCCESS
                }
                _ => ExitCode::from(EXIT_USAGE),
            };
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("mdlseg: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

pub fn run(cli: &Cli) -> Result<(), CliError> {
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(CliError::Usage("--threads must be positive".into()));
        }
        pool = pool.num_threads(n);
    }
    let pool = pool
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start thread pool: {e}")))?;
    pool.install(|| match &cli.command {
        Command::Segment(args) => segment(args),
        Command::Baseline(args) => baseline(args),
        Command::Brute(args) => brute(args),
        Command::Score(args) => score(args),
        Command::ExtractRules(args) => extract(args),
    })
}

fn read(path: &Path) -> Result<String, Error> {
    fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_owned(),
        source,
    })
}

fn shown(path: &Path) -> String {
    path.display().to_string()
}

fn load_inventory(path: &Path) -> Result<PhonemeInventory, Error> {
    PhonemeInventory::parse(&read(path)?).map_err(|e| e.with_source_name(shown(path)))
}

fn load_corpus(path: &Path, inventory: &PhonemeInventory) -> Result<Corpus, Error> {
    parse_corpus(&read(path)?, inventory).map_err(|e| e.with_source_name(shown(path)))
}

fn load_rules(path: &Path, inventory: &PhonemeInventory) -> Result<ClusterRules, Error> {
    ClusterRules::parse(&read(path)?, inventory).map_err(|e| e.with_source_name(shown(path)))
}

struct Inputs {
    corpus: Corpus,
    rules: Option<ClusterRules>,
    metadata: RunMetadata,
}

fn load_inputs(
    subcommand: &str,
    input: &InputArgs,
    mode: Option<Mode>,
) -> Result<Inputs, CliError> {
    if let Some(mode) = mode {
        if mode.phono() && input.rules.is_none() {
            return Err(CliError::Usage(format!(
                "--mode {} requires --rules",
                mode.name()
            )));
        }
    }
    let inventory = load_inventory(&input.inventory)?;
    let corpus = load_corpus(&input.corpus, &inventory)?;
    let use_rules = mode.map_or(input.rules.is_some(), Mode::phono);
    let rules = match (&input.rules, use_rules) {
        (Some(path), true) => Some(load_rules(path, &inventory)?),
        _ => None,
    };
    let mut metadata =
        RunMetadata::new(subcommand, &shown(&input.corpus), &shown(&input.inventory));
    metadata.mode = mode.map(|m| m.name().to_owned());
    metadata.rules = rules.as_ref().and(input.rules.as_deref()).map(shown);
    Ok(Inputs {
        corpus,
        rules,
        metadata,
    })
}

fn emit(output: &OutputArgs, text: &str) -> Result<(), CliError> {
    match &output.output {
        Some(path) => fs::write(path, text).map_err(|source| {
            Error::Io {
                path: path.clone(),
                source,
            }
            .into()
        }),
        None => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(text.as_bytes());
            Ok(())
        }
    }
}

fn to_json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

fn dl_table(out: &mut String, label: &str, dl: &DLReport) {
    let _ = writeln!(
        out,
        "{label:<22}{:>10.1} bits  (words {:.1}, codes {:.1}, sample {:.1})",
        dl.total_bits, dl.word_inventory_bits, dl.code_inventory_bits, dl.sample_bits
    );
}

fn segment(args: &SegmentArgs) -> Result<(), CliError> {
    if !matches!(args.mode, Mode::DistFree | Mode::DistPhono) {
        return Err(CliError::Usage(
            "segment takes --mode dist-free or dist-phono".into(),
        ));
    }
    let Inputs {
        corpus,
        rules,
        mut metadata,
    } = load_inputs("segment", &args.input, Some(args.mode))?;
    metadata.seed = args.seed;
    metadata.stop_when_no_improvement = Some(args.stop_early);

    let config = SearchConfig {
        phonotactics: rules,
        seed: args.seed,
        stop_when_no_improvement: args.stop_early,
        ..SearchConfig::free()
    };
    let outcome = greedy_search(&corpus, &config);
    if let Some(path) = &args.trace {
        fs::write(path, outcome.trace.to_csv()).map_err(|source| Error::Io {
            path: path.clone(),
            source,
        })?;
    }

    let (boundaries, types) = match corpus.gold() {
        Some(gold) => (
            Some(boundary_score(&outcome.best, gold)?),
            Some(type_score(
                &build_lexicon(&corpus, &outcome.best),
                &build_lexicon(&corpus, gold),
            )),
        ),
        None => (None, None),
    };
    let report = SegmentReport {
        metadata,
        corpus: CorpusSummary::of(&corpus),
        description_length: outcome.report,
        unsegmented_description_length: outcome.trace.initial,
        boundaries,
        types,
        steps: outcome.trace.steps.len(),
        same_word_pair_steps: outcome.trace.steps.iter().filter(|s| s.same_word).count(),
        boundaries_inserted: outcome.best.boundary_count(),
        segmentation: corpus.render(&outcome.best),
    };

    let text = match args.output.format {
        OutputFormat::Json => to_json(&report),
        OutputFormat::Csv => outcome.trace.to_csv(),
        OutputFormat::Table => {
            let mut out = String::new();
            let _ = writeln!(out, "mode                  {}", args.mode.name());
            dl_table(
                &mut out,
                "unsegmented",
                &report.unsegmented_description_length,
            );
            dl_table(&mut out, "best hypothesis", &report.description_length);
            let _ = writeln!(out, "steps                 {}", report.steps);
            let _ = writeln!(out, "boundaries inserted   {}", report.boundaries_inserted);
            if let (Some(b), Some(t)) = (&report.boundaries, &report.types) {
                let _ = writeln!(out, "% recall              {}", fmt_percent(b.recall));
                let _ = writeln!(out, "% accuracy            {}", fmt_percent(b.accuracy));
                let _ = writeln!(out, "% type recall         {}", fmt_percent(t.recall));
                let _ = writeln!(out, "% type accuracy       {}", fmt_percent(t.accuracy));
            }
            out
        }
    };
    emit(&args.output, &text)
}

fn baseline(args: &BaselineArgs) -> Result<(), CliError> {
    if !matches!(args.mode, Mode::RandFree | Mode::RandPhono) {
        return Err(CliError::Usage(
            "baseline takes --mode rand-free or rand-phono".into(),
        ));
    }
    if args.trials == 0 {
        return Err(CliError::Usage("--trials must be at least 1".into()));
    }
    let Inputs {
        corpus,
        rules,
        mut metadata,
    } = load_inputs("baseline", &args.input, Some(args.mode))?;
    let k = match (args.k, corpus.gold()) {
        (Some(k), _) => k,
        (None, Some(gold)) => gold.boundary_count(),
        (None, None) => return Err(CliError::Usage("--k is required without gold".into())),
    };
    metadata.seed = args.seed;
    metadata.trials = Some(args.trials);
    metadata.k = Some(k);

    let summary = run_trials(&corpus, k, rules.as_ref(), args.trials, args.seed)?;
    let report = BaselineReport {
        metadata,
        corpus: CorpusSummary::of(&corpus),
        summary,
    };
    let s = &report.summary;
    let text = match args.output.format {
        OutputFormat::Json => to_json(&report),
        OutputFormat::Csv => format!(
            "mode,trials,k,recall,accuracy,typeRecall,typeAccuracy,undefinedAccuracy\n{},{},{},{},{},{},{},{}\n",
            args.mode.name(),
            s.trials,
            s.k,
            s.mean_recall.map_or(String::new(), |v| v.to_string()),
            s.mean_accuracy.map_or(String::new(), |v| v.to_string()),
            s.mean_type_recall.map_or(String::new(), |v| v.to_string()),
            s.mean_type_accuracy.map_or(String::new(), |v| v.to_string()),
            s.undefined_accuracy
        ),
        OutputFormat::Table => {
            let mut out = String::new();
            let _ = writeln!(out, "mode                  {}", args.mode.name());
            let _ = writeln!(out, "trials                {}", s.trials);
            let _ = writeln!(out, "points per trial      {} (mean placed {:.1})", s.k, s.mean_placed);
            let _ = writeln!(out, "% recall              {}", fmt_percent(s.mean_recall));
            let _ = writeln!(out, "% accuracy            {}", fmt_percent(s.mean_accuracy));
            let _ = writeln!(out, "% type recall         {}", fmt_percent(s.mean_type_recall));
            let _ = writeln!(out, "% type accuracy       {}", fmt_percent(s.mean_type_accuracy));
            out
        }
    };
    emit(&args.output, &text)
}

fn brute(args: &BruteArgs) -> Result<(), CliError> {
    let Inputs {
        corpus,
        rules,
        mut metadata,
    } = load_inputs("brute", &args.input, None)?;
    metadata.limit = Some(args.limit);
    let exhaustive = brute_force(&corpus, rules.as_ref(), args.limit)?;
    let config = SearchConfig {
        phonotactics: rules,
        ..SearchConfig::free()
    };
    let greedy = greedy_search(&corpus, &config);
    let verdict = if greedy.report.total_bits <= exhaustive.report.total_bits + TIE_TOLERANCE {
        Verdict::Equal
    } else {
        Verdict::GreedySuboptimal
    };
    let report = VerifyReport {
        metadata,
        corpus: CorpusSummary::of(&corpus),
        greedy: HypothesisSummary {
            description_length: greedy.report,
            boundaries_inserted: greedy.best.boundary_count(),
            segmentation: corpus.render(&greedy.best),
        },
        brute_force: HypothesisSummary {
            description_length: exhaustive.report,
            boundaries_inserted: exhaustive.best.boundary_count(),
            segmentation: corpus.render(&exhaustive.best),
        },
        hypotheses_enumerated: exhaustive.enumerated,
        hypotheses_admissible: exhaustive.admissible,
        verdict,
    };
    let verdict_name = match verdict {
        Verdict::Equal => "equal",
        Verdict::GreedySuboptimal => "greedy-suboptimal",
    };
    let text = match args.output.format {
        OutputFormat::Json => to_json(&report),
        OutputFormat::Csv => format!(
            "greedyDL,bruteDL,enumerated,admissible,verdict\n{},{},{},{},{}\n",
            report.greedy.description_length.total_bits,
            report.brute_force.description_length.total_bits,
            report.hypotheses_enumerated,
            report.hypotheses_admissible,
            verdict_name
        ),
        OutputFormat::Table => {
            let mut out = String::new();
            dl_table(&mut out, "greedy best", &report.greedy.description_length);
            dl_table(
                &mut out,
                "exhaustive minimum",
                &report.brute_force.description_length,
            );
            let _ = writeln!(
                out,
                "hypotheses            {} enumerated, {} admissible",
                report.hypotheses_enumerated, report.hypotheses_admissible
            );
            let _ = writeln!(out, "verdict               {verdict_name}");
            out
        }
    };
    emit(&args.output, &text)
}

fn score(args: &ScoreArgs) -> Result<(), CliError> {
    let inventory = load_inventory(&args.inventory)?;
    let gold_corpus = load_corpus(&args.corpus, &inventory)?;
    let hyp_corpus = load_corpus(&args.hypothesis, &inventory)?;
    if !gold_corpus.same_text(&hyp_corpus) {
        return Err(
            Error::Contract("hypothesis and gold transcribe different utterances".into()).into(),
        );
    }
    let gold = gold_corpus.gold().expect("parsed corpora carry gold");
    let hyp = hyp_corpus.gold().expect("parsed corpora carry gold");
    let report = ScoreReport {
        metadata: RunMetadata::new("score", &shown(&args.corpus), &shown(&args.inventory)),
        corpus: CorpusSummary::of(&gold_corpus),
        description_length: total_dl(&gold_corpus, hyp),
        boundaries: boundary_score(hyp, gold)?,
        types: type_score(
            &build_lexicon(&gold_corpus, hyp),
            &build_lexicon(&gold_corpus, gold),
        ),
    };
    let text = match args.output.format {
        OutputFormat::Json => to_json(&report),
        OutputFormat::Csv => format!(
            "recall,accuracy,typeRecall,typeAccuracy,totalDL\n{},{},{},{},{}\n",
            report
                .boundaries
                .recall
                .map_or(String::new(), |v| v.to_string()),
            report
                .boundaries
                .accuracy
                .map_or(String::new(), |v| v.to_string()),
            report.types.recall.map_or(String::new(), |v| v.to_string()),
            report
                .types
                .accuracy
                .map_or(String::new(), |v| v.to_string()),
            report.description_length.total_bits
        ),
        OutputFormat::Table => {
            let mut out = String::new();
            dl_table(&mut out, "hypothesis", &report.description_length);
            let _ = writeln!(
                out,
                "% recall              {}",
                fmt_percent(report.boundaries.recall)
            );
            let _ = writeln!(
                out,
                "% accuracy            {}",
                fmt_percent(report.boundaries.accuracy)
            );
            let _ = writeln!(
                out,
                "% type recall         {}",
                fmt_percent(report.types.recall)
            );
            let _ = writeln!(
                out,
                "% type accuracy       {}",
                fmt_percent(report.types.accuracy)
            );
            out
        }
    };
    emit(&args.output, &text)
}

fn extract(args: &ExtractArgs) -> Result<(), CliError> {
    let inventory = load_inventory(&args.inventory)?;
    let corpus = load_corpus(&args.corpus, &inventory)?;
    let extracted = extract_rules(&corpus)?;
    for word in &extracted.vowelless_words {
        eprintln!("mdlseg: warning: gold word `{word}` has no vowel; it contributes no clusters");
    }
    let mut text = format!("# Extracted from {}\n", shown(&args.corpus));
    text.push_str(&extracted.rules.to_rules_file());
    match &args.output {
        Some(path) => fs::write(path, text).map_err(|source| {
            CliError::Run(Error::Io {
                path: path.clone(),
                source,
            })
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
