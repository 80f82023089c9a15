//! Command-line front end: `ingest`, `ngram`, `train`, `sweep`.
//!
//! Data goes to stdout or the requested files; diagnostics, including the fully
//! resolved configuration of every run, go to stderr. Exit codes: 0 success,
//! 1 runtime failure, 2 usage error.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::corpus::{self, build_corpus, load_reviews, Corpus, CorpusError, InputFormat, PruneConfig, TokenizerConfig};
use crate::lda::{self, derive_seed, sweep_topics, LdaConfig, SweepConfig};
use crate::ngram::{self, PhraseQuery};
use crate::report::{self, CategorySet, LabelFile, ReportFormat};

#[derive(Debug, Parser)]
#[command(name = "complaint-topics", version, about = "Mine complaint topics from star-rated reviews")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Load, filter and tokenize reviews; print corpus statistics.
    Ingest(InputArgs),
    /// Rank n-grams, or competitor mentions with --mentions/--competitors.
    Ngram(NgramArgs),
    /// Train one topic model and print its report.
    Train(TrainArgs),
    /// Train one model per topic count and select the count with the highest log-likelihood.
    Sweep(SweepArgs),
}

#[derive(Debug, Args)]
struct InputArgs {
    /// Review file with `id,rating,text` columns (CSV) or keys (JSON lines).
    #[arg(long)]
    input: PathBuf,
    /// Input format; inferred from the extension when omitted.
    #[arg(long)]
    input_format: Option<InputFormat>,
    #[arg(long, default_value_t = 1)]
    min_stars: u8,
    #[arg(long, default_value_t = 5)]
    max_stars: u8,
    /// Replacement stopword list, one word per line.
    #[arg(long)]
    stopwords: Option<PathBuf>,
    /// Drop words with fewer total occurrences (0 disables).
    #[arg(long, default_value_t = 2)]
    min_df: usize,
    #[arg(long, default_value_t = 3)]
    min_token_len: usize,
}

#[derive(Debug, Args)]
struct NgramArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, default_value_t = 2)]
    n: usize,
    #[arg(long, default_value_t = 20)]
    top: usize,
    /// Count mentions of the names in FILE (one per line) instead of ranking n-grams.
    #[arg(long)]
    competitors: Option<PathBuf>,
    /// Count mentions of the built-in insurer list instead of ranking n-grams.
    #[arg(long)]
    mentions: bool,
}

#[derive(Debug, Args)]
struct ChainArgs {
    /// Document–topic prior; defaults to 50 / K.
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long, default_value_t = lda::DEFAULT_BETA)]
    beta: f64,
    #[arg(long, default_value_t = lda::DEFAULT_ITERATIONS)]
    iters: usize,
    #[arg(long, default_value_t = lda::DEFAULT_BURN_IN)]
    burn_in: usize,
    /// Random seed; 42 when omitted.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Debug, Args)]
struct TrainArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    chain: ChainArgs,
    #[arg(long)]
    topics: usize,
    #[arg(long, default_value_t = 10)]
    top_words: usize,
    /// Analyst label file: topic_id<TAB>label<TAB>category.
    #[arg(long)]
    labels: Option<PathBuf>,
    /// Allowed category codes.
    #[arg(long, value_delimiter = ',', default_value = "C1,C2,C3,C4")]
    category_set: Vec<String>,
    /// Category subset whose combined share of labeled topics is reported.
    #[arg(long, value_delimiter = ',')]
    categories: Vec<String>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, default_value = "tsv")]
    report_format: ReportFormat,
    /// Write phi and theta as a text dump.
    #[arg(long)]
    save_model: Option<PathBuf>,
    /// Write `sweep<TAB>log_likelihood` diagnostics.
    #[arg(long)]
    ll_trace: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    chain: ChainArgs,
    /// Comma-separated topic counts.
    #[arg(long, value_delimiter = ',', required = true)]
    k_grid: Vec<usize>,
    /// Worker threads; defaults to the available parallelism.
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Runtime(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Runtime(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Runtime(m) => f.write_str(m),
        }
    }
}

fn runtime(e: impl std::fmt::Display) -> CliError {
    CliError::Runtime(e.to_string())
}

fn write_err(path: &Path) -> impl Fn(std::io::Error) -> CliError + '_ {
    move |e| CliError::Runtime(format!("{}: {e}", path.display()))
}

/// Parses `args` (including the program name) and runs the subcommand.
/// Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code() as u8;
            let rendered = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{rendered}");
            } else {
                let _ = write!(err, "{rendered}");
            }
            return code;
        }
    };
    let result = match &cli.command {
        Command::Ingest(a) => cmd_ingest(a, out, err),
        Command::Ngram(a) => cmd_ngram(a, out, err),
        Command::Train(a) => cmd_train(a, out, err),
        Command::Sweep(a) => cmd_sweep(a, out, err),
    };
    let result = result.and_then(|()| out.flush().map_err(runtime));
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.code()
        }
    }
}

struct Loaded {
    read: usize,
    kept: usize,
    corpus: Corpus,
    tokenizer: TokenizerConfig,
}

fn load(args: &InputArgs, err: &mut dyn Write) -> Result<Loaded, CliError> {
    if args.min_stars > args.max_stars {
        return Err(CliError::Usage(format!(
            "inverted rating bounds: --min-stars {} > --max-stars {}",
            args.min_stars, args.max_stars
        )));
    }
    if args.min_token_len == 0 {
        return Err(CliError::Usage("--min-token-len must be at least 1".into()));
    }
    let format = args.input_format.unwrap_or_else(|| InputFormat::from_path(&args.input));
    let mut tokenizer = match &args.stopwords {
        Some(path) => TokenizerConfig::with_stopwords_file(path).map_err(|e| CliError::Usage(e.to_string()))?,
        None => TokenizerConfig::default(),
    };
    tokenizer.min_token_len = args.min_token_len;
    let _ = writeln!(
        err,
        "config: input={} input_format={:?} min_stars={} max_stars={} stopwords={} ({} words) min_df={} min_token_len={}",
        args.input.display(),
        format,
        args.min_stars,
        args.max_stars,
        args.stopwords.as_ref().map_or("bundled".to_string(), |p| p.display().to_string()),
        tokenizer.stopwords().len(),
        args.min_df,
        args.min_token_len,
    );

    let reviews = load_reviews(&args.input, format).map_err(|e| match e {
        CorpusError::Io { .. } => CliError::Usage(e.to_string()),
        other => runtime(other),
    })?;
    let filtered = reviews.filter_by_rating(args.min_stars, args.max_stars).map_err(|e| CliError::Usage(e.to_string()))?;
    let corpus = build_corpus(&filtered, &tokenizer, PruneConfig { min_count: args.min_df }).map_err(runtime)?;
    if !corpus.dropped().is_empty() {
        let _ = writeln!(err, "dropped {} empty document(s): {}", corpus.dropped().len(), corpus.dropped().join(","));
    }
    Ok(Loaded { read: reviews.len(), kept: filtered.len(), corpus, tokenizer })
}

fn cmd_ingest(args: &InputArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let loaded = load(args, err)?;
    let c = &loaded.corpus;
    let lines = [
        ("reviews_read", loaded.read),
        ("reviews_kept", loaded.kept),
        ("docs_kept", c.num_docs()),
        ("docs_dropped", c.dropped().len()),
        ("vocab_size", c.vocab_size()),
        ("tokens", c.num_tokens()),
    ];
    for (k, v) in lines {
        writeln!(out, "{k}\t{v}").map_err(runtime)?;
    }
    Ok(())
}

fn cmd_ngram(args: &NgramArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    if args.n == 0 {
        return Err(CliError::Usage("--n must be at least 1".into()));
    }
    let loaded = load(&args.input, err)?;
    let query = match (&args.competitors, args.mentions) {
        (Some(path), _) => {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
            let names: Vec<String> = corpus::parse_word_list(&text).collect();
            Some(PhraseQuery::from_names(names, &loaded.tokenizer).map_err(|e| CliError::Usage(e.to_string()))?)
        }
        (None, true) => Some(PhraseQuery::competitors(&loaded.tokenizer)),
        (None, false) => None,
    };
    let _ = writeln!(err, "config: subcommand=ngram n={} top={} mentions={}", args.n, args.top, query.is_some());

    writeln!(out, "rank\tngram\tcount").map_err(runtime)?;
    let rows: Vec<(String, u64)> = match query {
        Some(q) => ngram::rank_phrases(ngram::phrase_frequency(&loaded.corpus, &q)),
        None => {
            let table = ngram::extract_ngrams(&loaded.corpus, args.n).map_err(runtime)?;
            ngram::top_ngrams(&table, args.top).into_iter().map(|(seq, c)| (seq.join(" "), c)).collect()
        }
    };
    for (rank, (name, count)) in rows.iter().enumerate() {
        writeln!(out, "{}\t{name}\t{count}", rank + 1).map_err(runtime)?;
    }
    Ok(())
}

fn resolve_seed(chain: &ChainArgs, err: &mut dyn Write) -> u64 {
    chain.seed.unwrap_or_else(|| {
        let _ = writeln!(err, "note: no --seed given, using default seed {}", lda::DEFAULT_SEED);
        lda::DEFAULT_SEED
    })
}

fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    File::create(path).map(BufWriter::new).map_err(write_err(path))
}

fn cmd_train(args: &TrainArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let seed = resolve_seed(&args.chain, err);
    let cfg = LdaConfig {
        topics: args.topics,
        alpha: args.chain.alpha.unwrap_or_else(|| lda::default_alpha(args.topics)),
        beta: args.chain.beta,
        iterations: args.chain.iters,
        burn_in: args.chain.burn_in,
        seed,
    };
    cfg.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    let categories = CategorySet::new(&args.category_set);
    let labels = match &args.labels {
        Some(path) => Some(LabelFile::read(path, &categories).map_err(runtime)?),
        None => None,
    };
    let loaded = load(&args.input, err)?;
    let _ = writeln!(
        err,
        "config: subcommand=train topics={} alpha={} beta={} iters={} burn_in={} seed={} top_words={}",
        cfg.topics, cfg.alpha, cfg.beta, cfg.iterations, cfg.burn_in, cfg.seed, args.top_words
    );

    let model = lda::train(&loaded.corpus, &cfg).map_err(runtime)?;
    let _ = writeln!(err, "final log-likelihood {:.6}", model.final_ll);
    let mut summaries = report::top_words(&model, args.top_words).map_err(|e| CliError::Usage(e.to_string()))?;
    if let Some(labels) = &labels {
        summaries = report::apply_labels(&summaries, labels).map_err(runtime)?;
    }

    match &args.output {
        Some(path) => report::export_report(&summaries, path, args.report_format).map_err(runtime)?,
        None => report::write_report(&summaries, args.report_format, &mut *out).map_err(runtime)?,
    }
    if labels.is_some() && summaries.iter().any(|s| s.category.is_some()) {
        let rollup = report::category_summary(&summaries, &args.categories).map_err(runtime)?;
        writeln!(out, "# category\ttopics\tfraction").map_err(runtime)?;
        for (code, count) in &rollup.counts {
            writeln!(out, "# {code}\t{count}\t{:.4}", rollup.fraction_f64(code)).map_err(runtime)?;
        }
        if !args.categories.is_empty() {
            let f = rollup.subset_fraction();
            writeln!(
                out,
                "# subset {}\t{}/{}\t{:.4}",
                args.categories.join(","),
                f.numer(),
                f.denom(),
                rollup.subset_fraction_f64()
            )
            .map_err(runtime)?;
        }
    }
    if let Some(path) = &args.save_model {
        let mut w = create(path)?;
        lda::write_model_dump(&model, &mut w).and_then(|()| w.flush()).map_err(write_err(path))?;
    }
    if let Some(path) = &args.ll_trace {
        let mut w = create(path)?;
        lda::write_ll_trace(&model, &mut w).and_then(|()| w.flush()).map_err(write_err(path))?;
    }
    Ok(())
}

fn cmd_sweep(args: &SweepArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let base_seed = resolve_seed(&args.chain, err);
    let template = SweepConfig {
        alpha: args.chain.alpha,
        beta: args.chain.beta,
        iterations: args.chain.iters,
        burn_in: args.chain.burn_in,
        base_seed,
    };
    for &k in &args.k_grid {
        template.config_for(k).validate().map_err(|e| CliError::Usage(e.to_string()))?;
    }
    let jobs = args.jobs.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    if jobs == 0 {
        return Err(CliError::Usage("--jobs must be at least 1".into()));
    }
    let loaded = load(&args.input, err)?;
    let seeds: Vec<String> = args.k_grid.iter().map(|&k| format!("{k}:{}", derive_seed(base_seed, k))).collect();
    let _ = writeln!(
        err,
        "config: subcommand=sweep k_grid={:?} alpha={} beta={} iters={} burn_in={} base_seed={} jobs={} seeds={}",
        args.k_grid,
        args.chain.alpha.map_or("50/K".to_string(), |a| a.to_string()),
        template.beta,
        template.iterations,
        template.burn_in,
        base_seed,
        jobs,
        seeds.join(",")
    );

    let result = sweep_topics(&loaded.corpus, &args.k_grid, &template, jobs).map_err(runtime)?;
    writeln!(out, "K\tlog_likelihood\tseed").map_err(runtime)?;
    for e in &result.entries {
        writeln!(out, "{}\t{:.6}\t{}", e.topics, e.log_likelihood, e.seed).map_err(runtime)?;
    }
    writeln!(out, "selected_K\t{}", result.selected).map_err(runtime)?;
    Ok(())
}
