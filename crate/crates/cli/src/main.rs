//! `codetopics` command-line driver.
//!
//! Every stage reads the files written by the previous one. Topic numbers
//! on the command line and in output files are 1-based. Errors are printed
//! to stderr as one JSON object, `{"error": <kind>, "message": <text>}`,
//! and the process exits with status 1.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use codetopics::corpus::{load_corpus_with_extensions, read_matrix_dir, write_matrix_dir, Vectorizer};
use codetopics::evaluation::{mann_whitney_u, matrix_for, ExternalResult};
use codetopics::factorization::{fit, read_model, write_model, Method};
use codetopics::pipeline::{
    build_report, build_tokenizer, external_stage, grid_stage, read_json, read_token_docs, run_pipeline,
    tokenize_corpus, write_json, write_report, write_token_docs, PipelineConfig, CONFIG_ENV,
};
use codetopics::tokenizer::TokenizerKind;
use codetopics::topics::{
    filter_topics, hard_assign, make_intruder_tasks, score_intruder_answers, IntruderAnswer, IntruderTask,
};
use codetopics::{Error, Result};

#[derive(Parser)]
#[command(name = "codetopics", version, about = "Topic modeling for source-code corpora")]
struct Cli {
    /// TOML configuration; command-line flags override its values.
    #[arg(long, global = true, env = CONFIG_ENV)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tokenize a corpus directory into JSONL.
    Tokenize {
        #[arg(long)]
        corpus: Option<PathBuf>,
        #[arg(long)]
        tokenizer: Option<TokenizerKind>,
        #[arg(long)]
        reserved_words: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Build a weighted document-term matrix directory.
    Matrix {
        #[arg(long)]
        tokens: PathBuf,
        #[arg(long, default_value_t = 0.05)]
        min_df: f64,
        #[arg(long)]
        binary: bool,
        #[arg(long, default_value = "count")]
        vectorizer: Vectorizer,
        #[arg(long)]
        out: PathBuf,
    },
    /// Fit one NMF or LDA model.
    Fit {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        method: Method,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Grid search ranked by UMass coherence; writes grid.csv, runs.jsonl
    /// and best.json.
    Grid {
        #[arg(long)]
        tokens: PathBuf,
        #[arg(long)]
        workers: Option<usize>,
        #[arg(long)]
        repeats: Option<usize>,
        #[arg(long)]
        base_seed: Option<u64>,
        #[arg(long)]
        top_k: Option<usize>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Hard-assign documents, merge and filter topics.
    Select {
        #[arg(long)]
        model: PathBuf,
        #[command(flatten)]
        sel: SelectionArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Write the report bundle for a fitted model.
    Report {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        matrix: PathBuf,
        #[command(flatten)]
        sel: SelectionArgs,
        #[arg(long)]
        lambda: Option<f64>,
        #[arg(long)]
        percentile: Option<f64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// External coherence of named models, or a Mann-Whitney comparison.
    Evaluate {
        #[command(subcommand)]
        action: EvaluateAction,
    },
    /// Intruder-document tasks.
    Intruder {
        #[command(subcommand)]
        action: IntruderAction,
    },
    /// Every stage end to end into one run directory.
    Run {
        #[arg(long)]
        workers: Option<usize>,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct SelectionArgs {
    #[arg(long)]
    min_docs: Option<usize>,
    /// Merge group as comma-separated topic numbers, repeatable.
    #[arg(long = "merge")]
    merges: Vec<String>,
}

#[derive(Subcommand)]
enum EvaluateAction {
    /// UCI-NPMI of the configured named models against the external corpus.
    Coherence {
        #[arg(long)]
        external: Option<PathBuf>,
        #[arg(long)]
        repeats: Option<usize>,
        #[arg(long)]
        workers: Option<usize>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Mann-Whitney U between two score sets. Each file holds an external
    /// result, a list of them (pick one with --name-a/--name-b) or a plain
    /// array of numbers.
    Compare {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[arg(long)]
        name_a: Option<String>,
        #[arg(long)]
        name_b: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum IntruderAction {
    /// Writes intruder_tasks.json (for raters) and intruder_key.json.
    Make {
        #[arg(long)]
        model: PathBuf,
        #[command(flatten)]
        sel: SelectionArgs,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Row-normalized confusion matrix from rater answers.
    Score {
        #[arg(long)]
        key: PathBuf,
        #[arg(long)]
        answers: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn load_config(path: Option<&Path>) -> Result<PipelineConfig> {
    match path {
        Some(p) => PipelineConfig::from_file(p),
        None => Ok(PipelineConfig::default()),
    }
}

impl SelectionArgs {
    fn apply(&self, config: &mut PipelineConfig) -> Result<()> {
        if let Some(m) = self.min_docs {
            config.topics.min_docs = m;
        }
        if !self.merges.is_empty() {
            config.topics.merges = parse_merges(&self.merges)?;
        }
        Ok(())
    }
}

fn parse_merges(groups: &[String]) -> Result<Vec<Vec<usize>>> {
    groups
        .iter()
        .map(|g| {
            g.split(',')
                .map(|t| {
                    t.trim()
                        .parse::<usize>()
                        .map_err(|_| Error::InvalidArgument(format!("bad topic number `{t}` in --merge {g}")))
                })
                .collect()
        })
        .collect()
}

#[derive(serde::Deserialize)]
#[serde(untagged)]
enum ScoreFile {
    One(ExternalResult),
    Many(Vec<ExternalResult>),
    Plain(Vec<f64>),
}

fn read_scores(path: &Path, name: Option<&str>) -> Result<Vec<f64>> {
    let pick = |r: &ExternalResult| name.is_none_or(|n| n == r.name);
    match read_json::<ScoreFile>(path)? {
        ScoreFile::Plain(v) => Ok(v),
        ScoreFile::One(r) if pick(&r) => Ok(r.scores()),
        ScoreFile::Many(all) => {
            let found: Vec<&ExternalResult> = all.iter().filter(|r| pick(r)).collect();
            match found.as_slice() {
                [one] => Ok(one.scores()),
                [] => Err(Error::InvalidArgument(format!(
                    "{}: no result named {name:?}",
                    path.display()
                ))),
                _ => Err(Error::InvalidArgument(format!(
                    "{}: several results, pass a name",
                    path.display()
                ))),
            }
        }
        ScoreFile::One(r) => Err(Error::InvalidArgument(format!(
            "{}: holds `{}`",
            path.display(),
            r.name
        ))),
    }
}

fn print_json<T: serde::Serialize>(value: &T, out: Option<&Path>) -> Result<()> {
    match out {
        Some(p) => write_json(p, value),
        None => {
            println!("{}", serde_json::to_string_pretty(value)?);
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    let mut config = load_config(cli.config.as_deref())?;
    match cli.command {
        Command::Tokenize {
            corpus,
            tokenizer,
            reserved_words,
            out,
        } => {
            let dir = match corpus {
                Some(d) => d,
                None => config.corpus_dir()?.to_path_buf(),
            };
            let kind = tokenizer.unwrap_or(config.tokenizer.kind);
            let words = reserved_words.or(config.tokenizer.reserved_words);
            let exts: Vec<&str> = config.corpus.extensions.iter().map(String::as_str).collect();
            let sources = load_corpus_with_extensions(&dir, &exts)?;
            let corpus = tokenize_corpus(&build_tokenizer(kind, words.as_deref())?, &sources)?;
            if corpus.docs.is_empty() {
                return Err(Error::EmptyCorpus(dir));
            }
            write_token_docs(&out, &corpus.docs)?;
            for s in &corpus.skipped {
                eprintln!("{}", serde_json::json!({"warning": s.kind, "doc_id": s.doc_id}));
            }
        }
        Command::Matrix {
            tokens,
            min_df,
            binary,
            vectorizer,
            out,
        } => {
            let docs = read_token_docs(&tokens)?;
            write_matrix_dir(&out, &matrix_for(&docs, min_df, binary, vectorizer)?)?;
        }
        Command::Fit {
            matrix,
            method,
            k,
            seed,
            out,
        } => {
            let m = read_matrix_dir(&matrix)?;
            write_model(&out, &fit(method, &m, k, seed)?)?;
        }
        Command::Grid {
            tokens,
            workers,
            repeats,
            base_seed,
            top_k,
            out,
        } => {
            let ev = &mut config.evaluation;
            ev.workers = workers.or(ev.workers);
            ev.repeats = repeats.unwrap_or(ev.repeats);
            ev.base_seed = base_seed.unwrap_or(ev.base_seed);
            ev.top_k = top_k.unwrap_or(ev.top_k);
            config.validate()?;
            let docs = read_token_docs(&tokens)?;
            grid_stage(&docs, &config, &out)?;
        }
        Command::Select { model, sel, out } => {
            sel.apply(&mut config)?;
            config.validate()?;
            let model = read_model(&model)?;
            let assignment = hard_assign(&model);
            let selection = filter_topics(&assignment, config.topics.min_docs, &config.topics.zero_based_merges()?)?;
            let one =
                |g: &[Vec<usize>]| -> Vec<Vec<usize>> { g.iter().map(|g| g.iter().map(|t| t + 1).collect()).collect() };
            let value = serde_json::json!({
                "counts": assignment.counts,
                "unassigned": assignment.unassigned().iter().map(|&i| &assignment.doc_ids[i]).collect::<Vec<_>>(),
                "min_docs": selection.min_docs,
                "merged": one(&selection.merged),
                "kept": one(&selection.kept),
                "kept_counts": selection.kept_counts,
                "removed_empty": one(&selection.removed_empty),
                "removed_small": one(&selection.removed_small),
            });
            write_json(&out, &value)?;
        }
        Command::Report {
            model,
            matrix,
            sel,
            lambda,
            percentile,
            out,
        } => {
            sel.apply(&mut config)?;
            config.topics.lambda = lambda.unwrap_or(config.topics.lambda);
            config.topics.percentile = percentile.unwrap_or(config.topics.percentile);
            config.validate()?;
            let model = read_model(&model)?;
            let m = read_matrix_dir(&matrix)?;
            write_report(&out, &build_report(&model, &m, &config.topics)?)?;
        }
        Command::Evaluate { action } => match action {
            EvaluateAction::Coherence {
                external,
                repeats,
                workers,
                out,
            } => {
                config.evaluation.repeats = repeats.unwrap_or(config.evaluation.repeats);
                config.evaluation.workers = workers.or(config.evaluation.workers);
                config.validate()?;
                if config.evaluation.models.is_empty() {
                    return Err(Error::Config("no [[evaluation.models]] configured".into()));
                }
                let ext_dir = external
                    .or(config.corpus.external_dir.clone())
                    .ok_or_else(|| Error::Config("corpus.external_dir is not set".into()))?;
                let exts: Vec<&str> = config.corpus.extensions.iter().map(String::as_str).collect();
                let train = load_corpus_with_extensions(config.corpus_dir()?, &exts)?;
                let ext = load_corpus_with_extensions(&ext_dir, &exts)?;
                write_json(&out, &external_stage(&train, &ext, &config)?)?;
            }
            EvaluateAction::Compare {
                a,
                b,
                name_a,
                name_b,
                out,
            } => {
                let xa = read_scores(&a, name_a.as_deref())?;
                let xb = read_scores(&b, name_b.as_deref())?;
                let mw = mann_whitney_u(&xa, &xb)?;
                let value = serde_json::json!({
                    "n_a": xa.len(),
                    "n_b": xb.len(),
                    "u": mw.u,
                    "p_two_sided": mw.p_two_sided,
                    "exact": mw.exact,
                });
                print_json(&value, out.as_deref())?;
            }
        },
        Command::Intruder { action } => match action {
            IntruderAction::Make { model, sel, seed, out } => {
                sel.apply(&mut config)?;
                config.validate()?;
                let model = read_model(&model)?;
                let assignment = hard_assign(&model);
                let selection =
                    filter_topics(&assignment, config.topics.min_docs, &config.topics.zero_based_merges()?)?;
                let tasks = make_intruder_tasks(&assignment, &selection, seed.unwrap_or(config.topics.intruder_seed))?;
                let public: Vec<_> = tasks.iter().map(IntruderTask::public).collect();
                write_json(&out.join("intruder_tasks.json"), &public)?;
                write_json(&out.join("intruder_key.json"), &tasks)?;
            }
            IntruderAction::Score { key, answers, out } => {
                let tasks: Vec<IntruderTask> = read_json(&key)?;
                let answers: Vec<IntruderAnswer> = read_json(&answers)?;
                let m = score_intruder_answers(&tasks, &answers)?;
                let rows: Vec<Vec<f64>> = m.row_iter().map(|r| r.iter().copied().collect()).collect();
                print_json(&serde_json::json!({ "confusion": rows }), out.as_deref())?;
            }
        },
        Command::Run { workers, out } => {
            config.evaluation.workers = workers.or(config.evaluation.workers);
            let manifest = run_pipeline(&config, &out)?;
            eprintln!("{} files written to {}", manifest.files.len() + 1, out.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", serde_json::json!({"error": e.kind(), "message": e.to_string()}));
            ExitCode::FAILURE
        }
    }
}
