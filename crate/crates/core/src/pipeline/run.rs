//! End-to-end runs: tokenize, grid search, best-model fit, report.
//!
//! Output layout under the run directory:
//!
//! ```text
//! config.toml          canonical rendering of the configuration
//! tokens.jsonl         tokenized corpus
//! skipped.json         documents left out (no tokens)
//! grid.csv             one row per grid point
//! runs.jsonl           one record per run (grid point and seed)
//! best.json            Fagin top-k grid points
//! matrix/              matrix of the best grid point
//! model.txt            best grid point fitted at base_seed
//! report/              report bundle
//! external.json        external coherence per named model (optional)
//! manifest.json        hashes, seeds, timestamps
//! ```

use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use walkdir::WalkDir;

use super::{
    build_report, build_tokenizer, sha256_hex, tokenize_corpus, write_file, write_json, write_report, write_token_docs,
    PipelineConfig,
};
use crate::corpus::{load_corpus_with_extensions, write_matrix_dir};
use crate::error::{Error, Result};
use crate::evaluation::{
    enumerate_grid, external_coherence_runs, grid_csv, matrix_for, run_grid, runs_jsonl, select_best, BestModel,
    CooccurrenceStats, ExternalResult, GridOptions, GridResult,
};
use crate::factorization::{fit, write_model};
use crate::tokenizer::{SourceDoc, TokenDoc};

pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FileEntry {
    /// `/`-separated path relative to the run directory.
    pub path: String,
    pub bytes: u64,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedRecord {
    /// Grid runs use `base_seed..base_seed + repeats`.
    pub base_seed: u64,
    pub repeats: usize,
    /// Seed of the reported model fit.
    pub fit_seed: u64,
    pub intruder_seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool_version: String,
    pub config_sha256: String,
    pub started_unix: u64,
    pub finished_unix: u64,
    pub seeds: SeedRecord,
    pub best: Option<BestModel>,
    pub files: Vec<FileEntry>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridStage {
    pub results: Vec<GridResult>,
    pub best: Vec<BestModel>,
}

/// Runs the configured grid over `docs` and writes `grid.csv`,
/// `runs.jsonl` and `best.json` into `out_dir`.
pub fn grid_stage(docs: &[TokenDoc], config: &PipelineConfig, out_dir: &Path) -> Result<GridStage> {
    let grid = enumerate_grid(&config.grid);
    let opts = GridOptions {
        repeats: config.evaluation.repeats,
        base_seed: config.evaluation.base_seed,
        workers: config.evaluation.workers,
    };
    let results = run_grid(docs, &grid, &opts)?;
    write_file(&out_dir.join("grid.csv"), grid_csv(&results))?;
    write_file(&out_dir.join("runs.jsonl"), runs_jsonl(&results)?)?;
    let best = select_best(&results, config.evaluation.top_k)?;
    write_json(&out_dir.join("best.json"), &best)?;
    Ok(GridStage { results, best })
}

/// External UCI-NPMI for every named model. Each model's tokenizer is
/// applied to both the training corpus and the external corpus.
pub fn external_stage(
    train: &[SourceDoc],
    external: &[SourceDoc],
    config: &PipelineConfig,
) -> Result<Vec<ExternalResult>> {
    let ev = &config.evaluation;
    ev.models
        .iter()
        .map(|model| {
            let tokenizer = build_tokenizer(model.tokenizer, config.tokenizer.reserved_words.as_deref())?;
            let train_docs = tokenize_corpus(&tokenizer, train)?.docs;
            let ext_docs = tokenize_corpus(&tokenizer, external)?.docs;
            let stats = CooccurrenceStats::from_token_docs(&ext_docs)?;
            external_coherence_runs(
                &train_docs,
                &stats,
                model,
                ev.external_n,
                ev.repeats,
                ev.base_seed,
                ev.workers,
            )
        })
        .collect()
}

fn unix_now() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs())
}

fn load_sources(dir: &Path, config: &PipelineConfig) -> Result<Vec<SourceDoc>> {
    let exts: Vec<&str> = config.corpus.extensions.iter().map(String::as_str).collect();
    load_corpus_with_extensions(dir, &exts)
}

/// SHA-256 inventory of every file below `dir` except the manifest,
/// sorted by path.
pub fn inventory(dir: &Path) -> Result<Vec<FileEntry>> {
    let mut files = Vec::new();
    for entry in WalkDir::new(dir).sort_by_file_name() {
        let entry = entry.map_err(|e| Error::io(dir, e.into()))?;
        if !entry.file_type().is_file() {
            continue;
        }
        let rel = entry.path().strip_prefix(dir).unwrap_or(entry.path());
        let rel: String = rel
            .components()
            .map(|c| c.as_os_str().to_string_lossy())
            .collect::<Vec<_>>()
            .join("/");
        if rel == MANIFEST_FILE {
            continue;
        }
        let bytes = std::fs::read(entry.path()).map_err(|e| Error::io(entry.path(), e))?;
        files.push(FileEntry {
            path: rel,
            bytes: bytes.len() as u64,
            sha256: sha256_hex(&bytes),
        });
    }
    files.sort_by(|a, b| a.path.cmp(&b.path));
    Ok(files)
}

/// Runs every stage and writes the layout described in the module docs.
/// The best grid point is refitted at `base_seed`.
pub fn run_pipeline(config: &PipelineConfig, out_dir: &Path) -> Result<RunManifest> {
    config.validate()?;
    let started_unix = unix_now();
    std::fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    write_file(&out_dir.join("config.toml"), config.to_toml_string()?)?;

    let sources = load_sources(config.corpus_dir()?, config)?;
    let tokenizer = config.tokenizer.build()?;
    let corpus = tokenize_corpus(&tokenizer, &sources)?;
    if corpus.docs.is_empty() {
        return Err(Error::EmptyCorpus(config.corpus_dir()?.to_path_buf()));
    }
    write_token_docs(&out_dir.join("tokens.jsonl"), &corpus.docs)?;
    write_json(&out_dir.join("skipped.json"), &corpus.skipped)?;

    let stage = grid_stage(&corpus.docs, config, out_dir)?;
    let best = stage.best.first().cloned();
    if let Some(b) = &best {
        let p = b.params;
        let m = matrix_for(&corpus.docs, p.min_df, p.binary, p.vectorizer)?;
        write_matrix_dir(&out_dir.join("matrix"), &m)?;
        let model = fit(p.method, &m, p.k, config.evaluation.base_seed)?;
        write_model(&out_dir.join("model.txt"), &model)?;
        let bundle = build_report(&model, &m, &config.topics)?;
        write_report(&out_dir.join("report"), &bundle)?;
    }

    if let Some(ext_dir) = &config.corpus.external_dir {
        if !config.evaluation.models.is_empty() {
            let external = load_sources(ext_dir, config)?;
            let results = external_stage(&sources, &external, config)?;
            write_json(&out_dir.join("external.json"), &results)?;
        }
    }

    let manifest = RunManifest {
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        config_sha256: config.hash()?,
        started_unix,
        finished_unix: unix_now(),
        seeds: SeedRecord {
            base_seed: config.evaluation.base_seed,
            repeats: config.evaluation.repeats,
            fit_seed: config.evaluation.base_seed,
            intruder_seed: config.topics.intruder_seed,
        },
        best,
        files: inventory(out_dir)?,
    };
    write_json(&out_dir.join(MANIFEST_FILE), &manifest)?;
    Ok(manifest)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny_corpus(dir: &Path) {
        for i in 0..6 {
            let body = if i % 2 == 0 {
                format!("for i in range({i}):\n    total += i\n    count += 1\n")
            } else {
                format!("name = 'x{i}'.upper()\ntext = name.strip().lower()\nwords = text.split()\n")
            };
            std::fs::write(dir.join(format!("d{i}.py")), body).unwrap();
        }
        std::fs::write(dir.join("empty.py"), "# nothing\n").unwrap();
    }

    #[test]
    fn small_run_writes_layout_and_inventory() {
        let corpus = tempfile::tempdir().unwrap();
        tiny_corpus(corpus.path());
        let mut config = PipelineConfig::from_toml_str(
            "[grid]\nmin_df = [0.3]\nbinary = [false]\nvectorizer = [\"count\"]\nmethod = [\"nmf\"]\nk = [2]\n\
             [evaluation]\nrepeats = 2\nworkers = 1\n[topics]\nmin_docs = 1\n",
        )
        .unwrap();
        config.corpus.dir = Some(corpus.path().to_path_buf());
        let out = tempfile::tempdir().unwrap();
        let manifest = run_pipeline(&config, out.path()).unwrap();
        let names: Vec<&str> = manifest.files.iter().map(|f| f.path.as_str()).collect();
        for expected in [
            "best.json",
            "grid.csv",
            "model.txt",
            "report/report.json",
            "tokens.jsonl",
        ] {
            assert!(names.contains(&expected), "{expected} missing from {names:?}");
        }
        assert!(!names.contains(&MANIFEST_FILE));
        let skipped = std::fs::read_to_string(out.path().join("skipped.json")).unwrap();
        assert!(skipped.contains("empty.py"));
        assert_eq!(manifest.seeds.repeats, 2);
        assert_eq!(inventory(out.path()).unwrap(), manifest.files);
    }

    #[test]
    fn missing_corpus_dir_is_config_error() {
        let out = tempfile::tempdir().unwrap();
        let err = run_pipeline(&PipelineConfig::default(), out.path()).unwrap_err();
        assert_eq!(err.kind(), "ConfigError");
    }
}
