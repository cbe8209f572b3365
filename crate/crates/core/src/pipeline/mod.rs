//! Configuration, stage file formats, report bundles and end-to-end runs.
//!
//! Every file written here is deterministic for a given configuration
//! except `manifest.json`, which carries timestamps.

mod config;
mod report;
mod run;
mod tokens;

use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};

pub use config::{
    build_tokenizer, sha256_hex, to_zero_based, CorpusSection, EvaluationSection, PipelineConfig, TokenizerSection,
    TopicsSection, CONFIG_ENV,
};
pub use report::{
    build_report, write_report, AssignmentRow, ModelSummary, ReportBundle, SelectionReport, TopNTerms, TopicReport,
    REPORT_FILE,
};
pub use run::{
    external_stage, grid_stage, inventory, run_pipeline, FileEntry, GridStage, RunManifest, SeedRecord, MANIFEST_FILE,
};
pub use tokens::{read_token_docs, tokenize_corpus, write_token_docs, SkippedDoc, TokenizedCorpus};

/// Writes `bytes` to `path`, creating parent directories.
pub fn write_file(path: &Path, bytes: impl AsRef<[u8]>) -> Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
    }
    std::fs::write(path, bytes).map_err(|e| Error::io(path, e))
}

/// Pretty JSON with a trailing newline.
pub fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> Result<()> {
    write_file(path, serde_json::to_string_pretty(value)? + "\n")
}

pub fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    if !path.exists() {
        return Err(Error::MissingInput(path.to_path_buf()));
    }
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| Error::parse(path.display(), e.line(), e))
}
