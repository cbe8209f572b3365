//! Pipeline configuration, read from TOML with one section per module.
//!
//! ```toml
//! [corpus]
//! dir = "data/synthetic"
//! external_dir = "data/external"   # optional
//! extensions = ["py"]
//!
//! [tokenizer]
//! kind = "augmented"
//! reserved_words = "reserved.txt"   # optional, bundled list otherwise
//!
//! [grid]
//! min_df = [0.05, 0.1]
//! binary = [false, true]
//! vectorizer = ["count", "tfidf", "ncut"]
//! method = ["nmf", "lda"]
//! k = [2, 3, 4]
//!
//! [evaluation]
//! repeats = 10
//! base_seed = 0
//! workers = 4
//! top_k = 5
//! external_n = 10
//!
//! [[evaluation.models]]
//! name = "lda-augmented"
//! tokenizer = "augmented"
//! approach = "lda"
//! k = 5
//!
//! [topics]
//! min_docs = 3
//! merges = [[2, 4]]   # 1-based topic numbers
//! lambda = 0.6
//! top_n = [5, 10, 30]
//! percentile = 75.0
//! intruder_seed = 0
//! ```
//!
//! Every key has a default, so an empty file describes the full default
//! grid with ten repeats.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::evaluation::{GridConfig, NamedModel};
use crate::tokenizer::{AugmentedTokenizer, ReservedWords, Tokenizer, TokenizerKind};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CorpusSection {
    pub dir: Option<PathBuf>,
    pub external_dir: Option<PathBuf>,
    pub extensions: Vec<String>,
}

impl Default for CorpusSection {
    fn default() -> Self {
        CorpusSection {
            dir: None,
            external_dir: None,
            extensions: vec!["py".into()],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TokenizerSection {
    pub kind: TokenizerKind,
    pub reserved_words: Option<PathBuf>,
}

impl Default for TokenizerSection {
    fn default() -> Self {
        TokenizerSection {
            kind: TokenizerKind::Augmented,
            reserved_words: None,
        }
    }
}

impl TokenizerSection {
    pub fn build(&self) -> Result<Tokenizer> {
        build_tokenizer(self.kind, self.reserved_words.as_deref())
    }
}

pub fn build_tokenizer(kind: TokenizerKind, reserved_words: Option<&Path>) -> Result<Tokenizer> {
    Ok(match (kind, reserved_words) {
        (TokenizerKind::Augmented, Some(path)) => {
            Tokenizer::Augmented(AugmentedTokenizer::new(ReservedWords::from_file(path)?))
        }
        _ => Tokenizer::new(kind),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EvaluationSection {
    pub repeats: usize,
    pub base_seed: u64,
    pub workers: Option<usize>,
    /// Grid points returned by the Fagin selection.
    pub top_k: usize,
    /// Top terms per topic for the external NPMI score.
    pub external_n: usize,
    pub models: Vec<NamedModel>,
}

impl Default for EvaluationSection {
    fn default() -> Self {
        EvaluationSection {
            repeats: 10,
            base_seed: 0,
            workers: None,
            top_k: 5,
            external_n: 10,
            models: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TopicsSection {
    pub min_docs: usize,
    /// Merge groups as 1-based topic numbers.
    pub merges: Vec<Vec<usize>>,
    pub lambda: f64,
    pub top_n: Vec<usize>,
    pub percentile: f64,
    pub intruder_seed: u64,
}

impl Default for TopicsSection {
    fn default() -> Self {
        TopicsSection {
            min_docs: 3,
            merges: Vec::new(),
            lambda: 0.6,
            top_n: vec![5, 10, 30],
            percentile: 75.0,
            intruder_seed: 0,
        }
    }
}

impl TopicsSection {
    /// Merge groups converted to 0-based ids.
    pub fn zero_based_merges(&self) -> Result<Vec<Vec<usize>>> {
        to_zero_based(&self.merges)
    }
}

/// Converts 1-based topic numbers to 0-based ids.
pub fn to_zero_based(groups: &[Vec<usize>]) -> Result<Vec<Vec<usize>>> {
    groups
        .iter()
        .map(|g| {
            g.iter()
                .map(|&t| {
                    t.checked_sub(1)
                        .ok_or_else(|| Error::Config("topic numbers start at 1".into()))
                })
                .collect()
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    pub corpus: CorpusSection,
    pub tokenizer: TokenizerSection,
    pub grid: GridConfig,
    pub evaluation: EvaluationSection,
    pub topics: TopicsSection,
}

/// Environment variable naming the default configuration file.
pub const CONFIG_ENV: &str = "CODETOPICS_CONFIG";

impl PipelineConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let config: PipelineConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    /// Reads a config file. Relative corpus and word-list paths are
    /// resolved against the file's directory.
    pub fn from_file(path: &Path) -> Result<Self> {
        if !path.exists() {
            return Err(Error::MissingInput(path.to_path_buf()));
        }
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut config = Self::from_toml_str(&text)?;
        let base = path.parent().unwrap_or(Path::new(""));
        let resolve = |p: &mut Option<PathBuf>| {
            if let Some(inner) = p {
                if inner.is_relative() {
                    *inner = base.join(&*inner);
                }
            }
        };
        resolve(&mut config.corpus.dir);
        resolve(&mut config.corpus.external_dir);
        resolve(&mut config.tokenizer.reserved_words);
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        self.grid.validate()?;
        if self.evaluation.repeats == 0 {
            return Err(Error::Config("evaluation.repeats must be at least 1".into()));
        }
        if self.evaluation.top_k == 0 {
            return Err(Error::Config("evaluation.top_k must be at least 1".into()));
        }
        if !(0.0..=1.0).contains(&self.topics.lambda) {
            return Err(Error::Config(format!(
                "topics.lambda {} outside [0, 1]",
                self.topics.lambda
            )));
        }
        if !(0.0..=100.0).contains(&self.topics.percentile) {
            return Err(Error::Config(format!(
                "topics.percentile {} outside [0, 100]",
                self.topics.percentile
            )));
        }
        if self.topics.top_n.is_empty() || self.topics.top_n.contains(&0) {
            return Err(Error::Config("topics.top_n needs positive values".into()));
        }
        self.topics.zero_based_merges()?;
        Ok(())
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    /// SHA-256 of the canonical TOML rendering.
    pub fn hash(&self) -> Result<String> {
        Ok(sha256_hex(self.to_toml_string()?.as_bytes()))
    }

    pub fn corpus_dir(&self) -> Result<&Path> {
        self.corpus
            .dir
            .as_deref()
            .ok_or_else(|| Error::Config("corpus.dir is not set".into()))
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}
