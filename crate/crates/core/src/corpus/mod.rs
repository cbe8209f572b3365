//! Corpus ingestion, vocabularies and weighted document-term matrices.

mod io;
mod matrix;
mod weighting;

use std::collections::{BTreeMap, HashMap, HashSet};
use std::path::Path;

use serde::{Deserialize, Serialize};
use walkdir::WalkDir;

use crate::error::{Error, Result};
use crate::tokenizer::{SourceDoc, TokenDoc};

pub use io::{read_matrix_dir, write_matrix_dir};
pub use matrix::{build_matrix, DocTermMatrix, Weighting};
pub use weighting::{vectorize, weight_ncut, weight_tfidf, Vectorizer};

/// Tolerance used when comparing document-frequency ratios with `min_df`,
/// so that e.g. 7/20 survives a threshold of 0.35 computed in floating point.
const MIN_DF_TOLERANCE: f64 = 1e-9;

/// Loads every `.py` file below `dir`, ids are `/`-separated relative paths.
pub fn load_corpus(dir: &Path) -> Result<Vec<SourceDoc>> {
    load_corpus_with_extensions(dir, &["py"])
}

/// Loads every file below `dir` whose extension is in `extensions` (an empty
/// slice accepts every file). Hidden entries are skipped, as are files that
/// are empty after trimming whitespace. Documents come back sorted by id.
pub fn load_corpus_with_extensions(dir: &Path, extensions: &[&str]) -> Result<Vec<SourceDoc>> {
    if !dir.is_dir() {
        return Err(Error::MissingInput(dir.to_path_buf()));
    }
    let mut docs = Vec::new();
    let walker = WalkDir::new(dir)
        .sort_by_file_name()
        .into_iter()
        .filter_entry(|e| e.depth() == 0 || !e.file_name().to_string_lossy().starts_with('.'));
    for entry in walker {
        let entry = entry.map_err(|e| {
            let path = e.path().unwrap_or(dir).to_path_buf();
            Error::io(path, e.into())
        })?;
        if !entry.file_type().is_file() {
            continue;
        }
        let path = entry.path();
        let ext_ok = extensions.is_empty()
            || path
                .extension()
                .and_then(|e| e.to_str())
                .is_some_and(|e| extensions.contains(&e));
        if !ext_ok {
            continue;
        }
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        if text.trim().is_empty() {
            continue;
        }
        let rel = path.strip_prefix(dir).unwrap_or(path);
        let id = rel
            .components()
            .map(|c| c.as_os_str().to_string_lossy())
            .collect::<Vec<_>>()
            .join("/");
        docs.push(SourceDoc {
            id,
            path: path.to_path_buf(),
            text,
        });
    }
    if docs.is_empty() {
        return Err(Error::EmptyCorpus(dir.to_path_buf()));
    }
    docs.sort_by(|a, b| a.id.cmp(&b.id));
    Ok(docs)
}

/// Terms retained after document-frequency filtering, sorted lexicographically.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(from = "VocabularyRepr", into = "VocabularyRepr")]
pub struct Vocabulary {
    terms: Vec<String>,
    index: HashMap<String, usize>,
    doc_freq: Vec<usize>,
    n_docs: usize,
}

#[derive(Serialize, Deserialize)]
struct VocabularyRepr {
    n_docs: usize,
    terms: Vec<(String, usize)>,
}

impl From<VocabularyRepr> for Vocabulary {
    fn from(r: VocabularyRepr) -> Self {
        let (terms, doc_freq) = r.terms.into_iter().unzip();
        Vocabulary::from_parts(terms, doc_freq, r.n_docs)
    }
}

impl From<Vocabulary> for VocabularyRepr {
    fn from(v: Vocabulary) -> Self {
        VocabularyRepr {
            n_docs: v.n_docs,
            terms: v.terms.into_iter().zip(v.doc_freq).collect(),
        }
    }
}

impl Vocabulary {
    /// Assembles a vocabulary from parallel term / document-frequency lists.
    pub fn from_parts(terms: Vec<String>, doc_freq: Vec<usize>, n_docs: usize) -> Self {
        assert_eq!(terms.len(), doc_freq.len(), "terms and doc_freq differ in length");
        let index = terms.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect();
        Vocabulary {
            terms,
            index,
            doc_freq,
            n_docs,
        }
    }

    pub fn terms(&self) -> &[String] {
        &self.terms
    }

    pub fn doc_freqs(&self) -> &[usize] {
        &self.doc_freq
    }

    pub fn doc_freq(&self, term: &str) -> Option<usize> {
        self.index.get(term).map(|&i| self.doc_freq[i])
    }

    pub fn index_of(&self, term: &str) -> Option<usize> {
        self.index.get(term).copied()
    }

    pub fn n_docs(&self) -> usize {
        self.n_docs
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

/// Keeps term `t` iff `doc_freq(t) / n_docs >= min_df`.
pub fn build_vocabulary(docs: &[TokenDoc], min_df: f64) -> Result<Vocabulary> {
    if docs.is_empty() {
        return Err(Error::InvalidArgument("empty document list".into()));
    }
    if !(0.0..=1.0).contains(&min_df) {
        return Err(Error::InvalidArgument(format!("min_df {min_df} outside [0, 1]")));
    }
    let mut df: BTreeMap<&str, usize> = BTreeMap::new();
    for doc in docs {
        let unique: HashSet<&str> = doc.lexemes().collect();
        for term in unique {
            *df.entry(term).or_default() += 1;
        }
    }
    let n = docs.len();
    let threshold = min_df * n as f64 - MIN_DF_TOLERANCE;
    let (terms, doc_freq): (Vec<String>, Vec<usize>) = df
        .into_iter()
        .filter(|&(_, f)| f as f64 >= threshold)
        .map(|(t, f)| (t.to_string(), f))
        .unzip();
    if terms.is_empty() {
        return Err(Error::AllTermsFiltered(min_df));
    }
    Ok(Vocabulary::from_parts(terms, doc_freq, n))
}
