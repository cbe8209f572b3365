//! Column re-weighting schemes: TF-IDF and NCut.

use serde::{Deserialize, Serialize};

use super::{build_matrix, DocTermMatrix, Vocabulary, Weighting};
use crate::error::{Error, Result};
use crate::tokenizer::TokenDoc;

/// Token-weight transformation applied after counting.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Vectorizer {
    Count,
    Tfidf,
    Ncut,
}

impl Vectorizer {
    pub const ALL: [Vectorizer; 3] = [Vectorizer::Count, Vectorizer::Tfidf, Vectorizer::Ncut];

    pub fn name(self) -> &'static str {
        match self {
            Vectorizer::Count => "count",
            Vectorizer::Tfidf => "tfidf",
            Vectorizer::Ncut => "ncut",
        }
    }
}

impl std::fmt::Display for Vectorizer {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Vectorizer {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "count" | "none" => Ok(Vectorizer::Count),
            "tfidf" | "tf-idf" => Ok(Vectorizer::Tfidf),
            "ncut" => Ok(Vectorizer::Ncut),
            other => Err(Error::InvalidArgument(format!("unknown vectorizer `{other}`"))),
        }
    }
}

fn ensure_unweighted(m: &DocTermMatrix) -> Result<()> {
    match m.weighting() {
        Weighting::Count | Weighting::Binary => Ok(()),
        w => Err(Error::AlreadyWeighted(w.name())),
    }
}

/// `D'_ij = D_ij * ln(n_docs / doc_freq_j)`, no length normalization.
pub fn weight_tfidf(m: &DocTermMatrix) -> Result<DocTermMatrix> {
    ensure_unweighted(m)?;
    let n = m.vocab().n_docs() as f64;
    let scale: Vec<f64> = m
        .vocab()
        .doc_freqs()
        .iter()
        .map(|&df| if df == 0 { 0.0 } else { (n / df as f64).ln() })
        .collect();
    Ok(m.scaled_columns(&scale, Weighting::Tfidf))
}

/// Scales column `j` by `1/sqrt(d_j)`, where `d_j` is the degree of term `j`
/// in the affinity graph whose edge weights are cosine similarities between
/// binarized term columns (self-similarity 1).
pub fn weight_ncut(m: &DocTermMatrix) -> Result<DocTermMatrix> {
    ensure_unweighted(m)?;
    if m.n_terms() < 2 {
        return Err(Error::TooFewTerms(m.n_terms()));
    }
    let scale = ncut_scale(m);
    Ok(m.scaled_columns(&scale, Weighting::Ncut))
}

fn ncut_scale(m: &DocTermMatrix) -> Vec<f64> {
    let df = m.column_nnz();
    // d_j = sum_k |docs(j) & docs(k)| / sqrt(df_j df_k), accumulated per document.
    let mut degree = vec![0.0; m.n_terms()];
    for i in 0..m.n_docs() {
        let (cols, vals) = m.row(i);
        let present: Vec<usize> = cols
            .iter()
            .zip(vals)
            .filter(|(_, &v)| v != 0.0)
            .map(|(&j, _)| j)
            .collect();
        for &j in &present {
            for &k in &present {
                degree[j] += 1.0 / ((df[j] * df[k]) as f64).sqrt();
            }
        }
    }
    degree
        .iter()
        .map(|&d| if d > 0.0 { 1.0 / d.sqrt() } else { 1.0 })
        .collect()
}

/// Count (optionally binarized) then re-weight.
pub fn vectorize(docs: &[TokenDoc], vocab: &Vocabulary, binary: bool, vectorizer: Vectorizer) -> Result<DocTermMatrix> {
    let counts = build_matrix(docs, vocab, binary);
    match vectorizer {
        Vectorizer::Count => Ok(counts),
        Vectorizer::Tfidf => weight_tfidf(&counts),
        Vectorizer::Ncut => weight_ncut(&counts),
    }
}
