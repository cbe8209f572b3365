//! Topic extraction (NMF, LDA), fold-in of unseen documents and the
//! K-means + logistic-regression baseline.

mod infer;
mod io;
mod kmeans;
mod lda;
mod logreg;
mod nmf;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::corpus::DocTermMatrix;
use crate::error::{Error, Result};

pub use infer::{infer_new_docs, FoldIn};
pub use io::{read_model, write_model};
pub use kmeans::{fit_kmeans, ClusterModel, KMeansOptions};
pub use lda::{fit_lda, LdaOptions};
pub use logreg::{cluster_top_terms_logreg, LogRegOptions};
pub use nmf::{fit_nmf, NmfOptions};

#[cfg(test)]
pub(crate) use nmf::tests::dense_matrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Nmf,
    Lda,
}

impl Method {
    pub const ALL: [Method; 2] = [Method::Nmf, Method::Lda];

    pub fn name(self) -> &'static str {
        match self {
            Method::Nmf => "nmf",
            Method::Lda => "lda",
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "nmf" => Ok(Method::Nmf),
            "lda" => Ok(Method::Lda),
            other => Err(Error::InvalidArgument(format!("unknown method `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitDiagnostics {
    pub iterations: usize,
    /// Final Frobenius residual (NMF) or evidence lower bound (LDA).
    pub objective: f64,
    pub converged: bool,
    /// Objective after initialization followed by one value per iteration.
    pub trace: Vec<f64>,
    /// Documents whose matrix row is empty.
    pub zero_rows: Vec<usize>,
}

/// A fitted topic model: `doc_topic` is docs x k, `topic_term` is k x terms.
#[derive(Debug, Clone, PartialEq)]
pub struct TopicModel {
    pub method: Method,
    pub k: usize,
    pub seed: u64,
    pub doc_ids: Vec<String>,
    pub terms: Vec<String>,
    pub doc_topic: DMatrix<f64>,
    pub topic_term: DMatrix<f64>,
    pub diagnostics: FitDiagnostics,
}

impl TopicModel {
    pub fn n_docs(&self) -> usize {
        self.doc_topic.nrows()
    }

    pub fn n_terms(&self) -> usize {
        self.topic_term.ncols()
    }

    /// Column indices of the `n` heaviest terms of `topic`, heaviest first,
    /// ties broken by column order. `n` is clamped to the vocabulary size.
    pub fn top_term_indices(&self, topic: usize, n: usize) -> Vec<usize> {
        let row = self.topic_term.row(topic);
        let mut order: Vec<usize> = (0..row.len()).collect();
        order.sort_by(|&a, &b| row[b].total_cmp(&row[a]).then(a.cmp(&b)));
        order.truncate(n);
        order
    }

    pub fn top_terms(&self, topic: usize, n: usize) -> Vec<String> {
        self.top_term_indices(topic, n)
            .into_iter()
            .map(|j| self.terms[j].clone())
            .collect()
    }

    /// Topic-term rows rescaled to sum to one (all-zero rows stay zero).
    pub fn topic_term_distributions(&self) -> DMatrix<f64> {
        let mut out = self.topic_term.clone();
        for mut row in out.row_iter_mut() {
            let s = row.sum();
            if s > 0.0 {
                row /= s;
            }
        }
        out
    }
}

/// Fits `method` with default options.
pub fn fit(method: Method, m: &DocTermMatrix, k: usize, seed: u64) -> Result<TopicModel> {
    match method {
        Method::Nmf => fit_nmf(m, k, seed, &NmfOptions::default()),
        Method::Lda => fit_lda(m, k, seed, &LdaOptions::default()),
    }
}

fn check_fit_input(m: &DocTermMatrix, k: usize, min_k: usize) -> Result<()> {
    if k < min_k {
        return Err(Error::InvalidArgument(format!(
            "number of topics must be at least {min_k}, got {k}"
        )));
    }
    if m.n_docs() == 0 || m.n_terms() == 0 || m.is_all_zero() {
        return Err(Error::DegenerateMatrix);
    }
    Ok(())
}
