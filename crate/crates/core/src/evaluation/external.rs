//! Scoring named model configurations against an external corpus, including
//! the K-means + logistic-regression baseline.

use serde::{Deserialize, Serialize};

use super::coherence::{lists_coherence, model_coherence, CooccurrenceStats, Metric};
use super::grid::{matrix_for, with_pool, RunError};
use crate::corpus::Vectorizer;
use crate::error::{Error, Result};
use crate::factorization::{cluster_top_terms_logreg, fit, fit_kmeans, KMeansOptions, LogRegOptions, Method};
use crate::tokenizer::{TokenDoc, TokenizerKind};
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Approach {
    Nmf,
    Lda,
    Kmeans,
}

impl std::str::FromStr for Approach {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "nmf" => Ok(Approach::Nmf),
            "lda" => Ok(Approach::Lda),
            "kmeans" | "k-means" => Ok(Approach::Kmeans),
            other => Err(Error::InvalidArgument(format!("unknown approach `{other}`"))),
        }
    }
}

/// A model configuration evaluated by name.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NamedModel {
    pub name: String,
    pub tokenizer: TokenizerKind,
    pub approach: Approach,
    pub k: usize,
    #[serde(default = "default_min_df")]
    pub min_df: f64,
    #[serde(default)]
    pub binary: bool,
    #[serde(default = "default_vectorizer")]
    pub vectorizer: Vectorizer,
}

fn default_min_df() -> f64 {
    0.05
}

fn default_vectorizer() -> Vectorizer {
    Vectorizer::Count
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExternalRun {
    pub seed: u64,
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExternalResult {
    pub name: String,
    pub n_terms: usize,
    pub runs: Vec<ExternalRun>,
    pub errors: Vec<RunError>,
}

impl ExternalResult {
    pub fn scores(&self) -> Vec<f64> {
        self.runs.iter().map(|r| r.score).collect()
    }
}

/// Median-over-topics UCI-NPMI of one fit of `model` on `train`, with
/// co-occurrence taken from `external`. For K-means the cluster terms are
/// ranked by logistic-regression coefficient.
pub fn external_coherence(
    train: &[TokenDoc],
    external: &CooccurrenceStats,
    model: &NamedModel,
    n_terms: usize,
    seed: u64,
) -> Result<f64> {
    let m = matrix_for(train, model.min_df, model.binary, model.vectorizer)?;
    match model.approach {
        Approach::Nmf | Approach::Lda => {
            let method = if model.approach == Approach::Nmf {
                Method::Nmf
            } else {
                Method::Lda
            };
            let fitted = fit(method, &m, model.k, seed)?;
            Ok(model_coherence(&fitted, external, n_terms, Metric::UciNpmi)?.value)
        }
        Approach::Kmeans => {
            let clusters = fit_kmeans(&m, model.k, seed, &KMeansOptions::default())?;
            let ranked = cluster_top_terms_logreg(&m, &clusters.labels, n_terms, &LogRegOptions::default())?;
            let lists: Vec<Vec<String>> = ranked
                .into_iter()
                .filter(|r| !r.is_empty())
                .map(|r| r.into_iter().map(|(t, _)| t).collect())
                .collect();
            Ok(lists_coherence(&lists, external, n_terms, Metric::UciNpmi)?.value)
        }
    }
}

/// [`external_coherence`] for seeds `base_seed..base_seed + repeats`.
pub fn external_coherence_runs(
    train: &[TokenDoc],
    external: &CooccurrenceStats,
    model: &NamedModel,
    n_terms: usize,
    repeats: usize,
    base_seed: u64,
    workers: Option<usize>,
) -> Result<ExternalResult> {
    let outcomes: Vec<(u64, Result<f64>)> = with_pool(workers, || {
        (0..repeats as u64)
            .into_par_iter()
            .map(|r| {
                let seed = base_seed + r;
                (seed, external_coherence(train, external, model, n_terms, seed))
            })
            .collect()
    })?;
    let mut runs = Vec::new();
    let mut errors = Vec::new();
    for (seed, o) in outcomes {
        match o {
            Ok(score) => runs.push(ExternalRun { seed, score }),
            Err(e) => errors.push(RunError {
                seed,
                kind: e.kind().to_string(),
                message: e.to_string(),
            }),
        }
    }
    Ok(ExternalResult {
        name: model.name.clone(),
        n_terms,
        runs,
        errors,
    })
}
