use std::collections::BTreeMap;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::Vocabulary;
use crate::tokenizer::TokenDoc;

/// Provenance of the values stored in a [`DocTermMatrix`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Weighting {
    Count,
    Binary,
    Tfidf,
    Ncut,
}

impl Weighting {
    pub fn name(self) -> &'static str {
        match self {
            Weighting::Count => "count",
            Weighting::Binary => "binary",
            Weighting::Tfidf => "tfidf",
            Weighting::Ncut => "ncut",
        }
    }
}

/// Sparse documents x terms matrix in compressed-row form.
///
/// Entries are nonnegative. Rows are never dropped: a document whose every
/// token was filtered out keeps an empty row (see [`DocTermMatrix::empty_rows`]).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DocTermMatrix {
    pub(crate) rows: Vec<String>,
    pub(crate) vocab: Vocabulary,
    pub(crate) indptr: Vec<usize>,
    pub(crate) indices: Vec<usize>,
    pub(crate) values: Vec<f64>,
    pub(crate) weighting: Weighting,
    pub(crate) binary_applied: bool,
    /// Per-column multipliers applied by TF-IDF / NCut weighting.
    pub(crate) column_scale: Option<Vec<f64>>,
}

/// `D_ij` = count of term `j` in document `i`, or 1 if present when `binary`.
/// Tokens outside `vocab` are ignored.
pub fn build_matrix(docs: &[TokenDoc], vocab: &Vocabulary, binary: bool) -> DocTermMatrix {
    let mut indptr = Vec::with_capacity(docs.len() + 1);
    let mut indices = Vec::new();
    let mut values = Vec::new();
    indptr.push(0);
    for doc in docs {
        let mut counts: BTreeMap<usize, f64> = BTreeMap::new();
        for term in doc.lexemes() {
            if let Some(j) = vocab.index_of(term) {
                *counts.entry(j).or_default() += 1.0;
            }
        }
        for (j, c) in counts {
            indices.push(j);
            values.push(if binary { 1.0 } else { c });
        }
        indptr.push(indices.len());
    }
    DocTermMatrix {
        rows: docs.iter().map(|d| d.doc_id.clone()).collect(),
        vocab: vocab.clone(),
        indptr,
        indices,
        values,
        weighting: if binary { Weighting::Binary } else { Weighting::Count },
        binary_applied: binary,
        column_scale: None,
    }
}

impl DocTermMatrix {
    /// Builds a matrix from `(row, col, value)` triplets; zero values are dropped.
    pub fn from_triplets(
        rows: Vec<String>,
        vocab: Vocabulary,
        triplets: &[(usize, usize, f64)],
        weighting: Weighting,
        binary_applied: bool,
    ) -> Self {
        let mut per_row: Vec<BTreeMap<usize, f64>> = vec![BTreeMap::new(); rows.len()];
        for &(i, j, v) in triplets {
            if v != 0.0 {
                *per_row[i].entry(j).or_default() += v;
            }
        }
        let mut indptr = vec![0];
        let mut indices = Vec::new();
        let mut values = Vec::new();
        for row in per_row {
            for (j, v) in row {
                indices.push(j);
                values.push(v);
            }
            indptr.push(indices.len());
        }
        DocTermMatrix {
            rows,
            vocab,
            indptr,
            indices,
            values,
            weighting,
            binary_applied,
            column_scale: None,
        }
    }

    pub fn doc_ids(&self) -> &[String] {
        &self.rows
    }

    pub fn vocab(&self) -> &Vocabulary {
        &self.vocab
    }

    pub fn terms(&self) -> &[String] {
        self.vocab.terms()
    }

    pub fn weighting(&self) -> Weighting {
        self.weighting
    }

    pub fn binary_applied(&self) -> bool {
        self.binary_applied
    }

    pub fn column_scale(&self) -> Option<&[f64]> {
        self.column_scale.as_deref()
    }

    pub fn n_docs(&self) -> usize {
        self.rows.len()
    }

    pub fn n_terms(&self) -> usize {
        self.vocab.len()
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// Column indices and values of row `i`.
    pub fn row(&self, i: usize) -> (&[usize], &[f64]) {
        let span = self.indptr[i]..self.indptr[i + 1];
        (&self.indices[span.clone()], &self.values[span])
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (cols, vals) = self.row(i);
        cols.binary_search(&j).map(|p| vals[p]).unwrap_or(0.0)
    }

    /// `(row, col, value)` for every stored entry, row-major.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.n_docs()).flat_map(move |i| {
            let (cols, vals) = self.row(i);
            cols.iter().zip(vals).map(move |(&j, &v)| (i, j, v))
        })
    }

    /// Rows without any stored entry.
    pub fn empty_rows(&self) -> Vec<usize> {
        (0..self.n_docs())
            .filter(|&i| self.indptr[i] == self.indptr[i + 1])
            .collect()
    }

    /// Number of nonzero entries per column.
    pub fn column_nnz(&self) -> Vec<usize> {
        let mut counts = vec![0; self.n_terms()];
        for &j in &self.indices {
            counts[j] += 1;
        }
        counts
    }

    /// Column sums.
    pub fn column_sums(&self) -> Vec<f64> {
        let mut sums = vec![0.0; self.n_terms()];
        for (&j, &v) in self.indices.iter().zip(&self.values) {
            sums[j] += v;
        }
        sums
    }

    pub fn is_all_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0.0)
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.n_docs(), self.n_terms());
        for (i, j, v) in self.triplets() {
            m[(i, j)] = v;
        }
        m
    }

    /// Multiplies column `j` by `scale[j]`, dropping entries that become zero.
    pub(crate) fn scaled_columns(&self, scale: &[f64], weighting: Weighting) -> DocTermMatrix {
        let mut out = DocTermMatrix {
            rows: self.rows.clone(),
            vocab: self.vocab.clone(),
            indptr: vec![0],
            indices: Vec::with_capacity(self.nnz()),
            values: Vec::with_capacity(self.nnz()),
            weighting,
            binary_applied: self.binary_applied,
            column_scale: Some(scale.to_vec()),
        };
        for i in 0..self.n_docs() {
            let (cols, vals) = self.row(i);
            for (&j, &v) in cols.iter().zip(vals) {
                let w = v * scale[j];
                if w != 0.0 {
                    out.indices.push(j);
                    out.values.push(w);
                }
            }
            out.indptr.push(out.indices.len());
        }
        out
    }

    /// Re-weights a count/binary matrix with the column scaling learned on
    /// `reference` (used to push unseen documents through a fitted weighting).
    pub fn weighted_like(&self, reference: &DocTermMatrix) -> crate::Result<DocTermMatrix> {
        if self.vocab.terms() != reference.vocab.terms() {
            return Err(crate::Error::VocabularyMismatch);
        }
        match reference.column_scale() {
            Some(scale) => Ok(self.scaled_columns(scale, reference.weighting)),
            None => Ok(self.clone()),
        }
    }
}
