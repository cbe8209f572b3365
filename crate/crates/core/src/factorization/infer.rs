use std::collections::HashMap;

use nalgebra::{DMatrix, DVector};

use super::lda::{fold_in_doc, Doc};
use super::{Method, TopicModel};
use crate::corpus::DocTermMatrix;
use crate::error::{Error, Result};

/// Topic weights of unseen documents.
#[derive(Debug, Clone, PartialEq)]
pub struct FoldIn {
    pub doc_ids: Vec<String>,
    pub doc_topic: DMatrix<f64>,
    /// Rows with no term in the model vocabulary.
    pub zero_rows: Vec<usize>,
    /// Columns of the new matrix that the model does not know.
    pub dropped_terms: Vec<String>,
}

/// Infers `doc_topic` rows for `m_new` with the model's topic-term matrix
/// held fixed. Columns are matched by term string.
///
/// NMF rows solve a nonnegative least-squares problem, LDA rows run the
/// per-document variational updates to convergence.
pub fn infer_new_docs(model: &TopicModel, m_new: &DocTermMatrix) -> Result<FoldIn> {
    let model_index: HashMap<&str, usize> = model.terms.iter().enumerate().map(|(i, t)| (t.as_str(), i)).collect();
    let column_map: Vec<Option<usize>> = m_new
        .terms()
        .iter()
        .map(|t| model_index.get(t.as_str()).copied())
        .collect();
    if column_map.iter().all(Option::is_none) {
        return Err(Error::VocabularyMismatch);
    }
    let dropped_terms = m_new
        .terms()
        .iter()
        .zip(&column_map)
        .filter(|(_, c)| c.is_none())
        .map(|(t, _)| t.clone())
        .collect();

    let k = model.k;
    let mut doc_topic = DMatrix::zeros(m_new.n_docs(), k);
    let mut zero_rows = Vec::new();

    let gram = &model.topic_term * model.topic_term.transpose();
    let exp_elog_beta = model.topic_term.map(f64::ln);
    let alpha = 1.0 / k as f64;

    for i in 0..m_new.n_docs() {
        let (cols, vals) = m_new.row(i);
        let (mapped_cols, mapped_vals): (Vec<usize>, Vec<f64>) = cols
            .iter()
            .zip(vals)
            .filter_map(|(&j, &v)| column_map[j].map(|c| (c, v)))
            .filter(|&(_, v)| v != 0.0)
            .unzip();
        if mapped_cols.is_empty() {
            zero_rows.push(i);
        }
        let row = match model.method {
            Method::Nmf => {
                let mut target = DVector::zeros(k);
                for (&c, &v) in mapped_cols.iter().zip(&mapped_vals) {
                    target += model.topic_term.column(c) * v;
                }
                nnls_gram(&gram, &target)
            }
            Method::Lda => {
                let doc = Doc {
                    cols: &mapped_cols,
                    counts: &mapped_vals,
                };
                fold_in_doc(&doc, &exp_elog_beta.map(f64::exp), alpha)
            }
        };
        doc_topic.set_row(i, &row.transpose());
    }

    Ok(FoldIn {
        doc_ids: m_new.doc_ids().to_vec(),
        doc_topic,
        zero_rows,
        dropped_terms,
    })
}

/// Minimizes `0.5 w'Gw - b'w` over `w >= 0` by cyclic coordinate descent.
fn nnls_gram(gram: &DMatrix<f64>, b: &DVector<f64>) -> DVector<f64> {
    let k = b.len();
    let mut w = DVector::zeros(k);
    for _ in 0..5000 {
        let mut max_change: f64 = 0.0;
        for a in 0..k {
            let g_aa = gram[(a, a)];
            if g_aa <= 0.0 {
                continue;
            }
            let grad = (gram.row(a) * &w)[0] - b[a];
            let new = (w[a] - grad / g_aa).max(0.0);
            max_change = max_change.max((new - w[a]).abs());
            w[a] = new;
        }
        if max_change <= 1e-13 * (1.0 + w.amax()) {
            break;
        }
    }
    w
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{DocTermMatrix, Vocabulary, Weighting};
    use crate::factorization::dense_matrix;
    use crate::factorization::{fit_lda, fit_nmf, LdaOptions, NmfOptions};

    fn argmax(row: nalgebra::RowDVector<f64>) -> usize {
        row.iter()
            .enumerate()
            .fold(
                (0, f64::NEG_INFINITY),
                |best, (i, &v)| if v > best.1 { (i, v) } else { best },
            )
            .0
    }

    #[test]
    fn nnls_matches_unconstrained_solution_when_positive() {
        let gram = DMatrix::from_row_slice(2, 2, &[2.0, 0.5, 0.5, 1.0]);
        let w_true = DVector::from_vec(vec![1.0, 3.0]);
        let b = &gram * &w_true;
        let w = nnls_gram(&gram, &b);
        assert!((w - w_true).norm() < 1e-10);
    }

    #[test]
    fn nnls_clamps_negative_coordinates() {
        let gram = DMatrix::identity(2, 2);
        let b = DVector::from_vec(vec![-1.0, 2.0]);
        let w = nnls_gram(&gram, &b);
        assert_eq!(w[0], 0.0);
        assert!((w[1] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn nmf_training_docs_keep_their_topic() {
        // Exactly factorizable, well-separated data.
        let w0 = DMatrix::from_fn(12, 3, |i, a| if i % 3 == a { 2.0 + i as f64 * 0.1 } else { 0.05 });
        let h0 = DMatrix::from_fn(3, 9, |a, j| if j / 3 == a { 1.0 + j as f64 * 0.1 } else { 0.02 });
        let m = dense_matrix(&(&w0 * &h0));
        let model = fit_nmf(
            &m,
            3,
            2,
            &NmfOptions {
                max_iter: 5000,
                tol: 0.0,
            },
        )
        .unwrap();
        let fold = infer_new_docs(&model, &m).unwrap();
        for i in 0..12 {
            assert_eq!(
                argmax(fold.doc_topic.row(i).into()),
                argmax(model.doc_topic.row(i).into())
            );
        }
    }

    #[test]
    fn zero_rows() {
        let d = DMatrix::from_fn(6, 4, |i, j| ((i + j) % 3) as f64 + 0.5);
        let m = dense_matrix(&d);
        let lda = fit_lda(&m, 2, 0, &LdaOptions::default()).unwrap();
        let nmf = fit_nmf(&m, 2, 0, &NmfOptions::default()).unwrap();
        let vocab = Vocabulary::from_parts(vec!["t0".into(), "zzz".into()], vec![1, 1], 1);
        let new = DocTermMatrix::from_triplets(vec!["n0".into()], vocab, &[(0, 1, 3.0)], Weighting::Count, false);
        let f = infer_new_docs(&lda, &new).unwrap();
        assert_eq!(f.zero_rows, vec![0]);
        assert_eq!(f.dropped_terms, vec!["zzz".to_string()]);
        assert!((f.doc_topic[(0, 0)] - 0.5).abs() < 1e-12);
        let f = infer_new_docs(&nmf, &new).unwrap();
        assert_eq!(f.zero_rows, vec![0]);
        assert_eq!(f.doc_topic.row(0).sum(), 0.0);
    }

    #[test]
    fn lda_rows_sum_to_one() {
        let d = DMatrix::from_fn(6, 4, |i, j| ((i * j) % 3) as f64 + 0.5);
        let m = dense_matrix(&d);
        let lda = fit_lda(&m, 3, 1, &LdaOptions::default()).unwrap();
        let f = infer_new_docs(&lda, &m).unwrap();
        for row in f.doc_topic.row_iter() {
            assert!((row.sum() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn vocabulary_mismatch() {
        let d = DMatrix::from_element(3, 2, 1.0);
        let nmf = fit_nmf(&dense_matrix(&d), 1, 0, &NmfOptions::default()).unwrap();
        let vocab = Vocabulary::from_parts(vec!["other".into()], vec![1], 1);
        let new = DocTermMatrix::from_triplets(vec!["x".into()], vocab, &[(0, 0, 1.0)], Weighting::Count, false);
        assert!(matches!(infer_new_docs(&nmf, &new), Err(Error::VocabularyMismatch)));
    }
}
