use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::corpus::DocTermMatrix;
use crate::error::{Error, Result};
use crate::factorization::TopicModel;

/// Percentile with linear interpolation between closest ranks (the numpy
/// default). `pct` is in `[0, 100]`.
pub fn percentile(values: &[f64], pct: f64) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let pos = pct / 100.0 * (v.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    Some(v[lo] + (v[hi] - v[lo]) * (pos - lo as f64))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermImportance {
    pub pct: f64,
    /// The `pct` percentile of every topic-term weight.
    pub threshold: f64,
    /// `important[t][j]`: weight of term `j` in topic `t` is strictly above
    /// the threshold.
    pub important: Vec<Vec<bool>>,
    /// Important in topic `t` and in no other topic.
    pub exclusive: Vec<Vec<bool>>,
}

impl TermImportance {
    /// Indices of the important terms of `topic`.
    pub fn important_terms(&self, topic: usize) -> Vec<usize> {
        self.important[topic]
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(j, _)| j)
            .collect()
    }
}

pub fn important_terms_percentile(model: &TopicModel, pct: f64) -> Result<TermImportance> {
    if !(0.0..=100.0).contains(&pct) {
        return Err(Error::InvalidArgument(format!("percentile {pct} outside [0, 100]")));
    }
    let all: Vec<f64> = model.topic_term.iter().copied().collect();
    let threshold = percentile(&all, pct).unwrap_or(0.0);
    let important: Vec<Vec<bool>> = model
        .topic_term
        .row_iter()
        .map(|r| r.iter().map(|&w| w > threshold).collect())
        .collect();
    let per_term: Vec<usize> = (0..model.n_terms())
        .map(|j| important.iter().filter(|row| row[j]).count())
        .collect();
    let exclusive = important
        .iter()
        .map(|row| row.iter().zip(&per_term).map(|(&imp, &n)| imp && n == 1).collect())
        .collect();
    Ok(TermImportance {
        pct,
        threshold,
        important,
        exclusive,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RelevantTerm {
    pub term: String,
    pub relevance: f64,
    pub p_term_given_topic: f64,
    pub lift: f64,
}

/// `lambda * ln p(w|t) + (1 - lambda) * ln(p(w|t) / p(w))` with `p(w)` the
/// term's share of the total weight in `matrix`. Terms with a zero
/// probability on either side are skipped. Columns are matched by term.
pub fn relevance_terms(
    model: &TopicModel,
    matrix: &DocTermMatrix,
    lambda: f64,
    n: usize,
) -> Result<Vec<Vec<RelevantTerm>>> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::InvalidArgument(format!("lambda {lambda} outside [0, 1]")));
    }
    let sums = matrix.column_sums();
    let total: f64 = sums.iter().sum();
    let index: HashMap<&str, usize> = matrix
        .terms()
        .iter()
        .enumerate()
        .map(|(j, t)| (t.as_str(), j))
        .collect();
    let p_w: Vec<f64> = model
        .terms
        .iter()
        .map(|t| match index.get(t.as_str()) {
            Some(&j) if total > 0.0 => sums[j] / total,
            _ => 0.0,
        })
        .collect();
    let dist = model.topic_term_distributions();
    Ok(dist
        .row_iter()
        .map(|row| {
            let mut terms: Vec<(usize, RelevantTerm)> = row
                .iter()
                .enumerate()
                .filter(|&(j, &p)| p > 0.0 && p_w[j] > 0.0)
                .map(|(j, &p)| {
                    let lift = p / p_w[j];
                    (
                        j,
                        RelevantTerm {
                            term: model.terms[j].clone(),
                            relevance: lambda * p.ln() + (1.0 - lambda) * lift.ln(),
                            p_term_given_topic: p,
                            lift,
                        },
                    )
                })
                .collect();
            terms.sort_by(|a, b| b.1.relevance.total_cmp(&a.1.relevance).then(a.0.cmp(&b.0)));
            terms.into_iter().take(n).map(|(_, t)| t).collect()
        })
        .collect())
}

/// Percentage of the corpus token mass attributed to each topic: document
/// lengths (row sums of `matrix`) spread over topics by the normalized
/// `doc_topic` rows. Used as circle areas in the intertopic map.
pub fn term_shares(model: &TopicModel, matrix: &DocTermMatrix) -> Result<Vec<f64>> {
    if matrix.n_docs() != model.n_docs() {
        return Err(Error::InvalidArgument(format!(
            "matrix has {} documents, model has {}",
            matrix.n_docs(),
            model.n_docs()
        )));
    }
    let mut mass = vec![0.0; model.k];
    for (i, row) in model.doc_topic.row_iter().enumerate() {
        let s = row.sum();
        if s <= 0.0 {
            continue;
        }
        let len: f64 = matrix.row(i).1.iter().sum();
        for (t, &w) in row.iter().enumerate() {
            mass[t] += len * w / s;
        }
    }
    let total: f64 = mass.iter().sum();
    Ok(mass
        .into_iter()
        .map(|m| if total > 0.0 { 100.0 * m / total } else { 0.0 })
        .collect())
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::factorization::dense_matrix;
    use crate::factorization::{FitDiagnostics, Method};
    use nalgebra::DMatrix;

    pub(crate) fn model_with(topic_term: DMatrix<f64>, doc_topic: DMatrix<f64>, method: Method) -> TopicModel {
        TopicModel {
            method,
            k: topic_term.nrows(),
            seed: 0,
            doc_ids: (0..doc_topic.nrows()).map(|i| format!("doc{i}")).collect(),
            terms: (0..topic_term.ncols()).map(|j| format!("t{j}")).collect(),
            doc_topic,
            topic_term,
            diagnostics: FitDiagnostics {
                iterations: 0,
                objective: 0.0,
                converged: true,
                trace: vec![],
                zero_rows: vec![],
            },
        }
    }

    #[test]
    fn percentile_interpolates() {
        assert_eq!(percentile(&[1.0, 2.0, 3.0, 4.0], 75.0), Some(3.25));
        assert_eq!(percentile(&[5.0], 75.0), Some(5.0));
        assert_eq!(percentile(&[], 75.0), None);
    }

    #[test]
    fn importance_rules() {
        let m = model_with(
            DMatrix::from_row_slice(1, 4, &[1.0, 2.0, 3.0, 4.0]),
            DMatrix::zeros(1, 1),
            Method::Nmf,
        );
        let imp = important_terms_percentile(&m, 75.0).unwrap();
        assert_eq!(imp.important[0], vec![false, false, false, true]);
        assert_eq!(imp.exclusive[0], vec![false, false, false, true]);

        let m = model_with(
            DMatrix::from_row_slice(2, 4, &[9.0, 0.0, 0.0, 8.0, 9.0, 0.0, 0.0, 0.0]),
            DMatrix::zeros(1, 2),
            Method::Nmf,
        );
        let imp = important_terms_percentile(&m, 75.0).unwrap();
        assert!(imp.important[0][0] && imp.important[1][0]);
        assert!(!imp.exclusive[0][0]);

        let m = model_with(DMatrix::from_element(2, 3, 0.5), DMatrix::zeros(1, 2), Method::Nmf);
        let imp = important_terms_percentile(&m, 75.0).unwrap();
        assert!(imp.important.iter().flatten().all(|&b| !b));
    }

    #[test]
    fn relevance_extremes() {
        let tt = DMatrix::from_row_slice(2, 3, &[0.6, 0.3, 0.1, 0.1, 0.2, 0.7]);
        let model = model_with(tt, DMatrix::zeros(2, 2), Method::Lda);
        let counts = DMatrix::from_row_slice(2, 3, &[1.0, 4.0, 0.0, 0.0, 4.0, 1.0]);
        let m = dense_matrix(&counts);
        let names = |v: &Vec<RelevantTerm>| v.iter().map(|t| t.term.clone()).collect::<Vec<_>>();
        let r1 = relevance_terms(&model, &m, 1.0, 3).unwrap();
        for t in 0..2 {
            assert_eq!(names(&r1[t]), model.top_terms(t, 3));
        }
        let r0 = relevance_terms(&model, &m, 0.0, 3).unwrap();
        for t in 0..2 {
            let lifts: Vec<f64> = r0[t].iter().map(|x| x.lift).collect();
            assert!(lifts.windows(2).all(|w| w[0] >= w[1]));
        }
        let uniform = dense_matrix(&DMatrix::from_element(2, 3, 1.0));
        let a = relevance_terms(&model, &uniform, 0.0, 3).unwrap();
        let b = relevance_terms(&model, &uniform, 0.6, 3).unwrap();
        assert_eq!(
            a.iter().map(names).collect::<Vec<_>>(),
            b.iter().map(names).collect::<Vec<_>>()
        );
        assert!(relevance_terms(&model, &m, 1.5, 3).is_err());
    }

    #[test]
    fn shares_sum_to_100() {
        let model = model_with(
            DMatrix::from_element(2, 2, 0.5),
            DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.25, 0.75]),
            Method::Lda,
        );
        let m = dense_matrix(&DMatrix::from_row_slice(2, 2, &[2.0, 0.0, 1.0, 1.0]));
        let s = term_shares(&model, &m).unwrap();
        assert!((s[0] - 62.5).abs() < 1e-12);
        assert!((s[0] + s[1] - 100.0).abs() < 1e-12);
    }
}
