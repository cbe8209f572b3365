//! Report bundles: one JSON document plus CSV mirrors and intruder files.
//!
//! Topic numbers in every file are 1-based. Kept topics are numbered by
//! their position in the selection and also list the original topics they
//! were built from.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{write_file, write_json, TopicsSection};
use crate::corpus::DocTermMatrix;
use crate::csvout::push_row;
use crate::error::{Error, Result};
use crate::factorization::{Method, TopicModel};
use crate::topics::{
    combine_topics, filter_topics, hard_assign, important_terms_percentile, make_intruder_tasks, pca_2d, pcoa_2d,
    relevance_terms, term_shares, topic_distance_matrix, IntruderTask, PublicTask, RelevantTerm,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelSummary {
    pub method: Method,
    pub k: usize,
    pub seed: u64,
    pub n_docs: usize,
    pub n_terms: usize,
    pub iterations: usize,
    pub objective: f64,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AssignmentRow {
    pub doc_id: String,
    /// Original topic, `None` for documents with an all-zero weight row.
    pub topic: Option<usize>,
    /// Kept topic, `None` when the document's topic was filtered out.
    pub kept_topic: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionReport {
    pub min_docs: usize,
    pub merged: Vec<Vec<usize>>,
    pub kept: Vec<Vec<usize>>,
    pub kept_counts: Vec<usize>,
    pub removed_empty: Vec<Vec<usize>>,
    pub removed_small: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopNTerms {
    pub n: usize,
    pub terms: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopicReport {
    pub topic: usize,
    /// Original topics merged into this one.
    pub members: Vec<usize>,
    pub n_docs: usize,
    pub top_terms: Vec<TopNTerms>,
    pub relevant_terms: Vec<RelevantTerm>,
    pub important_terms: Vec<String>,
    pub exclusive_terms: Vec<String>,
    /// Percentage of token mass, used as the circle area on the topic map.
    pub term_share: f64,
    pub coord: [f64; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportBundle {
    pub model: ModelSummary,
    pub assignments: Vec<AssignmentRow>,
    /// Documents per original topic.
    pub counts: Vec<usize>,
    pub selection: SelectionReport,
    pub lambda: f64,
    pub importance_percentile: f64,
    pub importance_threshold: f64,
    pub topics: Vec<TopicReport>,
    /// Jensen-Shannon divergence between kept topics.
    pub distances: Vec<Vec<f64>>,
    pub pcoa_axis_weights: [f64; 2],
    pub pcoa_clamped_negative: bool,
    /// Document coordinates on the two leading principal axes.
    pub doc_coords: Option<Vec<[f64; 2]>>,
    pub doc_coords_error: Option<String>,
    pub intruder_error: Option<String>,
    #[serde(skip)]
    pub intruder_tasks: Vec<IntruderTask>,
}

fn one_based(groups: &[Vec<usize>]) -> Vec<Vec<usize>> {
    groups.iter().map(|g| g.iter().map(|t| t + 1).collect()).collect()
}

/// Post-processes `model` (fitted on `matrix`) with the `[topics]` options.
/// `opts.merges` holds 1-based topic numbers.
pub fn build_report(model: &TopicModel, matrix: &DocTermMatrix, opts: &TopicsSection) -> Result<ReportBundle> {
    if matrix.doc_ids() != model.doc_ids.as_slice() {
        return Err(Error::InvalidArgument(
            "matrix and model list different documents".into(),
        ));
    }
    let assignment = hard_assign(model);
    let selection = filter_topics(&assignment, opts.min_docs, &opts.zero_based_merges()?)?;
    let kept = combine_topics(model, &selection.kept)?;

    let max_n = opts.top_n.iter().copied().max().unwrap_or(0);
    let relevant = relevance_terms(&kept, matrix, opts.lambda, max_n)?;
    let importance = important_terms_percentile(&kept, opts.percentile)?;
    let shares = term_shares(&kept, matrix)?;
    let distances = topic_distance_matrix(&kept);
    let map = pcoa_2d(&distances)?;
    let names = |idx: Vec<usize>| -> Vec<String> { idx.into_iter().map(|j| kept.terms[j].clone()).collect() };

    let topics = (0..kept.k)
        .map(|t| {
            let flagged = |flags: &[bool]| {
                let mut idx: Vec<usize> = (0..flags.len()).filter(|&j| flags[j]).collect();
                idx.sort_by(|&a, &b| {
                    kept.topic_term[(t, b)]
                        .total_cmp(&kept.topic_term[(t, a)])
                        .then(a.cmp(&b))
                });
                names(idx)
            };
            TopicReport {
                topic: t + 1,
                members: selection.kept[t].iter().map(|x| x + 1).collect(),
                n_docs: selection.kept_counts[t],
                top_terms: opts
                    .top_n
                    .iter()
                    .map(|&n| TopNTerms {
                        n,
                        terms: kept.top_terms(t, n),
                    })
                    .collect(),
                relevant_terms: relevant[t].clone(),
                important_terms: flagged(&importance.important[t]),
                exclusive_terms: flagged(&importance.exclusive[t]),
                term_share: shares[t],
                coord: map.coords[t],
            }
        })
        .collect();

    let (doc_coords, doc_coords_error) = match pca_2d(matrix) {
        Ok(p) => (Some(p.coords), None),
        Err(e) => (None, Some(e.to_string())),
    };
    let (intruder_tasks, intruder_error) = match make_intruder_tasks(&assignment, &selection, opts.intruder_seed) {
        Ok(t) => (t, None),
        Err(e) => (Vec::new(), Some(e.to_string())),
    };

    Ok(ReportBundle {
        model: ModelSummary {
            method: model.method,
            k: model.k,
            seed: model.seed,
            n_docs: model.n_docs(),
            n_terms: model.n_terms(),
            iterations: model.diagnostics.iterations,
            objective: model.diagnostics.objective,
            converged: model.diagnostics.converged,
        },
        assignments: assignment
            .doc_ids
            .iter()
            .zip(&assignment.topics)
            .map(|(id, t)| AssignmentRow {
                doc_id: id.clone(),
                topic: t.map(|t| t + 1),
                kept_topic: t.and_then(|t| selection.kept_index(t)).map(|k| k + 1),
            })
            .collect(),
        counts: assignment.counts.clone(),
        selection: SelectionReport {
            min_docs: selection.min_docs,
            merged: one_based(&selection.merged),
            kept: one_based(&selection.kept),
            kept_counts: selection.kept_counts.clone(),
            removed_empty: one_based(&selection.removed_empty),
            removed_small: one_based(&selection.removed_small),
        },
        lambda: opts.lambda,
        importance_percentile: opts.percentile,
        importance_threshold: importance.threshold,
        topics,
        distances: distances.row_iter().map(|r| r.iter().copied().collect()).collect(),
        pcoa_axis_weights: map.axis_weights,
        pcoa_clamped_negative: map.clamped_negative,
        doc_coords,
        doc_coords_error,
        intruder_error,
        intruder_tasks,
    })
}

pub const REPORT_FILE: &str = "report.json";

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

/// Writes the bundle into `dir` and returns the written paths:
/// `report.json`, `assignments.csv`, `topic_terms.csv`, `topic_map.csv`,
/// `intruder_tasks.json` and `intruder_key.json`.
pub fn write_report(dir: &Path, bundle: &ReportBundle) -> Result<Vec<PathBuf>> {
    let mut written = Vec::new();
    let public: Vec<PublicTask> = bundle.intruder_tasks.iter().map(IntruderTask::public).collect();
    write_json(&dir.join(REPORT_FILE), bundle)?;
    write_json(&dir.join("intruder_tasks.json"), &public)?;
    write_json(&dir.join("intruder_key.json"), &bundle.intruder_tasks)?;
    written.extend([REPORT_FILE, "intruder_tasks.json", "intruder_key.json"].map(|n| dir.join(n)));

    let mut assignments = String::new();
    push_row(&mut assignments, &["doc_id", "topic", "kept_topic", "pc1", "pc2"]);
    for (i, a) in bundle.assignments.iter().enumerate() {
        let c = bundle.doc_coords.as_ref().map(|c| c[i]);
        push_row(
            &mut assignments,
            &[
                a.doc_id.clone(),
                opt(a.topic),
                opt(a.kept_topic),
                opt(c.map(|c| c[0])),
                opt(c.map(|c| c[1])),
            ],
        );
    }

    let mut terms = String::new();
    push_row(
        &mut terms,
        &[
            "topic",
            "rank",
            "term",
            "relevance",
            "p_term_given_topic",
            "lift",
            "important",
            "exclusive",
        ],
    );
    for t in &bundle.topics {
        for (rank, r) in t.relevant_terms.iter().enumerate() {
            push_row(
                &mut terms,
                &[
                    t.topic.to_string(),
                    (rank + 1).to_string(),
                    r.term.clone(),
                    r.relevance.to_string(),
                    r.p_term_given_topic.to_string(),
                    r.lift.to_string(),
                    t.important_terms.contains(&r.term).to_string(),
                    t.exclusive_terms.contains(&r.term).to_string(),
                ],
            );
        }
    }

    let mut map = String::new();
    push_row(&mut map, &["topic", "members", "n_docs", "term_share", "x", "y"]);
    for t in &bundle.topics {
        let members: Vec<String> = t.members.iter().map(|m| m.to_string()).collect();
        push_row(
            &mut map,
            &[
                t.topic.to_string(),
                members.join("&"),
                t.n_docs.to_string(),
                t.term_share.to_string(),
                t.coord[0].to_string(),
                t.coord[1].to_string(),
            ],
        );
    }

    for (name, body) in [
        ("assignments.csv", assignments),
        ("topic_terms.csv", terms),
        ("topic_map.csv", map),
    ] {
        let path = dir.join(name);
        write_file(&path, body)?;
        written.push(path);
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factorization::dense_matrix;
    use nalgebra::DMatrix;

    fn block_matrix() -> DocTermMatrix {
        // three docs on terms 0-2, three on terms 3-5, one on both
        let d = DMatrix::from_fn(7, 6, |i, j| match (i, j) {
            (0..=2, 0..=2) => 1.0 + ((i + j) % 2) as f64,
            (3..=5, 3..=5) => 1.0 + ((i * j) % 3) as f64,
            (6, _) => 1.0,
            _ => 0.0,
        });
        dense_matrix(&d)
    }

    #[test]
    fn report_on_planted_blocks() {
        let m = block_matrix();
        let model = crate::factorization::fit(Method::Nmf, &m, 2, 3).unwrap();
        let opts = TopicsSection {
            top_n: vec![2, 3],
            ..TopicsSection::default()
        };
        let r = build_report(&model, &m, &opts).unwrap();
        assert_eq!(r.assignments.len(), 7);
        assert_eq!(r.counts.iter().sum::<usize>(), 7);
        assert_eq!(r.topics.len(), 2);
        assert_eq!(r.topics[0].top_terms[1].terms.len(), 3);
        assert!(r.topics.iter().all(|t| t.relevant_terms.len() <= 3));
        let share: f64 = r.topics.iter().map(|t| t.term_share).sum();
        assert!((share - 100.0).abs() < 1e-9);
        assert_eq!(r.distances[0][0], 0.0);
        assert_eq!(r.intruder_tasks.len(), 2);
        assert!(r.doc_coords.is_some());

        let dir = tempfile::tempdir().unwrap();
        let files = write_report(dir.path(), &r).unwrap();
        assert_eq!(files.len(), 6);
        let csv = std::fs::read_to_string(dir.path().join("assignments.csv")).unwrap();
        assert_eq!(csv.lines().count(), 8);
        let back: ReportBundle = super::super::read_json(&dir.path().join(REPORT_FILE)).unwrap();
        assert_eq!(back.topics, r.topics);
    }

    #[test]
    fn filtered_topics_and_intruder_error() {
        let m = block_matrix();
        let model = crate::factorization::fit(Method::Nmf, &m, 2, 3).unwrap();
        let opts = TopicsSection {
            min_docs: 5,
            ..TopicsSection::default()
        };
        let r = build_report(&model, &m, &opts).unwrap();
        assert!(r.topics.len() < 2);
        assert!(r.intruder_error.is_some());
        assert!(r.intruder_tasks.is_empty());
    }
}
