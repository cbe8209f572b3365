use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::Assignment;
use crate::error::{Error, Result};
use crate::factorization::{Method, TopicModel};

/// Outcome of merging and filtering. Every group is a sorted list of
/// original topic ids; groups are ordered by their smallest member and
/// `kept`, `removed_empty` and `removed_small` together cover every topic
/// exactly once.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopicSelection {
    pub k: usize,
    pub min_docs: usize,
    /// Declared merge groups.
    pub merged: Vec<Vec<usize>>,
    pub kept: Vec<Vec<usize>>,
    /// Documents assigned to each kept group.
    pub kept_counts: Vec<usize>,
    pub removed_empty: Vec<Vec<usize>>,
    pub removed_small: Vec<Vec<usize>>,
}

impl TopicSelection {
    /// Position in `kept` of the group holding `topic`.
    pub fn kept_index(&self, topic: usize) -> Option<usize> {
        self.kept.iter().position(|g| g.contains(&topic))
    }
}

/// Expands merge groups into a full partition of `0..k`, adding singletons
/// for unmerged topics.
pub fn topic_groups(k: usize, merges: &[Vec<usize>]) -> Result<Vec<Vec<usize>>> {
    let mut owner = vec![false; k];
    let mut groups = Vec::new();
    for m in merges {
        let mut g = m.clone();
        g.sort_unstable();
        for (i, &t) in g.iter().enumerate() {
            if t >= k {
                return Err(Error::TopicOutOfRange { id: t, k });
            }
            if owner[t] || (i > 0 && g[i - 1] == t) {
                return Err(Error::MergeOverlap(t));
            }
            owner[t] = true;
        }
        if !g.is_empty() {
            groups.push(g);
        }
    }
    groups.extend((0..k).filter(|&t| !owner[t]).map(|t| vec![t]));
    groups.sort_by_key(|g| g[0]);
    Ok(groups)
}

/// Applies `merges` first, then drops groups with no document and groups
/// with fewer than `min_docs` documents.
pub fn filter_topics(assignment: &Assignment, min_docs: usize, merges: &[Vec<usize>]) -> Result<TopicSelection> {
    let groups = topic_groups(assignment.k, merges)?;
    let mut sel = TopicSelection {
        k: assignment.k,
        min_docs,
        merged: groups.iter().filter(|g| g.len() > 1).cloned().collect(),
        kept: Vec::new(),
        kept_counts: Vec::new(),
        removed_empty: Vec::new(),
        removed_small: Vec::new(),
    };
    for g in groups {
        let count: usize = g.iter().map(|&t| assignment.counts[t]).sum();
        if count == 0 {
            sel.removed_empty.push(g);
        } else if count < min_docs {
            sel.removed_small.push(g);
        } else {
            sel.kept.push(g);
            sel.kept_counts.push(count);
        }
    }
    Ok(sel)
}

/// A model with one topic per group: `doc_topic` columns are summed;
/// `topic_term` rows are averaged and renormalized for LDA, summed for NMF.
pub fn combine_topics(model: &TopicModel, groups: &[Vec<usize>]) -> Result<TopicModel> {
    for g in groups {
        if let Some(&t) = g.iter().find(|&&t| t >= model.k) {
            return Err(Error::TopicOutOfRange { id: t, k: model.k });
        }
    }
    let k = groups.len();
    let mut doc_topic = DMatrix::zeros(model.n_docs(), k);
    let mut topic_term = DMatrix::zeros(k, model.n_terms());
    for (gi, g) in groups.iter().enumerate() {
        for &t in g {
            let col = doc_topic.column(gi) + model.doc_topic.column(t);
            doc_topic.set_column(gi, &col);
            let row = topic_term.row(gi) + model.topic_term.row(t);
            topic_term.set_row(gi, &row);
        }
        if model.method == Method::Lda {
            let mut row = topic_term.row_mut(gi);
            let s = row.sum();
            if s > 0.0 {
                row /= s;
            }
        }
    }
    Ok(TopicModel {
        k,
        doc_topic,
        topic_term,
        ..model.clone()
    })
}

/// [`combine_topics`] over the full partition induced by `merges`.
pub fn merge_topics(model: &TopicModel, merges: &[Vec<usize>]) -> Result<TopicModel> {
    combine_topics(model, &topic_groups(model.k, merges)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assignment(counts: &[usize]) -> Assignment {
        let topics: Vec<Option<usize>> = counts
            .iter()
            .enumerate()
            .flat_map(|(t, &c)| std::iter::repeat_n(Some(t), c))
            .collect();
        Assignment {
            k: counts.len(),
            doc_ids: (0..topics.len()).map(|i| i.to_string()).collect(),
            topics,
            counts: counts.to_vec(),
        }
    }

    #[test]
    fn five_conceptual_clusters() {
        // 1-based ids 2 and 4 merged
        let a = assignment(&[2, 1, 1, 2, 1, 13, 1, 14, 0, 7, 0, 12]);
        let sel = filter_topics(&a, 3, &[vec![1, 3]]).unwrap();
        assert_eq!(sel.kept, vec![vec![1, 3], vec![5], vec![7], vec![9], vec![11]]);
        assert_eq!(sel.kept_counts, vec![3, 13, 14, 7, 12]);
        assert_eq!(sel.removed_empty, vec![vec![8], vec![10]]);
        assert_eq!(sel.removed_small, vec![vec![0], vec![2], vec![4], vec![6]]);
        assert_eq!(sel.kept_index(3), Some(0));
    }

    #[test]
    fn identity_and_degenerate() {
        let sel = filter_topics(&assignment(&[3, 4, 5]), 3, &[]).unwrap();
        assert_eq!(sel.kept, vec![vec![0], vec![1], vec![2]]);
        let sel = filter_topics(&assignment(&[0, 9, 0]), 3, &[]).unwrap();
        assert_eq!(sel.kept, vec![vec![1]]);
        assert_eq!(sel.removed_empty.len(), 2);
    }

    #[test]
    fn merge_errors() {
        let a = assignment(&[3, 3, 3]);
        assert!(matches!(
            filter_topics(&a, 3, &[vec![0, 1], vec![1, 2]]),
            Err(Error::MergeOverlap(1))
        ));
        assert!(matches!(
            filter_topics(&a, 3, &[vec![0, 0]]),
            Err(Error::MergeOverlap(0))
        ));
        assert!(matches!(
            filter_topics(&a, 3, &[vec![0, 5]]),
            Err(Error::TopicOutOfRange { id: 5, k: 3 })
        ));
    }
}
