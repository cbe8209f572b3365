use serde::{Deserialize, Serialize};

use crate::factorization::TopicModel;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Assignment {
    pub k: usize,
    pub doc_ids: Vec<String>,
    /// Argmax topic per document; `None` for an all-zero row.
    pub topics: Vec<Option<usize>>,
    /// Documents per topic.
    pub counts: Vec<usize>,
}

impl Assignment {
    pub fn unassigned(&self) -> Vec<usize> {
        self.topics
            .iter()
            .enumerate()
            .filter(|(_, t)| t.is_none())
            .map(|(i, _)| i)
            .collect()
    }

    /// Indices of the documents assigned to `topic`.
    pub fn docs_of(&self, topic: usize) -> Vec<usize> {
        self.topics
            .iter()
            .enumerate()
            .filter(|(_, t)| **t == Some(topic))
            .map(|(i, _)| i)
            .collect()
    }
}

/// Index of the largest entry, lowest index on ties; `None` when the row
/// has no positive entry.
pub fn argmax(row: impl IntoIterator<Item = f64>) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (i, v) in row.into_iter().enumerate() {
        if v > 0.0 && best.is_none_or(|(_, b)| v > b) {
            best = Some((i, v));
        }
    }
    best.map(|(i, _)| i)
}

pub fn hard_assign(model: &TopicModel) -> Assignment {
    let topics: Vec<Option<usize>> = model.doc_topic.row_iter().map(|r| argmax(r.iter().copied())).collect();
    let mut counts = vec![0; model.k];
    for t in topics.iter().flatten() {
        counts[*t] += 1;
    }
    Assignment {
        k: model.k,
        doc_ids: model.doc_ids.clone(),
        topics,
        counts,
    }
}
