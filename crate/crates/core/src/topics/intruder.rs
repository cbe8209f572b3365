use nalgebra::DMatrix;
use rand::seq::{IndexedRandom, SliceRandom};
use serde::{Deserialize, Serialize};

use super::{Assignment, TopicSelection};
use crate::error::{Error, Result};
use crate::seed::keyed_rng;

pub const MEMBERS_PER_TASK: usize = 3;

/// One rater question: four documents, three from `topic`, one intruder.
/// `topic` and `intruder_topic` index the selection's kept groups.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntruderTask {
    pub task_id: usize,
    pub topic: usize,
    pub member_docs: Vec<String>,
    pub intruder_doc: String,
    pub intruder_topic: usize,
    /// The four documents in the order shown to raters.
    pub shuffled: Vec<String>,
    /// Position of the intruder in `shuffled`.
    pub answer: usize,
}

/// What raters see: the task id and the shuffled documents.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PublicTask {
    pub task_id: usize,
    pub docs: Vec<String>,
}

impl IntruderTask {
    pub fn public(&self) -> PublicTask {
        PublicTask {
            task_id: self.task_id,
            docs: self.shuffled.clone(),
        }
    }
}

/// A rater's pick: the position in `shuffled` believed to be the intruder.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntruderAnswer {
    pub task_id: usize,
    pub choice: usize,
}

/// One task per kept group. Members are sampled without replacement from
/// the group's documents; the intruder comes from a randomly chosen other
/// kept group.
pub fn make_intruder_tasks(
    assignment: &Assignment,
    selection: &TopicSelection,
    seed: u64,
) -> Result<Vec<IntruderTask>> {
    if selection.kept.len() < 2 {
        return Err(Error::InvalidArgument(format!(
            "intruder tasks need at least 2 kept topics, got {}",
            selection.kept.len()
        )));
    }
    let docs: Vec<Vec<usize>> = selection
        .kept
        .iter()
        .map(|g| {
            let mut d: Vec<usize> = g.iter().flat_map(|&t| assignment.docs_of(t)).collect();
            d.sort_unstable();
            d
        })
        .collect();
    for (gi, d) in docs.iter().enumerate() {
        if d.len() < MEMBERS_PER_TASK {
            return Err(Error::TooFewDocs {
                topic: gi,
                got: d.len(),
                needed: MEMBERS_PER_TASK,
            });
        }
    }

    let mut tasks = Vec::with_capacity(docs.len());
    for (gi, members_pool) in docs.iter().enumerate() {
        let mut rng = keyed_rng(seed, "intruder", &gi.to_string());
        let members: Vec<usize> = members_pool
            .choose_multiple(&mut rng, MEMBERS_PER_TASK)
            .copied()
            .collect();
        let others: Vec<usize> = (0..docs.len()).filter(|&o| o != gi).collect();
        let intruder_topic = *others.choose(&mut rng).unwrap();
        let intruder = *docs[intruder_topic].choose(&mut rng).unwrap();
        let mut order: Vec<usize> = members.iter().copied().chain([intruder]).collect();
        order.shuffle(&mut rng);
        let name = |i: usize| assignment.doc_ids[i].clone();
        tasks.push(IntruderTask {
            task_id: gi,
            topic: gi,
            member_docs: members.iter().map(|&i| name(i)).collect(),
            intruder_doc: name(intruder),
            intruder_topic,
            answer: order.iter().position(|&i| i == intruder).unwrap(),
            shuffled: order.into_iter().map(name).collect(),
        });
    }
    Ok(tasks)
}

/// Row-normalized confusion matrix over kept groups: rows are the task's
/// home topic. A correct pick counts on the diagonal; a wrong pick counts
/// in the intruder topic's column. Rows without answers stay zero.
pub fn score_intruder_answers(tasks: &[IntruderTask], answers: &[IntruderAnswer]) -> Result<DMatrix<f64>> {
    let n = tasks
        .iter()
        .map(|t| t.topic.max(t.intruder_topic) + 1)
        .max()
        .unwrap_or(0);
    let mut m = DMatrix::zeros(n, n);
    for a in answers {
        let task = tasks
            .iter()
            .find(|t| t.task_id == a.task_id)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown task {}", a.task_id)))?;
        if a.choice >= task.shuffled.len() {
            return Err(Error::InvalidArgument(format!(
                "task {}: choice {} out of range",
                a.task_id, a.choice
            )));
        }
        let col = if a.choice == task.answer {
            task.topic
        } else {
            task.intruder_topic
        };
        m[(task.topic, col)] += 1.0;
    }
    for mut row in m.row_iter_mut() {
        let s = row.sum();
        if s > 0.0 {
            row /= s;
        }
    }
    Ok(m)
}
