//! Post-processing of a fitted model: hard assignment, merging and
//! filtering, term reports, topic distances, 2-D projections and intruder
//! tasks. Topic ids are 0-based here.

mod assign;
mod intruder;
mod projection;
mod select;
mod terms;

pub use assign::{argmax, hard_assign, Assignment};
pub use intruder::{
    make_intruder_tasks, score_intruder_answers, IntruderAnswer, IntruderTask, PublicTask, MEMBERS_PER_TASK,
};
pub use projection::{jensen_shannon, pca_2d, pcoa_2d, topic_distance_matrix, Projection};
pub use select::{combine_topics, filter_topics, merge_topics, topic_groups, TopicSelection};
pub use terms::{important_terms_percentile, percentile, relevance_terms, term_shares, RelevantTerm, TermImportance};
