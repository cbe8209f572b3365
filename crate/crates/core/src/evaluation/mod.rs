//! Coherence metrics, the grid search, Fagin top-k selection and the
//! Mann-Whitney U test.

mod coherence;
mod external;
mod fagin;
mod grid;
mod stats;

pub use coherence::{
    coherence_pairs, lists_coherence, median, model_coherence, npmi, uci_npmi_coherence, uci_npmi_detail,
    umass_coherence, umass_detail, CoherenceScore, CooccurrenceStats, Metric, ModelCoherence, EPSILON,
};
pub use external::{external_coherence, external_coherence_runs, Approach, ExternalResult, ExternalRun, NamedModel};
pub use fagin::{fagin_topk, rank_by_score};
pub use grid::{
    enumerate_grid, fit_and_score, grid_csv, matrix_for, mean_std, run_grid, runs_jsonl, select_best, BestModel,
    GridConfig, GridOptions, GridResult, HyperParams, RunError, RunScore, GRID_CSV_HEADER,
};
pub use stats::{mann_whitney_u, midranks, MannWhitney, EXACT_MAX_N};
