//! Topic modeling for small source-code corpora.
//!
//! The crate turns Python-syntax snippets into token streams (a plain word
//! splitter and an augmented lexer that annotates code structure), builds
//! weighted document-term matrices, fits NMF and LDA models over a
//! hyperparameter grid, ranks the grid by UMass coherence and post-processes
//! the chosen model into reports.
//!
//! Module map:
//!
//! * [`tokenizer`] - standard and augmented tokenizers.
//! * [`corpus`] - corpus ingestion, vocabularies, document-term matrices and
//!   TF-IDF / NCut weighting.
//! * [`factorization`] - NMF, variational LDA, fold-in inference and the
//!   K-means + logistic-regression baseline.
//! * [`evaluation`] - coherence metrics, grid search, Fagin top-k selection
//!   and the Mann-Whitney U test.
//! * [`topics`] - hard assignment, topic filtering and merging, term
//!   importance, relevance, topic distances, projections, intruder tasks.
//! * [`pipeline`] - configuration, end-to-end runs and report bundles.

pub mod corpus;
pub mod error;
pub mod evaluation;
pub mod factorization;
pub mod pipeline;
pub mod tokenizer;
pub mod topics;

mod csvout;
mod seed;

pub use error::{Error, Result};
