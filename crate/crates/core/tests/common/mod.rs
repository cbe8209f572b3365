#![allow(dead_code)]

use std::path::PathBuf;

use codetopics::corpus::{DocTermMatrix, Vocabulary, Weighting};
use codetopics::factorization::{FitDiagnostics, Method, TopicModel};
use nalgebra::DMatrix;
use rand::Rng;

pub fn synthetic_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/synthetic")
}

/// Planted label of a synthetic document, taken from its file name prefix.
pub fn planted_label(doc_id: &str) -> usize {
    usize::from(!doc_id.starts_with("loops"))
}

/// Count matrix with terms `t0..` and documents `doc0..`.
pub fn dense_matrix(d: &DMatrix<f64>) -> DocTermMatrix {
    let terms = (0..d.ncols()).map(|j| format!("t{j}")).collect();
    let df = (0..d.ncols())
        .map(|j| d.column(j).iter().filter(|&&v| v != 0.0).count())
        .collect();
    let vocab = Vocabulary::from_parts(terms, df, d.nrows());
    let trip: Vec<_> = (0..d.nrows())
        .flat_map(|i| (0..d.ncols()).map(move |j| (i, j, d[(i, j)])))
        .collect();
    let rows = (0..d.nrows()).map(|i| format!("doc{i}")).collect();
    DocTermMatrix::from_triplets(rows, vocab, &trip, Weighting::Count, false)
}

/// Sparse random counts: each cell is nonzero with probability `density`.
pub fn random_counts(rng: &mut impl Rng, rows: usize, cols: usize, density: f64) -> DMatrix<f64> {
    let mut d = DMatrix::from_fn(rows, cols, |_, _| {
        if rng.random_bool(density) {
            f64::from(rng.random_range(1..6u32))
        } else {
            0.0
        }
    });
    // every row and column gets at least one entry
    for i in 0..rows {
        if d.row(i).iter().all(|&v| v == 0.0) {
            d[(i, rng.random_range(0..cols))] = 1.0;
        }
    }
    for j in 0..cols {
        if d.column(j).iter().all(|&v| v == 0.0) {
            d[(rng.random_range(0..rows), j)] = 1.0;
        }
    }
    d
}

/// A model holding only the given topic-term weights.
pub fn model_from_topic_term(topic_term: DMatrix<f64>, method: Method) -> TopicModel {
    let (k, n) = topic_term.shape();
    TopicModel {
        method,
        k,
        seed: 0,
        doc_ids: Vec::new(),
        terms: (0..n).map(|j| format!("t{j}")).collect(),
        doc_topic: DMatrix::zeros(0, k),
        topic_term,
        diagnostics: FitDiagnostics {
            iterations: 0,
            objective: 0.0,
            converged: true,
            trace: Vec::new(),
            zero_rows: Vec::new(),
        },
    }
}

pub fn euclidean(points: &[[f64; 2]]) -> DMatrix<f64> {
    let n = points.len();
    DMatrix::from_fn(n, n, |i, j| {
        ((points[i][0] - points[j][0]).powi(2) + (points[i][1] - points[j][1]).powi(2)).sqrt()
    })
}

/// Two-sided exact Mann-Whitney p-value by enumerating every split of the
/// pooled midranks.
pub fn mann_whitney_enumerated(a: &[f64], b: &[f64]) -> f64 {
    let pooled: Vec<f64> = a.iter().chain(b).copied().collect();
    let n = pooled.len();
    let ranks: Vec<f64> = pooled
        .iter()
        .map(|&x| {
            let below = pooled.iter().filter(|&&y| y < x).count() as f64;
            let equal = pooled.iter().filter(|&&y| y == x).count() as f64;
            below + (equal + 1.0) / 2.0
        })
        .collect();
    let na = a.len();
    let offset = (na * (na + 1)) as f64 / 2.0;
    let mean = (na * b.len()) as f64 / 2.0;
    let u_of = |mask: u32| -> f64 { (0..n).filter(|&i| mask & (1 << i) != 0).map(|i| ranks[i]).sum::<f64>() - offset };
    let observed = (u_of((1u32 << na) - 1) - mean).abs();
    let (mut hit, mut total) = (0u64, 0u64);
    for mask in 0u32..(1 << n) {
        if mask.count_ones() as usize != na {
            continue;
        }
        total += 1;
        if (u_of(mask) - mean).abs() >= observed - 1e-9 {
            hit += 1;
        }
    }
    hit as f64 / total as f64
}
