use nalgebra::DVector;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::corpus::DocTermMatrix;
use crate::error::{Error, Result};
use crate::seed::rng;

#[derive(Debug, Clone, PartialEq)]
pub struct KMeansOptions {
    pub max_iter: usize,
}

impl Default for KMeansOptions {
    fn default() -> Self {
        KMeansOptions { max_iter: 300 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterModel {
    pub k: usize,
    pub seed: u64,
    pub doc_ids: Vec<String>,
    pub terms: Vec<String>,
    /// k x terms.
    pub centroids: Vec<Vec<f64>>,
    pub labels: Vec<usize>,
    /// Per cluster, terms ranked by centroid weight. Replace with
    /// [`cluster_top_terms_logreg`](super::cluster_top_terms_logreg) output
    /// for the discriminative ranking.
    pub top_terms: Vec<Vec<String>>,
    /// Inertia after every assignment step.
    pub inertia_trace: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
}

impl ClusterModel {
    pub fn inertia(&self) -> f64 {
        *self.inertia_trace.last().unwrap_or(&0.0)
    }

    pub fn cluster_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.k];
        for &l in &self.labels {
            sizes[l] += 1;
        }
        sizes
    }
}

pub fn fit_kmeans(m: &DocTermMatrix, k: usize, seed: u64, opts: &KMeansOptions) -> Result<ClusterModel> {
    if k < 2 {
        return Err(Error::InvalidArgument(format!(
            "number of clusters must be at least 2, got {k}"
        )));
    }
    let n = m.n_docs();
    if k > n {
        return Err(Error::TooFewDocuments { needed: k, got: n });
    }
    let x = m.to_dense();
    let points: Vec<DVector<f64>> = x.row_iter().map(|r| r.transpose()).collect();

    let mut centroids = seed_centroids(&points, k, seed);
    let mut labels = vec![usize::MAX; n];
    let mut inertia_trace = Vec::new();
    let mut converged = false;
    let mut iterations = 0;
    while iterations < opts.max_iter {
        iterations += 1;
        let mut changed = false;
        let mut inertia = 0.0;
        for (i, p) in points.iter().enumerate() {
            let (best, d2) = nearest(p, &centroids);
            inertia += d2;
            if labels[i] != best {
                labels[i] = best;
                changed = true;
            }
        }
        inertia_trace.push(inertia);
        if !changed {
            converged = true;
            break;
        }
        update_centroids(&points, &labels, &mut centroids);
    }

    let top_terms = centroids
        .iter()
        .map(|c| {
            let mut order: Vec<usize> = (0..c.len()).collect();
            order.sort_by(|&a, &b| c[b].total_cmp(&c[a]).then(a.cmp(&b)));
            order.into_iter().map(|j| m.terms()[j].clone()).collect()
        })
        .collect();

    Ok(ClusterModel {
        k,
        seed,
        doc_ids: m.doc_ids().to_vec(),
        terms: m.terms().to_vec(),
        centroids: centroids.iter().map(|c| c.iter().copied().collect()).collect(),
        labels,
        top_terms,
        inertia_trace,
        iterations,
        converged,
    })
}

/// k-means++ seeding. When every remaining point coincides with a chosen
/// centroid the lowest unchosen index is taken.
fn seed_centroids(points: &[DVector<f64>], k: usize, seed: u64) -> Vec<DVector<f64>> {
    let mut rng = rng(seed);
    let n = points.len();
    let mut chosen = vec![rng.random_range(0..n)];
    let mut d2: Vec<f64> = points.iter().map(|p| (p - &points[chosen[0]]).norm_squared()).collect();
    while chosen.len() < k {
        let total: f64 = d2.iter().sum();
        let next = if total > 0.0 {
            let target = rng.random::<f64>() * total;
            let mut acc = 0.0;
            let mut pick = None;
            for (i, &w) in d2.iter().enumerate() {
                acc += w;
                if w > 0.0 && acc > target {
                    pick = Some(i);
                    break;
                }
            }
            // rounding can leave `acc` a hair below `target`
            pick.unwrap_or_else(|| d2.iter().rposition(|&w| w > 0.0).unwrap())
        } else {
            (0..n).find(|i| !chosen.contains(i)).unwrap()
        };
        chosen.push(next);
        for (i, p) in points.iter().enumerate() {
            d2[i] = d2[i].min((p - &points[next]).norm_squared());
        }
    }
    chosen.into_iter().map(|i| points[i].clone()).collect()
}

fn nearest(p: &DVector<f64>, centroids: &[DVector<f64>]) -> (usize, f64) {
    let mut best = (0, f64::INFINITY);
    for (c, centroid) in centroids.iter().enumerate() {
        let d = (p - centroid).norm_squared();
        if d < best.1 {
            best = (c, d);
        }
    }
    best
}

/// Empty clusters keep their previous centroid.
fn update_centroids(points: &[DVector<f64>], labels: &[usize], centroids: &mut [DVector<f64>]) {
    let dim = points[0].len();
    let mut sums = vec![DVector::zeros(dim); centroids.len()];
    let mut counts = vec![0usize; centroids.len()];
    for (p, &l) in points.iter().zip(labels) {
        sums[l] += p;
        counts[l] += 1;
    }
    for ((c, s), n) in centroids.iter_mut().zip(sums).zip(counts) {
        if n > 0 {
            *c = s / n as f64;
        }
    }
}
