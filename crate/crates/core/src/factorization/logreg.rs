use nalgebra::{DMatrix, DVector};

use crate::corpus::DocTermMatrix;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct LogRegOptions {
    /// L2 penalty on the coefficients; the intercept is not penalized.
    pub l2: f64,
    pub max_iter: usize,
    /// Stop once the largest gradient component drops below this.
    pub tol: f64,
}

impl Default for LogRegOptions {
    fn default() -> Self {
        LogRegOptions {
            l2: 1.0,
            max_iter: 500,
            tol: 1e-8,
        }
    }
}

/// Ranks terms per cluster by their one-vs-rest logistic-regression
/// coefficient, largest first. Each list holds at most `n_terms` entries.
/// Clusters without documents get an empty list.
pub fn cluster_top_terms_logreg(
    m: &DocTermMatrix,
    labels: &[usize],
    n_terms: usize,
    opts: &LogRegOptions,
) -> Result<Vec<Vec<(String, f64)>>> {
    if labels.len() != m.n_docs() {
        return Err(Error::InvalidArgument(format!(
            "{} labels for {} documents",
            labels.len(),
            m.n_docs()
        )));
    }
    let n_clusters = labels.iter().max().map_or(0, |&l| l + 1);
    let mut sizes = vec![0usize; n_clusters];
    for &l in labels {
        sizes[l] += 1;
    }
    if sizes.iter().filter(|&&s| s > 0).count() < 2 {
        return Err(Error::SingleClass);
    }

    let x = m.to_dense();
    let step = 1.0 / (0.25 * (x.norm_squared() + x.nrows() as f64) + opts.l2);
    let n_out = n_terms.min(m.n_terms());

    Ok((0..n_clusters)
        .map(|c| {
            if sizes[c] == 0 {
                return Vec::new();
            }
            let y = DVector::from_iterator(labels.len(), labels.iter().map(|&l| f64::from(l == c)));
            let (w, _) = fit_binary(&x, &y, step, opts);
            let mut order: Vec<usize> = (0..w.len()).collect();
            order.sort_by(|&a, &b| w[b].total_cmp(&w[a]).then(a.cmp(&b)));
            order
                .into_iter()
                .take(n_out)
                .map(|j| (m.terms()[j].clone(), w[j]))
                .collect()
        })
        .collect())
}

/// Gradient ascent on the penalized log-likelihood with a fixed step below
/// the inverse Lipschitz constant.
fn fit_binary(x: &DMatrix<f64>, y: &DVector<f64>, step: f64, opts: &LogRegOptions) -> (DVector<f64>, f64) {
    let mut w = DVector::zeros(x.ncols());
    let mut b = 0.0;
    for _ in 0..opts.max_iter {
        let z = x * &w;
        let resid = DVector::from_iterator(y.len(), z.iter().zip(y.iter()).map(|(&z, &y)| y - sigmoid(z + b)));
        let grad_w = x.transpose() * &resid - &w * opts.l2;
        let grad_b = resid.sum();
        if grad_w.amax().max(grad_b.abs()) < opts.tol {
            break;
        }
        w += grad_w * step;
        b += grad_b * step;
    }
    (w, b)
}

fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}
