use std::f64::consts::LN_2;

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::corpus::DocTermMatrix;
use crate::error::{Error, Result};
use crate::factorization::TopicModel;

/// Jensen-Shannon divergence (natural log) of two distributions.
pub fn jensen_shannon(p: &[f64], q: &[f64]) -> f64 {
    let kl_to_mid = |a: &[f64], b: &[f64]| -> f64 {
        a.iter()
            .zip(b)
            .filter(|(&x, _)| x > 0.0)
            .map(|(&x, &y)| x * (2.0 * x / (x + y)).ln())
            .sum()
    };
    (0.5 * kl_to_mid(p, q) + 0.5 * kl_to_mid(q, p)).clamp(0.0, LN_2)
}

/// Pairwise JSD between the model's topic-term distributions.
pub fn topic_distance_matrix(model: &TopicModel) -> DMatrix<f64> {
    let dist = model.topic_term_distributions();
    let rows: Vec<Vec<f64>> = dist.row_iter().map(|r| r.iter().copied().collect()).collect();
    let k = rows.len();
    let mut d = DMatrix::zeros(k, k);
    for a in 0..k {
        for b in a + 1..k {
            let v = jensen_shannon(&rows[a], &rows[b]);
            d[(a, b)] = v;
            d[(b, a)] = v;
        }
    }
    d
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Projection {
    /// One row per point, two columns.
    pub coords: Vec<[f64; 2]>,
    /// Eigenvalues (PCoA) or squared singular values (PCA) of the two axes.
    pub axis_weights: [f64; 2],
    /// Negative eigenvalues were clamped to zero (PCoA only).
    pub clamped_negative: bool,
}

/// Flips each column so its largest-magnitude entry is positive (first
/// such entry on ties).
fn fix_signs(v: &mut DMatrix<f64>) {
    for mut col in v.column_iter_mut() {
        let mut best = 0.0f64;
        for &x in col.iter() {
            if x.abs() > best.abs() {
                best = x;
            }
        }
        if best < 0.0 {
            col.neg_mut();
        }
    }
}

fn validate_distance(d: &DMatrix<f64>) -> Result<()> {
    if !d.is_square() {
        return Err(Error::InvalidDistance(format!(
            "{}x{} is not square",
            d.nrows(),
            d.ncols()
        )));
    }
    let scale = d.amax().max(1.0);
    for i in 0..d.nrows() {
        if d[(i, i)].abs() > 1e-12 * scale {
            return Err(Error::InvalidDistance(format!("nonzero diagonal at {i}")));
        }
        for j in 0..i {
            let (a, b) = (d[(i, j)], d[(j, i)]);
            if !a.is_finite() || a < 0.0 || (a - b).abs() > 1e-12 * scale {
                return Err(Error::InvalidDistance(format!(
                    "entries ({i}, {j}) and ({j}, {i}) differ or are negative"
                )));
            }
        }
    }
    Ok(())
}

/// Classical multidimensional scaling to two dimensions.
pub fn pcoa_2d(d: &DMatrix<f64>) -> Result<Projection> {
    validate_distance(d)?;
    let n = d.nrows();
    if n == 0 || d.iter().all(|&v| v == 0.0) {
        return Ok(Projection {
            coords: vec![[0.0; 2]; n],
            axis_weights: [0.0; 2],
            clamped_negative: false,
        });
    }
    let d2 = d.map(|v| v * v);
    let row_means: Vec<f64> = d2.row_iter().map(|r| r.mean()).collect();
    let grand = d2.mean();
    let b = DMatrix::from_fn(n, n, |i, j| -0.5 * (d2[(i, j)] - row_means[i] - row_means[j] + grand));
    let eig = SymmetricEigen::new(b);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| eig.eigenvalues[y].total_cmp(&eig.eigenvalues[x]).then(x.cmp(&y)));
    if !(eig.eigenvalues[order[0]] > 0.0) {
        return Err(Error::DegenerateSpectrum);
    }
    let top = eig.eigenvalues[order[0]];
    let clamped_negative = eig.eigenvalues.iter().any(|&l| l < -1e-10 * top);
    let mut v = DMatrix::zeros(n, 2);
    let mut weights = [0.0; 2];
    for (axis, &idx) in order.iter().take(2).enumerate() {
        // rounding noise around a zero eigenvalue would otherwise become a
        // coordinate of order sqrt(1e-16)
        let lambda = eig.eigenvalues[idx];
        let lambda = if lambda > 1e-12 * top { lambda } else { 0.0 };
        weights[axis] = lambda;
        v.set_column(axis, &(eig.eigenvectors.column(idx) * lambda.sqrt()));
    }
    fix_signs(&mut v);
    Ok(Projection {
        // adding 0.0 turns -0.0 into 0.0
        coords: v.row_iter().map(|r| [r[0] + 0.0, r[1] + 0.0]).collect(),
        axis_weights: weights,
        clamped_negative,
    })
}

/// Documents projected on the two leading principal axes of the
/// column-centered matrix; each axis is oriented so its largest-magnitude
/// loading is positive.
pub fn pca_2d(m: &DocTermMatrix) -> Result<Projection> {
    if m.n_docs() < 2 || m.n_terms() < 2 {
        return Err(Error::DegenerateData);
    }
    let mut x = m.to_dense();
    for mut col in x.column_iter_mut() {
        let mean = col.mean();
        col.add_scalar_mut(-mean);
    }
    let svd = x.clone().svd(false, true);
    let v_t = svd.v_t.expect("requested right singular vectors");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| {
        svd.singular_values[b]
            .total_cmp(&svd.singular_values[a])
            .then(a.cmp(&b))
    });
    let top = svd.singular_values[order[0]];
    if !(top > 1e-12 * x.amax().max(1.0)) {
        return Err(Error::DegenerateData);
    }
    let mut loadings = DMatrix::zeros(m.n_terms(), 2);
    let mut weights = [0.0; 2];
    for (axis, &idx) in order.iter().take(2).enumerate() {
        let s = svd.singular_values[idx];
        if s > 1e-12 * top {
            loadings.set_column(axis, &v_t.row(idx).transpose());
            weights[axis] = s * s;
        }
    }
    fix_signs(&mut loadings);
    let coords = &x * &loadings;
    Ok(Projection {
        coords: coords.row_iter().map(|r| [r[0] + 0.0, r[1] + 0.0]).collect(),
        axis_weights: weights,
        clamped_negative: false,
    })
}
