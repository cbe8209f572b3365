//! NMF with Lee-Seung multiplicative updates on the Frobenius loss.

use nalgebra::DMatrix;
use rand::Rng;

use super::{check_fit_input, FitDiagnostics, Method, TopicModel};
use crate::corpus::DocTermMatrix;
use crate::error::{Error, Result};
use crate::seed::keyed_rng;

#[derive(Debug, Clone, PartialEq)]
pub struct NmfOptions {
    pub max_iter: usize,
    /// Stop once `(prev - cur) / prev` falls below this.
    pub tol: f64,
}

impl Default for NmfOptions {
    fn default() -> Self {
        NmfOptions {
            max_iter: 200,
            tol: 1e-4,
        }
    }
}

/// Factorizes `D ~ W H` with `W, H >= 0`.
///
/// `W` rows are initialized from the seed and the document id, `H` columns
/// from the seed and the term, so permuting documents permutes the result.
pub fn fit_nmf(m: &DocTermMatrix, k: usize, seed: u64, opts: &NmfOptions) -> Result<TopicModel> {
    check_fit_input(m, k, 1)?;
    let zero_rows = m.empty_rows();
    let nonzero_rows = m.n_docs() - zero_rows.len();
    if nonzero_rows < k {
        return Err(Error::TooFewDocuments {
            needed: k,
            got: nonzero_rows,
        });
    }

    let d = m.to_dense();
    let scale = (d.mean() / k as f64).sqrt();
    let mut w = DMatrix::zeros(m.n_docs(), k);
    for (i, id) in m.doc_ids().iter().enumerate() {
        let mut rng = keyed_rng(seed, "nmf-w", id);
        for a in 0..k {
            w[(i, a)] = scale * (1.0 - rng.random::<f64>());
        }
    }
    let mut h = DMatrix::zeros(k, m.n_terms());
    for (j, term) in m.terms().iter().enumerate() {
        let mut rng = keyed_rng(seed, "nmf-h", term);
        for a in 0..k {
            h[(a, j)] = scale * (1.0 - rng.random::<f64>());
        }
    }

    let mut trace = vec![residual(&d, &w, &h)];
    let mut converged = false;
    let mut iterations = 0;
    while iterations < opts.max_iter {
        iterations += 1;

        let numer = w.transpose() * &d;
        let denom = (w.transpose() * &w) * &h;
        multiplicative_step(&mut h, &numer, &denom);

        let numer = &d * h.transpose();
        let denom = &w * (&h * h.transpose());
        multiplicative_step(&mut w, &numer, &denom);

        let prev = *trace.last().unwrap();
        let cur = residual(&d, &w, &h);
        trace.push(cur);
        if prev <= 0.0 || (prev - cur) / prev < opts.tol {
            converged = true;
            break;
        }
    }

    Ok(TopicModel {
        method: Method::Nmf,
        k,
        seed,
        doc_ids: m.doc_ids().to_vec(),
        terms: m.terms().to_vec(),
        doc_topic: w,
        topic_term: h,
        diagnostics: FitDiagnostics {
            iterations,
            objective: *trace.last().unwrap(),
            converged,
            trace,
            zero_rows,
        },
    })
}

/// `x <- x * numer / denom`; entries with a zero denominator have a zero
/// gradient and are left untouched.
fn multiplicative_step(x: &mut DMatrix<f64>, numer: &DMatrix<f64>, denom: &DMatrix<f64>) {
    for ((v, &n), &dn) in x.iter_mut().zip(numer.iter()).zip(denom.iter()) {
        if dn > 0.0 {
            *v *= n / dn;
        }
    }
}

fn residual(d: &DMatrix<f64>, w: &DMatrix<f64>, h: &DMatrix<f64>) -> f64 {
    (d - w * h).norm()
}
