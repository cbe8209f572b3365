//! Batch mean-field variational inference for LDA.
//!
//! Accepts real-valued pseudo-counts, so it runs unchanged on TF-IDF and
//! NCut weighted matrices. Per document the variational parameters are
//! warm-started from the previous pass, which makes every pass a sequence of
//! exact coordinate-ascent steps and keeps the bound non-decreasing.

use nalgebra::{DMatrix, DVector};
use rand_distr::{Distribution, Gamma};
use statrs::function::gamma::{digamma, ln_gamma};

use super::{check_fit_input, FitDiagnostics, Method, TopicModel};
use crate::corpus::DocTermMatrix;
use crate::error::Result;
use crate::seed::keyed_rng;

#[derive(Debug, Clone, PartialEq)]
pub struct LdaOptions {
    pub max_passes: usize,
    /// Stop once the relative change of the bound falls below this.
    pub tol: f64,
    pub e_step_max_iter: usize,
    /// Mean absolute change of a document's `gamma` that ends its E-step.
    pub e_step_tol: f64,
    /// Document-topic prior; `None` means `1/k`.
    pub alpha: Option<f64>,
    /// Topic-term prior; `None` means `1/k`.
    pub eta: Option<f64>,
}

impl Default for LdaOptions {
    fn default() -> Self {
        LdaOptions {
            max_passes: 100,
            tol: 1e-3,
            e_step_max_iter: 100,
            e_step_tol: 1e-4,
            alpha: None,
            eta: None,
        }
    }
}

pub(crate) struct Doc<'a> {
    pub cols: &'a [usize],
    pub counts: &'a [f64],
}

/// `E[log x]` for `x ~ Dirichlet(params)`.
pub(crate) fn dirichlet_expectation(params: &[f64]) -> Vec<f64> {
    let total = digamma(params.iter().sum());
    params.iter().map(|&p| digamma(p) - total).collect()
}

/// Runs the per-document coordinate ascent starting from `gamma`.
///
/// Returns the `exp(E[log theta])` used for the last `gamma` update together
/// with the matching per-word normalizers, which define the sufficient
/// statistics of this document.
pub(crate) fn e_step_doc(
    doc: &Doc<'_>,
    gamma: &mut [f64],
    exp_elog_beta: &DMatrix<f64>,
    alpha: f64,
    max_iter: usize,
    tol: f64,
) -> (Vec<f64>, Vec<f64>) {
    let k = gamma.len();
    let mut exp_theta = vec![0.0; k];
    let mut phinorm = vec![0.0; doc.cols.len()];
    for _ in 0..max_iter.max(1) {
        for (e, el) in exp_theta.iter_mut().zip(dirichlet_expectation(gamma)) {
            *e = el.exp();
        }
        for (p, &w) in phinorm.iter_mut().zip(doc.cols) {
            *p = (0..k).map(|t| exp_theta[t] * exp_elog_beta[(t, w)]).sum::<f64>();
        }
        let mut change = 0.0;
        for t in 0..k {
            let acc: f64 = doc
                .cols
                .iter()
                .zip(doc.counts)
                .zip(&phinorm)
                .map(|((&w, &n), &p)| n * exp_elog_beta[(t, w)] / p)
                .sum();
            let new = alpha + exp_theta[t] * acc;
            change += (new - gamma[t]).abs();
            gamma[t] = new;
        }
        if change / (k as f64) < tol {
            break;
        }
    }
    (exp_theta, phinorm)
}

pub fn fit_lda(m: &DocTermMatrix, k: usize, seed: u64, opts: &LdaOptions) -> Result<TopicModel> {
    check_fit_input(m, k, 2)?;
    let n_docs = m.n_docs();
    let n_terms = m.n_terms();
    let alpha = opts.alpha.unwrap_or(1.0 / k as f64);
    let eta = opts.eta.unwrap_or(1.0 / k as f64);

    let docs: Vec<Doc<'_>> = (0..n_docs)
        .map(|i| {
            let (cols, counts) = m.row(i);
            Doc { cols, counts }
        })
        .collect();

    // Topics start from the counts spread over random per-document topic
    // shares, so every topic begins with a distinct mix of real documents.
    let init = Gamma::new(1.0, 1.0).expect("valid gamma parameters");
    let mut lambda = DMatrix::from_element(k, n_terms, eta);
    for (doc, id) in docs.iter().zip(m.doc_ids()) {
        let mut rng = keyed_rng(seed, "lda-init", id);
        let mut share: Vec<f64> = (0..k).map(|_| init.sample(&mut rng)).collect();
        let sum: f64 = share.iter().sum();
        share.iter_mut().for_each(|s| *s /= sum);
        for (&w, &n) in doc.cols.iter().zip(doc.counts) {
            for t in 0..k {
                lambda[(t, w)] += n * share[t];
            }
        }
    }
    let mut gamma = DMatrix::zeros(n_docs, k);
    for (i, doc) in docs.iter().enumerate() {
        let total: f64 = doc.counts.iter().sum();
        for t in 0..k {
            gamma[(i, t)] = alpha + total / k as f64;
        }
    }

    let mut trace = vec![elbo(&docs, &gamma, &lambda, alpha, eta)];
    let mut converged = false;
    let mut passes = 0;
    while passes < opts.max_passes {
        passes += 1;
        let elog_beta = topic_expectations(&lambda);
        let exp_elog_beta = elog_beta.map(f64::exp);

        let mut sstats = DMatrix::zeros(k, n_terms);
        for (i, doc) in docs.iter().enumerate() {
            let mut g: Vec<f64> = gamma.row(i).iter().copied().collect();
            let (exp_theta, phinorm) = e_step_doc(
                doc,
                &mut g,
                &exp_elog_beta,
                alpha,
                opts.e_step_max_iter,
                opts.e_step_tol,
            );
            for (t, v) in g.into_iter().enumerate() {
                gamma[(i, t)] = v;
            }
            for ((&w, &n), &p) in doc.cols.iter().zip(doc.counts).zip(&phinorm) {
                for t in 0..k {
                    sstats[(t, w)] += n * exp_theta[t] * exp_elog_beta[(t, w)] / p;
                }
            }
        }
        lambda = sstats.add_scalar(eta);

        let prev = *trace.last().unwrap();
        let cur = elbo(&docs, &gamma, &lambda, alpha, eta);
        trace.push(cur);
        if ((cur - prev) / prev).abs() < opts.tol {
            converged = true;
            break;
        }
    }

    Ok(TopicModel {
        method: Method::Lda,
        k,
        seed,
        doc_ids: m.doc_ids().to_vec(),
        terms: m.terms().to_vec(),
        doc_topic: normalize_rows(gamma),
        topic_term: normalize_rows(lambda),
        diagnostics: FitDiagnostics {
            iterations: passes,
            objective: *trace.last().unwrap(),
            converged,
            trace,
            zero_rows: m.empty_rows(),
        },
    })
}

fn topic_expectations(lambda: &DMatrix<f64>) -> DMatrix<f64> {
    let mut out = lambda.clone();
    for (t, row) in lambda.row_iter().enumerate() {
        let params: Vec<f64> = row.iter().copied().collect();
        for (j, v) in dirichlet_expectation(&params).into_iter().enumerate() {
            out[(t, j)] = v;
        }
    }
    out
}

pub(crate) fn normalize_rows(mut m: DMatrix<f64>) -> DMatrix<f64> {
    for mut row in m.row_iter_mut() {
        let s = row.sum();
        if s > 0.0 {
            row /= s;
        }
    }
    m
}

fn log_sum_exp(values: impl Iterator<Item = f64>) -> f64 {
    let v: Vec<f64> = values.collect();
    let max = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    max + v.iter().map(|x| (x - max).exp()).sum::<f64>().ln()
}

/// Evidence lower bound with the word-topic responsibilities at their
/// optimum for the given `gamma` and `lambda`.
fn elbo(docs: &[Doc<'_>], gamma: &DMatrix<f64>, lambda: &DMatrix<f64>, alpha: f64, eta: f64) -> f64 {
    let k = lambda.nrows();
    let n_terms = lambda.ncols();
    let elog_beta = topic_expectations(lambda);

    let mut bound = 0.0;
    for (i, doc) in docs.iter().enumerate() {
        let g: Vec<f64> = gamma.row(i).iter().copied().collect();
        let elog_theta = dirichlet_expectation(&g);
        for (&w, &n) in doc.cols.iter().zip(doc.counts) {
            bound += n * log_sum_exp((0..k).map(|t| elog_theta[t] + elog_beta[(t, w)]));
        }
        bound += g
            .iter()
            .zip(&elog_theta)
            .map(|(&gt, &el)| (alpha - gt) * el + ln_gamma(gt))
            .sum::<f64>();
        bound -= ln_gamma(g.iter().sum());
        bound += ln_gamma(k as f64 * alpha) - k as f64 * ln_gamma(alpha);
    }
    for t in 0..k {
        let row = lambda.row(t);
        bound += row
            .iter()
            .enumerate()
            .map(|(j, &l)| (eta - l) * elog_beta[(t, j)] + ln_gamma(l))
            .sum::<f64>();
        bound -= ln_gamma(row.sum());
        bound += ln_gamma(n_terms as f64 * eta) - n_terms as f64 * ln_gamma(eta);
    }
    bound
}

/// Per-document fold-in against fixed topic-term distributions.
pub(crate) fn fold_in_doc(doc: &Doc<'_>, exp_elog_beta: &DMatrix<f64>, alpha: f64) -> DVector<f64> {
    let k = exp_elog_beta.nrows();
    let total: f64 = doc.counts.iter().sum();
    let mut gamma = vec![alpha + total / k as f64; k];
    if !doc.cols.is_empty() {
        e_step_doc(doc, &mut gamma, exp_elog_beta, alpha, 1000, 1e-8);
    }
    let s: f64 = gamma.iter().sum();
    DVector::from_iterator(k, gamma.into_iter().map(|g| g / s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factorization::dense_matrix;
    use crate::Error;

    fn two_block(n_per_block: usize) -> DMatrix<f64> {
        // Block A docs use terms 0..5, block B docs use terms 5..10.
        DMatrix::from_fn(2 * n_per_block, 10, |i, j| {
            let block_a = i < n_per_block;
            let in_block = if block_a { j < 5 } else { j >= 5 };
            if in_block {
                1.0 + ((i * 7 + j * 3) % 4) as f64
            } else {
                0.0
            }
        })
    }

    #[test]
    fn rows_are_distributions_and_bound_increases() {
        let m = dense_matrix(&two_block(6));
        let model = fit_lda(&m, 3, 5, &LdaOptions::default()).unwrap();
        for row in model.doc_topic.row_iter().chain(model.topic_term.row_iter()) {
            assert!((row.sum() - 1.0).abs() < 1e-6);
            assert!(row.iter().all(|&v| v >= 0.0));
        }
        for pair in model.diagnostics.trace.windows(2) {
            assert!(pair[1] >= pair[0] - 1e-6 * pair[0].abs(), "{pair:?}");
        }
    }

    #[test]
    fn planted_blocks_are_separated() {
        let m = dense_matrix(&two_block(10));
        let model = fit_lda(&m, 2, 1, &LdaOptions::default()).unwrap();
        let argmax = |i: usize| {
            let r = model.doc_topic.row(i);
            if r[0] >= r[1] {
                0
            } else {
                1
            }
        };
        let a = argmax(0);
        let agree = (0..20).filter(|&i| (argmax(i) == a) == (i < 10)).count();
        assert!(agree as f64 / 20.0 >= 0.9);
        // each topic's top term comes from one block
        for t in 0..2 {
            let row = model.topic_term.row(t);
            let top = row.iter().enumerate().max_by(|x, y| x.1.total_cmp(y.1)).unwrap().0;
            let block_of_top = top < 5;
            let mass_in_block: f64 = (0..10).filter(|&j| (j < 5) == block_of_top).map(|j| row[j]).sum();
            assert!(mass_in_block > 0.9);
        }
    }

    #[test]
    fn repeated_document_gets_identical_rows() {
        let d = DMatrix::from_fn(4, 6, |_, j| (j % 3) as f64);
        let model = fit_lda(&dense_matrix(&d), 2, 3, &LdaOptions::default()).unwrap();
        for i in 1..4 {
            assert_eq!(model.doc_topic.row(0), model.doc_topic.row(i));
        }
    }

    #[test]
    fn deterministic() {
        let m = dense_matrix(&two_block(4));
        let a = fit_lda(&m, 2, 9, &LdaOptions::default()).unwrap();
        let b = fit_lda(&m, 2, 9, &LdaOptions::default()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn fractional_counts_accepted() {
        let d = two_block(3).map(|v| v * 0.37);
        let model = fit_lda(&dense_matrix(&d), 2, 0, &LdaOptions::default()).unwrap();
        assert!(model.diagnostics.objective.is_finite());
    }

    #[test]
    fn zero_row_gets_uniform_topics() {
        let mut d = two_block(3);
        d.row_mut(2).fill(0.0);
        let model = fit_lda(&dense_matrix(&d), 2, 0, &LdaOptions::default()).unwrap();
        assert_eq!(model.diagnostics.zero_rows, vec![2]);
        assert!((model.doc_topic[(2, 0)] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn errors() {
        let d = DMatrix::zeros(3, 3);
        assert!(matches!(
            fit_lda(&dense_matrix(&d), 2, 0, &LdaOptions::default()),
            Err(Error::DegenerateMatrix)
        ));
        assert!(matches!(
            fit_lda(&dense_matrix(&two_block(2)), 1, 0, &LdaOptions::default()),
            Err(Error::InvalidArgument(_))
        ));
    }
}
