//! Hyperparameter grid enumeration and repeated, seeded evaluation.

use std::collections::HashMap;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::coherence::{model_coherence, CooccurrenceStats, Metric};
use super::fagin::{fagin_topk, rank_by_score};
use crate::corpus::{build_vocabulary, vectorize, DocTermMatrix, Vectorizer};
use crate::csvout;
use crate::error::{Error, Result};
use crate::factorization::{fit, Method, TopicModel};
use crate::tokenizer::TokenDoc;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HyperParams {
    pub min_df: f64,
    pub binary: bool,
    pub vectorizer: Vectorizer,
    pub method: Method,
    pub k: usize,
}

impl HyperParams {
    pub fn label(&self) -> String {
        format!(
            "min_df={} binary={} vectorizer={} method={} k={}",
            self.min_df, self.binary, self.vectorizer, self.method, self.k
        )
    }
}

/// Values for each grid axis. The default spans min_df 0.05..=0.50 in 0.05
/// steps, both binary settings, all three vectorizers, both methods and
/// k in 2..=15.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridConfig {
    pub min_df: Vec<f64>,
    pub binary: Vec<bool>,
    pub vectorizer: Vec<Vectorizer>,
    pub method: Vec<Method>,
    pub k: Vec<usize>,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig {
            min_df: (1..=10).map(|i| f64::from(i * 5) / 100.0).collect(),
            binary: vec![false, true],
            vectorizer: Vectorizer::ALL.to_vec(),
            method: Method::ALL.to_vec(),
            k: (2..=15).collect(),
        }
    }
}

impl GridConfig {
    pub fn validate(&self) -> Result<()> {
        let axes = [
            ("min_df", self.min_df.len()),
            ("binary", self.binary.len()),
            ("vectorizer", self.vectorizer.len()),
            ("method", self.method.len()),
            ("k", self.k.len()),
        ];
        if let Some((name, _)) = axes.iter().find(|(_, n)| *n == 0) {
            return Err(Error::Config(format!("grid axis `{name}` is empty")));
        }
        if let Some(v) = self.min_df.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(Error::Config(format!("min_df {v} outside [0, 1]")));
        }
        if self.k.contains(&0) {
            return Err(Error::Config("k must be positive".into()));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.min_df.len() * self.binary.len() * self.vectorizer.len() * self.method.len() * self.k.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Cartesian product, nested in the order min_df, binary, vectorizer,
/// method, k (k varies fastest).
pub fn enumerate_grid(config: &GridConfig) -> Vec<HyperParams> {
    let mut out = Vec::with_capacity(config.len());
    for &min_df in &config.min_df {
        for &binary in &config.binary {
            for &vectorizer in &config.vectorizer {
                for &method in &config.method {
                    for &k in &config.k {
                        out.push(HyperParams {
                            min_df,
                            binary,
                            vectorizer,
                            method,
                            k,
                        });
                    }
                }
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridOptions {
    pub repeats: usize,
    pub base_seed: u64,
    /// Worker threads; `None` lets the pool pick.
    pub workers: Option<usize>,
}

impl Default for GridOptions {
    fn default() -> Self {
        GridOptions {
            repeats: 10,
            base_seed: 0,
            workers: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunScore {
    pub seed: u64,
    pub c5: f64,
    pub c10: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunError {
    pub seed: u64,
    pub kind: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridResult {
    /// Position in the enumerated grid.
    pub id: usize,
    pub params: HyperParams,
    /// Successful runs, equal to `per_run.len()`.
    pub runs: usize,
    pub mean_c5: f64,
    /// Population standard deviation.
    pub std_c5: f64,
    pub mean_c10: f64,
    pub std_c10: f64,
    pub per_run: Vec<RunScore>,
    pub errors: Vec<RunError>,
}

/// Population mean and standard deviation; NaN for an empty slice.
pub fn mean_std(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    (mean, var.sqrt())
}

/// Vocabulary at `min_df`, then counting and re-weighting.
pub fn matrix_for(docs: &[TokenDoc], min_df: f64, binary: bool, vectorizer: Vectorizer) -> Result<DocTermMatrix> {
    let vocab = build_vocabulary(docs, min_df)?;
    vectorize(docs, &vocab, binary, vectorizer)
}

/// Fits one model and scores its top-5 and top-10 terms with UMass.
pub fn fit_and_score(
    m: &DocTermMatrix,
    method: Method,
    k: usize,
    seed: u64,
    stats: &CooccurrenceStats,
) -> Result<(TopicModel, f64, f64)> {
    let model = fit(method, m, k, seed)?;
    let c5 = model_coherence(&model, stats, 5, Metric::Umass)?.value;
    let c10 = model_coherence(&model, stats, 10, Metric::Umass)?.value;
    Ok((model, c5, c10))
}

pub(crate) fn with_pool<T: Send>(workers: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.unwrap_or(0))
        .build()
        .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))?;
    Ok(pool.install(f))
}

type MatrixKey = (u64, bool, Vectorizer);

fn key(p: &HyperParams) -> MatrixKey {
    (p.min_df.to_bits(), p.binary, p.vectorizer)
}

/// Evaluates every grid point `repeats` times with seeds
/// `base_seed..base_seed + repeats`. Coherence uses document co-occurrence
/// in `docs`. Failing runs are recorded on their grid point and the grid
/// carries on. Results come back in grid order whatever the worker count.
pub fn run_grid(docs: &[TokenDoc], grid: &[HyperParams], opts: &GridOptions) -> Result<Vec<GridResult>> {
    if opts.repeats == 0 {
        return Err(Error::InvalidArgument("repeats must be at least 1".into()));
    }
    let stats = CooccurrenceStats::from_token_docs(docs)?;

    let mut keys: Vec<MatrixKey> = grid.iter().map(key).collect();
    keys.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
    keys.dedup();

    with_pool(opts.workers, || {
        let matrices: HashMap<MatrixKey, std::result::Result<DocTermMatrix, (String, String)>> = keys
            .par_iter()
            .map(|&k| {
                let m =
                    matrix_for(docs, f64::from_bits(k.0), k.1, k.2).map_err(|e| (e.kind().to_string(), e.to_string()));
                (k, m)
            })
            .collect();

        let jobs: Vec<(usize, u64)> = (0..grid.len())
            .flat_map(|i| (0..opts.repeats as u64).map(move |r| (i, opts.base_seed + r)))
            .collect();
        let outcomes: Vec<std::result::Result<RunScore, RunError>> = jobs
            .par_iter()
            .map(|&(i, seed)| {
                let p = &grid[i];
                let m = matrices[&key(p)].as_ref().map_err(|(kind, message)| RunError {
                    seed,
                    kind: kind.clone(),
                    message: message.clone(),
                })?;
                fit_and_score(m, p.method, p.k, seed, &stats)
                    .map(|(_, c5, c10)| RunScore { seed, c5, c10 })
                    .map_err(|e| RunError {
                        seed,
                        kind: e.kind().to_string(),
                        message: e.to_string(),
                    })
            })
            .collect();

        grid.iter()
            .enumerate()
            .zip(outcomes.chunks(opts.repeats))
            .map(|((id, params), chunk)| {
                let mut per_run = Vec::new();
                let mut errors = Vec::new();
                for o in chunk {
                    match o {
                        Ok(r) => per_run.push(r.clone()),
                        Err(e) => errors.push(e.clone()),
                    }
                }
                let c5: Vec<f64> = per_run.iter().map(|r| r.c5).collect();
                let c10: Vec<f64> = per_run.iter().map(|r| r.c10).collect();
                let (mean_c5, std_c5) = mean_std(&c5);
                let (mean_c10, std_c10) = mean_std(&c10);
                GridResult {
                    id,
                    params: *params,
                    runs: per_run.len(),
                    mean_c5,
                    std_c5,
                    mean_c10,
                    std_c10,
                    per_run,
                    errors,
                }
            })
            .collect()
    })
}

pub const GRID_CSV_HEADER: [&str; 10] = [
    "min_df",
    "binary",
    "vectorizer",
    "method",
    "k",
    "runs",
    "mean_c5",
    "std_c5",
    "mean_c10",
    "std_c10",
];

/// One row per grid point, in grid order.
pub fn grid_csv(results: &[GridResult]) -> String {
    let mut out = String::new();
    csvout::push_row(&mut out, &GRID_CSV_HEADER);
    for r in results {
        let p = &r.params;
        csvout::push_row(
            &mut out,
            &[
                p.min_df.to_string(),
                p.binary.to_string(),
                p.vectorizer.to_string(),
                p.method.to_string(),
                p.k.to_string(),
                r.runs.to_string(),
                r.mean_c5.to_string(),
                r.std_c5.to_string(),
                r.mean_c10.to_string(),
                r.std_c10.to_string(),
            ],
        );
    }
    out
}

#[derive(Serialize)]
struct RunLine<'a> {
    id: usize,
    #[serde(flatten)]
    params: &'a HyperParams,
    seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    c5: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    c10: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error_kind: Option<&'a str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<&'a str>,
}

/// One JSON object per run, successful runs and failures alike, in grid
/// then seed order.
pub fn runs_jsonl(results: &[GridResult]) -> Result<String> {
    let mut lines: Vec<(usize, u64, String)> = Vec::new();
    for r in results {
        for run in &r.per_run {
            let line = RunLine {
                id: r.id,
                params: &r.params,
                seed: run.seed,
                c5: Some(run.c5),
                c10: Some(run.c10),
                error_kind: None,
                error: None,
            };
            lines.push((r.id, run.seed, serde_json::to_string(&line)?));
        }
        for e in &r.errors {
            let line = RunLine {
                id: r.id,
                params: &r.params,
                seed: e.seed,
                c5: None,
                c10: None,
                error_kind: Some(&e.kind),
                error: Some(&e.message),
            };
            lines.push((r.id, e.seed, serde_json::to_string(&line)?));
        }
    }
    lines.sort_by_key(|l| (l.0, l.1));
    let mut out = String::new();
    for (_, _, l) in lines {
        writeln!(out, "{l}").unwrap();
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BestModel {
    pub rank: usize,
    pub id: usize,
    pub params: HyperParams,
    pub mean_c5: f64,
    pub mean_c10: f64,
    /// Mean of `mean_c5` and `mean_c10`.
    pub aggregate: f64,
}

/// Top-`k` grid points by Fagin's algorithm over the `mean_c5` and
/// `mean_c10` rankings. Points without a finite score are not ranked and
/// `k` is clamped to the number of ranked points.
pub fn select_best(results: &[GridResult], k: usize) -> Result<Vec<BestModel>> {
    let valid: Vec<&GridResult> = results
        .iter()
        .filter(|r| r.mean_c5.is_finite() && r.mean_c10.is_finite())
        .collect();
    let by_c5 = rank_by_score(valid.iter().map(|r| (r.id, r.mean_c5)));
    let by_c10 = rank_by_score(valid.iter().map(|r| (r.id, r.mean_c10)));
    let top = fagin_topk(&by_c5, &by_c10, k.min(valid.len()))?;
    let by_id: HashMap<usize, &GridResult> = valid.iter().map(|r| (r.id, *r)).collect();
    Ok(top
        .into_iter()
        .enumerate()
        .map(|(rank, (id, aggregate))| {
            let r = by_id[&id];
            BestModel {
                rank: rank + 1,
                id,
                params: r.params,
                mean_c5: r.mean_c5,
                mean_c10: r.mean_c10,
                aggregate,
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::tests::doc;

    fn small_config() -> GridConfig {
        GridConfig {
            min_df: vec![0.05],
            binary: vec![false],
            vectorizer: vec![Vectorizer::Count],
            method: vec![Method::Nmf],
            k: vec![2],
        }
    }

    #[test]
    fn default_grid_has_1680_points() {
        let g = enumerate_grid(&GridConfig::default());
        assert_eq!(g.len(), 1680);
        assert_eq!(g[0].min_df, 0.05);
        assert_eq!(g[0].k, 2);
        assert_eq!(g[1].k, 3);
        assert_eq!(g.last().unwrap().min_df, 0.5);
        let min_dfs: Vec<String> = GridConfig::default().min_df.iter().map(|v| v.to_string()).collect();
        assert_eq!(
            min_dfs,
            ["0.05", "0.1", "0.15", "0.2", "0.25", "0.3", "0.35", "0.4", "0.45", "0.5"]
        );
    }

    #[test]
    fn small_grids() {
        assert_eq!(enumerate_grid(&small_config()).len(), 1);
        let mut c = small_config();
        c.k = vec![2, 3];
        assert_eq!(enumerate_grid(&c).len(), 2);
        c.k.clear();
        assert!(c.validate().is_err());
    }

    #[test]
    fn mean_std_population() {
        assert_eq!(mean_std(&[2.0, 4.0]), (3.0, 1.0));
        assert_eq!(mean_std(&[5.0]), (5.0, 0.0));
        assert!(mean_std(&[]).0.is_nan());
    }

    fn toy_docs() -> Vec<TokenDoc> {
        (0..8)
            .map(|i| {
                if i % 2 == 0 {
                    doc(&format!("a{i}"), &["for", "range", "is_indent", "is_number", "while"])
                } else {
                    doc(&format!("b{i}"), &["print", "is_string", "upper", "split", "join"])
                }
            })
            .collect()
    }

    #[test]
    fn failures_are_recorded_and_grid_continues() {
        let mut c = small_config();
        c.k = vec![2, 20];
        let grid = enumerate_grid(&c);
        let opts = GridOptions {
            repeats: 2,
            base_seed: 3,
            workers: Some(2),
        };
        let res = run_grid(&toy_docs(), &grid, &opts).unwrap();
        assert_eq!(res[0].runs, 2);
        assert_eq!(res[0].per_run[1].seed, 4);
        assert_eq!(res[1].runs, 0);
        assert_eq!(res[1].errors.len(), 2);
        assert!(res[1].mean_c5.is_nan());
        let best = select_best(&res, 5).unwrap();
        assert_eq!(best.len(), 1);
        assert_eq!(best[0].id, 0);
        let jsonl = runs_jsonl(&res).unwrap();
        assert_eq!(jsonl.lines().count(), 4);
    }

    #[test]
    fn deterministic_across_worker_counts() {
        let c = GridConfig {
            k: vec![2, 3],
            method: Method::ALL.to_vec(),
            ..small_config()
        };
        let grid = enumerate_grid(&c);
        let run = |w| {
            run_grid(
                &toy_docs(),
                &grid,
                &GridOptions {
                    repeats: 2,
                    base_seed: 0,
                    workers: Some(w),
                },
            )
            .unwrap()
        };
        let a = run(1);
        let b = run(4);
        assert_eq!(grid_csv(&a), grid_csv(&b));
        assert_eq!(runs_jsonl(&a).unwrap(), runs_jsonl(&b).unwrap());
    }

    #[test]
    fn csv_header() {
        let csv = grid_csv(&[]);
        assert_eq!(
            csv,
            "min_df,binary,vectorizer,method,k,runs,mean_c5,std_c5,mean_c10,std_c10\n"
        );
    }
}
