use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};

/// Pooled sample size up to which the p-value is computed exactly.
pub const EXACT_MAX_N: usize = 16;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MannWhitney {
    /// `R_A - n_a (n_a + 1) / 2`.
    pub u: f64,
    pub p_two_sided: f64,
    pub exact: bool,
}

/// Midranks (1-based) of the pooled sample, in input order.
pub fn midranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        let rank = (i + j) as f64 / 2.0 + 1.0;
        for &o in &order[i..=j] {
            ranks[o] = rank;
        }
        i = j + 1;
    }
    ranks
}

pub fn mann_whitney_u(a: &[f64], b: &[f64]) -> Result<MannWhitney> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::InvalidArgument("both samples must be non-empty".into()));
    }
    if a.iter().chain(b).any(|v| v.is_nan()) {
        return Err(Error::InvalidArgument("samples contain NaN".into()));
    }
    let pooled: Vec<f64> = a.iter().chain(b).copied().collect();
    if pooled.iter().all(|&v| v == pooled[0]) {
        return Err(Error::DegenerateSamples);
    }
    let (na, nb) = (a.len(), b.len());
    let ranks = midranks(&pooled);
    let rank_sum_a: f64 = ranks[..na].iter().sum();
    let u = rank_sum_a - (na * (na + 1)) as f64 / 2.0;

    if na + nb <= EXACT_MAX_N {
        Ok(MannWhitney {
            u,
            p_two_sided: exact_p(&ranks, na),
            exact: true,
        })
    } else {
        Ok(MannWhitney {
            u,
            p_two_sided: normal_p(u, &pooled, na, nb),
            exact: false,
        })
    }
}

/// Counts, over all `C(n, na)` relabelings, how often `|U - mean|` is at
/// least the observed value. Works on doubled midranks so every quantity
/// is an integer.
fn exact_p(ranks: &[f64], na: usize) -> f64 {
    let doubled: Vec<usize> = ranks.iter().map(|r| (2.0 * r).round() as usize).collect();
    let max_sum: usize = doubled.iter().sum();
    // ways[j][s]: subsets of size j with doubled rank sum s
    let mut ways = vec![vec![0u64; max_sum + 1]; na + 1];
    ways[0][0] = 1;
    for &r in &doubled {
        for j in (1..=na).rev() {
            for s in (r..=max_sum).rev() {
                ways[j][s] += ways[j - 1][s - r];
            }
        }
    }
    let n = ranks.len();
    let nb = n - na;
    let offset = (na * (na + 1)) as i64;
    let mean2 = (na * nb) as i64;
    let observed: usize = doubled[..na].iter().sum();
    let dev_obs = ((observed as i64 - offset) - mean2).abs();
    let (mut hit, mut total) = (0u64, 0u64);
    for (s, &w) in ways[na].iter().enumerate() {
        total += w;
        if ((s as i64 - offset) - mean2).abs() >= dev_obs {
            hit += w;
        }
    }
    hit as f64 / total as f64
}

fn normal_p(u: f64, pooled: &[f64], na: usize, nb: usize) -> f64 {
    let n = (na + nb) as f64;
    let mut sorted = pooled.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut tie_term = 0.0;
    let mut i = 0;
    while i < sorted.len() {
        let mut j = i;
        while j + 1 < sorted.len() && sorted[j + 1] == sorted[i] {
            j += 1;
        }
        let t = (j - i + 1) as f64;
        tie_term += t * t * t - t;
        i = j + 1;
    }
    let mean = (na * nb) as f64 / 2.0;
    let var = (na * nb) as f64 / 12.0 * ((n + 1.0) - tie_term / (n * (n - 1.0)));
    let dev = ((u - mean).abs() - 0.5).max(0.0);
    let z = dev / var.sqrt();
    let normal = Normal::standard();
    (2.0 * normal.sf(z)).min(1.0)
}
