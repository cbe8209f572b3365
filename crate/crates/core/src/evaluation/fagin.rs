use std::collections::{HashMap, HashSet};

use crate::error::{Error, Result};

/// Sorts `(id, score)` pairs into ranking order: score descending, ties by
/// ascending id. NaN scores are dropped.
pub fn rank_by_score(items: impl IntoIterator<Item = (usize, f64)>) -> Vec<(usize, f64)> {
    let mut v: Vec<(usize, f64)> = items.into_iter().filter(|(_, s)| !s.is_nan()).collect();
    v.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    v
}

fn validate(list: &[(usize, f64)], name: &str) -> Result<()> {
    for w in list.windows(2) {
        let ((ia, sa), (ib, sb)) = (w[0], w[1]);
        if !(sa > sb || (sa == sb && ia < ib)) {
            return Err(Error::InvalidRanking(format!(
                "list {name} is not sorted by descending score then ascending id at ids {ia}, {ib}"
            )));
        }
    }
    if list.iter().any(|(_, s)| s.is_nan()) {
        return Err(Error::InvalidRanking(format!("list {name} holds a NaN score")));
    }
    Ok(())
}

/// Fagin's algorithm with the mean of the two scores as aggregate.
///
/// Both lists must rank the same ids, sorted by descending score with ties
/// in ascending id order. Returns the `k` best ids with their aggregate,
/// best first, ties broken by ascending id.
pub fn fagin_topk(list_a: &[(usize, f64)], list_b: &[(usize, f64)], k: usize) -> Result<Vec<(usize, f64)>> {
    validate(list_a, "a")?;
    validate(list_b, "b")?;
    let score_a: HashMap<usize, f64> = list_a.iter().copied().collect();
    let score_b: HashMap<usize, f64> = list_b.iter().copied().collect();
    if score_a.len() != list_a.len() || score_b.len() != list_b.len() {
        return Err(Error::InvalidRanking("duplicate id".into()));
    }
    if score_a.len() != score_b.len() || score_a.keys().any(|id| !score_b.contains_key(id)) {
        return Err(Error::InvalidRanking("lists rank different id sets".into()));
    }
    let n = list_a.len();
    if k > n {
        return Err(Error::KTooLarge { k, n });
    }

    let mut seen_a = HashSet::new();
    let mut seen_b = HashSet::new();
    let mut in_both = 0;
    let mut depth = 0;
    while in_both < k && depth < n {
        let a = list_a[depth].0;
        let b = list_b[depth].0;
        seen_a.insert(a);
        if seen_b.contains(&a) {
            in_both += 1;
        }
        seen_b.insert(b);
        if seen_a.contains(&b) {
            in_both += 1;
        }
        depth += 1;
    }

    let candidates: HashSet<usize> = seen_a.union(&seen_b).copied().collect();
    let mut scored: Vec<(usize, f64)> = candidates
        .into_iter()
        .map(|id| (id, (score_a[&id] + score_b[&id]) / 2.0))
        .collect();
    scored.sort_by(|x, y| y.1.total_cmp(&x.1).then(x.0.cmp(&y.0)));
    scored.truncate(k);
    Ok(scored)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(a: &[(usize, f64)], b: &[(usize, f64)], k: usize) -> Vec<(usize, f64)> {
        let sb: HashMap<_, _> = b.iter().copied().collect();
        let mut all: Vec<_> = a.iter().map(|&(id, s)| (id, (s + sb[&id]) / 2.0)).collect();
        all.sort_by(|x, y| y.1.total_cmp(&x.1).then(x.0.cmp(&y.0)));
        all.truncate(k);
        all
    }

    #[test]
    fn worked_example() {
        // A=0, B=1, C=2, D=3
        let a = rank_by_score([(0, 0.9), (1, 0.7), (2, 0.5), (3, 0.1)]);
        let b = rank_by_score([(0, 0.8), (1, 0.9), (2, 0.2), (3, 0.6)]);
        let top = fagin_topk(&a, &b, 2).unwrap();
        assert_eq!(top.iter().map(|x| x.0).collect::<Vec<_>>(), vec![0, 1]);
        // A: (0.9 + 0.8) / 2 = 0.85, B: (0.7 + 0.9) / 2 = 0.8
        assert!((top[0].1 - 0.85).abs() < 1e-12);
        assert!((top[1].1 - 0.8).abs() < 1e-12);
    }

    #[test]
    fn identical_lists_and_full_k() {
        let a = rank_by_score([(0, 3.0), (1, 2.0), (2, 2.0), (3, -1.0)]);
        assert_eq!(fagin_topk(&a, &a, 2).unwrap(), a[..2].to_vec());
        let b = rank_by_score([(0, 0.0), (1, 5.0), (2, 1.0), (3, 2.0)]);
        assert_eq!(fagin_topk(&a, &b, 4).unwrap(), brute(&a, &b, 4));
        assert!(fagin_topk(&a, &b, 0).unwrap().is_empty());
    }

    #[test]
    fn errors() {
        let a = rank_by_score([(0, 1.0), (1, 0.5)]);
        let b = rank_by_score([(0, 1.0), (2, 0.5)]);
        assert!(matches!(fagin_topk(&a, &a, 3), Err(Error::KTooLarge { k: 3, n: 2 })));
        assert!(matches!(fagin_topk(&a, &b, 1), Err(Error::InvalidRanking(_))));
        let unsorted = vec![(0, 0.5), (1, 1.0)];
        assert!(matches!(fagin_topk(&unsorted, &a, 1), Err(Error::InvalidRanking(_))));
        let tie_order = vec![(1, 1.0), (0, 1.0)];
        assert!(matches!(
            fagin_topk(&tie_order, &tie_order, 1),
            Err(Error::InvalidRanking(_))
        ));
    }

    #[test]
    fn rank_by_score_drops_nan() {
        let r = rank_by_score([(0, f64::NAN), (1, 1.0), (2, 1.0)]);
        assert_eq!(r, vec![(1, 1.0), (2, 1.0)]);
    }
}
