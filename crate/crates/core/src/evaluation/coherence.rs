//! Document co-occurrence statistics and the UMass / UCI-NPMI coherences.

use std::collections::{BTreeSet, HashMap};
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::corpus::DocTermMatrix;
use crate::error::{Error, Result};
use crate::factorization::TopicModel;
use crate::tokenizer::TokenDoc;

/// Smoothing constant added to every joint probability.
pub const EPSILON: f64 = 0.01;

/// Document-level presence counts with pair counts computed on demand from
/// sorted postings lists.
#[derive(Debug, Clone, PartialEq)]
pub struct CooccurrenceStats {
    n_docs: usize,
    index: HashMap<String, usize>,
    postings: Vec<Vec<u32>>,
}

impl CooccurrenceStats {
    pub fn from_token_docs(docs: &[TokenDoc]) -> Result<Self> {
        if docs.is_empty() {
            return Err(Error::EmptyCorpus(PathBuf::from("<token documents>")));
        }
        let mut index = HashMap::new();
        let mut postings: Vec<Vec<u32>> = Vec::new();
        for (d, doc) in docs.iter().enumerate() {
            let present: BTreeSet<&str> = doc.tokens.iter().map(|t| t.lexeme.as_str()).collect();
            for term in present {
                let id = *index.entry(term.to_string()).or_insert_with(|| {
                    postings.push(Vec::new());
                    postings.len() - 1
                });
                postings[id].push(d as u32);
            }
        }
        Ok(CooccurrenceStats {
            n_docs: docs.len(),
            index,
            postings,
        })
    }

    /// Presence is a nonzero matrix entry.
    pub fn from_matrix(m: &DocTermMatrix) -> Result<Self> {
        if m.n_docs() == 0 {
            return Err(Error::EmptyCorpus(PathBuf::from("<document-term matrix>")));
        }
        let mut postings = vec![Vec::new(); m.n_terms()];
        for (i, j, v) in m.triplets() {
            if v != 0.0 {
                postings[j].push(i as u32);
            }
        }
        let index = m.terms().iter().enumerate().map(|(j, t)| (t.clone(), j)).collect();
        Ok(CooccurrenceStats {
            n_docs: m.n_docs(),
            index,
            postings,
        })
    }

    pub fn n_docs(&self) -> usize {
        self.n_docs
    }

    pub fn doc_freq(&self, term: &str) -> usize {
        self.index.get(term).map_or(0, |&i| self.postings[i].len())
    }

    pub fn pair_freq(&self, a: &str, b: &str) -> usize {
        match (self.index.get(a), self.index.get(b)) {
            (Some(&i), Some(&j)) => intersection_len(&self.postings[i], &self.postings[j]),
            _ => 0,
        }
    }

    pub fn p(&self, term: &str) -> f64 {
        self.doc_freq(term) as f64 / self.n_docs as f64
    }

    pub fn p_joint(&self, a: &str, b: &str) -> f64 {
        self.pair_freq(a, b) as f64 / self.n_docs as f64
    }
}

fn intersection_len(a: &[u32], b: &[u32]) -> usize {
    let (mut i, mut j, mut n) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                n += 1;
                i += 1;
                j += 1;
            }
        }
    }
    n
}

/// The index pairs that coherence sums run over: ordered pairs with the
/// diagonal left out. Changing the pair convention only touches this.
pub fn coherence_pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoherenceScore {
    pub value: f64,
    pub pairs_used: usize,
    /// Terms (UMass) or `a|b` pairs (NPMI) left out of the sum.
    pub flagged: Vec<String>,
}

fn check_n<S>(terms: &[S], n: usize) -> Result<()> {
    if n > terms.len() {
        return Err(Error::InvalidArgument(format!(
            "N={n} exceeds the {} terms given",
            terms.len()
        )));
    }
    Ok(())
}

/// Sum over ordered pairs `i != j` of `ln((P(wi, wj) + eps) / P(wi))`.
/// Terms with `P(wi) = 0` cannot sit in the `i` position and are flagged.
pub fn umass_detail<S: AsRef<str>>(terms: &[S], stats: &CooccurrenceStats, n: usize) -> Result<CoherenceScore> {
    check_n(terms, n)?;
    let terms: Vec<&str> = terms[..n].iter().map(AsRef::as_ref).collect();
    let mut flagged: Vec<String> = terms
        .iter()
        .filter(|t| stats.doc_freq(t) == 0)
        .map(|t| t.to_string())
        .collect();
    flagged.dedup();
    let mut value = 0.0;
    let mut pairs_used = 0;
    let mut pairs_seen = 0;
    for (i, j) in coherence_pairs(n) {
        pairs_seen += 1;
        let p_i = stats.p(terms[i]);
        if p_i == 0.0 {
            continue;
        }
        value += ((stats.p_joint(terms[i], terms[j]) + EPSILON) / p_i).ln();
        pairs_used += 1;
    }
    if pairs_seen > 0 && pairs_used == 0 {
        return Err(Error::NoValidPairs);
    }
    Ok(CoherenceScore {
        value,
        pairs_used,
        flagged,
    })
}

pub fn umass_coherence<S: AsRef<str>>(terms: &[S], stats: &CooccurrenceStats, n: usize) -> Result<f64> {
    umass_detail(terms, stats, n).map(|s| s.value)
}

/// `ln((P(a, b) + eps) / (P(a) P(b))) / -ln(P(a, b) + eps)`.
pub fn npmi(a: &str, b: &str, stats: &CooccurrenceStats) -> Result<f64> {
    let p_a = stats.p(a);
    let p_b = stats.p(b);
    let joint = stats.p_joint(a, b) + EPSILON;
    let denom = -joint.ln();
    if p_a * p_b == 0.0 || denom == 0.0 {
        return Err(Error::UndefinedNpmi(a.to_string(), b.to_string()));
    }
    Ok((joint / (p_a * p_b)).ln() / denom)
}

/// Sum of NPMI over ordered pairs `i != j`; undefined pairs are skipped and
/// flagged.
pub fn uci_npmi_detail<S: AsRef<str>>(terms: &[S], stats: &CooccurrenceStats, n: usize) -> Result<CoherenceScore> {
    check_n(terms, n)?;
    let terms: Vec<&str> = terms[..n].iter().map(AsRef::as_ref).collect();
    let mut value = 0.0;
    let mut pairs_used = 0;
    let mut pairs_seen = 0;
    let mut flagged = Vec::new();
    for (i, j) in coherence_pairs(n) {
        pairs_seen += 1;
        match npmi(terms[i], terms[j], stats) {
            Ok(v) => {
                value += v;
                pairs_used += 1;
            }
            Err(_) => flagged.push(format!("{}|{}", terms[i], terms[j])),
        }
    }
    if pairs_seen > 0 && pairs_used == 0 {
        return Err(Error::NoValidPairs);
    }
    Ok(CoherenceScore {
        value,
        pairs_used,
        flagged,
    })
}

pub fn uci_npmi_coherence<S: AsRef<str>>(terms: &[S], stats: &CooccurrenceStats, n: usize) -> Result<f64> {
    uci_npmi_detail(terms, stats, n).map(|s| s.value)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    Umass,
    UciNpmi,
}

impl Metric {
    pub fn score<S: AsRef<str>>(self, terms: &[S], stats: &CooccurrenceStats, n: usize) -> Result<f64> {
        match self {
            Metric::Umass => umass_coherence(terms, stats, n),
            Metric::UciNpmi => uci_npmi_coherence(terms, stats, n),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelCoherence {
    /// Median of the scored topics.
    pub value: f64,
    /// `None` for topics without a valid pair.
    pub per_topic: Vec<Option<f64>>,
}

/// Median over topics of the coherence of each topic's top-`n` terms.
/// Topics without a valid pair are skipped; if every topic is skipped the
/// result is [`Error::NoValidPairs`].
pub fn model_coherence(
    model: &TopicModel,
    stats: &CooccurrenceStats,
    n: usize,
    metric: Metric,
) -> Result<ModelCoherence> {
    let lists: Vec<Vec<String>> = (0..model.k).map(|t| model.top_terms(t, n)).collect();
    lists_coherence(&lists, stats, n, metric)
}

/// [`model_coherence`] over explicit ranked term lists, one per topic or
/// cluster. `n` is clamped to each list's length.
pub fn lists_coherence(
    lists: &[Vec<String>],
    stats: &CooccurrenceStats,
    n: usize,
    metric: Metric,
) -> Result<ModelCoherence> {
    let per_topic: Vec<Option<f64>> = lists
        .iter()
        .map(|terms| metric.score(terms, stats, n.min(terms.len())).ok())
        .collect();
    let scored: Vec<f64> = per_topic.iter().flatten().copied().collect();
    let value = median(&scored).ok_or(Error::NoValidPairs)?;
    Ok(ModelCoherence { value, per_topic })
}

/// Median; the mean of the two middle values for an even count.
pub fn median(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let mid = v.len() / 2;
    Some(if v.len() % 2 == 1 {
        v[mid]
    } else {
        (v[mid - 1] + v[mid]) / 2.0
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::tests::doc;

    /// 4 docs: w1 in d1,d2; w2 in d1.
    fn worked() -> CooccurrenceStats {
        CooccurrenceStats::from_token_docs(&[
            doc("d1", &["w1", "w2"]),
            doc("d2", &["w1"]),
            doc("d3", &["x"]),
            doc("d4", &["x"]),
        ])
        .unwrap()
    }

    #[test]
    fn probabilities() {
        let s = worked();
        assert_eq!(s.p("w1"), 0.5);
        assert_eq!(s.p("w2"), 0.25);
        assert_eq!(s.p_joint("w1", "w2"), 0.25);
        assert_eq!(s.p_joint("w2", "w1"), 0.25);
        assert_eq!(s.p("absent"), 0.0);
        assert_eq!(s.p_joint("w1", "x"), 0.0);
    }

    #[test]
    fn umass_worked_example() {
        let v = umass_coherence(&["w1", "w2"], &worked(), 2).unwrap();
        let expected = (0.26f64 / 0.5).ln() + (0.26f64 / 0.25).ln();
        assert!((v - expected).abs() < 1e-12);
        assert!((v - (-0.6147)).abs() < 1e-4);
    }

    #[test]
    fn umass_single_term_is_zero() {
        assert_eq!(umass_coherence(&["w1"], &worked(), 1).unwrap(), 0.0);
    }

    #[test]
    fn umass_always_together() {
        let s = CooccurrenceStats::from_token_docs(&[doc("a", &["p", "q"]), doc("b", &["q", "p"])]).unwrap();
        let v = umass_coherence(&["p", "q"], &s, 2).unwrap();
        assert!((v - 2.0 * 1.01f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn umass_reversal_difference() {
        // Only the i-position denominators differ between the two orders,
        // and with two terms both orders use both denominators once.
        let s = worked();
        let a = umass_coherence(&["w1", "w2"], &s, 2).unwrap();
        let b = umass_coherence(&["w2", "w1"], &s, 2).unwrap();
        assert!((a - b).abs() < 1e-15);
    }

    #[test]
    fn umass_unknown_terms_flagged() {
        let s = worked();
        let d = umass_detail(&["w1", "zz"], &s, 2).unwrap();
        assert_eq!(d.flagged, vec!["zz".to_string()]);
        assert_eq!(d.pairs_used, 1);
        assert!(matches!(umass_detail(&["zz", "yy"], &s, 2), Err(Error::NoValidPairs)));
    }

    #[test]
    fn npmi_examples() {
        let together = CooccurrenceStats::from_token_docs(&[doc("a", &["p", "q"]), doc("b", &["r"])]).unwrap();
        let v = npmi("p", "q", &together).unwrap();
        assert!((v - 2.04f64.ln() / -(0.51f64.ln())).abs() < 1e-12);
        assert!((v - 1.0588).abs() < 1e-4);

        let apart = CooccurrenceStats::from_token_docs(&[doc("a", &["p"]), doc("b", &["q"])]).unwrap();
        let v = npmi("p", "q", &apart).unwrap();
        assert!((v - 0.04f64.ln() / -(0.01f64.ln())).abs() < 1e-12);
        assert!((v - (-0.6990)).abs() < 1e-4);

        assert!(matches!(npmi("p", "zz", &apart), Err(Error::UndefinedNpmi(..))));
    }

    #[test]
    fn uci_sums_ordered_pairs() {
        let s = CooccurrenceStats::from_token_docs(&[doc("a", &["p", "q"]), doc("b", &["r"])]).unwrap();
        let v = uci_npmi_coherence(&["p", "q"], &s, 2).unwrap();
        assert!((v - 2.0 * npmi("p", "q", &s).unwrap()).abs() < 1e-15);
        let d = uci_npmi_detail(&["p", "q", "zz"], &s, 3).unwrap();
        assert_eq!(d.pairs_used, 2);
        assert_eq!(d.flagged.len(), 4);
    }

    #[test]
    fn medians() {
        assert_eq!(median(&[-1.0, -2.0, -9.0]), Some(-2.0));
        assert_eq!(median(&[3.0]), Some(3.0));
        assert_eq!(median(&[4.0, 1.0, 2.0, 3.0]), Some(2.5));
        assert_eq!(median(&[]), None);
    }

    #[test]
    fn matrix_and_token_stats_agree() {
        let docs = [doc("a", &["p", "q", "p"]), doc("b", &["q"]), doc("c", &["r", "p"])];
        let vocab = crate::corpus::build_vocabulary(&docs, 0.0).unwrap();
        let m = crate::corpus::build_matrix(&docs, &vocab, false);
        let a = CooccurrenceStats::from_token_docs(&docs).unwrap();
        let b = CooccurrenceStats::from_matrix(&m).unwrap();
        for x in ["p", "q", "r"] {
            assert_eq!(a.doc_freq(x), b.doc_freq(x));
            for y in ["p", "q", "r"] {
                assert_eq!(a.pair_freq(x, y), b.pair_freq(x, y));
            }
        }
    }

    #[test]
    fn empty_corpus() {
        assert!(matches!(
            CooccurrenceStats::from_token_docs(&[]),
            Err(Error::EmptyCorpus(_))
        ));
    }
}
