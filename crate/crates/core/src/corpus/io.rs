//! On-disk form of a document-term matrix.
//!
//! A matrix directory holds four files:
//!
//! * `matrix.txt` - header `docs terms nnz`, then one `row col value` line
//!   per stored entry (0-based indices).
//! * `vocab.tsv` - `term<TAB>doc_freq`, one term per line, in column order.
//! * `docs.txt` - one document id per line, in row order.
//! * `meta.json` - weighting tag, binary flag, corpus size and column scale.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{DocTermMatrix, Vocabulary, Weighting};
use crate::error::{Error, Result};

#[derive(Serialize, Deserialize)]
struct Meta {
    n_docs_vocab: usize,
    weighting: Weighting,
    binary_applied: bool,
    column_scale: Option<Vec<f64>>,
}

pub fn write_matrix_dir(dir: &Path, m: &DocTermMatrix) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;

    let mut body = format!("{} {} {}\n", m.n_docs(), m.n_terms(), m.nnz());
    for (i, j, v) in m.triplets() {
        writeln!(body, "{i} {j} {v}").unwrap();
    }
    write(dir, "matrix.txt", &body)?;

    let mut vocab = String::new();
    for (t, df) in m.terms().iter().zip(m.vocab().doc_freqs()) {
        writeln!(vocab, "{t}\t{df}").unwrap();
    }
    write(dir, "vocab.tsv", &vocab)?;

    let mut docs = String::new();
    for id in m.doc_ids() {
        writeln!(docs, "{id}").unwrap();
    }
    write(dir, "docs.txt", &docs)?;

    let meta = Meta {
        n_docs_vocab: m.vocab().n_docs(),
        weighting: m.weighting(),
        binary_applied: m.binary_applied(),
        column_scale: m.column_scale.clone(),
    };
    write(dir, "meta.json", &(serde_json::to_string_pretty(&meta)? + "\n"))
}

pub fn read_matrix_dir(dir: &Path) -> Result<DocTermMatrix> {
    let meta: Meta = serde_json::from_str(&read(dir, "meta.json")?)?;

    let vocab_path = dir.join("vocab.tsv");
    let mut terms = Vec::new();
    let mut dfs = Vec::new();
    for (n, line) in read(dir, "vocab.tsv")?.lines().enumerate() {
        let (term, df) = line
            .rsplit_once('\t')
            .ok_or_else(|| Error::parse(vocab_path.display(), n + 1, "expected term<TAB>doc_freq"))?;
        let df = df.parse().map_err(|e| Error::parse(vocab_path.display(), n + 1, e))?;
        terms.push(term.to_string());
        dfs.push(df);
    }
    let vocab = Vocabulary::from_parts(terms, dfs, meta.n_docs_vocab);

    let rows: Vec<String> = read(dir, "docs.txt")?.lines().map(str::to_string).collect();

    let matrix_path = dir.join("matrix.txt");
    let text = read(dir, "matrix.txt")?;
    let mut lines = text.lines();
    let header: Vec<usize> = lines
        .next()
        .ok_or_else(|| Error::parse(matrix_path.display(), 1, "missing header"))?
        .split_whitespace()
        .map(|f| f.parse::<usize>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| Error::parse(matrix_path.display(), 1, e))?;
    let [n_docs, n_terms, nnz] = header[..] else {
        return Err(Error::parse(
            matrix_path.display(),
            1,
            "header must be `docs terms nnz`",
        ));
    };
    if n_docs != rows.len() || n_terms != vocab.len() {
        return Err(Error::parse(
            matrix_path.display(),
            1,
            format!(
                "header {n_docs}x{n_terms} disagrees with {} docs / {} terms",
                rows.len(),
                vocab.len()
            ),
        ));
    }
    let mut triplets = Vec::with_capacity(nnz);
    for (n, line) in lines.enumerate() {
        let lineno = n + 2;
        let bad = |d: String| Error::parse(matrix_path.display(), lineno, d);
        let mut f = line.split_whitespace();
        let (Some(i), Some(j), Some(v), None) = (f.next(), f.next(), f.next(), f.next()) else {
            return Err(bad("expected `row col value`".into()));
        };
        let i: usize = i.parse().map_err(|e| bad(format!("{e}")))?;
        let j: usize = j.parse().map_err(|e| bad(format!("{e}")))?;
        let v: f64 = v.parse().map_err(|e| bad(format!("{e}")))?;
        if i >= n_docs || j >= n_terms || !(v >= 0.0) {
            return Err(bad(format!("entry ({i}, {j}, {v}) out of range")));
        }
        triplets.push((i, j, v));
    }
    if triplets.len() != nnz {
        return Err(Error::parse(
            matrix_path.display(),
            1,
            format!("header announces {nnz} entries, found {}", triplets.len()),
        ));
    }
    let mut m = DocTermMatrix::from_triplets(rows, vocab, &triplets, meta.weighting, meta.binary_applied);
    m.column_scale = meta.column_scale;
    Ok(m)
}

fn write(dir: &Path, name: &str, body: &str) -> Result<()> {
    let path = dir.join(name);
    std::fs::write(&path, body).map_err(|e| Error::io(path, e))
}

fn read(dir: &Path, name: &str) -> Result<String> {
    let path = dir.join(name);
    if !path.exists() {
        return Err(Error::MissingInput(path));
    }
    std::fs::read_to_string(&path).map_err(|e| Error::io(path, e))
}
