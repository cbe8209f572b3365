//! Plain-text model files.
//!
//! ```text
//! method lda
//! k 2
//! seed 7
//! iterations 12
//! objective -1234.5
//! converged true
//! trace -1500 -1300 -1234.5
//! zero_rows 4
//! docs 3
//! terms 5
//! [docs]
//! <one id per line>
//! [terms]
//! <one term per line>
//! [doc_topic]
//! <docs rows of k values>
//! [topic_term]
//! <k rows of terms values>
//! ```
//!
//! Floats are written in shortest round-trip form, so reading a file gives
//! back the exact model.

use std::fmt::Write as _;
use std::path::Path;

use nalgebra::DMatrix;

use super::{FitDiagnostics, TopicModel};
use crate::error::{Error, Result};

pub fn write_model(path: &Path, model: &TopicModel) -> Result<()> {
    let d = &model.diagnostics;
    let mut out = String::new();
    writeln!(out, "method {}", model.method).unwrap();
    writeln!(out, "k {}", model.k).unwrap();
    writeln!(out, "seed {}", model.seed).unwrap();
    writeln!(out, "iterations {}", d.iterations).unwrap();
    writeln!(out, "objective {}", d.objective).unwrap();
    writeln!(out, "converged {}", d.converged).unwrap();
    writeln!(out, "trace {}", join(d.trace.iter())).unwrap();
    writeln!(out, "zero_rows {}", join(d.zero_rows.iter())).unwrap();
    writeln!(out, "docs {}", model.doc_ids.len()).unwrap();
    writeln!(out, "terms {}", model.terms.len()).unwrap();
    out.push_str("[docs]\n");
    for id in &model.doc_ids {
        writeln!(out, "{id}").unwrap();
    }
    out.push_str("[terms]\n");
    for t in &model.terms {
        writeln!(out, "{t}").unwrap();
    }
    out.push_str("[doc_topic]\n");
    write_matrix(&mut out, &model.doc_topic);
    out.push_str("[topic_term]\n");
    write_matrix(&mut out, &model.topic_term);
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
    }
    std::fs::write(path, out).map_err(|e| Error::io(path, e))
}

fn join<T: std::fmt::Display>(items: impl Iterator<Item = T>) -> String {
    items.map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
}

fn write_matrix(out: &mut String, m: &DMatrix<f64>) {
    for row in m.row_iter() {
        writeln!(out, "{}", join(row.iter())).unwrap();
    }
}

pub fn read_model(path: &Path) -> Result<TopicModel> {
    if !path.exists() {
        return Err(Error::MissingInput(path.to_path_buf()));
    }
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut r = Reader {
        path,
        lines: text.lines().enumerate(),
        last: 0,
    };

    let method = r.field("method")?.parse()?;
    let k: usize = r.parsed("k")?;
    let seed: u64 = r.parsed("seed")?;
    let iterations: usize = r.parsed("iterations")?;
    let objective: f64 = r.parsed("objective")?;
    let converged: bool = r.parsed("converged")?;
    let trace = r.list("trace")?;
    let zero_rows = r.list("zero_rows")?;
    let n_docs: usize = r.parsed("docs")?;
    let n_terms: usize = r.parsed("terms")?;

    r.section("[docs]")?;
    let doc_ids = r.take(n_docs)?;
    r.section("[terms]")?;
    let terms = r.take(n_terms)?;
    r.section("[doc_topic]")?;
    let doc_topic = r.matrix(n_docs, k)?;
    r.section("[topic_term]")?;
    let topic_term = r.matrix(k, n_terms)?;

    Ok(TopicModel {
        method,
        k,
        seed,
        doc_ids,
        terms,
        doc_topic,
        topic_term,
        diagnostics: FitDiagnostics {
            iterations,
            objective,
            converged,
            trace,
            zero_rows,
        },
    })
}

struct Reader<'a, I> {
    path: &'a Path,
    lines: I,
    last: usize,
}

impl<'a, I: Iterator<Item = (usize, &'a str)>> Reader<'a, I> {
    fn err(&self, detail: impl ToString) -> Error {
        Error::parse(self.path.display(), self.last, detail)
    }

    fn next(&mut self) -> Result<&'a str> {
        match self.lines.next() {
            Some((n, line)) => {
                self.last = n + 1;
                Ok(line)
            }
            None => {
                self.last += 1;
                Err(self.err("unexpected end of file"))
            }
        }
    }

    fn field(&mut self, key: &str) -> Result<&'a str> {
        let line = self.next()?;
        match line.split_once(' ') {
            Some((k, v)) if k == key => Ok(v),
            None if line == key => Ok(""),
            _ => Err(self.err(format!("expected `{key} <value>`"))),
        }
    }

    fn parsed<T: std::str::FromStr>(&mut self, key: &str) -> Result<T>
    where
        T::Err: std::fmt::Display,
    {
        let v = self.field(key)?;
        v.parse().map_err(|e: T::Err| self.err(format!("{key}: {e}")))
    }

    fn list<T: std::str::FromStr>(&mut self, key: &str) -> Result<Vec<T>>
    where
        T::Err: std::fmt::Display,
    {
        let v = self.field(key)?;
        v.split_whitespace()
            .map(|f| f.parse().map_err(|e: T::Err| self.err(format!("{key}: {e}"))))
            .collect()
    }

    fn section(&mut self, name: &str) -> Result<()> {
        if self.next()? == name {
            Ok(())
        } else {
            Err(self.err(format!("expected section {name}")))
        }
    }

    fn take(&mut self, n: usize) -> Result<Vec<String>> {
        (0..n).map(|_| self.next().map(str::to_string)).collect()
    }

    fn matrix(&mut self, rows: usize, cols: usize) -> Result<DMatrix<f64>> {
        let mut m = DMatrix::zeros(rows, cols);
        for i in 0..rows {
            let line = self.next()?;
            let values: Vec<f64> = line
                .split_whitespace()
                .map(|f| f.parse::<f64>().map_err(|e| self.err(e)))
                .collect::<Result<_>>()?;
            if values.len() != cols {
                return Err(self.err(format!("expected {cols} values, found {}", values.len())));
            }
            for (j, v) in values.into_iter().enumerate() {
                m[(i, j)] = v;
            }
        }
        Ok(m)
    }
}
