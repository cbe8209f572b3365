//! Tokenized corpora as JSONL, one [`TokenDoc`] per line.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::write_file;
use crate::error::{Error, Result};
use crate::tokenizer::{SourceDoc, TokenDoc, Tokenizer};

/// A source file left out of the corpus.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkippedDoc {
    pub doc_id: String,
    pub kind: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TokenizedCorpus {
    pub docs: Vec<TokenDoc>,
    pub skipped: Vec<SkippedDoc>,
}

/// Tokenizes every document. Documents without any token are skipped and
/// recorded; other errors abort.
pub fn tokenize_corpus(tokenizer: &Tokenizer, sources: &[SourceDoc]) -> Result<TokenizedCorpus> {
    let mut docs = Vec::with_capacity(sources.len());
    let mut skipped = Vec::new();
    for s in sources {
        match tokenizer.tokenize(s) {
            Ok(d) => docs.push(d),
            Err(e @ Error::EmptyDocument(_)) => skipped.push(SkippedDoc {
                doc_id: s.id.clone(),
                kind: e.kind().to_string(),
                message: e.to_string(),
            }),
            Err(e) => return Err(e),
        }
    }
    Ok(TokenizedCorpus { docs, skipped })
}

pub fn write_token_docs(path: &Path, docs: &[TokenDoc]) -> Result<()> {
    let mut out = String::new();
    for d in docs {
        out.push_str(&serde_json::to_string(d)?);
        out.push('\n');
    }
    write_file(path, out)
}

pub fn read_token_docs(path: &Path) -> Result<Vec<TokenDoc>> {
    if !path.exists() {
        return Err(Error::MissingInput(path.to_path_buf()));
    }
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(n, l)| serde_json::from_str(l).map_err(|e| Error::parse(path.display(), n + 1, e)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tokenizer::TokenizerKind;

    #[test]
    fn jsonl_round_trip_and_skips() {
        let sources = vec![
            SourceDoc::new("a.py", "for i in range(3):\n    x = i\n"),
            SourceDoc::new("b.py", "# only a comment\n"),
        ];
        let t = Tokenizer::new(TokenizerKind::Augmented);
        let c = tokenize_corpus(&t, &sources).unwrap();
        assert_eq!(c.docs.len(), 1);
        assert_eq!(c.skipped[0].doc_id, "b.py");
        assert_eq!(c.skipped[0].kind, "EmptyDocument");

        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("tokens.jsonl");
        write_token_docs(&path, &c.docs).unwrap();
        assert_eq!(read_token_docs(&path).unwrap(), c.docs);
    }

    #[test]
    fn bad_line_is_located() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.jsonl");
        std::fs::write(&path, "{\"doc_id\":\"a\",\"tokens\":[]}\nnot json\n").unwrap();
        assert!(matches!(read_token_docs(&path), Err(Error::Parse { line: 2, .. })));
    }
}
