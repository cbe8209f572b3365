//! Standard and augmented tokenizers.
//!
//! The standard tokenizer splits text into maximal runs of alphanumeric and
//! underscore characters. The augmented tokenizer lexes each logical line of
//! Python-syntax source and rewrites it into structural annotations
//! (`is_number`, `is_op_logic`, ...), reserved words and called method
//! names, then appends the bigrams and trigrams of every line.

mod lexer;
mod reserved;

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use lexer::{LogicalLine, Raw};
pub use reserved::ReservedWords;

/// The closed set of annotation lexemes the augmented tokenizer can emit.
pub const ANNOTATIONS: [&str; 10] = [
    "is_indent",
    "is_block",
    "is_number",
    "is_string",
    "is_list",
    "is_dict",
    "is_tuple",
    "is_op_logic",
    "is_op_arit",
    "is_attribution",
];

/// Default indentation width, also used to expand tabs.
pub const INDENT_WIDTH: usize = 4;

// Python keywords. Used for syntax decisions (is `(` a call?), independent
// of the editable reserved-word table.
const KEYWORDS: &[&str] = &[
    "False", "None", "True", "and", "as", "assert", "async", "await", "break", "class", "continue", "def", "del",
    "elif", "else", "except", "finally", "for", "from", "global", "if", "import", "in", "is", "lambda", "nonlocal",
    "not", "or", "pass", "raise", "return", "try", "while", "with", "yield",
];

const LOGIC_WORDS: &[&str] = &["and", "or", "not"];
const LOGIC_OPS: &[&str] = &["==", "!=", "<", ">", "<=", ">="];
const ARITH_OPS: &[&str] = &["+", "-", "*", "/", "//", "%", "**"];
const ASSIGN_OPS: &[&str] = &[
    "=", "+=", "-=", "*=", "/=", "//=", "%=", "**=", ":=", "&=", "|=", "^=", ">>=", "<<=", "@=",
];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SourceDoc {
    pub id: String,
    pub path: PathBuf,
    pub text: String,
}

impl SourceDoc {
    pub fn new(id: impl Into<String>, text: impl Into<String>) -> Self {
        let id = id.into();
        SourceDoc {
            path: PathBuf::from(&id),
            id,
            text: text.into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TokenKind {
    /// A plain split word from the standard tokenizer.
    Word,
    ReservedWord,
    Annotation,
    MethodName,
    Bigram,
    Trigram,
}

impl TokenKind {
    pub fn is_ngram(self) -> bool {
        matches!(self, TokenKind::Bigram | TokenKind::Trigram)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Token {
    pub lexeme: String,
    pub kind: TokenKind,
    /// Line the token came from (first physical line of its logical line).
    pub line: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TokenDoc {
    pub doc_id: String,
    pub tokens: Vec<Token>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl TokenDoc {
    pub fn lexemes(&self) -> impl Iterator<Item = &str> {
        self.tokens.iter().map(|t| t.lexeme.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TokenizerKind {
    Standard,
    Augmented,
}

impl std::str::FromStr for TokenizerKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "standard" => Ok(TokenizerKind::Standard),
            "augmented" => Ok(TokenizerKind::Augmented),
            other => Err(Error::InvalidArgument(format!("unknown tokenizer `{other}`"))),
        }
    }
}

impl std::fmt::Display for TokenizerKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            TokenizerKind::Standard => "standard",
            TokenizerKind::Augmented => "augmented",
        })
    }
}

/// Splits text into maximal runs of alphanumeric/underscore characters.
/// Identifiers are kept verbatim; nothing is annotated.
pub fn tokenize_standard(doc: &SourceDoc) -> Result<TokenDoc> {
    let mut tokens = Vec::new();
    for (idx, line) in doc.text.lines().enumerate() {
        let words = line
            .split(|c: char| !(c.is_alphanumeric() || c == '_'))
            .filter(|w| !w.is_empty());
        tokens.extend(words.map(|w| Token {
            lexeme: w.to_string(),
            kind: TokenKind::Word,
            line: idx + 1,
        }));
    }
    if tokens.is_empty() {
        return Err(Error::EmptyDocument(doc.id.clone()));
    }
    Ok(TokenDoc {
        doc_id: doc.id.clone(),
        tokens,
        warnings: Vec::new(),
    })
}

/// Augmented tokenization with the bundled reserved-word table.
pub fn tokenize_augmented(doc: &SourceDoc) -> Result<TokenDoc> {
    AugmentedTokenizer::default().tokenize(doc)
}

#[derive(Debug, Clone)]
pub struct AugmentedTokenizer {
    reserved: ReservedWords,
    indent_width: usize,
}

impl Default for AugmentedTokenizer {
    fn default() -> Self {
        AugmentedTokenizer::new(ReservedWords::default())
    }
}

impl AugmentedTokenizer {
    pub fn new(reserved: ReservedWords) -> Self {
        AugmentedTokenizer {
            reserved,
            indent_width: INDENT_WIDTH,
        }
    }

    pub fn with_indent_width(mut self, width: usize) -> Self {
        self.indent_width = width.max(1);
        self
    }

    pub fn reserved(&self) -> &ReservedWords {
        &self.reserved
    }

    pub fn tokenize(&self, doc: &SourceDoc) -> Result<TokenDoc> {
        let lexed = lexer::lex(&doc.id, &doc.text, self.indent_width)?;
        let mut tokens = Vec::new();
        for line in &lexed.lines {
            let unigrams = self.line_unigrams(line);
            push_line(&mut tokens, unigrams, line.line);
        }
        if tokens.is_empty() {
            return Err(Error::EmptyDocument(doc.id.clone()));
        }
        Ok(TokenDoc {
            doc_id: doc.id.clone(),
            tokens,
            warnings: lexed.warnings,
        })
    }

    fn line_unigrams(&self, line: &LogicalLine) -> Vec<(String, TokenKind)> {
        let annotation = |s: &str| (s.to_string(), TokenKind::Annotation);
        let mut out = Vec::new();
        for _ in 0..line.indent_cols / self.indent_width {
            out.push(annotation("is_indent"));
        }

        let toks = &line.tokens;
        for (i, raw) in toks.iter().enumerate() {
            let prev = i.checked_sub(1).map(|p| &toks[p]);
            let next = toks.get(i + 1);
            match raw {
                Raw::Name(name) => {
                    if LOGIC_WORDS.contains(&name.as_str()) {
                        out.push(annotation("is_op_logic"));
                    } else if self.reserved.contains(name) {
                        out.push((name.clone(), TokenKind::ReservedWord));
                    } else if prev == Some(&Raw::Op(".")) && next == Some(&Raw::Open('(')) {
                        out.push((name.clone(), TokenKind::MethodName));
                    }
                }
                Raw::Number => out.push(annotation("is_number")),
                Raw::Str => out.push(annotation("is_string")),
                Raw::Open('[') => out.push(annotation("is_list")),
                Raw::Open('{') => out.push(annotation("is_dict")),
                Raw::Open(_) => {
                    if !is_call_paren(prev) && is_tuple_literal(toks, i) {
                        out.push(annotation("is_tuple"));
                    }
                }
                Raw::Close(_) => {}
                Raw::Op(op) => {
                    if LOGIC_OPS.contains(op) {
                        out.push(annotation("is_op_logic"));
                    } else if ARITH_OPS.contains(op) {
                        out.push(annotation("is_op_arit"));
                    } else if ASSIGN_OPS.contains(op) {
                        out.push(annotation("is_attribution"));
                    }
                }
            }
        }

        if toks.last() == Some(&Raw::Op(":")) {
            out.push(annotation("is_block"));
        }
        out
    }
}

fn is_call_paren(prev: Option<&Raw>) -> bool {
    match prev {
        Some(Raw::Name(name)) => !KEYWORDS.contains(&name.as_str()),
        Some(Raw::Close(_)) | Some(Raw::Str) => true,
        _ => false,
    }
}

/// `()` or a parenthesized group with a top-level comma.
fn is_tuple_literal(toks: &[Raw], open: usize) -> bool {
    let mut depth = 0usize;
    for (offset, raw) in toks[open + 1..].iter().enumerate() {
        match raw {
            Raw::Open(_) => depth += 1,
            Raw::Close(_) if depth == 0 => return offset == 0,
            Raw::Close(_) => depth -= 1,
            Raw::Op(",") if depth == 0 => return true,
            _ => {}
        }
    }
    false
}

fn push_line(tokens: &mut Vec<Token>, unigrams: Vec<(String, TokenKind)>, line: usize) {
    let lexemes: Vec<&str> = unigrams.iter().map(|(s, _)| s.as_str()).collect();
    let bigrams: Vec<String> = lexemes.windows(2).map(|w| w.join(" ")).collect();
    let trigrams: Vec<String> = lexemes.windows(3).map(|w| w.join(" ")).collect();
    tokens.extend(unigrams.iter().map(|(lexeme, kind)| Token {
        lexeme: lexeme.clone(),
        kind: *kind,
        line,
    }));
    tokens.extend(bigrams.into_iter().map(|lexeme| Token {
        lexeme,
        kind: TokenKind::Bigram,
        line,
    }));
    tokens.extend(trigrams.into_iter().map(|lexeme| Token {
        lexeme,
        kind: TokenKind::Trigram,
        line,
    }));
}

#[derive(Debug, Clone)]
pub enum Tokenizer {
    Standard,
    Augmented(AugmentedTokenizer),
}

impl Tokenizer {
    pub fn new(kind: TokenizerKind) -> Self {
        match kind {
            TokenizerKind::Standard => Tokenizer::Standard,
            TokenizerKind::Augmented => Tokenizer::Augmented(AugmentedTokenizer::default()),
        }
    }

    pub fn kind(&self) -> TokenizerKind {
        match self {
            Tokenizer::Standard => TokenizerKind::Standard,
            Tokenizer::Augmented(_) => TokenizerKind::Augmented,
        }
    }

    pub fn tokenize(&self, doc: &SourceDoc) -> Result<TokenDoc> {
        match self {
            Tokenizer::Standard => tokenize_standard(doc),
            Tokenizer::Augmented(t) => t.tokenize(doc),
        }
    }

    pub fn tokenize_all(&self, docs: &[SourceDoc]) -> Result<Vec<TokenDoc>> {
        docs.iter().map(|d| self.tokenize(d)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lexemes(doc: &TokenDoc) -> Vec<&str> {
        doc.lexemes().collect()
    }

    fn aug(text: &str) -> TokenDoc {
        tokenize_augmented(&SourceDoc::new("d", text)).unwrap()
    }

    fn unigrams(doc: &TokenDoc) -> Vec<&str> {
        doc.tokens
            .iter()
            .filter(|t| !t.kind.is_ngram())
            .map(|t| t.lexeme.as_str())
            .collect()
    }

    #[test]
    fn standard_splits_words() {
        let d = tokenize_standard(&SourceDoc::new("d", "if x > 1:")).unwrap();
        assert_eq!(lexemes(&d), ["if", "x", "1"]);
        let d = tokenize_standard(&SourceDoc::new("d", "def f(n): return n")).unwrap();
        assert_eq!(lexemes(&d), ["def", "f", "n", "return", "n"]);
    }

    #[test]
    fn standard_keeps_identifier_case() {
        let d = tokenize_standard(&SourceDoc::new("d", "myList = True")).unwrap();
        assert_eq!(lexemes(&d), ["myList", "True"]);
    }

    #[test]
    fn standard_empty_document() {
        let err = tokenize_standard(&SourceDoc::new("d", "   ")).unwrap_err();
        assert!(matches!(err, Error::EmptyDocument(_)));
    }

    #[test]
    fn augmented_if_line() {
        let d = aug("if x > 1:");
        assert_eq!(
            lexemes(&d),
            [
                "if",
                "is_op_logic",
                "is_number",
                "is_block",
                "if is_op_logic",
                "is_op_logic is_number",
                "is_number is_block",
                "if is_op_logic is_number",
                "is_op_logic is_number is_block",
            ]
        );
    }

    #[test]
    fn augmented_assignment() {
        assert_eq!(
            lexemes(&aug("x = 1")),
            ["is_attribution", "is_number", "is_attribution is_number"]
        );
    }

    #[test]
    fn augmented_method_call() {
        let d = aug("out.append(s)");
        assert_eq!(lexemes(&d), ["append"]);
        assert_eq!(d.tokens[0].kind, TokenKind::MethodName);
    }

    #[test]
    fn attribute_access_without_call_is_dropped() {
        assert_eq!(lexemes(&aug("y = p.x")), ["is_attribution"]);
    }

    #[test]
    fn indentation_levels() {
        let d = aug("def f(n):\n    for i in range(n):\n        print(i)\n");
        assert_eq!(
            unigrams(&d),
            [
                "def",
                "is_block",
                "is_indent",
                "for",
                "in",
                "range",
                "is_block",
                "is_indent",
                "is_indent",
                "print",
            ]
        );
    }

    #[test]
    fn literals() {
        assert_eq!(
            unigrams(&aug("a = [1, 'b', {2: 3}, (4, 5), ()]")),
            [
                "is_attribution",
                "is_list",
                "is_number",
                "is_string",
                "is_dict",
                "is_number",
                "is_number",
                "is_tuple",
                "is_number",
                "is_number",
                "is_tuple",
            ]
        );
    }

    #[test]
    fn grouping_and_call_parens_are_not_tuples() {
        assert_eq!(
            unigrams(&aug("y = (a + b) * f(1, 2)")),
            ["is_attribution", "is_op_arit", "is_op_arit", "is_number", "is_number"]
        );
        assert_eq!(unigrams(&aug("return (a, b)")), ["return", "is_tuple"]);
    }

    #[test]
    fn operators() {
        assert_eq!(
            unigrams(&aug("z = a // b ** 2 % c")),
            ["is_attribution", "is_op_arit", "is_op_arit", "is_number", "is_op_arit"]
        );
        assert_eq!(
            unigrams(&aug("ok = a != b and not c")),
            ["is_attribution", "is_op_logic", "is_op_logic", "is_op_logic"]
        );
        assert_eq!(unigrams(&aug("t += 1")), ["is_attribution", "is_number"]);
    }

    #[test]
    fn ngrams_stay_on_their_line() {
        let d = aug("x = 1\ny = 2\n");
        assert!(!lexemes(&d).contains(&"is_number is_attribution"));
    }

    #[test]
    fn comments_and_only_identifiers() {
        let err = tokenize_augmented(&SourceDoc::new("d", "# just a comment\nfoo\n")).unwrap_err();
        assert!(matches!(err, Error::EmptyDocument(_)));
    }

    #[test]
    fn lex_error_reports_line() {
        let err = tokenize_augmented(&SourceDoc::new("d", "x = 1\ny = ?\n")).unwrap_err();
        assert!(matches!(err, Error::Lex { line: 2, .. }));
    }

    #[test]
    fn custom_reserved_words() {
        let t = AugmentedTokenizer::new(ReservedWords::parse("for\nin\nsorted\n"));
        let d = t
            .tokenize(&SourceDoc::new("d", "for x in sorted(y):\n    pass\n"))
            .unwrap();
        let u: Vec<_> = d
            .tokens
            .iter()
            .filter(|t| !t.kind.is_ngram())
            .map(|t| t.lexeme.as_str())
            .collect();
        assert_eq!(u, ["for", "in", "sorted", "is_block", "is_indent"]);
    }
}
