//! Line-oriented lexer for Python-syntax source.
//!
//! Produces logical lines (physical lines joined across open brackets and
//! backslash continuations) made of coarse raw tokens. Comments and blank
//! lines never produce a logical line.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Raw {
    Name(String),
    Number,
    Str,
    Op(&'static str),
    Open(char),
    Close(char),
}

#[derive(Debug, Clone)]
pub(crate) struct LogicalLine {
    /// 1-based physical line the logical line starts on.
    pub line: usize,
    /// Leading indentation in columns, tabs counted as `tab_width`.
    pub indent_cols: usize,
    pub tokens: Vec<Raw>,
}

// Longest match first.
const OPERATORS: &[&str] = &[
    "**=", "//=", ">>=", "<<=", "...", "->", ":=", "**", "//", "==", "!=", "<=", ">=", "+=", "-=", "*=", "/=", "%=",
    "&=", "|=", "^=", "@=", "<<", ">>", "+", "-", "*", "/", "%", "<", ">", "=", ".", ",", ":", ";", "@", "&", "|", "^",
    "~",
];

const STRING_PREFIXES: &[&str] = &["r", "u", "b", "f", "br", "rb", "fr", "rf"];

pub(crate) struct Lexed {
    pub lines: Vec<LogicalLine>,
    pub warnings: Vec<String>,
}

struct Lexer<'a> {
    doc_id: &'a str,
    chars: Vec<char>,
    pos: usize,
    line: usize,
    depth: usize,
    tab_width: usize,
    warnings: Vec<String>,
}

pub(crate) fn lex(doc_id: &str, text: &str, tab_width: usize) -> Result<Lexed> {
    let mut lexer = Lexer {
        doc_id,
        chars: text.chars().collect(),
        pos: 0,
        line: 1,
        depth: 0,
        tab_width,
        warnings: Vec::new(),
    };
    let lines = lexer.run()?;
    Ok(Lexed {
        lines,
        warnings: lexer.warnings,
    })
}

fn is_name_start(c: char) -> bool {
    c == '_' || c.is_alphabetic()
}

fn is_name_char(c: char) -> bool {
    c == '_' || c.is_alphanumeric()
}

impl Lexer<'_> {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn peek_at(&self, offset: usize) -> Option<char> {
        self.chars.get(self.pos + offset).copied()
    }

    fn lex_error(&self, detail: impl Into<String>) -> Error {
        Error::Lex {
            doc: self.doc_id.to_string(),
            line: self.line,
            detail: detail.into(),
        }
    }

    fn run(&mut self) -> Result<Vec<LogicalLine>> {
        let mut lines = Vec::new();
        let mut current: Option<LogicalLine> = None;
        let mut at_line_start = true;

        loop {
            if at_line_start && self.depth == 0 {
                at_line_start = false;
                let indent = self.measure_indent();
                match self.peek() {
                    None => break,
                    Some('\n') | Some('#') | Some('\r') => {
                        self.skip_to_newline();
                        if self.peek() == Some('\n') {
                            self.pos += 1;
                            self.line += 1;
                        }
                        at_line_start = true;
                        continue;
                    }
                    Some(_) => {
                        current = Some(LogicalLine {
                            line: self.line,
                            indent_cols: indent,
                            tokens: Vec::new(),
                        });
                    }
                }
            }

            let Some(c) = self.peek() else { break };
            match c {
                '\n' => {
                    self.pos += 1;
                    self.line += 1;
                    if self.depth == 0 {
                        if let Some(done) = current.take() {
                            if !done.tokens.is_empty() {
                                lines.push(done);
                            }
                        }
                        at_line_start = true;
                    }
                }
                ' ' | '\t' | '\r' | '\x0c' => self.pos += 1,
                '#' => self.skip_to_newline(),
                '\\' => {
                    let next = self.peek_at(1);
                    if next == Some('\n') {
                        self.pos += 2;
                        self.line += 1;
                    } else if next == Some('\r') && self.peek_at(2) == Some('\n') {
                        self.pos += 3;
                        self.line += 1;
                    } else {
                        return Err(self.lex_error("stray backslash"));
                    }
                }
                '"' | '\'' => {
                    self.string(c)?;
                    push(&mut current, Raw::Str);
                }
                c if c.is_ascii_digit() => {
                    self.number();
                    push(&mut current, Raw::Number);
                }
                '.' if self.peek_at(1).is_some_and(|d| d.is_ascii_digit()) => {
                    self.number();
                    push(&mut current, Raw::Number);
                }
                c if is_name_start(c) => {
                    let start = self.pos;
                    while self.peek().is_some_and(is_name_char) {
                        self.pos += 1;
                    }
                    let name: String = self.chars[start..self.pos].iter().collect();
                    let quote = self.peek().filter(|q| *q == '"' || *q == '\'');
                    match quote {
                        Some(q) if STRING_PREFIXES.contains(&name.to_ascii_lowercase().as_str()) => {
                            self.string(q)?;
                            push(&mut current, Raw::Str);
                        }
                        _ => push(&mut current, Raw::Name(name)),
                    }
                }
                '(' | '[' | '{' => {
                    self.pos += 1;
                    self.depth += 1;
                    push(&mut current, Raw::Open(c));
                }
                ')' | ']' | '}' => {
                    self.pos += 1;
                    if self.depth == 0 {
                        self.warnings
                            .push(format!("line {}: unmatched closing `{c}`", self.line));
                    } else {
                        self.depth -= 1;
                    }
                    push(&mut current, Raw::Close(c));
                }
                _ => {
                    let op = OPERATORS
                        .iter()
                        .find(|op| op.chars().enumerate().all(|(i, oc)| self.peek_at(i) == Some(oc)));
                    match op {
                        Some(op) => {
                            self.pos += op.chars().count();
                            push(&mut current, Raw::Op(op));
                        }
                        None => {
                            return Err(self.lex_error(format!("unexpected character {c:?}")));
                        }
                    }
                }
            }
        }

        if self.depth > 0 {
            self.warnings
                .push(format!("{} unclosed bracket(s) at end of input", self.depth));
        }
        if let Some(done) = current.take() {
            if !done.tokens.is_empty() {
                lines.push(done);
            }
        }
        Ok(lines)
    }

    fn measure_indent(&mut self) -> usize {
        let mut cols = 0;
        while let Some(c) = self.peek() {
            match c {
                ' ' => cols += 1,
                '\t' => cols += self.tab_width,
                '\x0c' => cols = 0,
                _ => break,
            }
            self.pos += 1;
        }
        cols
    }

    fn skip_to_newline(&mut self) {
        while let Some(c) = self.peek() {
            if c == '\n' {
                break;
            }
            self.pos += 1;
        }
    }

    fn number(&mut self) {
        let hex = self.peek() == Some('0') && matches!(self.peek_at(1), Some('x' | 'X'));
        let mut prev = '\0';
        while let Some(c) = self.peek() {
            let sign_in_exponent = (c == '+' || c == '-') && !hex && matches!(prev, 'e' | 'E');
            if c.is_ascii_alphanumeric() || c == '_' || c == '.' || sign_in_exponent {
                // `1..` never occurs in Python, but `x[1:2]`-style neighbours must stay out.
                if c == '.' && self.peek_at(1) == Some('.') {
                    break;
                }
                prev = c;
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    /// Consumes a string literal starting at the opening quote.
    fn string(&mut self, quote: char) -> Result<()> {
        let triple = self.peek_at(1) == Some(quote) && self.peek_at(2) == Some(quote);
        let start_line = self.line;
        if triple {
            self.pos += 3;
            loop {
                match self.peek() {
                    None => {
                        self.warnings
                            .push(format!("line {start_line}: unterminated triple-quoted string"));
                        return Ok(());
                    }
                    Some('\\') => {
                        if self.peek_at(1) == Some('\n') {
                            self.line += 1;
                        }
                        self.pos += 2;
                    }
                    Some('\n') => {
                        self.line += 1;
                        self.pos += 1;
                    }
                    Some(c) if c == quote && self.peek_at(1) == Some(quote) && self.peek_at(2) == Some(quote) => {
                        self.pos += 3;
                        return Ok(());
                    }
                    Some(_) => self.pos += 1,
                }
            }
        }

        self.pos += 1;
        loop {
            match self.peek() {
                None | Some('\n') => {
                    self.warnings
                        .push(format!("line {start_line}: unterminated string literal"));
                    return Ok(());
                }
                Some('\\') => {
                    if self.peek_at(1) == Some('\n') {
                        self.line += 1;
                    }
                    self.pos += 2;
                }
                Some(c) if c == quote => {
                    self.pos += 1;
                    return Ok(());
                }
                Some(_) => self.pos += 1,
            }
        }
    }
}

fn push(current: &mut Option<LogicalLine>, raw: Raw) {
    if let Some(line) = current.as_mut() {
        line.tokens.push(raw);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lines(text: &str) -> Vec<LogicalLine> {
        lex("t", text, 4).unwrap().lines
    }

    #[test]
    fn brackets_join_physical_lines() {
        let l = lines("x = [1,\n     2]\ny = 3\n");
        assert_eq!(l.len(), 2);
        assert_eq!(l[0].line, 1);
        assert_eq!(l[1].line, 3);
    }

    #[test]
    fn backslash_continuation() {
        let l = lines("x = 1 + \\\n    2\n");
        assert_eq!(l.len(), 1);
        assert_eq!(l[0].indent_cols, 0);
    }

    #[test]
    fn comments_and_blank_lines_skipped() {
        let l = lines("# head\n\n    \nx = 1  # trailing\n");
        assert_eq!(l.len(), 1);
        assert_eq!(l[0].tokens, vec![Raw::Name("x".into()), Raw::Op("="), Raw::Number]);
    }

    #[test]
    fn string_prefixes_and_triple_quotes() {
        let l = lines("s = f'{x}' + rb\"\\x00\"\nt = '''a\nb'''\nu = 1\n");
        assert_eq!(l.len(), 3);
        assert_eq!(l[0].tokens[2], Raw::Str);
        assert_eq!(l[0].tokens[4], Raw::Str);
        assert_eq!(l[2].line, 4);
    }

    #[test]
    fn numbers() {
        for src in ["1", "1.5", ".5", "1e-3", "0xFF", "1_000", "3j", "2.5E+10"] {
            let l = lines(src);
            assert_eq!(l[0].tokens, vec![Raw::Number], "{src}");
        }
    }

    #[test]
    fn tabs_expand() {
        let l = lines("if x:\n\ty = 1\n");
        assert_eq!(l[1].indent_cols, 4);
    }

    #[test]
    fn unbalanced_brackets_are_flagged() {
        let out = lex("t", "x = (1, 2\n", 4).unwrap();
        assert_eq!(out.lines.len(), 1);
        assert_eq!(out.warnings.len(), 1);
        let out = lex("t", "x = 1)\n", 4).unwrap();
        assert_eq!(out.warnings.len(), 1);
    }

    #[test]
    fn untokenizable_input() {
        let err = lex("t", "x = 1\ny = $z\n", 4).err().unwrap();
        match err {
            Error::Lex { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
    }
}
