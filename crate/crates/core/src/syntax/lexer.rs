//! Java lexer.
//!
//! Produces a comment-free token stream. Comments are recorded separately as
//! spans so callers can compute comment-stripped line lengths; line comments,
//! block comments and javadoc are all dropped from the stream. String and
//! character literals are kept verbatim as single tokens.

use crate::span::{Pos, Span};
use crate::syntax::token::{is_keyword, Token, TokenKind};
use thiserror::Error;

/// Lexical error with the first offending position.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("lex error at {line}:{col}: {message}")]
pub struct LexError {
    pub line: u32,
    pub col: u32,
    pub message: String,
}

#[derive(Debug)]
pub struct LexOutput {
    pub tokens: Vec<Token>,
    /// Spans of comments in source order.
    pub comments: Vec<Span>,
}

/// Multi-character operators and separators, longest first so that maximal
/// munch falls out of a linear scan.
const MULTI: &[&str] = &[
    ">>>=", "<<=", ">>=", ">>>", "...", "->", "::", "==", ">=", "<=", "!=", "&&", "||", "++",
    "--", "+=", "-=", "*=", "/=", "&=", "|=", "^=", "%=", "<<", ">>",
];

const SEPARATOR_CHARS: &[char] = &['(', ')', '{', '}', '[', ']', ';', ',', '.', '@'];

fn is_ident_start(c: char) -> bool {
    c == '_' || c == '$' || c.is_alphabetic()
}

fn is_ident_part(c: char) -> bool {
    c == '_' || c == '$' || c.is_alphanumeric()
}

struct Lexer {
    chars: Vec<char>,
    idx: usize,
    line: u32,
    col: u32,
}

impl Lexer {
    fn new(src: &str) -> Self {
        Lexer {
            chars: src.chars().collect(),

            idx: 0,
            line: 1,
            col: 1,
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.idx).copied()
    }

    fn peek_at(&self, offset: usize) -> Option<char> {
        self.chars.get(self.idx + offset).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.idx += 1;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn pos(&self) -> Pos {
        Pos::new(self.line, self.col)
    }

    fn error(&self, message: impl Into<String>) -> LexError {
        LexError {
            line: self.line,
            col: self.col,
            message: message.into(),
        }
    }

    fn starts_with(&self, pat: &str) -> bool {
        pat.chars()
            .enumerate()
            .all(|(i, c)| self.peek_at(i) == Some(c))
    }

    fn take(&mut self, n: usize) -> String {
        let mut out = String::new();
        for _ in 0..n {
            if let Some(c) = self.bump() {
                out.push(c);
            }
        }
        out
    }

    fn run(mut self) -> Result<LexOutput, LexError> {
        let mut tokens = Vec::new();
        let mut comments = Vec::new();
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.bump();
                continue;
            }
            if self.starts_with("//") {
                let start = self.pos();
                while let Some(c) = self.peek() {
                    if c == '\n' {
                        break;
                    }
                    self.bump();
                }
                comments.push(Span::new(start, self.pos()));
                continue;
            }
            if self.starts_with("/*") {
                let start = self.pos();
                self.take(2);
                loop {
                    if self.starts_with("*/") {
                        self.take(2);
                        break;
                    }
                    if self.bump().is_none() {
                        return Err(LexError {
                            line: start.line,
                            col: start.col,
                            message: "unterminated block comment".to_string(),
                        });
                    }
                }
                comments.push(Span::new(start, self.pos()));
                continue;
            }
            let start = self.pos();
            let token = self.next_token(c, start)?;
            tokens.push(token);
        }
        Ok(LexOutput { tokens, comments })
    }

    fn next_token(&mut self, c: char, start: Pos) -> Result<Token, LexError> {
        if is_ident_start(c) {
            let mut text = String::new();
            while let Some(c) = self.peek() {
                if !is_ident_part(c) {
                    break;
                }
                text.push(c);
                self.bump();
            }
            let kind = if text == "true" || text == "false" || text == "null" {
                TokenKind::BoolOrNullLiteral
            } else if is_keyword(&text) {
                TokenKind::Keyword
            } else {
                TokenKind::Identifier
            };
            return Ok(self.token(kind, text, start));
        }
        if c.is_ascii_digit() || (c == '.' && self.peek_at(1).is_some_and(|d| d.is_ascii_digit()))
        {
            let text = self.lex_number();
            return Ok(self.token(TokenKind::NumericLiteral, text, start));
        }
        if c == '"' {
            let text = self.lex_quoted('"', "string literal")?;
            return Ok(self.token(TokenKind::StringLiteral, text, start));
        }
        if c == '\'' {
            let text = self.lex_quoted('\'', "char literal")?;
            return Ok(self.token(TokenKind::CharLiteral, text, start));
        }
        for pat in MULTI {
            if self.starts_with(pat) {
                let text = self.take(pat.len());
                let kind = if *pat == "::" || *pat == "..." {
                    TokenKind::Separator
                } else {
                    TokenKind::Operator
                };
                return Ok(self.token(kind, text, start));
            }
        }
        if SEPARATOR_CHARS.contains(&c) {
            self.bump();
            return Ok(self.token(TokenKind::Separator, c.to_string(), start));
        }
        if "+-*/%=<>!&|^~?:".contains(c) {
            self.bump();
            return Ok(self.token(TokenKind::Operator, c.to_string(), start));
        }
        Err(self.error(format!("unexpected character '{c}'")))
    }

    fn token(&self, kind: TokenKind, text: String, start: Pos) -> Token {
        Token {
            kind,
            text,
            line: start.line,
            col: start.col,
        }
    }

    fn lex_number(&mut self) -> String {
        let mut text = String::new();
        let push = |lexer: &mut Self, out: &mut String| {
            if let Some(c) = lexer.bump() {
                out.push(c);
            }
        };
        if self.starts_with("0x") || self.starts_with("0X") {
            push(self, &mut text);
            push(self, &mut text);
            while let Some(c) = self.peek() {
                if c.is_ascii_hexdigit() || c == '_' || c == '.' {
                    push(self, &mut text);
                } else if (c == 'p' || c == 'P')
                    && self
                        .peek_at(1)
                        .is_some_and(|d| d.is_ascii_digit() || d == '+' || d == '-')
                {
                    push(self, &mut text);
                    if matches!(self.peek(), Some('+') | Some('-')) {
                        push(self, &mut text);
                    }
                } else {
                    break;
                }
            }
        } else if self.starts_with("0b") || self.starts_with("0B") {
            push(self, &mut text);
            push(self, &mut text);
            while matches!(self.peek(), Some('0') | Some('1') | Some('_')) {
                push(self, &mut text);
            }
        } else {
            let mut seen_dot = false;
            while let Some(c) = self.peek() {
                if c.is_ascii_digit() || c == '_' {
                    push(self, &mut text);
                } else if c == '.' && !seen_dot && !text.ends_with(['e', 'E']) {
                    // A trailing `.` only belongs to the number when it is part
                    // of a floating point literal, not a method call like `1.toString()`
                    // (not valid Java anyway) or a range-looking construct.
                    seen_dot = true;
                    push(self, &mut text);
                } else if (c == 'e' || c == 'E')
                    && self
                        .peek_at(1)
                        .is_some_and(|d| d.is_ascii_digit() || d == '+' || d == '-')
                {
                    push(self, &mut text);
                    if matches!(self.peek(), Some('+') | Some('-')) {
                        push(self, &mut text);
                    }
                } else {
                    break;
                }
            }
        }
        // Type suffix.
        if let Some(c) = self.peek() {
            if matches!(c, 'l' | 'L' | 'f' | 'F' | 'd' | 'D') {
                if let Some(c) = self.bump() {
                    text.push(c);
                }
            }
        }
        text
    }

    fn lex_quoted(&mut self, quote: char, what: &str) -> Result<String, LexError> {
        let mut text = String::new();
        let start_line = self.line;
        let start_col = self.col;
        text.push(self.bump().expect("quote present"));
        loop {
            match self.peek() {
                None | Some('\n') => {
                    return Err(LexError {
                        line: start_line,
                        col: start_col,
                        message: format!("unterminated {what}"),
                    });
                }
                Some('\\') => {
                    text.push(self.bump().expect("backslash"));
                    if let Some(c) = self.bump() {
                        text.push(c);
                    }
                }
                Some(c) if c == quote => {
                    text.push(self.bump().expect("closing quote"));
                    return Ok(text);
                }
                Some(_) => {
                    text.push(self.bump().expect("char"));
                }
            }
        }
    }
}

/// Lex Java source into tokens plus the comment spans that were stripped.
pub fn lex_full(source: &str) -> Result<LexOutput, LexError> {
    Lexer::new(source).run()
}

/// Lex Java source into a comment-free token stream.
pub fn lex(source: &str) -> Result<Vec<Token>, LexError> {
    lex_full(source).map(|out| out.tokens)
}

/// Numeric value of a Java numeric literal, for literal classification.
///
/// Underscores and type suffixes are ignored; hex, octal and binary forms are
/// converted. Returns `None` for malformed text.
pub fn numeric_literal_value(text: &str) -> Option<f64> {
    let cleaned: String = text.chars().filter(|c| *c != '_').collect();
    let trimmed = cleaned
        .strip_suffix(['l', 'L', 'f', 'F', 'd', 'D'])
        .unwrap_or(&cleaned);
    if trimmed.is_empty() {
        return None;
    }
    let lower = trimmed.to_ascii_lowercase();
    if let Some(hex) = lower.strip_prefix("0x") {
        if lower.contains('p') || lower.contains('.') {
            // Hexadecimal floating point; no subject code uses it, parse loosely.
            return None;
        }
        return i128::from_str_radix(hex, 16).ok().map(|v| v as f64);
    }
    if let Some(bin) = lower.strip_prefix("0b") {
        return i128::from_str_radix(bin, 2).ok().map(|v| v as f64);
    }
    if trimmed.len() > 1
        && trimmed.starts_with('0')
        && trimmed.chars().all(|c| c.is_ascii_digit())
    {
        return i128::from_str_radix(trimmed, 8).ok().map(|v| v as f64);
    }
    trimmed.parse::<f64>().ok()
}
