//! Lexical tokens.

use crate::span::{Pos, Span};
use serde::Serialize;

/// Token categories, following the Java lexical grammar.
///
/// `true`, `false` and `null` are classified as literals rather than
/// keywords. Comments never appear in the token stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TokenKind {
    Identifier,
    Keyword,
    Operator,
    Separator,
    NumericLiteral,
    StringLiteral,
    CharLiteral,
    BoolOrNullLiteral,
}

/// One lexical token with its original text and position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub text: String,
    /// 1-based line of the first character.
    pub line: u32,
    /// 1-based column (in characters) of the first character.
    pub col: u32,
}

impl Token {
    pub fn start(&self) -> Pos {
        Pos::new(self.line, self.col)
    }

    /// Position one past the last character. Tokens never span lines.
    pub fn end(&self) -> Pos {
        Pos::new(self.line, self.col + self.text.chars().count() as u32)
    }

    pub fn span(&self) -> Span {
        Span::new(self.start(), self.end())
    }

    pub fn is(&self, kind: TokenKind, text: &str) -> bool {
        self.kind == kind && self.text == text
    }
}

pub(crate) const KEYWORDS: &[&str] = &[
    "abstract", "assert", "boolean", "break", "byte", "case", "catch", "char", "class", "const",
    "continue", "default", "do", "double", "else", "enum", "extends", "final", "finally", "float",
    "for", "goto", "if", "implements", "import", "instanceof", "int", "interface", "long",
    "native", "new", "package", "private", "protected", "public", "return", "short", "static",
    "strictfp", "super", "switch", "synchronized", "this", "throw", "throws", "transient", "try",
    "void", "volatile", "while",
];

pub(crate) fn is_keyword(text: &str) -> bool {
    KEYWORDS.binary_search(&text).is_ok()
}
