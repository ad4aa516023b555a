//! Java syntax frontend: lexer, parser, and structural queries.
//!
//! Parsing is stateless per file. A [`SyntaxUnit`] is immutable after
//! construction and safe to share across threads.

pub mod ast;
pub mod lexer;
pub(crate) mod nesting;
pub mod parser;
pub mod token;

pub use lexer::{lex, lex_full, numeric_literal_value, LexError, LexOutput};
pub use nesting::nesting_depth;
pub use parser::{parse_compilation_unit, ParseError};
pub use token::{Token, TokenKind};

use crate::span::Span;
use ast::CompilationUnit;

/// One physical line of source.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceLine {
    /// Raw text without the trailing newline.
    pub text: String,
    /// Length of the raw text in bytes.
    pub byte_len: usize,
    /// Character count after removing comments and trailing whitespace.
    /// Long-line scoring uses this so that explanatory comments cannot
    /// affect a score.
    pub effective_len: usize,
}

/// A parsed Java compilation unit together with its source lines.
#[derive(Debug, Clone, PartialEq)]
pub struct SyntaxUnit {
    pub path: String,
    pub root: CompilationUnit,
    pub source_lines: Vec<SourceLine>,
}

impl SyntaxUnit {
    /// Parse UTF-8 Java source. Returns the first offending position on
    /// malformed input; never a partial tree.
    pub fn parse(path: impl Into<String>, source: &str) -> Result<SyntaxUnit, ParseError> {
        let lexed = lex_full(source).map_err(|e| ParseError {
            line: e.line,
            col: e.col,
            message: e.message,
        })?;
        let eof = parser::end_of_source(source);
        let mut p = parser::Parser::new(lexed.tokens, eof);
        let root = p.parse_compilation_unit()?;
        let source_lines = build_source_lines(source, &lexed.comments);
        Ok(SyntaxUnit {
            path: path.into(),
            root,
            source_lines,
        })
    }

    /// Parse source that has no meaningful path.
    pub fn parse_str(source: &str) -> Result<SyntaxUnit, ParseError> {
        Self::parse("<memory>", source)
    }
}

fn build_source_lines(source: &str, comments: &[Span]) -> Vec<SourceLine> {
    source
        .split('\n')
        .enumerate()
        .map(|(i, raw)| {
            let line_no = (i + 1) as u32;
            let text = raw.strip_suffix('\r').unwrap_or(raw);
            let chars: Vec<char> = text.chars().collect();
            let total = chars.len() as u32;
            // Mask out columns covered by comments on this line.
            let mut keep: Vec<bool> = vec![true; chars.len()];
            for span in comments {
                if span.start.line > line_no || span.end.line < line_no {
                    continue;
                }
                let from = if span.start.line == line_no {
                    span.start.col
                } else {
                    1
                };
                let to = if span.end.line == line_no {
                    span.end.col
                } else {
                    total + 1
                };
                for col in from..to.min(total + 1) {
                    if col >= 1 {
                        keep[(col - 1) as usize] = false;
                    }
                }
            }
            let stripped: String = chars
                .iter()
                .zip(&keep)
                .filter_map(|(c, k)| k.then_some(*c))
                .collect();
            SourceLine {
                byte_len: text.len(),
                effective_len: stripped.trim_end().chars().count(),
                text: text.to_string(),
            }
        })
        .collect()
}
