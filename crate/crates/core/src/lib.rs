//! Understandability metrics for Java source files.
//!
//! The crate provides:
//!
//! - a Java 8 syntax frontend ([`syntax`]): lexer, parser, and structural
//!   queries;
//! - base cognitive complexity ([`cognitive`]);
//! - a decompilation-aware extension with six extra increment rules and the
//!   matching code-pattern detectors ([`ccd`]);
//! - token-level n-gram language models and perplexity ([`ngram`]);
//! - relative-understandability classification of (decompiled, original)
//!   score pairs, threshold tuning, and evaluation ([`classify`]).
//!
//! All analysis types are immutable once built and safe to share across
//! threads; scoring functions are pure.

pub mod ccd;
pub mod classify;
pub mod cognitive;
pub mod ngram;
pub mod span;
pub mod syntax;

pub use span::{Pos, Span};
pub use syntax::SyntaxUnit;
