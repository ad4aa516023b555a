//! Base cognitive complexity.
//!
//! Follows the published SonarSource methodology
//! (<https://www.sonarsource.com/docs/CognitiveComplexity.pdf>): structures
//! that break the linear flow (`if`, `else if`, `else`, ternary, `switch`,
//! loops, `catch`, labeled jumps) each cost one; structures that also nest
//! additionally cost their nesting depth; each new run of like logical
//! operators costs one. Structures that merely organize code (method
//! declarations, plain blocks, lambdas) cost nothing.
//!
//! The recursion-cycle increment of the original definition is omitted: this
//! crate performs no symbol resolution, so call graphs are unavailable.
//!
//! A file score is the sum over all method-like units (methods, constructors,
//! initializer blocks, and a per-type pseudo-unit for field initializers when
//! they contain scored constructs).

use crate::span::Span;
use crate::syntax::nesting::{walk_unit, StructureKind, StructureSink};
use crate::syntax::SyntaxUnit;
use serde::Serialize;

/// Why an increment was charged.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum IncrementReason {
    If,
    ElseIf,
    Else,
    Ternary,
    Switch,
    For,
    ForEach,
    While,
    DoWhile,
    Catch,
    LabeledBreak,
    LabeledContinue,
    LogicalOperatorRun,
}

/// One ledger entry: where, why, and how much.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Increment {
    pub span: Span,
    pub reason: IncrementReason,
    pub amount: u64,
}

/// Score for one method-like unit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MethodScore {
    pub name: String,
    pub span: Span,
    pub total: u64,
    pub increments: Vec<Increment>,
}

/// File-level cognitive complexity with a replayable increment ledger.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CcBreakdown {
    pub methods: Vec<MethodScore>,
    pub file_total: u64,
}

impl CcBreakdown {
    /// Sum of the ledger; equals `file_total` by construction and is used by
    /// tests to audit the breakdown.
    pub fn replay_total(&self) -> u64 {
        self.methods
            .iter()
            .flat_map(|m| &m.increments)
            .map(|i| i.amount)
            .sum()
    }
}

struct CcSink {
    methods: Vec<MethodScore>,
    current: Option<MethodScore>,
}

impl CcSink {
    fn push(&mut self, span: Span, reason: IncrementReason, amount: u64) {
        if let Some(m) = self.current.as_mut() {
            m.total += amount;
            m.increments.push(Increment {
                span,
                reason,
                amount,
            });
        }
    }
}

impl StructureSink for CcSink {
    fn begin_unit(&mut self, name: &str, span: Span) {
        self.current = Some(MethodScore {
            name: name.to_string(),
            span,
            total: 0,
            increments: Vec::new(),
        });
    }

    fn end_unit(&mut self) {
        if let Some(m) = self.current.take() {
            // Field-initializer pseudo-units only appear when they scored.
            if m.total > 0 || !m.name.ends_with(".<fields>") {
                self.methods.push(m);
            }
        }
    }

    fn structure(&mut self, kind: StructureKind, span: Span, nesting: u32) {
        let (reason, amount) = match kind {
            StructureKind::If => (IncrementReason::If, 1 + nesting as u64),
            StructureKind::ElseIf => (IncrementReason::ElseIf, 1),
            StructureKind::Else => (IncrementReason::Else, 1),
            StructureKind::Ternary => (IncrementReason::Ternary, 1 + nesting as u64),
            StructureKind::Switch => (IncrementReason::Switch, 1 + nesting as u64),
            StructureKind::For => (IncrementReason::For, 1 + nesting as u64),
            StructureKind::ForEach => (IncrementReason::ForEach, 1 + nesting as u64),
            StructureKind::While => (IncrementReason::While, 1 + nesting as u64),
            StructureKind::DoWhile => (IncrementReason::DoWhile, 1 + nesting as u64),
            StructureKind::Catch => (IncrementReason::Catch, 1 + nesting as u64),
            StructureKind::MethodLike => return,
        };
        self.push(span, reason, amount);
    }

    fn labeled_jump(&mut self, is_break: bool, span: Span) {
        let reason = if is_break {
            IncrementReason::LabeledBreak
        } else {
            IncrementReason::LabeledContinue
        };
        self.push(span, reason, 1);
    }

    fn logical_operator(&mut self, _op: crate::syntax::ast::BinaryOp, starts_run: bool, span: Span) {
        if starts_run {
            self.push(span, IncrementReason::LogicalOperatorRun, 1);
        }
    }
}

/// Compute cognitive complexity per method and for the whole file.
pub fn cognitive_complexity(unit: &SyntaxUnit) -> CcBreakdown {
    let mut sink = CcSink {
        methods: Vec::new(),
        current: None,
    };
    walk_unit(unit, &mut sink);
    let file_total = sink.methods.iter().map(|m| m.total).sum();
    CcBreakdown {
        methods: sink.methods,
        file_total,
    }
}
