//! Decompilation-aware cognitive complexity and code-pattern detection.
//!
//! Extends the base score with six increment rules aimed at shapes that
//! mechanically generated Java tends to exhibit:
//!
//! - **R1** (+3): a nesting-incrementing structure at nesting depth 3 or more.
//! - **R2** (+3): an unparenthesized operand whose operator belongs to a
//!   different precedence class than its parent operator. Runs of the common
//!   arithmetic operators and idiomatic boolean composition (relational,
//!   equality, `&&`, `||`, ternary) are exempt; everything involving shifts
//!   or bitwise operators fires.
//! - **R3** (+⌊len/limit⌋): a physical line longer than the limit (default
//!   120 characters), measured after comment stripping.
//! - **R4** (+4): an `if`/`else`/`for`/`while`/`do` body without braces.
//!   `else if` continues a chain and is exempt.
//! - **R5** (+4): an assignment nested inside a larger expression rather
//!   than standing alone as a statement (or `for` init/update).
//! - **R6** (+1): a numeric literal other than -1, 0, 1 inside method code.
//!   Field initializers are constant definitions and do not fire.
//!
//! The pattern detectors report the same sites diagnostically: P2, P4, P5
//! and P6 coincide with R2/R4/R5/R6 sites, P3 with R3 lines. P1 flags
//! conditional or loop statements whose block-structure depth reaches 3,
//! where an `else` block opens a level of its own and `else if` chains stay
//! flat; this is a structural notion distinct from the R1 nesting counter.

use crate::cognitive::{cognitive_complexity, CcBreakdown};
use crate::span::{Pos, Span};
use crate::syntax::ast::*;
use crate::syntax::nesting::{walk_unit, StructureKind, StructureSink};
use crate::syntax::{numeric_literal_value, SyntaxUnit};
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};

/// Tunables for the extended rules.
#[derive(Debug, Clone)]
pub struct CcdConfig {
    /// Lines strictly longer than this fire R3/P3.
    pub long_line_threshold: usize,
}

impl Default for CcdConfig {
    fn default() -> Self {
        CcdConfig {
            long_line_threshold: 120,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum RuleId {
    R1,
    R2,
    R3,
    R4,
    R5,
    R6,
}

impl std::fmt::Display for RuleId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RuleIncrement {
    pub rule: RuleId,
    pub span: Span,
    pub amount: u64,
}

/// Extended score: base breakdown plus the rule ledger.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CcdBreakdown {
    pub base: CcBreakdown,
    pub rule_increments: Vec<RuleIncrement>,
    pub file_total: u64,
}

impl CcdBreakdown {
    pub fn rule_total(&self, rule: RuleId) -> u64 {
        self.rule_increments
            .iter()
            .filter(|r| r.rule == rule)
            .map(|r| r.amount)
            .sum()
    }

    pub fn rule_sites(&self, rule: RuleId) -> Vec<Span> {
        self.rule_increments
            .iter()
            .filter(|r| r.rule == rule)
            .map(|r| r.span)
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum PatternId {
    P1,
    P2,
    P3,
    P4,
    P5,
    P6,
}

impl std::fmt::Display for PatternId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{self:?}")
    }
}

impl std::str::FromStr for PatternId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "P1" => Ok(PatternId::P1),
            "P2" => Ok(PatternId::P2),
            "P3" => Ok(PatternId::P3),
            "P4" => Ok(PatternId::P4),
            "P5" => Ok(PatternId::P5),
            "P6" => Ok(PatternId::P6),
            _ => Err(format!("unknown pattern id '{s}'")),
        }
    }
}

pub const ALL_PATTERNS: [PatternId; 6] = [
    PatternId::P1,
    PatternId::P2,
    PatternId::P3,
    PatternId::P4,
    PatternId::P5,
    PatternId::P6,
];

/// Pattern occurrences for one file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PatternReport {
    pub per_pattern: BTreeMap<PatternId, Vec<Span>>,
}

impl PatternReport {
    /// Patterns with at least one location.
    pub fn present(&self) -> BTreeSet<PatternId> {
        self.per_pattern
            .iter()
            .filter(|(_, sites)| !sites.is_empty())
            .map(|(p, _)| *p)
            .collect()
    }

    pub fn is_present(&self, pattern: PatternId) -> bool {
        self.per_pattern
            .get(&pattern)
            .is_some_and(|sites| !sites.is_empty())
    }

    pub fn sites(&self, pattern: PatternId) -> &[Span] {
        self.per_pattern
            .get(&pattern)
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }
}

// ---- R1: deep nesting --------------------------------------------------------

struct DeepNesting {
    sites: Vec<Span>,
}

impl StructureSink for DeepNesting {
    fn structure(&mut self, kind: StructureKind, span: Span, nesting: u32) {
        if kind.nests() && nesting >= 3 {
            self.sites.push(span);
        }
    }
}

// ---- R2/R5/R6: expression rules ----------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum OpClass {
    Additive,
    Multiplicative,
    Shift,
    Relational,
    Equality,
    BitAnd,
    BitXor,
    BitOr,
    LogAnd,
    LogOr,
    Ternary,
}

impl OpClass {
    fn of(op: BinaryOp) -> OpClass {
        use BinaryOp::*;
        match op {
            Add | Sub => OpClass::Additive,
            Mul | Div | Rem => OpClass::Multiplicative,
            Shl | Shr | UShr => OpClass::Shift,
            Lt | Gt | Le | Ge => OpClass::Relational,
            Eq | Ne => OpClass::Equality,
            BitAnd => OpClass::BitAnd,
            BitXor => OpClass::BitXor,
            BitOr => OpClass::BitOr,
            AndAnd => OpClass::LogAnd,
            OrOr => OpClass::LogOr,
        }
    }

    fn is_boolean(self) -> bool {
        matches!(
            self,
            OpClass::Relational | OpClass::Equality | OpClass::LogAnd | OpClass::LogOr | OpClass::Ternary
        )
    }

    fn is_arithmetic(self) -> bool {
        matches!(self, OpClass::Additive | OpClass::Multiplicative)
    }
}

fn mixed_without_parens(parent: OpClass, child: OpClass) -> bool {
    if parent == child {
        return false;
    }
    if parent.is_boolean() && child.is_boolean() {
        return false;
    }
    if parent.is_arithmetic() && child.is_arithmetic() {
        return false;
    }
    true
}

#[derive(Debug, Clone, Copy)]
struct ExprCtx {
    /// Inside a method, constructor, initializer block, or lambda body.
    in_method: bool,
    /// Root of an expression statement or `for` init/update: a bare
    /// assignment here is not inlined.
    statement_pos: bool,
}

struct ExprRules {
    mixed_ops: Vec<Span>,
    inline_assigns: Vec<Span>,
    literals: Vec<Span>,
}

impl ExprRules {
    fn operator_class(expr: &Expr) -> Option<OpClass> {
        match expr {
            Expr::Binary { op, .. } => Some(OpClass::of(*op)),
            Expr::Ternary { .. } => Some(OpClass::Ternary),
            _ => None,
        }
    }

    fn check_pair(&mut self, parent: OpClass, child: &Expr) {
        if let Some(child_class) = Self::operator_class(child) {
            if mixed_without_parens(parent, child_class) {
                self.mixed_ops.push(child.span());
            }
        }
    }

    fn literal(&mut self, text: &str, negated: bool, span: Span, ctx: ExprCtx) {
        if !ctx.in_method {
            return;
        }
        let Some(value) = numeric_literal_value(text) else {
            return;
        };
        let value = if negated { -value } else { value };
        if value != -1.0 && value != 0.0 && value != 1.0 {
            self.literals.push(span);
        }
    }

    fn walk(&mut self, expr: &Expr, ctx: ExprCtx) {
        let inner = ExprCtx {
            statement_pos: false,
            ..ctx
        };
        match expr {
            Expr::Binary { op, lhs, rhs, .. } => {
                let class = OpClass::of(*op);
                self.check_pair(class, lhs);
                self.check_pair(class, rhs);
                self.walk(lhs, inner);
                self.walk(rhs, inner);
            }
            Expr::Ternary {
                condition,
                then_value,
                else_value,
                ..
            } => {
                for child in [condition, then_value, else_value] {
                    self.check_pair(OpClass::Ternary, child);
                    self.walk(child, inner);
                }
            }
            Expr::Assign {
                target,
                value,
                span,
                ..
            } => {
                if !ctx.statement_pos {
                    self.inline_assigns.push(*span);
                }
                self.walk(target, inner);
                self.walk(value, inner);
            }
            Expr::Unary {
                op: UnaryOp::Minus,
                operand,
                span,
                ..
            } if matches!(
                operand.as_ref(),
                Expr::Literal {
                    kind: LiteralKind::Number,
                    ..
                }
            ) =>
            {
                if let Expr::Literal { text, .. } = operand.as_ref() {
                    self.literal(text, true, *span, ctx);
                }
            }
            Expr::Unary { operand, .. } => self.walk(operand, inner),
            Expr::Paren { inner: e, .. } => self.walk(e, inner),
            Expr::Literal {
                kind: LiteralKind::Number,
                text,
                span,
            } => self.literal(text, false, *span, ctx),
            Expr::Literal { .. } => {}
            Expr::Call { callee, args, .. } => {
                self.walk(callee, inner);
                for a in args {
                    self.walk(a, inner);
                }
            }
            Expr::New { args, body, .. } => {
                for a in args {
                    self.walk(a, inner);
                }
                if let Some(members) = body {
                    self.walk_members(members, ctx.in_method);
                }
            }
            Expr::NewArray { dims, init, .. } => {
                for d in dims {
                    self.walk(d, inner);
                }
                if let Some(i) = init {
                    self.walk(i, inner);
                }
            }
            Expr::ArrayInit { values, .. } => {
                for v in values {
                    self.walk(v, inner);
                }
            }
            Expr::Index { target, index, .. } => {
                self.walk(target, inner);
                self.walk(index, inner);
            }
            Expr::Cast { expr, .. } => self.walk(expr, inner),
            Expr::InstanceOf { expr, .. } => self.walk(expr, inner),
            Expr::Lambda { body, .. } => {
                let lambda_ctx = ExprCtx {
                    in_method: true,
                    statement_pos: false,
                };
                match body {
                    LambdaBody::Expr(e) => self.walk(e, lambda_ctx),
                    LambdaBody::Block(b) => self.walk_block(b, true),
                }
            }
            Expr::FieldAccess { target, .. } => self.walk(target, inner),
            Expr::MethodRef { target, .. } => {
                if let Some(t) = target {
                    self.walk(t, inner);
                }
            }
            Expr::Name { .. } | Expr::ClassLiteral { .. } | Expr::This { .. } | Expr::Super { .. } => {}
        }
    }

    fn walk_members(&mut self, members: &[Member], _enclosing_in_method: bool) {
        for member in members {
            match member {
                Member::Method(m) => {
                    if let Some(body) = &m.body {
                        self.walk_block(body, true);
                    }
                }
                Member::Initializer(init) => self.walk_block(&init.body, true),
                Member::Field(f) => {
                    for d in &f.declarators {
                        if let Some(e) = &d.init {
                            self.walk(
                                e,
                                ExprCtx {
                                    in_method: false,
                                    statement_pos: false,
                                },
                            );
                        }
                    }
                }
                Member::Type(t) => self.walk_members(&t.members, false),
                Member::EnumConstant(c) => {
                    for a in &c.args {
                        self.walk(
                            a,
                            ExprCtx {
                                in_method: false,
                                statement_pos: false,
                            },
                        );
                    }
                    if let Some(body) = &c.body {
                        self.walk_members(body, false);
                    }
                }
            }
        }
    }

    fn walk_block(&mut self, block: &Block, in_method: bool) {
        for stmt in &block.stmts {
            self.walk_stmt(stmt, in_method);
        }
    }

    fn walk_stmt(&mut self, stmt: &Stmt, in_method: bool) {
        let expr_ctx = ExprCtx {
            in_method,
            statement_pos: false,
        };
        let stmt_ctx = ExprCtx {
            in_method,
            statement_pos: true,
        };
        match stmt {
            Stmt::Block(b) => self.walk_block(b, in_method),
            Stmt::If(s) => {
                self.walk(&s.condition, expr_ctx);
                self.walk_stmt(&s.then_branch, in_method);
                if let Some(e) = &s.else_branch {
                    self.walk_stmt(e, in_method);
                }
            }
            Stmt::While(s) => {
                self.walk(&s.condition, expr_ctx);
                self.walk_stmt(&s.body, in_method);
            }
            Stmt::DoWhile(s) => {
                self.walk_stmt(&s.body, in_method);
                self.walk(&s.condition, expr_ctx);
            }
            Stmt::For(s) => {
                for init in &s.init {
                    match init {
                        Stmt::Expr { expr, .. } => self.walk(expr, stmt_ctx),
                        other => self.walk_stmt(other, in_method),
                    }
                }
                if let Some(c) = &s.condition {
                    self.walk(c, expr_ctx);
                }
                for u in &s.update {
                    self.walk(u, stmt_ctx);
                }
                self.walk_stmt(&s.body, in_method);
            }
            Stmt::ForEach(s) => {
                self.walk(&s.iterable, expr_ctx);
                self.walk_stmt(&s.body, in_method);
            }
            Stmt::Switch(s) => {
                self.walk(&s.scrutinee, expr_ctx);
                for arm in &s.arms {
                    for label in arm.labels.iter().flatten() {
                        self.walk(label, expr_ctx);
                    }
                    for st in &arm.stmts {
                        self.walk_stmt(st, in_method);
                    }
                }
            }
            Stmt::Try(s) => {
                for res in &s.resources {
                    for d in &res.declarators {
                        if let Some(e) = &d.init {
                            self.walk(e, expr_ctx);
                        }
                    }
                }
                self.walk_block(&s.body, in_method);
                for c in &s.catches {
                    self.walk_block(&c.body, in_method);
                }
                if let Some(f) = &s.finally {
                    self.walk_block(f, in_method);
                }
            }
            Stmt::Return { value, .. } => {
                if let Some(e) = value {
                    self.walk(e, expr_ctx);
                }
            }
            Stmt::Throw { value, .. } => self.walk(value, expr_ctx),
            Stmt::Labeled { body, .. } => self.walk_stmt(body, in_method),
            Stmt::Synchronized { lock, body, .. } => {
                self.walk(lock, expr_ctx);
                self.walk_block(body, in_method);
            }
            Stmt::Assert {
                condition, message, ..
            } => {
                self.walk(condition, expr_ctx);
                if let Some(m) = message {
                    self.walk(m, expr_ctx);
                }
            }
            Stmt::LocalVar(v) => {
                for d in &v.declarators {
                    if let Some(e) = &d.init {
                        self.walk(e, expr_ctx);
                    }
                }
            }
            Stmt::LocalType(t) => self.walk_members(&t.members, in_method),
            Stmt::Expr { expr, .. } => self.walk(expr, stmt_ctx),
            Stmt::Break { .. } | Stmt::Continue { .. } | Stmt::Empty { .. } => {}
        }
    }
}

// ---- R4: omitted braces -------------------------------------------------------

struct OmittedBraces {
    sites: Vec<Span>,
}

impl OmittedBraces {
    fn unbraced(stmt: &Stmt) -> bool {
        !matches!(stmt, Stmt::Block(_))
    }

    fn walk_stmt(&mut self, stmt: &Stmt) {
        match stmt {
            Stmt::Block(b) => {
                for s in &b.stmts {
                    self.walk_stmt(s);
                }
            }
            Stmt::If(s) => {
                if Self::unbraced(&s.then_branch) {
                    self.sites.push(s.then_branch.span());
                }
                self.walk_stmt(&s.then_branch);
                match s.else_branch.as_deref() {
                    // `else if` continues the chain and is idiomatic.
                    Some(Stmt::If(inner)) => self.walk_stmt(&Stmt::If(inner.clone())),
                    Some(other) => {
                        if Self::unbraced(other) {
                            self.sites.push(other.span());
                        }
                        self.walk_stmt(other);
                    }
                    None => {}
                }
            }
            Stmt::While(s) => {
                if Self::unbraced(&s.body) {
                    self.sites.push(s.body.span());
                }
                self.walk_stmt(&s.body);
            }
            Stmt::DoWhile(s) => {
                if Self::unbraced(&s.body) {
                    self.sites.push(s.body.span());
                }
                self.walk_stmt(&s.body);
            }
            Stmt::For(s) => {
                if Self::unbraced(&s.body) {
                    self.sites.push(s.body.span());
                }
                self.walk_stmt(&s.body);
            }
            Stmt::ForEach(s) => {
                if Self::unbraced(&s.body) {
                    self.sites.push(s.body.span());
                }
                self.walk_stmt(&s.body);
            }
            Stmt::Switch(s) => {
                for arm in &s.arms {
                    for st in &arm.stmts {
                        self.walk_stmt(st);
                    }
                }
            }
            Stmt::Try(s) => {
                for st in &s.body.stmts {
                    self.walk_stmt(st);
                }
                for c in &s.catches {
                    for st in &c.body.stmts {
                        self.walk_stmt(st);
                    }
                }
                if let Some(f) = &s.finally {
                    for st in &f.stmts {
                        self.walk_stmt(st);
                    }
                }
            }
            Stmt::Labeled { body, .. } => self.walk_stmt(body),
            Stmt::Synchronized { body, .. } => {
                for st in &body.stmts {
                    self.walk_stmt(st);
                }
            }
            Stmt::LocalType(t) => self.walk_members(&t.members),
            Stmt::Expr { expr, .. } => self.walk_expr(expr),
            Stmt::Return { value: Some(e), .. } => self.walk_expr(e),
            Stmt::Throw { value, .. } => self.walk_expr(value),
            Stmt::LocalVar(v) => {
                for d in &v.declarators {
                    if let Some(e) = &d.init {
                        self.walk_expr(e);
                    }
                }
            }
            _ => {}
        }
    }

    /// Statements can hide inside lambda and anonymous class bodies.
    fn walk_expr(&mut self, expr: &Expr) {
        match expr {
            Expr::Lambda { body, .. } => match body {
                LambdaBody::Block(b) => {
                    for s in &b.stmts {
                        self.walk_stmt(s);
                    }
                }
                LambdaBody::Expr(e) => self.walk_expr(e),
            },
            Expr::New { args, body, .. } => {
                for a in args {
                    self.walk_expr(a);
                }
                if let Some(members) = body {
                    self.walk_members(members);
                }
            }
            Expr::Binary { lhs, rhs, .. } => {
                self.walk_expr(lhs);
                self.walk_expr(rhs);
            }
            Expr::Assign { target, value, .. } => {
                self.walk_expr(target);
                self.walk_expr(value);
            }
            Expr::Ternary {
                condition,
                then_value,
                else_value,
                ..
            } => {
                self.walk_expr(condition);
                self.walk_expr(then_value);
                self.walk_expr(else_value);
            }
            Expr::Unary { operand, .. } => self.walk_expr(operand),
            Expr::Paren { inner, .. } => self.walk_expr(inner),
            Expr::Call { callee, args, .. } => {
                self.walk_expr(callee);
                for a in args {
                    self.walk_expr(a);
                }
            }
            Expr::NewArray { dims, init, .. } => {
                for d in dims {
                    self.walk_expr(d);
                }
                if let Some(i) = init {
                    self.walk_expr(i);
                }
            }
            Expr::ArrayInit { values, .. } => {
                for v in values {
                    self.walk_expr(v);
                }
            }
            Expr::Index { target, index, .. } => {
                self.walk_expr(target);
                self.walk_expr(index);
            }
            Expr::Cast { expr, .. } | Expr::InstanceOf { expr, .. } => self.walk_expr(expr),
            Expr::FieldAccess { target, .. } => self.walk_expr(target),
            Expr::MethodRef { target: Some(t), .. } => self.walk_expr(t),
            _ => {}
        }
    }

    fn walk_members(&mut self, members: &[Member]) {
        for member in members {
            match member {
                Member::Method(m) => {
                    if let Some(body) = &m.body {
                        for s in &body.stmts {
                            self.walk_stmt(s);
                        }
                    }
                }
                Member::Initializer(init) => {
                    for s in &init.body.stmts {
                        self.walk_stmt(s);
                    }
                }
                Member::Field(f) => {
                    for d in &f.declarators {
                        if let Some(e) = &d.init {
                            self.walk_expr(e);
                        }
                    }
                }
                Member::Type(t) => self.walk_members(&t.members),
                Member::EnumConstant(c) => {
                    for a in &c.args {
                        self.walk_expr(a);
                    }
                    if let Some(body) = &c.body {
                        self.walk_members(body);
                    }
                }
            }
        }
    }
}

// ---- P1: block-structure depth -------------------------------------------------

struct BlockDepth {
    sites: Vec<Span>,
}

impl BlockDepth {
    fn record(&mut self, span: Span, depth: u32) {
        if depth >= 3 {
            self.sites.push(span);
        }
    }

    fn walk_stmt(&mut self, stmt: &Stmt, depth: u32) {
        match stmt {
            Stmt::Block(b) => {
                for s in &b.stmts {
                    self.walk_stmt(s, depth);
                }
            }
            Stmt::If(s) => {
                self.record(s.span, depth + 1);
                self.walk_chain(s, depth);
            }
            Stmt::While(s) => {
                self.record(s.span, depth + 1);
                self.walk_expr(&s.condition, depth + 1);
                self.walk_stmt(&s.body, depth + 1);
            }
            Stmt::DoWhile(s) => {
                self.record(s.span, depth + 1);
                self.walk_stmt(&s.body, depth + 1);
                self.walk_expr(&s.condition, depth + 1);
            }
            Stmt::For(s) => {
                self.record(s.span, depth + 1);
                self.walk_stmt(&s.body, depth + 1);
            }
            Stmt::ForEach(s) => {
                self.record(s.span, depth + 1);
                self.walk_stmt(&s.body, depth + 1);
            }
            Stmt::Switch(s) => {
                self.record(s.span, depth + 1);
                for arm in &s.arms {
                    for st in &arm.stmts {
                        self.walk_stmt(st, depth + 1);
                    }
                }
            }
            Stmt::Try(s) => {
                for st in &s.body.stmts {
                    self.walk_stmt(st, depth);
                }
                for c in &s.catches {
                    for st in &c.body.stmts {
                        self.walk_stmt(st, depth);
                    }
                }
                if let Some(f) = &s.finally {
                    for st in &f.stmts {
                        self.walk_stmt(st, depth);
                    }
                }
            }
            Stmt::Labeled { body, .. } => self.walk_stmt(body, depth),
            Stmt::Synchronized { body, .. } => {
                for st in &body.stmts {
                    self.walk_stmt(st, depth);
                }
            }
            Stmt::LocalType(t) => self.walk_members(&t.members, depth),
            Stmt::Expr { expr, .. } => self.walk_expr(expr, depth),
            Stmt::Return { value: Some(e), .. } => self.walk_expr(e, depth),
            Stmt::Throw { value, .. } => self.walk_expr(value, depth),
            Stmt::LocalVar(v) => {
                for d in &v.declarators {
                    if let Some(e) = &d.init {
                        self.walk_expr(e, depth);
                    }
                }
            }
            _ => {}
        }
    }

    /// Walk an if/else-if chain. Branch bodies sit one level in; a plain
    /// `else` block opens an extra level of its own, which is what makes a
    /// conditional moved into an `else` deeper than an `else if` chain.
    fn walk_chain(&mut self, s: &IfStmt, depth: u32) {
        self.walk_expr(&s.condition, depth + 1);
        self.walk_stmt(&s.then_branch, depth + 1);
        match s.else_branch.as_deref() {
            Some(Stmt::If(inner)) => self.walk_chain(inner, depth),
            Some(other) => self.walk_stmt(other, depth + 2),
            None => {}
        }
    }

    fn walk_expr(&mut self, expr: &Expr, depth: u32) {
        match expr {
            Expr::Lambda { body, .. } => match body {
                LambdaBody::Block(b) => {
                    for s in &b.stmts {
                        self.walk_stmt(s, depth);
                    }
                }
                LambdaBody::Expr(e) => self.walk_expr(e, depth),
            },
            Expr::New { args, body, .. } => {
                for a in args {
                    self.walk_expr(a, depth);
                }
                if let Some(members) = body {
                    self.walk_members(members, depth);
                }
            }
            Expr::Binary { lhs, rhs, .. } => {
                self.walk_expr(lhs, depth);
                self.walk_expr(rhs, depth);
            }
            Expr::Assign { target, value, .. } => {
                self.walk_expr(target, depth);
                self.walk_expr(value, depth);
            }
            Expr::Ternary {
                condition,
                then_value,
                else_value,
                ..
            } => {
                self.walk_expr(condition, depth);
                self.walk_expr(then_value, depth);
                self.walk_expr(else_value, depth);
            }
            Expr::Unary { operand, .. } => self.walk_expr(operand, depth),
            Expr::Paren { inner, .. } => self.walk_expr(inner, depth),
            Expr::Call { callee, args, .. } => {
                self.walk_expr(callee, depth);
                for a in args {
                    self.walk_expr(a, depth);
                }
            }
            Expr::NewArray { dims, init, .. } => {
                for d in dims {
                    self.walk_expr(d, depth);
                }
                if let Some(i) = init {
                    self.walk_expr(i, depth);
                }
            }
            Expr::ArrayInit { values, .. } => {
                for v in values {
                    self.walk_expr(v, depth);
                }
            }
            Expr::Index { target, index, .. } => {
                self.walk_expr(target, depth);
                self.walk_expr(index, depth);
            }
            Expr::Cast { expr, .. } | Expr::InstanceOf { expr, .. } => self.walk_expr(expr, depth),
            Expr::FieldAccess { target, .. } => self.walk_expr(target, depth),
            Expr::MethodRef { target: Some(t), .. } => self.walk_expr(t, depth),
            _ => {}
        }
    }

    fn walk_members(&mut self, members: &[Member], depth: u32) {
        for member in members {
            match member {
                Member::Method(m) => {
                    if let Some(body) = &m.body {
                        for s in &body.stmts {
                            self.walk_stmt(s, depth);
                        }
                    }
                }
                Member::Initializer(init) => {
                    for s in &init.body.stmts {
                        self.walk_stmt(s, depth);
                    }
                }
                Member::Field(f) => {
                    for d in &f.declarators {
                        if let Some(e) = &d.init {
                            self.walk_expr(e, depth);
                        }
                    }
                }
                Member::Type(t) => self.walk_members(&t.members, depth),
                Member::EnumConstant(c) => {
                    for a in &c.args {
                        self.walk_expr(a, depth);
                    }
                    if let Some(body) = &c.body {
                        self.walk_members(body, depth);
                    }
                }
            }
        }
    }
}

// ---- assembly -------------------------------------------------------------------

struct RuleSites {
    r1: Vec<Span>,
    r2: Vec<Span>,
    r3: Vec<(Span, u64)>,
    r4: Vec<Span>,
    r5: Vec<Span>,
    r6: Vec<Span>,
}

fn collect_rule_sites(unit: &SyntaxUnit, cfg: &CcdConfig) -> RuleSites {
    let mut deep = DeepNesting { sites: Vec::new() };
    walk_unit(unit, &mut deep);

    let mut exprs = ExprRules {
        mixed_ops: Vec::new(),
        inline_assigns: Vec::new(),
        literals: Vec::new(),
    };
    for t in &unit.root.types {
        exprs.walk_members(&t.members, false);
    }

    let mut braces = OmittedBraces { sites: Vec::new() };
    for t in &unit.root.types {
        braces.walk_members(&t.members);
    }

    let limit = cfg.long_line_threshold;
    let r3 = unit
        .source_lines
        .iter()
        .enumerate()
        .filter(|(_, l)| l.effective_len > limit)
        .map(|(i, l)| {
            let line = (i + 1) as u32;
            let span = Span::new(Pos::new(line, 1), Pos::new(line, l.effective_len as u32 + 1));
            (span, (l.effective_len / limit) as u64)
        })
        .collect();

    RuleSites {
        r1: deep.sites,
        r2: exprs.mixed_ops,
        r3,
        r4: braces.sites,
        r5: exprs.inline_assigns,
        r6: exprs.literals,
    }
}

/// Extended cognitive complexity with the default configuration.
pub fn cognitive_complexity_d(unit: &SyntaxUnit) -> CcdBreakdown {
    cognitive_complexity_d_with(unit, &CcdConfig::default())
}

/// Extended cognitive complexity with an explicit configuration.
pub fn cognitive_complexity_d_with(unit: &SyntaxUnit, cfg: &CcdConfig) -> CcdBreakdown {
    let base = cognitive_complexity(unit);
    let sites = collect_rule_sites(unit, cfg);
    let mut rule_increments = Vec::new();
    for span in sites.r1 {
        rule_increments.push(RuleIncrement {
            rule: RuleId::R1,
            span,
            amount: 3,
        });
    }
    for span in sites.r2 {
        rule_increments.push(RuleIncrement {
            rule: RuleId::R2,
            span,
            amount: 3,
        });
    }
    for (span, amount) in sites.r3 {
        rule_increments.push(RuleIncrement {
            rule: RuleId::R3,
            span,
            amount,
        });
    }
    for span in sites.r4 {
        rule_increments.push(RuleIncrement {
            rule: RuleId::R4,
            span,
            amount: 4,
        });
    }
    for span in sites.r5 {
        rule_increments.push(RuleIncrement {
            rule: RuleId::R5,
            span,
            amount: 4,
        });
    }
    for span in sites.r6 {
        rule_increments.push(RuleIncrement {
            rule: RuleId::R6,
            span,
            amount: 1,
        });
    }
    let file_total = base.file_total + rule_increments.iter().map(|r| r.amount).sum::<u64>();
    CcdBreakdown {
        base,
        rule_increments,
        file_total,
    }
}

/// Detect patterns P1-P6 with the default configuration.
pub fn detect_patterns(unit: &SyntaxUnit) -> PatternReport {
    detect_patterns_with(unit, &CcdConfig::default())
}

/// Detect patterns P1-P6.
pub fn detect_patterns_with(unit: &SyntaxUnit, cfg: &CcdConfig) -> PatternReport {
    let sites = collect_rule_sites(unit, cfg);
    let mut depth = BlockDepth { sites: Vec::new() };
    for t in &unit.root.types {
        depth.walk_members(&t.members, 0);
    }
    let mut per_pattern = BTreeMap::new();
    per_pattern.insert(PatternId::P1, depth.sites);
    per_pattern.insert(PatternId::P2, sites.r2);
    per_pattern.insert(
        PatternId::P3,
        sites.r3.into_iter().map(|(span, _)| span).collect(),
    );
    per_pattern.insert(PatternId::P4, sites.r4);
    per_pattern.insert(PatternId::P5, sites.r5);
    per_pattern.insert(PatternId::P6, sites.r6);
    PatternReport { per_pattern }
}
