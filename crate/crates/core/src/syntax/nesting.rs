//! Structure walk shared by the metric engines.
//!
//! Walks every method-like unit of a compilation unit in source order,
//! reporting flow-breaking structures together with their nesting depth.
//! Nesting counts enclosing if/else, ternary, switch, loop, catch and
//! method-like (lambda, anonymous or local class body) structures between a
//! node and its enclosing unit; statements at the top level of a method sit
//! at depth 0. An `else if` continues its chain at the same depth instead of
//! adding one.

use crate::span::Span;
use crate::syntax::ast::*;
use crate::syntax::SyntaxUnit;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum StructureKind {
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
    /// Lambda bodies, anonymous class bodies, local class bodies. These add
    /// nesting but never an increment of their own.
    MethodLike,
}

impl StructureKind {
    /// Whether the structure takes a nesting increment (and is therefore
    /// relevant to depth-based rules).
    pub(crate) fn nests(self) -> bool {
        !matches!(
            self,
            StructureKind::ElseIf | StructureKind::Else | StructureKind::MethodLike
        )
    }
}

#[allow(unused_variables)]
pub(crate) trait StructureSink {
    fn begin_unit(&mut self, name: &str, span: Span) {}
    fn end_unit(&mut self) {}
    fn structure(&mut self, kind: StructureKind, span: Span, nesting: u32) {}
    fn statement(&mut self, span: Span, nesting: u32) {}
    fn labeled_jump(&mut self, is_break: bool, span: Span) {}
    /// A binary `&&` or `||`. `starts_run` is false when the left operand,
    /// after unwrapping parentheses, is the same operator, i.e. the node
    /// continues a run of like operators.
    fn logical_operator(&mut self, op: BinaryOp, starts_run: bool, span: Span) {}
}

pub(crate) fn walk_unit<S: StructureSink>(unit: &SyntaxUnit, sink: &mut S) {
    for decl in &unit.root.types {
        walk_type(decl, &decl.name, sink);
    }
}

fn walk_type<S: StructureSink>(decl: &TypeDecl, path: &str, sink: &mut S) {
    let mut field_exprs: Vec<(&Expr, Span)> = Vec::new();
    let mut init_index = 0u32;
    for member in &decl.members {
        match member {
            Member::Method(m) => {
                if let Some(body) = &m.body {
                    sink.begin_unit(&format!("{path}.{}", m.name), m.span);
                    walk_block(body, 0, sink);
                    sink.end_unit();
                }
            }
            Member::Initializer(init) => {
                init_index += 1;
                sink.begin_unit(&format!("{path}.<init block {init_index}>"), init.span);
                walk_block(&init.body, 0, sink);
                sink.end_unit();
            }
            Member::Field(f) => {
                for d in &f.declarators {
                    if let Some(e) = &d.init {
                        field_exprs.push((e, d.span));
                    }
                }
            }
            Member::Type(nested) => {
                walk_type(nested, &format!("{path}.{}", nested.name), sink);
            }
            Member::EnumConstant(c) => {
                for a in &c.args {
                    field_exprs.push((a, c.span));
                }
                if let Some(body) = &c.body {
                    let constant_path = format!("{path}.{}", c.name);
                    let as_type = TypeDecl {
                        name: c.name.clone(),
                        kind: TypeKind::Class,
                        members: body.clone(),
                        span: c.span,
                    };
                    walk_type(&as_type, &constant_path, sink);
                }
            }
        }
    }
    if !field_exprs.is_empty() {
        sink.begin_unit(&format!("{path}.<fields>"), decl.span);
        for (e, _) in field_exprs {
            walk_expr(e, 0, sink);
        }
        sink.end_unit();
    }
}

fn walk_block<S: StructureSink>(block: &Block, nesting: u32, sink: &mut S) {
    for stmt in &block.stmts {
        walk_stmt(stmt, nesting, sink);
    }
}

fn walk_stmt<S: StructureSink>(stmt: &Stmt, n: u32, sink: &mut S) {
    sink.statement(stmt.span(), n);
    match stmt {
        Stmt::Block(b) => walk_block(b, n, sink),
        Stmt::If(s) => walk_if_chain(s, n, true, sink),
        Stmt::While(s) => {
            sink.structure(StructureKind::While, s.span, n);
            walk_expr(&s.condition, n + 1, sink);
            walk_stmt(&s.body, n + 1, sink);
        }
        Stmt::DoWhile(s) => {
            sink.structure(StructureKind::DoWhile, s.span, n);
            walk_stmt(&s.body, n + 1, sink);
            walk_expr(&s.condition, n + 1, sink);
        }
        Stmt::For(s) => {
            sink.structure(StructureKind::For, s.span, n);
            for init in &s.init {
                match init {
                    Stmt::LocalVar(v) => {
                        for d in &v.declarators {
                            if let Some(e) = &d.init {
                                walk_expr(e, n + 1, sink);
                            }
                        }
                    }
                    Stmt::Expr { expr, .. } => walk_expr(expr, n + 1, sink),
                    other => walk_stmt(other, n + 1, sink),
                }
            }
            if let Some(c) = &s.condition {
                walk_expr(c, n + 1, sink);
            }
            for u in &s.update {
                walk_expr(u, n + 1, sink);
            }
            walk_stmt(&s.body, n + 1, sink);
        }
        Stmt::ForEach(s) => {
            sink.structure(StructureKind::ForEach, s.span, n);
            walk_expr(&s.iterable, n + 1, sink);
            walk_stmt(&s.body, n + 1, sink);
        }
        Stmt::Switch(s) => {
            sink.structure(StructureKind::Switch, s.span, n);
            walk_expr(&s.scrutinee, n + 1, sink);
            for arm in &s.arms {
                for label in arm.labels.iter().flatten() {
                    walk_expr(label, n + 1, sink);
                }
                for stmt in &arm.stmts {
                    walk_stmt(stmt, n + 1, sink);
                }
            }
        }
        Stmt::Try(s) => {
            for res in &s.resources {
                for d in &res.declarators {
                    if let Some(e) = &d.init {
                        walk_expr(e, n, sink);
                    }
                }
            }
            walk_block(&s.body, n, sink);
            for catch in &s.catches {
                sink.structure(StructureKind::Catch, catch.span, n);
                walk_block(&catch.body, n + 1, sink);
            }
            if let Some(f) = &s.finally {
                walk_block(f, n, sink);
            }
        }
        Stmt::Return { value, .. } => {
            if let Some(e) = value {
                walk_expr(e, n, sink);
            }
        }
        Stmt::Throw { value, .. } => walk_expr(value, n, sink),
        Stmt::Break { label, span } => {
            if label.is_some() {
                sink.labeled_jump(true, *span);
            }
        }
        Stmt::Continue { label, span } => {
            if label.is_some() {
                sink.labeled_jump(false, *span);
            }
        }
        Stmt::Labeled { body, .. } => walk_stmt(body, n, sink),
        Stmt::Synchronized { lock, body, .. } => {
            walk_expr(lock, n, sink);
            walk_block(body, n, sink);
        }
        Stmt::Assert {
            condition, message, ..
        } => {
            walk_expr(condition, n, sink);
            if let Some(m) = message {
                walk_expr(m, n, sink);
            }
        }
        Stmt::LocalVar(v) => {
            for d in &v.declarators {
                if let Some(e) = &d.init {
                    walk_expr(e, n, sink);
                }
            }
        }
        Stmt::LocalType(t) => {
            sink.structure(StructureKind::MethodLike, t.span, n);
            walk_members_embedded(&t.members, n + 1, sink);
        }
        Stmt::Expr { expr, .. } => walk_expr(expr, n, sink),
        Stmt::Empty { .. } => {}
    }
}

fn walk_if_chain<S: StructureSink>(s: &IfStmt, n: u32, is_head: bool, sink: &mut S) {
    let kind = if is_head {
        StructureKind::If
    } else {
        StructureKind::ElseIf
    };
    sink.structure(kind, s.span, n);
    walk_expr(&s.condition, n + 1, sink);
    walk_stmt(&s.then_branch, n + 1, sink);
    match s.else_branch.as_deref() {
        Some(Stmt::If(inner)) => walk_if_chain(inner, n, false, sink),
        Some(other) => {
            sink.structure(StructureKind::Else, other.span(), n);
            walk_stmt(other, n + 1, sink);
        }
        None => {}
    }
}

/// Members of anonymous or local classes belong to the enclosing unit, one
/// nesting level in.
fn walk_members_embedded<S: StructureSink>(members: &[Member], n: u32, sink: &mut S) {
    for member in members {
        match member {
            Member::Method(m) => {
                if let Some(body) = &m.body {
                    walk_block(body, n, sink);
                }
            }
            Member::Initializer(init) => walk_block(&init.body, n, sink),
            Member::Field(f) => {
                for d in &f.declarators {
                    if let Some(e) = &d.init {
                        walk_expr(e, n, sink);
                    }
                }
            }
            Member::Type(t) => walk_members_embedded(&t.members, n, sink),
            Member::EnumConstant(c) => {
                for a in &c.args {
                    walk_expr(a, n, sink);
                }
                if let Some(body) = &c.body {
                    walk_members_embedded(body, n, sink);
                }
            }
        }
    }
}

fn walk_expr<S: StructureSink>(expr: &Expr, n: u32, sink: &mut S) {
    match expr {
        Expr::Binary { op, lhs, rhs, span } => {
            if op.is_logical() {
                let mut left = lhs.as_ref();
                while let Expr::Paren { inner, .. } = left {
                    left = inner;
                }
                let continues = matches!(left, Expr::Binary { op: lop, .. } if lop == op);
                sink.logical_operator(*op, !continues, *span);
            }
            walk_expr(lhs, n, sink);
            walk_expr(rhs, n, sink);
        }
        Expr::Unary { operand, .. } => walk_expr(operand, n, sink),
        Expr::Assign { target, value, .. } => {
            walk_expr(target, n, sink);
            walk_expr(value, n, sink);
        }
        Expr::Ternary {
            condition,
            then_value,
            else_value,
            span,
        } => {
            sink.structure(StructureKind::Ternary, *span, n);
            walk_expr(condition, n + 1, sink);
            walk_expr(then_value, n + 1, sink);
            walk_expr(else_value, n + 1, sink);
        }
        Expr::Paren { inner, .. } => walk_expr(inner, n, sink),
        Expr::Call { callee, args, .. } => {
            walk_expr(callee, n, sink);
            for a in args {
                walk_expr(a, n, sink);
            }
        }
        Expr::New { args, body, span } => {
            for a in args {
                walk_expr(a, n, sink);
            }
            if let Some(members) = body {
                sink.structure(StructureKind::MethodLike, *span, n);
                walk_members_embedded(members, n + 1, sink);
            }
        }
        Expr::NewArray { dims, init, .. } => {
            for d in dims {
                walk_expr(d, n, sink);
            }
            if let Some(i) = init {
                walk_expr(i, n, sink);
            }
        }
        Expr::ArrayInit { values, .. } => {
            for v in values {
                walk_expr(v, n, sink);
            }
        }
        Expr::Index { target, index, .. } => {
            walk_expr(target, n, sink);
            walk_expr(index, n, sink);
        }
        Expr::Cast { expr, .. } => walk_expr(expr, n, sink),
        Expr::InstanceOf { expr, .. } => walk_expr(expr, n, sink),
        Expr::Lambda { body, span } => {
            sink.structure(StructureKind::MethodLike, *span, n);
            match body {
                LambdaBody::Expr(e) => walk_expr(e, n + 1, sink),
                LambdaBody::Block(b) => walk_block(b, n + 1, sink),
            }
        }
        Expr::FieldAccess { target, .. } => walk_expr(target, n, sink),
        Expr::MethodRef { target, .. } => {
            if let Some(t) = target {
                walk_expr(t, n, sink);
            }
        }
        Expr::Literal { .. }
        | Expr::Name { .. }
        | Expr::ClassLiteral { .. }
        | Expr::This { .. }
        | Expr::Super { .. } => {}
    }
}

/// Nesting depth of the node whose span is exactly `target`.
///
/// Counts the nesting structures (if/else, ternary, switch, loops, catch,
/// lambdas) enclosing the node within its method; statements directly in the
/// method body have depth 0. Returns `None` when no node has that span.
pub fn nesting_depth(unit: &SyntaxUnit, target: Span) -> Option<u32> {
    struct Finder {
        target: Span,
        found: Option<u32>,
    }
    impl StructureSink for Finder {
        fn structure(&mut self, _kind: StructureKind, span: Span, nesting: u32) {
            if span == self.target && self.found.is_none() {
                self.found = Some(nesting);
            }
        }
        fn statement(&mut self, span: Span, nesting: u32) {
            if span == self.target && self.found.is_none() {
                self.found = Some(nesting);
            }
        }
    }
    let mut finder = Finder {
        target,
        found: None,
    };
    walk_unit(unit, &mut finder);
    finder.found
}
