//! Property tests over generated Java programs: parser determinism, span
//! containment, token-stream reconstruction, and metric monotonicity.

use dlens_core::ccd::cognitive_complexity_d;
use dlens_core::cognitive::cognitive_complexity;
use dlens_core::syntax::ast::*;
use dlens_core::syntax::{lex_full, SyntaxUnit};
use dlens_core::Span;
use proptest::prelude::*;

// ---- program generator ------------------------------------------------------

fn gen_expr(depth: u32) -> BoxedStrategy<String> {
    let leaf = prop_oneof![
        prop_oneof![Just("a"), Just("b"), Just("count"), Just("p"), Just("q")]
            .prop_map(str::to_string),
        (0u32..200).prop_map(|n| n.to_string()),
    ];
    if depth == 0 {
        return leaf.boxed();
    }
    let sub = gen_expr(depth - 1);
    prop_oneof![
        4 => leaf,
        1 => sub.clone().prop_map(|e| format!("({e})")),
        1 => (sub.clone(), sub.clone()).prop_map(|(l, r)| format!("{l} + {r}")),
        1 => (sub.clone(), sub.clone()).prop_map(|(l, r)| format!("{l} * {r}")),
        1 => (sub.clone(), sub.clone()).prop_map(|(l, r)| format!("{l} < {r}")),
        1 => (sub.clone(), sub.clone()).prop_map(|(l, r)| format!("{l} == {r}")),
        1 => (sub.clone(), sub.clone()).prop_map(|(l, r)| format!("{l} && {r}")),
        1 => (sub.clone(), sub.clone()).prop_map(|(l, r)| format!("{l} || {r}")),
        1 => (sub.clone(), sub.clone(), sub).prop_map(|(c, t, e)| format!("{c} ? {t} : {e}")),
    ]
    .boxed()
}

fn gen_stmt(depth: u32) -> BoxedStrategy<String> {
    let expr = gen_expr(2);
    let simple = prop_oneof![
        expr.clone().prop_map(|e| format!("a = {e};")),
        expr.clone().prop_map(|e| format!("int v = {e};")),
        expr.clone().prop_map(|e| format!("log({e});")),
        Just(";".to_string()),
    ];
    if depth == 0 {
        return simple.boxed();
    }
    let sub = gen_stmt(depth - 1);
    let block = prop_oneof![
        prop::collection::vec(sub.clone(), 0..3).prop_map(|stmts| stmts.join(" ")),
    ];
    prop_oneof![
        3 => simple,
        2 => (expr.clone(), block.clone()).prop_map(|(c, b)| format!("if ({c}) {{ {b} }}")),
        1 => (expr.clone(), block.clone(), block.clone())
            .prop_map(|(c, t, e)| format!("if ({c}) {{ {t} }} else {{ {e} }}")),
        1 => (expr.clone(), block.clone()).prop_map(|(c, b)| format!("while ({c}) {{ {b} break; }}")),
        1 => (expr.clone(), block.clone())
            .prop_map(|(c, b)| format!("for (int i = 0; i < 3; i++) {{ if ({c}) {{ {b} }} }}")),
        1 => block.prop_map(|b| format!("{{ {b} }}")),
    ]
    .boxed()
}

fn gen_body() -> BoxedStrategy<Vec<String>> {
    prop::collection::vec(gen_stmt(2), 0..5).boxed()
}

fn render(body: &[String]) -> String {
    format!(
        "class Gen {{\n    int a; int b; int count; boolean p; boolean q;\n    void log(int x) {{}}\n    void log(boolean x) {{}}\n    void run() {{\n        {}\n    }}\n}}\n",
        body.join("\n        ")
    )
}

// ---- span containment checker --------------------------------------------------

fn assert_within(parent: Span, child: Span, what: &str) {
    assert!(
        parent.contains(&child),
        "{what}: child {child} escapes parent {parent}"
    );
}

fn check_block(b: &Block) {
    for s in &b.stmts {
        assert_within(b.span, s.span(), "block stmt");
        check_stmt(s);
    }
}

fn check_stmt(stmt: &Stmt) {
    let span = stmt.span();
    match stmt {
        Stmt::Block(b) => check_block(b),
        Stmt::If(s) => {
            assert_within(span, s.condition.span(), "if condition");
            assert_within(span, s.then_branch.span(), "then branch");
            check_expr(&s.condition);
            check_stmt(&s.then_branch);
            if let Some(e) = &s.else_branch {
                assert_within(span, e.span(), "else branch");
                check_stmt(e);
            }
        }
        Stmt::While(s) => {
            assert_within(span, s.condition.span(), "while condition");
            assert_within(span, s.body.span(), "while body");
            check_expr(&s.condition);
            check_stmt(&s.body);
        }
        Stmt::DoWhile(s) => {
            assert_within(span, s.body.span(), "do body");
            check_stmt(&s.body);
            check_expr(&s.condition);
        }
        Stmt::For(s) => {
            for i in &s.init {
                assert_within(span, i.span(), "for init");
                check_stmt(i);
            }
            if let Some(c) = &s.condition {
                assert_within(span, c.span(), "for condition");
                check_expr(c);
            }
            for u in &s.update {
                assert_within(span, u.span(), "for update");
                check_expr(u);
            }
            assert_within(span, s.body.span(), "for body");
            check_stmt(&s.body);
        }
        Stmt::ForEach(s) => {
            assert_within(span, s.iterable.span(), "foreach iterable");
            assert_within(span, s.body.span(), "foreach body");
            check_stmt(&s.body);
        }
        Stmt::Switch(s) => {
            assert_within(span, s.scrutinee.span(), "switch scrutinee");
            for arm in &s.arms {
                assert_within(span, arm.span, "switch arm");
                for st in &arm.stmts {
                    assert_within(arm.span, st.span(), "arm stmt");
                    check_stmt(st);
                }
            }
        }
        Stmt::Try(s) => {
            assert_within(span, s.body.span, "try body");
            check_block(&s.body);
            for c in &s.catches {
                assert_within(span, c.span, "catch");
                check_block(&c.body);
            }
            if let Some(f) = &s.finally {
                assert_within(span, f.span, "finally");
                check_block(f);
            }
        }
        Stmt::Labeled { body, .. } => {
            assert_within(span, body.span(), "labeled body");
            check_stmt(body);
        }
        Stmt::Synchronized { lock, body, .. } => {
            assert_within(span, lock.span(), "sync lock");
            assert_within(span, body.span, "sync body");
            check_block(body);
        }
        Stmt::Expr { expr, .. } => {
            assert_within(span, expr.span(), "expression statement");
            check_expr(expr);
        }
        Stmt::LocalVar(v) => {
            for d in &v.declarators {
                if let Some(e) = &d.init {
                    assert_within(span, e.span(), "declarator init");
                    check_expr(e);
                }
            }
        }
        Stmt::Return { value: Some(e), .. } | Stmt::Throw { value: e, .. } => {
            assert_within(span, e.span(), "return/throw value");
            check_expr(e);
        }
        _ => {}
    }
}

fn check_expr(expr: &Expr) {
    let span = expr.span();
    let check_child = |c: &Expr, what: &str| {
        assert_within(span, c.span(), what);
        check_expr(c);
    };
    match expr {
        Expr::Binary { lhs, rhs, .. } => {
            check_child(lhs, "binary lhs");
            check_child(rhs, "binary rhs");
        }
        Expr::Unary { operand, .. } => check_child(operand, "unary operand"),
        Expr::Assign { target, value, .. } => {
            check_child(target, "assign target");
            check_child(value, "assign value");
        }
        Expr::Ternary {
            condition,
            then_value,
            else_value,
            ..
        } => {
            check_child(condition, "ternary condition");
            check_child(then_value, "ternary then");
            check_child(else_value, "ternary else");
        }
        Expr::Paren { inner, .. } => check_child(inner, "paren inner"),
        Expr::Call { callee, args, .. } => {
            check_child(callee, "callee");
            for a in args {
                check_child(a, "call arg");
            }
        }
        Expr::Index { target, index, .. } => {
            check_child(target, "index target");
            check_child(index, "index");
        }
        Expr::FieldAccess { target, .. } => check_child(target, "field target"),
        Expr::Cast { expr, .. } | Expr::InstanceOf { expr, .. } => check_child(expr, "inner"),
        _ => {}
    }
}

fn check_unit_spans(unit: &SyntaxUnit) {
    for t in &unit.root.types {
        assert_within(unit.root.span, t.span, "type decl");
        for m in &t.members {
            assert_within(t.span, m.span(), "member");
            if let Member::Method(method) = m {
                if let Some(body) = &method.body {
                    assert_within(method.span, body.span, "method body");
                    check_block(body);
                }
            }
        }
    }
}

// ---- reconstruction check ---------------------------------------------------------

/// The token stream, placed back at its recorded positions, must reproduce
/// every non-whitespace character of the comment-stripped source, and
/// nothing else.
fn check_reconstruction(source: &str) {
    let out = lex_full(source).expect("lexes");
    let mut grid: Vec<Vec<char>> = source
        .split('\n')
        .map(|l| l.chars().collect())
        .collect();
    // Blank out comments.
    for span in &out.comments {
        for line in span.start.line..=span.end.line {
            let row = &mut grid[(line - 1) as usize];
            let from = if line == span.start.line {
                (span.start.col - 1) as usize
            } else {
                0
            };
            let to = if line == span.end.line {
                ((span.end.col - 1) as usize).min(row.len())
            } else {
                row.len()
            };
            for c in row[from..to].iter_mut() {
                *c = ' ';
            }
        }
    }
    // Remove token text.
    for tok in &out.tokens {
        let row = &mut grid[(tok.line - 1) as usize];
        let from = (tok.col - 1) as usize;
        for (i, expected) in tok.text.chars().enumerate() {
            assert_eq!(
                row[from + i], expected,
                "token '{}' does not match source at {}:{}",
                tok.text, tok.line, tok.col
            );
            row[from + i] = ' ';
        }
    }
    // Only whitespace may remain.
    for (i, row) in grid.iter().enumerate() {
        let leftover: String = row.iter().filter(|c| !c.is_whitespace()).collect();
        assert!(
            leftover.is_empty(),
            "line {}: unlexed characters {leftover:?}",
            i + 1
        );
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(192))]

    #[test]
    fn parse_is_deterministic_and_spans_nest(body in gen_body()) {
        let src = render(&body);
        let first = SyntaxUnit::parse_str(&src).expect("generated program parses");
        let second = SyntaxUnit::parse_str(&src).unwrap();
        prop_assert_eq!(&first, &second);
        check_unit_spans(&first);
    }

    #[test]
    fn token_stream_reconstructs_comment_stripped_source(body in gen_body()) {
        let src = format!("// header comment\n{}", render(&body));
        check_reconstruction(&src);
    }

    #[test]
    fn adding_a_flat_if_costs_exactly_one(body in gen_body()) {
        let plain = render(&body);
        let mut extended = body.clone();
        extended.push("if (p) { }".to_string());
        let grown = render(&extended);
        let before = cognitive_complexity(&SyntaxUnit::parse_str(&plain).unwrap()).file_total;
        let after = cognitive_complexity(&SyntaxUnit::parse_str(&grown).unwrap()).file_total;
        prop_assert_eq!(after, before + 1);
    }

    #[test]
    fn wrapping_one_structure_deeper_never_lowers_the_score(body in gen_body()) {
        let plain = render(&body);
        let wrapped = render(&[format!("if (p) {{ {} }}", body.join(" "))]);
        let before = cognitive_complexity(&SyntaxUnit::parse_str(&plain).unwrap()).file_total;
        let after = cognitive_complexity(&SyntaxUnit::parse_str(&wrapped).unwrap()).file_total;
        prop_assert!(after >= before);
    }

    #[test]
    fn extended_score_dominates_base(body in gen_body()) {
        let src = render(&body);
        let unit = SyntaxUnit::parse_str(&src).unwrap();
        let b = cognitive_complexity_d(&unit);
        prop_assert!(b.file_total >= b.base.file_total);
        let ledger: u64 = b.rule_increments.iter().map(|r| r.amount).sum();
        prop_assert_eq!(b.file_total, b.base.file_total + ledger);
    }

    #[test]
    fn score_is_zero_iff_no_increment_bearing_construct(body in gen_body()) {
        let src = render(&body);
        let unit = SyntaxUnit::parse_str(&src).unwrap();
        let breakdown = cognitive_complexity(&unit);
        let has_increments = breakdown.methods.iter().any(|m| !m.increments.is_empty());
        prop_assert_eq!(breakdown.file_total == 0, !has_increments);
    }
}

#[test]
fn reconstruction_handles_mixed_comment_shapes() {
    check_reconstruction("class A { /* one */ int x = 1; // two\n /* multi\nline */ int y; }");
}
