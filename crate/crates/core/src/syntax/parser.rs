//! Recursive-descent parser for Java 8 compilation units.
//!
//! The parser is structural: it builds the statement and expression shapes
//! the metrics need and discards types, names it does not care about, and
//! annotation arguments. Ambiguities (casts, lambdas, generic type
//! arguments, local variable declarations) are resolved by bounded
//! speculation over the token buffer. Source written for a later Java
//! version may be rejected.

use crate::span::{Pos, Span};
use crate::syntax::ast::*;
use crate::syntax::lexer::{lex_full, LexOutput};
use crate::syntax::token::{Token, TokenKind};
use thiserror::Error;

/// Parse failure at the first offending position. No partial tree is produced.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("parse error at {line}:{col}: {message}")]
pub struct ParseError {
    pub line: u32,
    pub col: u32,
    pub message: String,
}

type PResult<T> = Result<T, ParseError>;

const MODIFIERS: &[&str] = &[
    "public",
    "protected",
    "private",
    "static",
    "final",
    "abstract",
    "native",
    "synchronized",
    "transient",
    "volatile",
    "strictfp",
    "default",
];

const PRIMITIVES: &[&str] = &[
    "boolean", "byte", "short", "int", "long", "char", "float", "double", "void",
];

pub(crate) struct Parser {
    tokens: Vec<Token>,
    idx: usize,
    /// Outstanding `>` halves left over from splitting `>>`/`>>>` while
    /// closing nested type arguments.
    pending_gt: u8,
    eof: Pos,
}

#[derive(Clone, Copy)]
struct State {
    idx: usize,
    pending_gt: u8,
}

impl Parser {
    pub(crate) fn new(tokens: Vec<Token>, eof: Pos) -> Self {
        Parser {
            tokens,
            idx: 0,
            pending_gt: 0,
            eof,
        }
    }

    fn save(&self) -> State {
        State {
            idx: self.idx,
            pending_gt: self.pending_gt,
        }
    }

    fn restore(&mut self, state: State) {
        self.idx = state.idx;
        self.pending_gt = state.pending_gt;
    }

    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.idx)
    }

    fn peek_at(&self, offset: usize) -> Option<&Token> {
        self.tokens.get(self.idx + offset)
    }

    fn here(&self) -> Pos {
        self.peek().map(|t| t.start()).unwrap_or(self.eof)
    }

    fn prev_end(&self) -> Pos {
        if self.idx == 0 {
            self.here()
        } else {
            self.tokens[self.idx - 1].end()
        }
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        let pos = self.here();
        ParseError {
            line: pos.line,
            col: pos.col,
            message: message.into(),
        }
    }

    fn advance(&mut self) -> PResult<Token> {
        let tok = self
            .peek()
            .cloned()
            .ok_or_else(|| self.error("unexpected end of input"))?;
        self.idx += 1;
        Ok(tok)
    }

    fn at(&self, kind: TokenKind, text: &str) -> bool {
        self.pending_gt == 0 && self.peek().is_some_and(|t| t.is(kind, text))
    }

    fn at_kw(&self, text: &str) -> bool {
        self.at(TokenKind::Keyword, text)
    }

    fn at_sep(&self, text: &str) -> bool {
        self.at(TokenKind::Separator, text)
    }

    fn at_op(&self, text: &str) -> bool {
        self.at(TokenKind::Operator, text)
    }

    fn at_ident(&self) -> bool {
        self.pending_gt == 0 && self.peek().is_some_and(|t| t.kind == TokenKind::Identifier)
    }

    fn eat(&mut self, kind: TokenKind, text: &str) -> bool {
        if self.at(kind, text) {
            self.idx += 1;
            true
        } else {
            false
        }
    }

    fn eat_kw(&mut self, text: &str) -> bool {
        self.eat(TokenKind::Keyword, text)
    }

    fn eat_sep(&mut self, text: &str) -> bool {
        self.eat(TokenKind::Separator, text)
    }

    fn eat_op(&mut self, text: &str) -> bool {
        self.eat(TokenKind::Operator, text)
    }

    fn expect_sep(&mut self, text: &str) -> PResult<Token> {
        if self.at_sep(text) {
            self.advance()
        } else {
            Err(self.error(format!("expected '{text}'")))
        }
    }

    fn expect_kw(&mut self, text: &str) -> PResult<Token> {
        if self.at_kw(text) {
            self.advance()
        } else {
            Err(self.error(format!("expected '{text}'")))
        }
    }

    fn expect_op(&mut self, text: &str) -> PResult<Token> {
        if self.at_op(text) {
            self.advance()
        } else {
            Err(self.error(format!("expected '{text}'")))
        }
    }

    fn expect_ident(&mut self) -> PResult<Token> {
        if self.at_ident() {
            self.advance()
        } else {
            Err(self.error("expected identifier"))
        }
    }

    fn span_from(&self, start: Pos) -> Span {
        Span::new(start, self.prev_end())
    }

    // ---- type argument `>` handling -------------------------------------

    fn at_gt(&self) -> bool {
        if self.pending_gt > 0 {
            return true;
        }
        self.peek().is_some_and(|t| {
            t.kind == TokenKind::Operator && matches!(t.text.as_str(), ">" | ">>" | ">>>")
        })
    }

    fn expect_gt(&mut self) -> PResult<()> {
        if self.pending_gt > 0 {
            self.pending_gt -= 1;
            return Ok(());
        }
        let Some(tok) = self.peek() else {
            return Err(self.error("expected '>'"));
        };
        if tok.kind != TokenKind::Operator {
            return Err(self.error("expected '>'"));
        }
        match tok.text.as_str() {
            ">" => {
                self.idx += 1;
            }
            ">>" => {
                self.idx += 1;
                self.pending_gt = 1;
            }
            ">>>" => {
                self.idx += 1;
                self.pending_gt = 2;
            }
            _ => return Err(self.error("expected '>'")),
        }
        Ok(())
    }

    // ---- annotations and modifiers ---------------------------------------

    fn at_annotation(&self) -> bool {
        self.at_sep("@") && self.peek_at(1).is_some_and(|t| t.kind == TokenKind::Identifier)
    }

    /// Consume `@Name` or `@Name(...)`. Arguments are skipped; they carry no
    /// metric weight.
    fn parse_annotation(&mut self) -> PResult<()> {
        self.expect_sep("@")?;
        self.expect_ident()?;
        while self.eat_sep(".") {
            self.expect_ident()?;
        }
        if self.at_sep("(") {
            self.skip_balanced()?;
        }
        Ok(())
    }

    /// Skip a balanced `(...)`, `[...]` or `{...}` group starting at the
    /// current open bracket.
    fn skip_balanced(&mut self) -> PResult<()> {
        let mut depth = 0usize;
        loop {
            let tok = self.advance()?;
            if tok.kind == TokenKind::Separator {
                match tok.text.as_str() {
                    "(" | "[" | "{" => depth += 1,
                    ")" | "]" | "}" => {
                        depth -= 1;
                        if depth == 0 {
                            return Ok(());
                        }
                    }
                    _ => {}
                }
            }
        }
    }

    /// Consume any run of modifiers and annotations, returning whether
    /// `static` appeared.
    fn parse_modifiers(&mut self) -> PResult<bool> {
        let mut saw_static = false;
        loop {
            if self.at_annotation() {
                // `@interface` starts a type declaration, not an annotation use.
                if self.peek_at(1).is_some_and(|t| t.is(TokenKind::Keyword, "interface")) {
                    return Ok(saw_static);
                }
                self.parse_annotation()?;
                continue;
            }
            match self.peek() {
                Some(t) if t.kind == TokenKind::Keyword && MODIFIERS.contains(&t.text.as_str()) => {
                    if t.text == "static" {
                        saw_static = true;
                    }
                    self.idx += 1;
                }
                _ => return Ok(saw_static),
            }
        }
    }

    // ---- types (consumed, not retained) -----------------------------------

    fn at_primitive(&self) -> bool {
        self.pending_gt == 0
            && self
                .peek()
                .is_some_and(|t| t.kind == TokenKind::Keyword && PRIMITIVES.contains(&t.text.as_str()))
    }

    /// Parse a type, returning whether it was primitive (before array dims).
    fn parse_type(&mut self) -> PResult<bool> {
        while self.at_annotation() {
            self.parse_annotation()?;
        }
        let primitive = if self.at_primitive() {
            self.advance()?;
            true
        } else {
            self.expect_ident()?;
            if self.at_op("<") {
                self.parse_type_args()?;
            }
            while self.at_sep(".") && self.peek_at(1).is_some_and(|t| t.kind == TokenKind::Identifier)
            {
                self.advance()?;
                self.expect_ident()?;
                if self.at_op("<") {
                    self.parse_type_args()?;
                }
            }
            false
        };
        self.parse_array_dims()?;
        Ok(primitive)
    }

    fn parse_array_dims(&mut self) -> PResult<()> {
        loop {
            while self.at_annotation() {
                self.parse_annotation()?;
            }
            if self.at_sep("[") && self.peek_at(1).is_some_and(|t| t.is(TokenKind::Separator, "]"))
            {
                self.advance()?;
                self.advance()?;
            } else {
                return Ok(());
            }
        }
    }

    fn parse_type_args(&mut self) -> PResult<()> {
        self.expect_op("<")?;
        if self.at_gt() {
            // Diamond.
            return self.expect_gt();
        }
        loop {
            if self.at_op("?") {
                self.advance()?;
                if self.at_kw("extends") || self.at_kw("super") {
                    self.advance()?;
                    self.parse_type()?;
                }
            } else {
                self.parse_type()?;
            }
            if self.eat_sep(",") {
                continue;
            }
            return self.expect_gt();
        }
    }

    /// `<T, U extends V & W>` on classes and methods.
    fn parse_type_params(&mut self) -> PResult<()> {
        self.expect_op("<")?;
        loop {
            while self.at_annotation() {
                self.parse_annotation()?;
            }
            self.expect_ident()?;
            if self.eat_kw("extends") {
                self.parse_type()?;
                while self.eat_op("&") {
                    self.parse_type()?;
                }
            }
            if self.eat_sep(",") {
                continue;
            }
            return self.expect_gt();
        }
    }

    fn try_parse<T>(&mut self, f: impl FnOnce(&mut Self) -> PResult<T>) -> Option<T> {
        let state = self.save();
        match f(self) {
            Ok(v) => Some(v),
            Err(_) => {
                self.restore(state);
                None
            }
        }
    }

    // ---- compilation unit --------------------------------------------------

    pub(crate) fn parse_compilation_unit(&mut self) -> PResult<CompilationUnit> {
        let start = self.here();
        while self.at_annotation() {
            // Package annotations.
            let state = self.save();
            self.parse_annotation()?;
            if !self.at_kw("package") && !self.at_annotation() {
                self.restore(state);
                break;
            }
        }
        if self.eat_kw("package") {
            self.expect_ident()?;
            while self.eat_sep(".") {
                self.expect_ident()?;
            }
            self.expect_sep(";")?;
        }
        while self.at_kw("import") {
            self.advance()?;
            self.eat_kw("static");
            self.expect_ident()?;
            loop {
                if self.eat_sep(".") {
                    if self.eat_op("*") {
                        break;
                    }
                    self.expect_ident()?;
                } else {
                    break;
                }
            }
            self.expect_sep(";")?;
        }
        let mut types = Vec::new();
        while self.peek().is_some() {
            if self.eat_sep(";") {
                continue;
            }
            types.push(self.parse_type_decl()?);
        }
        if types.is_empty() && self.tokens.is_empty() {
            return Err(ParseError {
                line: 1,
                col: 1,
                message: "empty compilation unit".to_string(),
            });
        }
        Ok(CompilationUnit {
            types,
            span: Span::new(start, self.prev_end()),
        })
    }

    fn parse_type_decl(&mut self) -> PResult<TypeDecl> {
        let start = self.here();
        self.parse_modifiers()?;
        if self.at_sep("@") && self.peek_at(1).is_some_and(|t| t.is(TokenKind::Keyword, "interface"))
        {
            self.advance()?;
            self.advance()?;
            let name = self.expect_ident()?.text;
            if !self.at_sep("{") {
                return Err(self.error("expected annotation type body"));
            }
            self.skip_balanced()?;
            return Ok(TypeDecl {
                name,
                kind: TypeKind::Annotation,
                members: Vec::new(),
                span: self.span_from(start),
            });
        }
        if self.eat_kw("class") {
            let name = self.expect_ident()?.text;
            if self.at_op("<") {
                self.parse_type_params()?;
            }
            if self.eat_kw("extends") {
                self.parse_type()?;
            }
            if self.eat_kw("implements") {
                self.parse_type()?;
                while self.eat_sep(",") {
                    self.parse_type()?;
                }
            }
            let members = self.parse_class_body(&name)?;
            return Ok(TypeDecl {
                name,
                kind: TypeKind::Class,
                members,
                span: self.span_from(start),
            });
        }
        if self.eat_kw("interface") {
            let name = self.expect_ident()?.text;
            if self.at_op("<") {
                self.parse_type_params()?;
            }
            if self.eat_kw("extends") {
                self.parse_type()?;
                while self.eat_sep(",") {
                    self.parse_type()?;
                }
            }
            let members = self.parse_class_body(&name)?;
            return Ok(TypeDecl {
                name,
                kind: TypeKind::Interface,
                members,
                span: self.span_from(start),
            });
        }
        if self.eat_kw("enum") {
            let name = self.expect_ident()?.text;
            if self.eat_kw("implements") {
                self.parse_type()?;
                while self.eat_sep(",") {
                    self.parse_type()?;
                }
            }
            let members = self.parse_enum_body(&name)?;
            return Ok(TypeDecl {
                name,
                kind: TypeKind::Enum,
                members,
                span: self.span_from(start),
            });
        }
        Err(self.error("expected type declaration"))
    }

    fn parse_class_body(&mut self, type_name: &str) -> PResult<Vec<Member>> {
        self.expect_sep("{")?;
        let mut members = Vec::new();
        while !self.at_sep("}") {
            if self.peek().is_none() {
                return Err(self.error("unexpected end of input in class body"));
            }
            if self.eat_sep(";") {
                continue;
            }
            members.push(self.parse_member(type_name)?);
        }
        self.expect_sep("}")?;
        Ok(members)
    }

    fn parse_enum_body(&mut self, type_name: &str) -> PResult<Vec<Member>> {
        self.expect_sep("{")?;
        let mut members = Vec::new();
        // Constant list, possibly empty.
        while !self.at_sep(";") && !self.at_sep("}") {
            while self.at_annotation() {
                self.parse_annotation()?;
            }
            let start = self.here();
            let name = self.expect_ident()?.text;
            let mut args = Vec::new();
            if self.at_sep("(") {
                args = self.parse_args()?;
            }
            let body = if self.at_sep("{") {
                Some(self.parse_class_body(type_name)?)
            } else {
                None
            };
            members.push(Member::EnumConstant(EnumConstant {
                name,
                args,
                body,
                span: self.span_from(start),
            }));
            if !self.eat_sep(",") {
                break;
            }
        }
        if self.eat_sep(";") {
            while !self.at_sep("}") {
                if self.peek().is_none() {
                    return Err(self.error("unexpected end of input in enum body"));
                }
                if self.eat_sep(";") {
                    continue;
                }
                members.push(self.parse_member(type_name)?);
            }
        }
        self.expect_sep("}")?;
        Ok(members)
    }

    fn parse_member(&mut self, type_name: &str) -> PResult<Member> {
        let start = self.here();
        // Nested type declaration?
        if let Some(decl) = self.try_parse(|p| p.parse_type_decl()) {
            return Ok(Member::Type(decl));
        }
        let saw_static = self.parse_modifiers()?;
        if self.at_sep("{") {
            let body = self.parse_block()?;
            return Ok(Member::Initializer(InitializerBlock {
                is_static: saw_static,
                body,
                span: self.span_from(start),
            }));
        }
        if self.at_op("<") {
            self.parse_type_params()?;
        }
        // Constructor: identifier immediately followed by `(`.
        if self.at_ident()
            && self.peek_at(1).is_some_and(|t| t.is(TokenKind::Separator, "("))
            && self.peek().is_some_and(|t| t.text == type_name)
        {
            let name = self.expect_ident()?.text;
            return self.parse_method_rest(name, MethodKind::Constructor, start);
        }
        self.parse_type()?;
        let name = self.expect_ident()?.text;
        if self.at_sep("(") {
            return self.parse_method_rest(name, MethodKind::Method, start);
        }
        // Field declaration.
        let declarators = self.parse_declarators(name, start)?;
        self.expect_sep(";")?;
        Ok(Member::Field(FieldDecl {
            declarators,
            span: self.span_from(start),
        }))
    }

    fn parse_method_rest(&mut self, name: String, kind: MethodKind, start: Pos) -> PResult<Member> {
        self.parse_formal_params()?;
        self.parse_array_dims()?;
        if self.eat_kw("throws") {
            self.parse_type()?;
            while self.eat_sep(",") {
                self.parse_type()?;
            }
        }
        let body = if self.eat_sep(";") {
            None
        } else if self.eat_kw("default") {
            // Annotation element default; skip the constant.
            while !self.at_sep(";") {
                self.advance()?;
            }
            self.expect_sep(";")?;
            None
        } else {
            Some(self.parse_block()?)
        };
        Ok(Member::Method(MethodDecl {
            name,
            kind,
            body,
            span: self.span_from(start),
        }))
    }

    fn parse_formal_params(&mut self) -> PResult<()> {
        self.expect_sep("(")?;
        if self.eat_sep(")") {
            return Ok(());
        }
        loop {
            self.parse_modifiers()?;
            self.parse_type()?;
            self.eat_sep("...");
            // Receiver parameters (`this`) and ordinary names.
            if !self.eat_kw("this") {
                self.expect_ident()?;
            }
            self.parse_array_dims()?;
            if self.eat_sep(",") {
                continue;
            }
            self.expect_sep(")")?;
            return Ok(());
        }
    }

    fn parse_declarators(&mut self, first_name: String, start: Pos) -> PResult<Vec<VarDeclarator>> {
        let mut declarators = Vec::new();
        let mut name = first_name;
        let mut decl_start = start;
        loop {
            self.parse_array_dims()?;
            let init = if self.eat_op("=") {
                Some(self.parse_var_init()?)
            } else {
                None
            };
            declarators.push(VarDeclarator {
                name,
                init,
                span: self.span_from(decl_start),
            });
            if self.eat_sep(",") {
                decl_start = self.here();
                name = self.expect_ident()?.text;
            } else {
                return Ok(declarators);
            }
        }
    }

    fn parse_var_init(&mut self) -> PResult<Expr> {
        if self.at_sep("{") {
            self.parse_array_init()
        } else {
            self.parse_expr()
        }
    }

    fn parse_array_init(&mut self) -> PResult<Expr> {
        let start = self.here();
        self.expect_sep("{")?;
        let mut values = Vec::new();
        while !self.at_sep("}") {
            values.push(self.parse_var_init()?);
            if !self.eat_sep(",") {
                break;
            }
        }
        self.expect_sep("}")?;
        Ok(Expr::ArrayInit {
            values,
            span: self.span_from(start),
        })
    }

    // ---- statements ---------------------------------------------------------

    fn parse_block(&mut self) -> PResult<Block> {
        let start = self.here();
        self.expect_sep("{")?;
        let mut stmts = Vec::new();
        while !self.at_sep("}") {
            if self.peek().is_none() {
                return Err(self.error("unexpected end of input, unbalanced '{'"));
            }
            stmts.push(self.parse_statement()?);
        }
        self.expect_sep("}")?;
        Ok(Block {
            stmts,
            span: self.span_from(start),
        })
    }

    fn parse_statement(&mut self) -> PResult<Stmt> {
        let start = self.here();
        if self.at_sep("{") {
            return Ok(Stmt::Block(self.parse_block()?));
        }
        if self.eat_sep(";") {
            return Ok(Stmt::Empty {
                span: self.span_from(start),
            });
        }
        if self.at_kw("if") {
            return self.parse_if(start);
        }
        if self.eat_kw("while") {
            self.expect_sep("(")?;
            let condition = self.parse_expr()?;
            self.expect_sep(")")?;
            let body = Box::new(self.parse_statement()?);
            return Ok(Stmt::While(WhileStmt {
                condition,
                body,
                span: self.span_from(start),
            }));
        }
        if self.eat_kw("do") {
            let body = Box::new(self.parse_statement()?);
            self.expect_kw("while")?;
            self.expect_sep("(")?;
            let condition = self.parse_expr()?;
            self.expect_sep(")")?;
            self.expect_sep(";")?;
            return Ok(Stmt::DoWhile(DoWhileStmt {
                body,
                condition,
                span: self.span_from(start),
            }));
        }
        if self.at_kw("for") {
            return self.parse_for(start);
        }
        if self.eat_kw("switch") {
            return self.parse_switch(start);
        }
        if self.eat_kw("try") {
            return self.parse_try(start);
        }
        if self.eat_kw("return") {
            let value = if self.at_sep(";") {
                None
            } else {
                Some(self.parse_expr()?)
            };
            self.expect_sep(";")?;
            return Ok(Stmt::Return {
                value,
                span: self.span_from(start),
            });
        }
        if self.eat_kw("throw") {
            let value = self.parse_expr()?;
            self.expect_sep(";")?;
            return Ok(Stmt::Throw {
                value,
                span: self.span_from(start),
            });
        }
        if self.eat_kw("break") {
            let label = if self.at_ident() {
                Some(self.advance()?.text)
            } else {
                None
            };
            self.expect_sep(";")?;
            return Ok(Stmt::Break {
                label,
                span: self.span_from(start),
            });
        }
        if self.eat_kw("continue") {
            let label = if self.at_ident() {
                Some(self.advance()?.text)
            } else {
                None
            };
            self.expect_sep(";")?;
            return Ok(Stmt::Continue {
                label,
                span: self.span_from(start),
            });
        }
        if self.at_kw("synchronized") && self.peek_at(1).is_some_and(|t| t.is(TokenKind::Separator, "("))
        {
            self.advance()?;
            self.expect_sep("(")?;
            let lock = self.parse_expr()?;
            self.expect_sep(")")?;
            let body = self.parse_block()?;
            return Ok(Stmt::Synchronized {
                lock,
                body,
                span: self.span_from(start),
            });
        }
        if self.eat_kw("assert") {
            let condition = self.parse_expr()?;
            let message = if self.eat_op(":") {
                Some(self.parse_expr()?)
            } else {
                None
            };
            self.expect_sep(";")?;
            return Ok(Stmt::Assert {
                condition,
                message,
                span: self.span_from(start),
            });
        }
        // Labeled statement.
        if self.at_ident() && self.peek_at(1).is_some_and(|t| t.is(TokenKind::Operator, ":")) {
            let label = self.advance()?.text;
            self.advance()?;
            let body = Box::new(self.parse_statement()?);
            return Ok(Stmt::Labeled {
                label,
                body,
                span: self.span_from(start),
            });
        }
        // Local class declaration.
        if let Some(decl) = self.try_parse(|p| p.parse_type_decl()) {
            return Ok(Stmt::LocalType(decl));
        }
        // Local variable declaration, resolved by speculation.
        if let Some(stmt) = self.try_parse(|p| {
            let start = p.here();
            let decl = p.parse_local_var_decl(start)?;
            p.expect_sep(";")?;
            Ok(Stmt::LocalVar(LocalVarStmt {
                declarators: decl.declarators,
                span: p.span_from(start),
            }))
        }) {
            return Ok(stmt);
        }
        let expr = self.parse_expr()?;
        self.expect_sep(";")?;
        Ok(Stmt::Expr {
            expr,
            span: self.span_from(start),
        })
    }

    fn parse_local_var_decl(&mut self, start: Pos) -> PResult<LocalVarStmt> {
        self.parse_modifiers()?;
        self.parse_type()?;
        let name = self.expect_ident()?.text;
        // Declarations continue with `=`, `,`, `;` or array dims; anything
        // else was an expression after all.
        if !(self.at_op("=") || self.at_sep(",") || self.at_sep(";") || self.at_sep("[")) {
            return Err(self.error("not a declaration"));
        }
        let declarators = self.parse_declarators(name, start)?;
        Ok(LocalVarStmt {
            declarators,
            span: self.span_from(start),
        })
    }

    fn parse_if(&mut self, start: Pos) -> PResult<Stmt> {
        self.expect_kw("if")?;
        self.expect_sep("(")?;
        let condition = self.parse_expr()?;
        self.expect_sep(")")?;
        let then_branch = Box::new(self.parse_statement()?);
        let else_branch = if self.eat_kw("else") {
            Some(Box::new(self.parse_statement()?))
        } else {
            None
        };
        Ok(Stmt::If(IfStmt {
            condition,
            then_branch,
            else_branch,
            span: self.span_from(start),
        }))
    }

    fn parse_for(&mut self, start: Pos) -> PResult<Stmt> {
        self.expect_kw("for")?;
        self.expect_sep("(")?;
        // Enhanced for: `for (mods Type name : iterable)`.
        if let Some((var_name, iterable)) = self.try_parse(|p| {
            p.parse_modifiers()?;
            p.parse_type()?;
            let name = p.expect_ident()?.text;
            p.parse_array_dims()?;
            p.expect_op(":")?;
            let iterable = p.parse_expr()?;
            p.expect_sep(")")?;
            Ok((name, iterable))
        }) {
            let body = Box::new(self.parse_statement()?);
            return Ok(Stmt::ForEach(ForEachStmt {
                var_name,
                iterable,
                body,
                span: self.span_from(start),
            }));
        }
        // Basic for.
        let mut init = Vec::new();
        if !self.at_sep(";") {
            let init_start = self.here();
            if let Some(decl) = self.try_parse(|p| {
                let s = p.here();
                p.parse_local_var_decl(s)
            }) {
                init.push(Stmt::LocalVar(decl));
            } else {
                loop {
                    let s = self.here();
                    let expr = self.parse_expr()?;
                    init.push(Stmt::Expr {
                        expr,
                        span: self.span_from(s),
                    });
                    if !self.eat_sep(",") {
                        break;
                    }
                }
            }
            let _ = init_start;
        }
        self.expect_sep(";")?;
        let condition = if self.at_sep(";") {
            None
        } else {
            Some(self.parse_expr()?)
        };
        self.expect_sep(";")?;
        let mut update = Vec::new();
        if !self.at_sep(")") {
            loop {
                update.push(self.parse_expr()?);
                if !self.eat_sep(",") {
                    break;
                }
            }
        }
        self.expect_sep(")")?;
        let body = Box::new(self.parse_statement()?);
        Ok(Stmt::For(ForStmt {
            init,
            condition,
            update,
            body,
            span: self.span_from(start),
        }))
    }

    fn parse_switch(&mut self, start: Pos) -> PResult<Stmt> {
        self.expect_sep("(")?;
        let scrutinee = self.parse_expr()?;
        self.expect_sep(")")?;
        self.expect_sep("{")?;
        let mut arms = Vec::new();
        while !self.at_sep("}") {
            let arm_start = self.here();
            let mut labels = Vec::new();
            loop {
                if self.eat_kw("case") {
                    labels.push(Some(self.parse_expr()?));
                    self.expect_op(":")?;
                } else if self.eat_kw("default") {
                    labels.push(None);
                    self.expect_op(":")?;
                } else {
                    break;
                }
            }
            if labels.is_empty() {
                return Err(self.error("expected 'case' or 'default' label"));
            }
            let mut stmts = Vec::new();
            while !self.at_sep("}") && !self.at_kw("case") && !self.at_kw("default") {
                stmts.push(self.parse_statement()?);
            }
            arms.push(SwitchArm {
                labels,
                stmts,
                span: self.span_from(arm_start),
            });
        }
        self.expect_sep("}")?;
        Ok(Stmt::Switch(SwitchStmt {
            scrutinee,
            arms,
            span: self.span_from(start),
        }))
    }

    fn parse_try(&mut self, start: Pos) -> PResult<Stmt> {
        let mut resources = Vec::new();
        if self.eat_sep("(") {
            loop {
                let s = self.here();
                let decl = self.parse_local_var_decl(s)?;
                resources.push(decl);
                if !self.eat_sep(";") {
                    break;
                }
                if self.at_sep(")") {
                    break;
                }
            }
            self.expect_sep(")")?;
        }
        let body = self.parse_block()?;
        let mut catches = Vec::new();
        while self.at_kw("catch") {
            let cstart = self.here();
            self.advance()?;
            self.expect_sep("(")?;
            self.parse_modifiers()?;
            self.parse_type()?;
            while self.eat_op("|") {
                self.parse_type()?;
            }
            let param = self.expect_ident()?.text;
            self.expect_sep(")")?;
            let cbody = self.parse_block()?;
            catches.push(CatchClause {
                param,
                body: cbody,
                span: self.span_from(cstart),
            });
        }
        let finally = if self.eat_kw("finally") {
            Some(self.parse_block()?)
        } else {
            None
        };
        if catches.is_empty() && finally.is_none() && resources.is_empty() {
            return Err(self.error("try statement requires catch, finally, or resources"));
        }
        Ok(Stmt::Try(TryStmt {
            resources,
            body,
            catches,
            finally,
            span: self.span_from(start),
        }))
    }

    // ---- expressions ----------------------------------------------------------

    pub(crate) fn parse_expr(&mut self) -> PResult<Expr> {
        self.parse_assignment()
    }

    fn parse_assignment(&mut self) -> PResult<Expr> {
        let start = self.here();
        let lhs = self.parse_ternary()?;
        let op = if self.at_op("=") {
            Some(AssignOp::Assign)
        } else if self.at_op("+=") {
            Some(AssignOp::Add)
        } else if self.at_op("-=") {
            Some(AssignOp::Sub)
        } else if self.at_op("*=") {
            Some(AssignOp::Mul)
        } else if self.at_op("/=") {
            Some(AssignOp::Div)
        } else if self.at_op("%=") {
            Some(AssignOp::Rem)
        } else if self.at_op("<<=") {
            Some(AssignOp::Shl)
        } else if self.at_op(">>=") {
            Some(AssignOp::Shr)
        } else if self.at_op(">>>=") {
            Some(AssignOp::UShr)
        } else if self.at_op("&=") {
            Some(AssignOp::BitAnd)
        } else if self.at_op("|=") {
            Some(AssignOp::BitOr)
        } else if self.at_op("^=") {
            Some(AssignOp::BitXor)
        } else {
            None
        };
        if let Some(op) = op {
            self.advance()?;
            let value = self.parse_assignment()?;
            return Ok(Expr::Assign {
                op,
                target: Box::new(lhs),
                value: Box::new(value),
                span: self.span_from(start),
            });
        }
        Ok(lhs)
    }

    fn parse_ternary(&mut self) -> PResult<Expr> {
        let start = self.here();
        let condition = self.parse_binary(0)?;
        if self.eat_op("?") {
            let then_value = self.parse_expr()?;
            self.expect_op(":")?;
            let else_value = self.parse_assignment()?;
            return Ok(Expr::Ternary {
                condition: Box::new(condition),
                then_value: Box::new(then_value),
                else_value: Box::new(else_value),
                span: self.span_from(start),
            });
        }
        Ok(condition)
    }

    /// Binary operator levels, loosest first.
    fn binary_op_at_level(&self, level: usize) -> Option<BinaryOp> {
        if self.pending_gt > 0 {
            return None;
        }
        let tok = self.peek()?;
        if tok.kind != TokenKind::Operator {
            return None;
        }
        let op = match (level, tok.text.as_str()) {
            (0, "||") => BinaryOp::OrOr,
            (1, "&&") => BinaryOp::AndAnd,
            (2, "|") => BinaryOp::BitOr,
            (3, "^") => BinaryOp::BitXor,
            (4, "&") => BinaryOp::BitAnd,
            (5, "==") => BinaryOp::Eq,
            (5, "!=") => BinaryOp::Ne,
            (6, "<") => BinaryOp::Lt,
            (6, ">") => BinaryOp::Gt,
            (6, "<=") => BinaryOp::Le,
            (6, ">=") => BinaryOp::Ge,
            (7, "<<") => BinaryOp::Shl,
            (7, ">>") => BinaryOp::Shr,
            (7, ">>>") => BinaryOp::UShr,
            (8, "+") => BinaryOp::Add,
            (8, "-") => BinaryOp::Sub,
            (9, "*") => BinaryOp::Mul,
            (9, "/") => BinaryOp::Div,
            (9, "%") => BinaryOp::Rem,
            _ => return None,
        };
        Some(op)
    }

    fn parse_binary(&mut self, level: usize) -> PResult<Expr> {
        if level > 9 {
            return self.parse_unary();
        }
        let start = self.here();
        let mut lhs = self.parse_binary(level + 1)?;
        loop {
            // `instanceof` sits at relational precedence.
            if level == 6 && self.at_kw("instanceof") {
                self.advance()?;
                self.parse_type()?;
                lhs = Expr::InstanceOf {
                    expr: Box::new(lhs),
                    span: self.span_from(start),
                };
                continue;
            }
            let Some(op) = self.binary_op_at_level(level) else {
                return Ok(lhs);
            };
            self.advance()?;
            let rhs = self.parse_binary(level + 1)?;
            lhs = Expr::Binary {
                op,
                lhs: Box::new(lhs),
                rhs: Box::new(rhs),
                span: self.span_from(start),
            };
        }
    }

    fn parse_unary(&mut self) -> PResult<Expr> {
        let start = self.here();
        let prefix = if self.at_op("+") {
            Some(UnaryOp::Plus)
        } else if self.at_op("-") {
            Some(UnaryOp::Minus)
        } else if self.at_op("!") {
            Some(UnaryOp::Not)
        } else if self.at_op("~") {
            Some(UnaryOp::BitNot)
        } else if self.at_op("++") {
            Some(UnaryOp::PreInc)
        } else if self.at_op("--") {
            Some(UnaryOp::PreDec)
        } else {
            None
        };
        if let Some(op) = prefix {
            self.advance()?;
            let operand = self.parse_unary()?;
            return Ok(Expr::Unary {
                op,
                operand: Box::new(operand),
                span: self.span_from(start),
            });
        }
        if self.at_sep("(") {
            if let Some(cast) = self.try_parse(|p| p.parse_cast(start)) {
                return Ok(cast);
            }
        }
        self.parse_postfix()
    }

    fn parse_cast(&mut self, start: Pos) -> PResult<Expr> {
        self.expect_sep("(")?;
        let primitive = self.parse_type()?;
        self.expect_sep(")")?;
        let ok = match self.peek() {
            Some(t) => match t.kind {
                TokenKind::Identifier
                | TokenKind::NumericLiteral
                | TokenKind::StringLiteral
                | TokenKind::CharLiteral
                | TokenKind::BoolOrNullLiteral => true,
                TokenKind::Separator => t.text == "(",
                TokenKind::Keyword => {
                    matches!(t.text.as_str(), "this" | "super" | "new")
                        || PRIMITIVES.contains(&t.text.as_str())
                }
                TokenKind::Operator => {
                    t.text == "!"
                        || t.text == "~"
                        || (primitive && matches!(t.text.as_str(), "+" | "-" | "++" | "--"))
                }
            },
            None => false,
        };
        if !ok {
            return Err(self.error("not a cast"));
        }
        let expr = self.parse_unary()?;
        Ok(Expr::Cast {
            expr: Box::new(expr),
            span: self.span_from(start),
        })
    }

    fn parse_postfix(&mut self) -> PResult<Expr> {
        let start = self.here();
        let mut expr = self.parse_primary()?;
        loop {
            if self.at_sep(".") {
                self.advance()?;
                if self.eat_kw("class") {
                    expr = Expr::ClassLiteral {
                        span: self.span_from(start),
                    };
                    continue;
                }
                if self.eat_kw("this") {
                    expr = Expr::This {
                        span: self.span_from(start),
                    };
                    continue;
                }
                if self.eat_kw("super") {
                    expr = Expr::Super {
                        span: self.span_from(start),
                    };
                    continue;
                }
                if self.at_kw("new") {
                    expr = self.parse_new(start)?;
                    continue;
                }
                if self.at_op("<") {
                    // Explicit type arguments on a method call.
                    self.parse_type_args()?;
                }
                let name = self.expect_ident()?.text;
                expr = Expr::FieldAccess {
                    target: Box::new(expr),
                    name,
                    span: self.span_from(start),
                };
                continue;
            }
            if self.at_sep("(")
                && matches!(
                    expr,
                    Expr::Name { .. } | Expr::FieldAccess { .. } | Expr::This { .. } | Expr::Super { .. }
                )
            {
                let args = self.parse_args()?;
                expr = Expr::Call {
                    callee: Box::new(expr),
                    args,
                    span: self.span_from(start),
                };
                continue;
            }
            if self.at_sep("[") {
                // `Name[]::new` array constructor references.
                if self.peek_at(1).is_some_and(|t| t.is(TokenKind::Separator, "]")) {
                    self.parse_array_dims()?;
                    self.expect_sep("::")?;
                    self.eat_kw("new");
                    return Ok(Expr::MethodRef {
                        target: Some(Box::new(expr)),
                        span: self.span_from(start),
                    });
                }
                self.advance()?;
                let index = self.parse_expr()?;
                self.expect_sep("]")?;
                expr = Expr::Index {
                    target: Box::new(expr),
                    index: Box::new(index),
                    span: self.span_from(start),
                };
                continue;
            }
            if self.at_sep("::") {
                self.advance()?;
                if self.at_op("<") {
                    self.parse_type_args()?;
                }
                if !self.eat_kw("new") {
                    self.expect_ident()?;
                }
                expr = Expr::MethodRef {
                    target: Some(Box::new(expr)),
                    span: self.span_from(start),
                };
                continue;
            }
            if self.at_op("++") {
                self.advance()?;
                expr = Expr::Unary {
                    op: UnaryOp::PostInc,
                    operand: Box::new(expr),
                    span: self.span_from(start),
                };
                continue;
            }
            if self.at_op("--") {
                self.advance()?;
                expr = Expr::Unary {
                    op: UnaryOp::PostDec,
                    operand: Box::new(expr),
                    span: self.span_from(start),
                };
                continue;
            }
            return Ok(expr);
        }
    }

    fn parse_args(&mut self) -> PResult<Vec<Expr>> {
        self.expect_sep("(")?;
        let mut args = Vec::new();
        if self.eat_sep(")") {
            return Ok(args);
        }
        loop {
            args.push(self.parse_expr()?);
            if self.eat_sep(",") {
                continue;
            }
            self.expect_sep(")")?;
            return Ok(args);
        }
    }

    /// Token scan from an open `(` to decide whether a lambda follows.
    fn lambda_ahead(&self) -> bool {
        debug_assert!(self.at_sep("("));
        let mut depth = 0usize;
        let mut i = self.idx;
        while let Some(tok) = self.tokens.get(i) {
            if tok.kind == TokenKind::Separator {
                match tok.text.as_str() {
                    "(" | "[" | "{" => depth += 1,
                    ")" | "]" | "}" => {
                        if depth == 0 {
                            return false;
                        }
                        depth -= 1;
                        if depth == 0 {
                            return self
                                .tokens
                                .get(i + 1)
                                .is_some_and(|t| t.is(TokenKind::Operator, "->"));
                        }
                    }
                    _ => {}
                }
            }
            i += 1;
        }
        false
    }

    fn parse_lambda_body(&mut self, start: Pos) -> PResult<Expr> {
        let body = if self.at_sep("{") {
            LambdaBody::Block(self.parse_block()?)
        } else {
            LambdaBody::Expr(Box::new(self.parse_expr()?))
        };
        Ok(Expr::Lambda {
            body,
            span: self.span_from(start),
        })
    }

    fn parse_primary(&mut self) -> PResult<Expr> {
        let start = self.here();
        if self.at_sep("(") {
            if self.lambda_ahead() {
                self.skip_balanced()?;
                self.expect_op("->")?;
                return self.parse_lambda_body(start);
            }
            self.advance()?;
            let inner = self.parse_expr()?;
            self.expect_sep(")")?;
            return Ok(Expr::Paren {
                inner: Box::new(inner),
                span: self.span_from(start),
            });
        }
        let Some(tok) = self.peek().cloned() else {
            return Err(self.error("expected expression"));
        };
        match tok.kind {
            TokenKind::NumericLiteral => {
                self.advance()?;
                Ok(Expr::Literal {
                    kind: LiteralKind::Number,
                    text: tok.text,
                    span: self.span_from(start),
                })
            }
            TokenKind::StringLiteral => {
                self.advance()?;
                Ok(Expr::Literal {
                    kind: LiteralKind::String,
                    text: tok.text,
                    span: self.span_from(start),
                })
            }
            TokenKind::CharLiteral => {
                self.advance()?;
                Ok(Expr::Literal {
                    kind: LiteralKind::Char,
                    text: tok.text,
                    span: self.span_from(start),
                })
            }
            TokenKind::BoolOrNullLiteral => {
                self.advance()?;
                let kind = if tok.text == "null" {
                    LiteralKind::Null
                } else {
                    LiteralKind::Bool
                };
                Ok(Expr::Literal {
                    kind,
                    text: tok.text,
                    span: self.span_from(start),
                })
            }
            TokenKind::Identifier => {
                // Single-parameter lambda without parentheses.
                if self.peek_at(1).is_some_and(|t| t.is(TokenKind::Operator, "->")) {
                    self.advance()?;
                    self.advance()?;
                    return self.parse_lambda_body(start);
                }
                self.advance()?;
                Ok(Expr::Name {
                    ident: tok.text,
                    span: self.span_from(start),
                })
            }
            TokenKind::Keyword => match tok.text.as_str() {
                "this" => {
                    self.advance()?;
                    Ok(Expr::This {
                        span: self.span_from(start),
                    })
                }
                "super" => {
                    self.advance()?;
                    Ok(Expr::Super {
                        span: self.span_from(start),
                    })
                }
                "new" => self.parse_new(start),
                kw if PRIMITIVES.contains(&kw) => {
                    // `int.class`, `double[].class`, `int[]::new`.
                    self.parse_type()?;
                    if self.eat_sep("::") {
                        self.eat_kw("new");
                        return Ok(Expr::MethodRef {
                            target: None,
                            span: self.span_from(start),
                        });
                    }
                    self.expect_sep(".")?;
                    self.expect_kw("class")?;
                    Ok(Expr::ClassLiteral {
                        span: self.span_from(start),
                    })
                }
                _ => Err(self.error(format!("unexpected keyword '{}'", tok.text))),
            },
            _ => Err(self.error(format!("unexpected token '{}'", tok.text))),
        }
    }

    fn parse_new(&mut self, start: Pos) -> PResult<Expr> {
        self.expect_kw("new")?;
        if self.at_op("<") {
            self.parse_type_args()?;
        }
        while self.at_annotation() {
            self.parse_annotation()?;
        }
        // Type name without trailing array dims; dims are creation syntax here.
        if self.at_primitive() {
            self.advance()?;
        } else {
            self.expect_ident()?;
            if self.at_op("<") {
                self.parse_type_args()?;
            }
            while self.at_sep(".") && self.peek_at(1).is_some_and(|t| t.kind == TokenKind::Identifier)
            {
                self.advance()?;
                self.expect_ident()?;
                if self.at_op("<") {
                    self.parse_type_args()?;
                }
            }
        }
        if self.at_sep("[") {
            let mut dims = Vec::new();
            let mut saw_empty = false;
            while self.at_sep("[") {
                self.advance()?;
                if self.eat_sep("]") {
                    saw_empty = true;
                    continue;
                }
                dims.push(self.parse_expr()?);
                self.expect_sep("]")?;
            }
            let init = if self.at_sep("{") && (saw_empty || dims.is_empty()) {
                Some(Box::new(self.parse_array_init()?))
            } else {
                None
            };
            return Ok(Expr::NewArray {
                dims,
                init,
                span: self.span_from(start),
            });
        }
        let args = self.parse_args()?;
        let body = if self.at_sep("{") {
            Some(self.parse_class_body("<anonymous>")?)
        } else {
            None
        };
        Ok(Expr::New {
            args,
            body,
            span: self.span_from(start),
        })
    }
}

/// Parse a Java compilation unit.
pub fn parse_compilation_unit(source: &str) -> Result<CompilationUnit, ParseError> {
    let LexOutput { tokens, .. } = lex_full(source).map_err(|e| ParseError {
        line: e.line,
        col: e.col,
        message: e.message,
    })?;
    let eof = end_of_source(source);
    let mut parser = Parser::new(tokens, eof);
    let unit = parser.parse_compilation_unit()?;
    if parser.peek().is_some() {
        return Err(parser.error("trailing input after compilation unit"));
    }
    Ok(unit)
}

pub(crate) fn end_of_source(source: &str) -> Pos {
    let mut line = 1u32;
    let mut col = 1u32;
    for c in source.chars() {
        if c == '\n' {
            line += 1;
            col = 1;
        } else {
            col += 1;
        }
    }
    Pos::new(line, col)
}
