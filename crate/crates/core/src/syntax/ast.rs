//! Typed syntax tree for the subset of Java 8 the metrics need.
//!
//! The tree is structural: no name resolution, no types. Explicit
//! parentheses are preserved as [`Expr::Paren`] nodes because the
//! metric rules distinguish parenthesized from unparenthesized operands.
//! Annotation arguments are deliberately not represented; they never
//! participate in any metric.

use crate::span::Span;

#[derive(Debug, Clone, PartialEq)]
pub struct CompilationUnit {
    pub types: Vec<TypeDecl>,
    pub span: Span,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TypeKind {
    Class,
    Interface,
    Enum,
    Annotation,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TypeDecl {
    pub name: String,
    pub kind: TypeKind,
    pub members: Vec<Member>,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Member {
    Method(MethodDecl),
    Field(FieldDecl),
    Initializer(InitializerBlock),
    Type(TypeDecl),
    EnumConstant(EnumConstant),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MethodKind {
    Method,
    Constructor,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MethodDecl {
    pub name: String,
    pub kind: MethodKind,
    /// `None` for abstract and native methods.
    pub body: Option<Block>,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InitializerBlock {
    pub is_static: bool,
    pub body: Block,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FieldDecl {
    pub declarators: Vec<VarDeclarator>,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VarDeclarator {
    pub name: String,
    pub init: Option<Expr>,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnumConstant {
    pub name: String,
    pub args: Vec<Expr>,
    pub body: Option<Vec<Member>>,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Block {
    pub stmts: Vec<Stmt>,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Stmt {
    Block(Block),
    If(IfStmt),
    While(WhileStmt),
    DoWhile(DoWhileStmt),
    For(ForStmt),
    ForEach(ForEachStmt),
    Switch(SwitchStmt),
    Try(TryStmt),
    Return { value: Option<Expr>, span: Span },
    Throw { value: Expr, span: Span },
    Break { label: Option<String>, span: Span },
    Continue { label: Option<String>, span: Span },
    Labeled { label: String, body: Box<Stmt>, span: Span },
    Synchronized { lock: Expr, body: Block, span: Span },
    Assert { condition: Expr, message: Option<Expr>, span: Span },
    LocalVar(LocalVarStmt),
    LocalType(TypeDecl),
    Expr { expr: Expr, span: Span },
    Empty { span: Span },
}

#[derive(Debug, Clone, PartialEq)]
pub struct IfStmt {
    pub condition: Expr,
    pub then_branch: Box<Stmt>,
    pub else_branch: Option<Box<Stmt>>,
    pub span: Span,
}

impl IfStmt {
    /// Whether the then-branch is a braced block.
    pub fn then_braced(&self) -> bool {
        matches!(*self.then_branch, Stmt::Block(_))
    }

    /// Whether the else-branch, if present, continues an `else if` chain.
    pub fn else_is_if(&self) -> bool {
        matches!(self.else_branch.as_deref(), Some(Stmt::If(_)))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WhileStmt {
    pub condition: Expr,
    pub body: Box<Stmt>,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DoWhileStmt {
    pub body: Box<Stmt>,
    pub condition: Expr,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ForStmt {
    pub init: Vec<Stmt>,
    pub condition: Option<Expr>,
    pub update: Vec<Expr>,
    pub body: Box<Stmt>,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ForEachStmt {
    pub var_name: String,
    pub iterable: Expr,
    pub body: Box<Stmt>,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SwitchStmt {
    pub scrutinee: Expr,
    pub arms: Vec<SwitchArm>,
    pub span: Span,
}

/// One `case`/`default` group and the statements that follow it.
#[derive(Debug, Clone, PartialEq)]
pub struct SwitchArm {
    /// `None` marks a `default` label.
    pub labels: Vec<Option<Expr>>,
    pub stmts: Vec<Stmt>,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TryStmt {
    pub resources: Vec<LocalVarStmt>,
    pub body: Block,
    pub catches: Vec<CatchClause>,
    pub finally: Option<Block>,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CatchClause {
    pub param: String,
    pub body: Block,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LocalVarStmt {
    pub declarators: Vec<VarDeclarator>,
    pub span: Span,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinaryOp {
    Add,
    Sub,
    Mul,
    Div,
    Rem,
    Shl,
    Shr,
    UShr,
    Lt,
    Gt,
    Le,
    Ge,
    Eq,
    Ne,
    BitAnd,
    BitXor,
    BitOr,
    AndAnd,
    OrOr,
}

impl BinaryOp {
    pub fn is_logical(self) -> bool {
        matches!(self, BinaryOp::AndAnd | BinaryOp::OrOr)
    }

    pub fn symbol(self) -> &'static str {
        use BinaryOp::*;
        match self {
            Add => "+",
            Sub => "-",
            Mul => "*",
            Div => "/",
            Rem => "%",
            Shl => "<<",
            Shr => ">>",
            UShr => ">>>",
            Lt => "<",
            Gt => ">",
            Le => "<=",
            Ge => ">=",
            Eq => "==",
            Ne => "!=",
            BitAnd => "&",
            BitXor => "^",
            BitOr => "|",
            AndAnd => "&&",
            OrOr => "||",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnaryOp {
    Plus,
    Minus,
    Not,
    BitNot,
    PreInc,
    PreDec,
    PostInc,
    PostDec,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AssignOp {
    Assign,
    Add,
    Sub,
    Mul,
    Div,
    Rem,
    Shl,
    Shr,
    UShr,
    BitAnd,
    BitXor,
    BitOr,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LiteralKind {
    Number,
    String,
    Char,
    Bool,
    Null,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Binary {
        op: BinaryOp,
        lhs: Box<Expr>,
        rhs: Box<Expr>,
        span: Span,
    },
    Unary {
        op: UnaryOp,
        operand: Box<Expr>,
        span: Span,
    },
    Assign {
        op: AssignOp,
        target: Box<Expr>,
        value: Box<Expr>,
        span: Span,
    },
    Ternary {
        condition: Box<Expr>,
        then_value: Box<Expr>,
        else_value: Box<Expr>,
        span: Span,
    },
    Paren {
        inner: Box<Expr>,
        span: Span,
    },
    Literal {
        kind: LiteralKind,
        text: String,
        span: Span,
    },
    Name {
        ident: String,
        span: Span,
    },
    FieldAccess {
        target: Box<Expr>,
        name: String,
        span: Span,
    },
    Call {
        callee: Box<Expr>,
        args: Vec<Expr>,
        span: Span,
    },
    /// `new T(...)`, optionally with an anonymous class body.
    New {
        args: Vec<Expr>,
        body: Option<Vec<Member>>,
        span: Span,
    },
    NewArray {
        dims: Vec<Expr>,
        init: Option<Box<Expr>>,
        span: Span,
    },
    ArrayInit {
        values: Vec<Expr>,
        span: Span,
    },
    Index {
        target: Box<Expr>,
        index: Box<Expr>,
        span: Span,
    },
    Cast {
        expr: Box<Expr>,
        span: Span,
    },
    InstanceOf {
        expr: Box<Expr>,
        span: Span,
    },
    Lambda {
        body: LambdaBody,
        span: Span,
    },
    MethodRef {
        target: Option<Box<Expr>>,
        span: Span,
    },
    ClassLiteral {
        span: Span,
    },
    This {
        span: Span,
    },
    Super {
        span: Span,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub enum LambdaBody {
    Expr(Box<Expr>),
    Block(Block),
}

impl Expr {
    pub fn span(&self) -> Span {
        use Expr::*;
        match self {
            Binary { span, .. }
            | Unary { span, .. }
            | Assign { span, .. }
            | Ternary { span, .. }
            | Paren { span, .. }
            | Literal { span, .. }
            | Name { span, .. }
            | FieldAccess { span, .. }
            | Call { span, .. }
            | New { span, .. }
            | NewArray { span, .. }
            | ArrayInit { span, .. }
            | Index { span, .. }
            | Cast { span, .. }
            | InstanceOf { span, .. }
            | Lambda { span, .. }
            | MethodRef { span, .. }
            | ClassLiteral { span }
            | This { span }
            | Super { span } => *span,
        }
    }
}

impl Stmt {
    pub fn span(&self) -> Span {
        use Stmt::*;
        match self {
            Block(b) => b.span,
            If(s) => s.span,
            While(s) => s.span,
            DoWhile(s) => s.span,
            For(s) => s.span,
            ForEach(s) => s.span,
            Switch(s) => s.span,
            Try(s) => s.span,
            Return { span, .. }
            | Throw { span, .. }
            | Break { span, .. }
            | Continue { span, .. }
            | Labeled { span, .. }
            | Synchronized { span, .. }
            | Assert { span, .. }
            | Expr { span, .. }
            | Empty { span } => *span,
            LocalVar(s) => s.span,
            LocalType(t) => t.span,
        }
    }
}

impl Member {
    pub fn span(&self) -> Span {
        match self {
            Member::Method(m) => m.span,
            Member::Field(f) => f.span,
            Member::Initializer(i) => i.span,
            Member::Type(t) => t.span,
            Member::EnumConstant(c) => c.span,
        }
    }
}
