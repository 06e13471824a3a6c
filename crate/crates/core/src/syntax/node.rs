//! Normalized syntax tree.
//!
//! Every construct of the host grammar is lowered into a [`SyntaxNode`] with a
//! [`NodeKind`], an ordered list of children and a source [`Span`]. Compound
//! statements keep their sub-blocks as [`NodeKind::Block`] children tagged with
//! a [`BlockRole`], so the child layout of each kind is fixed:
//!
//! | kind | children |
//! |------|----------|
//! | `Module` | statements |
//! | `FunctionDef` (text = name) | `Block(Decorators)`, `Block(Parameters)`, `Block(Returns)`, `Block(Body)` |
//! | `ClassDef` (text = name) | `Block(Decorators)`, `Block(Bases)`, `Block(Body)` |
//! | `Parameter` (text = name) | `Block(Annotation)`, `Block(Default)` |
//! | `Assignment` | targets…, optional `Annotation`, value (always last) |
//! | `AnnotatedDeclaration` | target, `Annotation` |
//! | `AugmentedAssignment` (text = op) | target, value |
//! | `ExpressionStatement` | expression |
//! | `If` / `While` | test, `Block(Body)`, `Block(OrElse)` |
//! | `For` | target, iterable, `Block(Body)`, `Block(OrElse)` |
//! | `Try` | `Block(Body)`, `Block(Handlers)`, `Block(OrElse)`, `Block(Finally)` |
//! | `ExceptHandler` (text = bound name) | `Block(HandlerType)`, `Block(Body)` |
//! | `With` | `Block(Items)` of `WithItem`, `Block(Body)` |
//! | `WithItem` | context expression, optional target |
//! | `Return` | optional value |
//! | `Raise` | optional exception, optional cause |
//! | `Import` (text = `from` module, if any) | `Alias`… |
//! | `Alias` (text = dotted name) | optional `Name` for the `as` binding |
//! | `Match` | subject, `MatchCase`… |
//! | `MatchCase` | `Block(Pattern)`, `Block(Guard)`, `Block(Body)` |
//! | `Call` | callee, positional arguments…, `Keyword`… |
//! | `Keyword` (text = name, absent for `**`) | value |
//! | `AttributeAccess` (text = attribute) | receiver |
//! | `Subscript` | receiver, index |
//! | `SliceExpression` | present bounds |
//! | `BinaryOp` / `UnaryOp` (text = operator) | operands |
//! | `BoolOp` (text = `and`/`or`) | operands |
//! | `Compare` (text = operators joined by `,`) | left, comparators… |
//! | `Comprehension` | element (key, value for dicts), `ComprehensionClause`… |
//! | `ComprehensionClause` | target, iterable, conditions… |
//! | `ConditionalExpr` | test, body, orelse |
//! | `Lambda` | `Block(Parameters)`, body |

use serde::{Deserialize, Serialize};
use std::fmt;

/// Source region; lines are 1-based, columns are 0-based UTF-8 byte offsets,
/// `end_col` is exclusive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Span {
    pub start_line: u32,
    pub start_col: u32,
    pub end_line: u32,
    pub end_col: u32,
}

impl Span {
    pub fn new(start_line: u32, start_col: u32, end_line: u32, end_col: u32) -> Self {
        Span { start_line, start_col, end_line, end_col }
    }

    pub fn point(line: u32, col: u32) -> Self {
        Span::new(line, col, line, col)
    }

    pub fn start(&self) -> (u32, u32) {
        (self.start_line, self.start_col)
    }

    pub fn end(&self) -> (u32, u32) {
        (self.end_line, self.end_col)
    }

    /// Smallest span covering both.
    pub fn union(&self, other: &Span) -> Span {
        let (sl, sc) = self.start().min(other.start());
        let (el, ec) = self.end().max(other.end());
        Span::new(sl, sc, el, ec)
    }

    pub fn encloses(&self, other: &Span) -> bool {
        self.start() <= other.start() && other.end() <= self.end()
    }

    pub fn lines(&self) -> LineRange {
        LineRange::new(self.start_line, self.end_line)
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}-{}:{}", self.start_line, self.start_col, self.end_line, self.end_col)
    }
}

/// Inclusive range of physical lines.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LineRange {
    pub first: u32,
    pub last: u32,
}

impl LineRange {
    pub fn new(first: u32, last: u32) -> Self {
        LineRange { first, last: last.max(first) }
    }

    pub fn len(&self) -> u32 {
        self.last - self.first + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, line: u32) -> bool {
        self.first <= line && line <= self.last
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LiteralKind {
    Str,
    Bytes,
    Int,
    Float,
    Complex,
    Bool,
    None,
    Ellipsis,
}

impl LiteralKind {
    pub fn is_numeric(self) -> bool {
        matches!(self, LiteralKind::Int | LiteralKind::Float | LiteralKind::Complex)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ComprehensionKind {
    List,
    Set,
    Dict,
    Generator,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BlockRole {
    Body,
    OrElse,
    Handlers,
    Finally,
    Decorators,
    Parameters,
    Returns,
    Bases,
    Items,
    HandlerType,
    Annotation,
    Default,
    Pattern,
    Guard,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum NodeKind {
    Module,
    FunctionDef,
    ClassDef,
    Parameter,
    Assignment,
    AnnotatedDeclaration,
    AugmentedAssignment,
    ExpressionStatement,
    If,
    For,
    While,
    Try,
    ExceptHandler,
    With,
    WithItem,
    Return,
    Raise,
    Break,
    Continue,
    Pass,
    Import,
    Alias,
    Global,
    Assert,
    Delete,
    Match,
    MatchCase,
    Call,
    Keyword,
    AttributeAccess,
    Subscript,
    SliceExpression,
    Name,
    Literal(LiteralKind),
    BinaryOp,
    BoolOp,
    UnaryOp,
    Compare,
    TupleExpr,
    ListExpr,
    SetExpr,
    DictExpr,
    Comprehension(ComprehensionKind),
    ComprehensionClause,
    ConditionalExpr,
    FormattedString,
    StarTarget,
    NamedExpr,
    Lambda,
    Annotation,
    Block(BlockRole),
    /// Constructs without a dedicated kind (await, yield, match patterns, ...).
    Opaque,
}

impl NodeKind {
    pub fn is_statement(self) -> bool {
        use NodeKind::*;
        matches!(
            self,
            FunctionDef
                | ClassDef
                | Assignment
                | AnnotatedDeclaration
                | AugmentedAssignment
                | ExpressionStatement
                | If
                | For
                | While
                | Try
                | With
                | Return
                | Raise
                | Break
                | Continue
                | Pass
                | Import
                | Global
                | Assert
                | Delete
                | Match
        )
    }

    /// Expression kinds that count as a transformation step.
    pub fn is_compound_expression(self) -> bool {
        use NodeKind::*;
        matches!(
            self,
            Call | BinaryOp
                | BoolOp
                | Compare
                | Subscript
                | SliceExpression
                | Comprehension(_)
                | ConditionalExpr
                | FormattedString
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntaxNode {
    pub kind: NodeKind,
    pub children: Vec<SyntaxNode>,
    pub span: Span,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub text: Option<String>,
}

impl SyntaxNode {
    /// Builds a node whose span is widened to cover all children.
    pub fn new(kind: NodeKind, span: Span, text: Option<String>, children: Vec<SyntaxNode>) -> Self {
        let span = children.iter().fold(span, |acc, c| acc.union(&c.span));
        SyntaxNode { kind, children, span, text }
    }

    pub fn leaf(kind: NodeKind, span: Span, text: Option<String>) -> Self {
        SyntaxNode { kind, children: Vec::new(), span, text }
    }

    pub fn text(&self) -> Option<&str> {
        self.text.as_deref()
    }

    pub fn child(&self, index: usize) -> Option<&SyntaxNode> {
        self.children.get(index)
    }

    /// First child block with the given role.
    pub fn block(&self, role: BlockRole) -> Option<&SyntaxNode> {
        self.children.iter().find(|c| c.kind == NodeKind::Block(role))
    }

    /// Statements (or other items) of a block child; empty when absent.
    pub fn block_items(&self, role: BlockRole) -> &[SyntaxNode] {
        self.block(role).map(|b| b.children.as_slice()).unwrap_or(&[])
    }

    pub fn is_name(&self, name: &str) -> bool {
        self.kind == NodeKind::Name && self.text() == Some(name)
    }

    pub fn is_string_literal(&self) -> bool {
        self.kind == NodeKind::Literal(LiteralKind::Str)
    }

    pub fn string_value(&self) -> Option<&str> {
        if self.is_string_literal() {
            self.text()
        } else {
            None
        }
    }

    /// `a.b.c` for name/attribute chains, `None` otherwise.
    pub fn dotted_name(&self) -> Option<String> {
        match self.kind {
            NodeKind::Name => self.text.clone(),
            NodeKind::AttributeAccess => {
                let base = self.children.first()?.dotted_name()?;
                Some(format!("{}.{}", base, self.text()?))
            }
            _ => None,
        }
    }

    /// Innermost name at the root of an attribute/subscript/call chain.
    pub fn root_name(&self) -> Option<&str> {
        match self.kind {
            NodeKind::Name => self.text(),
            NodeKind::AttributeAccess | NodeKind::Subscript | NodeKind::Call => self.children.first()?.root_name(),
            _ => None,
        }
    }

    /// Pre-order traversal including `self`.
    pub fn walk(&self) -> Walk<'_> {
        Walk { stack: vec![self] }
    }

    /// Assignment value (last child).
    pub fn assigned_value(&self) -> Option<&SyntaxNode> {
        match self.kind {
            NodeKind::Assignment | NodeKind::AugmentedAssignment | NodeKind::NamedExpr => self.children.last(),
            _ => None,
        }
    }

    /// Assignment targets (everything but the value and annotation).
    pub fn assigned_targets(&self) -> &[SyntaxNode] {
        match self.kind {
            NodeKind::Assignment => {
                let n = self.children.len().saturating_sub(1);
                let targets = &self.children[..n];
                match targets.last() {
                    Some(last) if last.kind == NodeKind::Annotation => &targets[..targets.len() - 1],
                    _ => targets,
                }
            }
            NodeKind::AugmentedAssignment | NodeKind::NamedExpr | NodeKind::AnnotatedDeclaration => {
                &self.children[..self.children.len().min(1)]
            }
            _ => &[],
        }
    }

    /// Callee of a call node.
    pub fn callee(&self) -> Option<&SyntaxNode> {
        if self.kind == NodeKind::Call {
            self.children.first()
        } else {
            None
        }
    }

    /// Positional arguments of a call node.
    pub fn call_args(&self) -> impl Iterator<Item = &SyntaxNode> {
        let args: &[SyntaxNode] =
            if self.kind == NodeKind::Call && !self.children.is_empty() { &self.children[1..] } else { &[] };
        args.iter().filter(|c| c.kind != NodeKind::Keyword)
    }

    pub fn call_keywords(&self) -> impl Iterator<Item = &SyntaxNode> {
        let args: &[SyntaxNode] =
            if self.kind == NodeKind::Call && !self.children.is_empty() { &self.children[1..] } else { &[] };
        args.iter().filter(|c| c.kind == NodeKind::Keyword)
    }

    /// Method name and receiver for `recv.method(...)` calls.
    pub fn method_call(&self) -> Option<(&SyntaxNode, &str)> {
        let callee = self.callee()?;
        if callee.kind == NodeKind::AttributeAccess {
            Some((callee.children.first()?, callee.text()?))
        } else {
            None
        }
    }
}

pub struct Walk<'a> {
    stack: Vec<&'a SyntaxNode>,
}

impl<'a> Iterator for Walk<'a> {
    type Item = &'a SyntaxNode;

    fn next(&mut self) -> Option<Self::Item> {
        let node = self.stack.pop()?;
        self.stack.extend(node.children.iter().rev());
        Some(node)
    }
}
