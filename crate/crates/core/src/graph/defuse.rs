//! Definitions and uses of variable names within one statement-level node.

use serde::Serialize;

use crate::syntax::{NodeKind, Span, SyntaxNode};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BindingKind {
    /// Parameter bound at function entry.
    Parameter,
    /// Name read but never bound in the function, bound at entry.
    Free,
    /// `x = value`, `x := value`.
    Direct,
    /// One position of a tuple/list target.
    Element,
    /// `*rest` target.
    Starred,
    /// `for x in iterable`.
    Iteration,
    /// `x += value`.
    Augmented,
    /// `with value as x`.
    ContextManager,
    /// Subscript or attribute target: `x[i] = v`, `x.a = v`. Does not kill.
    Partial,
    /// Imports, definitions, handler names.
    Opaque,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Def {
    pub name: String,
    pub span: Span,
    pub kind: BindingKind,
    /// A strong definition kills earlier definitions of the name.
    pub strong: bool,
    /// The right-hand side the name is bound from, when there is one.
    pub value: Option<SyntaxNode>,
    /// Index within a tuple target.
    pub position: Option<usize>,
}

impl Def {
    pub fn new(name: &str, span: Span, kind: BindingKind, value: Option<&SyntaxNode>) -> Self {
        Def {
            name: name.to_string(),
            span,
            kind,
            strong: kind != BindingKind::Partial,
            value: value.cloned(),
            position: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Use {
    pub name: String,
    pub span: Span,
    /// The name appears in callee position (`f(...)`).
    pub callee: bool,
}

#[derive(Debug, Default)]
pub(crate) struct DefUse {
    pub defs: Vec<Def>,
    pub uses: Vec<Use>,
}

impl DefUse {
    /// Names read by an expression, skipping names bound inside comprehensions
    /// and lambdas.
    pub fn read(&mut self, expr: &SyntaxNode) {
        let mut bound = Vec::new();
        self.read_in(expr, &mut bound);
    }

    fn read_in(&mut self, expr: &SyntaxNode, bound: &mut Vec<String>) {
        match expr.kind {
            NodeKind::Name => {
                if let Some(name) = expr.text() {
                    if !bound.iter().any(|b| b == name) {
                        self.uses.push(Use { name: name.to_string(), span: expr.span, callee: false });
                    }
                }
            }
            NodeKind::Call => {
                if let Some((callee, rest)) = expr.children.split_first() {
                    if callee.kind == NodeKind::Name {
                        if let Some(name) = callee.text() {
                            if !bound.iter().any(|b| b == name) {
                                self.uses.push(Use { name: name.to_string(), span: callee.span, callee: true });
                            }
                        }
                    } else {
                        self.read_in(callee, bound);
                    }
                    for c in rest {
                        self.read_in(c, bound);
                    }
                }
            }
            NodeKind::Comprehension(_) => {
                let mark = bound.len();
                let clauses: Vec<&SyntaxNode> =
                    expr.children.iter().filter(|c| c.kind == NodeKind::ComprehensionClause).collect();
                for clause in &clauses {
                    // iterable first, evaluated before the clause target is bound
                    if let Some(iter) = clause.child(1) {
                        self.read_in(iter, bound);
                    }
                    if let Some(target) = clause.child(0) {
                        bind_names(target, bound);
                    }
                    for cond in clause.children.iter().skip(2) {
                        self.read_in(cond, bound);
                    }
                }
                for elt in expr.children.iter().filter(|c| c.kind != NodeKind::ComprehensionClause) {
                    self.read_in(elt, bound);
                }
                bound.truncate(mark);
            }
            NodeKind::Lambda => {
                let mark = bound.len();
                if let Some(params) = expr.child(0) {
                    for p in &params.children {
                        for d in p.block_items(crate::syntax::BlockRole::Default) {
                            self.read_in(d, bound);
                        }
                        if let Some(name) = p.text() {
                            bound.push(name.to_string());
                        }
                    }
                }
                for body in expr.children.iter().skip(1) {
                    self.read_in(body, bound);
                }
                bound.truncate(mark);
            }
            NodeKind::NamedExpr => {
                if let Some(target) = expr.child(0) {
                    if let Some(name) = target.text() {
                        self.defs.push(Def::new(name, target.span, BindingKind::Direct, expr.child(1)));
                    }
                }
                if let Some(value) = expr.child(1) {
                    self.read_in(value, bound);
                }
            }
            _ => {
                for c in &expr.children {
                    self.read_in(c, bound);
                }
            }
        }
    }

    /// Binds an assignment-like target from `value`.
    pub fn bind(&mut self, target: &SyntaxNode, value: Option<&SyntaxNode>, kind: BindingKind) {
        match target.kind {
            NodeKind::Name => {
                if let Some(name) = target.text() {
                    self.defs.push(Def::new(name, target.span, kind, value));
                }
            }
            NodeKind::TupleExpr | NodeKind::ListExpr => {
                let inner = if kind == BindingKind::Direct { BindingKind::Element } else { kind };
                for (i, elt) in target.children.iter().enumerate() {
                    let before = self.defs.len();
                    self.bind(elt, value, inner);
                    for d in &mut self.defs[before..] {
                        if d.position.is_none() && d.kind == BindingKind::Element {
                            d.position = Some(i);
                        }
                    }
                }
            }
            NodeKind::StarTarget => {
                if let Some(inner) = target.child(0) {
                    let k = if matches!(kind, BindingKind::Direct | BindingKind::Element) {
                        BindingKind::Starred
                    } else {
                        kind
                    };
                    self.bind(inner, value, k);
                }
            }
            NodeKind::Subscript | NodeKind::AttributeAccess => {
                if let Some(root) = target.root_name() {
                    let span = target.span;
                    self.defs.push(Def::new(root, span, BindingKind::Partial, value));
                }
                for c in &target.children {
                    self.read(c);
                }
            }
            _ => self.read(target),
        }
    }
}

fn bind_names(target: &SyntaxNode, bound: &mut Vec<String>) {
    for n in target.walk() {
        if n.kind == NodeKind::Name {
            if let Some(t) = n.text() {
                bound.push(t.to_string());
            }
        }
    }
}
