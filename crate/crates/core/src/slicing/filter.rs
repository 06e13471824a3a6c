use std::collections::BTreeSet;

use serde::Serialize;

use super::FunctionAnalysis;
use crate::graph::{CfgNodeKind, NodeId};
use crate::syntax::{NodeKind, Span, SyntaxNode};
use crate::typing::{CallTarget, KnownApiTable, TypeEnv};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum OpKind {
    /// Table-flagged call that can fail (`str.index`).
    Call,
    Subscript,
    NumericConversion,
    TupleAssignment,
    Regex,
    /// Comparison or string predicate deciding a branch.
    Comparison,
}

/// A constraint the slice imposes on its input.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConstraintOp {
    pub name: String,
    pub kind: OpKind,
    pub site: Span,
    pub node: NodeId,
}

/// Names carrying slice data.
#[derive(Debug, Clone, Default)]
pub struct Taint {
    names: BTreeSet<String>,
}

impl Taint {
    pub fn new(names: BTreeSet<String>) -> Self {
        Taint { names }
    }

    pub fn names(&self) -> &BTreeSet<String> {
        &self.names
    }

    /// Whether an expression reads slice data. `local` holds comprehension
    /// variables drawn from slice data.
    pub fn touches(&self, e: &SyntaxNode, local: &[String]) -> bool {
        match e.kind {
            NodeKind::Name => {
                let n = e.text().unwrap_or_default();
                self.names.contains(n) || local.iter().any(|l| l == n)
            }
            NodeKind::Lambda => false,
            NodeKind::Comprehension(_) => {
                let mut scope = local.to_vec();
                let mut any = false;
                for clause in e.children.iter().filter(|c| c.kind == NodeKind::ComprehensionClause) {
                    if clause.child(1).is_some_and(|i| self.touches(i, &scope)) {
                        any = true;
                        if let Some(t) = clause.child(0) {
                            bind(t, &mut scope);
                        }
                    }
                }
                any || e.children.iter().any(|c| self.touches(c, &scope))
            }
            _ => e.children.iter().any(|c| self.touches(c, local)),
        }
    }
}

fn bind(target: &SyntaxNode, scope: &mut Vec<String>) {
    for n in target.walk().filter(|n| n.kind == NodeKind::Name) {
        scope.push(n.text().unwrap_or_default().to_string());
    }
}

const COMPARISONS: &[&str] = &["==", "!=", "in", "not in"];

struct Scan<'a> {
    env: &'a TypeEnv,
    api: &'a KnownApiTable,
    taint: &'a Taint,
    node: NodeId,
    ops: Vec<ConstraintOp>,
}

impl Scan<'_> {
    fn push(&mut self, name: &str, kind: OpKind, site: Span) {
        self.ops.push(ConstraintOp { name: name.to_string(), kind, site, node: self.node });
    }

    fn visit(&mut self, e: &SyntaxNode, branch: bool, local: &mut Vec<String>) {
        match e.kind {
            NodeKind::Lambda => {}
            NodeKind::Comprehension(_) => {
                let mark = local.len();
                for clause in e.children.iter().filter(|c| c.kind == NodeKind::ComprehensionClause) {
                    if let Some(iter) = clause.child(1) {
                        self.visit(iter, false, local);
                        if self.taint.touches(iter, local) {
                            if let Some(t) = clause.child(0) {
                                bind(t, local);
                            }
                        }
                    }
                    for cond in clause.children.iter().skip(2) {
                        self.visit(cond, true, local);
                    }
                }
                for elt in e.children.iter().filter(|c| c.kind != NodeKind::ComprehensionClause) {
                    self.visit(elt, false, local);
                }
                local.truncate(mark);
            }
            NodeKind::ConditionalExpr => {
                for (i, c) in e.children.iter().enumerate() {
                    self.visit(c, i == 0, local);
                }
            }
            NodeKind::BoolOp | NodeKind::UnaryOp => {
                for c in &e.children {
                    self.visit(c, branch, local);
                }
            }
            NodeKind::Compare => {
                let ops = e.text().unwrap_or_default();
                if branch
                    && ops.split(',').any(|o| COMPARISONS.contains(&o))
                    && e.children.iter().any(|c| self.taint.touches(c, local))
                {
                    let first = ops.split(',').find(|o| COMPARISONS.contains(o)).unwrap_or("==");
                    self.push(first, OpKind::Comparison, e.span);
                }
                for c in &e.children {
                    self.visit(c, false, local);
                }
            }
            NodeKind::Subscript => {
                if let (Some(recv), Some(index)) = (e.child(0), e.child(1)) {
                    if index.kind != NodeKind::SliceExpression && self.taint.touches(recv, local) {
                        self.push("subscript", OpKind::Subscript, e.span);
                    }
                }
                for c in &e.children {
                    self.visit(c, false, local);
                }
            }
            NodeKind::Call => {
                self.call(e, branch, local);
                for c in &e.children {
                    self.visit(c, false, local);
                }
            }
            _ => {
                for c in &e.children {
                    self.visit(c, false, local);
                }
            }
        }
    }

    fn call(&mut self, e: &SyntaxNode, branch: bool, local: &[String]) {
        let target = self.env.resolve_call(e);
        let args: Vec<&SyntaxNode> = e.call_args().collect();
        let receiver_tainted =
            matches!(&target, CallTarget::Method { receiver, .. } if self.taint.touches(receiver, local));
        let args_tainted = args.iter().any(|a| self.taint.touches(a, local));
        if let CallTarget::Function(q) = &target {
            // map(int, data) and filter(float, data)
            if matches!(q.as_str(), "map" | "filter") {
                if let (Some(f), Some(data)) = (args.first(), args.get(1)) {
                    let conv = f.dotted_name().map(|d| self.env.qualify(&d));
                    if matches!(conv.as_deref(), Some("int" | "float")) && self.taint.touches(data, local) {
                        self.push(conv.as_deref().unwrap_or_default(), OpKind::NumericConversion, f.span);
                    }
                }
                return;
            }
            if matches!(q.as_str(), "int" | "float") {
                if args.first().is_some_and(|a| self.taint.touches(a, local)) {
                    self.push(q, OpKind::NumericConversion, e.span);
                }
                return;
            }
        }
        let Some((key, entry)) = self.env.call_entry(&target, self.api) else { return };
        if !entry.constraint_imposing || !(receiver_tainted || args_tainted) {
            return;
        }
        if key.starts_with("re.") {
            self.push(&key, OpKind::Regex, e.span);
        } else if entry.branching {
            if branch && receiver_tainted {
                self.push(&key, OpKind::Comparison, e.span);
            }
        } else {
            self.push(&key, OpKind::Call, e.span);
        }
    }
}

fn is_literal_sequence(e: &SyntaxNode) -> bool {
    matches!(e.kind, NodeKind::TupleExpr | NodeKind::ListExpr)
}

/// Constraint-imposing operations within the given statements, in source order.
pub fn constraint_ops(
    a: &FunctionAnalysis,
    statements: &[NodeId],
    taint: &Taint,
    api: &KnownApiTable,
) -> Vec<ConstraintOp> {
    let mut scan = Scan { env: &a.types.env, api, taint, node: 0, ops: Vec::new() };
    for &n in statements {
        let node = &a.pdg.cfg.nodes[n];
        scan.node = n;
        let s = &node.syntax;
        let branch = node.kind == CfgNodeKind::Predicate || s.kind == NodeKind::Assert;
        let mut local = Vec::new();
        if s.kind == NodeKind::Assignment {
            if let Some(value) = s.assigned_value() {
                let destructures = s.assigned_targets().iter().any(is_literal_sequence);
                if destructures && !is_literal_sequence(value) && taint.touches(value, &local) {
                    let target = s.assigned_targets().iter().find(|t| is_literal_sequence(t)).map(|t| t.span);
                    scan.push("tuple-assignment", OpKind::TupleAssignment, target.unwrap_or(s.span));
                }
            }
        }
        match s.kind {
            NodeKind::If | NodeKind::While | NodeKind::Assert => {
                if let Some(test) = s.child(0) {
                    scan.visit(test, branch, &mut local);
                }
                for c in s.children.iter().skip(1) {
                    scan.visit(c, false, &mut local);
                }
            }
            _ => {
                for c in &s.children {
                    scan.visit(c, false, &mut local);
                }
            }
        }
    }
    scan.ops.sort_by(|x, y| (x.site.start(), x.site.end()).cmp(&(y.site.start(), y.site.end())));
    scan.ops
}
