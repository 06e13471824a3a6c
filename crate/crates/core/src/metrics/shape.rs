use std::collections::BTreeSet;

use super::names::{is_builtin, ProjectIndex};
use super::record::{PositionCat, Sugar};
use super::{expressions, SliceContext};
use crate::graph::{BindingKind, CfgNodeKind, ENTRY};
use crate::syntax::{BlockRole, ComprehensionKind, LiteralKind, NodeKind, SyntaxNode};

/// Relative position in the enclosing function and the shotgun flag.
pub fn locate(ctx: &SliceContext<'_>) -> (f64, PositionCat, bool) {
    let body = ctx.analysis.unit.body_lines;
    let first = ctx.slice.first_line();
    let denom = body.len().saturating_sub(1).max(1) as f64;
    let rel = (first.saturating_sub(body.first) as f64 / denom).clamp(0.0, 1.0);

    let others: BTreeSet<u32> =
        ctx.analysis.pdg.cfg.statements().filter(|n| !ctx.slice.contains(n.id)).map(|n| n.span.start_line).collect();
    let lines: Vec<u32> = ctx.slice.line_span.iter().copied().collect();
    let gaps = lines.windows(2).filter(|w| w[1] > w[0] + 1 && others.range(w[0] + 1..w[1]).next().is_some()).count();
    (rel, PositionCat::of(rel), gaps >= 2)
}

/// One plus the decision points of the slice statements.
pub fn complexity(ctx: &SliceContext<'_>) -> u32 {
    // a handler is a decision of the slice when its try body holds slice code
    let mut decisions: u32 = ctx
        .try_statements()
        .into_iter()
        .filter(|t| {
            let items = t.block_items(BlockRole::Body);
            match (items.first(), items.last()) {
                (Some(a), Some(b)) => {
                    let body = a.span.union(&b.span);
                    ctx.nodes().any(|n| body.encloses(&n.span))
                }
                _ => false,
            }
        })
        .map(|t| t.block_items(BlockRole::Handlers).len() as u32)
        .sum();
    for n in ctx.nodes() {
        decisions += match (n.kind, n.syntax.kind) {
            (CfgNodeKind::Predicate, NodeKind::If | NodeKind::While) => 1,
            (CfgNodeKind::LoopHeader, _) => 1,
            _ => 0,
        };
        for e in expressions(&n.syntax) {
            decisions += match e.kind {
                NodeKind::BoolOp => e.children.len().saturating_sub(1) as u32,
                NodeKind::ConditionalExpr => 1,
                NodeKind::ComprehensionClause => e.children.len().saturating_sub(2) as u32,
                _ => 0,
            };
        }
    }
    1 + decisions
}

fn is_destructuring(target: &SyntaxNode) -> bool {
    matches!(target.kind, NodeKind::TupleExpr | NodeKind::ListExpr)
}

fn is_negative_index(index: &SyntaxNode) -> bool {
    index.kind == NodeKind::UnaryOp
        && index.text() == Some("-")
        && index.child(0).is_some_and(|c| c.kind == NodeKind::Literal(LiteralKind::Int))
}

pub fn sugar_profile(ctx: &SliceContext<'_>) -> BTreeSet<Sugar> {
    let mut out = BTreeSet::new();
    for n in ctx.nodes() {
        let s = &n.syntax;
        if s.kind == NodeKind::Assignment && s.assigned_targets().iter().any(is_destructuring) {
            out.insert(Sugar::TupleAssignment);
        }
        for e in expressions(s) {
            match e.kind {
                NodeKind::Subscript => match e.child(1) {
                    Some(i) if i.kind == NodeKind::SliceExpression => {
                        out.insert(Sugar::SliceNotation);
                    }
                    Some(i) => {
                        out.insert(Sugar::Subscript);
                        // negative indexing counts from the end like a slice bound
                        if is_negative_index(i) {
                            out.insert(Sugar::SliceNotation);
                        }
                    }
                    None => {}
                },
                NodeKind::StarTarget => {
                    out.insert(Sugar::StarUnpack);
                }
                NodeKind::Comprehension(ComprehensionKind::List) => {
                    out.insert(Sugar::ListComprehension);
                }
                NodeKind::Comprehension(ComprehensionKind::Generator) => {
                    out.insert(Sugar::GeneratorExpr);
                }
                NodeKind::Comprehension(_) => {
                    out.insert(Sugar::DictOrSetComprehension);
                }
                NodeKind::FormattedString => {
                    out.insert(Sugar::FString);
                }
                NodeKind::ConditionalExpr => {
                    out.insert(Sugar::ConditionalExpr);
                }
                NodeKind::Compare if e.children.len() > 2 => {
                    out.insert(Sugar::ChainedComparison);
                }
                NodeKind::AttributeAccess if e.child(0).is_some_and(|r| r.kind == NodeKind::Call) => {
                    out.insert(Sugar::MethodChaining);
                }
                _ => {}
            }
        }
    }
    out
}

/// Non-leaf expression nodes that transform data.
pub fn expression_count(ctx: &SliceContext<'_>) -> u32 {
    ctx.nodes()
        .flat_map(|n| expressions(&n.syntax))
        .filter(|e| {
            matches!(
                e.kind,
                NodeKind::Call
                    | NodeKind::BinaryOp
                    | NodeKind::BoolOp
                    | NodeKind::Compare
                    | NodeKind::Subscript
                    | NodeKind::SliceExpression
                    | NodeKind::Comprehension(_)
                    | NodeKind::ConditionalExpr
                    | NodeKind::FormattedString
            )
        })
        .count() as u32
}

/// Distinct variables bound or read by the slice, the seed included.
/// Callees, imported modules and unbound builtin or project function names
/// are not variables.
pub fn variable_count(ctx: &SliceContext<'_>, index: &ProjectIndex) -> u32 {
    let entry = ctx.node(ENTRY);
    let imports = &ctx.analysis.types.env.imports;
    let is_variable = |name: &str| {
        let free = entry.defs.iter().any(|d| d.name == name && d.kind == BindingKind::Free);
        let bound_here = !free && ctx.analysis.pdg.cfg.statements().any(|n| n.defines(name))
            || entry.defs.iter().any(|d| d.name == name && d.kind == BindingKind::Parameter);
        bound_here || !(imports.contains(name) || is_builtin(name) || index.defines_function(name))
    };
    let mut names: BTreeSet<&str> = BTreeSet::from([ctx.slice.seed.variable_name.as_str()]);
    for n in ctx.nodes() {
        let callees: BTreeSet<(u32, u32)> = expressions(&n.syntax)
            .filter_map(|e| e.callee())
            .filter(|c| c.kind == NodeKind::Name)
            .map(|c| c.span.start())
            .collect();
        for e in expressions(&n.syntax) {
            if e.kind == NodeKind::Name && !callees.contains(&e.span.start()) {
                let t = e.text().unwrap_or_default();
                if is_variable(t) {
                    names.insert(t);
                }
            }
        }
    }
    names.len() as u32
}
