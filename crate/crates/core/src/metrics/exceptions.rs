use std::collections::BTreeSet;

use super::record::{CaughtException, ExceptionScope};
use super::{expressions, SliceContext};
use crate::graph::{handler_names, last_segment, raised_name, NodeId};
use crate::slicing::OpKind;
use crate::syntax::{BlockRole, NodeKind, Span, SyntaxNode};
use crate::typing::{CallTarget, ReceiverClass, RegexTag};

/// One operation of the slice that may raise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PotentialException {
    pub name: String,
    pub node: NodeId,
    pub site: Span,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ExceptionProfile {
    pub potential: Vec<PotentialException>,
    pub caught: Vec<CaughtException>,
    pub uncaught: Vec<String>,
    pub raised: Vec<String>,
    /// Potential exceptions left out of `uncaught` because the slice raises
    /// the same name itself.
    pub covered_by_raise: Vec<String>,
}

const ARITY_SENSITIVE: &[&str] =
    &["str.split", "str.rsplit", "str.splitlines", "re.split", "re.Pattern.split", "re.findall", "re.Pattern.findall"];

/// Whether destructuring `value` can fail on the number of items.
fn variable_arity(ctx: &SliceContext<'_>, value: &SyntaxNode, at: NodeId, depth: u32) -> bool {
    let env = &ctx.analysis.types.env;
    if depth > 4 {
        return false;
    }
    if value.kind == NodeKind::Name {
        return ctx.analysis.pdg.reaching_defs_of(at, value.text().unwrap_or_default()).any(|s| {
            ctx.node(s.node).defs[s.index].value.as_ref().is_some_and(|v| variable_arity(ctx, v, s.node, depth + 1))
        });
    }
    if value.kind == NodeKind::Call {
        if let Some((key, _)) = env.call_entry(&env.resolve_call(value), ctx.api) {
            if matches!(key.as_str(), "str.partition" | "str.rpartition") {
                return false;
            }
        }
    }
    value.walk().filter(|n| n.kind == NodeKind::Call).any(|c| {
        env.call_entry(&env.resolve_call(c), ctx.api).is_some_and(|(k, _)| ARITY_SENSITIVE.contains(&k.as_str()))
    })
}

/// A mapping subscript: `os.environ[...]`, or a dict-valued name indexed by slice data.
fn is_mapping_subscript(ctx: &SliceContext<'_>, e: &SyntaxNode, at: NodeId) -> bool {
    let env = &ctx.analysis.types.env;
    let (Some(recv), Some(key)) = (e.child(0), e.child(1)) else { return false };
    if recv.dotted_name().is_some_and(|d| env.qualify(&d) == "os.environ") {
        return true;
    }
    if recv.kind != NodeKind::Name || !ctx.taint.touches(key, &[]) {
        return false;
    }
    ctx.analysis.pdg.reaching_defs_of(at, recv.text().unwrap_or_default()).any(|s| {
        ctx.node(s.node).defs[s.index].value.as_ref().is_some_and(|v| {
            matches!(v.kind, NodeKind::DictExpr | NodeKind::Comprehension(crate::syntax::ComprehensionKind::Dict))
                || (v.kind == NodeKind::Call && v.callee().is_some_and(|c| c.is_name("dict")))
        })
    })
}

fn potential(ctx: &SliceContext<'_>) -> Vec<PotentialException> {
    let env = &ctx.analysis.types.env;
    let mut out = Vec::new();
    let mut push =
        |name: &str, node: NodeId, site: Span| out.push(PotentialException { name: name.to_string(), node, site });
    for op in &ctx.slice.constraint_ops {
        match op.kind {
            OpKind::NumericConversion => push("ValueError", op.node, op.site),
            OpKind::Subscript => {
                let e =
                    expressions(&ctx.node(op.node).syntax).find(|e| e.kind == NodeKind::Subscript && e.span == op.site);
                if !e.is_some_and(|e| is_mapping_subscript(ctx, e, op.node)) {
                    push("IndexError", op.node, op.site);
                }
            }
            OpKind::Call => {
                if let Some(entry) = ctx.api.get(&op.name) {
                    for r in &entry.may_raise {
                        push(r, op.node, op.site);
                    }
                }
            }
            OpKind::TupleAssignment => {
                let stmt = &ctx.node(op.node).syntax;
                if stmt.assigned_value().is_some_and(|v| variable_arity(ctx, v, op.node, 0)) {
                    push("ValueError", op.node, op.site);
                }
            }
            OpKind::Regex | OpKind::Comparison => {}
        }
    }
    for n in ctx.nodes() {
        for e in expressions(&n.syntax) {
            match e.kind {
                NodeKind::Subscript if is_mapping_subscript(ctx, e, n.id) => push("KeyError", n.id, e.span),
                NodeKind::Call => {
                    if let CallTarget::Method { receiver, class: ReceiverClass::Match, .. } = env.resolve_call(e) {
                        if !match_checked(ctx, receiver, n.id) {
                            push("AttributeError", n.id, e.span);
                        }
                    }
                }
                _ => {}
            }
        }
    }
    out.sort_by_key(|p| (p.site.start(), p.site.end()));
    out
}

/// A match result read under a predicate testing it.
fn match_checked(ctx: &SliceContext<'_>, receiver: &SyntaxNode, at: NodeId) -> bool {
    if receiver.kind != NodeKind::Name {
        return false;
    }
    let name = receiver.text().unwrap_or_default();
    let pdg = &ctx.analysis.pdg;
    let _ = ctx.analysis.types.env.regex.get(name).filter(|t| **t == RegexTag::Match);
    pdg.control_ancestors(at).iter().any(|&p| pdg.cfg.nodes[p].kind.is_predicate() && pdg.cfg.nodes[p].uses_name(name))
}

struct TryScope<'a> {
    span: Span,
    body: Span,
    handlers: Vec<&'a SyntaxNode>,
}

fn try_scopes<'a>(ctx: &SliceContext<'a>) -> Vec<TryScope<'a>> {
    let mut out: Vec<TryScope<'a>> = ctx
        .try_statements()
        .into_iter()
        .filter_map(|t| {
            let items = t.block_items(BlockRole::Body);
            let first = items.first()?;
            let last = items.last()?;
            Some(TryScope {
                span: t.span,
                body: first.span.union(&last.span),
                handlers: t.block_items(BlockRole::Handlers).iter().collect(),
            })
        })
        .collect();
    // innermost first
    out.sort_by_key(|t| std::cmp::Reverse(t.span.start()));
    out
}

/// Potential, caught, uncaught and explicitly raised exceptions of a slice.
pub fn exception_profile(ctx: &SliceContext<'_>) -> ExceptionProfile {
    let pot = potential(ctx);
    let scopes = try_scopes(ctx);
    let (first, last) = (ctx.slice.first_line(), ctx.slice.last_line());

    let mut raise_nodes: Vec<NodeId> = ctx.nodes().filter(|n| n.syntax.kind == NodeKind::Raise).map(|n| n.id).collect();
    raise_nodes.extend(ctx.slice.attached_raises.iter().copied());
    raise_nodes.sort_by_key(|&n| ctx.node(n).span.start());
    raise_nodes.dedup();
    let raised: Vec<String> = raise_nodes
        .iter()
        .filter_map(|&n| raised_name(&ctx.node(n).syntax))
        .map(|d| last_segment(&d).to_string())
        .collect();
    let raised_set: BTreeSet<&str> = raised.iter().map(String::as_str).collect();

    let mut profile = ExceptionProfile { raised: raised.clone(), ..ExceptionProfile::default() };
    for p in &pot {
        let stmt = ctx.node(p.node).span;
        let catcher = scopes.iter().find(|t| {
            t.body.encloses(&stmt)
                && t.handlers.iter().any(|h| crate::graph::handler_catches(&handler_names(h), &p.name))
        });
        match catcher {
            Some(t) => {
                let scope = if (first..=last).contains(&t.span.start_line) {
                    ExceptionScope::Slice
                } else {
                    ExceptionScope::EnclosingFunction
                };
                profile.caught.push(CaughtException { name: p.name.clone(), scope });
            }
            None if raised_set.contains(p.name.as_str()) => profile.covered_by_raise.push(p.name.clone()),
            None => profile.uncaught.push(p.name.clone()),
        }
    }
    dedup(&mut profile.raised);
    dedup(&mut profile.caught);
    dedup(&mut profile.uncaught);
    dedup(&mut profile.covered_by_raise);
    profile.potential = pot;
    profile
}

/// Drops repeats, keeping first occurrences in order.
fn dedup<T: PartialEq + Clone>(items: &mut Vec<T>) {
    let mut seen: Vec<T> = Vec::with_capacity(items.len());
    items.retain(|x| {
        if seen.contains(x) {
            false
        } else {
            seen.push(x.clone());
            true
        }
    });
}
