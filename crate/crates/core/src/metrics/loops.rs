use std::collections::BTreeSet;

use super::record::{LoopBound, LoopKind, LoopProfile, RegexRole, RegexUse, DYNAMIC_PATTERN};
use super::{expressions, SliceContext};
use crate::graph::NodeId;
use crate::slicing::OpKind;
use crate::syntax::{LiteralKind, NodeKind, Span, SyntaxNode};
use crate::typing::{CallTarget, LoopSemantics, ReceiverClass, RegexTag};

fn is_constant_iterable(e: &SyntaxNode) -> bool {
    match e.kind {
        NodeKind::Literal(LiteralKind::Str) | NodeKind::TupleExpr | NodeKind::ListExpr | NodeKind::SetExpr => {
            e.children.iter().all(|c| matches!(c.kind, NodeKind::Literal(_)))
        }
        NodeKind::Call => {
            e.callee().is_some_and(|c| c.is_name("range"))
                && e.call_args().all(|a| {
                    matches!(a.kind, NodeKind::Literal(k) if k.is_numeric())
                        || (a.kind == NodeKind::UnaryOp
                            && a.child(0).is_some_and(|c| matches!(c.kind, NodeKind::Literal(_))))
                })
        }
        _ => false,
    }
}

fn is_constant_true(e: &SyntaxNode) -> bool {
    match e.kind {
        NodeKind::Literal(LiteralKind::Bool) => e.text() == Some("True"),
        NodeKind::Literal(LiteralKind::Int) => e.text().is_some_and(|t| t.trim_start_matches(['0', '_']) != ""),
        _ => false,
    }
}

struct Explicit<'a> {
    stmt: &'a SyntaxNode,
    header: Option<NodeId>,
}

/// Loops attributed to the slice and their nesting depth.
pub fn loop_profile(ctx: &SliceContext<'_>) -> (Vec<LoopProfile>, u32) {
    let cfg = &ctx.analysis.pdg.cfg;
    let slice_starts: Vec<(u32, u32)> = ctx.nodes().map(|n| n.span.start()).collect();
    let explicit: Vec<Explicit<'_>> = ctx
        .loop_statements()
        .into_iter()
        .map(|stmt| Explicit {
            stmt,
            header: cfg.statements().find(|n| n.span.start() == stmt.span.start()).map(|n| n.id),
        })
        .filter(|l| {
            l.header.is_some_and(|h| ctx.slice.contains(h))
                || slice_starts.iter().any(|&p| p > l.stmt.span.start() && l.stmt.span.encloses(&Span::point(p.0, p.1)))
        })
        .collect();
    let enclosing =
        |span: &Span| explicit.iter().filter(|l| l.stmt.span.encloses(span) && l.stmt.span != *span).count() as u32;

    let mut loops: Vec<(LoopProfile, u32)> = Vec::new();
    let mut direct_iterables: BTreeSet<(u32, u32, u32, u32)> = BTreeSet::new();
    let key = |s: &Span| (s.start_line, s.start_col, s.end_line, s.end_col);

    for l in &explicit {
        let header_span = l.header.map(|h| cfg.nodes[h].span).unwrap_or(l.stmt.span);
        let depth = enclosing(&l.stmt.span) + 1;
        let (kind, bound) = match l.stmt.kind {
            NodeKind::For => {
                let iter = l.stmt.child(1);
                if let Some(i) = iter {
                    direct_iterables.insert(key(&i.span));
                }
                let bound = match iter {
                    Some(i) if is_constant_iterable(i) => LoopBound::Constant,
                    Some(i) if ctx.taint.touches(i, &[]) => LoopBound::LinearOnInput,
                    _ => LoopBound::Complex,
                };
                (LoopKind::For, bound)
            }
            _ => {
                let test = l.stmt.child(0);
                let bound = if test.is_some_and(is_constant_true) {
                    if breaks_on_slice_path(ctx, l.stmt) {
                        LoopBound::Complex
                    } else {
                        LoopBound::Unbounded
                    }
                } else {
                    LoopBound::Complex
                };
                (LoopKind::While, bound)
            }
        };
        loops.push((LoopProfile { kind, bound, site: header_span }, depth));
    }

    let env = &ctx.analysis.types.env;
    for n in ctx.nodes() {
        for e in expressions(&n.syntax) {
            if let NodeKind::Comprehension(_) = e.kind {
                let clauses: Vec<&SyntaxNode> =
                    e.children.iter().filter(|c| c.kind == NodeKind::ComprehensionClause).collect();
                for c in &clauses {
                    if let Some(i) = c.child(1) {
                        direct_iterables.insert(key(&i.span));
                    }
                }
                let iter = clauses.first().and_then(|c| c.child(1));
                let bound = if iter.is_some_and(|i| ctx.taint.touches(i, &[])) {
                    LoopBound::LinearOnInput
                } else {
                    LoopBound::Constant
                };
                loops.push((LoopProfile { kind: LoopKind::Functional, bound, site: e.span }, enclosing(&e.span) + 1));
            }
        }
    }
    for (_, call) in ctx.calls() {
        let target = env.resolve_call(call);
        let recursive = match &target {
            CallTarget::Function(q) => !ctx.analysis.unit.is_synthetic_main && *q == ctx.analysis.unit.name,
            CallTarget::Method { receiver, name, .. } => receiver.is_name("self") && *name == ctx.analysis.unit.name,
            CallTarget::Dynamic => false,
        };
        if recursive {
            loops.push((
                LoopProfile { kind: LoopKind::Recursive, bound: LoopBound::Complex, site: call.span },
                enclosing(&call.span) + 1,
            ));
            continue;
        }
        let Some((_, entry)) = env.call_entry(&target, ctx.api) else { continue };
        if entry.loop_semantics != LoopSemantics::FunctionalLinear || direct_iterables.contains(&key(&call.span)) {
            continue;
        }
        let data_tainted = match &target {
            CallTarget::Method { receiver, .. } => {
                ctx.taint.touches(receiver, &[]) || call.call_args().any(|a| ctx.taint.touches(a, &[]))
            }
            _ => call.call_args().any(|a| ctx.taint.touches(a, &[])),
        };
        let bound = if data_tainted { LoopBound::LinearOnInput } else { LoopBound::Constant };
        loops.push((LoopProfile { kind: LoopKind::Functional, bound, site: call.span }, enclosing(&call.span) + 1));
    }

    loops.sort_by_key(|(l, _)| (l.site.end(), l.site.start(), l.kind));
    let depth = loops.iter().map(|(_, d)| *d).max().unwrap_or(0);
    (loops.into_iter().map(|(l, _)| l).collect(), depth)
}

/// A `break` inside the loop that a slice predicate decides on.
fn breaks_on_slice_path(ctx: &SliceContext<'_>, stmt: &SyntaxNode) -> bool {
    let pdg = &ctx.analysis.pdg;
    pdg.cfg
        .statements()
        .filter(|n| n.syntax.kind == NodeKind::Break && stmt.span.encloses(&n.span))
        .any(|b| pdg.control_ancestors(b.id).iter().any(|a| ctx.slice.contains(*a)))
}

fn regex_pattern(ctx: &SliceContext<'_>, call: &SyntaxNode, target: &CallTarget<'_>) -> String {
    let env = &ctx.analysis.types.env;
    let literal = match target {
        CallTarget::Function(_) => call.call_args().next().and_then(|a| a.string_value()).map(str::to_string),
        CallTarget::Method { receiver, .. } => match env.regex_tag_of(receiver) {
            Some(RegexTag::Pattern(p)) => p,
            _ => None,
        },
        CallTarget::Dynamic => None,
    };
    literal.unwrap_or_else(|| DYNAMIC_PATTERN.to_string())
}

/// Regex calls of the slice and whether a single regex could express it.
pub fn regex_profile(ctx: &SliceContext<'_>, loops: &[LoopProfile], depth: u32) -> (Vec<RegexUse>, bool) {
    let env = &ctx.analysis.types.env;
    let ops = &ctx.slice.constraint_ops;
    let other: Vec<u32> =
        ops.iter().enumerate().filter(|(_, o)| o.kind != OpKind::Regex).map(|(i, _)| i as u32 + 1).collect();
    let mut regexes = Vec::new();
    for (_, call) in ctx.calls() {
        let target = env.resolve_call(call);
        let Some((key, _)) = env.call_entry(&target, ctx.api) else { continue };
        let is_regex = key.starts_with("re.") && !key.starts_with("re.Match.");
        if !is_regex || matches!(target, CallTarget::Method { class: ReceiverClass::Match, .. }) {
            continue;
        }
        let ordinal = match ops.iter().position(|o| o.kind == OpKind::Regex && o.site == call.span) {
            Some(i) => i as u32 + 1,
            None => ops.iter().filter(|o| o.site.start() < call.span.start()).count() as u32 + 1,
        };
        let role = if other.is_empty() {
            RegexRole::Only
        } else if other.iter().all(|&o| ordinal < o) {
            RegexRole::FirstPass
        } else if other.iter().all(|&o| ordinal > o) {
            RegexRole::Terminal
        } else {
            RegexRole::Interleaved
        };
        regexes.push(RegexUse { api_name: key, pattern: regex_pattern(ctx, call, &target), ordinal, role });
    }
    let regular = depth <= 1
        && !loops.iter().any(|l| matches!(l.kind, LoopKind::While | LoopKind::Recursive))
        && !loops.iter().any(|l| matches!(l.bound, LoopBound::Complex | LoopBound::Unbounded));
    (regexes, regular)
}
