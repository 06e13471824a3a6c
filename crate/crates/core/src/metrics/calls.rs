use super::names::{is_builtin, is_stdlib, ProjectIndex};
use super::record::{ArgKind, CallArg, CallOrigin, CallProfile};
use super::SliceContext;
use crate::graph::BindingKind;
use crate::syntax::{LiteralKind, NodeKind, Span, SyntaxNode};
use crate::typing::{CallTarget, ReceiverClass};

fn arg_profile(a: &SyntaxNode) -> CallArg {
    let literal = |kind, text: Option<&str>| CallArg { kind, literal_text: text.map(str::to_string) };
    match a.kind {
        NodeKind::Literal(LiteralKind::Str) => literal(ArgKind::StringLiteral, a.string_value()),
        NodeKind::Literal(k) if k.is_numeric() => literal(ArgKind::NumberLiteral, a.text()),
        NodeKind::UnaryOp
            if a.text() == Some("-")
                && a.child(0).is_some_and(|c| matches!(c.kind, NodeKind::Literal(k) if k.is_numeric())) =>
        {
            let text = a.child(0).and_then(|c| c.text()).map(|t| format!("-{t}"));
            CallArg { kind: ArgKind::NumberLiteral, literal_text: text }
        }
        NodeKind::Name => literal(ArgKind::Variable, None),
        NodeKind::Call => literal(ArgKind::Call, None),
        NodeKind::Keyword => {
            a.child(0).map(arg_profile).unwrap_or(CallArg { kind: ArgKind::Other, literal_text: None })
        }
        _ => literal(ArgKind::Other, None),
    }
}

/// Name and origin of a function reference (`int` in `map(int, ...)`).
fn function_origin(ctx: &SliceContext<'_>, callee: &SyntaxNode, index: &ProjectIndex) -> (String, CallOrigin) {
    let env = &ctx.analysis.types.env;
    let dotted = callee.dotted_name().unwrap_or_default();
    if let Some(q) = env.imports.resolve(&dotted) {
        let origin = if index.owns(&q) {
            CallOrigin::UserDefined
        } else if is_stdlib(&q) {
            CallOrigin::BuiltinOrStdlib
        } else {
            CallOrigin::ThirdParty
        };
        return (q, origin);
    }
    let locally_bound =
        ctx.analysis.pdg.cfg.nodes.iter().any(|n| {
            n.defs.iter().any(|d| d.name == dotted && !matches!(d.kind, BindingKind::Free | BindingKind::Opaque))
        });
    let origin = if index.defines_function(&dotted) {
        CallOrigin::UserDefined
    } else if is_builtin(&dotted) && !locally_bound {
        CallOrigin::BuiltinOrStdlib
    } else {
        CallOrigin::Unknown
    };
    (dotted, origin)
}

fn call_name(ctx: &SliceContext<'_>, call: &SyntaxNode, index: &ProjectIndex) -> (String, CallOrigin) {
    let env = &ctx.analysis.types.env;
    let target = env.resolve_call(call);
    match &target {
        CallTarget::Function(_) => function_origin(ctx, call.callee().expect("callee"), index),
        CallTarget::Method { receiver, name, class } => {
            let recv_name = (receiver.kind == NodeKind::Name).then(|| receiver.text().unwrap_or_default());
            let entry = env.call_entry(&target, ctx.api);
            match (class, recv_name) {
                (ReceiverClass::Pattern | ReceiverClass::Match, Some(r)) => {
                    (format!("{r}.{name}"), CallOrigin::BuiltinOrStdlib)
                }
                (ReceiverClass::Pattern | ReceiverClass::Match, None) => (name.clone(), CallOrigin::BuiltinOrStdlib),
                _ if entry.as_ref().is_some_and(|(k, _)| k.starts_with("str.")) => {
                    (name.clone(), CallOrigin::BuiltinOrStdlib)
                }
                (_, Some(r @ ("self" | "cls"))) => {
                    let origin =
                        if index.defines_function(name) { CallOrigin::UserDefined } else { CallOrigin::Unknown };
                    (format!("{r}.{name}"), origin)
                }
                (_, recv) => {
                    let origin = if entry.is_some() { CallOrigin::BuiltinOrStdlib } else { CallOrigin::Unknown };
                    match recv {
                        Some(r) => (format!("{r}.{name}"), origin),
                        None => (name.clone(), origin),
                    }
                }
            }
        }
        CallTarget::Dynamic => ("<dynamic>".to_string(), CallOrigin::Unknown),
    }
}

fn is_destructuring(target: &SyntaxNode) -> bool {
    matches!(target.kind, NodeKind::TupleExpr | NodeKind::ListExpr)
}

/// Value expressions that end up destructured by a tuple assignment in the
/// slice, directly or through one intermediate variable.
pub fn unpacked_spans(ctx: &SliceContext<'_>) -> Vec<Span> {
    let mut out = Vec::new();
    for n in ctx.nodes() {
        let s = &n.syntax;
        if s.kind != NodeKind::Assignment || !s.assigned_targets().iter().any(is_destructuring) {
            continue;
        }
        let Some(value) = s.assigned_value() else { continue };
        if is_destructuring(value) {
            continue;
        }
        out.push(value.span);
        if value.kind == NodeKind::Name {
            for site in ctx.analysis.pdg.reaching_defs_of(n.id, value.text().unwrap_or_default()) {
                if let Some(v) = &ctx.node(site.node).defs[site.index].value {
                    out.push(v.span);
                }
            }
        }
    }
    out
}

/// Every call of the slice in source order; functions handed to `map` and
/// `filter` count as calls.
pub fn call_profile(ctx: &SliceContext<'_>, index: &ProjectIndex) -> Vec<CallProfile> {
    let first = ctx.slice.first_line();
    let unpacked = unpacked_spans(ctx);
    let mut sites: Vec<(Span, String, CallOrigin, Vec<CallArg>)> = Vec::new();
    for (_, call) in ctx.calls() {
        let (name, origin) = call_name(ctx, call, index);
        let args: Vec<CallArg> = call.call_args().chain(call.call_keywords()).map(arg_profile).collect();
        if matches!(name.as_str(), "map" | "filter") {
            if let Some(f) =
                call.call_args().next().filter(|f| matches!(f.kind, NodeKind::Name | NodeKind::AttributeAccess))
            {
                let (fname, forigin) = function_origin(ctx, f, index);
                sites.push((f.span, fname, forigin, Vec::new()));
            }
        }
        sites.push((call.span, name, origin, args));
    }
    sites.sort_by_key(|s| (s.0.start(), s.0.end()));
    sites
        .into_iter()
        .enumerate()
        .map(|(i, (span, name, origin, args))| CallProfile {
            unpacked: unpacked.iter().any(|u| u.encloses(&span)),
            name,
            origin,
            ordinal: i as u32 + 1,
            rel_line: span.start_line.saturating_sub(first),
            args,
        })
        .collect()
}
