use std::collections::{BTreeSet, VecDeque};

use super::record::InputSource;
use super::SliceContext;
use crate::graph::{BindingKind, Def, DefSite, NodeId, ENTRY};
use crate::syntax::{NodeKind, SyntaxNode};
use crate::typing::InputOrigin;

fn seed_defs(ctx: &SliceContext<'_>) -> Vec<DefSite> {
    let seed = &ctx.slice.seed;
    let node = ctx.node(seed.node);
    if let Some(index) = node.defs.iter().position(|d| d.name == seed.variable_name) {
        return vec![DefSite { node: seed.node, index }];
    }
    ctx.analysis.pdg.reaching_defs_of(seed.node, &seed.variable_name).collect()
}

fn def_at<'a>(ctx: &'a SliceContext<'_>, site: DefSite) -> &'a Def {
    &ctx.node(site.node).defs[site.index]
}

/// Syntactic provider of the seed string and its traced external origin.
pub fn input_classify(ctx: &SliceContext<'_>) -> (InputSource, InputOrigin) {
    let defs = seed_defs(ctx);
    let source = defs.first().map(|&s| source_of_def(ctx, s, 0)).unwrap_or(InputSource::Unknown);
    (source, origin(ctx, &defs))
}

fn source_of_def(ctx: &SliceContext<'_>, site: DefSite, depth: u32) -> InputSource {
    let d = def_at(ctx, site);
    match d.kind {
        BindingKind::Parameter => InputSource::EfArgument,
        BindingKind::Free => InputSource::GlobalVariable,
        BindingKind::ContextManager => InputSource::FunctionCall,
        BindingKind::Partial | BindingKind::Opaque | BindingKind::Augmented => InputSource::Unknown,
        BindingKind::Direct | BindingKind::Element | BindingKind::Starred | BindingKind::Iteration => match &d.value {
            Some(v) => source_of_expr(ctx, v, site.node, depth),
            None => InputSource::Unknown,
        },
    }
}

fn source_of_expr(ctx: &SliceContext<'_>, e: &SyntaxNode, at: NodeId, depth: u32) -> InputSource {
    let env = &ctx.analysis.types.env;
    if depth > 8 {
        return InputSource::Unknown;
    }
    match e.kind {
        NodeKind::Call => InputSource::FunctionCall,
        NodeKind::Literal(_) | NodeKind::FormattedString => InputSource::Literal,
        NodeKind::Subscript => {
            let Some(recv) = e.child(0) else { return InputSource::Unknown };
            if recv.dotted_name().is_some_and(|d| env.qualify(&d) == "os.environ") {
                InputSource::EnvironmentSubscript
            } else {
                source_of_expr(ctx, recv, at, depth + 1)
            }
        }
        NodeKind::AttributeAccess => match e.root_name() {
            Some("self" | "cls") => InputSource::InstanceAttribute,
            Some(root) if env.imports.contains(root) => InputSource::GlobalVariable,
            _ => e.child(0).map(|r| source_of_expr(ctx, r, at, depth + 1)).unwrap_or(InputSource::Unknown),
        },
        NodeKind::Name => {
            let name = e.text().unwrap_or_default();
            let sites: Vec<DefSite> = ctx.analysis.pdg.reaching_defs_of(at, name).collect();
            match sites.first() {
                Some(&s) => source_of_def(ctx, s, depth + 1),
                None if env.imports.contains(name) => InputSource::GlobalVariable,
                None => InputSource::Unknown,
            }
        }
        NodeKind::BinaryOp | NodeKind::StarTarget => {
            e.child(0).map(|c| source_of_expr(ctx, c, at, depth + 1)).unwrap_or(InputSource::Unknown)
        }
        NodeKind::NamedExpr => {
            e.child(1).map(|c| source_of_expr(ctx, c, at, depth + 1)).unwrap_or(InputSource::Unknown)
        }
        NodeKind::ConditionalExpr => {
            e.child(1).map(|c| source_of_expr(ctx, c, at, depth + 1)).unwrap_or(InputSource::Unknown)
        }
        NodeKind::Comprehension(_) => InputSource::FunctionCall,
        _ => InputSource::Unknown,
    }
}

/// Origin tag found directly in an expression, if any.
fn tagged_origin(ctx: &SliceContext<'_>, e: &SyntaxNode) -> Option<InputOrigin> {
    let env = &ctx.analysis.types.env;
    let mut nodes: Vec<&SyntaxNode> = e.walk().collect();
    nodes.sort_by_key(|n| (n.span.start(), std::cmp::Reverse(n.span.end())));
    for n in nodes {
        let tag = match n.kind {
            NodeKind::Call => env.call_entry(&env.resolve_call(n), ctx.api).and_then(|(_, entry)| entry.origin_tag),
            NodeKind::AttributeAccess | NodeKind::Name => n
                .dotted_name()
                .and_then(|d| env.imports.resolve(&d))
                .and_then(|q| ctx.api.get(&q))
                .and_then(|entry| entry.origin_tag),
            _ => None,
        };
        if tag.is_some() {
            return tag;
        }
    }
    None
}

/// Breadth-first walk backwards over data edges from the seed definitions.
fn origin(ctx: &SliceContext<'_>, seeds: &[DefSite]) -> InputOrigin {
    let pdg = &ctx.analysis.pdg;
    let mut queue: VecDeque<DefSite> = seeds.iter().copied().collect();
    let mut seen: BTreeSet<DefSite> = queue.iter().copied().collect();
    let mut fallback = InputOrigin::Unknown;
    while let Some(site) = queue.pop_front() {
        let d = def_at(ctx, site);
        if site.node == ENTRY {
            if d.kind == BindingKind::Parameter && fallback == InputOrigin::Unknown {
                fallback = InputOrigin::CallerProvided;
            }
            continue;
        }
        if let Some(v) = &d.value {
            if let Some(tag) = tagged_origin(ctx, v) {
                return tag;
            }
            let read: BTreeSet<&str> = v.walk().filter(|n| n.kind == NodeKind::Name).filter_map(|n| n.text()).collect();
            for name in read {
                for s in pdg.reaching_defs_of(site.node, name) {
                    if seen.insert(s) {
                        queue.push_back(s);
                    }
                }
            }
        }
    }
    fallback
}
