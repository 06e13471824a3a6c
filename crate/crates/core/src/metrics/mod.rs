//! Per-slice metric profiles.

mod calls;
mod exceptions;
mod input;
mod loops;
mod names;
mod record;
mod shape;

pub use calls::{call_profile, unpacked_spans};
pub use exceptions::{exception_profile, ExceptionProfile, PotentialException};
pub use input::input_classify;
pub use loops::{loop_profile, regex_profile};
pub use names::{builtin_names, is_builtin, is_stdlib, stdlib_modules, ProjectIndex};
pub use record::{
    ArgKind, CallArg, CallOrigin, CallProfile, CaughtException, ExceptionScope, InputSource, LoopBound, LoopKind,
    LoopProfile, MetricRecord, PositionCat, RegexRole, RegexUse, Sugar, DYNAMIC_PATTERN,
};
pub use shape::{complexity, expression_count, locate, sugar_profile, variable_count};

use crate::graph::{CfgNode, NodeId};
use crate::slicing::{FunctionAnalysis, ParserSlice, Taint};
use crate::syntax::{module_dotted_name, CodeLines, NodeKind, SyntaxNode};
use crate::typing::KnownApiTable;

/// A slice with everything needed to profile it.
pub struct SliceContext<'a> {
    pub analysis: &'a FunctionAnalysis,
    pub slice: &'a ParserSlice,
    pub api: &'a KnownApiTable,
    pub taint: Taint,
}

impl<'a> SliceContext<'a> {
    pub fn new(analysis: &'a FunctionAnalysis, slice: &'a ParserSlice, api: &'a KnownApiTable) -> Self {
        SliceContext { analysis, slice, api, taint: Taint::new(slice.slice_vars.clone()) }
    }

    pub fn node(&self, id: NodeId) -> &'a CfgNode {
        &self.analysis.pdg.cfg.nodes[id]
    }

    /// Slice statements in source order.
    pub fn nodes(&self) -> impl Iterator<Item = &'a CfgNode> + '_ {
        self.slice.statements.iter().map(move |&n| self.node(n))
    }

    /// Calls inside the slice statements, sorted by (start, end).
    pub fn calls(&self) -> Vec<(NodeId, &'a SyntaxNode)> {
        let mut out: Vec<(NodeId, &SyntaxNode)> = Vec::new();
        for n in self.nodes() {
            out.extend(expressions(&n.syntax).filter(|e| e.kind == NodeKind::Call).map(|e| (n.id, e)));
        }
        out.sort_by_key(|(_, c)| (c.span.start(), c.span.end()));
        out
    }

    /// Explicit loop statements of the function, with their full spans.
    pub fn loop_statements(&self) -> Vec<&'a SyntaxNode> {
        let mut out = Vec::new();
        for stmt in &self.analysis.unit.body {
            collect_statements(stmt, &mut |s| {
                if matches!(s.kind, NodeKind::For | NodeKind::While) {
                    out.push(s);
                }
            });
        }
        out
    }

    /// `try` statements of the function.
    pub fn try_statements(&self) -> Vec<&'a SyntaxNode> {
        let mut out = Vec::new();
        for stmt in &self.analysis.unit.body {
            collect_statements(stmt, &mut |s| {
                if s.kind == NodeKind::Try {
                    out.push(s);
                }
            });
        }
        out
    }
}

/// Visits a statement and its nested statements, without entering nested
/// function bodies.
fn collect_statements<'a>(stmt: &'a SyntaxNode, f: &mut dyn FnMut(&'a SyntaxNode)) {
    f(stmt);
    if stmt.kind == NodeKind::FunctionDef {
        return;
    }
    for c in &stmt.children {
        match c.kind {
            NodeKind::Block(_) | NodeKind::ExceptHandler | NodeKind::MatchCase => {
                for s in &c.children {
                    if s.kind.is_statement()
                        || matches!(s.kind, NodeKind::ExceptHandler | NodeKind::MatchCase | NodeKind::Block(_))
                    {
                        collect_statements(s, f);
                    }
                }
            }
            _ => {}
        }
    }
}

/// Expression nodes of a statement header, lambda bodies excluded.
pub fn expressions(stmt: &SyntaxNode) -> impl Iterator<Item = &SyntaxNode> {
    let mut stack: Vec<&SyntaxNode> = stmt.children.iter().rev().collect();
    std::iter::from_fn(move || {
        let n = stack.pop()?;
        if n.kind != NodeKind::Lambda {
            stack.extend(n.children.iter().rev());
        }
        Some(n)
    })
}

/// Module-level facts a record needs.
pub struct ModuleInfo<'a> {
    pub relative_path: &'a str,
    pub code_lines: &'a CodeLines,
}

/// Project-level facts a record needs.
pub struct ProjectInfo<'a> {
    pub name: &'a str,
    pub loc: u32,
    pub index: &'a ProjectIndex,
}

/// Assembles the full metric record of one slice.
pub fn build_record(ctx: &SliceContext<'_>, module: &ModuleInfo<'_>, project: &ProjectInfo<'_>) -> MetricRecord {
    let unit = &ctx.analysis.unit;
    let (position_rel, position_cat, shotgun) = locate(ctx);
    let (input_source, input_origin) = input_classify(ctx);
    let calls = call_profile(ctx, project.index);
    let (loops, loop_nesting_depth) = loop_profile(ctx);
    let (regexes, regular_candidate) = regex_profile(ctx, &loops, loop_nesting_depth);
    let exceptions = exception_profile(ctx);
    let loc = ctx.slice.line_span.iter().filter(|&&l| module.code_lines.is_code(l)).count() as u32;
    MetricRecord {
        slice_id: ctx.slice.slice_id.clone(),
        project_name: project.name.to_string(),
        project_loc: project.loc,
        module_name: module_dotted_name(module.relative_path),
        ef_name: unit.qualified_name.clone(),
        ef_loc: unit.ef_loc,
        position_rel,
        position_cat,
        shotgun,
        loc: loc.max(1),
        cyclo: complexity(ctx),
        input_source,
        input_origin,
        expression_count: expression_count(ctx),
        variable_count: variable_count(ctx, project.index),
        function_count: calls.len() as u32,
        calls,
        sugar: sugar_profile(ctx),
        regexes,
        loops,
        loop_nesting_depth,
        caught_exceptions: exceptions.caught,
        uncaught_exceptions: exceptions.uncaught,
        raised_exceptions: exceptions.raised,
        regular_candidate,
    }
}
