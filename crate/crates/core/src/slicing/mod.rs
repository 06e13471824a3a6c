//! String-seeded forward slices and the parser filter.

mod filter;
mod forward;

use std::collections::BTreeSet;

use serde::Serialize;

pub use filter::{constraint_ops, ConstraintOp, OpKind, Taint};
pub use forward::{collect_parsers, collect_slices, forward_slice, is_parser};

use crate::graph::{build_cfg, build_pdg, NodeId, Pdg};
use crate::syntax::{FunctionUnit, Span};
use crate::typing::{infer_types, ImportMap, KnownApiTable, StringSeed, TypeInfo};

/// A function with its dependence graph and typing facts.
#[derive(Debug, Clone)]
pub struct FunctionAnalysis {
    pub project: String,
    pub unit: FunctionUnit,
    pub pdg: Pdg,
    pub types: TypeInfo,
}

impl FunctionAnalysis {
    pub fn new(unit: FunctionUnit, imports: &ImportMap, api: &KnownApiTable) -> Self {
        let cfg = build_cfg(&unit);
        let types = infer_types(&unit, &cfg, imports, api);
        let pdg = build_pdg(cfg);
        FunctionAnalysis { project: String::new(), unit, pdg, types }
    }

    pub fn in_project(mut self, project: &str) -> Self {
        self.project = project.to_string();
        self
    }

    pub fn seeds(&self) -> &[StringSeed] {
        &self.types.seeds
    }

    pub fn slice_id(&self, seed: &StringSeed) -> String {
        let tail = format!(
            "{}:{}:{}:{}",
            self.unit.module_path, seed.site.start_line, seed.site.start_col, seed.variable_name
        );
        if self.project.is_empty() {
            tail
        } else {
            format!("{}:{tail}", self.project)
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ParserSlice {
    pub slice_id: String,
    pub seed: StringSeed,
    /// Statement nodes in source order.
    pub statements: Vec<NodeId>,
    pub line_span: BTreeSet<u32>,
    /// Qualified name of the enclosing function.
    pub function: String,
    pub module_path: String,
    /// The seed plus every variable bound to a string inside the slice.
    pub slice_vars: BTreeSet<String>,
    pub constraint_ops: Vec<ConstraintOp>,
    /// `raise` statements governed by slice predicates; not slice members.
    pub attached_raises: Vec<NodeId>,
    pub is_parser: bool,
}

impl ParserSlice {
    pub fn contains(&self, node: NodeId) -> bool {
        self.statements.contains(&node)
    }

    pub fn first_line(&self) -> u32 {
        self.line_span.first().copied().unwrap_or(self.seed.site.start_line)
    }

    pub fn last_line(&self) -> u32 {
        self.line_span.last().copied().unwrap_or(self.seed.site.end_line)
    }

    /// Spans of the slice statements, in source order.
    pub fn spans<'a>(&'a self, pdg: &'a Pdg) -> impl Iterator<Item = Span> + 'a {
        self.statements.iter().map(move |&n| pdg.cfg.nodes[n].span)
    }
}
