//! Plain-text edge-list export of CFGs and PDGs.
//!
//! ```text
//! # function <qualified name> <path>
//! node <id> <kind> <start line>:<start col>-<end line>:<end col>
//! cfg <from> <to> normal|exception
//! data <from> <to> <variable>
//! control <from> <to>
//! ```
//!
//! Nodes 0 and 1 are entry and exit. Lines appear in the order above, each
//! group sorted.

use std::fmt::Write;

use super::cfg::EdgeKind;
use super::pdg::Pdg;

pub fn dump_pdg(pdg: &Pdg, qualified_name: &str, path: &str) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# function {qualified_name} {path}");
    for n in &pdg.cfg.nodes {
        let s = n.span;
        let _ = writeln!(
            out,
            "node {} {} {}:{}-{}:{}",
            n.id,
            n.kind.as_str(),
            s.start_line,
            s.start_col,
            s.end_line,
            s.end_col
        );
    }
    for &(a, b, k) in &pdg.cfg.edges {
        let kind = match k {
            EdgeKind::Normal => "normal",
            EdgeKind::Exception => "exception",
        };
        let _ = writeln!(out, "cfg {a} {b} {kind}");
    }
    for e in &pdg.data_edges {
        let _ = writeln!(out, "data {} {} {}", e.from, e.to, e.var);
    }
    for (a, b) in &pdg.control_edges {
        let _ = writeln!(out, "control {a} {b}");
    }
    out
}
