//! Statement-level control-flow graphs.

use std::collections::{BTreeSet, VecDeque};

use serde::Serialize;

use super::defuse::{BindingKind, Def, DefUse, Use};
use crate::syntax::{BlockRole, FunctionUnit, LiteralKind, NodeKind, Span, SyntaxNode};

pub type NodeId = usize;

pub const ENTRY: NodeId = 0;
pub const EXIT: NodeId = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CfgNodeKind {
    Entry,
    Exit,
    Statement,
    /// `if`/`elif`/`while` test, `match` subject or case.
    Predicate,
    /// `for` header.
    LoopHeader,
    WithEnter,
    HandlerEntry,
    /// `def`/`class` header.
    Definition,
}

impl CfgNodeKind {
    pub fn as_str(self) -> &'static str {
        match self {
            CfgNodeKind::Entry => "entry",
            CfgNodeKind::Exit => "exit",
            CfgNodeKind::Statement => "statement",
            CfgNodeKind::Predicate => "predicate",
            CfgNodeKind::LoopHeader => "loop-header",
            CfgNodeKind::WithEnter => "with",
            CfgNodeKind::HandlerEntry => "handler",
            CfgNodeKind::Definition => "definition",
        }
    }

    /// Nodes whose outcome selects among successors.
    pub fn is_predicate(self) -> bool {
        matches!(self, CfgNodeKind::Predicate | CfgNodeKind::LoopHeader)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EdgeKind {
    Normal,
    Exception,
}

#[derive(Debug, Clone)]
pub struct CfgNode {
    pub id: NodeId,
    pub kind: CfgNodeKind,
    /// The statement with nested bodies stripped (just the header for
    /// compound statements).
    pub syntax: SyntaxNode,
    pub span: Span,
    pub defs: Vec<Def>,
    pub uses: Vec<Use>,
    /// Innermost predicate whose body syntactically contains this node.
    pub governor: Option<NodeId>,
}

impl CfgNode {
    pub fn defines(&self, name: &str) -> bool {
        self.defs.iter().any(|d| d.name == name)
    }

    pub fn uses_name(&self, name: &str) -> bool {
        self.uses.iter().any(|u| u.name == name)
    }

    /// Source kind of the underlying statement.
    pub fn source_kind(&self) -> NodeKind {
        self.syntax.kind
    }
}

#[derive(Debug, Clone)]
pub struct Cfg {
    pub nodes: Vec<CfgNode>,
    pub edges: BTreeSet<(NodeId, NodeId, EdgeKind)>,
    /// Nodes not reachable from entry.
    pub dead: Vec<NodeId>,
    succ: Vec<Vec<(NodeId, EdgeKind)>>,
    pred: Vec<Vec<(NodeId, EdgeKind)>>,
}

impl Cfg {
    pub fn entry(&self) -> NodeId {
        ENTRY
    }

    pub fn exit(&self) -> NodeId {
        EXIT
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node(&self, id: NodeId) -> &CfgNode {
        &self.nodes[id]
    }

    pub fn successors(&self, id: NodeId) -> &[(NodeId, EdgeKind)] {
        &self.succ[id]
    }

    pub fn predecessors(&self, id: NodeId) -> &[(NodeId, EdgeKind)] {
        &self.pred[id]
    }

    /// Statement nodes (everything but entry and exit), in source order.
    pub fn statements(&self) -> impl Iterator<Item = &CfgNode> {
        let mut v: Vec<&CfgNode> = self.nodes[2..].iter().collect();
        v.sort_by_key(|n| (n.span.start(), n.id));
        v.into_iter()
    }

    /// The statement node whose span contains the position, innermost first.
    pub fn node_at(&self, line: u32, col: u32) -> Option<NodeId> {
        let probe = Span::point(line, col);
        self.nodes[2..]
            .iter()
            .filter(|n| n.span.encloses(&probe))
            .min_by_key(|n| (n.span.end_line - n.span.start_line, n.span.end_col, n.id))
            .map(|n| n.id)
    }

    fn finish(mut self) -> Cfg {
        let n = self.nodes.len();
        self.succ = vec![Vec::new(); n];
        self.pred = vec![Vec::new(); n];
        for &(a, b, k) in &self.edges {
            self.succ[a].push((b, k));
            self.pred[b].push((a, k));
        }
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([ENTRY]);
        seen[ENTRY] = true;
        while let Some(x) = queue.pop_front() {
            for &(y, _) in &self.succ[x] {
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
        self.dead = (2..n).filter(|&i| !seen[i]).collect();
        self
    }
}

type Frontier = Vec<(NodeId, EdgeKind)>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Jump {
    Exit,
    Break(usize),
    Continue(usize),
    Handler(NodeId),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Phase {
    Body,
    Handlers,
    Finally,
}

struct TryFrame {
    handlers: Vec<(NodeId, Option<Vec<String>>)>,
    catch_all: bool,
    has_finally: bool,
    phase: Phase,
    finally_preds: Frontier,
    jumps: Vec<(Jump, usize)>,
}

struct LoopFrame {
    header: NodeId,
    breaks: Frontier,
    try_depth: usize,
}

struct Builder {
    nodes: Vec<CfgNode>,
    edges: BTreeSet<(NodeId, NodeId, EdgeKind)>,
    loops: Vec<LoopFrame>,
    tries: Vec<TryFrame>,
    governors: Vec<NodeId>,
}

/// Handler type names: `None` for a bare handler.
pub fn handler_names(handler: &SyntaxNode) -> Option<Vec<String>> {
    let ty = handler.block_items(BlockRole::HandlerType).first()?;
    let items: Vec<&SyntaxNode> = if ty.kind == NodeKind::TupleExpr { ty.children.iter().collect() } else { vec![ty] };
    Some(items.iter().filter_map(|t| t.dotted_name()).map(|d| last_segment(&d).to_string()).collect())
}

pub fn last_segment(dotted: &str) -> &str {
    dotted.rsplit('.').next().unwrap_or(dotted)
}

/// Does a handler with these names catch `exception`?
pub fn handler_catches(names: &Option<Vec<String>>, exception: &str) -> bool {
    match names {
        None => true,
        Some(list) => list.iter().any(|n| n == exception || n == "Exception" || n == "BaseException"),
    }
}

/// Exception name raised by a `raise` statement; `None` for a bare re-raise.
pub fn raised_name(raise: &SyntaxNode) -> Option<String> {
    let exc = raise.child(0)?;
    let target = if exc.kind == NodeKind::Call { exc.callee()? } else { exc };
    Some(target.dotted_name().unwrap_or_else(|| "<dynamic>".to_string()))
}

fn is_constant_true(test: &SyntaxNode) -> bool {
    match test.kind {
        NodeKind::Literal(LiteralKind::Bool) => test.text() == Some("True"),
        NodeKind::Literal(LiteralKind::Int) => test.text().is_some_and(|t| t.trim_start_matches(['0', '_']) != ""),
        NodeKind::Literal(LiteralKind::Str) => test.text().is_some_and(|t| !t.is_empty()),
        _ => false,
    }
}

/// A copy of a compound statement without its nested statement blocks.
fn header_view(stmt: &SyntaxNode) -> SyntaxNode {
    let keep = |c: &SyntaxNode| {
        !matches!(
            c.kind,
            NodeKind::Block(BlockRole::Body | BlockRole::OrElse | BlockRole::Handlers | BlockRole::Finally)
        ) && c.kind != NodeKind::MatchCase
    };
    let children: Vec<SyntaxNode> = stmt.children.iter().filter(|c| keep(c)).cloned().collect();
    let start = Span::point(stmt.span.start_line, stmt.span.start_col);
    let span = children
        .iter()
        .filter(|c| !matches!(c.kind, NodeKind::Block(_)) || !c.children.is_empty())
        .fold(start, |acc, c| acc.union(&c.span));
    SyntaxNode { kind: stmt.kind, children, span, text: stmt.text.clone() }
}

impl Builder {
    fn push_node(&mut self, kind: CfgNodeKind, syntax: SyntaxNode, du: DefUse) -> NodeId {
        let id = self.nodes.len();
        let span = syntax.span;
        self.nodes.push(CfgNode {
            id,
            kind,
            syntax,
            span,
            defs: du.defs,
            uses: du.uses,
            governor: self.governors.last().copied(),
        });
        id
    }

    fn connect(&mut self, frontier: &Frontier, to: NodeId) {
        for &(from, kind) in frontier {
            self.edges.insert((from, to, kind));
        }
    }

    /// Adds a node after `frontier`, with exceptional edges for the innermost try.
    fn add(&mut self, kind: CfgNodeKind, syntax: SyntaxNode, du: DefUse, frontier: &Frontier) -> NodeId {
        let id = self.push_node(kind, syntax, du);
        self.connect(frontier, id);
        if let Some(frame) = self.tries.last_mut() {
            match frame.phase {
                Phase::Body => {
                    for &(h, _) in &frame.handlers {
                        self.edges.insert((id, h, EdgeKind::Exception));
                    }
                    if frame.has_finally && !frame.catch_all {
                        frame.finally_preds.push((id, EdgeKind::Exception));
                        if !frame.jumps.contains(&(Jump::Exit, 0)) {
                            frame.jumps.push((Jump::Exit, 0));
                        }
                    }
                }
                Phase::Handlers if frame.has_finally => {
                    frame.finally_preds.push((id, EdgeKind::Exception));
                    if !frame.jumps.contains(&(Jump::Exit, 0)) {
                        frame.jumps.push((Jump::Exit, 0));
                    }
                }
                _ => {}
            }
        }
        id
    }

    /// Sends an abrupt transfer towards its target, detouring through pending
    /// `finally` blocks between here and the target's try depth.
    fn route(&mut self, from: Frontier, jump: Jump, depth: usize) {
        for i in (depth..self.tries.len()).rev() {
            let frame = &mut self.tries[i];
            if frame.has_finally && frame.phase != Phase::Finally {
                frame.finally_preds.extend(from);
                if !frame.jumps.contains(&(jump, depth)) {
                    frame.jumps.push((jump, depth));
                }
                return;
            }
        }
        match jump {
            Jump::Exit => self.connect(&from, EXIT),
            Jump::Handler(h) => {
                for (f, _) in from {
                    self.edges.insert((f, h, EdgeKind::Exception));
                }
            }
            Jump::Break(l) => self.loops[l].breaks.extend(from),
            Jump::Continue(l) => {
                let header = self.loops[l].header;
                self.connect(&from, header);
            }
        }
    }

    fn seq(&mut self, stmts: &[SyntaxNode], mut frontier: Frontier) -> Frontier {
        for s in stmts {
            frontier = self.stmt(s, frontier);
        }
        frontier
    }

    fn simple(&mut self, s: &SyntaxNode) -> DefUse {
        let mut du = DefUse::default();
        match s.kind {
            NodeKind::Assignment => {
                let value = s.assigned_value();
                if let Some(v) = value {
                    du.read(v);
                }
                for a in s.children.iter().filter(|c| c.kind == NodeKind::Annotation) {
                    du.read(a);
                }
                for t in s.assigned_targets() {
                    du.bind(t, value, BindingKind::Direct);
                }
            }
            NodeKind::AugmentedAssignment => {
                if let (Some(t), Some(v)) = (s.child(0), s.child(1)) {
                    du.read(v);
                    du.read(t);
                    du.bind(t, Some(s), BindingKind::Augmented);
                }
            }
            NodeKind::AnnotatedDeclaration => {
                for c in s.children.iter().skip(1) {
                    du.read(c);
                }
            }
            NodeKind::Import => {
                for alias in &s.children {
                    let bound = match alias.child(0) {
                        Some(asname) => asname.text().map(str::to_string),
                        None => alias.text().map(|t| t.split('.').next().unwrap_or(t).to_string()),
                    };
                    if let Some(name) = bound.filter(|n| n != "*") {
                        du.defs.push(Def::new(&name, alias.span, BindingKind::Opaque, None));
                    }
                }
            }
            NodeKind::Global | NodeKind::Pass | NodeKind::Break | NodeKind::Continue => {}
            _ => {
                for c in &s.children {
                    du.read(c);
                }
            }
        }
        du
    }

    fn stmt(&mut self, s: &SyntaxNode, frontier: Frontier) -> Frontier {
        match s.kind {
            NodeKind::If => {
                let mut du = DefUse::default();
                if let Some(test) = s.child(0) {
                    du.read(test);
                }
                let pred = self.add(CfgNodeKind::Predicate, header_view(s), du, &frontier);
                self.governors.push(pred);
                let mut out = self.seq(s.block_items(BlockRole::Body), vec![(pred, EdgeKind::Normal)]);
                let orelse = s.block_items(BlockRole::OrElse);
                if orelse.is_empty() {
                    out.push((pred, EdgeKind::Normal));
                } else {
                    out.extend(self.seq(orelse, vec![(pred, EdgeKind::Normal)]));
                }
                self.governors.pop();
                out
            }
            NodeKind::While | NodeKind::For => {
                let mut du = DefUse::default();
                let (kind, infinite) = if s.kind == NodeKind::While {
                    let test = s.child(0);
                    if let Some(t) = test {
                        du.read(t);
                    }
                    (CfgNodeKind::Predicate, test.is_some_and(is_constant_true))
                } else {
                    if let Some(iter) = s.child(1) {
                        du.read(iter);
                    }
                    if let Some(target) = s.child(0) {
                        du.bind(target, s.child(1), BindingKind::Iteration);
                    }
                    (CfgNodeKind::LoopHeader, false)
                };
                let header = self.add(kind, header_view(s), du, &frontier);
                self.loops.push(LoopFrame { header, breaks: Vec::new(), try_depth: self.tries.len() });
                self.governors.push(header);
                let body_end = self.seq(s.block_items(BlockRole::Body), vec![(header, EdgeKind::Normal)]);
                self.connect(&body_end, header);
                let mut out = if infinite { Vec::new() } else { vec![(header, EdgeKind::Normal)] };
                let orelse = s.block_items(BlockRole::OrElse);
                if !orelse.is_empty() {
                    out = self.seq(orelse, out);
                }
                self.governors.pop();
                let frame = self.loops.pop().expect("loop frame");
                out.extend(frame.breaks);
                out
            }
            NodeKind::Try => self.try_stmt(s, frontier),
            NodeKind::With => {
                let mut du = DefUse::default();
                for item in s.block_items(BlockRole::Items) {
                    if let Some(ctx) = item.child(0) {
                        du.read(ctx);
                        if let Some(target) = item.child(1) {
                            du.bind(target, Some(ctx), BindingKind::ContextManager);
                        }
                    }
                }
                let enter = self.add(CfgNodeKind::WithEnter, header_view(s), du, &frontier);
                self.seq(s.block_items(BlockRole::Body), vec![(enter, EdgeKind::Normal)])
            }
            NodeKind::Match => {
                let mut du = DefUse::default();
                if let Some(subject) = s.child(0) {
                    du.read(subject);
                }
                let subject = self.add(CfgNodeKind::Predicate, header_view(s), du, &frontier);
                self.governors.push(subject);
                let mut prev = vec![(subject, EdgeKind::Normal)];
                let mut out = Vec::new();
                for case in s.children.iter().filter(|c| c.kind == NodeKind::MatchCase) {
                    let mut du = DefUse::default();
                    for g in case.block_items(BlockRole::Guard) {
                        du.read(g);
                    }
                    let c = self.add(CfgNodeKind::Predicate, header_view(case), du, &prev);
                    self.governors.push(c);
                    out.extend(self.seq(case.block_items(BlockRole::Body), vec![(c, EdgeKind::Normal)]));
                    self.governors.pop();
                    prev = vec![(c, EdgeKind::Normal)];
                }
                self.governors.pop();
                out.extend(prev);
                out
            }
            NodeKind::FunctionDef | NodeKind::ClassDef => {
                let mut du = DefUse::default();
                let header = header_view(s);
                for c in &header.children {
                    match c.kind {
                        NodeKind::Block(BlockRole::Parameters) => {
                            for p in &c.children {
                                for d in p.block_items(BlockRole::Default) {
                                    du.read(d);
                                }
                            }
                        }
                        _ => du.read(c),
                    }
                }
                if let Some(name) = s.text() {
                    du.defs.push(Def::new(name, header.span, BindingKind::Opaque, None));
                }
                let id = self.add(CfgNodeKind::Definition, header, du, &frontier);
                let out = vec![(id, EdgeKind::Normal)];
                if s.kind == NodeKind::ClassDef {
                    self.seq(s.block_items(BlockRole::Body), out)
                } else {
                    out
                }
            }
            NodeKind::Return => {
                let du = self.simple(s);
                let id = self.add(CfgNodeKind::Statement, s.clone(), du, &frontier);
                self.route(vec![(id, EdgeKind::Normal)], Jump::Exit, 0);
                Vec::new()
            }
            NodeKind::Raise => {
                let du = self.simple(s);
                let id = self.add(CfgNodeKind::Statement, s.clone(), du, &frontier);
                let name = raised_name(s);
                let mut target = None;
                if let Some(name) = &name {
                    let short = last_segment(name).to_string();
                    'outer: for i in (0..self.tries.len()).rev() {
                        if self.tries[i].phase != Phase::Body {
                            continue;
                        }
                        for (h, names) in &self.tries[i].handlers {
                            if handler_catches(names, &short) {
                                target = Some((*h, i + 1));
                                break 'outer;
                            }
                        }
                    }
                }
                match target {
                    Some((h, depth)) => self.route(vec![(id, EdgeKind::Exception)], Jump::Handler(h), depth),
                    None => self.route(vec![(id, EdgeKind::Exception)], Jump::Exit, 0),
                }
                Vec::new()
            }
            NodeKind::Break | NodeKind::Continue => {
                let id = self.add(CfgNodeKind::Statement, s.clone(), DefUse::default(), &frontier);
                if let Some(l) = self.loops.len().checked_sub(1) {
                    let depth = self.loops[l].try_depth;
                    let jump = if s.kind == NodeKind::Break { Jump::Break(l) } else { Jump::Continue(l) };
                    self.route(vec![(id, EdgeKind::Normal)], jump, depth);
                }
                Vec::new()
            }
            _ => {
                let du = self.simple(s);
                let id = self.add(CfgNodeKind::Statement, s.clone(), du, &frontier);
                vec![(id, EdgeKind::Normal)]
            }
        }
    }

    fn try_stmt(&mut self, s: &SyntaxNode, frontier: Frontier) -> Frontier {
        let mut handlers = Vec::new();
        let mut handler_nodes = Vec::new();
        for h in s.block_items(BlockRole::Handlers) {
            let mut du = DefUse::default();
            for t in h.block_items(BlockRole::HandlerType) {
                du.read(t);
            }
            let view = header_view(h);
            if let Some(name) = h.text() {
                du.defs.push(Def::new(name, view.span, BindingKind::Opaque, None));
            }
            let id = self.push_node(CfgNodeKind::HandlerEntry, view, du);
            handlers.push((id, handler_names(h)));
            handler_nodes.push((id, h));
        }
        let catch_all = handlers.iter().any(|(_, n)| handler_catches(n, "\u{0}"));
        let has_finally = !s.block_items(BlockRole::Finally).is_empty();
        self.tries.push(TryFrame {
            handlers,
            catch_all,
            has_finally,
            phase: Phase::Body,
            finally_preds: Vec::new(),
            jumps: Vec::new(),
        });
        let body_end = self.seq(s.block_items(BlockRole::Body), frontier);
        self.tries.last_mut().expect("try frame").phase = Phase::Handlers;
        let mut normal = self.seq(s.block_items(BlockRole::OrElse), body_end);
        for (id, h) in handler_nodes {
            normal.extend(self.seq(h.block_items(BlockRole::Body), vec![(id, EdgeKind::Normal)]));
        }
        if !has_finally {
            self.tries.pop();
            return normal;
        }
        let frame = self.tries.last_mut().expect("try frame");
        frame.phase = Phase::Finally;
        let mut preds = std::mem::take(&mut frame.finally_preds);
        let reaches_normally = !normal.is_empty();
        preds.extend(normal);
        let end = self.seq(s.block_items(BlockRole::Finally), preds);
        let frame = self.tries.pop().expect("try frame");
        for (jump, depth) in frame.jumps {
            self.route(end.clone(), jump, depth);
        }
        if reaches_normally {
            end
        } else {
            Vec::new()
        }
    }
}

/// Builds the CFG of one function unit. Nested function bodies are excluded;
/// class bodies are inlined.
pub fn build_cfg(unit: &FunctionUnit) -> Cfg {
    let entry_syntax = SyntaxNode::leaf(
        NodeKind::Opaque,
        Span::point(unit.span.start_line, unit.span.start_col),
        Some("entry".into()),
    );
    let exit_syntax =
        SyntaxNode::leaf(NodeKind::Opaque, Span::point(unit.span.end_line, unit.span.end_col), Some("exit".into()));
    let mut b = Builder {
        nodes: Vec::new(),
        edges: BTreeSet::new(),
        loops: Vec::new(),
        tries: Vec::new(),
        governors: Vec::new(),
    };
    b.push_node(CfgNodeKind::Entry, entry_syntax, DefUse::default());
    b.push_node(CfgNodeKind::Exit, exit_syntax, DefUse::default());
    b.nodes[ENTRY].kind = CfgNodeKind::Entry;
    b.nodes[EXIT].kind = CfgNodeKind::Exit;
    let end = b.seq(&unit.body, vec![(ENTRY, EdgeKind::Normal)]);
    b.connect(&end, EXIT);

    // names bound anywhere in the unit; callee names count as uses only for these
    let mut local: BTreeSet<String> = unit.parameters.iter().map(|p| p.name.clone()).collect();
    for n in &b.nodes {
        local.extend(n.defs.iter().map(|d| d.name.clone()));
    }
    for n in &mut b.nodes {
        n.uses.retain(|u| !u.callee || local.contains(&u.name));
    }
    let mut entry_defs: Vec<Def> =
        unit.parameters.iter().map(|p| Def::new(&p.name, p.span, BindingKind::Parameter, None)).collect();
    let mut free: BTreeSet<&str> = BTreeSet::new();
    for n in &b.nodes {
        for u in &n.uses {
            if !local.contains(&u.name) {
                free.insert(u.name.as_str());
            }
        }
    }
    let entry_span = b.nodes[ENTRY].span;
    entry_defs.extend(free.into_iter().map(|name| Def::new(name, entry_span, BindingKind::Free, None)));
    b.nodes[ENTRY].defs = entry_defs;

    Cfg { nodes: b.nodes, edges: b.edges, dead: Vec::new(), succ: Vec::new(), pred: Vec::new() }.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::ParsedModule;

    pub(crate) fn cfg_of(src: &str, function: &str) -> Cfg {
        let m = ParsedModule::parse("t.py", src.to_string()).unwrap();
        let unit = m.functions().into_iter().find(|u| u.name == function).unwrap();
        build_cfg(&unit)
    }

    fn normal_edges(cfg: &Cfg) -> Vec<(u32, u32)> {
        // (line, line) pairs, with entry = 0 and exit = 99
        let line = |id: NodeId| match id {
            ENTRY => 0,
            EXIT => 99,
            _ => cfg.nodes[id].span.start_line,
        };
        cfg.edges.iter().filter(|e| e.2 == EdgeKind::Normal).map(|&(a, b, _)| (line(a), line(b))).collect()
    }

    #[test]
    fn straight_line_chain() {
        let cfg = cfg_of("def f(a):\n    b = a\n    c = b\n    return c\n", "f");
        assert_eq!(cfg.len(), 5);
        let mut e = normal_edges(&cfg);
        e.sort();
        assert_eq!(e, [(0, 2), (2, 3), (3, 4), (4, 99)]);
        assert!(cfg.dead.is_empty());
    }

    #[test]
    fn if_else_converges_at_exit() {
        let src = "def f(path):\n    if path:\n        x = 1\n    else:\n        x = 2\n";
        let cfg = cfg_of(src, "f");
        let mut e = normal_edges(&cfg);
        e.sort();
        assert_eq!(e, [(0, 2), (2, 3), (2, 5), (3, 99), (5, 99)]);
        assert_eq!(cfg.nodes[2].kind, CfgNodeKind::Predicate);
    }

    #[test]
    fn while_true_with_break() {
        let src = "def f():\n    while True:\n        x = g()\n        if x:\n            break\n    return x\n";
        let cfg = cfg_of(src, "f");
        let mut e = normal_edges(&cfg);
        e.sort();
        // header 2, x 3, if 4, break 5, return 6
        assert_eq!(e, [(0, 2), (2, 3), (3, 4), (4, 2), (4, 5), (5, 6), (6, 99)]);
    }

    #[test]
    fn try_body_has_exception_edges_to_each_handler() {
        let src = "\
def f(s):
    try:
        a = int(s)
        b = a + 1
    except ValueError:
        b = 0
    except KeyError as e:
        b = 1
    return b
";
        let cfg = cfg_of(src, "f");
        let handlers: Vec<NodeId> =
            cfg.nodes.iter().filter(|n| n.kind == CfgNodeKind::HandlerEntry).map(|n| n.id).collect();
        assert_eq!(handlers.len(), 2);
        for n in cfg.nodes.iter().filter(|n| n.span.start_line == 3 || n.span.start_line == 4) {
            for h in &handlers {
                assert!(cfg.edges.contains(&(n.id, *h, EdgeKind::Exception)));
            }
        }
        assert!(cfg.dead.is_empty());
    }

    #[test]
    fn finally_follows_normal_and_abrupt_paths() {
        let src = "\
def f(s):
    try:
        if s:
            return 1
        x = 2
    finally:
        done()
    return x
";
        let cfg = cfg_of(src, "f");
        let fin = cfg.statements().find(|n| n.span.start_line == 7).unwrap().id;
        let ret1 = cfg.statements().find(|n| n.span.start_line == 4).unwrap().id;
        let x = cfg.statements().find(|n| n.span.start_line == 5).unwrap().id;
        let ret2 = cfg.statements().find(|n| n.span.start_line == 8).unwrap().id;
        assert!(cfg.edges.contains(&(ret1, fin, EdgeKind::Normal)));
        assert!(cfg.edges.contains(&(x, fin, EdgeKind::Normal)));
        assert!(cfg.edges.contains(&(x, fin, EdgeKind::Exception)));
        assert!(cfg.edges.contains(&(fin, ret2, EdgeKind::Normal)));
        assert!(cfg.edges.contains(&(fin, EXIT, EdgeKind::Normal)));
        assert!(!cfg.edges.contains(&(ret1, EXIT, EdgeKind::Normal)));
    }

    #[test]
    fn raise_goes_to_matching_handler() {
        let src = "\
def f(s):
    try:
        if not s:
            raise KeyError(s)
        v = s
    except ValueError:
        v = 1
    except KeyError:
        v = 2
    return v
";
        let cfg = cfg_of(src, "f");
        let raise = cfg.statements().find(|n| n.span.start_line == 4).unwrap().id;
        let key_handler = cfg.statements().find(|n| n.span.start_line == 8).unwrap().id;
        let succ: Vec<NodeId> = cfg.successors(raise).iter().map(|s| s.0).collect();
        assert!(succ.contains(&key_handler));
        assert!(!succ.contains(&EXIT));
    }

    #[test]
    fn uncaught_raise_goes_to_exit() {
        let cfg = cfg_of("def f(s):\n    if not s:\n        raise ValueError('x')\n    return s\n", "f");
        let raise = cfg.statements().find(|n| n.span.start_line == 3).unwrap().id;
        assert_eq!(cfg.successors(raise), &[(EXIT, EdgeKind::Exception)]);
    }

    #[test]
    fn code_after_return_is_dead() {
        let cfg = cfg_of("def f():\n    return 1\n    x = 2\n", "f");
        assert_eq!(cfg.dead.len(), 1);
        assert_eq!(cfg.nodes[cfg.dead[0]].span.start_line, 3);
    }

    #[test]
    fn continue_returns_to_header() {
        let src = "def f(xs):\n    for x in xs:\n        if x:\n            continue\n        g(x)\n";
        let cfg = cfg_of(src, "f");
        let e = normal_edges(&cfg);
        assert!(e.contains(&(4, 2)));
        assert!(e.contains(&(5, 2)));
        assert!(e.contains(&(2, 99)));
    }

    #[test]
    fn nested_defs_are_single_nodes() {
        let src = "def f(s):\n    def g(t):\n        return t.split()\n    return g(s)\n";
        let cfg = cfg_of(src, "f");
        assert_eq!(cfg.len(), 4);
        assert!(cfg.nodes[2].defines("g"));
        assert!(cfg.nodes[3].uses_name("g"));
    }

    #[test]
    fn entry_defines_params_and_free_names() {
        let cfg = cfg_of("def f(s):\n    return map(int, s.split(SEP))\n", "f");
        let names: Vec<_> = cfg.nodes[ENTRY].defs.iter().map(|d| d.name.as_str()).collect();
        assert_eq!(names, ["s", "SEP", "int"]);
        assert!(!cfg.nodes[2].uses_name("map"));
    }

    #[test]
    fn header_view_strips_bodies() {
        let cfg = cfg_of("def f(s):\n    if s:\n        return 1\n    return 2\n", "f");
        let pred = &cfg.nodes[2];
        assert_eq!(pred.span.start_line, 2);
        assert_eq!(pred.span.end_line, 2);
        assert_eq!(pred.syntax.children.len(), 1);
    }
}
