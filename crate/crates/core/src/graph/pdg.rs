//! Program-dependence graphs: reaching-definition data edges plus control
//! dependence.

use std::collections::BTreeSet;

use super::cfg::{Cfg, EdgeKind, NodeId, EXIT};
use crate::syntax::NodeKind;

/// A definition site: node plus index into the node's `defs`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DefSite {
    pub node: NodeId,
    pub index: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DataEdge {
    pub from: NodeId,
    pub to: NodeId,
    pub var: String,
}

#[derive(Debug, Clone)]
pub struct Pdg {
    pub cfg: Cfg,
    pub data_edges: BTreeSet<DataEdge>,
    pub control_edges: BTreeSet<(NodeId, NodeId)>,
    /// Definition sites reaching each node's entry.
    pub reaching: Vec<Vec<DefSite>>,
}

#[derive(Clone, PartialEq, Eq)]
struct Bits(Vec<u64>);

impl Bits {
    fn new(n: usize) -> Self {
        Bits(vec![0; n.div_ceil(64)])
    }

    fn full(n: usize) -> Self {
        let mut b = Bits(vec![u64::MAX; n.div_ceil(64)]);
        if n % 64 != 0 {
            if let Some(last) = b.0.last_mut() {
                *last = (1u64 << (n % 64)) - 1;
            }
        }
        b
    }

    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn get(&self, i: usize) -> bool {
        self.0[i / 64] & (1 << (i % 64)) != 0
    }

    fn union_with(&mut self, other: &Bits) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a |= b;
        }
    }

    fn intersect_with(&mut self, other: &Bits) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a &= b;
        }
    }

    fn minus(&self, other: &Bits) -> Bits {
        Bits(self.0.iter().zip(&other.0).map(|(a, b)| a & !b).collect())
    }

    fn count(&self) -> u32 {
        self.0.iter().map(|w| w.count_ones()).sum()
    }

    fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0
            .iter()
            .enumerate()
            .flat_map(|(w, &bits)| (0..64).filter(move |b| bits & (1 << b) != 0).map(move |b| w * 64 + b))
    }
}

fn reaching_definitions(cfg: &Cfg) -> (Vec<DefSite>, Vec<Bits>) {
    let sites: Vec<DefSite> =
        cfg.nodes.iter().flat_map(|n| (0..n.defs.len()).map(move |index| DefSite { node: n.id, index })).collect();
    let name_of = |s: &DefSite| cfg.nodes[s.node].defs[s.index].name.as_str();
    let n = cfg.len();
    let m = sites.len();
    let mut gen = vec![Bits::new(m); n];
    let mut kill = vec![Bits::new(m); n];
    for (i, s) in sites.iter().enumerate() {
        gen[s.node].set(i);
    }
    for node in &cfg.nodes {
        for d in node.defs.iter().filter(|d| d.strong) {
            for (i, s) in sites.iter().enumerate() {
                if s.node != node.id && name_of(s) == d.name {
                    kill[node.id].set(i);
                }
            }
        }
    }
    let mut inn = vec![Bits::new(m); n];
    let mut out: Vec<Bits> = gen.clone();
    let order: Vec<NodeId> = (0..n).collect();
    let mut changed = true;
    while changed {
        changed = false;
        for &v in &order {
            let mut acc = Bits::new(m);
            for &(p, kind) in cfg.predecessors(v) {
                acc.union_with(&out[p]);
                // an exception may leave p before its definitions take effect
                if kind == EdgeKind::Exception {
                    acc.union_with(&inn[p]);
                }
            }
            let mut o = acc.minus(&kill[v]);
            o.union_with(&gen[v]);
            if acc != inn[v] || o != out[v] {
                inn[v] = acc;
                out[v] = o;
                changed = true;
            }
        }
    }
    (sites, inn)
}

/// Normal edges plus the transfers of explicit `raise` statements; implicit
/// exceptional edges out of try bodies are left out.
fn is_flow_edge(cfg: &Cfg, from: NodeId, kind: EdgeKind) -> bool {
    kind == EdgeKind::Normal || cfg.nodes[from].syntax.kind == NodeKind::Raise
}

/// Post-dominator sets over flow edges; `None` for nodes that cannot reach exit.
fn post_dominators(cfg: &Cfg) -> Vec<Option<Bits>> {
    let n = cfg.len();
    let normal_succ = |v: NodeId| cfg.successors(v).iter().filter(move |e| is_flow_edge(cfg, v, e.1)).map(|e| e.0);
    let mut reaches = vec![false; n];
    reaches[EXIT] = true;
    let mut stack = vec![EXIT];
    while let Some(v) = stack.pop() {
        for &(p, k) in cfg.predecessors(v) {
            if is_flow_edge(cfg, p, k) && !reaches[p] {
                reaches[p] = true;
                stack.push(p);
            }
        }
    }
    let mut pdom: Vec<Bits> = (0..n).map(|_| Bits::full(n)).collect();
    pdom[EXIT] = Bits::new(n);
    pdom[EXIT].set(EXIT);
    let mut changed = true;
    while changed {
        changed = false;
        for v in (0..n).rev() {
            if v == EXIT || !reaches[v] {
                continue;
            }
            let mut acc: Option<Bits> = None;
            for s in normal_succ(v).filter(|&s| reaches[s]) {
                match &mut acc {
                    None => acc = Some(pdom[s].clone()),
                    Some(a) => a.intersect_with(&pdom[s]),
                }
            }
            let mut next = acc.unwrap_or_else(|| Bits::new(n));
            next.set(v);
            if next != pdom[v] {
                pdom[v] = next;
                changed = true;
            }
        }
    }
    pdom.into_iter().enumerate().map(|(i, b)| reaches[i].then_some(b)).collect()
}

fn control_dependence(cfg: &Cfg) -> BTreeSet<(NodeId, NodeId)> {
    let mut edges = BTreeSet::new();
    for node in &cfg.nodes {
        if let Some(g) = node.governor {
            edges.insert((g, node.id));
        }
    }
    let pdom = post_dominators(cfg);
    let ipdom: Vec<Option<NodeId>> = pdom
        .iter()
        .enumerate()
        .map(|(v, set)| {
            let set = set.as_ref()?;
            set.iter().filter(|&d| d != v).max_by_key(|&d| pdom[d].as_ref().map(|b| b.count()).unwrap_or(0))
        })
        .collect();
    for a in cfg.nodes.iter().filter(|n| n.kind.is_predicate()) {
        let Some(pa) = &pdom[a.id] else { continue };
        for &(b, kind) in cfg.successors(a.id) {
            if kind != EdgeKind::Normal || pdom[b].is_none() {
                continue;
            }
            // b post-dominates a: no dependence along this edge
            if pa.get(b) {
                continue;
            }
            let stop = ipdom[a.id];
            let mut runner = Some(b);
            while let Some(r) = runner {
                if Some(r) == stop {
                    break;
                }
                if r != a.id {
                    edges.insert((a.id, r));
                }
                runner = ipdom[r];
            }
        }
    }
    edges.retain(|&(a, b)| a != EXIT && b != EXIT && a != b);
    edges
}

/// Builds the PDG over a CFG.
pub fn build_pdg(cfg: Cfg) -> Pdg {
    let (sites, inn) = reaching_definitions(&cfg);
    let mut data_edges = BTreeSet::new();
    let mut reaching = Vec::with_capacity(cfg.len());
    for node in &cfg.nodes {
        let here: Vec<DefSite> = inn[node.id].iter().map(|i| sites[i]).collect();
        for u in &node.uses {
            for s in &here {
                if cfg.nodes[s.node].defs[s.index].name == u.name {
                    data_edges.insert(DataEdge { from: s.node, to: node.id, var: u.name.clone() });
                }
            }
        }
        reaching.push(here);
    }
    let control_edges = control_dependence(&cfg);
    Pdg { cfg, data_edges, control_edges, reaching }
}

impl Pdg {
    pub fn data_successors<'a>(&'a self, from: NodeId, var: &'a str) -> impl Iterator<Item = NodeId> + 'a {
        self.data_edges
            .range(DataEdge { from, to: 0, var: String::new() }..)
            .take_while(move |e| e.from == from)
            .filter(move |e| e.var == var)
            .map(|e| e.to)
    }

    pub fn data_predecessors(&self, to: NodeId) -> impl Iterator<Item = &DataEdge> + '_ {
        self.data_edges.iter().filter(move |e| e.to == to)
    }

    /// Definition sites of `var` reaching the entry of `node`.
    pub fn reaching_defs_of<'a>(&'a self, node: NodeId, var: &'a str) -> impl Iterator<Item = DefSite> + 'a {
        self.reaching[node].iter().copied().filter(move |s| self.cfg.nodes[s.node].defs[s.index].name == var)
    }

    pub fn control_dependents(&self, pred: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        self.control_edges.range((pred, 0)..).take_while(move |e| e.0 == pred).map(|e| e.1)
    }

    pub fn control_ancestors(&self, node: NodeId) -> BTreeSet<NodeId> {
        let mut seen = BTreeSet::new();
        let mut stack = vec![node];
        while let Some(v) = stack.pop() {
            for &(a, b) in &self.control_edges {
                if b == v && seen.insert(a) {
                    stack.push(a);
                }
            }
        }
        seen
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_cfg;
    use crate::syntax::ParsedModule;

    fn pdg_of(src: &str, function: &str) -> Pdg {
        let m = ParsedModule::parse("t.py", src.to_string()).unwrap();
        let unit = m.functions().into_iter().find(|u| u.name == function).unwrap();
        build_pdg(build_cfg(&unit))
    }

    fn line_edges(p: &Pdg) -> Vec<(u32, u32, String)> {
        p.data_edges
            .iter()
            .map(|e| (p.cfg.nodes[e.from].span.start_line, p.cfg.nodes[e.to].span.start_line, e.var.clone()))
            .collect()
    }

    #[test]
    fn split_then_index() {
        let p = pdg_of("def f(s):\n    a = s.split(',')\n    b = a[0]\n", "f");
        assert_eq!(line_edges(&p), [(1, 2, "s".to_string()), (2, 3, "a".to_string())]);
    }

    #[test]
    fn single_statement_has_no_edges() {
        let p = pdg_of("def f():\n    return 1\n", "f");
        assert!(p.data_edges.is_empty());
        assert!(p.control_edges.is_empty());
    }

    #[test]
    fn redefinition_kills() {
        let p = pdg_of("def f(s):\n    x = s\n    x = 1\n    return x\n", "f");
        let e = line_edges(&p);
        assert!(e.contains(&(3, 4, "x".to_string())));
        assert!(!e.contains(&(2, 4, "x".to_string())));
    }

    #[test]
    fn partial_definition_does_not_kill() {
        let p = pdg_of("def f(s):\n    d = {}\n    d[s] = 1\n    return d\n", "f");
        let e = line_edges(&p);
        assert!(e.contains(&(2, 4, "d".to_string())));
        assert!(e.contains(&(3, 4, "d".to_string())));
    }

    #[test]
    fn loop_carried_dependence() {
        let p = pdg_of("def f(s):\n    acc = ''\n    for c in s:\n        acc += c\n    return acc\n", "f");
        let e = line_edges(&p);
        assert!(e.contains(&(4, 4, "acc".to_string())));
        assert!(e.contains(&(2, 4, "acc".to_string())));
        assert!(e.contains(&(3, 4, "c".to_string())));
        assert!(e.contains(&(4, 5, "acc".to_string())));
    }

    #[test]
    fn governed_statements_have_control_edges() {
        let src = "def f(s):\n    if s:\n        a = 1\n    else:\n        a = 2\n    return a\n";
        let p = pdg_of(src, "f");
        let lines: Vec<(u32, u32)> = p
            .control_edges
            .iter()
            .map(|&(a, b)| (p.cfg.nodes[a].span.start_line, p.cfg.nodes[b].span.start_line))
            .collect();
        assert_eq!(lines, [(2, 3), (2, 5)]);
    }

    #[test]
    fn early_exit_guard_controls_the_rest() {
        let src = "def f(s):\n    m = g(s)\n    if not m:\n        raise ValueError(s)\n    return m.group(1)\n";
        let p = pdg_of(src, "f");
        let pred = p.cfg.statements().find(|n| n.span.start_line == 3).unwrap().id;
        let ret = p.cfg.statements().find(|n| n.span.start_line == 5).unwrap().id;
        assert!(p.control_edges.contains(&(pred, ret)));
        assert!(p.control_ancestors(ret).contains(&pred));
    }

    #[test]
    fn exception_edge_carries_defs_before_the_statement() {
        let src =
            "def f(s):\n    v = s\n    try:\n        v = int(s)\n    except ValueError:\n        pass\n    return v\n";
        let p = pdg_of(src, "f");
        let e = line_edges(&p);
        assert!(e.contains(&(2, 7, "v".to_string())));
        assert!(e.contains(&(4, 7, "v".to_string())));
    }
}
