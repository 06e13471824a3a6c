//! Brute-force def-use pairs over bounded execution traces of the raw
//! parser AST, and the string-filtered forward closure built on them.

use std::collections::{BTreeMap, BTreeSet};

use rustpython_parser::ast::{self, Expr, Ranged, Stmt};
use rustpython_parser::Parse;

/// Loop iterations explored per loop entry.
const ITERATIONS: usize = 3;
pub const ENTRY: usize = usize::MAX;

#[derive(Debug, Clone)]
pub struct Event {
    /// 1-based line, 0-based byte column of the statement (or its header
    /// expression for compound statements).
    pub pos: (u32, u32),
    pub defs: Vec<(String, bool)>,
    pub uses: BTreeSet<String>,
}

enum Block {
    Simple(usize),
    Return(usize),
    If { test: usize, body: Vec<Block>, orelse: Vec<Block> },
    Loop { header: usize, body: Vec<Block> },
}

pub struct OracleFunction {
    pub name: String,
    pub events: Vec<Event>,
    /// Names bound at entry: parameters and free names.
    pub entry_defs: BTreeSet<String>,
    /// (def event, var) -> using events.
    pub du: BTreeMap<(usize, String), BTreeSet<usize>>,
    /// (event, var) -> definitions reaching the event.
    pub reach: BTreeMap<(usize, String), BTreeSet<usize>>,
    pub statement_count: usize,
}

struct Lines(Vec<usize>);

impl Lines {
    fn new(src: &str) -> Self {
        let mut v = vec![0];
        v.extend(src.bytes().enumerate().filter(|(_, b)| *b == b'\n').map(|(i, _)| i + 1));
        Lines(v)
    }

    fn pos(&self, offset: usize) -> (u32, u32) {
        let i = match self.0.binary_search(&offset) {
            Ok(i) => i,
            Err(i) => i - 1,
        };
        ((i + 1) as u32, (offset - self.0[i]) as u32)
    }
}

fn names_in(e: &Expr, bound: &BTreeSet<String>, out: &mut BTreeSet<String>) {
    let mut go = |x: &Expr| names_in(x, bound, out);
    match e {
        Expr::Name(n) => {
            if !bound.contains(n.id.as_str()) {
                out.insert(n.id.to_string());
            }
        }
        Expr::Constant(_) => {}
        Expr::Call(c) => {
            go(&c.func);
            c.args.iter().for_each(&mut go);
            c.keywords.iter().for_each(|k| go(&k.value));
        }
        Expr::Attribute(a) => go(&a.value),
        Expr::Subscript(s) => {
            go(&s.value);
            go(&s.slice);
        }
        Expr::Slice(s) => {
            for x in [&s.lower, &s.upper, &s.step].into_iter().flatten() {
                go(x);
            }
        }
        Expr::BinOp(b) => {
            go(&b.left);
            go(&b.right);
        }
        Expr::BoolOp(b) => b.values.iter().for_each(go),
        Expr::UnaryOp(u) => go(&u.operand),
        Expr::Compare(c) => {
            go(&c.left);
            c.comparators.iter().for_each(go);
        }
        Expr::IfExp(i) => {
            go(&i.test);
            go(&i.body);
            go(&i.orelse);
        }
        Expr::Tuple(t) => t.elts.iter().for_each(go),
        Expr::List(l) => l.elts.iter().for_each(go),
        Expr::Dict(d) => {
            d.keys.iter().flatten().for_each(&mut go);
            d.values.iter().for_each(go);
        }
        Expr::JoinedStr(j) => j.values.iter().for_each(go),
        Expr::FormattedValue(f) => {
            go(&f.value);
            if let Some(s) = &f.format_spec {
                go(s);
            }
        }
        Expr::ListComp(c) => comprehension(&[&c.elt], &c.generators, bound, out),
        Expr::GeneratorExp(c) => comprehension(&[&c.elt], &c.generators, bound, out),
        other => panic!("expression outside the oracle subset: {other:?}"),
    }
}

fn target_names(t: &Expr, out: &mut BTreeSet<String>) {
    match t {
        Expr::Name(n) => {
            out.insert(n.id.to_string());
        }
        Expr::Tuple(x) => x.elts.iter().for_each(|e| target_names(e, out)),
        Expr::List(x) => x.elts.iter().for_each(|e| target_names(e, out)),
        _ => panic!("comprehension target outside the oracle subset"),
    }
}

fn comprehension(elts: &[&Expr], gens: &[ast::Comprehension], bound: &BTreeSet<String>, out: &mut BTreeSet<String>) {
    let mut inner = bound.clone();
    for g in gens {
        names_in(&g.iter, &inner, out);
        target_names(&g.target, &mut inner);
        for cond in &g.ifs {
            names_in(cond, &inner, out);
        }
    }
    for e in elts {
        names_in(e, &inner, out);
    }
}

fn uses_of(e: &Expr) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    names_in(e, &BTreeSet::new(), &mut out);
    out
}

/// Definitions and extra uses contributed by an assignment target.
fn bind(t: &Expr, defs: &mut Vec<(String, bool)>, uses: &mut BTreeSet<String>) {
    match t {
        Expr::Name(n) => defs.push((n.id.to_string(), true)),
        Expr::Tuple(x) => x.elts.iter().for_each(|e| bind(e, defs, uses)),
        Expr::List(x) => x.elts.iter().for_each(|e| bind(e, defs, uses)),
        Expr::Starred(s) => bind(&s.value, defs, uses),
        Expr::Subscript(_) | Expr::Attribute(_) => {
            let mut root = t;
            loop {
                root = match root {
                    Expr::Subscript(s) => &s.value,
                    Expr::Attribute(a) => &a.value,
                    _ => break,
                };
            }
            if let Expr::Name(n) = root {
                defs.push((n.id.to_string(), false));
            }
            uses.extend(uses_of(t));
        }
        _ => panic!("target outside the oracle subset"),
    }
}

struct Builder<'a> {
    lines: &'a Lines,
    events: Vec<Event>,
}

impl Builder<'_> {
    fn event(&mut self, at: usize, defs: Vec<(String, bool)>, uses: BTreeSet<String>) -> usize {
        self.events.push(Event { pos: self.lines.pos(at), defs, uses });
        self.events.len() - 1
    }

    fn block(&mut self, stmts: &[Stmt]) -> Vec<Block> {
        stmts.iter().map(|s| self.stmt(s)).collect()
    }

    fn stmt(&mut self, s: &Stmt) -> Block {
        let at = s.range().start().to_usize();
        match s {
            Stmt::Assign(a) => {
                let mut defs = Vec::new();
                let mut uses = uses_of(&a.value);
                for t in &a.targets {
                    bind(t, &mut defs, &mut uses);
                }
                Block::Simple(self.event(at, defs, uses))
            }
            Stmt::AugAssign(a) => {
                let mut defs = Vec::new();
                let mut uses = uses_of(&a.value);
                bind(&a.target, &mut defs, &mut uses);
                uses.extend(uses_of(&a.target));
                Block::Simple(self.event(at, defs, uses))
            }
            Stmt::Expr(e) => Block::Simple(self.event(at, Vec::new(), uses_of(&e.value))),
            Stmt::Pass(_) => Block::Simple(self.event(at, Vec::new(), BTreeSet::new())),
            Stmt::Return(r) => {
                let uses = r.value.as_deref().map(uses_of).unwrap_or_default();
                Block::Return(self.event(at, Vec::new(), uses))
            }
            Stmt::If(i) => {
                let test = self.event(i.test.range().start().to_usize(), Vec::new(), uses_of(&i.test));
                Block::If { test, body: self.block(&i.body), orelse: self.block(&i.orelse) }
            }
            Stmt::While(w) => {
                assert!(w.orelse.is_empty(), "while-else outside the oracle subset");
                let header = self.event(w.test.range().start().to_usize(), Vec::new(), uses_of(&w.test));
                Block::Loop { header, body: self.block(&w.body) }
            }
            Stmt::For(f) => {
                assert!(f.orelse.is_empty(), "for-else outside the oracle subset");
                let mut defs = Vec::new();
                let mut uses = uses_of(&f.iter);
                bind(&f.target, &mut defs, &mut uses);
                let header = self.event(f.iter.range().start().to_usize(), defs, uses);
                Block::Loop { header, body: self.block(&f.body) }
            }
            other => panic!("statement outside the oracle subset: {other:?}"),
        }
    }
}

type Trace = (Vec<usize>, bool);

fn run_seq(blocks: &[Block], start: Vec<Trace>) -> Vec<Trace> {
    let mut states = start;
    for b in blocks {
        let mut next = Vec::new();
        for st in states {
            if st.1 {
                next.push(st);
            } else {
                next.extend(run_block(b, st));
            }
        }
        states = next;
    }
    states
}

fn run_block(b: &Block, (mut trace, _): Trace) -> Vec<Trace> {
    match b {
        Block::Simple(e) => {
            trace.push(*e);
            vec![(trace, false)]
        }
        Block::Return(e) => {
            trace.push(*e);
            vec![(trace, true)]
        }
        Block::If { test, body, orelse } => {
            trace.push(*test);
            let mut out = run_seq(body, vec![(trace.clone(), false)]);
            out.extend(run_seq(orelse, vec![(trace, false)]));
            out
        }
        Block::Loop { header, body } => {
            let mut out = Vec::new();
            trace.push(*header);
            let mut live = vec![(trace, false)];
            for _ in 0..=ITERATIONS {
                // leave the loop here
                out.extend(live.iter().cloned());
                let mut next = Vec::new();
                for st in run_seq(body, live) {
                    if st.1 {
                        out.push(st);
                    } else {
                        let (mut t, _) = st;
                        t.push(*header);
                        next.push((t, false));
                    }
                }
                live = next;
            }
            out
        }
    }
}

/// Builds the oracle for one top-level function of `source`.
pub fn function(source: &str, name: &str) -> OracleFunction {
    let suite = ast::Suite::parse(source, "<oracle>").expect("oracle fixture parses");
    let def = suite
        .iter()
        .find_map(|s| match s {
            Stmt::FunctionDef(f) if f.name.as_str() == name => Some(f),
            _ => None,
        })
        .expect("function exists");
    let lines = Lines::new(source);
    let mut b = Builder { lines: &lines, events: Vec::new() };
    let blocks = b.block(&def.body);
    let events = b.events;

    let params: BTreeSet<String> = def
        .args
        .posonlyargs
        .iter()
        .chain(def.args.args.iter())
        .chain(def.args.kwonlyargs.iter())
        .map(|a| a.def.arg.to_string())
        .collect();
    let bound: BTreeSet<&str> = events.iter().flat_map(|e| e.defs.iter().map(|d| d.0.as_str())).collect();
    let mut entry_defs = params;
    for e in &events {
        for u in &e.uses {
            if !bound.contains(u.as_str()) {
                entry_defs.insert(u.clone());
            }
        }
    }
    let universe: BTreeSet<String> = entry_defs.iter().cloned().chain(bound.iter().map(|s| s.to_string())).collect();

    let traces = run_seq(&blocks, vec![(Vec::new(), false)]);
    let mut reach: BTreeMap<(usize, String), BTreeSet<usize>> = BTreeMap::new();
    for (trace, _) in &traces {
        for i in 0..trace.len() {
            for var in &universe {
                let mut found = BTreeSet::new();
                let mut killed = false;
                for j in (0..i).rev() {
                    let e = &events[trace[j]];
                    let mut strong = false;
                    for (n, s) in &e.defs {
                        if n == var {
                            found.insert(trace[j]);
                            strong |= *s;
                        }
                    }
                    if strong {
                        killed = true;
                        break;
                    }
                }
                if !killed && entry_defs.contains(var) {
                    found.insert(ENTRY);
                }
                reach.entry((trace[i], var.clone())).or_default().extend(found);
            }
        }
    }
    let mut du: BTreeMap<(usize, String), BTreeSet<usize>> = BTreeMap::new();
    for (u, e) in events.iter().enumerate() {
        for var in &e.uses {
            for &d in reach.get(&(u, var.clone())).into_iter().flatten() {
                du.entry((d, var.clone())).or_default().insert(u);
            }
        }
    }
    OracleFunction { name: name.to_string(), statement_count: events.len(), events, entry_defs, du, reach }
}

impl OracleFunction {
    /// Forward closure from a seed: the seed event plus every event reached
    /// over def-use pairs whose defined value passes `stringy`.
    pub fn closure(&self, seed: usize, var: &str, stringy: &dyn Fn(usize, &str) -> bool) -> BTreeSet<usize> {
        let defs_of = |e: usize| -> Vec<String> {
            let names: Vec<String> = if e == ENTRY {
                self.entry_defs.iter().cloned().collect()
            } else {
                self.events[e].defs.iter().map(|d| d.0.clone()).collect()
            };
            names.into_iter().filter(|n| stringy(e, n)).collect()
        };
        let mut frontier: BTreeSet<(usize, String)> = BTreeSet::new();
        if defs_of(seed).iter().any(|n| n == var) {
            frontier.insert((seed, var.to_string()));
        } else {
            for &d in self.reach.get(&(seed, var.to_string())).into_iter().flatten() {
                frontier.insert((d, var.to_string()));
            }
        }
        frontier.extend(defs_of(seed).into_iter().map(|n| (seed, n)));

        let mut members = BTreeSet::from([seed]);
        let mut seen: BTreeSet<(usize, String)> = BTreeSet::new();
        while let Some(pair) = frontier.pop_first() {
            if !seen.insert(pair.clone()) {
                continue;
            }
            for &u in self.du.get(&pair).into_iter().flatten() {
                if members.insert(u) {
                    frontier.extend(defs_of(u).into_iter().map(|n| (u, n)));
                }
            }
        }
        members
    }
}
