use std::collections::BTreeSet;

use super::filter::{constraint_ops, Taint};
use super::{FunctionAnalysis, ParserSlice};
use crate::graph::{DefSite, NodeId, ENTRY};
use crate::syntax::NodeKind;
use crate::typing::{KnownApiTable, StringSeed};

fn stringy_defs_of(a: &FunctionAnalysis, node: NodeId) -> impl Iterator<Item = &str> + '_ {
    let cfg = &a.pdg.cfg;
    cfg.nodes[node]
        .defs
        .iter()
        .enumerate()
        .filter(move |(index, _)| a.types.def_verdict(cfg, DefSite { node, index: *index }).is_stringy())
        .map(|(_, d)| d.name.as_str())
}

/// Worklist closure over data edges carrying string-typed definitions.
pub fn forward_slice(a: &FunctionAnalysis, seed: &StringSeed, api: &KnownApiTable) -> ParserSlice {
    let pdg = &a.pdg;
    let s0 = seed.node;
    let mut members: BTreeSet<NodeId> = BTreeSet::from([s0]);
    let mut expanded: BTreeSet<(NodeId, String)> = BTreeSet::new();
    let mut work: Vec<(NodeId, String)> = Vec::new();

    let var = seed.variable_name.as_str();
    if stringy_defs_of(a, s0).any(|n| n == var) {
        work.push((s0, var.to_string()));
    } else {
        // the seed is a read: follow the definitions it reads
        for site in pdg.reaching_defs_of(s0, var) {
            work.push((site.node, var.to_string()));
        }
    }
    for name in stringy_defs_of(a, s0) {
        work.push((s0, name.to_string()));
    }

    while let Some((from, var)) = work.pop() {
        if !expanded.insert((from, var.clone())) {
            continue;
        }
        for to in pdg.data_successors(from, &var) {
            if to == ENTRY || !members.insert(to) {
                continue;
            }
            for name in stringy_defs_of(a, to) {
                work.push((to, name.to_string()));
            }
        }
    }
    members.remove(&ENTRY);

    let mut statements: Vec<NodeId> = members.into_iter().collect();
    statements.sort_by_key(|&n| (pdg.cfg.nodes[n].span.start(), n));
    let line_span: BTreeSet<u32> = statements
        .iter()
        .flat_map(|&n| {
            let s = pdg.cfg.nodes[n].span;
            s.start_line..=s.end_line
        })
        .collect();

    let mut slice_vars = BTreeSet::from([seed.variable_name.clone()]);
    for &n in &statements {
        slice_vars.extend(stringy_defs_of(a, n).map(str::to_string));
    }
    let taint = Taint::new(slice_vars.clone());
    let ops = constraint_ops(a, &statements, &taint, api);

    let mut attached_raises: Vec<NodeId> = statements
        .iter()
        .filter(|&&n| pdg.cfg.nodes[n].kind.is_predicate())
        .flat_map(|&p| pdg.control_dependents(p))
        .filter(|&d| pdg.cfg.nodes[d].syntax.kind == NodeKind::Raise && !statements.contains(&d))
        .collect();
    attached_raises.sort_by_key(|&n| (pdg.cfg.nodes[n].span.start(), n));
    attached_raises.dedup();

    ParserSlice {
        slice_id: a.slice_id(seed),
        seed: seed.clone(),
        statements,
        line_span,
        function: a.unit.qualified_name.clone(),
        module_path: a.unit.module_path.clone(),
        slice_vars,
        is_parser: !ops.is_empty(),
        constraint_ops: ops,
        attached_raises,
    }
}

pub fn is_parser(slice: &ParserSlice) -> bool {
    !slice.constraint_ops.is_empty()
}

/// Every slice in seed order, discarded ones included. A seed whose first
/// occurrence already belongs to an earlier slice starts no slice.
pub fn collect_slices(a: &FunctionAnalysis, api: &KnownApiTable) -> Vec<ParserSlice> {
    let mut out: Vec<ParserSlice> = Vec::new();
    for seed in a.seeds() {
        if out.iter().any(|s| s.contains(seed.node)) {
            log::trace!("{}: seed `{}` already covered", a.unit.qualified_name, seed.variable_name);
            continue;
        }
        out.push(forward_slice(a, seed, api));
    }
    out
}

/// Slices that impose at least one constraint on their input.
pub fn collect_parsers(a: &FunctionAnalysis, api: &KnownApiTable) -> Vec<ParserSlice> {
    collect_slices(a, api).into_iter().filter(is_parser).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::ParsedModule;
    use crate::typing::ImportMap;

    fn analyze(src: &str, name: &str) -> FunctionAnalysis {
        let api = KnownApiTable::shipped();
        let m = ParsedModule::parse("m.py", src.to_string()).unwrap();
        let imports = ImportMap::from_module(&m.root);
        let unit = m.functions().into_iter().find(|u| u.name == name).unwrap();
        FunctionAnalysis::new(unit, &imports, &api)
    }

    fn slice_lines(src: &str, name: &str) -> Vec<(String, Vec<u32>, bool)> {
        let api = KnownApiTable::shipped();
        let a = analyze(src, name);
        collect_slices(&a, &api)
            .into_iter()
            .map(|s| (s.seed.variable_name.clone(), s.line_span.iter().copied().collect(), s.is_parser))
            .collect()
    }

    #[test]
    fn parse_version_is_one_parser() {
        let src = "def parse_version(s):\n    return map(int, s.split('.'))\n";
        assert_eq!(slice_lines(src, "parse_version"), [("s".to_string(), vec![2], true)]);
    }

    #[test]
    fn unused_seed_is_its_own_statement() {
        let src = "def f():\n    s = input()\n    return 1\n";
        assert_eq!(slice_lines(src, "f"), [("s".to_string(), vec![2], false)]);
    }

    #[test]
    fn appending_only_is_discarded() {
        let src = "def f(s: str):\n    s2 = s + 'x'\n    s3 = s2.upper()\n    return s3\n";
        let api = KnownApiTable::shipped();
        assert!(collect_parsers(&analyze(src, "f"), &api).is_empty());
        assert_eq!(slice_lines(src, "f")[0].1, vec![2, 3, 4]);
    }

    #[test]
    fn numeric_terminal_is_not_expanded() {
        let src = "def f(s):\n    parts = s.split(',')\n    n = int(parts[0])\n    m = n + 1\n    return m\n";
        assert_eq!(slice_lines(src, "f"), [("s".to_string(), vec![2, 3], true)]);
    }

    #[test]
    fn two_independent_params() {
        let src = "def f(a, b):\n    x = a.split(',')\n    y = b.split(':')\n    return x[0], y[0]\n";
        let s = slice_lines(src, "f");
        assert_eq!(s.len(), 2);
        assert!(s.iter().all(|x| x.2));
    }

    #[test]
    fn startswith_in_comprehension_filter() {
        let src = "def f(flags):\n    opts = [x for x in flags.split(' ') if x.startswith('--j')]\n    return opts\n";
        let api = KnownApiTable::shipped();
        let p = collect_parsers(&analyze(src, "f"), &api);
        assert_eq!(p.len(), 1);
        let names: Vec<_> = p[0].constraint_ops.iter().map(|o| o.name.as_str()).collect();
        assert_eq!(names, ["str.startswith"]);
    }

    #[test]
    fn startswith_outside_a_branch_is_not_a_constraint() {
        let src = "def f(s: str):\n    ok = s.startswith('a')\n    return ok\n";
        let api = KnownApiTable::shipped();
        assert!(collect_parsers(&analyze(src, "f"), &api).is_empty());
    }

    #[test]
    fn raise_under_slice_predicate_is_attached() {
        let src = "def f(s):\n    if not s.isdigit():\n        raise ValueError(s)\n    return int(s)\n";
        let api = KnownApiTable::shipped();
        let p = collect_parsers(&analyze(src, "f"), &api);
        assert_eq!(p.len(), 1);
        assert_eq!(p[0].attached_raises.len(), 0, "raise uses s, so it is a member");
        assert_eq!(p[0].line_span.iter().copied().collect::<Vec<_>>(), [2, 3, 4]);
        let src = "def f(s):\n    if not s.isdigit():\n        raise ValueError('bad')\n    return int(s)\n";
        let p = collect_parsers(&analyze(src, "f"), &api);
        assert_eq!(p[0].attached_raises.len(), 1);
    }

    #[test]
    fn seed_inside_earlier_slice_is_skipped() {
        let src = "def f(s):\n    t = s.strip()\n    u = t.split()\n    return u[0]\n";
        let s = slice_lines(src, "f");
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].1, vec![2, 3, 4]);
    }
}
