//! End-to-end acceptance criteria. Each criterion prints one PASS/FAIL line;
//! the test fails if any criterion fails.

#[path = "acceptance/ari.rs"]
mod ari;
#[path = "acceptance/oracle.rs"]
mod oracle;
#[path = "acceptance/support.rs"]
mod support;

use std::collections::{BTreeMap, BTreeSet};
use std::io::Write as _;
use std::path::Path;
use std::time::{Duration, Instant};

use adhocscan_core::analytics::{kmeans, standardize};
use adhocscan_core::corpus::locate_slice;
use adhocscan_core::graph::DefSite;
use adhocscan_core::metrics::{
    exception_profile, CaughtException, ExceptionScope, InputSource, LoopBound, LoopKind, RegexRole, SliceContext,
    Sugar,
};
use adhocscan_core::slicing::{collect_parsers, collect_slices, forward_slice};
use adhocscan_core::synth::{transformer_pipeline, write_corpus, CONSTRAINT_KINDS};
use adhocscan_core::{
    cluster, describe, run_scan, write_records, ClusterConfig, InputOrigin, KnownApiTable, MetricRecord, ParsedModule,
    ProjectGranularity, ScanConfig,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use support::{analyses, fixture, parsers};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

struct Harness {
    failures: Vec<String>,
}

impl Harness {
    fn run(&mut self, id: u32, name: &str, budget: Option<Duration>, f: impl FnOnce() -> Outcome) {
        let start = Instant::now();
        let outcome = f();
        let elapsed = start.elapsed();
        let (ok, detail) = match outcome {
            Ok(d) => match budget {
                Some(b) if elapsed >= b => (false, format!("{d}; took {elapsed:.2?}, budget {b:?}")),
                _ => (true, d),
            },
            Err(e) => (false, e),
        };
        let budget_text = budget.map(|b| format!(" < {b:?}")).unwrap_or_default();
        let line = format!(
            "[{}] criterion {id}: {name} ({elapsed:.2?}{budget_text}) {detail}\n",
            if ok { "PASS" } else { "FAIL" }
        );
        // bypass output capture so the summary always shows
        let _ = std::io::stdout().write_all(line.as_bytes());
        if !ok {
            self.failures.push(format!("criterion {id}: {detail}"));
        }
    }
}

fn scan(
    roots: Vec<std::path::PathBuf>,
    out: &Path,
    granularity: ProjectGranularity,
    jobs: usize,
) -> Result<Vec<(adhocscan_core::ProjectStats, Vec<MetricRecord>)>, String> {
    let mut config = ScanConfig::new(roots, out.to_path_buf());
    config.project_granularity = granularity;
    config.jobs = jobs;
    let projects = run_scan(&config).map_err(|e| e.to_string())?;
    write_records(&projects, &config).map_err(|e| e.to_string())?;
    Ok(projects)
}

fn names(r: &MetricRecord) -> BTreeSet<&str> {
    r.call_names().collect()
}

fn fig1() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let projects =
        scan(vec![fixture("fig1")], &dir.path().join("fig1.jsonl"), ProjectGranularity::RootIsOneProject, 1)?;
    let records: Vec<&MetricRecord> = projects.iter().flat_map(|(_, r)| r).collect();
    ensure(records.len() == 3, || format!("expected 3 parsers, got {}", records.len()))?;
    let by_file = |f: &str| -> Result<&MetricRecord, String> {
        let hits: Vec<&&MetricRecord> = records.iter().filter(|r| r.sort_key().0.ends_with(f)).collect();
        ensure(hits.len() == 1, || format!("{f}: {} parsers", hits.len()))?;
        Ok(hits[0])
    };

    let pv = by_file("setup.py")?;
    ensure(names(pv) == BTreeSet::from(["split", "map", "int"]), || format!("parse_version calls {:?}", names(pv)))?;
    ensure(pv.input_source == InputSource::EfArgument && pv.input_origin == InputOrigin::CallerProvided, || {
        format!("parse_version input {}/{}", pv.input_source, pv.input_origin)
    })?;
    ensure(pv.cyclo == 1, || format!("parse_version cyclo {}", pv.cyclo))?;
    ensure(
        !pv.loops.is_empty()
            && pv.loops.iter().all(|l| l.kind == LoopKind::Functional && l.bound == LoopBound::LinearOnInput),
        || format!("parse_version loops {:?}", pv.loops),
    )?;
    ensure(pv.uncaught_exceptions == ["ValueError"], || {
        format!("parse_version uncaught {:?}", pv.uncaught_exceptions)
    })?;

    let js = by_file("jobserver-exec.py")?;
    ensure(
        js.input_source == InputSource::EnvironmentSubscript && js.input_origin == InputOrigin::EnvironmentVariable,
        || format!("jobserver input {}/{}", js.input_source, js.input_origin),
    )?;
    let want = [Sugar::ListComprehension, Sugar::Subscript, Sugar::SliceNotation, Sugar::TupleAssignment];
    ensure(want.iter().all(|s| js.sugar.contains(s)), || format!("jobserver sugar {:?}", js.sugar))?;
    ensure(js.shotgun, || "jobserver not shotgun".into())?;
    let api = KnownApiTable::shipped();
    let src = std::fs::read_to_string(fixture("fig1/jobserver-exec.py")).map_err(|e| e.to_string())?;
    let (_, all) = analyses(&src, &api);
    let main = all.iter().find(|a| a.unit.name == "__main__").ok_or("no module unit")?;
    let slices = collect_parsers(main, &api);
    ensure(slices.len() == 1, || format!("jobserver slices {}", slices.len()))?;
    let profile = exception_profile(&SliceContext::new(main, &slices[0], &api));
    let tuple_at = |line: u32| {
        profile.potential.iter().any(|p| p.name == "ValueError" && p.site.start_line == line && p.site.start_col == 4)
    };
    ensure(tuple_at(37), || format!("no tuple ValueError on the final split: {:?}", profile.potential))?;
    ensure(!profile.potential.iter().any(|p| p.site.start_line == 31), || "partition flagged".into())?;

    let gd = by_file("methods.py")?;
    ensure(gd.input_source == InputSource::FunctionCall && gd.input_origin == InputOrigin::ProcessOutput, || {
        format!("godot input {}/{}", gd.input_source, gd.input_origin)
    })?;
    ensure(
        gd.regexes.len() == 1
            && gd.regexes[0].role == RegexRole::FirstPass
            && gd.regexes[0].pattern == r"[0-9]+\.[0-9.]+",
        || format!("godot regexes {:?}", gd.regexes),
    )?;
    ensure(gd.sugar.contains(&Sugar::MethodChaining), || format!("godot sugar {:?}", gd.sugar))?;
    Ok("3 parsers with the expected profiles".into())
}

fn slicing_oracle() -> Outcome {
    let api = KnownApiTable::shipped();
    let src = std::fs::read_to_string(fixture("slicing/oracle.py")).map_err(|e| e.to_string())?;
    let (_, all) = analyses(&src, &api);
    let mut functions = 0;
    let mut seeds = 0;
    for a in all.iter().filter(|a| a.unit.name != "__main__") {
        let o = oracle::function(&src, &a.unit.name);
        ensure(o.statement_count <= 20, || format!("{}: {} statements", o.name, o.statement_count))?;
        let cfg = &a.pdg.cfg;
        // map oracle events onto CFG nodes by source position
        let mut to_node = BTreeMap::new();
        for (i, e) in o.events.iter().enumerate() {
            let n = cfg.node_at(e.pos.0, e.pos.1).ok_or_else(|| format!("{}: no node at {:?}", o.name, e.pos))?;
            to_node.insert(i, n);
        }
        to_node.insert(oracle::ENTRY, cfg.entry());
        let mapped: BTreeSet<usize> = to_node.values().copied().collect();
        let statements: BTreeSet<usize> = cfg.statements().map(|n| n.id).collect();
        ensure(mapped.len() == to_node.len() && statements.is_subset(&mapped), || {
            format!(
                "{}: statement model differs ({} oracle events, {} nodes)",
                o.name,
                o.events.len(),
                statements.len()
            )
        })?;
        let from_node: BTreeMap<usize, usize> = to_node.iter().map(|(&e, &n)| (n, e)).collect();
        let stringy = |e: usize, name: &str| {
            let node = to_node[&e];
            cfg.nodes[node]
                .defs
                .iter()
                .enumerate()
                .any(|(index, d)| d.name == name && a.types.def_verdict(cfg, DefSite { node, index }).is_stringy())
        };
        for seed in a.seeds() {
            let got: BTreeSet<usize> = forward_slice(a, seed, &api).statements.into_iter().collect();
            let start = *from_node.get(&seed.node).ok_or("seed outside the statement model")?;
            let want: BTreeSet<usize> =
                o.closure(start, &seed.variable_name, &stringy).iter().map(|e| to_node[e]).collect();
            ensure(got == want, || {
                let lines = |s: &BTreeSet<usize>| s.iter().map(|&n| cfg.nodes[n].span.start_line).collect::<Vec<_>>();
                format!("{} seed {}: slice {:?} oracle {:?}", o.name, seed.variable_name, lines(&got), lines(&want))
            })?;
            seeds += 1;
        }
        functions += 1;
    }
    ensure(functions >= 25, || format!("only {functions} functions"))?;
    Ok(format!("{functions} functions, {seeds} seeds, 100% agreement"))
}

fn discard_soundness() -> Outcome {
    let api = KnownApiTable::shipped();
    let pipelines = 200;
    for seed in 0..pipelines {
        let src = transformer_pipeline(seed, None);
        let (_, all) = analyses(&src, &api);
        for a in &all {
            let slices = collect_slices(a, &api);
            for s in &slices {
                ensure(s.constraint_ops.is_empty() && !s.is_parser, || {
                    format!("seed {seed}: discarded slice with ops\n{src}")
                })?;
            }
            ensure(collect_parsers(a, &api).is_empty(), || format!("seed {seed}: transformer kept\n{src}"))?;
        }
        for k in 0..CONSTRAINT_KINDS {
            let src = transformer_pipeline(seed, Some(k));
            let (_, slices, _) = parsers(&src, "pipeline", &api);
            ensure(slices.len() == 1, || format!("seed {seed} kind {k}: {} parser slices\n{src}", slices.len()))?;
        }
    }
    Ok(format!("{pipelines} transformers discarded, {} injections detected", pipelines as usize * CONSTRAINT_KINDS))
}

fn cyclo() -> Outcome {
    let api = KnownApiTable::shipped();
    let src = std::fs::read_to_string(fixture("cyclo/cyclo.py")).map_err(|e| e.to_string())?;
    // hand-counted decision points of each function's single slice
    let expected = [
        ("straight", 1),
        ("one_if", 2),
        ("if_elif_else", 4),
        ("bool_ops", 4),
        ("comprehension_filter", 4),
        ("handlers", 3),
        ("loop_with_if", 3),
        ("while_and_ternary", 4),
        ("nested", 5),
        ("mixed", 5),
    ];
    for (f, want) in expected {
        let (_, _, records) = parsers(&src, f, &api);
        ensure(records.len() == 1, || format!("{f}: {} parsers", records.len()))?;
        ensure(records[0].cyclo == want, || format!("{f}: cyclo {} expected {want}", records[0].cyclo))?;
    }
    Ok(format!("{} fixtures exact", expected.len()))
}

struct RiskyOp {
    class: &'static str,
    lines: &'static [&'static str],
    name: &'static str,
}

const RISKY: &[RiskyOp] = &[
    RiskyOp { class: "string subscript", lines: &["x = t[3]"], name: "IndexError" },
    RiskyOp { class: "str.index", lines: &["x = t.index(':')"], name: "ValueError" },
    RiskyOp { class: "int()", lines: &["x = int(t)"], name: "ValueError" },
    RiskyOp { class: "split into tuple", lines: &["a, b = t.split(',')"], name: "ValueError" },
    RiskyOp {
        class: "mapping subscript",
        lines: &["x = table[t]", "if t == 'q':", "    t = t.upper()"],
        name: "KeyError",
    },
    RiskyOp {
        class: "unchecked match.group",
        lines: &["m = re.match('[a-z]+', t)", "x = m.group(0)"],
        name: "AttributeError",
    },
];

fn indent(lines: &[&str], depth: usize) -> String {
    lines.iter().map(|l| format!("{}{l}\n", "    ".repeat(depth))).collect()
}

fn exception_variants(op: &RiskyOp) -> String {
    let body1 = indent(op.lines, 1);
    let body2 = indent(op.lines, 2);
    let n = op.name;
    format!(
        "import re\n\n\n\
         def bare(s):\n    table = {{'a': 'b'}}\n    t = s.strip()\n{body1}    return t\n\n\n\
         def around(s):\n    table = {{'a': 'b'}}\n    try:\n        t = s.strip()\n{body2}    except {n}:\n        return None\n    return t\n\n\n\
         def inside(s):\n    table = {{'a': 'b'}}\n    t = s.strip()\n    try:\n{body2}    except {n}:\n        return None\n    return t\n\n\n\
         def raising(s):\n    table = {{'a': 'b'}}\n    t = s.strip()\n    if not t:\n        raise {n}('empty')\n{body1}    return t\n"
    )
}

fn exceptions() -> Outcome {
    let api = KnownApiTable::shipped();
    for op in RISKY {
        let src = exception_variants(op);
        let one = |f: &str| -> Result<MetricRecord, String> {
            let (_, _, mut r) = parsers(&src, f, &api);
            ensure(r.len() == 1, || format!("{} {f}: {} parsers\n{src}", op.class, r.len()))?;
            Ok(r.remove(0))
        };
        let bare = one("bare")?;
        ensure(bare.uncaught_exceptions == [op.name], || {
            format!("{}: uncaught {:?}", op.class, bare.uncaught_exceptions)
        })?;
        for (f, scope) in [("around", ExceptionScope::EnclosingFunction), ("inside", ExceptionScope::Slice)] {
            let r = one(f)?;
            let want = CaughtException { name: op.name.to_string(), scope };
            ensure(r.caught_exceptions == [want] && r.uncaught_exceptions.is_empty(), || {
                format!("{} {f}: caught {:?} uncaught {:?}", op.class, r.caught_exceptions, r.uncaught_exceptions)
            })?;
        }
        let r = one("raising")?;
        ensure(r.raised_exceptions == [op.name] && r.uncaught_exceptions.is_empty(), || {
            format!("{} raising: raised {:?} uncaught {:?}", op.class, r.raised_exceptions, r.uncaught_exceptions)
        })?;
    }
    Ok(format!("{} risky-op classes, bare/handled/raised", RISKY.len()))
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let corpus = dir.path().join("corpus");
    write_corpus(&corpus, 200, 100, 2024).map_err(|e| e.to_string())?;
    let one = dir.path().join("one.jsonl");
    let eight = dir.path().join("eight.jsonl");
    let projects = scan(vec![corpus.clone()], &one, ProjectGranularity::RootIsOneProject, 1)?;
    scan(vec![corpus], &eight, ProjectGranularity::RootIsOneProject, 8)?;
    let a = std::fs::read(&one).map_err(|e| e.to_string())?;
    let b = std::fs::read(&eight).map_err(|e| e.to_string())?;
    let records: usize = projects.iter().map(|(_, r)| r.len()).sum();
    ensure(records > 0, || "no parsers found".into())?;
    ensure(a == b, || "JSONL differs between 1 and 8 workers".into())?;
    Ok(format!("{records} records, {} bytes identical", a.len()))
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9
}

fn mini() -> Outcome {
    let root = fixture("mini");
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(root.join("manifest.json")).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let projects =
        scan(vec![root.clone()], &dir.path().join("mini.jsonl"), ProjectGranularity::EachChildDirIsAProject, 2)?;
    let api = KnownApiTable::shipped();

    let mut functions = 0;
    for (stats, _) in &projects {
        let want = &manifest["projects"][&stats.project_name];
        ensure(
            want["project_loc"] == stats.project_loc
                && want["parser_count"] == stats.parser_count
                && want["parser_loc_total"] == stats.parser_loc_total
                && want["has_parser"] == stats.has_parser,
            || format!("project {} stats {:?}", stats.project_name, stats),
        )?;
        for entry in std::fs::read_dir(root.join(&stats.project_name)).map_err(|e| e.to_string())? {
            let path = entry.map_err(|e| e.to_string())?.path();
            let m = ParsedModule::parse("m.py", std::fs::read_to_string(&path).map_err(|e| e.to_string())?)
                .map_err(|e| e.to_string())?;
            functions += m.functions().iter().filter(|u| u.name != "__main__").count();
        }
    }
    ensure(manifest["function_count"] == functions, || format!("{functions} functions"))?;

    let expected: BTreeMap<String, Vec<u32>> =
        serde_json::from_value(manifest["parsers"].clone()).map_err(|e| e.to_string())?;
    let mut found = BTreeMap::new();
    for (stats, records) in &projects {
        for r in records {
            let (path, ..) = r.sort_key();
            let rel = path.trim_start_matches(&format!("{}:", stats.project_name)).to_string();
            let source = std::fs::read_to_string(Path::new(&stats.root).join(&rel)).map_err(|e| e.to_string())?;
            let loc = locate_slice(source, &rel, r, &api).ok_or("slice not found again")?;
            found.insert(r.ef_name.clone(), loc.slice_lines.into_iter().collect::<Vec<u32>>());
        }
    }
    ensure(found == expected, || format!("parsers {found:?}"))?;
    let non_parsers: Vec<String> =
        serde_json::from_value(manifest["non_parsers"].clone()).map_err(|e| e.to_string())?;
    ensure(non_parsers.iter().all(|n| !found.contains_key(n)), || "a non-parser was kept".into())?;

    let records: Vec<MetricRecord> = projects.iter().flat_map(|(_, r)| r.iter().cloned()).collect();
    let stats: Vec<_> = projects.iter().map(|(s, _)| s.clone()).collect();
    let report = describe(&records, &stats);
    let want = &manifest["report"];
    let f = |k: &str| want[k].as_f64().unwrap_or(f64::NAN);
    ensure(
        want["record_count"] == report.record_count
            && want["project_count"] == report.project_count
            && want["projects_with_parser"] == report.projects_with_parser
            && want["parser_loc_total"] == report.parser_loc_total
            && want["project_loc_total"] == report.project_loc_total,
        || {
            format!(
                "report counts {} {} {} {} {}",
                report.record_count,
                report.project_count,
                report.projects_with_parser,
                report.parser_loc_total,
                report.project_loc_total
            )
        },
    )?;
    ensure(close(report.project_prevalence, f("project_prevalence")), || {
        format!("prevalence {}", report.project_prevalence)
    })?;
    ensure(report.parser_loc_ratio.is_some_and(|r| close(r, f("parser_loc_ratio"))), || {
        format!("loc ratio {:?}", report.parser_loc_ratio)
    })?;
    let table: BTreeMap<String, u64> = report.functions.iter().map(|n| (n.name.clone(), n.count)).collect();
    let want_table: BTreeMap<String, u64> =
        serde_json::from_value(want["functions"].clone()).map_err(|e| e.to_string())?;
    ensure(table == want_table, || format!("function table {table:?}"))?;
    let ex = &report.exceptions;
    ensure(
        want["split_call_count"] == ex.split_call_count
            && want["split_tuple_count"] == ex.split_tuple_count
            && ex.split_tuple_rate.is_some_and(|r| close(r, f("split_tuple_rate"))),
        || format!("split {} {} {:?}", ex.split_call_count, ex.split_tuple_count, ex.split_tuple_rate),
    )?;
    Ok(format!("{} records over {} projects match the manifest", report.record_count, report.project_count))
}

fn blobs(seed: u64, per: usize) -> (Vec<Vec<f64>>, Vec<usize>) {
    let centers = [[0.0, 0.0, 0.0, 0.0], [10.0, 10.0, 0.0, 5.0], [-10.0, 8.0, 6.0, -6.0]];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::new();
    let mut truth = Vec::new();
    for i in 0..per * centers.len() {
        let c = i % centers.len();
        rows.push(centers[c].iter().map(|x| x + rng.gen_range(-1.5..1.5)).collect());
        truth.push(c);
    }
    (rows, truth)
}

fn non_increasing(trace: &[f64]) -> bool {
    trace.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-12) + 1e-12)
}

fn clustering() -> Outcome {
    let (rows, truth) = blobs(5, 60);
    // (a) determinism, on raw rows and on scanned records
    let first = kmeans(&rows, 3, 17).map_err(|e| e.to_string())?;
    let again = kmeans(&rows, 3, 17).map_err(|e| e.to_string())?;
    ensure(first.labels == again.labels && first.inertia == again.inertia, || "same seed, different result".into())?;
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let corpus = dir.path().join("c");
    write_corpus(&corpus, 30, 100, 99).map_err(|e| e.to_string())?;
    let records: Vec<MetricRecord> =
        scan(vec![corpus], &dir.path().join("c.jsonl"), ProjectGranularity::RootIsOneProject, 1)?
            .into_iter()
            .flat_map(|(_, r)| r)
            .collect();
    let cfg = ClusterConfig { k: 4, seed: 3, vocabulary: 32, exemplars: 2 };
    let c1 = cluster(&records, cfg).map_err(|e| e.to_string())?;
    let c2 = cluster(&records, cfg).map_err(|e| e.to_string())?;
    ensure(c1.assignments == c2.assignments, || "record clustering not deterministic".into())?;

    // (b) recovery
    let ari = ari::adjusted_rand(&truth, &first.labels);
    let acc = ari::best_match_accuracy(&truth, &first.labels, 3);
    ensure(ari >= 0.99 && acc >= 0.99, || format!("ARI {ari:.4}, matched accuracy {acc:.4}"))?;

    // (c) traces
    for seed in 0..10 {
        let km = kmeans(&rows, 3, seed).map_err(|e| e.to_string())?;
        ensure(non_increasing(&km.trace), || format!("seed {seed} trace {:?}", km.trace))?;
    }
    ensure(non_increasing(&c1.inertia_trace), || format!("record trace {:?}", c1.inertia_trace))?;

    // (d) positive rescaling: uniform, and per column once standardized
    let scaled: Vec<Vec<f64>> = rows.iter().map(|r| r.iter().map(|x| x * 3.75).collect()).collect();
    ensure(kmeans(&scaled, 3, 17).map_err(|e| e.to_string())?.labels == first.labels, || {
        "uniform rescaling changed labels".into()
    })?;
    let factors = [0.5, 2.0, 40.0, 0.01];
    let standardized = |rows: &[Vec<f64>], f: &[f64]| -> Vec<Vec<f64>> {
        let mut cols: Vec<Vec<f64>> = (0..4).map(|j| rows.iter().map(|r| r[j] * f[j]).collect()).collect();
        for c in &mut cols {
            standardize(c);
        }
        (0..rows.len()).map(|i| cols.iter().map(|c| c[i]).collect()).collect()
    };
    let base = kmeans(&standardized(&rows, &[1.0; 4]), 3, 17).map_err(|e| e.to_string())?;
    let per_col = kmeans(&standardized(&rows, &factors), 3, 17).map_err(|e| e.to_string())?;
    ensure(base.labels == per_col.labels, || "per-column rescaling changed labels".into())?;
    Ok(format!("ARI {ari:.4}, accuracy {acc:.4}, {} records clustered", records.len()))
}

fn throughput() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let corpus = dir.path().join("big");
    write_corpus(&corpus, 1000, 100, 7).map_err(|e| e.to_string())?;
    let start = Instant::now();
    let projects = scan(vec![corpus], &dir.path().join("big.jsonl"), ProjectGranularity::RootIsOneProject, 1)?;
    let took = start.elapsed();
    let (stats, records) = &projects[0];
    ensure(stats.module_count == 1000 && stats.parse_failures == 0, || format!("{stats:?}"))?;
    Ok(format!("1000 files, {} LOC, {} parsers, scan {took:.2?}", stats.project_loc, records.len()))
}

#[test]
fn acceptance() {
    let mut h = Harness { failures: Vec::new() };
    h.run(1, "figure fixtures", Some(Duration::from_secs(1)), fig1);
    h.run(2, "slicing oracle equivalence", Some(Duration::from_secs(10)), slicing_oracle);
    h.run(3, "discard soundness", None, discard_soundness);
    h.run(4, "cyclomatic complexity", None, cyclo);
    h.run(5, "exception accounting", None, exceptions);
    h.run(6, "determinism under parallelism", None, determinism);
    h.run(7, "mini-corpus report", None, mini);
    h.run(8, "clustering", Some(Duration::from_secs(5)), clustering);
    h.run(9, "throughput", Some(Duration::from_secs(60)), throughput);
    assert!(h.failures.is_empty(), "failed: {:#?}", h.failures);
}
