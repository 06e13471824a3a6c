use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};

use rayon::prelude::*;

use super::{discover, CorpusError, ProjectGroup, ProjectStats, ScanConfig, SourceModule};
use crate::metrics::{build_record, MetricRecord, ModuleInfo, ProjectIndex, ProjectInfo, SliceContext};
use crate::slicing::{collect_parsers, FunctionAnalysis};
use crate::syntax::{module_dotted_name, FunctionUnit, LineRange, ParsedModule};
use crate::typing::{ImportMap, KnownApiTable};

struct Loaded {
    module: ParsedModule,
    imports: ImportMap,
    units: Vec<FunctionUnit>,
}

fn load(source: &SourceModule) -> Option<Loaded> {
    let bytes = match std::fs::read(&source.path) {
        Ok(b) => b,
        Err(e) => {
            log::warn!("unreadable {}: {e}", source.path.display());
            return None;
        }
    };
    let text = String::from_utf8_lossy(&bytes).into_owned();
    let module = match ParsedModule::parse(&source.relative_path, text) {
        Ok(m) => m,
        Err(e) => {
            log::warn!("parse failure {}:{}: {}", source.path.display(), e.line, e.message);
            return None;
        }
    };
    let imports = ImportMap::from_module(&module.root);
    let units = module.functions();
    Some(Loaded { module, imports, units })
}

/// Records of one file plus the parser-covered code lines.
fn analyze(loaded: Loaded, project: &ProjectInfo<'_>, api: &KnownApiTable) -> (Vec<MetricRecord>, BTreeSet<u32>) {
    let Loaded { module, imports, units } = loaded;
    let info = ModuleInfo { relative_path: &module.relative_path, code_lines: &module.code_lines };
    let mut records = Vec::new();
    let mut lines = BTreeSet::new();
    for unit in units {
        let analysis = FunctionAnalysis::new(unit, &imports, api).in_project(project.name);
        for slice in collect_parsers(&analysis, api) {
            lines.extend(slice.line_span.iter().copied().filter(|&l| module.code_lines.is_code(l)));
            records.push(build_record(&SliceContext::new(&analysis, &slice, api), &info, project));
        }
    }
    (records, lines)
}

/// Runs the full pipeline over every module of one project.
///
/// Parallelism is per file and uses the current rayon pool.
pub fn scan_project(
    project: &ProjectGroup,
    api: &KnownApiTable,
    _config: &ScanConfig,
) -> (ProjectStats, Vec<MetricRecord>) {
    let loaded: Vec<Option<Loaded>> = project.modules.par_iter().map(load).collect();
    let mut parse_failures = loaded.iter().filter(|l| l.is_none()).count() as u32;

    let mut index = ProjectIndex::default();
    let mut project_loc = 0;
    for l in loaded.iter().flatten() {
        index.add_module(&module_dotted_name(&l.module.relative_path));
        project_loc += l.module.module_loc();
        for u in &l.units {
            index.add_function(&u.name, &u.qualified_name);
        }
    }
    let info = ProjectInfo { name: &project.name, loc: project_loc, index: &index };

    let results: Vec<Option<(Vec<MetricRecord>, BTreeSet<u32>)>> = loaded
        .into_par_iter()
        .flatten()
        .map(|l| {
            let path = l.module.relative_path.clone();
            catch_unwind(AssertUnwindSafe(|| analyze(l, &info, api)))
                .map_err(|_| log::warn!("analysis failure {}/{path}", project.root.display()))
                .ok()
        })
        .collect();

    let mut records = Vec::new();
    let mut parser_loc_total = 0;
    for r in results {
        match r {
            Some((recs, lines)) => {
                parser_loc_total += lines.len() as u32;
                records.extend(recs);
            }
            None => parse_failures += 1,
        }
    }
    records.sort_by_cached_key(MetricRecord::sort_key);
    let parser_count = records.len() as u32;
    let stats = ProjectStats {
        project_name: project.name.clone(),
        root: project.root.display().to_string(),
        project_loc,
        module_count: project.modules.len() as u32,
        parse_failures,
        parser_count,
        parser_loc_total,
        has_parser: parser_count > 0,
    };
    (stats, records)
}

/// Lines of a recorded slice and of its enclosing function, recomputed from
/// the module source.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SliceLocation {
    pub function: LineRange,
    pub slice_lines: BTreeSet<u32>,
}

pub fn locate_slice(
    source: String,
    relative_path: &str,
    record: &MetricRecord,
    api: &KnownApiTable,
) -> Option<SliceLocation> {
    let module = ParsedModule::parse(relative_path, source).ok()?;
    let imports = ImportMap::from_module(&module.root);
    let unit = module.functions().into_iter().find(|u| u.qualified_name == record.ef_name)?;
    let function = LineRange::new(unit.span.start_line, unit.span.end_line);
    let analysis = FunctionAnalysis::new(unit, &imports, api).in_project(&record.project_name);
    let slice = collect_parsers(&analysis, api).into_iter().find(|s| s.slice_id == record.slice_id)?;
    Some(SliceLocation { function, slice_lines: slice.line_span })
}

/// The shipped table, extended from `config.table_extensions` when given.
pub fn load_api_table(config: &ScanConfig) -> Result<KnownApiTable, CorpusError> {
    let mut api = KnownApiTable::shipped();
    if let Some(path) = &config.table_extensions {
        api.extend_from_file(path)?;
    }
    Ok(api)
}

/// Discovers and scans every project with `config.jobs` workers.
pub fn run_scan(config: &ScanConfig) -> Result<Vec<(ProjectStats, Vec<MetricRecord>)>, CorpusError> {
    if config.jobs == 0 {
        return Err(CorpusError::NoWorkers);
    }
    let api = load_api_table(config)?;
    let groups = discover(config)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.jobs)
        .build()
        .map_err(|e| CorpusError::Pool(e.to_string()))?;
    Ok(pool.install(|| groups.iter().map(|g| scan_project(g, &api, config)).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::fs;
    use std::path::Path;

    fn project(files: &[(&str, &str)]) -> (tempfile::TempDir, ScanConfig) {
        let dir = tempfile::tempdir().unwrap();
        let root = dir.path().join("proj");
        for (rel, src) in files {
            let p = root.join(rel);
            fs::create_dir_all(p.parent().unwrap()).unwrap();
            fs::write(p, src).unwrap();
        }
        let cfg = ScanConfig::new(vec![root], dir.path().join("out.jsonl"));
        (dir, cfg)
    }

    fn scan(cfg: &ScanConfig) -> (ProjectStats, Vec<MetricRecord>) {
        run_scan(cfg).unwrap().remove(0)
    }

    #[test]
    fn parse_version_project() {
        let (_d, cfg) = project(&[("setup.py", "def parse_version(s):\n    return map(int, s.split('.'))\n")]);
        let (stats, records) = scan(&cfg);
        assert_eq!((stats.parser_count, stats.has_parser, stats.module_count), (1, true, 1));
        assert_eq!(stats.project_name, "proj");
        assert_eq!(stats.project_loc, 2);
        assert_eq!(stats.parser_loc_total, 1);
        assert_eq!(records[0].slice_id, "proj:setup.py:2:20:s");
        let src = std::fs::read_to_string(cfg.roots[0].join("setup.py")).unwrap();
        let loc = locate_slice(src, "setup.py", &records[0], &KnownApiTable::shipped()).unwrap();
        assert_eq!(loc.function, LineRange::new(1, 2));
        assert_eq!(loc.slice_lines, BTreeSet::from([2]));
    }

    #[test]
    fn numeric_project_has_no_parser() {
        let (_d, cfg) = project(&[("m.py", "def f(a, b):\n    return a * b + 1\n")]);
        let (stats, records) = scan(&cfg);
        assert!(records.is_empty());
        assert!(!stats.has_parser);
    }

    #[test]
    fn broken_file_is_isolated() {
        let good = "def f(s):\n    return s.split(',')[0]\n";
        let (_d, cfg) = project(&[("a.py", good), ("b.py", "def (:\n"), ("c.py", good)]);
        let (stats, records) = scan(&cfg);
        assert_eq!(stats.parse_failures, 1);
        assert_eq!(stats.module_count, 3);
        let paths: Vec<String> = records.iter().map(|r| r.module_name.clone()).collect();
        assert_eq!(paths, ["a", "c"]);
    }

    #[test]
    fn records_follow_path_then_position() {
        let src = "def g(t):\n    return int(t.strip())\ndef f(s):\n    return s.split(',')[0]\n";
        let (_d, cfg) = project(&[("z.py", src), ("a/b.py", src)]);
        let (_, records) = scan(&cfg);
        let keys: Vec<(String, u32)> = records
            .iter()
            .map(|r| {
                let (p, l, _, _) = r.sort_key();
                (p, l)
            })
            .collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
        assert_eq!(records.len(), 4);
    }

    #[test]
    fn worker_count_does_not_change_records() {
        let files: Vec<(String, String)> = (0..12)
            .map(|i| (format!("m{i}.py"), format!("def f{i}(s):\n    a, b = s.split(':')\n    return int(b) + {i}\n")))
            .collect();
        let refs: Vec<(&str, &str)> = files.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
        let (_d, mut cfg) = project(&refs);
        let one = run_scan(&cfg).unwrap();
        cfg.jobs = 4;
        assert_eq!(one, run_scan(&cfg).unwrap());
        assert!(Path::new(&cfg.roots[0]).is_dir());
    }
}
