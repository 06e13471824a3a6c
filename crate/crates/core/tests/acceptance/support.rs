use std::path::{Path, PathBuf};

use adhocscan_core::metrics::{build_record, ModuleInfo, ProjectIndex, ProjectInfo, SliceContext};
use adhocscan_core::slicing::{collect_parsers, FunctionAnalysis, ParserSlice};
use adhocscan_core::{ImportMap, KnownApiTable, MetricRecord, ParsedModule};

#[allow(dead_code)]
pub fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

/// Every function unit of a one-file module, analyzed.
pub fn analyses(src: &str, api: &KnownApiTable) -> (ParsedModule, Vec<FunctionAnalysis>) {
    let m = ParsedModule::parse("m.py", src.to_string()).expect("fixture parses");
    let imports = ImportMap::from_module(&m.root);
    let all = m.functions().into_iter().map(|u| FunctionAnalysis::new(u, &imports, api).in_project("p")).collect();
    (m, all)
}

/// Parser slices of one function with their records.
pub fn parsers(
    src: &str,
    function: &str,
    api: &KnownApiTable,
) -> (FunctionAnalysis, Vec<ParserSlice>, Vec<MetricRecord>) {
    let (m, all) = analyses(src, api);
    let mut index = ProjectIndex::default();
    index.add_module("m");
    for a in &all {
        index.add_function(&a.unit.name, &a.unit.qualified_name);
    }
    let a = all.into_iter().find(|a| a.unit.name == function).expect("function exists");
    let module = ModuleInfo { relative_path: "m.py", code_lines: &m.code_lines };
    let project = ProjectInfo { name: "p", loc: m.module_loc(), index: &index };
    let slices = collect_parsers(&a, api);
    let records = slices.iter().map(|s| build_record(&SliceContext::new(&a, s, api), &module, &project)).collect();
    (a, slices, records)
}
