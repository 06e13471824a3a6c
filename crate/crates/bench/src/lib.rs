//! Synthetic workloads for the pipeline benchmarks.

use std::path::PathBuf;

use adhocscan_core::corpus::{discover, ProjectGroup};
use adhocscan_core::slicing::{collect_parsers, FunctionAnalysis};
use adhocscan_core::synth::{synthetic_module, write_corpus};
use adhocscan_core::{scan_project, ImportMap, KnownApiTable, MetricRecord, ParsedModule, ScanConfig};

/// A generated corpus on disk. The directory lives as long as the value.
pub struct Workload {
    _dir: tempfile::TempDir,
    pub root: PathBuf,
    pub group: ProjectGroup,
}

impl Workload {
    pub fn new(files: usize, loc: usize, seed: u64) -> std::io::Result<Self> {
        let dir = tempfile::tempdir()?;
        let root = dir.path().join("synthetic");
        write_corpus(&root, files, loc, seed)?;
        let config = ScanConfig::new(vec![root.clone()], root.join("unused.jsonl"));
        let group = discover(&config).map_err(std::io::Error::other)?.remove(0);
        Ok(Workload { _dir: dir, root, group })
    }

    pub fn scan(&self, api: &KnownApiTable) -> Vec<MetricRecord> {
        let config = ScanConfig::new(vec![self.root.clone()], self.root.join("unused.jsonl"));
        scan_project(&self.group, api, &config).1
    }
}

/// Source text of one synthetic module.
pub fn module_source(seed: u64, loc: usize) -> String {
    synthetic_module(seed, loc)
}

/// Number of parsers found in one module, without the corpus layer.
pub fn parsers_in(source: &str, api: &KnownApiTable) -> usize {
    let Ok(m) = ParsedModule::parse("m.py", source.to_string()) else {
        return 0;
    };
    let imports = ImportMap::from_module(&m.root);
    m.functions().into_iter().map(|u| collect_parsers(&FunctionAnalysis::new(u, &imports, api), api).len()).sum()
}
