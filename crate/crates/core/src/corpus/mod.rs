//! Corpus walking, per-project scanning and record persistence.

mod discover;
mod output;
mod scan;

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

pub use discover::{discover, is_skipped_dir, ProjectGroup, SourceModule};
pub use output::{read_jsonl, write_csv, write_jsonl, write_records, ScanOutput, STATS_TYPE};
pub use scan::{load_api_table, locate_slice, run_scan, scan_project, SliceLocation};

use crate::typing::TableError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProjectGranularity {
    /// Every root is one project.
    RootIsOneProject,
    /// Every immediate child directory of a root is a project.
    EachChildDirIsAProject,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OutputFormat {
    Jsonl,
    Csv,
}

#[derive(Debug, Clone)]
pub struct ScanConfig {
    pub roots: Vec<PathBuf>,
    pub project_granularity: ProjectGranularity,
    pub jobs: usize,
    pub follow_symlinks: bool,
    pub table_extensions: Option<PathBuf>,
    pub output_path: PathBuf,
    pub output_format: OutputFormat,
}

impl ScanConfig {
    pub fn new(roots: Vec<PathBuf>, output_path: PathBuf) -> Self {
        ScanConfig {
            roots,
            project_granularity: ProjectGranularity::RootIsOneProject,
            jobs: 1,
            follow_symlinks: false,
            table_extensions: None,
            output_path,
            output_format: OutputFormat::Jsonl,
        }
    }
}

/// Per-project aggregate written after the project's records.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProjectStats {
    pub project_name: String,
    /// Project directory as scanned, used to find sources again.
    #[serde(default)]
    pub root: String,
    pub project_loc: u32,
    pub module_count: u32,
    pub parse_failures: u32,
    pub parser_count: u32,
    /// Code lines covered by at least one parser slice.
    pub parser_loc_total: u32,
    pub has_parser: bool,
}

#[derive(Debug, thiserror::Error)]
pub enum CorpusError {
    #[error("root does not exist: {0}")]
    MissingRoot(PathBuf),
    #[error("jobs must be at least 1")]
    NoWorkers,
    #[error(transparent)]
    Table(#[from] TableError),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
    #[error("{path}:{line}: {message}")]
    Records { path: PathBuf, line: usize, message: String },
    #[error("worker pool: {0}")]
    Pool(String),
}

impl CorpusError {
    /// Bad input from the user rather than a failure while running.
    pub fn is_configuration(&self) -> bool {
        matches!(self, CorpusError::MissingRoot(_) | CorpusError::NoWorkers | CorpusError::Table(_))
    }
}
