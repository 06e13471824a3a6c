//! Static detection and metric profiling of ad hoc string parsers in Python
//! source code.
//!
//! The pipeline parses each module, splits it into function units, builds a
//! program dependence graph per unit, infers which variables hold strings,
//! slices forward from each string seed and keeps the slices that constrain
//! their input. Each kept slice gets a [`MetricRecord`].

pub mod analytics;
pub mod corpus;
pub mod graph;
pub mod metrics;
pub mod slicing;
pub mod syntax;
pub mod synth;
pub mod typing;

pub use analytics::{cluster, describe, ClusterConfig, Clustering, Report};
pub use corpus::{
    discover, read_jsonl, run_scan, scan_project, write_records, OutputFormat, ProjectGranularity, ProjectStats,
    ScanConfig, ScanOutput,
};
pub use metrics::MetricRecord;
pub use slicing::{collect_parsers, FunctionAnalysis, ParserSlice};
pub use syntax::{FunctionUnit, ParsedModule, SyntaxNode};
pub use typing::{ImportMap, InputOrigin, KnownApiTable};
