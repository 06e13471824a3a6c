use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::Serialize;

use super::{CorpusError, OutputFormat, ProjectStats, ScanConfig};
use crate::metrics::MetricRecord;

/// Value of the `type` field that marks a stats line in JSONL output.
pub const STATS_TYPE: &str = "project-stats";

#[derive(Serialize)]
struct StatsLine<'a> {
    #[serde(rename = "type")]
    kind: &'static str,
    #[serde(flatten)]
    stats: &'a ProjectStats,
}

fn create(path: &Path) -> Result<BufWriter<File>, CorpusError> {
    File::create(path).map(BufWriter::new).map_err(|source| CorpusError::Io { path: path.to_path_buf(), source })
}

/// Writes each project's records followed by its stats line.
pub fn write_jsonl<W: Write>(out: &mut W, projects: &[(ProjectStats, Vec<MetricRecord>)]) -> std::io::Result<()> {
    for (stats, records) in projects {
        for r in records {
            serde_json::to_writer(&mut *out, r)?;
            out.write_all(b"\n")?;
        }
        serde_json::to_writer(&mut *out, &StatsLine { kind: STATS_TYPE, stats })?;
        out.write_all(b"\n")?;
    }
    out.flush()
}

fn joined<I: IntoIterator<Item = String>>(items: I) -> String {
    items.into_iter().collect::<Vec<_>>().join("|")
}

const CSV_HEADER: &[&str] = &[
    "slice_id",
    "project_name",
    "project_loc",
    "module_name",
    "ef_name",
    "ef_loc",
    "position_rel",
    "position_cat",
    "shotgun",
    "loc",
    "cyclo",
    "input_source",
    "input_origin",
    "expression_count",
    "variable_count",
    "function_count",
    "calls",
    "sugar",
    "regexes",
    "loops",
    "loop_nesting_depth",
    "caught_exceptions",
    "uncaught_exceptions",
    "raised_exceptions",
    "regular_candidate",
];

fn csv_row(r: &MetricRecord) -> Vec<String> {
    let mut sugar: Vec<&str> = r.sugar.iter().map(|s| s.as_str()).collect();
    sugar.sort_unstable();
    vec![
        r.slice_id.clone(),
        r.project_name.clone(),
        r.project_loc.to_string(),
        r.module_name.clone(),
        r.ef_name.clone(),
        r.ef_loc.to_string(),
        serde_json::to_string(&r.position_rel).unwrap_or_default(),
        r.position_cat.to_string(),
        r.shotgun.to_string(),
        r.loc.to_string(),
        r.cyclo.to_string(),
        r.input_source.to_string(),
        r.input_origin.to_string(),
        r.expression_count.to_string(),
        r.variable_count.to_string(),
        r.function_count.to_string(),
        joined(r.calls.iter().map(|c| format!("{}@{}", c.name, c.ordinal))),
        sugar.join("|"),
        joined(r.regexes.iter().map(|x| format!("{}@{}:{}", x.api_name, x.ordinal, x.role))),
        joined(r.loops.iter().map(|l| format!("{}:{}", l.kind, l.bound))),
        r.loop_nesting_depth.to_string(),
        joined(r.caught_exceptions.iter().map(|c| format!("{}@{}", c.name, c.scope))),
        r.uncaught_exceptions.join("|"),
        r.raised_exceptions.join("|"),
        r.regular_candidate.to_string(),
    ]
}

/// One row per record; project stats are not part of the CSV form.
pub fn write_csv<W: Write>(out: W, projects: &[(ProjectStats, Vec<MetricRecord>)]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in projects.iter().flat_map(|(_, rs)| rs) {
        w.write_record(csv_row(r))?;
    }
    w.flush()?;
    Ok(())
}

/// Persists a scan to `config.output_path` in `config.output_format`.
pub fn write_records(projects: &[(ProjectStats, Vec<MetricRecord>)], config: &ScanConfig) -> Result<(), CorpusError> {
    let path = &config.output_path;
    let mut out = create(path)?;
    match config.output_format {
        OutputFormat::Jsonl => {
            write_jsonl(&mut out, projects).map_err(|source| CorpusError::Io { path: path.clone(), source })
        }
        OutputFormat::Csv => write_csv(out, projects).map_err(|source| CorpusError::Csv { path: path.clone(), source }),
    }
}

/// Records and stats read back from JSONL output.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ScanOutput {
    pub records: Vec<MetricRecord>,
    pub stats: Vec<ProjectStats>,
}

pub fn read_jsonl(path: &Path) -> Result<ScanOutput, CorpusError> {
    let io_err = |source| CorpusError::Io { path: path.to_path_buf(), source };
    let file = File::open(path).map_err(io_err)?;
    let mut out = ScanOutput::default();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(io_err)?;
        if line.trim().is_empty() {
            continue;
        }
        let bad = |e: serde_json::Error| CorpusError::Records {
            path: path.to_path_buf(),
            line: i + 1,
            message: e.to_string(),
        };
        let value: serde_json::Value = serde_json::from_str(&line).map_err(bad)?;
        if value.get("type").and_then(|t| t.as_str()) == Some(STATS_TYPE) {
            out.stats.push(serde_json::from_value(value).map_err(bad)?);
        } else {
            out.records.push(serde_json::from_value(value).map_err(bad)?);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::tests_support::{empty_record, records};
    use crate::metrics::Sugar;

    fn stats(parsers: u32) -> ProjectStats {
        ProjectStats {
            project_name: "p".into(),
            root: "/src/p".into(),
            project_loc: 10,
            module_count: 1,
            parse_failures: 0,
            parser_count: parsers,
            parser_loc_total: 0,
            has_parser: parsers > 0,
        }
    }

    #[test]
    fn no_records_only_stats() {
        let mut buf = Vec::new();
        write_jsonl(&mut buf, &[(stats(0), vec![])]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 1);
        assert!(text.starts_with("{\"type\":\"project-stats\",\"project_name\":\"p\""));
    }

    #[test]
    fn two_records_round_trip_in_order() {
        let src = "def f(s, t):\n    a = s.split(',')[0]\n    return int(t)\n";
        let src = src.replace("int(t)", "int(t.strip())");
        let recs = records(&src, "f");
        assert_eq!(recs.len(), 2);
        let dir = tempfile::tempdir().unwrap();
        let mut cfg = ScanConfig::new(vec![], dir.path().join("o.jsonl"));
        write_records(&[(stats(2), recs.clone())], &cfg).unwrap();
        let text = std::fs::read_to_string(&cfg.output_path).unwrap();
        assert_eq!(text.lines().count(), 3);
        let back = read_jsonl(&cfg.output_path).unwrap();
        assert_eq!(back.records, recs);
        assert_eq!(back.stats, [stats(2)]);

        cfg.output_format = OutputFormat::Csv;
        cfg.output_path = dir.path().join("o.csv");
        write_records(&[(stats(2), recs)], &cfg).unwrap();
        let csv = std::fs::read_to_string(&cfg.output_path).unwrap();
        assert_eq!(csv.lines().count(), 3);
    }

    #[test]
    fn csv_cells() {
        let mut r = empty_record();
        r.sugar = [Sugar::TupleAssignment, Sugar::Subscript].into_iter().collect();
        r.calls = records("def f(s):\n    return map(int, s.split('.'))\n", "f").remove(0).calls;
        let row = csv_row(&r);
        assert_eq!(row[17], "subscript|tuple-assignment");
        assert_eq!(row[16], "map@1|int@2|split@3");
        assert_eq!(row.len(), CSV_HEADER.len());
    }

    #[test]
    fn unwritable_path_fails() {
        let cfg = ScanConfig::new(vec![], "/nonexistent-dir/x/o.jsonl".into());
        assert!(matches!(write_records(&[], &cfg), Err(CorpusError::Io { .. })));
    }
}
