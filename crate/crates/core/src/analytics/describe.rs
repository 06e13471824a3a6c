use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::corpus::ProjectStats;
use crate::metrics::{LoopBound, LoopKind, MetricRecord, PositionCat, RegexRole, Sugar};

/// How many function names the report lists by default.
pub const DEFAULT_TOP_FUNCTIONS: usize = 20;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Distribution {
    pub min: f64,
    pub median: f64,
    pub mean: f64,
    pub p95: f64,
    pub max: f64,
}

/// Linear interpolation between closest ranks over sorted values.
fn quantile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

impl Distribution {
    pub fn of(values: impl IntoIterator<Item = f64>) -> Option<Self> {
        let mut v: Vec<f64> = values.into_iter().collect();
        if v.is_empty() {
            return None;
        }
        v.sort_by(f64::total_cmp);
        Some(Distribution {
            min: v[0],
            median: quantile(&v, 0.5),
            mean: v.iter().sum::<f64>() / v.len() as f64,
            p95: quantile(&v, 0.95),
            max: v[v.len() - 1],
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Frequency {
    pub count: u64,
    pub rate: f64,
}

pub type FrequencyTable = BTreeMap<String, Frequency>;

fn rate(count: u64, total: u64) -> Option<f64> {
    (total > 0).then(|| count as f64 / total as f64)
}

fn table<I: IntoIterator<Item = String>>(items: I, total: u64) -> FrequencyTable {
    let mut counts: BTreeMap<String, u64> = BTreeMap::new();
    for i in items {
        *counts.entry(i).or_default() += 1;
    }
    counts.into_iter().map(|(k, count)| (k, Frequency { count, rate: rate(count, total).unwrap_or(0.0) })).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NamedFrequency {
    pub name: String,
    pub count: u64,
    pub rate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Distributions {
    pub loc: Option<Distribution>,
    pub cyclo: Option<Distribution>,
    pub expression_count: Option<Distribution>,
    pub variable_count: Option<Distribution>,
    pub function_count: Option<Distribution>,
    pub loop_nesting_depth: Option<Distribution>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PositionSummary {
    pub histogram: BTreeMap<String, u64>,
    pub shotgun_rate: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegexSummary {
    /// Share of records with at least one regex operation.
    pub usage_rate: Option<f64>,
    /// Regex uses by role, rates over all regex uses.
    pub roles: FrequencyTable,
    pub regular_candidate_rate: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LoopSummary {
    /// Share of records with at least one loop of any kind.
    pub loop_rate: Option<f64>,
    /// Loops by kind, rates over all loops.
    pub kinds: FrequencyTable,
    /// Loops by bound, rates over all loops.
    pub bounds: FrequencyTable,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExceptionSummary {
    /// Records with any caught or uncaught potential exception.
    pub any_potential_rate: Option<f64>,
    pub explicit_raise_rate: Option<f64>,
    pub catch_rate: Option<f64>,
    /// Uncaught exception names, rates over records.
    pub uncaught: FrequencyTable,
    pub split_call_count: u64,
    pub split_tuple_count: u64,
    /// Split calls whose result is destructured by a tuple assignment, over all split calls.
    pub split_tuple_rate: Option<f64>,
}

/// Descriptive statistics over a scan.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub record_count: u64,
    pub project_count: u64,
    pub projects_with_parser: u64,
    pub project_prevalence: f64,
    pub parser_loc_total: u64,
    pub project_loc_total: u64,
    pub parser_loc_ratio: Option<f64>,
    pub distributions: Distributions,
    pub position: PositionSummary,
    pub input_source: FrequencyTable,
    pub input_origin: FrequencyTable,
    /// Most frequent call names; rate is the share of records calling the name.
    pub functions: Vec<NamedFrequency>,
    pub sugar: FrequencyTable,
    pub regex: RegexSummary,
    pub loops: LoopSummary,
    pub exceptions: ExceptionSummary,
}

fn is_split(name: &str) -> bool {
    name.rsplit('.').next() == Some("split")
}

/// Names each record calls, once per record.
pub fn record_call_names(r: &MetricRecord) -> BTreeSet<&str> {
    r.call_names().collect()
}

pub fn describe(records: &[MetricRecord], stats: &[ProjectStats]) -> Report {
    describe_with(records, stats, DEFAULT_TOP_FUNCTIONS)
}

pub fn describe_with(records: &[MetricRecord], stats: &[ProjectStats], top_functions: usize) -> Report {
    let n = records.len() as u64;
    let project_count = stats.len() as u64;
    let projects_with_parser = stats.iter().filter(|s| s.has_parser).count() as u64;
    let parser_loc_total: u64 = stats.iter().map(|s| s.parser_loc_total as u64).sum();
    let project_loc_total: u64 = stats.iter().map(|s| s.project_loc as u64).sum();
    let dist = |f: fn(&MetricRecord) -> u32| Distribution::of(records.iter().map(|r| f(r) as f64));

    let mut histogram: BTreeMap<String, u64> = PositionCat::ALL.iter().map(|c| (c.to_string(), 0)).collect();
    for r in records {
        *histogram.entry(r.position_cat.to_string()).or_default() += 1;
    }

    let mut fn_counts: BTreeMap<&str, u64> = BTreeMap::new();
    for r in records {
        for name in record_call_names(r) {
            *fn_counts.entry(name).or_default() += 1;
        }
    }
    let mut functions: Vec<NamedFrequency> = fn_counts
        .into_iter()
        .map(|(name, count)| NamedFrequency { name: name.to_string(), count, rate: rate(count, n).unwrap_or(0.0) })
        .collect();
    functions.sort_by(|a, b| b.count.cmp(&a.count).then_with(|| a.name.cmp(&b.name)));
    functions.truncate(top_functions);

    let regex_uses: Vec<RegexRole> = records.iter().flat_map(|r| r.regexes.iter().map(|x| x.role)).collect();
    let loops: Vec<(LoopKind, LoopBound)> =
        records.iter().flat_map(|r| r.loops.iter().map(|l| (l.kind, l.bound))).collect();
    let count = |f: &dyn Fn(&MetricRecord) -> bool| records.iter().filter(|r| f(r)).count() as u64;

    let split_calls: Vec<bool> =
        records.iter().flat_map(|r| r.calls.iter().filter(|c| is_split(&c.name)).map(|c| c.unpacked)).collect();
    let split_call_count = split_calls.len() as u64;
    let split_tuple_count = split_calls.iter().filter(|&&u| u).count() as u64;

    Report {
        record_count: n,
        project_count,
        projects_with_parser,
        project_prevalence: rate(projects_with_parser, project_count).unwrap_or(0.0),
        parser_loc_total,
        project_loc_total,
        parser_loc_ratio: rate(parser_loc_total, project_loc_total),
        distributions: Distributions {
            loc: dist(|r| r.loc),
            cyclo: dist(|r| r.cyclo),
            expression_count: dist(|r| r.expression_count),
            variable_count: dist(|r| r.variable_count),
            function_count: dist(|r| r.function_count),
            loop_nesting_depth: dist(|r| r.loop_nesting_depth),
        },
        position: PositionSummary { histogram, shotgun_rate: rate(count(&|r| r.shotgun), n) },
        input_source: table(records.iter().map(|r| r.input_source.to_string()), n),
        input_origin: table(records.iter().map(|r| r.input_origin.to_string()), n),
        functions,
        sugar: table(records.iter().flat_map(|r| r.sugar.iter().map(Sugar::to_string)), n),
        regex: RegexSummary {
            usage_rate: rate(count(&|r| !r.regexes.is_empty()), n),
            roles: table(regex_uses.iter().map(RegexRole::to_string), regex_uses.len() as u64),
            regular_candidate_rate: rate(count(&|r| r.regular_candidate), n),
        },
        loops: LoopSummary {
            loop_rate: rate(count(&|r| !r.loops.is_empty()), n),
            kinds: table(loops.iter().map(|l| l.0.to_string()), loops.len() as u64),
            bounds: table(loops.iter().map(|l| l.1.to_string()), loops.len() as u64),
        },
        exceptions: ExceptionSummary {
            any_potential_rate: rate(
                count(&|r| !r.uncaught_exceptions.is_empty() || !r.caught_exceptions.is_empty()),
                n,
            ),
            explicit_raise_rate: rate(count(&|r| !r.raised_exceptions.is_empty()), n),
            catch_rate: rate(count(&|r| !r.caught_exceptions.is_empty()), n),
            uncaught: table(
                records.iter().flat_map(|r| r.uncaught_exceptions.iter().collect::<BTreeSet<_>>()).cloned(),
                n,
            ),
            split_call_count,
            split_tuple_count,
            split_tuple_rate: rate(split_tuple_count, split_call_count),
        },
    }
}

fn pct(v: Option<f64>) -> String {
    v.map(|x| format!("{:.1}%", x * 100.0)).unwrap_or_else(|| "-".to_string())
}

fn write_table(out: &mut String, title: &str, t: &FrequencyTable) {
    let _ = writeln!(out, "\n{title}");
    let mut rows: Vec<(&String, &Frequency)> = t.iter().collect();
    rows.sort_by(|a, b| b.1.count.cmp(&a.1.count).then_with(|| a.0.cmp(b.0)));
    for (k, f) in rows {
        let _ = writeln!(out, "  {k:<28} {:>7} {:>7}", f.count, pct(Some(f.rate)));
    }
}

impl Report {
    /// Plain-text rendering for terminals.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "records                {}", self.record_count);
        let _ = writeln!(
            out,
            "projects with parser   {} / {} ({})",
            self.projects_with_parser,
            self.project_count,
            pct(Some(self.project_prevalence))
        );
        let _ = writeln!(
            out,
            "parser LOC             {} / {} ({})",
            self.parser_loc_total,
            self.project_loc_total,
            pct(self.parser_loc_ratio)
        );
        let _ =
            writeln!(out, "\n{:<20} {:>8} {:>8} {:>8} {:>8} {:>8}", "metric", "min", "median", "mean", "p95", "max");
        let d = &self.distributions;
        for (name, v) in [
            ("loc", &d.loc),
            ("cyclo", &d.cyclo),
            ("expression_count", &d.expression_count),
            ("variable_count", &d.variable_count),
            ("function_count", &d.function_count),
            ("loop_nesting_depth", &d.loop_nesting_depth),
        ] {
            match v {
                Some(x) => {
                    let _ = writeln!(
                        out,
                        "{name:<20} {:>8.2} {:>8.2} {:>8.2} {:>8.2} {:>8.2}",
                        x.min, x.median, x.mean, x.p95, x.max
                    );
                }
                None => {
                    let _ = writeln!(out, "{name:<20} {:>8}", "-");
                }
            }
        }
        let _ = writeln!(out, "\nposition");
        for (k, v) in &self.position.histogram {
            let _ = writeln!(out, "  {k:<28} {v:>7}");
        }
        let _ = writeln!(out, "  {:<28} {:>15}", "shotgun", pct(self.position.shotgun_rate));
        write_table(&mut out, "input source", &self.input_source);
        write_table(&mut out, "input origin", &self.input_origin);
        let _ = writeln!(out, "\nfunctions");
        for f in &self.functions {
            let _ = writeln!(out, "  {:<28} {:>7} {:>7}", f.name, f.count, pct(Some(f.rate)));
        }
        write_table(&mut out, "sugar", &self.sugar);
        let _ = writeln!(
            out,
            "\nregex use {}   regular candidates {}",
            pct(self.regex.usage_rate),
            pct(self.regex.regular_candidate_rate)
        );
        write_table(&mut out, "regex roles", &self.regex.roles);
        let _ = writeln!(out, "\nloops {}", pct(self.loops.loop_rate));
        write_table(&mut out, "loop kinds", &self.loops.kinds);
        write_table(&mut out, "loop bounds", &self.loops.bounds);
        let e = &self.exceptions;
        let _ = writeln!(
            out,
            "\nexceptions: potential {}   raise {}   catch {}   split into tuple {} ({}/{})",
            pct(e.any_potential_rate),
            pct(e.explicit_raise_rate),
            pct(e.catch_rate),
            pct(e.split_tuple_rate),
            e.split_tuple_count,
            e.split_call_count
        );
        write_table(&mut out, "uncaught", &e.uncaught);
        out
    }
}
