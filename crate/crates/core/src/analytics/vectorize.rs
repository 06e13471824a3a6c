use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::AnalyticsError;
use crate::metrics::MetricRecord;

/// Default vocabulary size of each multiset feature family.
pub const DEFAULT_VOCABULARY: usize = 32;

/// Feature matrix with one row per record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureMatrix {
    pub rows: Vec<Vec<f64>>,
    pub feature_schema: Vec<String>,
    pub record_ids: Vec<String>,
}

const NUMERIC: &[(&str, fn(&MetricRecord) -> f64)] = &[
    ("loc", |r| r.loc as f64),
    ("cyclo", |r| r.cyclo as f64),
    ("expression_count", |r| r.expression_count as f64),
    ("variable_count", |r| r.variable_count as f64),
    ("function_count", |r| r.function_count as f64),
    ("loop_nesting_depth", |r| r.loop_nesting_depth as f64),
    ("position_rel", |r| r.position_rel),
];

const CATEGORICAL: &[(&str, fn(&MetricRecord) -> String)] = &[
    ("position_cat", |r| r.position_cat.to_string()),
    ("input_source", |r| r.input_source.to_string()),
    ("input_origin", |r| r.input_origin.to_string()),
    ("shotgun", |r| r.shotgun.to_string()),
    ("regular_candidate", |r| r.regular_candidate.to_string()),
];

const MULTISET: &[(&str, fn(&MetricRecord) -> BTreeSet<String>)] = &[
    ("call", |r| r.call_names().map(str::to_string).collect()),
    ("sugar", |r| r.sugar.iter().map(|s| s.to_string()).collect()),
    ("loop_kind", |r| r.loops.iter().map(|l| l.kind.to_string()).collect()),
    ("loop_bound", |r| r.loops.iter().map(|l| l.bound.to_string()).collect()),
    ("regex_role", |r| r.regexes.iter().map(|x| x.role.to_string()).collect()),
];

/// Z-scores each column in place using the population deviation.
/// Returns false for constant columns, which are left untouched.
pub fn standardize(column: &mut [f64]) -> bool {
    let n = column.len() as f64;
    let mean = column.iter().sum::<f64>() / n;
    let var = column.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    let sd = var.sqrt();
    if !(sd > 1e-12 * mean.abs().max(1.0)) {
        return false;
    }
    for v in column.iter_mut() {
        *v = (*v - mean) / sd;
    }
    true
}

/// The `vocabulary` most frequent values of a family, by record count then name.
fn top_values(sets: &[BTreeSet<String>], vocabulary: usize) -> Vec<String> {
    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    for s in sets {
        for v in s {
            *counts.entry(v).or_default() += 1;
        }
    }
    let mut ranked: Vec<(&str, usize)> = counts.into_iter().collect();
    ranked.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
    ranked.into_iter().take(vocabulary).map(|(v, _)| v.to_string()).collect()
}

/// Standardized numeric columns, one-hot categories and 0/1 indicators over
/// the most frequent multiset values. Constant columns are dropped.
pub fn vectorize(records: &[MetricRecord], vocabulary: usize) -> Result<FeatureMatrix, AnalyticsError> {
    if records.is_empty() {
        return Err(AnalyticsError::Empty);
    }
    let mut columns: Vec<(String, Vec<f64>)> = Vec::new();
    let mut dropped = Vec::new();
    for (name, f) in NUMERIC {
        let mut col: Vec<f64> = records.iter().map(f).collect();
        if standardize(&mut col) {
            columns.push((name.to_string(), col));
        } else {
            dropped.push(name.to_string());
        }
    }
    let mut indicator = |name: String, col: Vec<f64>, columns: &mut Vec<(String, Vec<f64>)>| {
        if col.iter().all(|&v| v == col[0]) {
            dropped.push(name);
        } else {
            columns.push((name, col));
        }
    };
    for (name, f) in CATEGORICAL {
        let values: Vec<String> = records.iter().map(f).collect();
        let levels: BTreeSet<&String> = values.iter().collect();
        for level in levels {
            let col = values.iter().map(|v| if v == level { 1.0 } else { 0.0 }).collect();
            indicator(format!("{name}={level}"), col, &mut columns);
        }
    }
    for (name, f) in MULTISET {
        let sets: Vec<BTreeSet<String>> = records.iter().map(f).collect();
        for value in top_values(&sets, vocabulary) {
            let col = sets.iter().map(|s| if s.contains(&value) { 1.0 } else { 0.0 }).collect();
            indicator(format!("{name}:{value}"), col, &mut columns);
        }
    }
    if columns.is_empty() {
        return Err(AnalyticsError::ZeroVariance { columns: dropped });
    }
    let rows = (0..records.len()).map(|i| columns.iter().map(|(_, c)| c[i]).collect()).collect();
    Ok(FeatureMatrix {
        rows,
        feature_schema: columns.into_iter().map(|(n, _)| n).collect(),
        record_ids: records.iter().map(|r| r.slice_id.clone()).collect(),
    })
}
