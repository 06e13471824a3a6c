//! Descriptive statistics and clustering over metric records.

mod describe;
mod kmeans;
mod vectorize;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

pub use describe::{
    describe, describe_with, record_call_names, Distribution, Distributions, ExceptionSummary, Frequency,
    FrequencyTable, LoopSummary, NamedFrequency, PositionSummary, RegexSummary, Report, DEFAULT_TOP_FUNCTIONS,
};
pub use kmeans::{kmeans, sample, silhouette, squared_distance, KMeans, MAX_ITERATIONS, TOLERANCE};
pub use vectorize::{standardize, vectorize, FeatureMatrix, DEFAULT_VOCABULARY};

use crate::metrics::MetricRecord;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AnalyticsError {
    #[error("no records to analyze")]
    Empty,
    #[error("every feature is constant: {}", columns.join(", "))]
    ZeroVariance { columns: Vec<String> },
    #[error("k must be between 1 and the number of records ({rows}), got {k}")]
    InvalidK { k: usize, rows: usize },
}

/// Clustering of records with its provenance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Clustering {
    pub k: usize,
    pub seed: u64,
    pub assignments: BTreeMap<String, usize>,
    pub centroids: Vec<Vec<f64>>,
    pub inertia: f64,
    pub silhouette: Option<f64>,
    pub feature_schema: Vec<String>,
    /// Per cluster, the record ids nearest the centroid.
    pub exemplars: Vec<Vec<String>>,
    pub cluster_sizes: Vec<usize>,
    pub inertia_trace: Vec<f64>,
    pub iterations: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClusterConfig {
    pub k: usize,
    pub seed: u64,
    pub vocabulary: usize,
    pub exemplars: usize,
}

pub fn cluster(records: &[MetricRecord], config: ClusterConfig) -> Result<Clustering, AnalyticsError> {
    let m = vectorize(records, config.vocabulary)?;
    let km = kmeans(&m.rows, config.k, config.seed)?;
    let mut cluster_sizes = vec![0; km.k];
    for &l in &km.labels {
        cluster_sizes[l] += 1;
    }
    Ok(Clustering {
        k: km.k,
        seed: km.seed,
        assignments: m.record_ids.iter().cloned().zip(km.labels.iter().copied()).collect(),
        silhouette: silhouette(&m.rows, &km.labels),
        exemplars: sample(&m.rows, &m.record_ids, &km, config.exemplars),
        feature_schema: m.feature_schema,
        cluster_sizes,
        centroids: km.centroids,
        inertia: km.inertia,
        inertia_trace: km.trace,
        iterations: km.iterations,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub k: usize,
    pub inertia: f64,
    pub silhouette: Option<f64>,
}

/// Inertia and silhouette for each k in `ks` that fits the record count.
pub fn sweep(
    records: &[MetricRecord],
    ks: impl IntoIterator<Item = usize>,
    seed: u64,
    vocabulary: usize,
) -> Result<Vec<SweepPoint>, AnalyticsError> {
    let m = vectorize(records, vocabulary)?;
    let mut out = Vec::new();
    for k in ks.into_iter().filter(|&k| k >= 1 && k <= m.rows.len()) {
        let km = kmeans(&m.rows, k, seed)?;
        out.push(SweepPoint { k, inertia: km.inertia, silhouette: silhouette(&m.rows, &km.labels) });
    }
    Ok(out)
}
