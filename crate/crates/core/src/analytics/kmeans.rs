use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::AnalyticsError;

pub const MAX_ITERATIONS: usize = 100;
pub const TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KMeans {
    pub k: usize,
    pub seed: u64,
    /// Cluster index per row.
    pub labels: Vec<usize>,
    pub centroids: Vec<Vec<f64>>,
    pub inertia: f64,
    /// Inertia after each assignment step.
    pub trace: Vec<f64>,
    pub iterations: usize,
}

pub fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Nearest centroid per row, ties to the lowest index.
fn nearest(row: &[f64], centroids: &[Vec<f64>]) -> (usize, f64) {
    let mut best = (0, f64::INFINITY);
    for (j, c) in centroids.iter().enumerate() {
        let d = squared_distance(row, c);
        if d < best.1 {
            best = (j, d);
        }
    }
    best
}

/// Assigns every row; the reduction over rows runs in row order.
fn assign(rows: &[Vec<f64>], centroids: &[Vec<f64>]) -> (Vec<usize>, Vec<f64>, f64) {
    let pairs: Vec<(usize, f64)> = rows.par_iter().map(|r| nearest(r, centroids)).collect();
    let inertia = pairs.iter().map(|p| p.1).sum();
    let (labels, dists) = pairs.into_iter().unzip();
    (labels, dists, inertia)
}

fn init_plus_plus(rows: &[Vec<f64>], k: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    let n = rows.len();
    let mut centroids = vec![rows[rng.gen_range(0..n)].clone()];
    let mut d2: Vec<f64> = rows.iter().map(|r| squared_distance(r, &centroids[0])).collect();
    while centroids.len() < k {
        let total: f64 = d2.iter().sum();
        let pick = if total > 0.0 {
            let target = rng.gen::<f64>() * total;
            let mut acc = 0.0;
            let mut chosen = n - 1;
            for (i, d) in d2.iter().enumerate() {
                acc += d;
                if acc > target && *d > 0.0 {
                    chosen = i;
                    break;
                }
            }
            chosen
        } else {
            rng.gen_range(0..n)
        };
        centroids.push(rows[pick].clone());
        for (i, r) in rows.iter().enumerate() {
            d2[i] = d2[i].min(squared_distance(r, &centroids[centroids.len() - 1]));
        }
    }
    centroids
}

/// Seeded k-means++ followed by Lloyd iterations.
pub fn kmeans(rows: &[Vec<f64>], k: usize, seed: u64) -> Result<KMeans, AnalyticsError> {
    if k == 0 || k > rows.len() {
        return Err(AnalyticsError::InvalidK { k, rows: rows.len() });
    }
    let dim = rows[0].len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut centroids = init_plus_plus(rows, k, &mut rng);
    let mut trace = Vec::new();
    let mut iterations = 0;
    let (mut labels, mut dists, mut inertia) = assign(rows, &centroids);
    trace.push(inertia);
    while iterations < MAX_ITERATIONS {
        iterations += 1;
        let mut sums = vec![vec![0.0; dim]; k];
        let mut counts = vec![0usize; k];
        for (row, &l) in rows.iter().zip(&labels) {
            counts[l] += 1;
            for (s, v) in sums[l].iter_mut().zip(row) {
                *s += v;
            }
        }
        let mut taken: Vec<usize> = Vec::new();
        let mut next = Vec::with_capacity(k);
        for j in 0..k {
            if counts[j] == 0 {
                // farthest point from its own centroid
                let far = (0..rows.len())
                    .filter(|i| !taken.contains(i))
                    .fold(None, |best: Option<usize>, i| match best {
                        Some(b) if dists[b] >= dists[i] => Some(b),
                        _ => Some(i),
                    })
                    .unwrap_or(0);
                taken.push(far);
                next.push(rows[far].clone());
            } else {
                next.push(sums[j].iter().map(|s| s / counts[j] as f64).collect());
            }
        }
        let shift = centroids.iter().zip(&next).map(|(a, b)| squared_distance(a, b).sqrt()).fold(0.0, f64::max);
        centroids = next;
        (labels, dists, inertia) = assign(rows, &centroids);
        trace.push(inertia);
        if shift < TOLERANCE {
            break;
        }
    }
    Ok(KMeans { k, seed, labels, centroids, inertia, trace, iterations })
}

/// Mean silhouette with Euclidean distance; `None` for fewer than two
/// clusters. Rows in singleton clusters score 0.
pub fn silhouette(rows: &[Vec<f64>], labels: &[usize]) -> Option<f64> {
    let k = labels.iter().max().map_or(0, |m| m + 1);
    let used = (0..k).filter(|c| labels.contains(c)).count();
    if used < 2 {
        return None;
    }
    let scores: Vec<f64> = (0..rows.len())
        .into_par_iter()
        .map(|i| {
            let mut sum = vec![0.0; k];
            let mut count = vec![0usize; k];
            for (j, r) in rows.iter().enumerate() {
                if i != j {
                    sum[labels[j]] += squared_distance(&rows[i], r).sqrt();
                    count[labels[j]] += 1;
                }
            }
            let own = labels[i];
            if count[own] == 0 {
                return 0.0;
            }
            let a = sum[own] / count[own] as f64;
            let b = (0..k)
                .filter(|&c| c != own && count[c] > 0)
                .map(|c| sum[c] / count[c] as f64)
                .fold(f64::INFINITY, f64::min);
            let m = a.max(b);
            if m > 0.0 {
                (b - a) / m
            } else {
                0.0
            }
        })
        .collect();
    Some(scores.iter().sum::<f64>() / scores.len() as f64)
}

/// Per cluster, the ids of the `m` rows closest to the centroid, ties by id.
pub fn sample(rows: &[Vec<f64>], ids: &[String], km: &KMeans, m: usize) -> Vec<Vec<String>> {
    (0..km.k)
        .map(|c| {
            let mut members: Vec<(f64, &String)> = (0..rows.len())
                .filter(|&i| km.labels[i] == c)
                .map(|i| (squared_distance(&rows[i], &km.centroids[c]), &ids[i]))
                .collect();
            members.sort_by(|a, b| a.0.total_cmp(&b.0).then_with(|| a.1.cmp(b.1)));
            members.into_iter().take(m).map(|(_, id)| id.clone()).collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> Vec<Vec<f64>> {
        vec![vec![0.0, 0.0], vec![0.0, 1.0], vec![10.0, 10.0], vec![10.0, 11.0], vec![20.0, 0.0], vec![21.0, 0.0]]
    }

    #[test]
    fn single_cluster_is_column_means() {
        let rows = grid();
        let km = kmeans(&rows, 1, 7).unwrap();
        assert!(km.labels.iter().all(|&l| l == 0));
        assert!((km.centroids[0][0] - 61.0 / 6.0).abs() < 1e-12);
        assert!((km.centroids[0][1] - 22.0 / 6.0).abs() < 1e-12);
        assert!(silhouette(&rows, &km.labels).is_none());
    }

    #[test]
    fn invalid_k() {
        assert!(matches!(kmeans(&grid(), 0, 1), Err(AnalyticsError::InvalidK { .. })));
        assert!(matches!(kmeans(&grid(), 7, 1), Err(AnalyticsError::InvalidK { .. })));
    }

    #[test]
    fn separated_pairs() {
        let rows = grid();
        let km = kmeans(&rows, 3, 3).unwrap();
        assert_eq!(km.labels[0], km.labels[1]);
        assert_eq!(km.labels[2], km.labels[3]);
        assert_eq!(km.labels[4], km.labels[5]);
        assert!((km.inertia - 1.5).abs() < 1e-12);
        assert!(silhouette(&rows, &km.labels).unwrap() > 0.9);
        assert!(km.trace.windows(2).all(|w| w[1] <= w[0] + 1e-9));
    }

    #[test]
    fn deterministic() {
        let rows = grid();
        assert_eq!(kmeans(&rows, 2, 11).unwrap(), kmeans(&rows, 2, 11).unwrap());
    }

    #[test]
    fn duplicate_points_fill_every_cluster() {
        let rows = vec![vec![1.0], vec![1.0], vec![1.0], vec![5.0]];
        let km = kmeans(&rows, 3, 0).unwrap();
        let mut used: Vec<usize> = km.labels.clone();
        used.sort();
        used.dedup();
        assert!(used.len() >= 2);
        assert_eq!(km.labels.len(), 4);
    }

    #[test]
    fn sampling_ties_by_id() {
        let rows = vec![vec![-1.0], vec![1.0]];
        let ids = vec!["b".to_string(), "a".to_string()];
        let km = KMeans {
            k: 1,
            seed: 0,
            labels: vec![0, 0],
            centroids: vec![vec![0.0]],
            inertia: 2.0,
            trace: vec![],
            iterations: 0,
        };
        assert_eq!(sample(&rows, &ids, &km, 5), [["a", "b"]]);
        assert_eq!(sample(&rows, &ids, &km, 1), [["a"]]);
    }
}
