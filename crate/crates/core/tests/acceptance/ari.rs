//! Partition agreement measures used as clustering oracles.

use std::collections::BTreeMap;

fn comb2(n: u64) -> f64 {
    (n * n.saturating_sub(1)) as f64 / 2.0
}

/// Adjusted Rand index from the contingency table.
pub fn adjusted_rand(a: &[usize], b: &[usize]) -> f64 {
    assert_eq!(a.len(), b.len());
    let mut table: BTreeMap<(usize, usize), u64> = BTreeMap::new();
    let mut rows: BTreeMap<usize, u64> = BTreeMap::new();
    let mut cols: BTreeMap<usize, u64> = BTreeMap::new();
    for (&x, &y) in a.iter().zip(b) {
        *table.entry((x, y)).or_default() += 1;
        *rows.entry(x).or_default() += 1;
        *cols.entry(y).or_default() += 1;
    }
    let index: f64 = table.values().map(|&n| comb2(n)).sum();
    let sa: f64 = rows.values().map(|&n| comb2(n)).sum();
    let sb: f64 = cols.values().map(|&n| comb2(n)).sum();
    let expected = sa * sb / comb2(a.len() as u64);
    let max = (sa + sb) / 2.0;
    if max == expected {
        return 1.0;
    }
    (index - expected) / (max - expected)
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(k - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, k - 1);
            out.push(q);
        }
    }
    out
}

/// Share of points whose label agrees with the truth under the best
/// relabeling, found by trying every permutation.
pub fn best_match_accuracy(truth: &[usize], found: &[usize], k: usize) -> f64 {
    permutations(k).iter().map(|p| truth.iter().zip(found).filter(|(&t, &f)| p[f] == t).count()).max().unwrap_or(0)
        as f64
        / truth.len() as f64
}

#[test]
fn ari_reference_values() {
    assert_eq!(adjusted_rand(&[0, 0, 1, 1], &[1, 1, 0, 0]), 1.0);
    // index 1, row pairs 2, column pairs 1, expected 1/3, max 3/2 -> 4/7
    assert!((adjusted_rand(&[0, 0, 1, 1], &[0, 0, 1, 2]) - 4.0 / 7.0).abs() < 1e-12);
    // index 2, row pairs 3, column pairs 4, expected 4/5, max 7/2 -> 4/9
    assert!((adjusted_rand(&[0, 0, 1, 1, 2, 2], &[0, 0, 1, 2, 2, 2]) - 4.0 / 9.0).abs() < 1e-12);
    assert_eq!(best_match_accuracy(&[0, 0, 1, 2], &[2, 2, 0, 1], 3), 1.0);
    assert_eq!(best_match_accuracy(&[0, 0, 1, 1], &[0, 1, 0, 1], 2), 0.5);
}
