//! Shared test oracles, independent of the library's implementation paths.

#![allow(dead_code)]

use edumine::{Dataset, Feature, FeatureSchema, Row, Value};

/// Exhaustive k=2 partition optimum: enumerates every assignment of points
/// into two non-empty groups and returns the minimal within-cluster sum of
/// squares with centroids at the group means.
pub fn brute_force_k2(points: &[Vec<f64>]) -> f64 {
    let n = points.len();
    assert!((2..=16).contains(&n), "oracle is exhaustive, keep n small");
    let d = points[0].len();
    let mut best = f64::INFINITY;
    for mask in 1..((1u32 << n) - 1) {
        let mut wcss = 0.0;
        for group in 0..2u32 {
            let members: Vec<&Vec<f64>> = (0..n)
                .filter(|&i| ((mask >> i) & 1) == group)
                .map(|i| &points[i])
                .collect();
            if members.is_empty() {
                wcss = f64::INFINITY;
                break;
            }
            let mut mean = vec![0.0; d];
            for p in &members {
                for (m, x) in mean.iter_mut().zip(p.iter()) {
                    *m += x;
                }
            }
            for m in mean.iter_mut() {
                *m /= members.len() as f64;
            }
            for p in &members {
                wcss += p
                    .iter()
                    .zip(&mean)
                    .map(|(x, m)| (x - m) * (x - m))
                    .sum::<f64>();
            }
        }
        if wcss < best {
            best = wcss;
        }
    }
    best
}

/// A small labeled dataset of binary categorical features, used to cross-check
/// the classifier against a direct evaluation of Bayes' rule.
#[derive(Debug, Clone)]
pub struct BinaryDataset {
    /// Per row: feature values (0/1) and a class index.
    pub rows: Vec<(Vec<u8>, usize)>,
    pub n_features: usize,
    pub class_names: Vec<String>,
}

impl BinaryDataset {
    pub fn to_dataset(&self) -> Dataset {
        let features = (0..self.n_features)
            .map(|j| Feature::categorical(&format!("f{j}"), &["0", "1"]))
            .collect();
        let schema = FeatureSchema::new(features, "y", &[]).unwrap();
        let rows = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, (values, class))| Row {
                student_id: format!("r{i}"),
                values: values.iter().map(|v| Value::Cat(v.to_string())).collect(),
                label: Some(self.class_names[*class].clone()),
            })
            .collect();
        Dataset { schema, rows }
    }

    pub fn query_row(&self, values: &[u8]) -> Row {
        Row {
            student_id: "query".to_string(),
            values: values.iter().map(|v| Value::Cat(v.to_string())).collect(),
            label: None,
        }
    }

    /// Classes actually observed, in order of first appearance (the same
    /// order the classifier uses).
    pub fn observed_classes(&self) -> Vec<usize> {
        let mut seen = Vec::new();
        for (_, c) in &self.rows {
            if !seen.contains(c) {
                seen.push(*c);
            }
        }
        seen
    }

    /// Direct Bayes-rule posterior in probability space with the same Laplace
    /// smoothing: P(c | x) proportional to (n_c / n) * prod_j (n_cjv + a) /
    /// (n_c + 2a). Returned in observed-class order.
    pub fn oracle_posterior(&self, query: &[u8], alpha: f64) -> Vec<f64> {
        let observed = self.observed_classes();
        let n = self.rows.len() as f64;
        let mut weights = Vec::with_capacity(observed.len());
        for &class in &observed {
            let class_rows: Vec<&Vec<u8>> = self
                .rows
                .iter()
                .filter(|(_, c)| *c == class)
                .map(|(v, _)| v)
                .collect();
            let n_c = class_rows.len() as f64;
            let mut w = n_c / n;
            for (j, &q) in query.iter().enumerate() {
                let count = class_rows.iter().filter(|v| v[j] == q).count() as f64;
                w *= (count + alpha) / (n_c + 2.0 * alpha);
            }
            weights.push(w);
        }
        let total: f64 = weights.iter().sum();
        if total == 0.0 {
            return vec![1.0 / weights.len() as f64; weights.len()];
        }
        weights.into_iter().map(|w| w / total).collect()
    }
}
