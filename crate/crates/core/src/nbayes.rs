//! Hybrid naive Bayes classifier.
//!
//! Class priors are empirical frequencies. Categorical features use
//! Laplace-smoothed conditional tables over their closed domains; numeric
//! features use per-class Gaussian densities with an unbiased variance
//! estimate clamped to a floor. All likelihood work happens in log space and
//! the posterior is normalized before it is returned.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::dataset::record::{Row, Value};
use crate::dataset::schema::{FeatureKind, FeatureSchema};
use crate::dataset::Dataset;
use crate::error::{Error, Result};

const MODEL_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NaiveBayesParams {
    /// Laplace pseudo-count for categorical tables.
    pub alpha: f64,
    /// Lower clamp for Gaussian variances.
    pub variance_floor: f64,
}

impl Default for NaiveBayesParams {
    fn default() -> Self {
        NaiveBayesParams {
            alpha: 1.0,
            variance_floor: 1e-9,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaussianParams {
    pub mean: f64,
    pub variance: f64,
}

/// Fitted conditional distribution of one feature.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum FeatureModel {
    Categorical {
        name: String,
        domain: Vec<String>,
        /// `probs[class][category]`, each row summing to 1.
        probs: Vec<Vec<f64>>,
    },
    Gaussian {
        name: String,
        /// One `(mean, variance)` per class.
        params: Vec<GaussianParams>,
    },
}

impl FeatureModel {
    pub fn name(&self) -> &str {
        match self {
            FeatureModel::Categorical { name, .. } | FeatureModel::Gaussian { name, .. } => name,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NaiveBayesModel {
    pub version: u32,
    pub schema_fingerprint: String,
    pub label: String,
    /// Classes in order of first appearance in the training data; this order
    /// also breaks prediction ties.
    pub classes: Vec<String>,
    pub priors: Vec<f64>,
    pub features: Vec<FeatureModel>,
    pub alpha: f64,
    pub variance_floor: f64,
}

/// Resolves the target column: either the schema's label column or any
/// categorical feature named explicitly.
fn extract_targets(train: &Dataset, label: &str) -> Result<(Vec<String>, Vec<usize>)> {
    let all: Vec<usize> = (0..train.schema.features.len()).collect();
    if label == train.schema.label {
        let mut targets = Vec::with_capacity(train.rows.len());
        for (i, row) in train.rows.iter().enumerate() {
            match &row.label {
                Some(l) => targets.push(l.clone()),
                None => {
                    return Err(Error::InsufficientData(format!(
                        "row {i} has no {label:?} value; cluster the data first"
                    )))
                }
            }
        }
        return Ok((targets, all));
    }
    match train.schema.feature(label) {
        Some(f) if f.kind.is_categorical() => {
            let idx = train.schema.feature_index(label).expect("feature exists");
            let targets = train
                .rows
                .iter()
                .map(|r| {
                    r.values[idx]
                        .as_cat()
                        .expect("categorical by schema")
                        .to_string()
                })
                .collect();
            let rest = all.into_iter().filter(|&i| i != idx).collect();
            Ok((targets, rest))
        }
        Some(_) => Err(Error::InvalidArgument(format!(
            "label column {label:?} is numeric; discretize it first"
        ))),
        None => Err(Error::InvalidArgument(format!(
            "label column {label:?} not found"
        ))),
    }
}

impl NaiveBayesModel {
    /// Fits priors and per-feature conditionals on a clean dataset.
    pub fn fit(train: &Dataset, label: &str, alpha: f64, variance_floor: f64) -> Result<Self> {
        if train.rows.is_empty() {
            return Err(Error::InsufficientData("empty training set".to_string()));
        }
        if alpha < 0.0 {
            return Err(Error::InvalidArgument(format!(
                "alpha must be >= 0, got {alpha}"
            )));
        }
        if variance_floor <= 0.0 {
            return Err(Error::InvalidArgument(format!(
                "variance floor must be > 0, got {variance_floor}"
            )));
        }

        let (targets, feature_indices) = extract_targets(train, label)?;

        let mut classes: Vec<String> = Vec::new();
        let mut class_of = Vec::with_capacity(targets.len());
        for t in &targets {
            let idx = match classes.iter().position(|c| c == t) {
                Some(i) => i,
                None => {
                    classes.push(t.clone());
                    classes.len() - 1
                }
            };
            class_of.push(idx);
        }
        let n = train.rows.len() as f64;
        let mut class_counts = vec![0usize; classes.len()];
        for &c in &class_of {
            class_counts[c] += 1;
        }
        let priors: Vec<f64> = class_counts.iter().map(|&c| c as f64 / n).collect();

        let mut features = Vec::with_capacity(feature_indices.len());
        for &fi in &feature_indices {
            let feature = &train.schema.features[fi];
            match &feature.kind {
                FeatureKind::Categorical { domain } => {
                    let mut counts = vec![vec![0usize; domain.len()]; classes.len()];
                    for (row, &c) in train.rows.iter().zip(&class_of) {
                        let v = row.values[fi].as_cat().ok_or_else(|| {
                            Error::InvalidArgument(format!(
                                "feature {:?} holds a non-categorical value",
                                feature.name
                            ))
                        })?;
                        let di = domain.iter().position(|d| d == v).ok_or_else(|| {
                            Error::UnknownCategory {
                                feature: feature.name.clone(),
                                value: v.to_string(),
                            }
                        })?;
                        counts[c][di] += 1;
                    }
                    let probs = counts
                        .iter()
                        .zip(&class_counts)
                        .map(|(row, &nc)| {
                            row.iter()
                                .map(|&cnt| {
                                    (cnt as f64 + alpha) / (nc as f64 + alpha * domain.len() as f64)
                                })
                                .collect()
                        })
                        .collect();
                    features.push(FeatureModel::Categorical {
                        name: feature.name.clone(),
                        domain: domain.clone(),
                        probs,
                    });
                }
                FeatureKind::Numeric { .. } => {
                    let mut params = Vec::with_capacity(classes.len());
                    for class in 0..classes.len() {
                        let values: Vec<f64> = train
                            .rows
                            .iter()
                            .zip(&class_of)
                            .filter(|(_, &c)| c == class)
                            .map(|(row, _)| {
                                row.values[fi].as_num().ok_or_else(|| {
                                    Error::InvalidArgument(format!(
                                        "feature {:?} holds a non-numeric value",
                                        feature.name
                                    ))
                                })
                            })
                            .collect::<Result<_>>()?;
                        let m = values.iter().sum::<f64>() / values.len() as f64;
                        // Unbiased sample variance; a single observation falls
                        // back to the floor rather than failing.
                        let variance = if values.len() >= 2 {
                            let ss: f64 = values.iter().map(|v| (v - m) * (v - m)).sum();
                            (ss / (values.len() as f64 - 1.0)).max(variance_floor)
                        } else {
                            variance_floor
                        };
                        params.push(GaussianParams { mean: m, variance });
                    }
                    features.push(FeatureModel::Gaussian {
                        name: feature.name.clone(),
                        params,
                    });
                }
            }
        }

        Ok(NaiveBayesModel {
            version: MODEL_VERSION,
            schema_fingerprint: train.schema.fingerprint(),
            label: label.to_string(),
            classes,
            priors,
            features,
            alpha,
            variance_floor,
        })
    }

    /// Unnormalized per-class log scores: log prior plus log likelihoods.
    pub fn log_scores(&self, schema: &FeatureSchema, row: &Row) -> Result<Vec<f64>> {
        let mut scores: Vec<f64> = self.priors.iter().map(|p| p.ln()).collect();
        for fm in &self.features {
            let value = row.value(schema, fm.name()).ok_or_else(|| {
                Error::InvalidArgument(format!(
                    "record provides no value for feature {:?}",
                    fm.name()
                ))
            })?;
            match (fm, value) {
                (
                    FeatureModel::Categorical {
                        name,
                        domain,
                        probs,
                    },
                    Value::Cat(v),
                ) => {
                    let di = domain.iter().position(|d| d == v).ok_or_else(|| {
                        Error::UnknownCategory {
                            feature: name.clone(),
                            value: v.clone(),
                        }
                    })?;
                    for (s, p) in scores.iter_mut().zip(probs) {
                        *s += p[di].ln();
                    }
                }
                (FeatureModel::Gaussian { params, .. }, Value::Num(x)) => {
                    for (s, g) in scores.iter_mut().zip(params) {
                        *s += log_gaussian_density(*x, g.mean, g.variance);
                    }
                }
                (fm, _) => {
                    return Err(Error::InvalidArgument(format!(
                        "value kind mismatch for feature {:?}",
                        fm.name()
                    )))
                }
            }
        }
        Ok(scores)
    }

    /// Normalized class posterior for one record; sums to 1.
    pub fn posterior(&self, schema: &FeatureSchema, row: &Row) -> Result<Vec<f64>> {
        Ok(normalize_log_scores(&self.log_scores(schema, row)?))
    }

    /// Most probable class; ties break to the earliest class.
    pub fn predict(&self, schema: &FeatureSchema, row: &Row) -> Result<&str> {
        let posterior = self.posterior(schema, row)?;
        let mut best = 0;
        for (i, &p) in posterior.iter().enumerate() {
            if p > posterior[best] {
                best = i;
            }
        }
        Ok(&self.classes[best])
    }

    pub fn predict_dataset(&self, ds: &Dataset) -> Result<Vec<String>> {
        ds.rows
            .iter()
            .map(|row| self.predict(&ds.schema, row).map(str::to_string))
            .collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("model serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let model: NaiveBayesModel = serde_json::from_str(text)
            .map_err(|e| Error::ModelFormat(format!("cannot decode model: {e}")))?;
        model.validate()?;
        Ok(model)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let mut text = self.to_json();
        text.push('\n');
        std::fs::write(path, text).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }

    fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::ModelFormat(msg));
        if self.version != MODEL_VERSION {
            return fail(format!(
                "unsupported model version {} (expected {MODEL_VERSION})",
                self.version
            ));
        }
        if self.classes.is_empty() || self.classes.len() != self.priors.len() {
            return fail("class and prior lists are inconsistent".to_string());
        }
        let prior_sum: f64 = self.priors.iter().sum();
        if (prior_sum - 1.0).abs() > 1e-9 {
            return fail(format!("priors sum to {prior_sum}, expected 1"));
        }
        for fm in &self.features {
            match fm {
                FeatureModel::Categorical {
                    name,
                    domain,
                    probs,
                } => {
                    if probs.len() != self.classes.len() {
                        return fail(format!("feature {name:?} has a table per-class mismatch"));
                    }
                    for row in probs {
                        if row.len() != domain.len() {
                            return fail(format!("feature {name:?} table width mismatch"));
                        }
                        let s: f64 = row.iter().sum();
                        if (s - 1.0).abs() > 1e-9 {
                            return fail(format!("feature {name:?} table sums to {s}"));
                        }
                    }
                }
                FeatureModel::Gaussian { name, params } => {
                    if params.len() != self.classes.len() {
                        return fail(format!("feature {name:?} has a params per-class mismatch"));
                    }
                    for g in params {
                        if g.variance < self.variance_floor {
                            return fail(format!(
                                "feature {name:?} variance {} below floor {}",
                                g.variance, self.variance_floor
                            ));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

fn log_gaussian_density(x: f64, mean: f64, variance: f64) -> f64 {
    -0.5 * (2.0 * std::f64::consts::PI * variance).ln() - (x - mean) * (x - mean) / (2.0 * variance)
}

/// Exponentiates log scores against their maximum and normalizes. A shift
/// common to every score cancels out. All-infinite scores (possible with
/// alpha = 0 and an unseen combination) yield a uniform posterior.
pub fn normalize_log_scores(scores: &[f64]) -> Vec<f64> {
    let max = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !max.is_finite() {
        return vec![1.0 / scores.len() as f64; scores.len()];
    }
    let exps: Vec<f64> = scores.iter().map(|s| (s - max).exp()).collect();
    let sum: f64 = exps.iter().sum();
    exps.into_iter().map(|e| e / sum).collect()
}
