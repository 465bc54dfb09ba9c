//! Feature schemas: declared columns, their kinds, and their domains.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// Name of the identifier column every tabular file carries.
pub const STUDENT_ID: &str = "student_id";

/// Kind and domain of one feature column.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FeatureKind {
    /// Closed set of admissible category strings.
    Categorical { domain: Vec<String> },
    /// Inclusive numeric range; `integral` additionally requires whole numbers.
    Numeric { min: f64, max: f64, integral: bool },
}

impl FeatureKind {
    pub fn is_numeric(&self) -> bool {
        matches!(self, FeatureKind::Numeric { .. })
    }

    pub fn is_categorical(&self) -> bool {
        matches!(self, FeatureKind::Categorical { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Feature {
    pub name: String,
    #[serde(flatten)]
    pub kind: FeatureKind,
}

impl Feature {
    pub fn categorical(name: &str, domain: &[&str]) -> Self {
        Feature {
            name: name.to_string(),
            kind: FeatureKind::Categorical {
                domain: domain.iter().map(|s| s.to_string()).collect(),
            },
        }
    }

    pub fn numeric(name: &str, min: f64, max: f64) -> Self {
        Feature {
            name: name.to_string(),
            kind: FeatureKind::Numeric {
                min,
                max,
                integral: false,
            },
        }
    }

    pub fn integer(name: &str, min: f64, max: f64) -> Self {
        Feature {
            name: name.to_string(),
            kind: FeatureKind::Numeric {
                min,
                max,
                integral: true,
            },
        }
    }
}

/// Declared tabular layout: ordered features, the target column name, and the
/// subset of features that must be present and valid at stage-1 cleaning.
///
/// The `student_id` column is implicit and always required. The label column
/// may not exist yet: cluster labels are produced by the clustering step.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureSchema {
    pub features: Vec<Feature>,
    pub label: String,
    pub required: Vec<String>,
}

impl FeatureSchema {
    pub fn new(features: Vec<Feature>, label: &str, required: &[&str]) -> Result<Self> {
        let schema = FeatureSchema {
            features,
            label: label.to_string(),
            required: required.iter().map(|s| s.to_string()).collect(),
        };
        schema.validate()?;
        Ok(schema)
    }

    fn validate(&self) -> Result<()> {
        let mut seen = std::collections::BTreeSet::new();
        for f in &self.features {
            if !seen.insert(f.name.as_str()) {
                return Err(Error::SchemaMismatch(format!(
                    "duplicate feature name {:?}",
                    f.name
                )));
            }
            match &f.kind {
                FeatureKind::Categorical { domain } => {
                    if domain.is_empty() {
                        return Err(Error::SchemaMismatch(format!(
                            "feature {:?} has an empty categorical domain",
                            f.name
                        )));
                    }
                }
                FeatureKind::Numeric { min, max, .. } => {
                    if !(min <= max) {
                        return Err(Error::SchemaMismatch(format!(
                            "feature {:?} has an inverted range [{min}, {max}]",
                            f.name
                        )));
                    }
                }
            }
        }
        for r in &self.required {
            if self.feature(r).is_none() {
                return Err(Error::SchemaMismatch(format!(
                    "required column {r:?} is not a declared feature"
                )));
            }
        }
        Ok(())
    }

    /// The standard student-semester record layout.
    pub fn student() -> Self {
        FeatureSchema {
            features: vec![
                Feature::integer("academic_year", 1.0, 4.0),
                Feature::integer("semester", 1.0, 8.0),
                Feature::numeric("quiz", 0.0, 100.0),
                Feature::numeric("assignment", 0.0, 100.0),
                Feature::numeric("discussion", 0.0, 100.0),
                Feature::numeric("lab", 0.0, 100.0),
                Feature::numeric("attendance", 0.0, 100.0),
                Feature::numeric("gpa", 0.0, 4.0),
                Feature::categorical("coaching", &["yes", "no"]),
            ],
            label: "cluster_label".to_string(),
            required: vec!["academic_year".to_string(), "gpa".to_string()],
        }
    }

    pub fn feature(&self, name: &str) -> Option<&Feature> {
        self.features.iter().find(|f| f.name == name)
    }

    pub fn feature_index(&self, name: &str) -> Option<usize> {
        self.features.iter().position(|f| f.name == name)
    }

    pub fn is_required(&self, name: &str) -> bool {
        name == STUDENT_ID || self.required.iter().any(|r| r == name)
    }

    /// Column order used in CSV files: `student_id` first, then the features.
    /// The label column, when materialized, goes last.
    pub fn columns(&self) -> Vec<&str> {
        let mut cols = vec![STUDENT_ID];
        cols.extend(self.features.iter().map(|f| f.name.as_str()));
        cols
    }

    /// Hex digest over the feature layout and label name. Two schemas with the
    /// same fingerprint accept the same rows.
    pub fn fingerprint(&self) -> String {
        let mut hasher = Sha256::new();
        for f in &self.features {
            hasher.update(f.name.as_bytes());
            match &f.kind {
                FeatureKind::Categorical { domain } => {
                    hasher.update(b"|cat:");
                    for d in domain {
                        hasher.update(d.as_bytes());
                        hasher.update(b",");
                    }
                }
                FeatureKind::Numeric { min, max, integral } => {
                    hasher.update(b"|num:");
                    hasher.update(min.to_le_bytes());
                    hasher.update(max.to_le_bytes());
                    hasher.update([u8::from(*integral)]);
                }
            }
            hasher.update(b";");
        }
        hasher.update(b"label=");
        hasher.update(self.label.as_bytes());
        let digest = hasher.finalize();
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn student_schema_is_valid() {
        let s = FeatureSchema::student();
        assert!(s.validate().is_ok());
        assert_eq!(s.columns()[0], STUDENT_ID);
        assert_eq!(s.features.len(), 9);
        assert!(s.is_required("student_id"));
        assert!(s.is_required("gpa"));
        assert!(!s.is_required("quiz"));
    }

    #[test]
    fn duplicate_feature_rejected() {
        let err = FeatureSchema::new(
            vec![
                Feature::numeric("x", 0.0, 1.0),
                Feature::numeric("x", 0.0, 1.0),
            ],
            "y",
            &[],
        )
        .unwrap_err();
        assert_eq!(err.kind(), "schema-mismatch");
    }

    #[test]
    fn empty_domain_rejected() {
        let err = FeatureSchema::new(vec![Feature::categorical("c", &[])], "y", &[]).unwrap_err();
        assert_eq!(err.kind(), "schema-mismatch");
    }

    #[test]
    fn inverted_range_rejected() {
        let err = FeatureSchema::new(vec![Feature::numeric("x", 2.0, 1.0)], "y", &[]).unwrap_err();
        assert_eq!(err.kind(), "schema-mismatch");
    }

    #[test]
    fn fingerprint_tracks_layout() {
        let a = FeatureSchema::student();
        let mut b = FeatureSchema::student();
        assert_eq!(a.fingerprint(), b.fingerprint());
        b.features[0] = Feature::integer("academic_year", 1.0, 5.0);
        assert_ne!(a.fingerprint(), b.fingerprint());
    }
}
