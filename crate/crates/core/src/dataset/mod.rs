//! Tabular student data: schemas, records, CSV ingestion, cleaning,
//! discretization, and splitting.

pub mod clean;
pub mod csv;
pub mod discretize;
pub mod record;
pub mod schema;
pub mod split;

pub use clean::{clean, CleaningReport};
pub use csv::{parse_csv, parse_csv_str, read_raw_csv};
pub use discretize::{default_bands, discretize, Band, BandSpec};
pub use record::{RawRecord, Row, StudentRecord, Value};
pub use schema::{Feature, FeatureKind, FeatureSchema, STUDENT_ID};
pub use split::split;

use crate::error::Result;

/// An immutable typed table: a schema plus rows in insertion order.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub schema: FeatureSchema,
    pub rows: Vec<Row>,
}

impl Dataset {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Typed views of the rows; requires the standard student layout.
    pub fn student_records(&self) -> Result<Vec<StudentRecord>> {
        self.rows
            .iter()
            .map(|r| StudentRecord::from_row(&self.schema, r))
            .collect()
    }

    /// Text form of every row, for re-cleaning or raw CSV emission.
    pub fn to_raw_records(&self) -> Result<Vec<RawRecord>> {
        self.rows
            .iter()
            .map(|row| {
                let mut raw = RawRecord::new();
                raw.set(STUDENT_ID, Some(row.student_id.clone()));
                for (f, v) in self.schema.features.iter().zip(&row.values) {
                    raw.set(&f.name, Some(v.to_string()));
                }
                if let Some(label) = &row.label {
                    raw.set(&self.schema.label, Some(label.clone()));
                }
                Ok(raw)
            })
            .collect()
    }

    /// A projection onto the named features, keeping ids and labels.
    pub fn select_features(&self, names: &[String]) -> Result<Dataset> {
        let mut features = Vec::with_capacity(names.len());
        let mut indices = Vec::with_capacity(names.len());
        for name in names {
            let idx = self.schema.feature_index(name).ok_or_else(|| {
                crate::error::Error::InvalidArgument(format!("unknown feature {name:?}"))
            })?;
            if indices.contains(&idx) {
                return Err(crate::error::Error::InvalidArgument(format!(
                    "feature {name:?} listed twice"
                )));
            }
            features.push(self.schema.features[idx].clone());
            indices.push(idx);
        }
        let schema = FeatureSchema::new(features, &self.schema.label, &[])?;
        let rows = self
            .rows
            .iter()
            .map(|r| Row {
                student_id: r.student_id.clone(),
                values: indices.iter().map(|&i| r.values[i].clone()).collect(),
                label: r.label.clone(),
            })
            .collect();
        Ok(Dataset { schema, rows })
    }

    /// A copy with one label per row (lengths must match).
    pub fn with_labels(&self, labels: &[String]) -> Result<Dataset> {
        if labels.len() != self.rows.len() {
            return Err(crate::error::Error::InvalidArgument(format!(
                "{} labels for {} rows",
                labels.len(),
                self.rows.len()
            )));
        }
        let rows = self
            .rows
            .iter()
            .zip(labels)
            .map(|(r, l)| Row {
                student_id: r.student_id.clone(),
                values: r.values.clone(),
                label: Some(l.clone()),
            })
            .collect();
        Ok(Dataset {
            schema: self.schema.clone(),
            rows,
        })
    }
}
