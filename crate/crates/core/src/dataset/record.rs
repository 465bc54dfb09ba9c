//! Record representations: raw text cells, typed cell values, and the
//! validated student-semester record.

use std::collections::BTreeMap;
use std::fmt;

use crate::dataset::schema::{FeatureKind, FeatureSchema, STUDENT_ID};
use crate::error::{Error, Result};

/// One not-yet-validated row: column name to optional text. An absent key and
/// an explicit `None` both mean the cell is missing.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RawRecord {
    pub values: BTreeMap<String, Option<String>>,
}

impl RawRecord {
    pub fn new() -> Self {
        Self::default()
    }

    /// The cell text, if present.
    pub fn get(&self, column: &str) -> Option<&str> {
        self.values.get(column).and_then(|v| v.as_deref())
    }

    pub fn set(&mut self, column: &str, value: Option<String>) {
        self.values.insert(column.to_string(), value);
    }

    pub fn is_missing(&self, column: &str) -> bool {
        self.get(column).is_none()
    }
}

/// A typed cell value after cleaning.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Num(f64),
    Cat(String),
}

impl Value {
    pub fn as_num(&self) -> Option<f64> {
        match self {
            Value::Num(x) => Some(*x),
            Value::Cat(_) => None,
        }
    }

    pub fn as_cat(&self) -> Option<&str> {
        match self {
            Value::Num(_) => None,
            Value::Cat(s) => Some(s),
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Num(x) => write!(f, "{x}"),
            Value::Cat(s) => write!(f, "{s}"),
        }
    }
}

/// A clean row: identifier, one value per schema feature (same order), and an
/// optional label (e.g. a cluster assignment).
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub student_id: String,
    pub values: Vec<Value>,
    pub label: Option<String>,
}

impl Row {
    pub fn value(&self, schema: &FeatureSchema, feature: &str) -> Option<&Value> {
        schema
            .feature_index(feature)
            .and_then(|i| self.values.get(i))
    }
}

/// A fully validated student-semester record. This type only exists
/// post-cleaning: every field is present and within bounds.
#[derive(Debug, Clone, PartialEq)]
pub struct StudentRecord {
    pub student_id: String,
    pub academic_year: u8,
    pub semester: u8,
    pub quiz: f64,
    pub assignment: f64,
    pub discussion: f64,
    pub lab: f64,
    pub attendance: f64,
    pub gpa: f64,
    pub coaching: bool,
    pub cluster_label: Option<String>,
}

impl StudentRecord {
    /// Bounds and cross-field checks: scores in [0,100], GPA in [0,4],
    /// semester consistent with the academic year (2y-1 or 2y).
    pub fn validate(&self) -> Result<()> {
        let in_range = |name: &str, v: f64, lo: f64, hi: f64| -> Result<()> {
            if v >= lo && v <= hi {
                Ok(())
            } else {
                Err(Error::InvalidArgument(format!(
                    "{name} = {v} outside [{lo}, {hi}]"
                )))
            }
        };
        if self.student_id.is_empty() {
            return Err(Error::InvalidArgument("empty student_id".to_string()));
        }
        in_range("academic_year", f64::from(self.academic_year), 1.0, 4.0)?;
        in_range("semester", f64::from(self.semester), 1.0, 8.0)?;
        in_range("quiz", self.quiz, 0.0, 100.0)?;
        in_range("assignment", self.assignment, 0.0, 100.0)?;
        in_range("discussion", self.discussion, 0.0, 100.0)?;
        in_range("lab", self.lab, 0.0, 100.0)?;
        in_range("attendance", self.attendance, 0.0, 100.0)?;
        in_range("gpa", self.gpa, 0.0, 4.0)?;
        let y = u16::from(self.academic_year);
        let s = u16::from(self.semester);
        if s != 2 * y - 1 && s != 2 * y {
            return Err(Error::InvalidArgument(format!(
                "semester {s} inconsistent with academic year {y}"
            )));
        }
        Ok(())
    }

    /// Builds the typed record from a clean row under the standard student
    /// schema. Fails if the schema was retyped (e.g. after discretization).
    pub fn from_row(schema: &FeatureSchema, row: &Row) -> Result<Self> {
        let num = |name: &str| -> Result<f64> {
            row.value(schema, name)
                .and_then(Value::as_num)
                .ok_or_else(|| {
                    Error::InvalidArgument(format!(
                        "feature {name:?} is not numeric in this schema"
                    ))
                })
        };
        let cat = |name: &str| -> Result<String> {
            row.value(schema, name)
                .and_then(Value::as_cat)
                .map(str::to_string)
                .ok_or_else(|| {
                    Error::InvalidArgument(format!(
                        "feature {name:?} is not categorical in this schema"
                    ))
                })
        };
        let record = StudentRecord {
            student_id: row.student_id.clone(),
            academic_year: num("academic_year")? as u8,
            semester: num("semester")? as u8,
            quiz: num("quiz")?,
            assignment: num("assignment")?,
            discussion: num("discussion")?,
            lab: num("lab")?,
            attendance: num("attendance")?,
            gpa: num("gpa")?,
            coaching: cat("coaching")? == "yes",
            cluster_label: row.label.clone(),
        };
        record.validate()?;
        Ok(record)
    }

    /// Projects the typed record onto a schema's feature order.
    pub fn to_row(&self, schema: &FeatureSchema) -> Result<Row> {
        let mut values = Vec::with_capacity(schema.features.len());
        for f in &schema.features {
            let v = match f.name.as_str() {
                "academic_year" => Value::Num(f64::from(self.academic_year)),
                "semester" => Value::Num(f64::from(self.semester)),
                "quiz" => Value::Num(self.quiz),
                "assignment" => Value::Num(self.assignment),
                "discussion" => Value::Num(self.discussion),
                "lab" => Value::Num(self.lab),
                "attendance" => Value::Num(self.attendance),
                "gpa" => Value::Num(self.gpa),
                "coaching" => Value::Cat(if self.coaching { "yes" } else { "no" }.to_string()),
                other => {
                    return Err(Error::InvalidArgument(format!(
                        "student records have no feature named {other:?}"
                    )))
                }
            };
            if let FeatureKind::Categorical { .. } = f.kind {
                if v.as_cat().is_none() {
                    return Err(Error::InvalidArgument(format!(
                        "schema expects {:?} to be categorical",
                        f.name
                    )));
                }
            }
            values.push(v);
        }
        Ok(Row {
            student_id: self.student_id.clone(),
            values,
            label: self.cluster_label.clone(),
        })
    }

    /// Text form of the record, as it would appear in a raw CSV file.
    pub fn to_raw(&self, schema: &FeatureSchema) -> Result<RawRecord> {
        let row = self.to_row(schema)?;
        let mut raw = RawRecord::new();
        raw.set(STUDENT_ID, Some(self.student_id.clone()));
        for (f, v) in schema.features.iter().zip(&row.values) {
            raw.set(&f.name, Some(v.to_string()));
        }
        if let Some(label) = &self.cluster_label {
            raw.set(&schema.label, Some(label.clone()));
        }
        Ok(raw)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> StudentRecord {
        StudentRecord {
            student_id: "S0001".to_string(),
            academic_year: 2,
            semester: 3,
            quiz: 70.0,
            assignment: 80.0,
            discussion: 60.0,
            lab: 75.0,
            attendance: 90.0,
            gpa: 3.0,
            coaching: true,
            cluster_label: None,
        }
    }

    #[test]
    fn valid_record_passes() {
        assert!(sample().validate().is_ok());
    }

    #[test]
    fn semester_must_match_year() {
        let mut r = sample();
        r.semester = 5; // year 2 allows only 3 or 4
        assert!(r.validate().is_err());
        r.semester = 4;
        assert!(r.validate().is_ok());
    }

    #[test]
    fn out_of_range_gpa_rejected() {
        let mut r = sample();
        r.gpa = 4.5;
        assert!(r.validate().is_err());
    }

    #[test]
    fn row_round_trip() {
        let schema = FeatureSchema::student();
        let r = sample();
        let row = r.to_row(&schema).unwrap();
        let back = StudentRecord::from_row(&schema, &row).unwrap();
        assert_eq!(r, back);
    }
}
