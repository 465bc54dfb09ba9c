//! Two-stage missing-value cleaning.
//!
//! Stage 1 drops records whose identifier or required fields are missing or
//! invalid; stage 2 drops records with any other missing or invalid cell.
//! Cleaning never fails: it only removes, and reports what it removed.

use serde::{Deserialize, Serialize};

use crate::dataset::record::{RawRecord, Row, Value};
use crate::dataset::schema::{Feature, FeatureKind, FeatureSchema, STUDENT_ID};
use crate::dataset::Dataset;

/// Audited counts for one cleaning pass. The counts always reconcile:
/// `input_count - stage1_removed = stage1_remaining` and
/// `stage1_remaining - stage2_removed = clean_count`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CleaningReport {
    pub input_count: usize,
    pub stage1_removed: usize,
    pub stage1_remaining: usize,
    pub stage2_removed: usize,
    pub clean_count: usize,
    pub missing_cells: usize,
}

enum Cell {
    Missing,
    Invalid,
    Ok(Value),
}

fn check_cell(feature: &Feature, text: Option<&str>) -> Cell {
    let Some(text) = text else {
        return Cell::Missing;
    };
    match &feature.kind {
        FeatureKind::Categorical { domain } => {
            if domain.iter().any(|d| d == text) {
                Cell::Ok(Value::Cat(text.to_string()))
            } else {
                Cell::Invalid
            }
        }
        FeatureKind::Numeric { min, max, integral } => match text.parse::<f64>() {
            // Unparseable numeric text counts as missing, same as at parse time.
            Err(_) => Cell::Missing,
            Ok(v) => {
                if v < *min || v > *max || (*integral && v.fract() != 0.0) {
                    Cell::Invalid
                } else {
                    Cell::Ok(Value::Num(v))
                }
            }
        },
    }
}

/// Cross-field consistency for the student layout: a semester belongs to its
/// academic year (semester 2y-1 or 2y). Applies only when both columns exist.
fn cross_fields_consistent(schema: &FeatureSchema, values: &[Value]) -> bool {
    let (Some(yi), Some(si)) = (
        schema.feature_index("academic_year"),
        schema.feature_index("semester"),
    ) else {
        return true;
    };
    match (values[yi].as_num(), values[si].as_num()) {
        (Some(y), Some(s)) => s == 2.0 * y - 1.0 || s == 2.0 * y,
        _ => true,
    }
}

/// Runs both cleaning stages and reports the counts.
pub fn clean(raws: &[RawRecord], schema: &FeatureSchema) -> (Dataset, CleaningReport) {
    let mut missing_cells = 0usize;
    let mut stage1_removed = 0usize;
    let mut stage2_removed = 0usize;
    let mut rows = Vec::new();

    for raw in raws {
        let id = raw.get(STUDENT_ID);
        if id.is_none() {
            missing_cells += 1;
        }

        let mut any_required_bad = id.is_none();
        let mut any_other_bad = false;
        let mut values = Vec::with_capacity(schema.features.len());
        let mut complete = true;

        for feature in &schema.features {
            let cell = check_cell(feature, raw.get(&feature.name));
            if matches!(cell, Cell::Missing) {
                missing_cells += 1;
            }
            match cell {
                Cell::Ok(v) => values.push(v),
                Cell::Missing | Cell::Invalid => {
                    complete = false;
                    if schema.is_required(&feature.name) {
                        any_required_bad = true;
                    } else {
                        any_other_bad = true;
                    }
                    values.push(Value::Num(f64::NAN)); // placeholder, row is dropped
                }
            }
        }

        if any_required_bad {
            stage1_removed += 1;
            continue;
        }
        if any_other_bad || !complete || !cross_fields_consistent(schema, &values) {
            stage2_removed += 1;
            continue;
        }
        rows.push(Row {
            student_id: id.expect("checked above").to_string(),
            values,
            label: raw.get(&schema.label).map(str::to_string),
        });
    }

    let input_count = raws.len();
    let stage1_remaining = input_count - stage1_removed;
    let clean_count = stage1_remaining - stage2_removed;
    let report = CleaningReport {
        input_count,
        stage1_removed,
        stage1_remaining,
        stage2_removed,
        clean_count,
        missing_cells,
    };
    (
        Dataset {
            schema: schema.clone(),
            rows,
        },
        report,
    )
}
