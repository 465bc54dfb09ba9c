//! Banded discretization of numeric features.
//!
//! A band spec lists, per numeric feature, contiguous non-overlapping
//! intervals that tile the feature's declared range. Intervals are
//! inclusive-exclusive except the last, which includes the top edge.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::dataset::record::Value;
use crate::dataset::schema::{Feature, FeatureKind};
use crate::dataset::Dataset;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Band {
    pub label: String,
    pub lo: f64,
    pub hi: f64,
}

impl Band {
    pub fn new(label: &str, lo: f64, hi: f64) -> Self {
        Band {
            label: label.to_string(),
            lo,
            hi,
        }
    }
}

/// Feature name to ordered bands. Features absent from the map keep their
/// numeric kind.
pub type BandSpec = BTreeMap<String, Vec<Band>>;

fn three_level(lo_hi: (f64, f64), cuts: (f64, f64)) -> Vec<Band> {
    vec![
        Band::new("low", lo_hi.0, cuts.0),
        Band::new("medium", cuts.0, cuts.1),
        Band::new("high", cuts.1, lo_hi.1),
    ]
}

/// Default bands: GPA splits at 2.5 and 3.0; percentage-scale features split
/// at 60 and 85. Year and semester stay numeric.
pub fn default_bands() -> BandSpec {
    let mut spec = BandSpec::new();
    spec.insert("gpa".to_string(), three_level((0.0, 4.0), (2.5, 3.0)));
    for name in ["quiz", "assignment", "discussion", "lab", "attendance"] {
        spec.insert(name.to_string(), three_level((0.0, 100.0), (60.0, 85.0)));
    }
    spec
}

fn validate_bands(feature: &Feature, bands: &[Band]) -> Result<()> {
    let err = |detail: String| Error::InvalidBands {
        feature: feature.name.clone(),
        detail,
    };
    let FeatureKind::Numeric { min, max, .. } = &feature.kind else {
        return Err(err("feature is not numeric".to_string()));
    };
    if bands.is_empty() {
        return Err(err("no bands given".to_string()));
    }
    let mut labels = std::collections::BTreeSet::new();
    for b in bands {
        if !(b.lo < b.hi) {
            return Err(err(format!(
                "band {:?} has empty interval [{}, {})",
                b.label, b.lo, b.hi
            )));
        }
        if !labels.insert(b.label.as_str()) {
            return Err(err(format!("duplicate band label {:?}", b.label)));
        }
    }
    if bands[0].lo != *min {
        return Err(err(format!(
            "bands start at {} but the feature range starts at {min}",
            bands[0].lo
        )));
    }
    if bands[bands.len() - 1].hi != *max {
        return Err(err(format!(
            "bands end at {} but the feature range ends at {max}",
            bands[bands.len() - 1].hi
        )));
    }
    for pair in bands.windows(2) {
        if pair[0].hi != pair[1].lo {
            return Err(err(format!(
                "gap or overlap between {:?} (ends {}) and {:?} (starts {})",
                pair[0].label, pair[0].hi, pair[1].label, pair[1].lo
            )));
        }
    }
    Ok(())
}

fn band_label(bands: &[Band], v: f64) -> Option<&str> {
    let last = bands.len() - 1;
    for (i, b) in bands.iter().enumerate() {
        let inside = if i == last {
            v >= b.lo && v <= b.hi // top edge inclusive
        } else {
            v >= b.lo && v < b.hi
        };
        if inside {
            return Some(&b.label);
        }
    }
    None
}

/// Replaces banded numeric features with categorical band labels. Row count
/// and order are preserved; the schema is retyped accordingly.
pub fn discretize(ds: &Dataset, spec: &BandSpec) -> Result<Dataset> {
    let mut banded: Vec<(usize, &Vec<Band>)> = Vec::new();
    for (name, bands) in spec {
        let Some(idx) = ds.schema.feature_index(name) else {
            // Band entries for columns the dataset does not carry are ignored,
            // so one default spec can serve schemas with fewer features.
            continue;
        };
        validate_bands(&ds.schema.features[idx], bands)?;
        banded.push((idx, bands));
    }

    let mut schema = ds.schema.clone();
    for (idx, bands) in &banded {
        schema.features[*idx].kind = FeatureKind::Categorical {
            domain: bands.iter().map(|b| b.label.clone()).collect(),
        };
    }

    let mut rows = Vec::with_capacity(ds.rows.len());
    for row in &ds.rows {
        let mut new_row = row.clone();
        for (idx, bands) in &banded {
            let v = row.values[*idx].as_num().ok_or_else(|| {
                Error::InvalidArgument(format!(
                    "feature {:?} holds a non-numeric value",
                    ds.schema.features[*idx].name
                ))
            })?;
            let label = band_label(bands, v).ok_or_else(|| {
                Error::InvalidArgument(format!(
                    "value {v} outside the banded range of {:?}",
                    ds.schema.features[*idx].name
                ))
            })?;
            new_row.values[*idx] = Value::Cat(label.to_string());
        }
        rows.push(new_row);
    }
    Ok(Dataset { schema, rows })
}
