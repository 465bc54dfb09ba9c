//! Deterministic synthetic-cohort generation.
//!
//! Produces a raw student table with exact, configurable marginals: total
//! record count, number of missing cells, and how many records fall to each
//! cleaning stage. Complete records draw their GPA uniformly inside a
//! per-year range; other scores follow the GPA with piecewise means so the
//! cohort is not pure noise.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dataset::record::RawRecord;
use crate::dataset::schema::STUDENT_ID;
use crate::error::{Error, Result};

/// Columns whose absence fails stage-1 cleaning.
const REQUIRED_COLUMNS: [&str; 3] = [STUDENT_ID, "academic_year", "gpa"];
/// Columns whose absence fails stage-2 cleaning.
const OPTIONAL_COLUMNS: [&str; 7] = [
    "semester",
    "quiz",
    "assignment",
    "discussion",
    "lab",
    "attendance",
    "coaching",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SynthConfig {
    pub n_records: usize,
    pub missing_cells: usize,
    pub stage1_removals: usize,
    pub stage2_removals: usize,
    /// Inclusive `[min, max]` GPA per academic year 1..=4.
    pub gpa_ranges: [[f64; 2]; 4],
    pub seed: u64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            n_records: 660,
            missing_cells: 160,
            stage1_removals: 69,
            stage2_removals: 91,
            gpa_ranges: [[2.82, 3.195], [2.97, 3.029], [2.97, 2.98], [2.96, 2.985]],
            seed: 42,
        }
    }
}

impl SynthConfig {
    pub fn validate(&self) -> Result<()> {
        let removed = self.stage1_removals + self.stage2_removals;
        if removed >= self.n_records {
            return Err(Error::InvalidConfig(format!(
                "{removed} removals leave no clean records out of {}",
                self.n_records
            )));
        }
        if self.missing_cells < removed {
            return Err(Error::InvalidConfig(format!(
                "{} missing cells cannot mark {removed} removed records",
                self.missing_cells
            )));
        }
        // Removed rows are the only place missing cells may live.
        let columns = REQUIRED_COLUMNS.len() + OPTIONAL_COLUMNS.len();
        let capacity =
            self.stage1_removals * columns + self.stage2_removals * OPTIONAL_COLUMNS.len();
        if self.missing_cells > capacity {
            return Err(Error::InvalidConfig(format!(
                "{} missing cells exceed the {capacity} blankable cells on removed records",
                self.missing_cells
            )));
        }
        for (i, [lo, hi]) in self.gpa_ranges.iter().enumerate() {
            if !(0.0..=4.0).contains(lo) || !(0.0..=4.0).contains(hi) || lo > hi {
                return Err(Error::InvalidConfig(format!(
                    "gpa range for year {} is not a subrange of [0, 4]: [{lo}, {hi}]",
                    i + 1
                )));
            }
        }
        Ok(())
    }
}

/// Uniform draw on a decimal grid so the formatted text stays inside the
/// range exactly. Falls back to the midpoint when the range holds no grid
/// point.
fn draw_decimal(rng: &mut ChaCha8Rng, lo: f64, hi: f64, decimals: u32) -> String {
    let scale = 10f64.powi(decimals as i32);
    let lo_s = (lo * scale).ceil() as i64;
    let hi_s = (hi * scale).floor() as i64;
    if lo_s > hi_s {
        // No grid point inside the range; print the midpoint at full
        // precision so the parsed-back value stays inside.
        return format!("{}", (lo + hi) / 2.0);
    }
    let v = rng.gen_range(lo_s..=hi_s) as f64 / scale;
    format!("{:.*}", decimals as usize, v)
}

/// Piecewise score mean: students in the top of their year's GPA range score
/// higher on average.
fn score_mean(gpa_position: f64) -> f64 {
    if gpa_position < 1.0 / 3.0 {
        55.0
    } else if gpa_position < 2.0 / 3.0 {
        70.0
    } else {
        85.0
    }
}

fn complete_record(rng: &mut ChaCha8Rng, cfg: &SynthConfig, index: usize) -> RawRecord {
    let year: u8 = rng.gen_range(1..=4);
    let semester = 2 * u16::from(year) - 1 + u16::from(rng.gen_range(0..=1u8));
    let [lo, hi] = cfg.gpa_ranges[usize::from(year) - 1];
    let gpa_text = draw_decimal(rng, lo, hi, 3);
    let gpa: f64 = gpa_text.parse().expect("formatted number");
    let position = if hi > lo { (gpa - lo) / (hi - lo) } else { 0.5 };
    let mean = score_mean(position);

    let mut raw = RawRecord::new();
    raw.set(STUDENT_ID, Some(format!("S{:04}", index + 1)));
    raw.set("academic_year", Some(year.to_string()));
    raw.set("semester", Some(semester.to_string()));
    for score in ["quiz", "assignment", "discussion", "lab", "attendance"] {
        raw.set(score, Some(draw_decimal(rng, mean - 15.0, mean + 15.0, 1)));
    }
    raw.set("gpa", Some(gpa_text));
    raw.set(
        "coaching",
        Some(if rng.gen_bool(0.5) { "yes" } else { "no" }.to_string()),
    );
    raw
}

/// Generates the raw cohort. Deterministic in the configured seed; cleaning
/// the output reproduces the configured stage counts and missing-cell total
/// exactly.
pub fn generate(cfg: &SynthConfig) -> Result<Vec<RawRecord>> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);

    let mut records: Vec<RawRecord> = (0..cfg.n_records)
        .map(|i| complete_record(&mut rng, cfg, i))
        .collect();

    let mut order: Vec<usize> = (0..cfg.n_records).collect();
    order.shuffle(&mut rng);
    let stage1_rows = &order[..cfg.stage1_removals];
    let stage2_rows = &order[cfg.stage1_removals..cfg.stage1_removals + cfg.stage2_removals];

    // One guaranteed blank marks each removed row for its stage.
    for &i in stage1_rows {
        let col = REQUIRED_COLUMNS[rng.gen_range(0..REQUIRED_COLUMNS.len())];
        records[i].set(col, None);
    }
    for &i in stage2_rows {
        let col = OPTIONAL_COLUMNS[rng.gen_range(0..OPTIONAL_COLUMNS.len())];
        records[i].set(col, None);
    }

    // Spread any surplus blanks over cells that cannot change a row's stage:
    // stage-1 rows may lose any cell, stage-2 rows only optional cells.
    let surplus = cfg.missing_cells - cfg.stage1_removals - cfg.stage2_removals;
    if surplus > 0 {
        let mut candidates: Vec<(usize, &str)> = Vec::new();
        for &i in stage1_rows {
            for col in REQUIRED_COLUMNS.iter().chain(OPTIONAL_COLUMNS.iter()) {
                if !records[i].is_missing(col) {
                    candidates.push((i, col));
                }
            }
        }
        for &i in stage2_rows {
            for col in &OPTIONAL_COLUMNS {
                if !records[i].is_missing(col) {
                    candidates.push((i, col));
                }
            }
        }
        candidates.shuffle(&mut rng);
        for &(i, col) in candidates.iter().take(surplus) {
            records[i].set(col, None);
        }
    }
    Ok(records)
}
