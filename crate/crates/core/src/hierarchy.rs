//! Hierarchical overall ranking.
//!
//! Quiz, assignment, discussion, and lab scores combine into a knowledge
//! level; attendance maps to a punctuality level; knowledge and punctuality
//! combine into performance; performance and coaching combine into the
//! overall ranking. Every combination is a weighted average of level
//! encodings thresholded back onto the three-level scale, so raising any
//! input can never lower a downstream level.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::dataset::record::StudentRecord;
use crate::dataset::Dataset;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    Low,
    Medium,
    High,
}

impl Level {
    pub const ALL: [Level; 3] = [Level::Low, Level::Medium, Level::High];

    pub fn as_str(self) -> &'static str {
        match self {
            Level::Low => "low",
            Level::Medium => "medium",
            Level::High => "high",
        }
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct KnowledgeWeights {
    pub quiz: f64,
    pub assignment: f64,
    pub discussion: f64,
    pub lab: f64,
}

impl Default for KnowledgeWeights {
    fn default() -> Self {
        // Quizzes carry 15% of the course grade; the rest splits evenly.
        let rest = (1.0 - 0.15) / 3.0;
        KnowledgeWeights {
            quiz: 0.15,
            assignment: rest,
            discussion: rest,
            lab: rest,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HierarchyConfig {
    pub knowledge_weights: KnowledgeWeights,
    /// Attendance below the first cutoff is low; above the second is high;
    /// between them (inclusive) is medium.
    pub punctuality_thresholds: [f64; 2],
    /// Weights for (knowledge, punctuality).
    pub performance_weights: [f64; 2],
    /// Weights for (performance, coaching).
    pub overall_weights: [f64; 2],
    /// Numeric encoding of (low, medium, high).
    pub level_encoding: [f64; 3],
    /// Combined scores below the first cutoff are low, below the second are
    /// medium, otherwise high.
    pub level_cutoffs: [f64; 2],
}

impl Default for HierarchyConfig {
    fn default() -> Self {
        HierarchyConfig {
            knowledge_weights: KnowledgeWeights::default(),
            punctuality_thresholds: [60.0, 85.0],
            performance_weights: [0.5, 0.5],
            overall_weights: [0.7, 0.3],
            level_encoding: [0.0, 0.5, 1.0],
            level_cutoffs: [0.4, 0.7],
        }
    }
}

impl HierarchyConfig {
    pub fn validate(&self) -> Result<()> {
        let check_sum = |name: &str, weights: &[f64]| -> Result<()> {
            if weights.iter().any(|&w| w < 0.0) {
                return Err(Error::InvalidConfig(format!(
                    "{name} has a negative weight"
                )));
            }
            let s: f64 = weights.iter().sum();
            if (s - 1.0).abs() > 1e-9 {
                return Err(Error::InvalidConfig(format!(
                    "{name} sums to {s}, expected 1"
                )));
            }
            Ok(())
        };
        let kw = self.knowledge_weights;
        check_sum(
            "knowledge_weights",
            &[kw.quiz, kw.assignment, kw.discussion, kw.lab],
        )?;
        check_sum("performance_weights", &self.performance_weights)?;
        check_sum("overall_weights", &self.overall_weights)?;
        if !(self.punctuality_thresholds[0] < self.punctuality_thresholds[1]) {
            return Err(Error::InvalidConfig(
                "punctuality thresholds must be strictly increasing".to_string(),
            ));
        }
        if !(self.level_cutoffs[0] < self.level_cutoffs[1]) {
            return Err(Error::InvalidConfig(
                "level cutoffs must be strictly increasing".to_string(),
            ));
        }
        let [lo, mid, hi] = self.level_encoding;
        if !(lo <= mid && mid <= hi) {
            return Err(Error::InvalidConfig(
                "level encoding must be weakly increasing".to_string(),
            ));
        }
        Ok(())
    }

    pub fn encode(&self, level: Level) -> f64 {
        match level {
            Level::Low => self.level_encoding[0],
            Level::Medium => self.level_encoding[1],
            Level::High => self.level_encoding[2],
        }
    }

    /// Maps a combined score in [0, 1] back to a level.
    pub fn threshold(&self, score: f64) -> Level {
        if score < self.level_cutoffs[0] {
            Level::Low
        } else if score < self.level_cutoffs[1] {
            Level::Medium
        } else {
            Level::High
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankingResult {
    pub student_id: String,
    pub knowledge: Level,
    pub punctuality: Level,
    pub performance: Level,
    pub overall: Level,
    pub overall_score: f64,
}

/// Weighted average of the normalized scores, thresholded to a level.
pub fn score_knowledge(record: &StudentRecord, cfg: &HierarchyConfig) -> Level {
    let w = cfg.knowledge_weights;
    let score = (w.quiz * record.quiz
        + w.assignment * record.assignment
        + w.discussion * record.discussion
        + w.lab * record.lab)
        / 100.0;
    cfg.threshold(score)
}

/// Attendance thresholded against the punctuality cutoffs.
pub fn score_punctuality(record: &StudentRecord, cfg: &HierarchyConfig) -> Level {
    let [lo, hi] = cfg.punctuality_thresholds;
    if record.attendance < lo {
        Level::Low
    } else if record.attendance > hi {
        Level::High
    } else {
        Level::Medium
    }
}

pub fn score_performance(knowledge: Level, punctuality: Level, cfg: &HierarchyConfig) -> Level {
    let [wk, wp] = cfg.performance_weights;
    cfg.threshold(wk * cfg.encode(knowledge) + wp * cfg.encode(punctuality))
}

/// Combines performance with the coaching flag into the overall level and its
/// underlying score.
pub fn overall_ranking(performance: Level, coaching: bool, cfg: &HierarchyConfig) -> (Level, f64) {
    let [wp, wc] = cfg.overall_weights;
    let coaching_encoded = cfg.encode(if coaching { Level::High } else { Level::Low });
    let score = wp * cfg.encode(performance) + wc * coaching_encoded;
    (cfg.threshold(score), score)
}

/// Full chain for one record.
pub fn evaluate_record(record: &StudentRecord, cfg: &HierarchyConfig) -> RankingResult {
    let knowledge = score_knowledge(record, cfg);
    let punctuality = score_punctuality(record, cfg);
    let performance = score_performance(knowledge, punctuality, cfg);
    let (overall, overall_score) = overall_ranking(performance, record.coaching, cfg);
    RankingResult {
        student_id: record.student_id.clone(),
        knowledge,
        punctuality,
        performance,
        overall,
        overall_score,
    }
}

/// Per-year empirical distribution of overall levels; each year's fractions
/// sum to 1.
pub fn cohort_report(ds: &Dataset, cfg: &HierarchyConfig) -> Result<Vec<(u8, Level, f64)>> {
    if ds.rows.is_empty() {
        return Err(Error::InsufficientData("empty dataset".to_string()));
    }
    let records = ds.student_records()?;
    let mut per_year: BTreeMap<u8, [usize; 3]> = BTreeMap::new();
    for r in &records {
        let ranking = evaluate_record(r, cfg);
        let counts = per_year.entry(r.academic_year).or_default();
        counts[ranking.overall as usize] += 1;
    }
    let mut out = Vec::new();
    for (year, counts) in per_year {
        let total: usize = counts.iter().sum();
        for level in Level::ALL {
            out.push((year, level, counts[level as usize] as f64 / total as f64));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(quiz: f64, others: f64, attendance: f64, coaching: bool) -> StudentRecord {
        StudentRecord {
            student_id: "S0001".to_string(),
            academic_year: 1,
            semester: 1,
            quiz,
            assignment: others,
            discussion: others,
            lab: others,
            attendance,
            gpa: 3.0,
            coaching,
            cluster_label: None,
        }
    }

    #[test]
    fn default_config_is_valid_and_quiz_weight_is_15_percent() {
        let cfg = HierarchyConfig::default();
        cfg.validate().unwrap();
        assert_eq!(cfg.knowledge_weights.quiz, 0.15);
        let kw = cfg.knowledge_weights;
        let sum = kw.quiz + kw.assignment + kw.discussion + kw.lab;
        assert!((sum - 1.0).abs() < 1e-9);
    }

    #[test]
    fn knowledge_extremes() {
        let cfg = HierarchyConfig::default();
        assert_eq!(
            score_knowledge(&record(100.0, 100.0, 50.0, false), &cfg),
            Level::High
        );
        assert_eq!(
            score_knowledge(&record(0.0, 0.0, 50.0, false), &cfg),
            Level::Low
        );
    }

    #[test]
    fn knowledge_weighted_average_hand_check() {
        // quiz 100, others 50: 0.15 + 0.5 * 0.85 = 0.575 -> medium under (0.4, 0.7)
        let cfg = HierarchyConfig::default();
        assert_eq!(
            score_knowledge(&record(100.0, 50.0, 50.0, false), &cfg),
            Level::Medium
        );
    }

    #[test]
    fn punctuality_cutoffs() {
        let cfg = HierarchyConfig::default();
        assert_eq!(
            score_punctuality(&record(0.0, 0.0, 100.0, false), &cfg),
            Level::High
        );
        assert_eq!(
            score_punctuality(&record(0.0, 0.0, 0.0, false), &cfg),
            Level::Low
        );
        assert_eq!(
            score_punctuality(&record(0.0, 0.0, 70.0, false), &cfg),
            Level::Medium
        );
        // both edges belong to medium
        assert_eq!(
            score_punctuality(&record(0.0, 0.0, 60.0, false), &cfg),
            Level::Medium
        );
        assert_eq!(
            score_punctuality(&record(0.0, 0.0, 85.0, false), &cfg),
            Level::Medium
        );
    }

    #[test]
    fn performance_combinations() {
        let cfg = HierarchyConfig::default();
        assert_eq!(
            score_performance(Level::High, Level::High, &cfg),
            Level::High
        );
        assert_eq!(score_performance(Level::Low, Level::Low, &cfg), Level::Low);
        // 0.5 * 1 + 0.5 * 0 = 0.5 -> medium
        assert_eq!(
            score_performance(Level::High, Level::Low, &cfg),
            Level::Medium
        );
    }

    #[test]
    fn overall_combinations() {
        let cfg = HierarchyConfig::default();
        assert_eq!(overall_ranking(Level::High, true, &cfg).0, Level::High);
        assert_eq!(overall_ranking(Level::Low, false, &cfg).0, Level::Low);
        // 0.7 * 0.5 + 0.3 * 1 = 0.65 -> medium
        let (level, score) = overall_ranking(Level::Medium, true, &cfg);
        assert_eq!(level, Level::Medium);
        assert!((score - 0.65).abs() < 1e-12);
    }

    #[test]
    fn projection_property() {
        // All weight on punctuality: performance equals the punctuality level.
        let cfg = HierarchyConfig {
            performance_weights: [0.0, 1.0],
            ..HierarchyConfig::default()
        };
        for p in Level::ALL {
            for k in Level::ALL {
                // encodings 0 / 0.5 / 1 against cutoffs 0.4 / 0.7
                assert_eq!(score_performance(k, p, &cfg), p);
            }
        }
    }

    #[test]
    fn invalid_weight_vectors_rejected() {
        let mut cfg = HierarchyConfig::default();
        cfg.performance_weights = [0.8, 0.8];
        assert_eq!(cfg.validate().unwrap_err().kind(), "invalid-config");
        let mut cfg = HierarchyConfig::default();
        cfg.knowledge_weights.quiz = -0.1;
        assert_eq!(cfg.validate().unwrap_err().kind(), "invalid-config");
        let mut cfg = HierarchyConfig::default();
        cfg.level_cutoffs = [0.7, 0.4];
        assert_eq!(cfg.validate().unwrap_err().kind(), "invalid-config");
    }

    fn tiny_dataset(records: Vec<StudentRecord>) -> Dataset {
        use crate::dataset::FeatureSchema;
        let schema = FeatureSchema::student();
        let rows = records.iter().map(|r| r.to_row(&schema).unwrap()).collect();
        Dataset { schema, rows }
    }

    #[test]
    fn cohort_report_counts_fractions() {
        let cfg = HierarchyConfig::default();
        // 3 clearly-high students and 1 overall-medium (0.7 * 0.5 + 0.3 = 0.65)
        let high = || record(95.0, 95.0, 95.0, true);
        let medium = record(60.0, 60.0, 70.0, true);
        let ds = tiny_dataset(vec![high(), high(), high(), medium]);
        let report = cohort_report(&ds, &cfg).unwrap();
        let get = |level: Level| {
            report
                .iter()
                .find(|(y, l, _)| *y == 1 && *l == level)
                .map(|(_, _, f)| *f)
                .unwrap()
        };
        assert!((get(Level::High) - 0.75).abs() < 1e-12);
        assert!((get(Level::Medium) - 0.25).abs() < 1e-12);
        assert_eq!(get(Level::Low), 0.0);
    }

    #[test]
    fn cohort_report_fractions_sum_to_one_per_year() {
        let cfg = HierarchyConfig::default();
        let mut records = Vec::new();
        for i in 0..40 {
            let mut r = record(
                f64::from(i % 11) * 9.0,
                f64::from((i * 7) % 10) * 10.0,
                f64::from((i * 3) % 10) * 11.0,
                i % 2 == 0,
            );
            r.academic_year = 1 + (i % 4) as u8;
            r.semester = 2 * r.academic_year - 1;
            records.push(r);
        }
        let ds = tiny_dataset(records);
        let report = cohort_report(&ds, &cfg).unwrap();
        let mut sums: BTreeMap<u8, f64> = BTreeMap::new();
        for (year, _, fraction) in report {
            *sums.entry(year).or_default() += fraction;
        }
        for (_, s) in sums {
            assert!((s - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn uniform_cohort_reports_single_level() {
        let cfg = HierarchyConfig::default();
        let ds = tiny_dataset(vec![record(95.0, 95.0, 95.0, true); 6]);
        let report = cohort_report(&ds, &cfg).unwrap();
        let high: Vec<_> = report
            .iter()
            .filter(|(_, l, f)| *l == Level::High && *f == 1.0)
            .collect();
        assert_eq!(high.len(), 1); // one year present, all high
    }
}
