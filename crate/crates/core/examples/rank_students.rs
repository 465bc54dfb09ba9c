//! Hierarchical overall ranking and per-year cohort distributions.
//!
//! Knowledge (quiz / assignment / discussion / lab) and punctuality
//! (attendance) combine into performance; performance and coaching combine
//! into the overall ranking.

use edumine::{
    clean, cohort_report, evaluate_record, generate, FeatureSchema, HierarchyConfig, StudentRecord,
    SynthConfig,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = HierarchyConfig::default();
    println!(
        "knowledge weights: quiz {:.2} (15% of course grade), others {:.4} each",
        cfg.knowledge_weights.quiz, cfg.knowledge_weights.assignment
    );
    println!(
        "punctuality cutoffs: <{} low, {}..={} medium, >{} high",
        cfg.punctuality_thresholds[0],
        cfg.punctuality_thresholds[0],
        cfg.punctuality_thresholds[1],
        cfg.punctuality_thresholds[1]
    );
    println!();

    let profile = |name: &str, quiz, others, attendance, coaching| {
        let r = StudentRecord {
            student_id: name.to_string(),
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
        };
        let ranking = evaluate_record(&r, &cfg);
        println!(
            "{name:>12}: knowledge={:<6} punctuality={:<6} performance={:<6} overall={:<6} (score {:.2})",
            ranking.knowledge.to_string(),
            ranking.punctuality.to_string(),
            ranking.performance.to_string(),
            ranking.overall.to_string(),
            ranking.overall_score
        );
    };
    profile("top", 95.0, 92.0, 96.0, true);
    profile("coached mid", 100.0, 50.0, 70.0, true);
    profile("uncoached", 100.0, 50.0, 70.0, false);
    profile("at risk", 35.0, 40.0, 55.0, false);
    println!();

    // per-year distribution of overall levels on a synthetic cohort
    let raws = generate(&SynthConfig::default())?;
    let (ds, _) = clean(&raws, &FeatureSchema::student());
    println!(
        "cohort of {} students, overall-level fractions per year:",
        ds.rows.len()
    );
    println!("{:>6}  {:>8}  {:>8}", "year", "level", "fraction");
    for (year, level, fraction) in cohort_report(&ds, &cfg)? {
        println!("{year:>6}  {level:>8}  {fraction:>8.4}");
    }
    Ok(())
}
