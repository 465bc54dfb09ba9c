//! The whole pipeline in memory: synthesize, clean, cluster, split, train,
//! predict, evaluate, report.
//!
//! The CLI runs the same steps as batch subcommands with file artifacts; see
//! the README.

use edumine::kmeans::{self, KMeansParams, PointMatrix, Standardizer};
use edumine::nbayes::NaiveBayesModel;
use edumine::{
    accuracy, clean, cohort_report, column_percentages, confusion, generate, split, FeatureSchema,
    HierarchyConfig, SynthConfig,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // 1. synthesize a raw cohort and clean it
    let raws = generate(&SynthConfig::default())?;
    let (ds, report) = clean(&raws, &FeatureSchema::student());
    println!(
        "[1] synth + clean: {} -> {} -> {} records",
        report.input_count, report.stage1_remaining, report.clean_count
    );

    // 2. cluster the standardized numeric features into C1..C3
    let features: Vec<String> = [
        "quiz",
        "assignment",
        "discussion",
        "lab",
        "attendance",
        "gpa",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    let matrix = PointMatrix::from_dataset(&ds, &features)?;
    let scaler = Standardizer::fit(&matrix);
    let km = kmeans::fit(
        &scaler.transform(&matrix),
        &KMeansParams {
            k: 3,
            seed: 42,
            ..Default::default()
        },
    )?;
    let labels: Vec<String> = km
        .assignment
        .iter()
        .map(|&a| format!("C{}", a + 1))
        .collect();
    let labeled = ds.with_labels(&labels)?;
    println!(
        "[2] cluster: k=3, inertia {:.2}, {} iterations",
        km.inertia, km.iterations
    );

    // 3. split and train the classifier on the training part
    let (train, test) = split(&labeled, 0.8, 42)?;
    let model_features: Vec<String> = features
        .iter()
        .cloned()
        .chain(["coaching".to_string()])
        .collect();
    let train_proj = train.select_features(&model_features)?;
    let model = NaiveBayesModel::fit(&train_proj, "cluster_label", 1.0, 1e-9)?;
    println!(
        "[3] train: {} records, classes {:?}",
        train.len(),
        model.classes
    );

    // 4. predict the held-out part and evaluate
    let test_proj = test.select_features(&model_features)?;
    let predicted = model.predict_dataset(&test_proj)?;
    let actual: Vec<String> = test.rows.iter().map(|r| r.label.clone().unwrap()).collect();
    let mut label_set: Vec<String> = actual.iter().chain(predicted.iter()).cloned().collect();
    label_set.sort();
    label_set.dedup();
    let m = confusion(&actual, &predicted, &label_set)?;
    println!("[4] evaluate on {} held-out records:", test.len());
    println!();
    println!("{}", column_percentages(&m).to_aligned_text());
    println!("accuracy: {:.3}", accuracy(&m)?);
    println!();

    // 5. hierarchy report per year
    let cfg = HierarchyConfig::default();
    println!("[5] overall-level fractions per year:");
    for (year, level, fraction) in cohort_report(&labeled, &cfg)? {
        if fraction > 0.0 {
            println!("    year {year}: {level:<6} {fraction:.3}");
        }
    }
    Ok(())
}
