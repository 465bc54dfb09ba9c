//! Partition a cohort into three clusters with seeded multi-restart k-means.
//!
//! Features are standardized before clustering (grade scales differ from the
//! GPA scale); centroids are reported back in original units.

use edumine::kmeans::{self, KMeansParams, PointMatrix, Standardizer};
use edumine::{clean, generate, FeatureSchema, SynthConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let raws = generate(&SynthConfig::default())?;
    let (ds, _) = clean(&raws, &FeatureSchema::student());
    println!("clustering {} clean records", ds.rows.len());

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
    let standardizer = Standardizer::fit(&matrix);
    let scaled = standardizer.transform(&matrix);

    let params = KMeansParams {
        k: 3,
        seed: 42,
        restarts: 10,
        ..Default::default()
    };
    let result = kmeans::fit(&scaled, &params)?;

    let mut sizes = vec![0usize; params.k];
    for &a in &result.assignment {
        sizes[a] += 1;
    }
    println!(
        "converged after {} iterations, inertia {:.4}",
        result.iterations, result.inertia
    );
    println!(
        "inertia per iteration: {:?}",
        result
            .inertia_history
            .iter()
            .map(|j| (j * 10.0).round() / 10.0)
            .collect::<Vec<_>>()
    );
    println!();

    println!("{:>8}  {:>5}  centroid (original units)", "cluster", "size");
    for (i, centroid) in result.centroids.iter().enumerate() {
        let original = standardizer.inverse_point(centroid);
        let cells: Vec<String> = features
            .iter()
            .zip(&original)
            .map(|(f, v)| format!("{f}={v:.1}"))
            .collect();
        println!(
            "{:>8}  {:>5}  {}",
            format!("C{}", i + 1),
            sizes[i],
            cells.join(" ")
        );
    }

    // label the dataset and show the per-cluster GPA spread
    let labels: Vec<String> = result
        .assignment
        .iter()
        .map(|&a| format!("C{}", a + 1))
        .collect();
    let labeled = ds.with_labels(&labels)?;
    println!();
    for k in 1..=params.k {
        let name = format!("C{k}");
        let gpas: Vec<f64> = labeled
            .student_records()?
            .iter()
            .filter(|r| r.cluster_label.as_deref() == Some(&name))
            .map(|r| r.gpa)
            .collect();
        let min = gpas.iter().copied().fold(f64::INFINITY, f64::min);
        let max = gpas.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        println!("  {name}: gpa range [{min:.3}, {max:.3}]");
    }
    Ok(())
}
