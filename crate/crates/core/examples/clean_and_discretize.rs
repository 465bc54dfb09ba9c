//! Clean a messy CSV in two stages, then discretize numeric features into
//! low/medium/high bands.

use edumine::{clean, default_bands, discretize, parse_csv_str, FeatureSchema};

const MESSY: &str = "\
student_id,academic_year,semester,quiz,assignment,discussion,lab,attendance,gpa,coaching
S0001,1,1,82.5,74,68,90,95,3.4,yes
S0002,1,2,55,60,NA,70,88,3.1,no
S0003,,1,70,70,70,70,70,2.9,yes
S0004,2,3,61,59,66,72,52,,no
S0005,2,4,abc,77,71,64,81,2.7,yes
S0006,3,5,90,92,88,95,97,3.9,yes
S0007,3,6,45,50,40,55,61,9.9,no
S0008,4,7,66,64,62,60,58,2.5,maybe
S0009,4,8,78,81,76,83,92,3.2,no
";

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let schema = FeatureSchema::student();
    let raws = parse_csv_str(MESSY, &schema)?;
    println!("parsed {} raw records", raws.len());

    // Stage 1 drops records with missing/invalid required fields (here: the
    // missing year on S0003 and the impossible GPA on S0007). Stage 2 drops
    // records with any other missing or invalid cell.
    let (ds, report) = clean(&raws, &schema);
    println!(
        "cleaning: {} -> {} -> {} (missing cells: {})",
        report.input_count, report.stage1_remaining, report.clean_count, report.missing_cells
    );
    for row in &ds.rows {
        println!("  kept {}", row.student_id);
    }
    println!();

    let banded = discretize(&ds, &default_bands())?;
    println!("discretized with the default bands:");
    println!("  gpa:        low [0, 2.5) | medium [2.5, 3.0) | high [3.0, 4.0]");
    println!("  percentage: low [0, 60)  | medium [60, 85)   | high [85, 100]");
    println!();
    println!(
        "{:>8}  {:>6}  {:>6}  {:>10}",
        "student", "gpa", "quiz", "attendance"
    );
    for (before, after) in ds.rows.iter().zip(&banded.rows) {
        let col = |name: &str| after.value(&banded.schema, name).unwrap().to_string();
        println!(
            "{:>8}  {:>6}  {:>6}  {:>10}",
            before.student_id,
            col("gpa"),
            col("quiz"),
            col("attendance"),
        );
    }
    Ok(())
}
