//! Build a confusion matrix and its column-normalized percentage view.
//!
//! Percentages divide each cell by its predicted-column total, so every
//! non-empty column sums to 100. The aligned text mirrors the layout used in
//! the evaluate command's output.

use edumine::{accuracy, column_percentages, confusion, materialize, ConfusionMatrix};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // counts with actual classes as rows, predicted classes as columns
    let matrix = ConfusionMatrix::from_counts(
        vec!["C1".into(), "C2".into(), "C3".into()],
        vec![vec![210, 1, 1], vec![3, 108, 1], vec![4, 6, 166]],
    )?;
    println!("{}", matrix.to_aligned_text());

    let table = column_percentages(&matrix);
    println!("{}", table.to_aligned_text());
    println!("accuracy: {}", accuracy(&matrix)?);
    println!();

    // materialize turns counts back into label pairs; rebuilding the matrix
    // from them is lossless
    let (actual, predicted) = materialize(&matrix);
    let rebuilt = confusion(&actual, &predicted, &matrix.labels)?;
    println!(
        "materialized {} pairs, rebuild identical: {}",
        actual.len(),
        rebuilt == matrix
    );
    println!();

    // degenerate predicted classes are flagged instead of failing
    let lopsided =
        ConfusionMatrix::from_counts(vec!["C1".into(), "C2".into()], vec![vec![8, 0], vec![5, 0]])?;
    let table = column_percentages(&lopsided);
    println!("zero predicted columns: {:?}", table.zero_columns);
    println!("{}", table.to_aligned_text());

    println!("plot-ready CSV of the percentage view:");
    print!("{}", column_percentages(&matrix).to_csv());
    Ok(())
}
