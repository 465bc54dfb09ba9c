//! Confusion-matrix evaluation with a column-normalized percentage view.
//!
//! Counts are laid out with actual classes as rows and predicted classes as
//! columns. The percentage view divides each cell by its column total, so
//! every non-empty column sums to 100; cells round half-up to one decimal.

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConfusionMatrix {
    pub labels: Vec<String>,
    /// `counts[actual][predicted]`.
    pub counts: Vec<Vec<u64>>,
    pub total: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PercentageTable {
    pub labels: Vec<String>,
    /// Column-normalized percentages rounded to one decimal.
    pub percents: Vec<Vec<f64>>,
    pub row_totals: Vec<u64>,
    pub column_totals: Vec<u64>,
    /// Predicted classes that never occur; their columns are all zero.
    pub zero_columns: Vec<bool>,
}

impl ConfusionMatrix {
    /// Builds a matrix directly from counts (rows = actual).
    pub fn from_counts(labels: Vec<String>, counts: Vec<Vec<u64>>) -> Result<Self> {
        let k = labels.len();
        if k == 0 {
            return Err(Error::InvalidArgument("no labels".to_string()));
        }
        if counts.len() != k || counts.iter().any(|row| row.len() != k) {
            return Err(Error::InvalidArgument(format!(
                "counts must be a {k}x{k} matrix"
            )));
        }
        let total = counts.iter().flatten().sum();
        Ok(ConfusionMatrix {
            labels,
            counts,
            total,
        })
    }

    pub fn row_totals(&self) -> Vec<u64> {
        self.counts.iter().map(|row| row.iter().sum()).collect()
    }

    pub fn column_totals(&self) -> Vec<u64> {
        let k = self.labels.len();
        (0..k)
            .map(|j| self.counts.iter().map(|row| row[j]).sum())
            .collect()
    }

    /// Plot-ready CSV: one row per actual class, one column per predicted.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("actual");
        for l in &self.labels {
            out.push(',');
            out.push_str(l);
        }
        out.push('\n');
        for (l, row) in self.labels.iter().zip(&self.counts) {
            out.push_str(l);
            for c in row {
                out.push(',');
                out.push_str(&c.to_string());
            }
            out.push('\n');
        }
        out
    }

    /// Aligned text with predicted columns and sum marginals.
    pub fn to_aligned_text(&self) -> String {
        let cells: Vec<Vec<String>> = self
            .counts
            .iter()
            .map(|row| row.iter().map(u64::to_string).collect())
            .collect();
        let col_totals: Vec<String> = self.column_totals().iter().map(u64::to_string).collect();
        let row_totals: Vec<String> = self.row_totals().iter().map(u64::to_string).collect();
        render_table(
            &self.labels,
            &cells,
            &row_totals,
            &col_totals,
            &self.total.to_string(),
        )
    }
}

/// Counts actual/predicted label pairs into a confusion matrix.
pub fn confusion(
    actual: &[String],
    predicted: &[String],
    labels: &[String],
) -> Result<ConfusionMatrix> {
    if actual.len() != predicted.len() {
        return Err(Error::InvalidArgument(format!(
            "{} actual labels vs {} predicted",
            actual.len(),
            predicted.len()
        )));
    }
    let k = labels.len();
    if k == 0 {
        return Err(Error::InvalidArgument("no labels".to_string()));
    }
    let index = |value: &String| -> Result<usize> {
        labels.iter().position(|l| l == value).ok_or_else(|| {
            Error::InvalidArgument(format!("label {value:?} not in the declared label set"))
        })
    };
    let mut counts = vec![vec![0u64; k]; k];
    for (a, p) in actual.iter().zip(predicted) {
        counts[index(a)?][index(p)?] += 1;
    }
    ConfusionMatrix::from_counts(labels.to_vec(), counts)
}

/// Expands a count matrix back into label pairs, row-major. Rebuilding a
/// matrix from the result reproduces the original exactly.
pub fn materialize(m: &ConfusionMatrix) -> (Vec<String>, Vec<String>) {
    let mut actual = Vec::with_capacity(m.total as usize);
    let mut predicted = Vec::with_capacity(m.total as usize);
    for (i, row) in m.counts.iter().enumerate() {
        for (j, &count) in row.iter().enumerate() {
            for _ in 0..count {
                actual.push(m.labels[i].clone());
                predicted.push(m.labels[j].clone());
            }
        }
    }
    (actual, predicted)
}

/// Rounds half-up to one decimal place.
fn round1(x: f64) -> f64 {
    (x * 10.0).round() / 10.0
}

/// Column-normalized percentage view. Empty predicted columns stay zero and
/// are flagged instead of failing.
pub fn column_percentages(m: &ConfusionMatrix) -> PercentageTable {
    let k = m.labels.len();
    let column_totals = m.column_totals();
    let zero_columns: Vec<bool> = column_totals.iter().map(|&t| t == 0).collect();
    let mut percents = vec![vec![0.0; k]; k];
    for i in 0..k {
        for j in 0..k {
            if column_totals[j] > 0 {
                percents[i][j] = round1(100.0 * m.counts[i][j] as f64 / column_totals[j] as f64);
            }
        }
    }
    PercentageTable {
        labels: m.labels.clone(),
        percents,
        row_totals: m.row_totals(),
        column_totals,
        zero_columns,
    }
}

/// Trace over total.
pub fn accuracy(m: &ConfusionMatrix) -> Result<f64> {
    if m.total == 0 {
        return Err(Error::EmptyMatrix);
    }
    let trace: u64 = (0..m.labels.len()).map(|i| m.counts[i][i]).sum();
    Ok(trace as f64 / m.total as f64)
}

impl PercentageTable {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("actual");
        for l in &self.labels {
            out.push(',');
            out.push_str(l);
        }
        out.push('\n');
        for (l, row) in self.labels.iter().zip(&self.percents) {
            out.push_str(l);
            for p in row {
                out.push(',');
                out.push_str(&format!("{p:.1}"));
            }
            out.push('\n');
        }
        out
    }

    /// Aligned text: actual rows, predicted columns, percentage cells, and
    /// count marginals.
    pub fn to_aligned_text(&self) -> String {
        let cells: Vec<Vec<String>> = self
            .percents
            .iter()
            .map(|row| row.iter().map(|p| format!("{p:.1} %")).collect())
            .collect();
        let row_totals: Vec<String> = self.row_totals.iter().map(u64::to_string).collect();
        let col_totals: Vec<String> = self.column_totals.iter().map(u64::to_string).collect();
        let total: u64 = self.row_totals.iter().sum();
        render_table(
            &self.labels,
            &cells,
            &row_totals,
            &col_totals,
            &total.to_string(),
        )
    }
}

fn render_table(
    labels: &[String],
    cells: &[Vec<String>],
    row_totals: &[String],
    col_totals: &[String],
    grand_total: &str,
) -> String {
    let k = labels.len();
    let mut widths = vec![0usize; k + 1];
    for (j, label) in labels.iter().enumerate() {
        widths[j] = label.len();
    }
    widths[k] = 1; // the sum column header
    for row in cells {
        for (j, cell) in row.iter().enumerate() {
            widths[j] = widths[j].max(cell.len());
        }
    }
    for (j, t) in col_totals.iter().enumerate() {
        widths[j] = widths[j].max(t.len());
    }
    for t in row_totals {
        widths[k] = widths[k].max(t.len());
    }
    let stub = labels
        .iter()
        .map(String::len)
        .max()
        .unwrap_or(1)
        .max("Actual".len());

    let mut out = String::new();
    out.push_str(&format!("{:stub$}  Predicted\n", ""));
    out.push_str(&format!("{:stub$}", "Actual"));
    for (j, label) in labels.iter().enumerate() {
        out.push_str(&format!("  {label:>w$}", w = widths[j]));
    }
    out.push_str(&format!("  {:>w$}\n", "Σ", w = widths[k]));
    for (i, label) in labels.iter().enumerate() {
        out.push_str(&format!("{label:<stub$}"));
        for (j, cell) in cells[i].iter().enumerate() {
            out.push_str(&format!("  {cell:>w$}", w = widths[j]));
        }
        out.push_str(&format!("  {:>w$}\n", row_totals[i], w = widths[k]));
    }
    out.push_str(&format!("{:<stub$}", "Σ"));
    for (j, t) in col_totals.iter().enumerate() {
        out.push_str(&format!("  {t:>w$}", w = widths[j]));
    }
    out.push_str(&format!("  {grand_total:>w$}\n", w = widths[k]));
    out
}
