//! CSV ingestion and emission.
//!
//! Files are comma-separated UTF-8 with a header row. An empty cell or the
//! sentinel `NA` is a missing value; a numeric cell that does not parse is
//! treated as missing rather than fatal. Unknown columns are ignored.

use std::io::{Read, Write};
use std::path::Path;

use crate::dataset::record::RawRecord;
use crate::dataset::schema::{FeatureKind, FeatureSchema, STUDENT_ID};
use crate::dataset::Dataset;
use crate::error::{Error, Result};

const MISSING_SENTINEL: &str = "NA";

fn is_missing_text(cell: &str) -> bool {
    cell.is_empty() || cell == MISSING_SENTINEL
}

/// Reads raw records from CSV text. The header must name the `student_id`
/// column and every schema feature; the label column is optional.
pub fn parse_csv<R: Read>(reader: R, schema: &FeatureSchema) -> Result<Vec<RawRecord>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(false)
        .trim(csv::Trim::All)
        .from_reader(reader);

    let headers = rdr
        .headers()
        .map_err(|e| Error::SchemaMismatch(format!("cannot read header row: {e}")))?
        .clone();
    let col = |name: &str| headers.iter().position(|h| h == name);

    let mut wanted: Vec<(String, usize)> = Vec::new();
    for name in schema.columns() {
        match col(name) {
            Some(i) => wanted.push((name.to_string(), i)),
            None => {
                return Err(Error::SchemaMismatch(format!(
                    "header is missing required column {name:?}"
                )))
            }
        }
    }
    let label_col = col(&schema.label);

    let mut records = Vec::new();
    for row in rdr.records() {
        let row = row.map_err(|e| {
            let line = e.position().map_or(0, csv::Position::line);
            Error::MalformedRow {
                line,
                detail: match e.kind() {
                    csv::ErrorKind::UnequalLengths {
                        expected_len, len, ..
                    } => {
                        format!("expected {expected_len} fields, found {len}")
                    }
                    other => format!("{other:?}"),
                },
            }
        })?;

        let mut raw = RawRecord::new();
        for (name, idx) in &wanted {
            let cell = row.get(*idx).unwrap_or("");
            let missing = is_missing_text(cell)
                || (name != STUDENT_ID && is_unparseable_numeric(schema, name, cell));
            raw.set(name, (!missing).then(|| cell.to_string()));
        }
        if let Some(idx) = label_col {
            let cell = row.get(idx).unwrap_or("");
            if !is_missing_text(cell) {
                raw.set(&schema.label, Some(cell.to_string()));
            }
        }
        records.push(raw);
    }
    Ok(records)
}

fn is_unparseable_numeric(schema: &FeatureSchema, name: &str, cell: &str) -> bool {
    matches!(
        schema.feature(name).map(|f| &f.kind),
        Some(FeatureKind::Numeric { .. })
    ) && cell.parse::<f64>().is_err()
}

pub fn parse_csv_str(text: &str, schema: &FeatureSchema) -> Result<Vec<RawRecord>> {
    parse_csv(text.as_bytes(), schema)
}

pub fn read_raw_csv(path: &Path, schema: &FeatureSchema) -> Result<Vec<RawRecord>> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    parse_csv(std::io::BufReader::new(file), schema)
}

/// Writes raw records in schema column order; missing cells are empty.
pub fn write_raw_csv<W: Write>(
    writer: W,
    records: &[RawRecord],
    schema: &FeatureSchema,
) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(writer);
    let columns = schema.columns();
    wtr.write_record(&columns)
        .map_err(|e| Error::InvalidArgument(format!("csv write failed: {e}")))?;
    for raw in records {
        let cells: Vec<&str> = columns.iter().map(|c| raw.get(c).unwrap_or("")).collect();
        wtr.write_record(&cells)
            .map_err(|e| Error::InvalidArgument(format!("csv write failed: {e}")))?;
    }
    wtr.flush().map_err(|e| Error::io("<writer>", e))?;
    Ok(())
}

/// Writes a clean dataset. The label column is appended when any row has one.
pub fn write_dataset_csv<W: Write>(writer: W, ds: &Dataset) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(writer);
    let with_label = ds.rows.iter().any(|r| r.label.is_some());
    let mut columns: Vec<String> = ds.schema.columns().iter().map(|c| c.to_string()).collect();
    if with_label {
        columns.push(ds.schema.label.clone());
    }
    wtr.write_record(&columns)
        .map_err(|e| Error::InvalidArgument(format!("csv write failed: {e}")))?;
    for row in &ds.rows {
        let mut cells: Vec<String> = Vec::with_capacity(columns.len());
        cells.push(row.student_id.clone());
        for v in &row.values {
            cells.push(v.to_string());
        }
        if with_label {
            cells.push(row.label.clone().unwrap_or_default());
        }
        wtr.write_record(&cells)
            .map_err(|e| Error::InvalidArgument(format!("csv write failed: {e}")))?;
    }
    wtr.flush().map_err(|e| Error::io("<writer>", e))?;
    Ok(())
}

pub fn dataset_to_csv_string(ds: &Dataset) -> Result<String> {
    let mut buf = Vec::new();
    write_dataset_csv(&mut buf, ds)?;
    String::from_utf8(buf).map_err(|e| Error::InvalidArgument(format!("non-utf8 csv: {e}")))
}

pub fn raw_to_csv_string(records: &[RawRecord], schema: &FeatureSchema) -> Result<String> {
    let mut buf = Vec::new();
    write_raw_csv(&mut buf, records, schema)?;
    String::from_utf8(buf).map_err(|e| Error::InvalidArgument(format!("non-utf8 csv: {e}")))
}
