//! Batch command implementations behind the CLI.
//!
//! Every command reads CSV artifacts, writes CSV/JSON artifacts into an
//! output directory, and drops exactly one `<command>.manifest.json` next to
//! its outputs. Commands are deterministic given (inputs, config, seed) and
//! overwrite their outputs identically on re-run.
//!
//! Datasets whose schema differs from the standard student layout (e.g.
//! after discretization) travel with a `<name>.schema.json` sidecar; loaders
//! fall back to the student schema when no sidecar is present.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{json, Value as Json};

use crate::config::ToolkitConfig;
use crate::dataset::csv::{dataset_to_csv_string, parse_csv_str, raw_to_csv_string};
use crate::dataset::{clean, discretize, CleaningReport, Dataset, FeatureSchema};
use crate::error::{Error, Result};
use crate::eval::{accuracy, column_percentages, confusion};
use crate::hierarchy::{cohort_report, evaluate_record};
use crate::kmeans::{self, PointMatrix, Standardizer};
use crate::nbayes::NaiveBayesModel;
use crate::synth;

/// Provenance record written alongside every command's outputs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
    pub seed: Option<u64>,
    pub config_fingerprint: String,
    pub metrics: BTreeMap<String, Json>,
}

/// Manifest plus a short human-readable summary for stdout.
#[derive(Debug)]
pub struct CommandOutput {
    pub manifest: RunManifest,
    pub summary: String,
}

fn write_file(path: &Path, content: &str) -> Result<()> {
    std::fs::write(path, content).map_err(|e| Error::io(path, e))
}

fn write_manifest(out_dir: &Path, manifest: &RunManifest) -> Result<()> {
    let mut text = serde_json::to_string_pretty(manifest).expect("manifest serializes");
    text.push('\n');
    write_file(
        &out_dir.join(format!("{}.manifest.json", manifest.command)),
        &text,
    )
}

fn ensure_out_dir(out_dir: &Path) -> Result<()> {
    std::fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))
}

/// Sidecar file that carries a dataset's schema next to its CSV.
pub fn sidecar_path(csv_path: &Path) -> PathBuf {
    csv_path.with_extension("schema.json")
}

fn schema_for(csv_path: &Path) -> Result<FeatureSchema> {
    let sidecar = sidecar_path(csv_path);
    if sidecar.exists() {
        let text = std::fs::read_to_string(&sidecar).map_err(|e| Error::io(&sidecar, e))?;
        serde_json::from_str(&text).map_err(|e| {
            Error::SchemaMismatch(format!("bad schema sidecar {}: {e}", sidecar.display()))
        })
    } else {
        Ok(FeatureSchema::student())
    }
}

fn write_dataset(out_dir: &Path, name: &str, ds: &Dataset) -> Result<Vec<String>> {
    let csv_path = out_dir.join(name);
    write_file(&csv_path, &dataset_to_csv_string(ds)?)?;
    let sidecar = sidecar_path(&csv_path);
    let mut schema_json = serde_json::to_string_pretty(&ds.schema).expect("schema serializes");
    schema_json.push('\n');
    write_file(&sidecar, &schema_json)?;
    Ok(vec![
        name.to_string(),
        sidecar.file_name().unwrap().to_string_lossy().into_owned(),
    ])
}

/// Reads and cleans a dataset CSV, insisting that nothing needed removal.
fn load_clean_dataset(path: &Path) -> Result<Dataset> {
    let schema = schema_for(path)?;
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let raws = parse_csv_str(&text, &schema)?;
    let (ds, report) = clean(&raws, &schema);
    let removed = report.stage1_removed + report.stage2_removed;
    if removed > 0 {
        return Err(Error::InsufficientData(format!(
            "{removed} of {} records are incomplete or invalid; run the clean command first",
            report.input_count
        )));
    }
    Ok(ds)
}

fn path_str(p: &Path) -> String {
    p.to_string_lossy().into_owned()
}

/// `synth`: write a raw synthetic cohort CSV.
pub fn run_synth(
    cfg: &ToolkitConfig,
    config_fingerprint: &str,
    out_dir: &Path,
    seed_flag: Option<u64>,
) -> Result<CommandOutput> {
    ensure_out_dir(out_dir)?;
    let mut synth_cfg = cfg.synth.clone();
    if let Some(seed) = seed_flag {
        synth_cfg.seed = seed;
    }
    let records = synth::generate(&synth_cfg)?;
    let schema = FeatureSchema::student();
    write_file(
        &out_dir.join("raw.csv"),
        &raw_to_csv_string(&records, &schema)?,
    )?;

    let mut metrics = BTreeMap::new();
    metrics.insert("rows".to_string(), json!(records.len()));
    metrics.insert("missing_cells".to_string(), json!(synth_cfg.missing_cells));
    metrics.insert(
        "stage1_removals".to_string(),
        json!(synth_cfg.stage1_removals),
    );
    metrics.insert(
        "stage2_removals".to_string(),
        json!(synth_cfg.stage2_removals),
    );
    let manifest = RunManifest {
        command: "synth".to_string(),
        inputs: vec![],
        outputs: vec!["raw.csv".to_string()],
        seed: Some(synth_cfg.seed),
        config_fingerprint: config_fingerprint.to_string(),
        metrics,
    };
    write_manifest(out_dir, &manifest)?;
    let summary = format!(
        "wrote {} raw records ({} missing cells) to {}",
        records.len(),
        synth_cfg.missing_cells,
        out_dir.join("raw.csv").display()
    );
    Ok(CommandOutput { manifest, summary })
}

/// `clean`: two-stage cleaning with an audited report.
pub fn run_clean(input: &Path, out_dir: &Path, config_fingerprint: &str) -> Result<CommandOutput> {
    ensure_out_dir(out_dir)?;
    let text = std::fs::read_to_string(input).map_err(|e| Error::io(input, e))?;
    let schema = schema_for(input)?;
    // A zero-byte input cleans to an empty dataset rather than failing.
    let raws = if text.trim().is_empty() {
        Vec::new()
    } else {
        parse_csv_str(&text, &schema)?
    };
    let (ds, report) = clean(&raws, &schema);

    let mut outputs = write_dataset(out_dir, "clean.csv", &ds)?;
    let mut report_json = serde_json::to_string_pretty(&report).expect("report serializes");
    report_json.push('\n');
    write_file(&out_dir.join("cleaning_report.json"), &report_json)?;
    outputs.push("cleaning_report.json".to_string());

    let metrics = report_metrics(&report);
    let manifest = RunManifest {
        command: "clean".to_string(),
        inputs: vec![path_str(input)],
        outputs,
        seed: None,
        config_fingerprint: config_fingerprint.to_string(),
        metrics,
    };
    write_manifest(out_dir, &manifest)?;
    let summary = format!(
        "cleaned {} -> {} -> {} records ({} missing cells)",
        report.input_count, report.stage1_remaining, report.clean_count, report.missing_cells
    );
    Ok(CommandOutput { manifest, summary })
}

fn report_metrics(report: &CleaningReport) -> BTreeMap<String, Json> {
    let mut metrics = BTreeMap::new();
    metrics.insert("input_count".to_string(), json!(report.input_count));
    metrics.insert("stage1_removed".to_string(), json!(report.stage1_removed));
    metrics.insert(
        "stage1_remaining".to_string(),
        json!(report.stage1_remaining),
    );
    metrics.insert("stage2_removed".to_string(), json!(report.stage2_removed));
    metrics.insert("clean_count".to_string(), json!(report.clean_count));
    metrics.insert("missing_cells".to_string(), json!(report.missing_cells));
    metrics
}

/// `discretize`: replace banded numeric features with band labels.
pub fn run_discretize(
    input: &Path,
    cfg: &ToolkitConfig,
    config_fingerprint: &str,
    out_dir: &Path,
) -> Result<CommandOutput> {
    ensure_out_dir(out_dir)?;
    let ds = load_clean_dataset(input)?;
    let out = discretize(&ds, &cfg.bands)?;

    let banded: Vec<&String> = cfg
        .bands
        .keys()
        .filter(|k| ds.schema.feature(k).is_some())
        .collect();
    let outputs = write_dataset(out_dir, "discretized.csv", &out)?;
    let mut metrics = BTreeMap::new();
    metrics.insert("rows".to_string(), json!(out.rows.len()));
    metrics.insert("banded_features".to_string(), json!(banded));
    let manifest = RunManifest {
        command: "discretize".to_string(),
        inputs: vec![path_str(input)],
        outputs,
        seed: None,
        config_fingerprint: config_fingerprint.to_string(),
        metrics,
    };
    write_manifest(out_dir, &manifest)?;
    let summary = format!(
        "discretized {} features over {} records",
        banded.len(),
        out.rows.len()
    );
    Ok(CommandOutput { manifest, summary })
}

#[derive(Serialize)]
struct ClusterSummary {
    k: usize,
    seed: u64,
    restarts: usize,
    iterations: usize,
    inertia: f64,
    sizes: Vec<usize>,
    feature_names: Vec<String>,
    standardization: Standardizer,
    /// Centroids mapped back to original feature units.
    centroids: Vec<Vec<f64>>,
}

/// `cluster`: standardize the numeric projection, run k-means, and append
/// C1..Ck labels.
pub fn run_cluster(
    input: &Path,
    features: &[String],
    k_flag: Option<usize>,
    seed_flag: Option<u64>,
    cfg: &ToolkitConfig,
    config_fingerprint: &str,
    out_dir: &Path,
) -> Result<CommandOutput> {
    ensure_out_dir(out_dir)?;
    let ds = load_clean_dataset(input)?;
    let matrix = PointMatrix::from_dataset(&ds, features)?;

    let mut params = cfg.kmeans.clone();
    params.k = k_flag.unwrap_or(params.k);
    params.seed = seed_flag.unwrap_or(cfg.seed);

    // Grade scales differ from the GPA scale, so cluster in standardized
    // space and report centroids in original units.
    let standardizer = Standardizer::fit(&matrix);
    let scaled = standardizer.transform(&matrix);
    let result = kmeans::fit(&scaled, &params)?;

    let labels: Vec<String> = result
        .assignment
        .iter()
        .map(|&a| format!("C{}", a + 1))
        .collect();
    let labeled = ds.with_labels(&labels)?;
    let mut outputs = write_dataset(out_dir, "clustered.csv", &labeled)?;

    let mut sizes = vec![0usize; params.k];
    for &a in &result.assignment {
        sizes[a] += 1;
    }
    let summary_doc = ClusterSummary {
        k: params.k,
        seed: params.seed,
        restarts: result.restarts_used,
        iterations: result.iterations,
        inertia: result.inertia,
        sizes: sizes.clone(),
        feature_names: matrix.feature_names.clone(),
        standardization: standardizer.clone(),
        centroids: result
            .centroids
            .iter()
            .map(|c| standardizer.inverse_point(c))
            .collect(),
    };
    let mut summary_json = serde_json::to_string_pretty(&summary_doc).expect("summary serializes");
    summary_json.push('\n');
    write_file(&out_dir.join("cluster_summary.json"), &summary_json)?;
    outputs.push("cluster_summary.json".to_string());

    let mut metrics = BTreeMap::new();
    metrics.insert("k".to_string(), json!(params.k));
    metrics.insert("inertia".to_string(), json!(result.inertia));
    metrics.insert("iterations".to_string(), json!(result.iterations));
    metrics.insert("sizes".to_string(), json!(sizes));
    let manifest = RunManifest {
        command: "cluster".to_string(),
        inputs: vec![path_str(input)],
        outputs,
        seed: Some(params.seed),
        config_fingerprint: config_fingerprint.to_string(),
        metrics,
    };
    write_manifest(out_dir, &manifest)?;
    let summary = format!(
        "k = {} clusters with sizes {:?}, inertia {:.4}",
        params.k, summary_doc.sizes, result.inertia
    );
    Ok(CommandOutput { manifest, summary })
}

/// `train`: fit the classifier on the selected features.
pub fn run_train(
    input: &Path,
    features: &[String],
    label: &str,
    cfg: &ToolkitConfig,
    config_fingerprint: &str,
    out_dir: &Path,
) -> Result<CommandOutput> {
    ensure_out_dir(out_dir)?;
    let ds = load_clean_dataset(input)?;

    // The label must be resolvable before feature selection so a bad --label
    // reads as a usage error.
    if label != ds.schema.label && ds.schema.feature(label).is_none() {
        return Err(Error::InvalidArgument(format!(
            "label column {label:?} not found"
        )));
    }
    let mut selection: Vec<String> = features.to_vec();
    if label != ds.schema.label && !selection.iter().any(|f| f == label) {
        selection.push(label.to_string());
    }
    let train_ds = ds.select_features(&selection)?;
    let model = NaiveBayesModel::fit(
        &train_ds,
        label,
        cfg.nbayes.alpha,
        cfg.nbayes.variance_floor,
    )?;
    model.save(&out_dir.join("model.json"))?;

    let mut metrics = BTreeMap::new();
    metrics.insert("classes".to_string(), json!(model.classes));
    metrics.insert("n_train".to_string(), json!(train_ds.rows.len()));
    metrics.insert("alpha".to_string(), json!(model.alpha));
    metrics.insert("variance_floor".to_string(), json!(model.variance_floor));
    let manifest = RunManifest {
        command: "train".to_string(),
        inputs: vec![path_str(input)],
        outputs: vec!["model.json".to_string()],
        seed: None,
        config_fingerprint: config_fingerprint.to_string(),
        metrics,
    };
    write_manifest(out_dir, &manifest)?;
    let summary = format!(
        "trained on {} records; classes {:?}",
        train_ds.rows.len(),
        model.classes
    );
    Ok(CommandOutput { manifest, summary })
}

/// `predict`: classify every record of a CSV with a saved model.
pub fn run_predict(
    input: &Path,
    model_path: &Path,
    config_fingerprint: &str,
    out_dir: &Path,
) -> Result<CommandOutput> {
    ensure_out_dir(out_dir)?;
    let model = NaiveBayesModel::load(model_path)?;
    let ds = load_clean_dataset(input)?;
    let predicted = model.predict_dataset(&ds)?;

    let with_actual = ds.rows.iter().all(|r| r.label.is_some());
    let mut out = String::from(if with_actual {
        "student_id,actual,predicted\n"
    } else {
        "student_id,predicted\n"
    });
    for (row, p) in ds.rows.iter().zip(&predicted) {
        if with_actual {
            out.push_str(&format!(
                "{},{},{p}\n",
                row.student_id,
                row.label.as_deref().unwrap_or("")
            ));
        } else {
            out.push_str(&format!("{},{p}\n", row.student_id));
        }
    }
    write_file(&out_dir.join("predictions.csv"), &out)?;

    let mut metrics = BTreeMap::new();
    metrics.insert("rows".to_string(), json!(ds.rows.len()));
    metrics.insert("classes".to_string(), json!(model.classes));
    metrics.insert("has_actual".to_string(), json!(with_actual));
    metrics.insert(
        "model_fingerprint".to_string(),
        json!(model.schema_fingerprint),
    );
    let manifest = RunManifest {
        command: "predict".to_string(),
        inputs: vec![path_str(input), path_str(model_path)],
        outputs: vec!["predictions.csv".to_string()],
        seed: None,
        config_fingerprint: config_fingerprint.to_string(),
        metrics,
    };
    write_manifest(out_dir, &manifest)?;
    let summary = format!("predicted {} records", ds.rows.len());
    Ok(CommandOutput { manifest, summary })
}

fn read_predictions(path: &Path) -> Result<(Vec<String>, Vec<String>)> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers = rdr
        .headers()
        .map_err(|e| Error::SchemaMismatch(format!("cannot read header row: {e}")))?
        .clone();
    let actual_idx = headers.iter().position(|h| h == "actual").ok_or_else(|| {
        Error::SchemaMismatch("predictions need an \"actual\" column".to_string())
    })?;
    let predicted_idx = headers
        .iter()
        .position(|h| h == "predicted")
        .ok_or_else(|| {
            Error::SchemaMismatch("predictions need a \"predicted\" column".to_string())
        })?;

    let mut actual = Vec::new();
    let mut predicted = Vec::new();
    for row in rdr.records() {
        let row = row.map_err(|e| Error::MalformedRow {
            line: e.position().map_or(0, csv::Position::line),
            detail: e.to_string(),
        })?;
        let line = row.position().map_or(0, csv::Position::line);
        let a = row.get(actual_idx).unwrap_or("");
        let p = row.get(predicted_idx).unwrap_or("");
        if a.is_empty() || p.is_empty() {
            return Err(Error::MalformedRow {
                line,
                detail: "empty actual or predicted value".to_string(),
            });
        }
        actual.push(a.to_string());
        predicted.push(p.to_string());
    }
    Ok((actual, predicted))
}

/// `evaluate`: confusion matrix, percentage table, and accuracy from
/// actual/predicted pairs.
pub fn run_evaluate(
    input: &Path,
    config_fingerprint: &str,
    out_dir: &Path,
) -> Result<CommandOutput> {
    ensure_out_dir(out_dir)?;
    let (actual, predicted) = read_predictions(input)?;
    let mut labels: Vec<String> = actual.iter().chain(predicted.iter()).cloned().collect();
    labels.sort();
    labels.dedup();
    if labels.is_empty() {
        return Err(Error::EmptyMatrix);
    }

    let matrix = confusion(&actual, &predicted, &labels)?;
    let table = column_percentages(&matrix);
    let acc = accuracy(&matrix)?;

    write_file(&out_dir.join("confusion.csv"), &matrix.to_csv())?;
    write_file(&out_dir.join("percentages.csv"), &table.to_csv())?;
    let aligned = format!(
        "Counts\n{}\nColumn percentages\n{}",
        matrix.to_aligned_text(),
        table.to_aligned_text()
    );
    write_file(&out_dir.join("tables.txt"), &aligned)?;

    let mut metrics = BTreeMap::new();
    metrics.insert("accuracy".to_string(), json!(acc));
    metrics.insert("total".to_string(), json!(matrix.total));
    metrics.insert("labels".to_string(), json!(labels));
    let manifest = RunManifest {
        command: "evaluate".to_string(),
        inputs: vec![path_str(input)],
        outputs: vec![
            "confusion.csv".to_string(),
            "percentages.csv".to_string(),
            "tables.txt".to_string(),
        ],
        seed: None,
        config_fingerprint: config_fingerprint.to_string(),
        metrics,
    };
    write_manifest(out_dir, &manifest)?;
    let summary = format!("{}\naccuracy: {acc}", table.to_aligned_text().trim_end());
    Ok(CommandOutput { manifest, summary })
}

/// `report`: per-student rankings, per-year level distribution, and a
/// per-year GPA summary.
pub fn run_report(
    input: &Path,
    cfg: &ToolkitConfig,
    config_fingerprint: &str,
    out_dir: &Path,
) -> Result<CommandOutput> {
    ensure_out_dir(out_dir)?;
    let ds = load_clean_dataset(input)?;
    let records = ds.student_records()?;
    if records.is_empty() {
        return Err(Error::InsufficientData(
            "no records to report on".to_string(),
        ));
    }

    let mut rankings =
        String::from("student_id,knowledge,punctuality,performance,overall,overall_score\n");
    for r in &records {
        let ranking = evaluate_record(r, &cfg.hierarchy);
        rankings.push_str(&format!(
            "{},{},{},{},{},{}\n",
            ranking.student_id,
            ranking.knowledge,
            ranking.punctuality,
            ranking.performance,
            ranking.overall,
            ranking.overall_score
        ));
    }
    write_file(&out_dir.join("rankings.csv"), &rankings)?;

    let cohort = cohort_report(&ds, &cfg.hierarchy)?;
    let mut cohort_csv = String::from("academic_year,level,fraction\n");
    for (year, level, fraction) in &cohort {
        cohort_csv.push_str(&format!("{year},{level},{fraction}\n"));
    }
    write_file(&out_dir.join("cohort_report.csv"), &cohort_csv)?;

    // GPA summary per (year, cluster); unlabeled rows group under "all".
    let mut groups: BTreeMap<(u8, String), Vec<f64>> = BTreeMap::new();
    for r in &records {
        let cluster = r.cluster_label.clone().unwrap_or_else(|| "all".to_string());
        groups
            .entry((r.academic_year, cluster))
            .or_default()
            .push(r.gpa);
    }
    let mut gpa_csv = String::from("academic_year,cluster,students,gpa_min,gpa_max,gpa_mean\n");
    for ((year, cluster), gpas) in &groups {
        let min = gpas.iter().copied().fold(f64::INFINITY, f64::min);
        let max = gpas.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let mean = gpas.iter().sum::<f64>() / gpas.len() as f64;
        gpa_csv.push_str(&format!(
            "{year},{cluster},{},{min},{max},{mean:.4}\n",
            gpas.len()
        ));
    }
    write_file(&out_dir.join("gpa_summary.csv"), &gpa_csv)?;

    let years: Vec<u8> = {
        let mut ys: Vec<u8> = records.iter().map(|r| r.academic_year).collect();
        ys.sort_unstable();
        ys.dedup();
        ys
    };
    let mut metrics = BTreeMap::new();
    metrics.insert("rows".to_string(), json!(records.len()));
    metrics.insert("years".to_string(), json!(years));
    let manifest = RunManifest {
        command: "report".to_string(),
        inputs: vec![path_str(input)],
        outputs: vec![
            "rankings.csv".to_string(),
            "cohort_report.csv".to_string(),
            "gpa_summary.csv".to_string(),
        ],
        seed: None,
        config_fingerprint: config_fingerprint.to_string(),
        metrics,
    };
    write_manifest(out_dir, &manifest)?;
    let summary = format!("ranked {} students across years {years:?}", records.len());
    Ok(CommandOutput { manifest, summary })
}
