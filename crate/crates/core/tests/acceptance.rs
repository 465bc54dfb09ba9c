//! Acceptance suite: one test per release criterion, each printing a
//! PASS line with the checked numbers (run with `-- --nocapture` to see
//! them). Criteria that exercise the CLI spawn the real binary.

mod common;

use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{brute_force_k2, BinaryDataset};
use edumine::kmeans::{self, KMeansParams, PointMatrix};
use edumine::nbayes::NaiveBayesModel;
use edumine::{
    clean, cohort_report, column_percentages, evaluate_record, materialize, ConfusionMatrix,
    Dataset, FeatureSchema, HierarchyConfig, StudentRecord, SynthConfig,
};

const BIN: &str = env!("CARGO_BIN_EXE_edumine");

fn run_cli(cwd: &Path, args: &[&str]) -> (i32, String, String) {
    let output = Command::new(BIN)
        .args(args)
        .current_dir(cwd)
        .output()
        .expect("binary runs");
    (
        output.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&output.stdout).into_owned(),
        String::from_utf8_lossy(&output.stderr).into_owned(),
    )
}

fn expect_ok(cwd: &Path, args: &[&str]) -> String {
    let (code, stdout, stderr) = run_cli(cwd, args);
    assert_eq!(code, 0, "command {args:?} failed:\n{stderr}");
    stdout
}

fn read_json(path: &Path) -> serde_json::Value {
    let text = std::fs::read_to_string(path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    serde_json::from_str(&text).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

/// The reference three-cluster percentage table and its marginals.
const TABLE_PERCENTS: [[f64; 3]; 3] = [[96.8, 0.9, 0.6], [1.4, 93.9, 0.6], [1.8, 5.2, 98.8]];
const TABLE_ROW_TOTALS: [u64; 3] = [212, 112, 176];
const TABLE_COL_TOTALS: [u64; 3] = [217, 115, 168];
const RECOVERED_COUNTS: [[u64; 3]; 3] = [[210, 1, 1], [3, 108, 1], [4, 6, 166]];

fn recovered_matrix() -> ConfusionMatrix {
    ConfusionMatrix::from_counts(
        vec!["C1".into(), "C2".into(), "C3".into()],
        RECOVERED_COUNTS.iter().map(|r| r.to_vec()).collect(),
    )
    .unwrap()
}

#[test]
fn criterion_1_cleaning_counts() {
    let dir = tempfile::tempdir().unwrap();
    expect_ok(dir.path(), &["synth", "--out", "s"]);

    let started = Instant::now();
    expect_ok(dir.path(), &["clean", "--in", "s/raw.csv", "--out", "c"]);
    let elapsed = started.elapsed();

    let report = read_json(&dir.path().join("c/cleaning_report.json"));
    assert_eq!(report["input_count"], 660);
    assert_eq!(report["stage1_removed"], 69);
    assert_eq!(report["stage1_remaining"], 591);
    assert_eq!(report["stage2_removed"], 91);
    assert_eq!(report["clean_count"], 500);
    assert_eq!(report["missing_cells"], 160);
    assert!(elapsed < Duration::from_secs(1), "clean took {elapsed:?}");

    println!(
        "criterion 1 PASS: cleaning counts 660 -> 591 -> 500 with 160 missing cells in {:?}",
        elapsed
    );
}

/// Exhaustive search: the frozen count matrix is the unique integer matrix
/// consistent with the printed column percentages and both marginal vectors.
fn assert_recovered_matrix_is_unique() {
    let round1 = |x: f64| (x * 10.0).round() / 10.0;
    // per-cell candidates from the column-percentage constraint
    let mut candidates: Vec<Vec<Vec<u64>>> = Vec::new();
    for i in 0..3 {
        let mut row = Vec::new();
        for j in 0..3 {
            let t = TABLE_COL_TOTALS[j];
            let cell: Vec<u64> = (0..=t)
                .filter(|&c| round1(100.0 * c as f64 / t as f64) == TABLE_PERCENTS[i][j])
                .collect();
            assert!(!cell.is_empty(), "no candidate for cell ({i},{j})");
            row.push(cell);
        }
        candidates.push(row);
    }
    let mut solutions = Vec::new();
    for &a in &candidates[0][0] {
        for &b in &candidates[0][1] {
            for &c in &candidates[0][2] {
                if a + b + c != TABLE_ROW_TOTALS[0] {
                    continue;
                }
                for &d in &candidates[1][0] {
                    for &e in &candidates[1][1] {
                        for &f in &candidates[1][2] {
                            if d + e + f != TABLE_ROW_TOTALS[1] {
                                continue;
                            }
                            for &g in &candidates[2][0] {
                                for &h in &candidates[2][1] {
                                    for &i in &candidates[2][2] {
                                        if g + h + i != TABLE_ROW_TOTALS[2] {
                                            continue;
                                        }
                                        if a + d + g == TABLE_COL_TOTALS[0]
                                            && b + e + h == TABLE_COL_TOTALS[1]
                                            && c + f + i == TABLE_COL_TOTALS[2]
                                        {
                                            solutions.push([[a, b, c], [d, e, f], [g, h, i]]);
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    assert_eq!(solutions.len(), 1, "expected a unique consistent matrix");
    assert_eq!(solutions[0], RECOVERED_COUNTS);
}

#[test]
fn criterion_2_percentage_table_reproduction() {
    assert_recovered_matrix_is_unique();

    let matrix = recovered_matrix();
    let (actual, predicted) = materialize(&matrix);
    assert_eq!(actual.len(), 500);

    let dir = tempfile::tempdir().unwrap();
    let mut pairs = String::from("actual,predicted\n");
    for (a, p) in actual.iter().zip(&predicted) {
        pairs.push_str(&format!("{a},{p}\n"));
    }
    std::fs::write(dir.path().join("pairs.csv"), pairs).unwrap();

    let stdout = expect_ok(dir.path(), &["evaluate", "--in", "pairs.csv", "--out", "e"]);

    // printed percentages match the reference table
    for row in TABLE_PERCENTS {
        for p in row {
            assert!(
                stdout.contains(&format!("{p:.1} %")),
                "stdout missing {p:.1} %:\n{stdout}"
            );
        }
    }

    // emitted percentage CSV matches within +/- 0.05 points
    let csv = std::fs::read_to_string(dir.path().join("e/percentages.csv")).unwrap();
    let parsed: Vec<Vec<f64>> = csv
        .lines()
        .skip(1)
        .map(|l| l.split(',').skip(1).map(|c| c.parse().unwrap()).collect())
        .collect();
    for i in 0..3 {
        for j in 0..3 {
            assert!(
                (parsed[i][j] - TABLE_PERCENTS[i][j]).abs() <= 0.05,
                "cell ({i},{j}) = {} expected {}",
                parsed[i][j],
                TABLE_PERCENTS[i][j]
            );
        }
    }

    // exact marginals and exact accuracy as a ratio
    assert_eq!(matrix.row_totals(), TABLE_ROW_TOTALS.to_vec());
    assert_eq!(matrix.column_totals(), TABLE_COL_TOTALS.to_vec());
    assert_eq!(matrix.total, 500);
    let manifest = read_json(&dir.path().join("e/evaluate.manifest.json"));
    assert_eq!(
        manifest["metrics"]["accuracy"].as_f64().unwrap(),
        484.0 / 500.0
    );
    assert_eq!(manifest["metrics"]["accuracy"].as_f64().unwrap(), 0.968);

    println!(
        "criterion 2 PASS: unique recovered matrix reproduces the percentage table; accuracy 484/500 = 0.968"
    );
}

#[test]
fn criterion_3_naive_bayes_oracle() {
    // hand example: posterior(x=1) = (0.8182, 0.1818) within 1e-4
    let hand = BinaryDataset {
        rows: vec![(vec![1], 0), (vec![1], 0), (vec![0], 1)],
        n_features: 1,
        class_names: vec!["A".into(), "B".into()],
    };
    let ds = hand.to_dataset();
    let model = NaiveBayesModel::fit(&ds, "y", 1.0, 1e-9).unwrap();
    let posterior = model.posterior(&ds.schema, &hand.query_row(&[1])).unwrap();
    assert!((posterior[0] - 0.8182).abs() < 1e-4);
    assert!((posterior[1] - 0.1818).abs() < 1e-4);

    // 200 randomized datasets against the brute-force Bayes-rule oracle
    let mut max_gap = 0.0f64;
    for seed in 0..200u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n_features = rng.gen_range(1..=3);
        let n_rows = rng.gen_range(1..=20);
        let n_classes = rng.gen_range(2..=3);
        let data = BinaryDataset {
            rows: (0..n_rows)
                .map(|_| {
                    (
                        (0..n_features).map(|_| rng.gen_range(0..=1u8)).collect(),
                        rng.gen_range(0..n_classes),
                    )
                })
                .collect(),
            n_features,
            class_names: (0..n_classes).map(|c| format!("K{c}")).collect(),
        };
        let query: Vec<u8> = (0..n_features).map(|_| rng.gen_range(0..=1u8)).collect();

        let ds = data.to_dataset();
        let model = NaiveBayesModel::fit(&ds, "y", 1.0, 1e-9).unwrap();
        let posterior = model
            .posterior(&ds.schema, &data.query_row(&query))
            .unwrap();
        let total: f64 = posterior.iter().sum();
        assert!((total - 1.0).abs() < 1e-9, "seed {seed}: sums to {total}");

        let oracle = data.oracle_posterior(&query, 1.0);
        for (p, o) in posterior.iter().zip(&oracle) {
            let gap = (p - o).abs();
            assert!(gap < 1e-9, "seed {seed}: posterior {p} vs oracle {o}");
            max_gap = max_gap.max(gap);
        }
    }

    println!(
        "criterion 3 PASS: hand posterior (0.8182, 0.1818); 200 oracle comparisons, max gap {max_gap:.2e}"
    );
}

#[test]
fn criterion_4_kmeans_oracle() {
    // exact small case
    let data = PointMatrix::new(
        vec![vec![1.0], vec![2.0], vec![10.0], vec![11.0]],
        vec!["x".into()],
    )
    .unwrap();
    let result = kmeans::fit(
        &data,
        &KMeansParams {
            k: 2,
            ..Default::default()
        },
    )
    .unwrap();
    assert_eq!(result.inertia, 1.0);
    let mut centers: Vec<f64> = result.centroids.iter().map(|c| c[0]).collect();
    centers.sort_by(f64::total_cmp);
    assert_eq!(centers, vec![1.5, 10.5]);

    // 100 seeded instances vs the exhaustive partition optimum
    let mut optimal_hits = 0;
    for seed in 0..100u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(2..=8);
        let d = rng.gen_range(1..=2);
        let points: Vec<Vec<f64>> = (0..n)
            .map(|_| (0..d).map(|_| rng.gen_range(0.0..10.0)).collect())
            .collect();
        let names: Vec<String> = (0..d).map(|j| format!("x{j}")).collect();
        let data = PointMatrix::new(points.clone(), names).unwrap();
        let result = kmeans::fit(
            &data,
            &KMeansParams {
                k: 2,
                seed,
                restarts: 10,
                ..Default::default()
            },
        )
        .unwrap();

        for pair in result.inertia_history.windows(2) {
            assert!(
                pair[1] <= pair[0] + 1e-9,
                "seed {seed}: history increased {pair:?}"
            );
        }

        let oracle = brute_force_k2(&points);
        assert!(
            result.inertia >= oracle - 1e-9,
            "seed {seed}: inertia {} below optimum {oracle}",
            result.inertia
        );
        if (result.inertia - oracle).abs() <= 1e-9 * oracle.max(1.0) {
            optimal_hits += 1;
        }
    }
    assert!(
        optimal_hits >= 90,
        "only {optimal_hits}/100 runs reached the optimum"
    );

    println!(
        "criterion 4 PASS: exact inertia 1.0 with centroids (1.5, 10.5); optimum reached in {optimal_hits}/100 seeded runs"
    );
}

#[test]
fn criterion_5_synthetic_marginals_and_clusters() {
    let dir = tempfile::tempdir().unwrap();
    expect_ok(dir.path(), &["synth", "--out", "s"]);
    expect_ok(dir.path(), &["clean", "--in", "s/raw.csv", "--out", "c"]);

    // every post-clean GPA lies inside its year's range
    let ranges = SynthConfig::default().gpa_ranges;
    let text = std::fs::read_to_string(dir.path().join("c/clean.csv")).unwrap();
    let raws = edumine::parse_csv_str(&text, &FeatureSchema::student()).unwrap();
    let (ds, report) = clean(&raws, &FeatureSchema::student());
    assert_eq!(report.clean_count, 500);
    let records = ds.student_records().unwrap();
    for r in &records {
        let [lo, hi] = ranges[usize::from(r.academic_year) - 1];
        assert!(
            r.gpa >= lo && r.gpa <= hi,
            "{}: year {} gpa {} outside [{lo}, {hi}]",
            r.student_id,
            r.academic_year,
            r.gpa
        );
    }

    // k = 3 clustering yields three non-empty clusters
    expect_ok(
        dir.path(),
        &[
            "cluster",
            "--in",
            "c/clean.csv",
            "--out",
            "k",
            "--features",
            "quiz,assignment,discussion,lab,attendance,gpa",
            "--k",
            "3",
            "--seed",
            "42",
        ],
    );
    let summary = read_json(&dir.path().join("k/cluster_summary.json"));
    let sizes: Vec<u64> = summary["sizes"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_u64().unwrap())
        .collect();
    assert_eq!(sizes.len(), 3);
    assert!(sizes.iter().all(|&s| s > 0), "sizes {sizes:?}");
    assert_eq!(sizes.iter().sum::<u64>(), 500);

    println!(
        "criterion 5 PASS: all 500 clean GPAs inside their year ranges; k=3 cluster sizes {sizes:?}"
    );
}

#[test]
fn criterion_6_hierarchy_properties() {
    let cfg = HierarchyConfig::default();
    assert_eq!(cfg.knowledge_weights.quiz, 0.15);

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let random_record = |rng: &mut ChaCha8Rng| {
        let year = rng.gen_range(1..=4u8);
        StudentRecord {
            student_id: "S".to_string(),
            academic_year: year,
            semester: 2 * year - 1,
            quiz: rng.gen_range(0.0..=100.0),
            assignment: rng.gen_range(0.0..=100.0),
            discussion: rng.gen_range(0.0..=100.0),
            lab: rng.gen_range(0.0..=100.0),
            attendance: rng.gen_range(0.0..=100.0),
            gpa: rng.gen_range(0.0..=4.0),
            coaching: rng.gen_bool(0.5),
            cluster_label: None,
        }
    };

    // monotonicity over 1000 randomized (record, raised-input) pairs
    for trial in 0..1000 {
        let record = random_record(&mut rng);
        let mut raised = record.clone();
        match rng.gen_range(0..6) {
            0 => raised.quiz = (raised.quiz + rng.gen_range(0.0..100.0)).min(100.0),
            1 => raised.assignment = (raised.assignment + rng.gen_range(0.0..100.0)).min(100.0),
            2 => raised.discussion = (raised.discussion + rng.gen_range(0.0..100.0)).min(100.0),
            3 => raised.lab = (raised.lab + rng.gen_range(0.0..100.0)).min(100.0),
            4 => raised.attendance = (raised.attendance + rng.gen_range(0.0..100.0)).min(100.0),
            _ => raised.coaching = true,
        }
        let before = evaluate_record(&record, &cfg);
        let after = evaluate_record(&raised, &cfg);
        assert!(after.knowledge >= before.knowledge, "trial {trial}");
        assert!(after.punctuality >= before.punctuality, "trial {trial}");
        assert!(after.performance >= before.performance, "trial {trial}");
        assert!(after.overall >= before.overall, "trial {trial}");
    }

    // cohort fractions sum to 1 per year
    let schema = FeatureSchema::student();
    let records: Vec<StudentRecord> = (0..200).map(|_| random_record(&mut rng)).collect();
    let rows = records.iter().map(|r| r.to_row(&schema).unwrap()).collect();
    let ds = Dataset { schema, rows };
    let report = cohort_report(&ds, &cfg).unwrap();
    let mut sums = std::collections::BTreeMap::<u8, f64>::new();
    for (year, _, fraction) in report {
        *sums.entry(year).or_default() += fraction;
    }
    for (year, s) in &sums {
        assert!((s - 1.0).abs() < 1e-9, "year {year} fractions sum to {s}");
    }

    println!(
        "criterion 6 PASS: monotone on 1000 raised-input pairs; fractions sum to 1 across {} years; quiz weight 0.15",
        sums.len()
    );
}

fn run_full_pipeline(root: &Path) {
    let steps: Vec<Vec<&str>> = vec![
        vec!["synth", "--out", "s", "--seed", "42"],
        vec!["clean", "--in", "s/raw.csv", "--out", "c"],
        vec![
            "cluster",
            "--in",
            "c/clean.csv",
            "--out",
            "k",
            "--features",
            "quiz,assignment,discussion,lab,attendance,gpa",
            "--k",
            "3",
            "--seed",
            "42",
        ],
        vec![
            "train",
            "--in",
            "k/clustered.csv",
            "--out",
            "t",
            "--features",
            "quiz,assignment,discussion,lab,attendance,gpa,coaching",
            "--label",
            "cluster_label",
        ],
        vec![
            "predict",
            "--in",
            "k/clustered.csv",
            "--model",
            "t/model.json",
            "--out",
            "p",
        ],
        vec!["evaluate", "--in", "p/predictions.csv", "--out", "e"],
        vec!["report", "--in", "k/clustered.csv", "--out", "r"],
    ];
    for step in steps {
        expect_ok(root, &step);
    }
}

fn collect_files(root: &Path) -> Vec<(PathBuf, Vec<u8>)> {
    let mut files = Vec::new();
    let mut stack = vec![root.to_path_buf()];
    while let Some(dir) = stack.pop() {
        for entry in std::fs::read_dir(&dir).unwrap() {
            let path = entry.unwrap().path();
            if path.is_dir() {
                stack.push(path);
            } else {
                let rel = path.strip_prefix(root).unwrap().to_path_buf();
                files.push((rel, std::fs::read(&path).unwrap()));
            }
        }
    }
    files.sort();
    files
}

#[test]
fn criterion_7_pipeline_determinism_and_runtime() {
    let dir_a = tempfile::tempdir().unwrap();
    let dir_b = tempfile::tempdir().unwrap();

    let started = Instant::now();
    run_full_pipeline(dir_a.path());
    let elapsed = started.elapsed();
    assert!(
        elapsed < Duration::from_secs(10),
        "pipeline took {elapsed:?}"
    );

    run_full_pipeline(dir_b.path());

    let files_a = collect_files(dir_a.path());
    let files_b = collect_files(dir_b.path());
    assert_eq!(
        files_a.iter().map(|(p, _)| p).collect::<Vec<_>>(),
        files_b.iter().map(|(p, _)| p).collect::<Vec<_>>(),
        "artifact sets differ"
    );
    assert!(!files_a.is_empty());
    let mut byte_total = 0usize;
    for ((path_a, bytes_a), (_, bytes_b)) in files_a.iter().zip(&files_b) {
        assert_eq!(
            bytes_a,
            bytes_b,
            "artifact {} differs between runs",
            path_a.display()
        );
        byte_total += bytes_a.len();
    }

    // re-running in place overwrites identically
    run_full_pipeline(dir_a.path());
    let files_again = collect_files(dir_a.path());
    assert_eq!(files_a, files_again, "re-run changed artifacts in place");

    println!(
        "criterion 7 PASS: {} artifacts ({byte_total} bytes) byte-identical across runs; end-to-end in {elapsed:?}",
        files_a.len()
    );
}

#[test]
fn percentage_table_layout_carries_marginals() {
    // the aligned text used by cmd_evaluate carries actual rows, predicted
    // columns, and both marginal vectors
    let table = column_percentages(&recovered_matrix());
    let text = table.to_aligned_text();
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[0].contains("Predicted"));
    assert!(lines[1].starts_with("Actual"));
    assert!(lines[2].starts_with("C1") && lines[2].trim_end().ends_with("212"));
    assert!(lines[5].starts_with("Σ") && lines[5].trim_end().ends_with("500"));
}
