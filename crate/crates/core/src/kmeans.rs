//! Lloyd's k-means with seeded multi-restart initialization.
//!
//! Each restart seeds its own generator stream, picks k distinct data points
//! as starting centroids, and iterates assignment and mean updates until the
//! largest centroid displacement falls under the tolerance. The restart with
//! the smallest inertia wins; ties go to the earliest restart.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dataset::schema::FeatureKind;
use crate::dataset::Dataset;
use crate::error::{Error, Result};

/// Dense numeric points, one row per observation.
#[derive(Debug, Clone, PartialEq)]
pub struct PointMatrix {
    pub points: Vec<Vec<f64>>,
    pub feature_names: Vec<String>,
}

impl PointMatrix {
    pub fn new(points: Vec<Vec<f64>>, feature_names: Vec<String>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InsufficientData("no points".to_string()));
        }
        let d = points[0].len();
        if d == 0 {
            return Err(Error::InvalidArgument(
                "points need at least one dimension".to_string(),
            ));
        }
        if feature_names.len() != d {
            return Err(Error::InvalidArgument(format!(
                "{} feature names for {d}-dimensional points",
                feature_names.len()
            )));
        }
        for (i, p) in points.iter().enumerate() {
            if p.len() != d {
                return Err(Error::InvalidArgument(format!(
                    "point {i} has {} dimensions, expected {d}",
                    p.len()
                )));
            }
            if p.iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidArgument(format!(
                    "point {i} has a non-finite value"
                )));
            }
        }
        Ok(PointMatrix {
            points,
            feature_names,
        })
    }

    /// Projects the named numeric features of a dataset into a matrix.
    pub fn from_dataset(ds: &Dataset, features: &[String]) -> Result<Self> {
        if features.is_empty() {
            return Err(Error::InvalidArgument("no features selected".to_string()));
        }
        let mut indices = Vec::with_capacity(features.len());
        for name in features {
            let idx = ds
                .schema
                .feature_index(name)
                .ok_or_else(|| Error::InvalidArgument(format!("unknown feature {name:?}")))?;
            if !matches!(ds.schema.features[idx].kind, FeatureKind::Numeric { .. }) {
                return Err(Error::InvalidArgument(format!(
                    "feature {name:?} is not numeric"
                )));
            }
            indices.push(idx);
        }
        let points = ds
            .rows
            .iter()
            .map(|row| {
                indices
                    .iter()
                    .map(|&i| row.values[i].as_num().expect("numeric by schema"))
                    .collect()
            })
            .collect();
        PointMatrix::new(points, features.to_vec())
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.points[0].len()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct KMeansParams {
    pub k: usize,
    pub seed: u64,
    pub max_iter: usize,
    pub tol: f64,
    pub restarts: usize,
}

impl Default for KMeansParams {
    fn default() -> Self {
        KMeansParams {
            k: 3,
            seed: 42,
            max_iter: 300,
            tol: 1e-6,
            restarts: 10,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct KMeansResult {
    pub centroids: Vec<Vec<f64>>,
    pub assignment: Vec<usize>,
    pub inertia: f64,
    pub iterations: usize,
    pub restarts_used: usize,
    pub seed: u64,
    /// Within-cluster sum of squares after each Lloyd iteration of the
    /// winning restart; never increasing.
    pub inertia_history: Vec<f64>,
}

/// Outcome of a single Lloyd run from explicit starting centroids.
#[derive(Debug, Clone, PartialEq)]
pub struct LloydRun {
    pub centroids: Vec<Vec<f64>>,
    pub assignment: Vec<usize>,
    pub inertia: f64,
    pub iterations: usize,
    pub inertia_history: Vec<f64>,
}

fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Index of the nearest centroid by Euclidean distance; ties break to the
/// lowest index.
pub fn assign(centroids: &[Vec<f64>], point: &[f64]) -> Result<usize> {
    if centroids.is_empty() {
        return Err(Error::InvalidArgument("no centroids".to_string()));
    }
    let mut best = 0;
    let mut best_d = f64::INFINITY;
    for (i, c) in centroids.iter().enumerate() {
        if c.len() != point.len() {
            return Err(Error::InvalidArgument(format!(
                "centroid {i} has {} dimensions, point has {}",
                c.len(),
                point.len()
            )));
        }
        let d = squared_distance(c, point);
        if d < best_d {
            best_d = d;
            best = i;
        }
    }
    Ok(best)
}

/// Within-cluster sum of squared distances for a given assignment.
pub fn inertia(data: &PointMatrix, centroids: &[Vec<f64>], assignment: &[usize]) -> Result<f64> {
    if assignment.len() != data.len() {
        return Err(Error::InvalidArgument(format!(
            "{} assignments for {} points",
            assignment.len(),
            data.len()
        )));
    }
    let mut total = 0.0;
    for (p, &c) in data.points.iter().zip(assignment) {
        let centroid = centroids
            .get(c)
            .ok_or_else(|| Error::InvalidArgument(format!("assignment index {c} out of range")))?;
        if centroid.len() != p.len() {
            return Err(Error::InvalidArgument(
                "centroid dimension mismatch".to_string(),
            ));
        }
        total += squared_distance(p, centroid);
    }
    Ok(total)
}

fn cluster_means(data: &PointMatrix, assignment: &[usize], k: usize) -> Vec<Vec<f64>> {
    let d = data.dim();
    let mut sums = vec![vec![0.0; d]; k];
    let mut counts = vec![0usize; k];
    for (p, &c) in data.points.iter().zip(assignment) {
        counts[c] += 1;
        for (s, x) in sums[c].iter_mut().zip(p) {
            *s += x;
        }
    }
    for (sum, &count) in sums.iter_mut().zip(&counts) {
        if count > 0 {
            for s in sum.iter_mut() {
                *s /= count as f64;
            }
        }
    }
    sums
}

/// Moves the farthest point from a multi-point cluster into each empty
/// cluster, so no cluster stays empty while k <= n.
fn repair_empty_clusters(
    data: &PointMatrix,
    centroids: &[Vec<f64>],
    assignment: &mut [usize],
    k: usize,
) {
    let mut sizes = vec![0usize; k];
    for &c in assignment.iter() {
        sizes[c] += 1;
    }
    for empty in 0..k {
        if sizes[empty] > 0 {
            continue;
        }
        let mut farthest: Option<(usize, f64)> = None;
        for (i, p) in data.points.iter().enumerate() {
            if sizes[assignment[i]] <= 1 {
                continue; // never empty a singleton
            }
            let d = squared_distance(p, &centroids[assignment[i]]);
            if farthest.is_none_or(|(_, best)| d > best) {
                farthest = Some((i, d));
            }
        }
        if let Some((i, _)) = farthest {
            sizes[assignment[i]] -= 1;
            assignment[i] = empty;
            sizes[empty] += 1;
        }
    }
}

/// One Lloyd run from explicit initial centroids. Records the inertia after
/// every iteration; the recorded sequence never increases.
pub fn lloyd(
    data: &PointMatrix,
    initial: Vec<Vec<f64>>,
    max_iter: usize,
    tol: f64,
) -> Result<LloydRun> {
    let k = initial.len();
    if k == 0 || k > data.len() {
        return Err(Error::InvalidArgument(format!(
            "k = {k} must satisfy 1 <= k <= {}",
            data.len()
        )));
    }
    if max_iter == 0 {
        return Err(Error::InvalidArgument(
            "max_iter must be at least 1".to_string(),
        ));
    }
    if tol < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "tolerance must be >= 0, got {tol}"
        )));
    }

    let n = data.len();
    let mut centroids = initial;
    let mut assignment = vec![0usize; n];
    let mut history = Vec::new();
    let mut iterations = 0;

    loop {
        for (i, p) in data.points.iter().enumerate() {
            assignment[i] = assign(&centroids, p)?;
        }
        repair_empty_clusters(data, &centroids, &mut assignment, k);

        let new_centroids = cluster_means(data, &assignment, k);
        let j = inertia(data, &new_centroids, &assignment)?;
        history.push(j);

        let movement = centroids
            .iter()
            .zip(&new_centroids)
            .map(|(a, b)| squared_distance(a, b).sqrt())
            .fold(0.0f64, f64::max);
        centroids = new_centroids;
        iterations += 1;

        if movement < tol || movement == 0.0 || iterations >= max_iter {
            break;
        }
    }

    // Final coherence pass: every point ends on a nearest centroid (ties to
    // the lowest index), with empties refilled as exact singletons.
    for (i, p) in data.points.iter().enumerate() {
        assignment[i] = assign(&centroids, p)?;
    }
    let mut sizes = vec![0usize; k];
    for &c in &assignment {
        sizes[c] += 1;
    }
    for empty in 0..k {
        if sizes[empty] > 0 {
            continue;
        }
        let mut farthest: Option<(usize, f64)> = None;
        for (i, p) in data.points.iter().enumerate() {
            if sizes[assignment[i]] <= 1 {
                continue;
            }
            let d = squared_distance(p, &centroids[assignment[i]]);
            if farthest.is_none_or(|(_, best)| d > best) {
                farthest = Some((i, d));
            }
        }
        if let Some((i, _)) = farthest {
            sizes[assignment[i]] -= 1;
            assignment[i] = empty;
            sizes[empty] += 1;
            centroids[empty] = data.points[i].clone();
        }
    }
    let final_inertia = inertia(data, &centroids, &assignment)?;
    history.push(final_inertia);

    Ok(LloydRun {
        centroids,
        assignment,
        inertia: final_inertia,
        iterations,
        inertia_history: history,
    })
}

/// Multi-restart fit returning the lowest-inertia run.
pub fn fit(data: &PointMatrix, params: &KMeansParams) -> Result<KMeansResult> {
    if params.k == 0 || params.k > data.len() {
        return Err(Error::InvalidArgument(format!(
            "k = {} must satisfy 1 <= k <= {}",
            params.k,
            data.len()
        )));
    }
    if params.restarts == 0 {
        return Err(Error::InvalidArgument(
            "restarts must be at least 1".to_string(),
        ));
    }

    let mut best: Option<LloydRun> = None;
    for restart in 0..params.restarts {
        // Each restart gets its own generator stream derived from the seed.
        let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
        rng.set_stream(restart as u64);
        let chosen = rand::seq::index::sample(&mut rng, data.len(), params.k);
        let initial: Vec<Vec<f64>> = chosen.iter().map(|i| data.points[i].clone()).collect();

        let run = lloyd(data, initial, params.max_iter, params.tol)?;
        if best.as_ref().is_none_or(|b| run.inertia < b.inertia) {
            best = Some(run);
        }
    }
    let best = best.expect("restarts >= 1");
    Ok(KMeansResult {
        centroids: best.centroids,
        assignment: best.assignment,
        inertia: best.inertia,
        iterations: best.iterations,
        restarts_used: params.restarts,
        seed: params.seed,
        inertia_history: best.inertia_history,
    })
}

/// Per-column zero-mean unit-variance scaling, reported alongside cluster
/// summaries so assignments stay reproducible in original units.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Standardizer {
    pub means: Vec<f64>,
    pub stds: Vec<f64>,
}

impl Standardizer {
    pub fn fit(data: &PointMatrix) -> Self {
        let n = data.len() as f64;
        let d = data.dim();
        let mut means = vec![0.0; d];
        for p in &data.points {
            for (m, x) in means.iter_mut().zip(p) {
                *m += x;
            }
        }
        for m in means.iter_mut() {
            *m /= n;
        }
        let mut stds = vec![0.0; d];
        for p in &data.points {
            for ((s, x), m) in stds.iter_mut().zip(p).zip(&means) {
                *s += (x - m) * (x - m);
            }
        }
        for s in stds.iter_mut() {
            *s = (*s / n).sqrt();
            if *s == 0.0 {
                *s = 1.0; // constant column: leave it unscaled
            }
        }
        Standardizer { means, stds }
    }

    pub fn transform(&self, data: &PointMatrix) -> PointMatrix {
        let points = data
            .points
            .iter()
            .map(|p| {
                p.iter()
                    .zip(&self.means)
                    .zip(&self.stds)
                    .map(|((x, m), s)| (x - m) / s)
                    .collect()
            })
            .collect();
        PointMatrix {
            points,
            feature_names: data.feature_names.clone(),
        }
    }

    /// Maps a standardized point (e.g. a centroid) back to original units.
    pub fn inverse_point(&self, point: &[f64]) -> Vec<f64> {
        point
            .iter()
            .zip(&self.means)
            .zip(&self.stds)
            .map(|((z, m), s)| z * s + m)
            .collect()
    }
}
