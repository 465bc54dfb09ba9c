//! Deterministic train/test splitting.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::dataset::Dataset;
use crate::error::{Error, Result};

/// Shuffles rows with a seeded generator and splits at
/// `round(n * train_fraction)`. The two parts partition the input.
pub fn split(ds: &Dataset, train_fraction: f64, seed: u64) -> Result<(Dataset, Dataset)> {
    if !(train_fraction > 0.0 && train_fraction < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "train fraction must lie in (0, 1), got {train_fraction}"
        )));
    }
    if ds.rows.is_empty() {
        return Err(Error::InsufficientData(
            "cannot split an empty dataset".to_string(),
        ));
    }

    let n = ds.rows.len();
    let mut indices: Vec<usize> = (0..n).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    indices.shuffle(&mut rng);

    let train_len = ((n as f64) * train_fraction).round() as usize;
    let train_len = train_len.min(n);

    let take = |idxs: &[usize]| Dataset {
        schema: ds.schema.clone(),
        rows: idxs.iter().map(|&i| ds.rows[i].clone()).collect(),
    };
    Ok((take(&indices[..train_len]), take(&indices[train_len..])))
}
