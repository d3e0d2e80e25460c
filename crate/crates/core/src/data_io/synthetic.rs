use ndarray::Array2;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::dataset::LabeledDataset;
use crate::error::{Error, Result};

/// Isotropic unit-variance Gaussian blobs. Class `c` is centred at
/// `(separation / sqrt 2) e_c`, so any two centres are `separation` apart.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlobsConfig {
    pub seed: u64,
    pub n: usize,
    pub d: usize,
    pub classes: usize,
    pub separation: f64,
}

/// Balanced classes (sizes differ by at most one) in shuffled order.
pub fn synthetic_blobs(cfg: &BlobsConfig) -> Result<LabeledDataset<f64>> {
    if cfg.n == 0 || cfg.d == 0 {
        return Err(Error::InvalidDimension {
            what: "synthetic blobs shape",
            value: 0,
        });
    }
    if cfg.classes < 1 || cfg.classes > cfg.d {
        return Err(Error::param(
            "classes",
            format!("need 1 <= classes <= d, got {} classes in d={}", cfg.classes, cfg.d),
        ));
    }
    if !(cfg.separation.is_finite() && cfg.separation >= 0.0) {
        return Err(Error::param("separation", "must be finite and non-negative"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut labels: Vec<usize> = (0..cfg.n).map(|i| i % cfg.classes).collect();
    labels.shuffle(&mut rng);
    let offset = cfg.separation / std::f64::consts::SQRT_2;
    let mut x: Array2<f64> = Array2::from_shape_simple_fn((cfg.n, cfg.d), || StandardNormal.sample(&mut rng));
    for (i, &c) in labels.iter().enumerate() {
        x[[i, c]] += offset;
    }
    LabeledDataset::new(x, labels, cfg.classes)
}
