//! Declarative experiment description (`schema_version` 1).
//!
//! Every random choice is driven by a seed spelled out in the manifest;
//! there are no entropy-based defaults. Relative paths are resolved against
//! the manifest's directory and input files must exist at load time.

use std::path::{Path, PathBuf};

use ndarray::Array2;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::csv::{load_csv, parse_csv};
use super::synthetic::{synthetic_blobs, BlobsConfig};
use crate::dataset::LabeledDataset;
use crate::error::{Error, Result};
use crate::kernels::KernelSpec;
use crate::model_selection::{split, Estimator, GridSearchConfig, Hyperparameters};
use crate::projection::{FeatureFamily, FeatureMapSpec};
use crate::ridge::{RidgeMode, SolverConfig};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentManifest {
    pub schema_version: u32,
    pub output_dir: PathBuf,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub data: Option<DataSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub features: Option<FeaturesSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kernel: Option<KernelSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ridge: Option<RidgeSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridSearchConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub convergence: Option<ConvergenceSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub binarize: Option<BinarizeSection>,
    /// Worker threads; defaults to the available cores.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub workers: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DataSection {
    pub source: DataSource,
    /// Separate test rows; otherwise `split.test_fraction` carves them out.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub test_source: Option<DataSource>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub split: Option<SplitSection>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum DataSource {
    Csv {
        path: PathBuf,
        #[serde(default = "yes")]
        has_labels: bool,
    },
    /// Feature matrix in the binary container, labels as a one-column CSV.
    Container {
        path: PathBuf,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        labels: Option<PathBuf>,
    },
    SyntheticBlobs {
        seed: u64,
        n: usize,
        d: usize,
        classes: usize,
        separation: f64,
    },
    /// Brings its own test rows (the official test set).
    FashionMnistSubset {
        n_train: usize,
        n_test: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        base_url: Option<String>,
    },
}

fn yes() -> bool {
    true
}

fn default_validation_fraction() -> f64 {
    0.2
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SplitSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub test_fraction: Option<f64>,
    #[serde(default = "default_validation_fraction")]
    pub validation_fraction: f64,
    /// Test split uses `seed`, the validation split `seed + 1`.
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FeaturesSection {
    pub seed: u64,
    pub map: FeatureMapSpec,
    /// Reject non-binary inputs to optical maps instead of warning.
    #[serde(default)]
    pub strict_binary: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelSection {
    pub spec: KernelSpec,
    #[serde(default = "one")]
    pub scale: f64,
    #[serde(default)]
    pub bias: f64,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RidgeSection {
    /// `primal` trains on `features`, `dual` on the exact `kernel`.
    #[serde(default = "primal")]
    pub mode: RidgeMode,
    pub alpha: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub solver: Option<SolverConfig>,
    /// A grid-search result whose best point replaces scale, alpha, bias and gamma.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hyperparameters_from: Option<PathBuf>,
}

fn primal() -> RidgeMode {
    RidgeMode::Primal
}

fn default_pairs() -> usize {
    20
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConvergenceSection {
    /// Even feature exponents `m`.
    pub exponents: Vec<u32>,
    pub dims: Vec<usize>,
    #[serde(default = "default_pairs")]
    pub pairs: usize,
    #[serde(default = "default_pairs")]
    pub pair_dim: usize,
    pub pairs_seed: u64,
    pub replicates: usize,
    pub base_seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tail: Option<TailSection>,
}

fn default_tail_replicates() -> usize {
    crate::convergence::MIN_TAIL_REPLICATES
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TailSection {
    pub t_values: Vec<f64>,
    #[serde(default = "default_tail_replicates")]
    pub replicates: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BinarizeSection {
    pub threshold: f64,
    /// Pick the threshold from `grid.threshold_grid` instead.
    #[serde(default)]
    pub search: bool,
}

fn manifest_err(path: impl Into<String>, reason: impl std::fmt::Display) -> Error {
    Error::Manifest {
        path: path.into(),
        reason: reason.to_string(),
    }
}

fn resolve(base: &Path, p: &mut PathBuf) {
    if p.is_relative() {
        *p = base.join(&*p);
    }
}

fn must_exist(p: &Path, field: &str) -> Result<()> {
    if p.exists() {
        Ok(())
    } else {
        Err(manifest_err(field, format!("path {} does not exist", p.display())))
    }
}

impl DataSource {
    fn resolve(&mut self, base: &Path, field: &str) -> Result<()> {
        match self {
            DataSource::Csv { path, .. } => {
                resolve(base, path);
                must_exist(path, &format!("{field}.path"))
            }
            DataSource::Container { path, labels } => {
                resolve(base, path);
                must_exist(path, &format!("{field}.path"))?;
                if let Some(l) = labels {
                    resolve(base, l);
                    must_exist(l, &format!("{field}.labels"))?;
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    pub fn provides_test_set(&self) -> bool {
        matches!(self, DataSource::FashionMnistSubset { .. })
    }

    /// Features, optional labels, and a built-in test set if the source has one.
    pub fn load(&self) -> Result<LoadedData> {
        match self {
            DataSource::Csv { path, has_labels } => {
                let t = load_csv(path, *has_labels)?;
                Ok(LoadedData {
                    features: t.features,
                    labels: t.labels,
                    test: None,
                })
            }
            DataSource::Container { path, labels } => {
                let features = super::container::load_matrix_any(path)?.into_f64();
                let labels = match labels {
                    Some(lp) => {
                        let file = std::fs::File::open(lp).map_err(|e| Error::io(lp, e))?;
                        let t = parse_csv(file, &lp.display().to_string(), false)?;
                        if t.cols() != 1 {
                            return Err(manifest_err("data.labels", "label CSV must have one column"));
                        }
                        let labels = t
                            .features
                            .iter()
                            .enumerate()
                            .map(|(row, &v)| {
                                if v >= 0.0 && v.fract() == 0.0 {
                                    Ok(v as usize)
                                } else {
                                    Err(Error::CsvParse {
                                        path: lp.display().to_string(),
                                        row: row + 1,
                                        col: 1,
                                        reason: format!("invalid label {v}"),
                                    })
                                }
                            })
                            .collect::<Result<Vec<_>>>()?;
                        Some(labels)
                    }
                    None => None,
                };
                Ok(LoadedData {
                    features,
                    labels,
                    test: None,
                })
            }
            &DataSource::SyntheticBlobs {
                seed,
                n,
                d,
                classes,
                separation,
            } => {
                let ds = synthetic_blobs(&BlobsConfig {
                    seed,
                    n,
                    d,
                    classes,
                    separation,
                })?;
                Ok(LoadedData::from_dataset(ds))
            }
            DataSource::FashionMnistSubset {
                n_train,
                n_test,
                base_url,
            } => load_fashion(*n_train, *n_test, base_url.as_deref()),
        }
    }
}

#[cfg(feature = "fetch")]
fn load_fashion(n_train: usize, n_test: usize, base_url: Option<&str>) -> Result<LoadedData> {
    use super::fetch::{fashion_mnist_subset, FetchSource};
    let mut source = FetchSource::fashion_mnist();
    if let Some(url) = base_url {
        source.base_url = url.to_string();
    }
    let (train, test) = fashion_mnist_subset(&source, &super::default_cache_dir(), n_train, n_test)?;
    let mut loaded = LoadedData::from_dataset(train);
    loaded.test = Some(test);
    Ok(loaded)
}

#[cfg(not(feature = "fetch"))]
fn load_fashion(_: usize, _: usize, _: Option<&str>) -> Result<LoadedData> {
    Err(Error::Unsupported("built without the `fetch` feature".into()))
}

/// Rows read from a [`DataSource`].
#[derive(Debug, Clone, PartialEq)]
pub struct LoadedData {
    pub features: Array2<f64>,
    pub labels: Option<Vec<usize>>,
    pub test: Option<LabeledDataset<f64>>,
}

impl LoadedData {
    fn from_dataset(ds: LabeledDataset<f64>) -> Self {
        Self {
            features: ds.features().to_owned(),
            labels: Some(ds.labels().to_vec()),
            test: None,
        }
    }

    pub fn dataset(&self, num_classes: Option<usize>) -> Result<LabeledDataset<f64>> {
        let labels = self
            .labels
            .clone()
            .ok_or_else(|| manifest_err("data.source", "this command needs labeled data"))?;
        match num_classes {
            Some(c) => LabeledDataset::new(self.features.clone(), labels, c),
            None => LabeledDataset::from_labels(self.features.clone(), labels),
        }
    }
}

/// Train / validation / test partition of the manifest's data.
#[derive(Debug, Clone, PartialEq)]
pub struct Splits {
    pub train: LabeledDataset<f64>,
    pub validation: LabeledDataset<f64>,
    pub test: LabeledDataset<f64>,
}

impl DataSection {
    pub fn load(&self) -> Result<LoadedData> {
        self.source.load()
    }

    /// Labeled train/validation/test sets.
    pub fn splits(&self) -> Result<Splits> {
        let split_cfg = self
            .split
            .ok_or_else(|| manifest_err("data.split", "a split section (with seed) is required"))?;
        let main = self.load()?;
        let test_loaded = match (&self.test_source, main.test.clone()) {
            (Some(src), _) => Some(src.load()?.dataset(None)?),
            (None, builtin) => builtin,
        };
        let main_classes = main.labels.as_ref().and_then(|l| l.iter().max()).map_or(1, |m| m + 1);
        let classes = main_classes.max(test_loaded.as_ref().map_or(1, |t| t.num_classes()));
        let all = main.dataset(Some(classes))?;
        let (rest, test) = match test_loaded {
            Some(t) => (all, LabeledDataset::new(t.features().to_owned(), t.labels().to_vec(), classes)?),
            None => {
                let fraction = split_cfg
                    .test_fraction
                    .ok_or_else(|| manifest_err("data.split.test_fraction", "no test rows: set test_fraction or test_source"))?;
                split(&all, fraction, split_cfg.seed)
                    .map_err(|e| manifest_err("data.split.test_fraction", e))?
            }
        };
        let (train, validation) = split(&rest, split_cfg.validation_fraction, split_cfg.seed.wrapping_add(1))
            .map_err(|e| manifest_err("data.split.validation_fraction", e))?;
        Ok(Splits {
            train,
            validation,
            test,
        })
    }
}

impl ExperimentManifest {
    /// Read, resolve and validate a manifest file.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let value: Value = serde_json::from_str(&text).map_err(|e| manifest_err("$", e))?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Self::from_value(value, &base)
    }

    /// Deserialize (reporting the JSON path of schema errors), resolve
    /// relative paths against `base_dir`, and validate.
    pub fn from_value(value: Value, base_dir: &Path) -> Result<Self> {
        let mut m: ExperimentManifest = serde_path_to_error::deserialize(value).map_err(|e| {
            let path = e.path().to_string();
            manifest_err(path, e.into_inner())
        })?;
        m.resolve_paths(base_dir)?;
        m.validate()?;
        Ok(m)
    }

    fn resolve_paths(&mut self, base: &Path) -> Result<()> {
        resolve(base, &mut self.output_dir);
        if let Some(data) = &mut self.data {
            data.source.resolve(base, "data.source")?;
            if let Some(t) = &mut data.test_source {
                t.resolve(base, "data.test_source")?;
            }
        }
        if let Some(p) = self.ridge.as_mut().and_then(|r| r.hyperparameters_from.as_mut()) {
            resolve(base, p);
            must_exist(p, "ridge.hyperparameters_from")?;
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(manifest_err(
                "schema_version",
                format!("unsupported version {}, expected {SCHEMA_VERSION}", self.schema_version),
            ));
        }
        if self.workers == Some(0) {
            return Err(manifest_err("workers", "must be at least 1"));
        }
        if let Some(f) = &self.features {
            f.map.validate().map_err(|e| manifest_err("features.map", e))?;
        }
        if let Some(k) = &self.kernel {
            k.spec.validate().map_err(|e| manifest_err("kernel.spec", e))?;
            if !(k.scale.is_finite() && k.scale > 0.0) {
                return Err(manifest_err("kernel.scale", "must be positive"));
            }
            if !(k.bias.is_finite() && k.bias >= 0.0) {
                return Err(manifest_err("kernel.bias", "must be non-negative"));
            }
        }
        if let Some(r) = &self.ridge {
            if !(r.alpha.is_finite() && r.alpha > 0.0) {
                return Err(manifest_err("ridge.alpha", "must be positive"));
            }
            match r.mode {
                RidgeMode::Primal if self.features.is_none() => {
                    return Err(manifest_err("features", "primal ridge needs a features section"));
                }
                RidgeMode::Dual if self.kernel.is_none() => {
                    return Err(manifest_err("kernel", "dual ridge needs a kernel section"));
                }
                _ => {}
            }
        }
        if let Some(s) = self.data.as_ref().and_then(|d| d.split) {
            let inside = |f: f64| f > 0.0 && f < 1.0;
            if let Some(t) = s.test_fraction {
                if !inside(t) {
                    return Err(manifest_err("data.split.test_fraction", "must lie in (0, 1)"));
                }
            }
            if !inside(s.validation_fraction) {
                return Err(manifest_err("data.split.validation_fraction", "must lie in (0, 1)"));
            }
        }
        if let Some(c) = &self.convergence {
            if c.exponents.is_empty() || c.exponents.iter().any(|&m| m == 0 || m % 2 == 1) {
                return Err(manifest_err("convergence.exponents", "need one or more positive even exponents"));
            }
            if c.dims.is_empty() || c.dims[0] == 0 || c.dims.windows(2).any(|w| w[0] >= w[1]) {
                return Err(manifest_err("convergence.dims", "must be positive and strictly increasing"));
            }
            if c.pairs == 0 || c.pair_dim == 0 {
                return Err(manifest_err("convergence.pairs", "pair count and dimension must be positive"));
            }
            if c.replicates == 0 {
                return Err(manifest_err("convergence.replicates", "must be at least 1"));
            }
            if let Some(t) = &c.tail {
                if t.replicates < crate::convergence::MIN_TAIL_REPLICATES {
                    return Err(manifest_err(
                        "convergence.tail.replicates",
                        format!("need at least {}", crate::convergence::MIN_TAIL_REPLICATES),
                    ));
                }
                if t.t_values.is_empty() || t.t_values.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
                    return Err(manifest_err("convergence.tail.t_values", "need finite non-negative thresholds"));
                }
            }
        }
        if let Some(b) = &self.binarize {
            if !b.threshold.is_finite() {
                return Err(manifest_err("binarize.threshold", "must be finite"));
            }
            if b.search && self.grid.as_ref().is_none_or(|g| g.threshold_grid.is_empty()) {
                return Err(manifest_err("grid.threshold_grid", "threshold search needs a non-empty grid"));
            }
        }
        Ok(())
    }

    pub fn solver(&self) -> SolverConfig {
        self.ridge.as_ref().and_then(|r| r.solver).unwrap_or_default()
    }

    /// Estimator and hyperparameters described by the `ridge` section
    /// (before any `hyperparameters_from` override).
    pub fn estimator(&self) -> Result<(Estimator, Hyperparameters)> {
        let ridge = self.ridge.as_ref().ok_or_else(|| manifest_err("ridge", "section is required"))?;
        match ridge.mode {
            RidgeMode::Primal => {
                let f = self.features.as_ref().ok_or_else(|| manifest_err("features", "section is required"))?;
                let gamma = match f.map.family {
                    FeatureFamily::RbfFourier { gamma } => Some(gamma),
                    _ => None,
                };
                Ok((
                    Estimator::RandomFeatures {
                        features: f.map,
                        seed: f.seed,
                    },
                    Hyperparameters {
                        scale: f.map.scale,
                        alpha: ridge.alpha,
                        bias: f.map.bias,
                        gamma,
                    },
                ))
            }
            RidgeMode::Dual => {
                let k = self.kernel.as_ref().ok_or_else(|| manifest_err("kernel", "section is required"))?;
                let gamma = match k.spec {
                    KernelSpec::Rbf { gamma } => Some(gamma),
                    _ => None,
                };
                Ok((
                    Estimator::ExactKernel { kernel: k.spec },
                    Hyperparameters {
                        scale: k.scale,
                        alpha: ridge.alpha,
                        bias: k.bias,
                        gamma,
                    },
                ))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn base() -> Value {
        json!({
            "schema_version": 1,
            "output_dir": "out",
            "data": {
                "source": {"kind": "synthetic_blobs", "seed": 1, "n": 100, "d": 5, "classes": 2, "separation": 4.0},
                "split": {"test_fraction": 0.2, "seed": 7}
            },
            "features": {"seed": 3, "map": {"family": "optical", "exponent": 2.0, "dim": 50}},
            "ridge": {"alpha": 0.01}
        })
    }

    #[test]
    fn parses_and_resolves() {
        let m = ExperimentManifest::from_value(base(), Path::new("/tmp/x")).unwrap();
        assert_eq!(m.output_dir, PathBuf::from("/tmp/x/out"));
        let (est, params) = m.estimator().unwrap();
        assert!(matches!(est, Estimator::RandomFeatures { seed: 3, .. }));
        assert_eq!(params.alpha, 0.01);
        assert_eq!(m.solver(), SolverConfig::cholesky());
        let s = m.data.as_ref().unwrap().splits().unwrap();
        assert_eq!(s.test.len(), 20);
        assert_eq!(s.validation.len(), 16);
        assert_eq!(s.train.len(), 64);
        // serialization round trip
        let again: ExperimentManifest = serde_json::from_value(serde_json::to_value(&m).unwrap()).unwrap();
        assert_eq!(again, m);
    }

    #[test]
    fn schema_errors_carry_json_path() {
        let mut v = base();
        v["features"]["map"]["dim"] = json!("many");
        match ExperimentManifest::from_value(v, Path::new(".")) {
            Err(Error::Manifest { path, .. }) => assert_eq!(path, "features.map.dim"),
            other => panic!("{other:?}"),
        }
        let mut v = base();
        v["features"]["map"]["bogus"] = json!(1);
        assert!(ExperimentManifest::from_value(v, Path::new(".")).is_err());
        let mut v = base();
        v["ridge"]["bogus"] = json!(1);
        assert!(matches!(
            ExperimentManifest::from_value(v, Path::new(".")),
            Err(Error::Manifest { .. })
        ));
    }

    #[test]
    fn seeds_are_required() {
        let mut v = base();
        v["features"].as_object_mut().unwrap().remove("seed");
        match ExperimentManifest::from_value(v, Path::new(".")) {
            Err(Error::Manifest { reason, .. }) => assert!(reason.contains("seed"), "{reason}"),
            other => panic!("{other:?}"),
        }
        let mut v = base();
        v["data"]["split"].as_object_mut().unwrap().remove("seed");
        assert!(ExperimentManifest::from_value(v, Path::new(".")).is_err());
    }

    #[test]
    fn validation_failures() {
        let mut v = base();
        v["features"]["map"]["dim"] = json!(0);
        match ExperimentManifest::from_value(v, Path::new(".")) {
            Err(Error::Manifest { path, .. }) => assert_eq!(path, "features.map"),
            other => panic!("{other:?}"),
        }
        let mut v = base();
        v["schema_version"] = json!(2);
        assert!(ExperimentManifest::from_value(v, Path::new(".")).is_err());
        let mut v = base();
        v["data"]["source"] = json!({"kind": "csv", "path": "nope.csv"});
        match ExperimentManifest::from_value(v, Path::new("/nonexistent")) {
            Err(Error::Manifest { path, .. }) => assert_eq!(path, "data.source.path"),
            other => panic!("{other:?}"),
        }
        let mut v = base();
        v["ridge"]["mode"] = json!("dual");
        assert!(ExperimentManifest::from_value(v, Path::new(".")).is_err());
    }

    #[test]
    fn missing_test_rows_is_a_manifest_error() {
        let mut v = base();
        v["data"]["split"] = json!({"seed": 1});
        let m = ExperimentManifest::from_value(v, Path::new(".")).unwrap();
        match m.data.as_ref().unwrap().splits() {
            Err(Error::Manifest { path, .. }) => assert_eq!(path, "data.split.test_fraction"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn container_source_with_labels() {
        let dir = tempfile::tempdir().unwrap();
        let x = ndarray::array![[1.0, 2.0], [3.0, 4.0], [5.0, 6.0]];
        super::super::save_matrix(&dir.path().join("x.oprf"), &x).unwrap();
        std::fs::write(dir.path().join("y.csv"), "0\n1\n1\n").unwrap();
        let mut v = base();
        v["data"] = json!({"source": {"kind": "container", "path": "x.oprf", "labels": "y.csv"}});
        let m = ExperimentManifest::from_value(v, dir.path()).unwrap();
        let loaded = m.data.unwrap().load().unwrap();
        assert_eq!(loaded.features, x);
        assert_eq!(loaded.labels, Some(vec![0, 1, 1]));
    }

    #[test]
    fn convergence_section_checks() {
        let mut v = base();
        v["convergence"] = json!({"exponents": [2, 3], "dims": [10, 100], "pairs_seed": 1, "replicates": 2, "base_seed": 5});
        assert!(ExperimentManifest::from_value(v.clone(), Path::new(".")).is_err());
        v["convergence"]["exponents"] = json!([2, 4]);
        let m = ExperimentManifest::from_value(v.clone(), Path::new(".")).unwrap();
        assert_eq!(m.convergence.unwrap().pairs, 20);
        v["convergence"]["tail"] = json!({"t_values": [0.1], "replicates": 10});
        assert!(ExperimentManifest::from_value(v, Path::new(".")).is_err());
    }
}
