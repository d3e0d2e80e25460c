//! Train/validation splits, log-spaced hyperparameter grids, and exhaustive
//! grid search for ridge classifiers on random features or exact kernels.

use std::io::Write;
use std::time::Instant;

use ndarray::{Array2, ArrayView2};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataset::LabeledDataset;
use crate::error::{Error, Result};
use crate::kernels::{gram, KernelSpec};
use crate::projection::{append_bias, binarize_values, BinarizerConfig, FeatureFamily, FeatureMap, FeatureMapSpec};
use crate::ridge::{
    accuracy, classify, encode_labels, fit_dual, fit_primal, mean_squared_error, RidgeModel, SolverConfig,
    SolverStats,
};
use crate::scalar::Scalar;

/// Sorted, disjoint index sets covering `0..n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitIndices {
    pub train: Vec<usize>,
    pub validation: Vec<usize>,
}

/// Random split holding out `round(n * fraction)` rows.
pub fn split_indices(n: usize, fraction: f64, seed: u64) -> Result<SplitIndices> {
    if !(fraction > 0.0 && fraction < 1.0) {
        return Err(Error::param("fraction", format!("must lie in (0, 1), got {fraction}")));
    }
    let held = (n as f64 * fraction).round() as usize;
    if held == 0 || held >= n {
        return Err(Error::DegenerateSplit(format!(
            "{n} rows with fraction {fraction} leave {held} held out and {} kept",
            n.saturating_sub(held)
        )));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let mut validation = order[..held].to_vec();
    let mut train = order[held..].to_vec();
    validation.sort_unstable();
    train.sort_unstable();
    Ok(SplitIndices { train, validation })
}

/// `(train, validation)` subsets of `dataset`.
pub fn split<T: Scalar>(
    dataset: &LabeledDataset<T>,
    fraction: f64,
    seed: u64,
) -> Result<(LabeledDataset<T>, LabeledDataset<T>)> {
    let idx = split_indices(dataset.len(), fraction, seed)?;
    Ok((dataset.subset(&idx.train)?, dataset.subset(&idx.validation)?))
}

/// `1 / d`, the usual centre for an RBF bandwidth search.
pub fn gamma_heuristic(d: usize) -> Result<f64> {
    if d == 0 {
        return Err(Error::InvalidDimension {
            what: "gamma heuristic input dimension",
            value: 0,
        });
    }
    Ok(1.0 / d as f64)
}

fn decimal(mantissa: u32, exponent: i32) -> f64 {
    // parsing gives the double nearest to the decimal, unlike k * 10^e
    format!("{mantissa}e{exponent}").parse().expect("valid float literal")
}

/// `10^lo, ..., 10^hi`.
pub fn log10_grid(lo: i32, hi: i32) -> Vec<f64> {
    (lo..=hi).map(|e| decimal(1, e)).collect()
}

/// `k * 10^e` for `k = 1..9` over the decade of `center`'s leading digit and
/// its two neighbours.
pub fn gamma_grid(center: f64) -> Result<Vec<f64>> {
    if !(center.is_finite() && center > 0.0) {
        return Err(Error::param("gamma", format!("grid centre must be positive, got {center}")));
    }
    let e0 = center.log10().floor() as i32;
    Ok((e0 - 1..=e0 + 1)
        .flat_map(|e| (1..=9).map(move |k| decimal(k, e)))
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    /// Maximize validation accuracy.
    #[default]
    Accuracy,
    /// Minimize validation mean squared error against the `+1/-1` targets.
    Mse,
}

fn default_scale_grid() -> Vec<f64> {
    log10_grid(-3, 3)
}

fn default_alpha_grid() -> Vec<f64> {
    log10_grid(-6, 3)
}

fn default_bias_grid() -> Vec<f64> {
    std::iter::once(0.0).chain(log10_grid(-2, 2)).collect()
}

fn default_validation_fraction() -> f64 {
    0.2
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSearchConfig {
    #[serde(default = "default_scale_grid")]
    pub scale_grid: Vec<f64>,
    #[serde(default = "default_alpha_grid")]
    pub alpha_grid: Vec<f64>,
    /// RBF only; `None` builds [`gamma_grid`] around [`gamma_heuristic`].
    #[serde(default)]
    pub gamma_grid: Option<Vec<f64>>,
    #[serde(default = "default_bias_grid")]
    pub bias_grid: Vec<f64>,
    /// Only used by [`threshold_search`].
    #[serde(default)]
    pub threshold_grid: Vec<f64>,
    #[serde(default = "default_validation_fraction")]
    pub validation_fraction: f64,
    pub split_seed: u64,
    #[serde(default)]
    pub metric: Metric,
}

impl GridSearchConfig {
    /// Default grids with an explicit split seed.
    pub fn new(split_seed: u64) -> Self {
        Self {
            scale_grid: default_scale_grid(),
            alpha_grid: default_alpha_grid(),
            gamma_grid: None,
            bias_grid: default_bias_grid(),
            threshold_grid: Vec::new(),
            validation_fraction: default_validation_fraction(),
            split_seed,
            metric: Metric::Accuracy,
        }
    }

    /// Single-point grids (bias `0`, no gamma override).
    pub fn single(scale: f64, alpha: f64, split_seed: u64) -> Self {
        Self {
            scale_grid: vec![scale],
            alpha_grid: vec![alpha],
            bias_grid: vec![0.0],
            ..Self::new(split_seed)
        }
    }

    fn check(&self) -> Result<()> {
        fn positive(name: &'static str, g: &[f64]) -> Result<()> {
            if g.is_empty() {
                return Err(Error::param(name, "grid is empty"));
            }
            if let Some(v) = g.iter().find(|v| !(v.is_finite() && **v > 0.0)) {
                return Err(Error::param(name, format!("grid values must be positive, got {v}")));
            }
            Ok(())
        }
        positive("scale_grid", &self.scale_grid)?;
        positive("alpha_grid", &self.alpha_grid)?;
        if let Some(g) = &self.gamma_grid {
            positive("gamma_grid", g)?;
        }
        if self.bias_grid.is_empty() {
            return Err(Error::param("bias_grid", "grid is empty"));
        }
        if let Some(v) = self.bias_grid.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
            return Err(Error::param("bias_grid", format!("grid values must be non-negative, got {v}")));
        }
        if self.threshold_grid.iter().any(|v| !v.is_finite()) {
            return Err(Error::param("threshold_grid", "grid values must be finite"));
        }
        Ok(())
    }
}

/// What gets trained: ridge on random features (primal) or on an exact
/// kernel (dual).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "estimator", rename_all = "snake_case", deny_unknown_fields)]
pub enum Estimator {
    RandomFeatures { features: FeatureMapSpec, seed: u64 },
    ExactKernel { kernel: KernelSpec },
}

impl Estimator {
    fn uses_gamma(&self) -> bool {
        matches!(
            self,
            Estimator::RandomFeatures {
                features: FeatureMapSpec {
                    family: FeatureFamily::RbfFourier { .. },
                    ..
                },
                ..
            } | Estimator::ExactKernel {
                kernel: KernelSpec::Rbf { .. }
            }
        )
    }

    /// The estimator with `bias`, `gamma` and (for features) a unit scale
    /// substituted in.
    fn unscaled(&self, bias: f64, gamma: Option<f64>) -> Estimator {
        match *self {
            Estimator::RandomFeatures { features, seed } => {
                let mut features = features.with_scale(1.0).with_bias(bias);
                if let (FeatureFamily::RbfFourier { .. }, Some(g)) = (features.family, gamma) {
                    features.family = FeatureFamily::RbfFourier { gamma: g };
                }
                Estimator::RandomFeatures { features, seed }
            }
            Estimator::ExactKernel { kernel } => Estimator::ExactKernel {
                kernel: match (kernel, gamma) {
                    (KernelSpec::Rbf { .. }, Some(g)) => KernelSpec::Rbf { gamma: g },
                    (k, _) => k,
                },
            },
        }
    }

    fn current_gamma(&self) -> Option<f64> {
        match self {
            Estimator::RandomFeatures {
                features:
                    FeatureMapSpec {
                        family: FeatureFamily::RbfFourier { gamma },
                        ..
                    },
                ..
            } => Some(*gamma),
            Estimator::ExactKernel {
                kernel: KernelSpec::Rbf { gamma },
            } => Some(*gamma),
            _ => None,
        }
    }
}

/// One point of a grid; `scale` multiplies the features, so an exact kernel
/// is multiplied by `scale^2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Hyperparameters {
    pub scale: f64,
    pub alpha: f64,
    pub bias: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
}

/// Training-side and evaluation-side matrices for one (bias, gamma) choice,
/// before scaling: features `Phi` for primal fits, `K` and `K_eval` for dual.
struct Prepared<T> {
    dual: bool,
    train: Array2<T>,
    eval: Array2<T>,
}

fn prepare<T: Scalar>(
    estimator: &Estimator,
    train_x: ArrayView2<T>,
    eval_x: ArrayView2<T>,
) -> Result<Prepared<T>> {
    match estimator {
        Estimator::RandomFeatures { features, seed } => {
            let map = FeatureMap::<T>::new(*features, *seed, train_x.ncols())?;
            Ok(Prepared {
                dual: false,
                train: map.transform(train_x)?,
                eval: map.transform(eval_x)?,
            })
        }
        Estimator::ExactKernel { kernel } => {
            Ok(Prepared {
                dual: true,
                train: gram(train_x, None, kernel)?.values,
                eval: gram(eval_x, Some(train_x), kernel)?.values,
            })
        }
    }
}

fn biased<T: Scalar>(x: ArrayView2<T>, bias: f64) -> Result<Option<Array2<T>>> {
    if bias > 0.0 {
        append_bias(x, bias).map(Some)
    } else {
        Ok(None)
    }
}

fn prepare_with_bias<T: Scalar>(
    estimator: &Estimator,
    bias: f64,
    train_x: ArrayView2<T>,
    eval_x: ArrayView2<T>,
) -> Result<Prepared<T>> {
    match estimator {
        // the feature map appends the bias column itself
        Estimator::RandomFeatures { .. } => prepare(estimator, train_x, eval_x),
        Estimator::ExactKernel { .. } => {
            let tb = biased(train_x, bias)?;
            let eb = biased(eval_x, bias)?;
            prepare(
                estimator,
                tb.as_ref().map_or(train_x, |a| a.view()),
                eb.as_ref().map_or(eval_x, |a| a.view()),
            )
        }
    }
}

fn scaled<T: Scalar>(m: &Array2<T>, factor: f64) -> Array2<T> {
    if factor == 1.0 {
        m.clone()
    } else {
        let f = T::of(factor);
        m.mapv(|v| v * f)
    }
}

/// Validation metrics of one fitted grid point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Evaluation {
    pub accuracy: f64,
    pub mse: f64,
    pub stats: SolverStats,
}

impl<T: Scalar> Prepared<T> {
    fn fit(&self, scale: f64, alpha: f64, targets: ArrayView2<T>, solver: &SolverConfig) -> Result<RidgeModel<T>> {
        if self.dual {
            fit_dual(scaled(&self.train, scale * scale).view(), targets, alpha, solver)
        } else {
            fit_primal(scaled(&self.train, scale).view(), targets, alpha, solver)
        }
    }

    fn evaluate(
        &self,
        scale: f64,
        alpha: f64,
        targets: ArrayView2<T>,
        eval_labels: &[usize],
        eval_targets: ArrayView2<T>,
        solver: &SolverConfig,
    ) -> Result<Evaluation> {
        let model = self.fit(scale, alpha, targets, solver)?;
        let factor = if self.dual { scale * scale } else { scale };
        let scores = model.predict(scaled(&self.eval, factor).view())?;
        Ok(Evaluation {
            accuracy: accuracy(&classify(scores.view()), eval_labels),
            mse: mean_squared_error(scores.view(), eval_targets),
            stats: *model.stats(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridRow {
    #[serde(flatten)]
    pub params: Hyperparameters,
    pub validation_accuracy: f64,
    /// `None` when the point failed.
    pub validation_mse: Option<f64>,
    pub failed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

pub const GRID_KIND: &str = "grid_search";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSearchResult {
    pub kind: String,
    pub metric: Metric,
    pub estimator: Estimator,
    pub best: Hyperparameters,
    pub best_validation_accuracy: f64,
    pub best_validation_mse: Option<f64>,
    pub train_size: usize,
    pub validation_size: usize,
    /// In iteration order: bias (or gamma) outermost, then scale, then alpha.
    pub full_grid: Vec<GridRow>,
}

pub const GRID_CSV_HEADER: &str = "scale,alpha,bias,gamma,validation_accuracy,validation_mse,failed";

impl GridSearchResult {
    /// The selected estimator, ready to refit on other data or at another `D`.
    pub fn best_estimator(&self) -> Estimator {
        with_params(&self.estimator, &self.best)
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "{GRID_CSV_HEADER}")?;
        for r in &self.full_grid {
            let p = &r.params;
            writeln!(
                w,
                "{},{},{},{},{},{},{}",
                p.scale,
                p.alpha,
                p.bias,
                p.gamma.map(|g| g.to_string()).unwrap_or_default(),
                r.validation_accuracy,
                r.validation_mse.map(|m| m.to_string()).unwrap_or_default(),
                r.failed
            )?;
        }
        Ok(())
    }
}

/// `estimator` carrying `params` (scale, bias and gamma substituted).
pub fn with_params(estimator: &Estimator, params: &Hyperparameters) -> Estimator {
    match estimator.unscaled(params.bias, params.gamma) {
        Estimator::RandomFeatures { features, seed } => Estimator::RandomFeatures {
            features: features.with_scale(params.scale),
            seed,
        },
        other => other,
    }
}

fn check_classes<T: Scalar>(train: &LabeledDataset<T>, val: &LabeledDataset<T>) -> Result<()> {
    if train.classes_present() < 2 || val.classes_present() < 2 {
        return Err(Error::DegenerateSplit(format!(
            "need at least 2 classes on each side, found {} (train) and {} (validation)",
            train.classes_present(),
            val.classes_present()
        )));
    }
    Ok(())
}

fn better(metric: Metric, candidate: &GridRow, best: &GridRow) -> bool {
    match metric {
        Metric::Accuracy => candidate.validation_accuracy > best.validation_accuracy,
        Metric::Mse => match (candidate.validation_mse, best.validation_mse) {
            (Some(c), Some(b)) => c < b,
            (Some(_), None) => true,
            _ => false,
        },
    }
}

/// Exhaustive search over the active grids on a held-out split of `dataset`.
///
/// Features (or Gram matrices) are built once per bias/gamma value and
/// rescaled for each scale. Points whose solve fails are kept with accuracy
/// `0` and `failed = true`. Ties keep the earliest point.
pub fn grid_search<T: Scalar>(
    dataset: &LabeledDataset<T>,
    estimator: &Estimator,
    cfg: &GridSearchConfig,
    solver: &SolverConfig,
) -> Result<GridSearchResult> {
    cfg.check()?;
    let (train, val) = split(dataset, cfg.validation_fraction, cfg.split_seed)?;
    check_classes(&train, &val)?;
    let outer = outer_grid(estimator, cfg, dataset.dim())?;
    let targets = encode_labels::<T>(train.labels(), dataset.num_classes())?;
    let val_targets = encode_labels::<T>(val.labels(), dataset.num_classes())?;

    let inner: Vec<(f64, f64)> = cfg
        .scale_grid
        .iter()
        .flat_map(|&s| cfg.alpha_grid.iter().map(move |&a| (s, a)))
        .collect();
    let mut rows = Vec::with_capacity(outer.len() * inner.len());
    for &(bias, gamma) in &outer {
        let unscaled = estimator.unscaled(bias, gamma);
        let prepared = prepare_with_bias(&unscaled, bias, train.features(), val.features());
        let evaluated: Vec<GridRow> = inner
            .par_iter()
            .map(|&(scale, alpha)| {
                let params = Hyperparameters {
                    scale,
                    alpha,
                    bias,
                    gamma,
                };
                let outcome = prepared.as_ref().map_err(|e| e.to_string()).and_then(|p| {
                    p.evaluate(scale, alpha, targets.view(), val.labels(), val_targets.view(), solver)
                        .map_err(|e| e.to_string())
                });
                match outcome {
                    Ok(ev) => GridRow {
                        params,
                        validation_accuracy: ev.accuracy,
                        validation_mse: Some(ev.mse),
                        failed: false,
                        error: None,
                    },
                    Err(e) => {
                        log::warn!("grid point {params:?} failed: {e}");
                        GridRow {
                            params,
                            validation_accuracy: 0.0,
                            validation_mse: None,
                            failed: true,
                            error: Some(e),
                        }
                    }
                }
            })
            .collect();
        rows.extend(evaluated);
    }

    let mut best = 0;
    for (i, row) in rows.iter().enumerate().skip(1) {
        if better(cfg.metric, row, &rows[best]) {
            best = i;
        }
    }
    Ok(GridSearchResult {
        kind: GRID_KIND.into(),
        metric: cfg.metric,
        estimator: *estimator,
        best: rows[best].params,
        best_validation_accuracy: rows[best].validation_accuracy,
        best_validation_mse: rows[best].validation_mse,
        train_size: train.len(),
        validation_size: val.len(),
        full_grid: rows,
    })
}

/// `(bias, gamma)` pairs in iteration order; gamma is `None` unless the
/// estimator is RBF.
fn outer_grid(estimator: &Estimator, cfg: &GridSearchConfig, input_dim: usize) -> Result<Vec<(f64, Option<f64>)>> {
    let gammas: Vec<Option<f64>> = if estimator.uses_gamma() {
        let g = match &cfg.gamma_grid {
            Some(g) => g.clone(),
            None => gamma_grid(gamma_heuristic(input_dim)?)?,
        };
        g.into_iter().map(Some).collect()
    } else {
        vec![estimator.current_gamma()]
    };
    Ok(gammas
        .iter()
        .flat_map(|&g| cfg.bias_grid.iter().map(move |&b| (b, g)))
        .collect())
}

/// Wall-clock split of a [`Pipeline::fit`].
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct FitTimings {
    /// Feature map or Gram matrix construction.
    pub transform_seconds: f64,
    pub solve_seconds: f64,
}

/// An estimator fitted on a full training set, for evaluating on new rows.
#[derive(Debug, Clone)]
pub struct Pipeline<T> {
    estimator: Estimator,
    params: Hyperparameters,
    transform: Transform<T>,
    model: RidgeModel<T>,
    timings: FitTimings,
}

#[derive(Debug, Clone)]
enum Transform<T> {
    Features(FeatureMap<T>),
    Kernel { spec: KernelSpec, train: Array2<T> },
}

impl<T: Scalar> Pipeline<T> {
    pub fn fit(
        estimator: &Estimator,
        params: &Hyperparameters,
        train: &LabeledDataset<T>,
        solver: &SolverConfig,
    ) -> Result<Self> {
        let targets = encode_labels::<T>(train.labels(), train.num_classes())?;
        let unscaled = estimator.unscaled(params.bias, params.gamma);
        let start = Instant::now();
        let (transform, design) = match unscaled {
            Estimator::RandomFeatures { features, seed } => {
                let map = FeatureMap::<T>::new(features, seed, train.dim())?;
                let phi = scaled(&map.transform(train.features())?, params.scale);
                (Transform::Features(map), phi)
            }
            Estimator::ExactKernel { kernel } => {
                let x = biased(train.features(), params.bias)?.unwrap_or_else(|| train.features().to_owned());
                let k = gram(x.view(), None, &kernel)?.values;
                (Transform::Kernel { spec: kernel, train: x }, scaled(&k, params.scale * params.scale))
            }
        };
        let transform_seconds = start.elapsed().as_secs_f64();
        let start = Instant::now();
        let model = match transform {
            Transform::Features(_) => fit_primal(design.view(), targets.view(), params.alpha, solver)?,
            Transform::Kernel { .. } => fit_dual(design.view(), targets.view(), params.alpha, solver)?,
        };
        Ok(Self {
            estimator: *estimator,
            params: *params,
            transform,
            model,
            timings: FitTimings {
                transform_seconds,
                solve_seconds: start.elapsed().as_secs_f64(),
            },
        })
    }

    pub fn estimator(&self) -> &Estimator {
        &self.estimator
    }

    pub fn params(&self) -> &Hyperparameters {
        &self.params
    }

    pub fn model(&self) -> &RidgeModel<T> {
        &self.model
    }

    pub fn timings(&self) -> &FitTimings {
        &self.timings
    }

    pub fn scores(&self, x: ArrayView2<T>) -> Result<Array2<T>> {
        let design = match &self.transform {
            Transform::Features(map) => scaled(&map.transform(x)?, self.params.scale),
            Transform::Kernel { spec, train } => {
                let xb = biased(x, self.params.bias)?.unwrap_or_else(|| x.to_owned());
                let k = gram(xb.view(), Some(train.view()), spec)?.values;
                scaled(&k, self.params.scale * self.params.scale)
            }
        };
        self.model.predict(design.view())
    }

    pub fn predict(&self, x: ArrayView2<T>) -> Result<Vec<usize>> {
        Ok(classify(self.scores(x)?.view()))
    }

    pub fn accuracy(&self, data: &LabeledDataset<T>) -> Result<f64> {
        Ok(accuracy(&self.predict(data.features())?, data.labels()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdRow {
    pub threshold: f64,
    pub validation_accuracy: f64,
    pub failed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdSearchResult {
    pub best_threshold: f64,
    pub best_validation_accuracy: f64,
    pub table: Vec<ThresholdRow>,
}

/// Pick the binarization threshold that maximizes validation accuracy of
/// the downstream `estimator` with fixed `params`; ties keep the earliest.
pub fn threshold_search<T: Scalar>(
    dataset: &LabeledDataset<T>,
    thresholds: &[f64],
    estimator: &Estimator,
    params: &Hyperparameters,
    cfg: &GridSearchConfig,
    solver: &SolverConfig,
) -> Result<ThresholdSearchResult> {
    if thresholds.is_empty() {
        return Err(Error::param("threshold_grid", "grid is empty"));
    }
    if thresholds.iter().any(|t| !t.is_finite()) {
        return Err(Error::param("threshold_grid", "grid values must be finite"));
    }
    let (train, val) = split(dataset, cfg.validation_fraction, cfg.split_seed)?;
    check_classes(&train, &val)?;
    let table: Vec<ThresholdRow> = thresholds
        .iter()
        .map(|&threshold| {
            let bin = BinarizerConfig { threshold };
            let outcome = train
                .map_features(|x| binarize_values(x, &bin))
                .and_then(|tr| Pipeline::fit(estimator, params, &tr, solver))
                .and_then(|p| p.accuracy(&val.map_features(|x| binarize_values(x, &bin))?));
            match outcome {
                Ok(acc) => ThresholdRow {
                    threshold,
                    validation_accuracy: acc,
                    failed: false,
                },
                Err(e) => {
                    log::warn!("threshold {threshold} failed: {e}");
                    ThresholdRow {
                        threshold,
                        validation_accuracy: 0.0,
                        failed: true,
                    }
                }
            }
        })
        .collect();
    let mut best = 0;
    for (i, row) in table.iter().enumerate() {
        if row.validation_accuracy > table[best].validation_accuracy {
            best = i;
        }
    }
    Ok(ThresholdSearchResult {
        best_threshold: table[best].threshold,
        best_validation_accuracy: table[best].validation_accuracy,
        table,
    })
}
