//! Simulated optical random features and their exact limit kernels.
//!
//! The crate is generic over the scalar type ([`Scalar`], implemented for
//! `f32` and `f64`); the aliases below fix it to `f64`, which is what the
//! statistics, file formats and command-line tools use.

pub mod convergence;
pub mod data_io;
pub mod dataset;
pub mod error;
pub mod kernels;
pub mod linalg;
pub mod model_selection;
pub mod projection;
pub mod ridge;
pub mod scalar;
pub mod stats;

pub use convergence::{error_curve, sample_unit_pairs, tail_probability, ConvergenceReport, PairSet, TailTable};
pub use data_io::ExperimentManifest;
pub use dataset::LabeledDataset;
pub use error::{Error, Result};
pub use kernels::{gram, k2, k2s, linear_kernel, polynomial_kernel, rbf_kernel, GramMatrix, KernelSpec};
pub use model_selection::{
    grid_search, split, threshold_search, Estimator, GridSearchConfig, GridSearchResult, Hyperparameters, Pipeline,
};
pub use projection::{
    append_bias, binarize, optical_features, rbf_fourier_features, sample_projection,
    BinarizerConfig, ComplexProjection, FeatureFamily, FeatureMap, FeatureMapSpec,
};
pub use ridge::{
    classify, encode_labels, fit_dual, fit_primal, RidgeMode, RidgeModel, SolverConfig, SolverKind,
};
pub use scalar::Scalar;

pub type Projection = ComplexProjection<f64>;
pub type ProjectionF32 = ComplexProjection<f32>;
pub type Dataset = LabeledDataset<f64>;
pub type DatasetF32 = LabeledDataset<f32>;
pub type Model = RidgeModel<f64>;
pub type ModelF32 = RidgeModel<f32>;
pub type Gram = GramMatrix<f64>;
pub type Features = FeatureMap<f64>;
pub type FittedPipeline = Pipeline<f64>;
pub type FittedPipelineF32 = Pipeline<f32>;
pub type FeaturesF32 = FeatureMap<f32>;
