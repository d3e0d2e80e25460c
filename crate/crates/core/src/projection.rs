//! Random projections and the feature maps built on them.
//!
//! The optical map simulates an intensity measurement `|Ux|^m / sqrt(D)` where
//! `U` is a complex Gaussian matrix with unit complex variance (real and
//! imaginary parts each of variance 1/2). `U` is stored as its real part `A`
//! and imaginary part `B`, so `|Ux|^2 = (Ax)^2 + (Bx)^2` element-wise.
//!
//! Projection rows are generated in fixed blocks of [`PROJECTION_BLOCK_ROWS`]
//! rows, each block drawn from its own ChaCha stream keyed by `(seed, block)`.
//! The first `D` rows of a projection are therefore identical for every
//! output dimension `>= D`, and any block can be regenerated on its own
//! without materializing the whole matrix.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use ndarray::{s, Array1, Array2, ArrayView2, ArrayViewMut2, Axis, Zip};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{ensure_dim, Error, Result};
use crate::scalar::Scalar;

/// Number of projection rows drawn from one RNG stream.
pub const PROJECTION_BLOCK_ROWS: usize = 4096;

/// Default number of input rows transformed per work unit.
pub const DEFAULT_BLOCK_ROWS: usize = 1024;

/// Upper bound on `D * d` for a materialized projection (per part).
pub const MAX_PROJECTION_ENTRIES: usize = 1 << 31;

/// Fixed complex Gaussian projection `U = A + iB` of shape `D x d`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexProjection<T> {
    real: Array2<T>,
    imag: Array2<T>,
    seed: u64,
}

fn check_projection_dims(input_dim: usize, output_dim: usize) -> Result<()> {
    if input_dim == 0 {
        return Err(Error::InvalidDimension {
            what: "projection input dimension",
            value: 0,
        });
    }
    if output_dim == 0 {
        return Err(Error::InvalidDimension {
            what: "projection output dimension",
            value: 0,
        });
    }
    match input_dim.checked_mul(output_dim) {
        Some(n) if n <= MAX_PROJECTION_ENTRIES => Ok(()),
        _ => Err(Error::DimensionOverflow {
            rows: output_dim as u64,
            cols: input_dim as u64,
        }),
    }
}

/// Fill the leading rows of projection block `block` into `real`/`imag`.
///
/// Row `r` of the views is global row `block * PROJECTION_BLOCK_ROWS + r`.
fn fill_block<T: Scalar>(
    seed: u64,
    block: usize,
    mut real: ArrayViewMut2<T>,
    mut imag: ArrayViewMut2<T>,
) {
    debug_assert!(real.nrows() <= PROJECTION_BLOCK_ROWS);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(block as u64);
    for (mut re_row, mut im_row) in real.outer_iter_mut().zip(imag.outer_iter_mut()) {
        for (re, im) in re_row.iter_mut().zip(im_row.iter_mut()) {
            let a: f64 = StandardNormal.sample(&mut rng);
            let b: f64 = StandardNormal.sample(&mut rng);
            *re = T::of(a * FRAC_1_SQRT_2);
            *im = T::of(b * FRAC_1_SQRT_2);
        }
    }
}

impl<T: Scalar> ComplexProjection<T> {
    /// Draw the `output_dim x input_dim` projection for `seed`.
    pub fn sample(seed: u64, input_dim: usize, output_dim: usize) -> Result<Self> {
        check_projection_dims(input_dim, output_dim)?;
        let mut real = Array2::zeros((output_dim, input_dim));
        let mut imag = Array2::zeros((output_dim, input_dim));
        real.axis_chunks_iter_mut(Axis(0), PROJECTION_BLOCK_ROWS)
            .into_par_iter()
            .zip(imag.axis_chunks_iter_mut(Axis(0), PROJECTION_BLOCK_ROWS))
            .enumerate()
            .for_each(|(block, (re, im))| fill_block(seed, block, re, im));
        Ok(Self { real, imag, seed })
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Input dimension `d`.
    pub fn input_dim(&self) -> usize {
        self.real.ncols()
    }

    /// Output dimension `D`.
    pub fn output_dim(&self) -> usize {
        self.real.nrows()
    }

    pub fn real_part(&self) -> ArrayView2<'_, T> {
        self.real.view()
    }

    pub fn imag_part(&self) -> ArrayView2<'_, T> {
        self.imag.view()
    }

    /// Squared moduli `|Ux_i|^2` for every row `x_i` of `x`, shape `n x D`.
    pub fn intensities(&self, x: ArrayView2<T>) -> Result<Array2<T>> {
        ensure_dim("projection input columns", self.input_dim(), x.ncols())?;
        Ok(intensities_with(self.real.view(), self.imag.view(), x))
    }
}

fn intensities_with<T: Scalar>(
    real: ArrayView2<T>,
    imag: ArrayView2<T>,
    x: ArrayView2<T>,
) -> Array2<T> {
    let mut re = x.dot(&real.t());
    let im = x.dot(&imag.t());
    Zip::from(&mut re).and(&im).for_each(|r, &i| *r = *r * *r + i * i);
    re
}

/// Free-function form of [`ComplexProjection::sample`].
pub fn sample_projection<T: Scalar>(
    seed: u64,
    input_dim: usize,
    output_dim: usize,
) -> Result<ComplexProjection<T>> {
    ComplexProjection::sample(seed, input_dim, output_dim)
}

/// Streams the rows of a projection block by block without storing it.
///
/// Yields `(first_row, real_block, imag_block)`; the concatenation of the
/// blocks equals `ComplexProjection::sample(seed, input_dim, output_dim)`.
#[derive(Debug, Clone)]
pub struct ProjectionStream<T> {
    seed: u64,
    input_dim: usize,
    output_dim: usize,
    next_block: usize,
    _scalar: std::marker::PhantomData<T>,
}

impl<T: Scalar> ProjectionStream<T> {
    pub fn new(seed: u64, input_dim: usize, output_dim: usize) -> Result<Self> {
        // no entry cap: streamed blocks are never materialized together
        for (what, value) in [
            ("projection input dimension", input_dim),
            ("projection output dimension", output_dim),
        ] {
            if value == 0 {
                return Err(Error::InvalidDimension { what, value });
            }
        }
        Ok(Self {
            seed,
            input_dim,
            output_dim,
            next_block: 0,
            _scalar: std::marker::PhantomData,
        })
    }
}

impl<T: Scalar> Iterator for ProjectionStream<T> {
    type Item = (usize, Array2<T>, Array2<T>);

    fn next(&mut self) -> Option<Self::Item> {
        let start = self.next_block * PROJECTION_BLOCK_ROWS;
        if start >= self.output_dim {
            return None;
        }
        let rows = PROJECTION_BLOCK_ROWS.min(self.output_dim - start);
        let mut real = Array2::zeros((rows, self.input_dim));
        let mut imag = Array2::zeros((rows, self.input_dim));
        fill_block(self.seed, self.next_block, real.view_mut(), imag.view_mut());
        self.next_block += 1;
        Some((start, real, imag))
    }
}

#[inline]
fn intensity_power<T: Scalar>(intensity: T, exponent: f64) -> T {
    if exponent == 2.0 {
        intensity
    } else if exponent == 4.0 {
        intensity * intensity
    } else if exponent == 0.0 {
        T::one()
    } else {
        intensity.powf(T::of(exponent / 2.0))
    }
}

fn check_exponent(exponent: f64) -> Result<()> {
    if !exponent.is_finite() || exponent < 0.0 {
        return Err(Error::param(
            "exponent",
            format!("must be a finite non-negative real, got {exponent}"),
        ));
    }
    Ok(())
}

/// Optical random features `((Ax)_j^2 + (Bx)_j^2)^(m/2) / sqrt(D)`.
pub fn optical_features<T: Scalar>(
    projection: &ComplexProjection<T>,
    x: ArrayView2<T>,
    exponent: f64,
) -> Result<Array2<T>> {
    optical_features_blocked(projection, x, exponent, DEFAULT_BLOCK_ROWS)
}

/// [`optical_features`] with an explicit row block size.
pub fn optical_features_blocked<T: Scalar>(
    projection: &ComplexProjection<T>,
    x: ArrayView2<T>,
    exponent: f64,
    block_rows: usize,
) -> Result<Array2<T>> {
    check_exponent(exponent)?;
    ensure_dim("optical feature input columns", projection.input_dim(), x.ncols())?;
    if block_rows == 0 {
        return Err(Error::InvalidDimension {
            what: "block rows",
            value: 0,
        });
    }
    let out_dim = projection.output_dim();
    let norm = T::of((out_dim as f64).sqrt().recip());
    let mut out = Array2::zeros((x.nrows(), out_dim));
    out.axis_chunks_iter_mut(Axis(0), block_rows)
        .into_par_iter()
        .zip(x.axis_chunks_iter(Axis(0), block_rows))
        .for_each(|(mut dst, src)| {
            let inten = intensities_with(projection.real.view(), projection.imag.view(), src);
            Zip::from(&mut dst)
                .and(&inten)
                .for_each(|d, &v| *d = intensity_power(v, exponent) * norm);
        });
    Ok(out)
}

/// Random Fourier feature map for the Gaussian kernel `exp(-gamma ||x-y||^2)`.
///
/// Features are `sqrt(2/D) cos(w_j . x + b_j)` with `w_j ~ N(0, 2 gamma I)` and
/// `b_j ~ U[0, 2 pi)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RbfFourierMap<T> {
    weights: Array2<T>,
    offsets: Array1<T>,
    gamma: f64,
    seed: u64,
}

impl<T: Scalar> RbfFourierMap<T> {
    pub fn sample(seed: u64, input_dim: usize, output_dim: usize, gamma: f64) -> Result<Self> {
        if !(gamma.is_finite() && gamma > 0.0) {
            return Err(Error::param("gamma", format!("must be positive, got {gamma}")));
        }
        check_projection_dims(input_dim, output_dim)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let std = (2.0 * gamma).sqrt();
        let weights = Array2::from_shape_simple_fn((output_dim, input_dim), || {
            let z: f64 = StandardNormal.sample(&mut rng);
            T::of(z * std)
        });
        let offsets = Array1::from_shape_simple_fn(output_dim, || {
            T::of(rng.random_range(0.0..2.0 * PI))
        });
        Ok(Self {
            weights,
            offsets,
            gamma,
            seed,
        })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn input_dim(&self) -> usize {
        self.weights.ncols()
    }

    pub fn output_dim(&self) -> usize {
        self.weights.nrows()
    }

    pub fn transform(&self, x: ArrayView2<T>) -> Result<Array2<T>> {
        ensure_dim("rbf feature input columns", self.input_dim(), x.ncols())?;
        let norm = T::of((2.0 / self.output_dim() as f64).sqrt());
        let mut out = x.dot(&self.weights.t());
        out.axis_iter_mut(Axis(0)).into_par_iter().for_each(|mut row| {
            Zip::from(&mut row)
                .and(&self.offsets)
                .for_each(|v, &b| *v = (*v + b).cos() * norm);
        });
        Ok(out)
    }
}

/// One-shot random Fourier features for `exp(-gamma ||x-y||^2)`.
pub fn rbf_fourier_features<T: Scalar>(
    seed: u64,
    x: ArrayView2<T>,
    gamma: f64,
    output_dim: usize,
) -> Result<Array2<T>> {
    RbfFourierMap::sample(seed, x.ncols(), output_dim, gamma)?.transform(x)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BinarizerConfig {
    pub threshold: f64,
}

/// Threshold binarizer: 1 where the entry is strictly greater than the threshold.
pub fn binarize<T: Scalar>(x: ArrayView2<T>, cfg: &BinarizerConfig) -> Array2<u8> {
    let theta = T::of(cfg.threshold);
    x.mapv(|v| u8::from(v > theta))
}

/// [`binarize`] returning the 0/1 values in the input scalar type.
pub fn binarize_values<T: Scalar>(x: ArrayView2<T>, cfg: &BinarizerConfig) -> Array2<T> {
    let theta = T::of(cfg.threshold);
    x.mapv(|v| if v > theta { T::one() } else { T::zero() })
}

pub fn is_binary<T: Scalar>(x: ArrayView2<T>) -> bool {
    x.iter().all(|&v| v == T::zero() || v == T::one())
}

/// Prepend a constant `sqrt(nu)` column, so that `x'.y' = nu + x.y`.
pub fn append_bias<T: Scalar>(x: ArrayView2<T>, nu: f64) -> Result<Array2<T>> {
    if !(nu.is_finite() && nu >= 0.0) {
        return Err(Error::param("bias", format!("must be non-negative, got {nu}")));
    }
    let mut out = Array2::zeros((x.nrows(), x.ncols() + 1));
    out.column_mut(0).fill(T::of(nu.sqrt()));
    out.slice_mut(s![.., 1..]).assign(&x);
    Ok(out)
}

/// Which random feature family a [`FeatureMapSpec`] describes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum FeatureFamily {
    /// `|Ux|^m / sqrt(D)`; `exponent = 2` is the physical device.
    Optical { exponent: f64 },
    RbfFourier { gamma: f64 },
    /// Identity features (no random projection).
    Linear,
}

impl FeatureFamily {
    pub fn name(&self) -> &'static str {
        match self {
            FeatureFamily::Optical { .. } => "optical",
            FeatureFamily::RbfFourier { .. } => "rbf_fourier",
            FeatureFamily::Linear => "linear",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
// unknown keys are rejected by the flattened family
pub struct FeatureMapSpec {
    #[serde(flatten)]
    pub family: FeatureFamily,
    /// Output dimension `D` (ignored by the linear family).
    pub dim: usize,
    #[serde(default = "one")]
    pub scale: f64,
    /// Bias `nu`; `0` appends nothing.
    #[serde(default)]
    pub bias: f64,
}

fn one() -> f64 {
    1.0
}

impl FeatureMapSpec {
    pub fn optical(exponent: f64, dim: usize) -> Self {
        Self {
            family: FeatureFamily::Optical { exponent },
            dim,
            scale: 1.0,
            bias: 0.0,
        }
    }

    pub fn rbf_fourier(gamma: f64, dim: usize) -> Self {
        Self {
            family: FeatureFamily::RbfFourier { gamma },
            dim,
            scale: 1.0,
            bias: 0.0,
        }
    }

    pub fn linear() -> Self {
        Self {
            family: FeatureFamily::Linear,
            dim: 0,
            scale: 1.0,
            bias: 0.0,
        }
    }

    pub fn with_scale(mut self, scale: f64) -> Self {
        self.scale = scale;
        self
    }

    pub fn with_bias(mut self, bias: f64) -> Self {
        self.bias = bias;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.scale.is_finite() && self.scale > 0.0) {
            return Err(Error::param("scale", format!("must be positive, got {}", self.scale)));
        }
        if !(self.bias.is_finite() && self.bias >= 0.0) {
            return Err(Error::param("bias", format!("must be non-negative, got {}", self.bias)));
        }
        match self.family {
            FeatureFamily::Optical { exponent } => check_exponent(exponent)?,
            FeatureFamily::RbfFourier { gamma } if !(gamma.is_finite() && gamma > 0.0) => {
                return Err(Error::param("gamma", format!("must be positive, got {gamma}")));
            }
            _ => {}
        }
        if !matches!(self.family, FeatureFamily::Linear) && self.dim == 0 {
            return Err(Error::InvalidDimension {
                what: "feature dimension",
                value: 0,
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
enum Sampled<T> {
    Optical(ComplexProjection<T>, f64),
    Rbf(RbfFourierMap<T>),
    Linear,
}

/// A [`FeatureMapSpec`] with its random state drawn for a given input dimension.
#[derive(Debug, Clone)]
pub struct FeatureMap<T> {
    spec: FeatureMapSpec,
    input_dim: usize,
    seed: u64,
    sampled: Sampled<T>,
    block_rows: usize,
}

impl<T: Scalar> FeatureMap<T> {
    pub fn new(spec: FeatureMapSpec, seed: u64, input_dim: usize) -> Result<Self> {
        spec.validate()?;
        if input_dim == 0 {
            return Err(Error::InvalidDimension {
                what: "feature input dimension",
                value: 0,
            });
        }
        let effective = input_dim + usize::from(spec.bias > 0.0);
        let sampled = match spec.family {
            FeatureFamily::Optical { exponent } => {
                Sampled::Optical(ComplexProjection::sample(seed, effective, spec.dim)?, exponent)
            }
            FeatureFamily::RbfFourier { gamma } => {
                Sampled::Rbf(RbfFourierMap::sample(seed, effective, spec.dim, gamma)?)
            }
            FeatureFamily::Linear => Sampled::Linear,
        };
        Ok(Self {
            spec,
            input_dim,
            seed,
            sampled,
            block_rows: DEFAULT_BLOCK_ROWS,
        })
    }

    pub fn with_block_rows(mut self, block_rows: usize) -> Self {
        self.block_rows = block_rows.max(1);
        self
    }

    pub fn spec(&self) -> &FeatureMapSpec {
        &self.spec
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn output_dim(&self) -> usize {
        match &self.sampled {
            Sampled::Linear => self.input_dim + usize::from(self.spec.bias > 0.0),
            _ => self.spec.dim,
        }
    }

    /// Apply bias, the family's map, and the scale multiplier.
    pub fn transform(&self, x: ArrayView2<T>) -> Result<Array2<T>> {
        ensure_dim("feature input columns", self.input_dim, x.ncols())?;
        let biased;
        let input = if self.spec.bias > 0.0 {
            biased = append_bias(x, self.spec.bias)?;
            biased.view()
        } else {
            x
        };
        let mut out = match &self.sampled {
            Sampled::Optical(p, m) => optical_features_blocked(p, input, *m, self.block_rows)?,
            Sampled::Rbf(map) => map.transform(input)?,
            Sampled::Linear => input.to_owned(),
        };
        if self.spec.scale != 1.0 {
            let scale = T::of(self.spec.scale);
            out.mapv_inplace(|v| v * scale);
        }
        Ok(out)
    }
}
