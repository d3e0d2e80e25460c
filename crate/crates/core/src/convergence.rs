//! Monte Carlo study of how fast optical feature inner products approach
//! their closed-form kernels: error-versus-dimension curves, exponent
//! comparisons and empirical tail probabilities.
//!
//! Estimates for several output dimensions come from one streamed projection
//! per replicate: the estimate at `D` uses the first `D` rows, which are the
//! rows of `sample_projection(seed, d, D)`. Replicate `r` uses seed
//! `base_seed + r`.

use std::io::Write;

use ndarray::{concatenate, Array2, ArrayView1, ArrayView2, Axis};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{ensure_dim, Error, Result};
use crate::kernels::k2s;
use crate::projection::ProjectionStream;
use crate::stats::{mean, median, wilson_interval, SignTest, Z_95};

/// Tail probabilities need at least this many replicates.
pub const MIN_TAIL_REPLICATES: usize = 100;

/// Input pairs `(x_i, y_i)` stored row-wise.
#[derive(Debug, Clone, PartialEq)]
pub struct PairSet {
    pub x: Array2<f64>,
    pub y: Array2<f64>,
    /// Seed the pairs were drawn with, when they were drawn.
    pub seed: Option<u64>,
}

impl PairSet {
    pub fn new(x: Array2<f64>, y: Array2<f64>) -> Result<Self> {
        ensure_dim("pair count", x.nrows(), y.nrows())?;
        ensure_dim("pair dimension", x.ncols(), y.ncols())?;
        if x.nrows() == 0 || x.ncols() == 0 {
            return Err(Error::InvalidDimension {
                what: "pair set",
                value: 0,
            });
        }
        Ok(Self { x, y, seed: None })
    }

    pub fn len(&self) -> usize {
        self.x.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.x.nrows() == 0
    }

    pub fn dim(&self) -> usize {
        self.x.ncols()
    }
}

fn unit_rows(rng: &mut ChaCha8Rng, count: usize, dim: usize) -> Array2<f64> {
    let mut m: Array2<f64> = Array2::from_shape_simple_fn((count, dim), || StandardNormal.sample(rng));
    for mut row in m.outer_iter_mut() {
        let norm = row.dot(&row).sqrt();
        row.mapv_inplace(|v| v / norm);
    }
    m
}

/// `count` independent pairs drawn uniformly on the unit sphere of `R^dim`.
pub fn sample_unit_pairs(count: usize, dim: usize, seed: u64) -> Result<PairSet> {
    if count == 0 || dim == 0 {
        return Err(Error::InvalidDimension {
            what: "pair set",
            value: 0,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let x = unit_rows(&mut rng, count, dim);
    let y = unit_rows(&mut rng, count, dim);
    Ok(PairSet {
        x,
        y,
        seed: Some(seed),
    })
}

fn check_dims(dims: &[usize]) -> Result<()> {
    if dims.is_empty() {
        return Err(Error::param("dims", "at least one dimension is required"));
    }
    if dims[0] == 0 {
        return Err(Error::InvalidDimension {
            what: "projection output dimension",
            value: 0,
        });
    }
    if dims.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::param("dims", "must be strictly increasing"));
    }
    Ok(())
}

fn check_even_exponent(exponent: u32) -> Result<u32> {
    if exponent == 0 || exponent % 2 == 1 {
        return Err(Error::Unsupported(format!(
            "exponent {exponent} has no closed-form kernel; only positive even exponents are supported"
        )));
    }
    Ok(exponent / 2)
}

/// `phi(x_i) . phi(y_i)` for every pair and every `D` in `dims`, shape `dims x pairs`.
pub fn streamed_estimates(
    seed: u64,
    exponent: f64,
    dims: &[usize],
    pairs: &PairSet,
) -> Result<Array2<f64>> {
    check_dims(dims)?;
    if !(exponent.is_finite() && exponent >= 0.0) {
        return Err(Error::param("exponent", format!("must be non-negative, got {exponent}")));
    }
    let p = pairs.len();
    let stacked = concatenate(Axis(0), &[pairs.x.view(), pairs.y.view()])
        .expect("pair matrices share a column count");
    let max_dim = *dims.last().expect("non-empty dims");
    let half = exponent / 2.0;
    let power = |v: f64| {
        if half == 1.0 {
            v
        } else if half == 2.0 {
            v * v
        } else {
            v.powf(half)
        }
    };

    let mut out = Array2::zeros((dims.len(), p));
    let mut sums = vec![0.0f64; p];
    let mut next = 0;
    for (start, real, imag) in ProjectionStream::<f64>::new(seed, pairs.dim(), max_dim)? {
        let mut inten = stacked.dot(&real.t());
        let im = stacked.dot(&imag.t());
        inten.zip_mut_with(&im, |r, &i| *r = power(*r * *r + i * i));
        for r in 0..real.nrows() {
            let col = inten.column(r);
            for (k, s) in sums.iter_mut().enumerate() {
                *s += col[k] * col[p + k];
            }
            let rows_done = start + r + 1;
            if rows_done == dims[next] {
                let d = rows_done as f64;
                out.row_mut(next)
                    .iter_mut()
                    .zip(&sums)
                    .for_each(|(o, s)| *o = s / d);
                next += 1;
            }
        }
    }
    debug_assert_eq!(next, dims.len());
    Ok(out)
}

fn references(s: u32, pairs: &PairSet) -> Result<Vec<f64>> {
    pairs
        .x
        .outer_iter()
        .zip(pairs.y.outer_iter())
        .enumerate()
        .map(|(i, (x, y)): (usize, (ArrayView1<f64>, ArrayView1<f64>))| {
            let k = k2s(x, y, s)?;
            if k > 0.0 {
                Ok(k)
            } else {
                Err(Error::param(
                    "pairs",
                    format!("pair {i} has a zero reference kernel"),
                ))
            }
        })
        .collect()
}

/// Per-replicate estimate tables plus the closed-form references.
struct Simulation {
    /// `[replicate]` -> `dims x pairs`
    estimates: Vec<Array2<f64>>,
    references: Vec<f64>,
}

fn simulate(
    exponent: u32,
    dims: &[usize],
    pairs: &PairSet,
    replicates: usize,
    base_seed: u64,
) -> Result<Simulation> {
    let s = check_even_exponent(exponent)?;
    check_dims(dims)?;
    if replicates == 0 {
        return Err(Error::param("replicates", "must be at least 1"));
    }
    let references = references(s, pairs)?;
    let estimates = (0..replicates)
        .into_par_iter()
        .map(|r| streamed_estimates(base_seed.wrapping_add(r as u64), exponent as f64, dims, pairs))
        .collect::<Result<Vec<_>>>()?;
    Ok(Simulation {
        estimates,
        references,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorRecord {
    pub dim: usize,
    pub pair_id: usize,
    pub replicate: usize,
    pub estimate: f64,
    pub reference: f64,
    pub rel_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DimSummary {
    pub dim: usize,
    pub mean_rel_error: f64,
    pub median_rel_error: f64,
    pub max_rel_error: f64,
    /// Median over pairs, one entry per replicate.
    pub replicate_medians: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub family: String,
    pub exponent: u32,
    pub dims: Vec<usize>,
    pub per_dim: Vec<DimSummary>,
    pub pairs_seed: Option<u64>,
    pub replicate_seeds: Vec<u64>,
    #[serde(skip)]
    pub records: Vec<ErrorRecord>,
}

pub const CSV_HEADER: &str = "family,m,D,pair_id,replicate,estimate,reference,rel_error";

impl ConvergenceReport {
    pub fn summary(&self, dim: usize) -> Option<&DimSummary> {
        self.per_dim.iter().find(|s| s.dim == dim)
    }

    /// Sign tests that the per-replicate median error drops between
    /// consecutive dimensions.
    pub fn monotonicity_tests(&self) -> Vec<SignTest> {
        self.per_dim
            .windows(2)
            .map(|w| SignTest::greater(&w[0].replicate_medians, &w[1].replicate_medians))
            .collect()
    }

    /// Append the per-record rows (no header).
    pub fn write_csv_rows<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        for r in &self.records {
            writeln!(
                w,
                "{},{},{},{},{},{:e},{:e},{:e}",
                self.family, self.exponent, r.dim, r.pair_id, r.replicate, r.estimate, r.reference, r.rel_error
            )?;
        }
        Ok(())
    }
}

/// Relative error `|phi(x).phi(y) - k_m(x,y)| / k_m(x,y)` across dimensions,
/// pairs and replicates for optical features of even exponent `m`.
pub fn error_curve(
    exponent: u32,
    dims: &[usize],
    pairs: &PairSet,
    replicates: usize,
    base_seed: u64,
) -> Result<ConvergenceReport> {
    let sim = simulate(exponent, dims, pairs, replicates, base_seed)?;
    let mut records = Vec::with_capacity(dims.len() * pairs.len() * replicates);
    let mut per_dim = Vec::with_capacity(dims.len());
    for (k, &dim) in dims.iter().enumerate() {
        let mut all = Vec::with_capacity(pairs.len() * replicates);
        let mut replicate_medians = Vec::with_capacity(replicates);
        for (r, est) in sim.estimates.iter().enumerate() {
            let errs: Vec<f64> = est
                .row(k)
                .iter()
                .zip(&sim.references)
                .map(|(e, k)| (e - k).abs() / k)
                .collect();
            for (pair_id, (&e, &rel)) in est.row(k).iter().zip(&errs).enumerate() {
                records.push(ErrorRecord {
                    dim,
                    pair_id,
                    replicate: r,
                    estimate: e,
                    reference: sim.references[pair_id],
                    rel_error: rel,
                });
            }
            replicate_medians.push(median(&errs));
            all.extend(errs);
        }
        per_dim.push(DimSummary {
            dim,
            mean_rel_error: mean(&all),
            median_rel_error: median(&all),
            max_rel_error: all.iter().copied().fold(0.0, f64::max),
            replicate_medians,
        });
    }
    Ok(ConvergenceReport {
        family: "optical".into(),
        exponent,
        dims: dims.to_vec(),
        per_dim,
        pairs_seed: pairs.seed,
        replicate_seeds: (0..replicates as u64).map(|r| base_seed.wrapping_add(r)).collect(),
        records,
    })
}

/// Sign test that exponent `higher` has larger per-replicate median error
/// than exponent `lower` at `dim`. Both reports must share seeds and pairs.
pub fn exponent_ordering(higher: &ConvergenceReport, lower: &ConvergenceReport, dim: usize) -> Result<SignTest> {
    if higher.replicate_seeds != lower.replicate_seeds || higher.pairs_seed != lower.pairs_seed {
        return Err(Error::param("reports", "exponent comparison needs identical seeds"));
    }
    let a = higher
        .summary(dim)
        .ok_or_else(|| Error::param("dim", format!("{dim} not in report")))?;
    let b = lower
        .summary(dim)
        .ok_or_else(|| Error::param("dim", format!("{dim} not in report")))?;
    Ok(SignTest::greater(&a.replicate_medians, &b.replicate_medians))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TailEntry {
    pub t: f64,
    pub dim: usize,
    pub exceedances: usize,
    pub trials: usize,
    pub probability: f64,
    /// 95% Wilson interval.
    pub ci_low: f64,
    pub ci_high: f64,
}

impl TailEntry {
    pub fn half_width(&self) -> f64 {
        (self.ci_high - self.ci_low) / 2.0
    }
}

/// Empirical `P{|phi(x).phi(y) - k_m(x,y)| >= t}` over pairs and replicates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TailTable {
    pub exponent: u32,
    pub dims: Vec<usize>,
    pub t_values: Vec<f64>,
    /// Ordered by `t`, then by `dim`.
    pub entries: Vec<TailEntry>,
}

/// Constant of `D exp(-C (D t)^(1/m))` fitted on the smallest dimension.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TailBoundCheck {
    /// Empirically fitted, not a theoretical value.
    pub fitted_c: f64,
    pub fit_dim: usize,
    /// `(t, dim, empirical, bound)` where the interval lies above the bound.
    pub violations: Vec<(f64, usize, f64, f64)>,
}

impl TailBoundCheck {
    pub fn consistent(&self) -> bool {
        self.violations.is_empty()
    }
}

impl TailTable {
    pub fn entry(&self, t: f64, dim: usize) -> Option<&TailEntry> {
        self.entries.iter().find(|e| e.t == t && e.dim == dim)
    }

    fn for_t(&self, t: f64) -> Vec<&TailEntry> {
        self.entries.iter().filter(|e| e.t == t).collect()
    }

    /// For each `t`, whether no step to a larger dimension raises the
    /// probability beyond the confidence intervals.
    pub fn non_increasing_in_dim(&self) -> Vec<(f64, bool)> {
        self.t_values
            .iter()
            .map(|&t| {
                let row = self.for_t(t);
                let ok = row.windows(2).all(|w| w[1].ci_low <= w[0].ci_high);
                (t, ok)
            })
            .collect()
    }

    /// Shape check against `D exp(-C (D t)^(1/m))` with `C` fitted at the
    /// smallest dimension (the loosest `C` over the usable `t`).
    pub fn bound_check(&self) -> Option<TailBoundCheck> {
        let fit_dim = *self.dims.first()?;
        let m = self.exponent as f64;
        let d0 = fit_dim as f64;
        let fitted_c = self
            .t_values
            .iter()
            .filter(|&&t| t > 0.0)
            .filter_map(|&t| {
                let e = self.entry(t, fit_dim)?;
                (e.probability > 0.0).then(|| -(e.probability / d0).ln() / (d0 * t).powf(1.0 / m))
            })
            .fold(None, |acc: Option<f64>, c| Some(acc.map_or(c, |a| a.min(c))))?;
        let violations = self
            .entries
            .iter()
            .filter(|e| e.t > 0.0 && e.dim != fit_dim)
            .filter_map(|e| {
                let d = e.dim as f64;
                let bound = (d * (-fitted_c * (d * e.t).powf(1.0 / m)).exp()).min(1.0);
                (e.ci_low > bound).then_some((e.t, e.dim, e.probability, bound))
            })
            .collect();
        Some(TailBoundCheck {
            fitted_c,
            fit_dim,
            violations,
        })
    }
}

pub fn tail_probability(
    exponent: u32,
    dims: &[usize],
    t_values: &[f64],
    pairs: &PairSet,
    replicates: usize,
    base_seed: u64,
) -> Result<TailTable> {
    if replicates < MIN_TAIL_REPLICATES {
        return Err(Error::TooFewReplicates {
            required: MIN_TAIL_REPLICATES,
            found: replicates,
        });
    }
    if t_values.is_empty() || t_values.iter().any(|t| !(t.is_finite() && *t >= 0.0)) {
        return Err(Error::param("t_values", "need at least one finite non-negative threshold"));
    }
    let sim = simulate(exponent, dims, pairs, replicates, base_seed)?;
    let trials = replicates * pairs.len();
    let mut entries = Vec::with_capacity(t_values.len() * dims.len());
    for &t in t_values {
        for (k, &dim) in dims.iter().enumerate() {
            let exceedances = sim
                .estimates
                .iter()
                .map(|est| {
                    est.row(k)
                        .iter()
                        .zip(&sim.references)
                        .filter(|(e, r)| (*e - *r).abs() >= t)
                        .count()
                })
                .sum();
            let (ci_low, ci_high) = wilson_interval(exceedances, trials, Z_95);
            entries.push(TailEntry {
                t,
                dim,
                exceedances,
                trials,
                probability: exceedances as f64 / trials as f64,
                ci_low,
                ci_high,
            });
        }
    }
    Ok(TailTable {
        exponent,
        dims: dims.to_vec(),
        t_values: t_values.to_vec(),
        entries,
    })
}

/// Monte Carlo moment `E|u|^p` of a unit-variance complex Gaussian.
pub fn complex_gaussian_moment(power: f64, samples: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let half = std::f64::consts::FRAC_1_SQRT_2;
    let mut total = 0.0;
    for _ in 0..samples {
        let a: f64 = StandardNormal.sample(&mut rng);
        let b: f64 = StandardNormal.sample(&mut rng);
        let sq = (a * half).powi(2) + (b * half).powi(2);
        total += sq.powf(power / 2.0);
    }
    total / samples as f64
}

/// `pairs.x` and `pairs.y` as a view pair, for callers that build [`PairSet`] by hand.
pub fn pair_views(pairs: &PairSet) -> (ArrayView2<'_, f64>, ArrayView2<'_, f64>) {
    (pairs.x.view(), pairs.y.view())
}
