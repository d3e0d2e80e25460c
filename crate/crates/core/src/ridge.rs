//! Ridge regression on random features (primal) or on a kernel matrix (dual),
//! used as a one-vs-all classifier through `+1/-1` label columns.
//!
//! The primal weights solve `(Phi^T Phi + alpha I) W = Phi^T Y`. When there
//! are fewer samples than features the same `W` is obtained from the smaller
//! sample-side system, `W = Phi^T C` with `(Phi Phi^T + alpha I) C = Y`.

use ndarray::{Array1, Array2, ArrayView1, ArrayView2, Axis};
use serde::{Deserialize, Serialize};

use crate::error::{ensure_dim, Error, Result};
use crate::kernels::{gram, KernelSpec};
use crate::linalg::{
    conjugate_gradient, frobenius, Cholesky, LinearOperator, NormalEquations, ShiftedMatrix,
};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolverKind {
    Cholesky,
    ConjugateGradient,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RidgeMode {
    Primal,
    Dual,
}

/// Which linear system a primal fit actually solved.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SystemSide {
    /// `D x D` normal equations.
    Features,
    /// `n x n` system on `Phi Phi^T` (or `K` in dual mode).
    Samples,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverConfig {
    pub kind: SolverKind,
    #[serde(default = "default_cg_tolerance")]
    pub cg_tolerance: f64,
    /// Defaults to `10 * max(n, D)`.
    #[serde(default)]
    pub cg_max_iterations: Option<usize>,
    /// Cholesky retries with `alpha * 10` after a failed factorization.
    #[serde(default = "default_jitter_retries")]
    pub max_jitter_retries: usize,
    /// Relative residual a Cholesky solve must reach after refinement.
    #[serde(default = "default_residual_check")]
    pub cholesky_residual: f64,
}

fn default_cg_tolerance() -> f64 {
    1e-6
}

fn default_jitter_retries() -> usize {
    3
}

fn default_residual_check() -> f64 {
    1e-8
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self::cholesky()
    }
}

impl SolverConfig {
    pub fn cholesky() -> Self {
        Self {
            kind: SolverKind::Cholesky,
            cg_tolerance: default_cg_tolerance(),
            cg_max_iterations: None,
            max_jitter_retries: default_jitter_retries(),
            cholesky_residual: default_residual_check(),
        }
    }

    pub fn conjugate_gradient(tolerance: f64) -> Self {
        Self {
            kind: SolverKind::ConjugateGradient,
            cg_tolerance: tolerance,
            ..Self::cholesky()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverStats {
    /// CG iterations (max over right-hand sides); refinement steps for Cholesky.
    pub iterations: usize,
    /// `||A X - B|| / ||B||` for the ridge system of the model's mode.
    pub relative_residual: f64,
    pub effective_alpha: f64,
    pub jitter_retries: usize,
    pub system_size: usize,
    pub side: SystemSide,
}

impl SolverStats {
    pub fn jittered(&self) -> bool {
        self.jitter_retries > 0
    }
}

#[derive(Debug, Clone)]
pub struct RidgeModel<T> {
    mode: RidgeMode,
    coefficients: Array2<T>,
    alpha: f64,
    solver: SolverKind,
    stats: SolverStats,
    training_inputs: Option<(Array2<T>, KernelSpec)>,
}

impl<T: Scalar> RidgeModel<T> {
    pub fn mode(&self) -> RidgeMode {
        self.mode
    }

    /// `D x C` weights (primal) or `n x C` dual coefficients.
    pub fn coefficients(&self) -> ArrayView2<'_, T> {
        self.coefficients.view()
    }

    /// Regularizer requested by the caller; see [`SolverStats::effective_alpha`].
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn solver(&self) -> SolverKind {
        self.solver
    }

    pub fn stats(&self) -> &SolverStats {
        &self.stats
    }

    pub fn num_outputs(&self) -> usize {
        self.coefficients.ncols()
    }

    /// Keep the training inputs and kernel so [`Self::predict_inputs`] can
    /// build the test cross-Gram itself.
    pub fn retain_inputs(mut self, inputs: Array2<T>, kernel: KernelSpec) -> Result<Self> {
        if self.mode != RidgeMode::Dual {
            return Err(Error::Unsupported(
                "only dual models retain training inputs".into(),
            ));
        }
        ensure_dim("retained training rows", self.coefficients.nrows(), inputs.nrows())?;
        self.training_inputs = Some((inputs, kernel));
        Ok(self)
    }

    /// Scores `Phi_test W` (primal) or `K_test C` (dual, `K_test` is `n_test x n_train`).
    pub fn predict(&self, design: ArrayView2<T>) -> Result<Array2<T>> {
        let context = match self.mode {
            RidgeMode::Primal => "prediction feature columns",
            RidgeMode::Dual => "prediction kernel columns",
        };
        ensure_dim(context, self.coefficients.nrows(), design.ncols())?;
        Ok(design.dot(&self.coefficients))
    }

    /// Dual prediction from raw test inputs using the retained training inputs.
    pub fn predict_inputs(&self, inputs: ArrayView2<T>) -> Result<Array2<T>> {
        let (train, kernel) = self.training_inputs.as_ref().ok_or_else(|| {
            Error::Unsupported("model has no retained training inputs".into())
        })?;
        let k = gram(inputs, Some(train.view()), kernel)?;
        self.predict(k.values.view())
    }
}

/// `+1` in the column of the sample's class, `-1` elsewhere.
pub fn encode_labels<T: Scalar>(labels: &[usize], num_classes: usize) -> Result<Array2<T>> {
    if num_classes == 0 {
        return Err(Error::param("num_classes", "must be positive"));
    }
    let mut y = Array2::from_elem((labels.len(), num_classes), -T::one());
    for (row, &label) in labels.iter().enumerate() {
        if label >= num_classes {
            return Err(Error::LabelOutOfRange {
                row,
                label,
                classes: num_classes,
            });
        }
        y[[row, label]] = T::one();
    }
    Ok(y)
}

/// Per-row argmax; ties go to the lowest class index.
pub fn classify<T: Scalar>(scores: ArrayView2<T>) -> Vec<usize> {
    scores
        .outer_iter()
        .map(|row| {
            let mut best = 0;
            for (c, &v) in row.iter().enumerate().skip(1) {
                if v > row[best] {
                    best = c;
                }
            }
            best
        })
        .collect()
}

pub fn accuracy(predicted: &[usize], truth: &[usize]) -> f64 {
    if truth.is_empty() {
        return 0.0;
    }
    let hits = predicted.iter().zip(truth).filter(|(p, t)| p == t).count();
    hits as f64 / truth.len() as f64
}

/// Mean squared error over all entries.
pub fn mean_squared_error<T: Scalar>(scores: ArrayView2<T>, targets: ArrayView2<T>) -> f64 {
    let n = scores.len().max(1) as f64;
    scores
        .iter()
        .zip(targets.iter())
        .map(|(&a, &b)| (a - b).as_f64().powi(2))
        .sum::<f64>()
        / n
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha.is_finite() && alpha > 0.0 {
        Ok(())
    } else {
        Err(Error::param("alpha", format!("must be positive, got {alpha}")))
    }
}

fn check_finite<T: Scalar>(a: ArrayView2<T>, what: &'static str) -> Result<()> {
    if a.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite(what))
    }
}

/// Operator `(Phi Phi^T + shift I) v`.
struct OuterEquations<'a, T> {
    design: ArrayView2<'a, T>,
    shift: T,
}

impl<T: Scalar> LinearOperator<T> for OuterEquations<'_, T> {
    fn dim(&self) -> usize {
        self.design.nrows()
    }

    fn apply(&self, v: ArrayView1<T>) -> Array1<T> {
        let inner = self.design.t().dot(&v);
        let mut out = self.design.dot(&inner);
        out.scaled_add(self.shift, &v);
        out
    }
}

/// The unshifted system matrix `M` of `(M + alpha I) X = B`.
#[derive(Clone, Copy)]
enum System<'a, T> {
    Explicit(ArrayView2<'a, T>),
    /// `Phi^T Phi`
    Normal(ArrayView2<'a, T>),
    /// `Phi Phi^T`
    Outer(ArrayView2<'a, T>),
}

impl<T: Scalar> System<'_, T> {
    fn dense(&self) -> Array2<T> {
        match self {
            System::Explicit(m) => m.to_owned(),
            System::Normal(phi) => phi.t().dot(phi),
            System::Outer(phi) => phi.dot(&phi.t()),
        }
    }

    /// `(M + shift I) X`
    fn apply(&self, x: ArrayView2<T>, shift: T) -> Array2<T> {
        let mut out = match self {
            System::Explicit(m) => m.dot(&x),
            System::Normal(phi) => phi.t().dot(&phi.dot(&x)),
            System::Outer(phi) => phi.dot(&phi.t().dot(&x)),
        };
        out.scaled_add(shift, &x);
        out
    }
}

struct Solution<T> {
    x: Array2<T>,
    iterations: usize,
    effective_alpha: f64,
    retries: usize,
}

fn relative_residual<T: Scalar>(system: System<'_, T>, x: ArrayView2<T>, b: ArrayView2<T>, alpha: f64) -> f64 {
    let r = system.apply(x, T::of(alpha)) - b;
    let bn = frobenius(b);
    let rn = frobenius(r.view());
    if bn > 0.0 {
        rn / bn
    } else {
        rn
    }
}

fn solve_shifted<T: Scalar>(
    system: System<'_, T>,
    rhs: ArrayView2<T>,
    alpha: f64,
    cfg: &SolverConfig,
    max_iter_hint: usize,
) -> Result<Solution<T>> {
    match cfg.kind {
        SolverKind::Cholesky => {
            let base = system.dense();
            // single precision cannot reach an f64-sized residual target
            let eps = T::epsilon().as_f64();
            let tolerance = if eps > f64::EPSILON {
                cfg.cholesky_residual.max(1e3 * eps)
            } else {
                cfg.cholesky_residual
            };
            let mut last_err = None;
            for retry in 0..=cfg.max_jitter_retries {
                let eff = alpha * 10f64.powi(retry as i32);
                let mut a = base.clone();
                a.diag_mut().mapv_inplace(|v| v + T::of(eff));
                let factor = match Cholesky::factor(a.view()) {
                    Ok(f) => f,
                    Err(e) => {
                        log::warn!("cholesky failed at alpha {eff:e}: {e}");
                        last_err = Some(e);
                        continue;
                    }
                };
                let mut x = factor.solve(rhs)?;
                let mut rel = relative_residual(System::Explicit(a.view()), x.view(), rhs, 0.0);
                let mut steps = 0;
                while rel > tolerance && steps < 3 {
                    let r = &rhs - &a.dot(&x);
                    x += &factor.solve(r.view())?;
                    rel = relative_residual(System::Explicit(a.view()), x.view(), rhs, 0.0);
                    steps += 1;
                }
                if rel.is_finite() && rel <= tolerance {
                    return Ok(Solution {
                        x,
                        iterations: steps,
                        effective_alpha: eff,
                        retries: retry,
                    });
                }
                log::warn!("cholesky residual {rel:e} above {tolerance:e} at alpha {eff:e}");
                last_err = Some(Error::IllConditioned {
                    tolerance,
                    residual: rel,
                    attempts: retry + 1,
                    alpha: eff,
                });
            }
            Err(last_err.expect("at least one attempt"))
        }
        SolverKind::ConjugateGradient => {
            let max_iter = cfg.cg_max_iterations.unwrap_or(10 * max_iter_hint);
            let shift = T::of(alpha);
            let mut x = Array2::zeros(rhs.raw_dim());
            let mut iterations = 0;
            for (c, b) in rhs.axis_iter(Axis(1)).enumerate() {
                let (sol, out) = match system {
                    System::Explicit(m) => conjugate_gradient(
                        &ShiftedMatrix { matrix: m, shift },
                        b,
                        cfg.cg_tolerance,
                        max_iter,
                    ),
                    System::Normal(phi) => conjugate_gradient(
                        &NormalEquations { design: phi, shift },
                        b,
                        cfg.cg_tolerance,
                        max_iter,
                    ),
                    System::Outer(phi) => conjugate_gradient(
                        &OuterEquations { design: phi, shift },
                        b,
                        cfg.cg_tolerance,
                        max_iter,
                    ),
                }?;
                x.column_mut(c).assign(&sol);
                iterations = iterations.max(out.iterations);
            }
            Ok(Solution {
                x,
                iterations,
                effective_alpha: alpha,
                retries: 0,
            })
        }
    }
}

/// Primal ridge on a feature matrix `phi` (`n x D`) and targets `y` (`n x C`).
pub fn fit_primal<T: Scalar>(
    phi: ArrayView2<T>,
    y: ArrayView2<T>,
    alpha: f64,
    cfg: &SolverConfig,
) -> Result<RidgeModel<T>> {
    check_alpha(alpha)?;
    let (n, d) = phi.dim();
    if n == 0 || d == 0 {
        return Err(Error::InvalidDimension {
            what: "feature matrix",
            value: n.min(d),
        });
    }
    ensure_dim("ridge target rows", n, y.nrows())?;
    check_finite(phi, "feature matrix")?;
    check_finite(y, "targets")?;

    let max_dim = n.max(d);
    let (weights, sol, side, size) = if n < d {
        let sol = solve_shifted(System::Outer(phi), y, alpha, cfg, max_dim)?;
        (phi.t().dot(&sol.x), sol, SystemSide::Samples, n)
    } else {
        let rhs = phi.t().dot(&y);
        let sol = solve_shifted(System::Normal(phi), rhs.view(), alpha, cfg, max_dim)?;
        (sol.x.clone(), sol, SystemSide::Features, d)
    };
    let rhs = phi.t().dot(&y);
    let residual = relative_residual(System::Normal(phi), weights.view(), rhs.view(), sol.effective_alpha);
    Ok(RidgeModel {
        mode: RidgeMode::Primal,
        coefficients: weights,
        alpha,
        solver: cfg.kind,
        stats: SolverStats {
            iterations: sol.iterations,
            relative_residual: residual,
            effective_alpha: sol.effective_alpha,
            jitter_retries: sol.retries,
            system_size: size,
            side,
        },
        training_inputs: None,
    })
}

/// Maximum absolute asymmetry tolerated relative to `max |K|`.
pub const SYMMETRY_TOLERANCE: f64 = 1e-10;

/// Dual (kernel) ridge: `(K + alpha I) C = Y`.
pub fn fit_dual<T: Scalar>(
    k: ArrayView2<T>,
    y: ArrayView2<T>,
    alpha: f64,
    cfg: &SolverConfig,
) -> Result<RidgeModel<T>> {
    check_alpha(alpha)?;
    ensure_dim("kernel matrix columns", k.nrows(), k.ncols())?;
    if k.nrows() == 0 {
        return Err(Error::InvalidDimension {
            what: "kernel matrix",
            value: 0,
        });
    }
    ensure_dim("ridge target rows", k.nrows(), y.nrows())?;
    check_finite(k, "kernel matrix")?;
    check_finite(y, "targets")?;
    let scale = k.iter().fold(0.0f64, |m, v| m.max(v.as_f64().abs()));
    let mut asym = 0.0f64;
    for i in 0..k.nrows() {
        for j in (i + 1)..k.ncols() {
            asym = asym.max((k[[i, j]] - k[[j, i]]).as_f64().abs());
        }
    }
    if asym > SYMMETRY_TOLERANCE * scale.max(1.0) {
        return Err(Error::NotSymmetric(asym));
    }
    let n = k.nrows();
    let sol = solve_shifted(System::Explicit(k), y, alpha, cfg, n)?;
    let residual = relative_residual(System::Explicit(k), sol.x.view(), y, sol.effective_alpha);
    Ok(RidgeModel {
        mode: RidgeMode::Dual,
        coefficients: sol.x,
        alpha,
        solver: cfg.kind,
        stats: SolverStats {
            iterations: sol.iterations,
            relative_residual: residual,
            effective_alpha: sol.effective_alpha,
            jitter_retries: sol.retries,
            system_size: n,
            side: SystemSide::Samples,
        },
        training_inputs: None,
    })
}
