//! Closed-form limit kernels of the random feature maps, and Gram matrices.

use ndarray::{Array1, Array2, ArrayView1, ArrayView2, Axis, Zip};
use serde::{Deserialize, Serialize};

use crate::error::{ensure_dim, Error, Result};
use crate::scalar::Scalar;

/// Largest optical degree `s` whose coefficients are tabulated exactly.
pub const MAX_OPTICAL_DEGREE: u32 = 20;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum KernelSpec {
    /// Limit of optical features with exponent `m = 2s`.
    OpticalEven { s: u32 },
    /// `(nu + x.y)^p`
    Polynomial { nu: f64, p: u32 },
    /// `exp(-gamma ||x - y||^2)`
    Rbf { gamma: f64 },
    Linear,
}

impl KernelSpec {
    pub fn validate(&self) -> Result<()> {
        match *self {
            KernelSpec::OpticalEven { s } => {
                optical_coefficients(s)?;
            }
            KernelSpec::Polynomial { nu, p } => {
                if !(nu.is_finite() && nu >= 0.0) {
                    return Err(Error::param("nu", format!("must be non-negative, got {nu}")));
                }
                if p == 0 {
                    return Err(Error::param("p", "degree must be positive"));
                }
            }
            KernelSpec::Rbf { gamma } => check_gamma(gamma)?,
            KernelSpec::Linear => {}
        }
        Ok(())
    }

    /// Feature exponent `m` whose optical estimator targets this kernel.
    pub fn optical_exponent(&self) -> Option<f64> {
        match self {
            KernelSpec::OpticalEven { s } => Some(2.0 * *s as f64),
            _ => None,
        }
    }
}

fn check_gamma(gamma: f64) -> Result<()> {
    if gamma.is_finite() && gamma > 0.0 {
        Ok(())
    } else {
        Err(Error::param("gamma", format!("must be positive, got {gamma}")))
    }
}

fn binomial(n: u32, k: u32) -> u128 {
    (0..k).fold(1u128, |acc, i| acc * u128::from(n - i) / u128::from(i + 1))
}

/// Coefficients `(s!)^2 C(s,i)^2` for `i = 0..=s`.
///
/// `s! C(s,i)` is formed exactly in integers before squaring, so small
/// degrees are exact in `f64` (e.g. `[4, 16, 4]` for `s = 2`).
pub fn optical_coefficients(s: u32) -> Result<Vec<f64>> {
    if s == 0 {
        return Err(Error::param("s", "optical degree must be at least 1"));
    }
    if s > MAX_OPTICAL_DEGREE {
        return Err(Error::Unsupported(format!(
            "optical degree {s} exceeds the tabulated maximum {MAX_OPTICAL_DEGREE}"
        )));
    }
    let fact: u128 = (1..=u128::from(s)).product();
    Ok((0..=s)
        .map(|i| {
            let c = (fact * binomial(s, i)) as f64;
            c * c
        })
        .collect())
}

/// `sum_i c_i (x.y)^(2i) (|x|^2 |y|^2)^(s-i)`, evaluated by Horner in `(x.y)^2`.
fn optical_from_products<T: Scalar>(coeffs: &[T], dot: T, sq_x: T, sq_y: T) -> T {
    let u = dot * dot;
    let w = sq_x * sq_y;
    let mut acc = T::zero();
    let mut w_pow = T::one();
    for &c in coeffs.iter().rev() {
        acc = acc * u + c * w_pow;
        w_pow *= w;
    }
    acc
}

fn check_pair<T: Scalar>(x: ArrayView1<T>, y: ArrayView1<T>) -> Result<()> {
    ensure_dim("kernel argument length", x.len(), y.len())
}

/// `|x|^2 |y|^2 + (x.y)^2`.
pub fn k2<T: Scalar>(x: ArrayView1<T>, y: ArrayView1<T>) -> Result<T> {
    check_pair(x, y)?;
    let dot = x.dot(&y);
    Ok(x.dot(&x) * y.dot(&y) + dot * dot)
}

/// Limit kernel of optical features with exponent `2s`:
/// `|x|^2s |y|^2s sum_i (s!)^2 C(s,i)^2 cos^2i(theta)`.
pub fn k2s<T: Scalar>(x: ArrayView1<T>, y: ArrayView1<T>, s: u32) -> Result<T> {
    check_pair(x, y)?;
    let coeffs: Vec<T> = optical_coefficients(s)?.into_iter().map(T::of).collect();
    Ok(optical_from_products(&coeffs, x.dot(&y), x.dot(&x), y.dot(&y)))
}

/// `(nu + x.y)^p`.
pub fn polynomial_kernel<T: Scalar>(
    x: ArrayView1<T>,
    y: ArrayView1<T>,
    nu: f64,
    p: u32,
) -> Result<T> {
    check_pair(x, y)?;
    KernelSpec::Polynomial { nu, p }.validate()?;
    Ok((T::of(nu) + x.dot(&y)).powi(p as i32))
}

pub fn rbf_kernel<T: Scalar>(x: ArrayView1<T>, y: ArrayView1<T>, gamma: f64) -> Result<T> {
    check_pair(x, y)?;
    check_gamma(gamma)?;
    let sq: T = x.iter().zip(y.iter()).map(|(&a, &b)| (a - b) * (a - b)).sum();
    Ok((-T::of(gamma) * sq).exp())
}

pub fn linear_kernel<T: Scalar>(x: ArrayView1<T>, y: ArrayView1<T>) -> Result<T> {
    check_pair(x, y)?;
    Ok(x.dot(&y))
}

/// Evaluate `spec` on a single pair.
pub fn kernel<T: Scalar>(spec: &KernelSpec, x: ArrayView1<T>, y: ArrayView1<T>) -> Result<T> {
    match *spec {
        KernelSpec::OpticalEven { s } => k2s(x, y, s),
        KernelSpec::Polynomial { nu, p } => polynomial_kernel(x, y, nu, p),
        KernelSpec::Rbf { gamma } => rbf_kernel(x, y, gamma),
        KernelSpec::Linear => linear_kernel(x, y),
    }
}

/// Kernel matrix `K_ij = k(x_i, y_j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GramMatrix<T> {
    pub values: Array2<T>,
    pub spec: KernelSpec,
}

impl<T: Scalar> GramMatrix<T> {
    pub fn is_square(&self) -> bool {
        self.values.nrows() == self.values.ncols()
    }
}

fn row_sq_norms<T: Scalar>(x: ArrayView2<T>) -> Array1<T> {
    x.map_axis(Axis(1), |row| row.dot(&row))
}

/// Gram matrix of `x` against itself (`y = None`) or the cross-Gram against `y`.
///
/// Every kernel is computed from the inner-product matrix `X Y^T` and the row
/// norms. The square case is symmetrized so it is bit-exactly symmetric.
pub fn gram<T: Scalar>(
    x: ArrayView2<T>,
    y: Option<ArrayView2<T>>,
    spec: &KernelSpec,
) -> Result<GramMatrix<T>> {
    spec.validate()?;
    let y_view = match y {
        Some(y) => {
            ensure_dim("gram column dimension", x.ncols(), y.ncols())?;
            y
        }
        None => x,
    };
    let mut g = x.dot(&y_view.t());
    if y.is_none() {
        let n = g.nrows();
        let two = T::one() + T::one();
        for i in 0..n {
            for j in (i + 1)..n {
                let v = (g[[i, j]] + g[[j, i]]) / two;
                g[[i, j]] = v;
                g[[j, i]] = v;
            }
        }
    }
    let needs_norms = matches!(spec, KernelSpec::OpticalEven { .. } | KernelSpec::Rbf { .. });
    let (nx, ny) = if needs_norms {
        let nx = row_sq_norms(x);
        let ny = if y.is_some() { row_sq_norms(y_view) } else { nx.clone() };
        (nx, ny)
    } else {
        (Array1::zeros(0), Array1::zeros(0))
    };

    match *spec {
        KernelSpec::Linear => {}
        KernelSpec::Polynomial { nu, p } => {
            let nu = T::of(nu);
            g.mapv_inplace(|v| (nu + v).powi(p as i32));
        }
        KernelSpec::OpticalEven { s: 1 } => {
            // |x_i|^2 |y_j|^2 + (x_i . y_j)^2
            Zip::indexed(&mut g).for_each(|(i, j), v| *v = nx[i] * ny[j] + *v * *v);
        }
        KernelSpec::OpticalEven { s } => {
            let coeffs: Vec<T> = optical_coefficients(s)?.into_iter().map(T::of).collect();
            Zip::indexed(&mut g)
                .for_each(|(i, j), v| *v = optical_from_products(&coeffs, *v, nx[i], ny[j]));
        }
        KernelSpec::Rbf { gamma } => {
            let two = T::one() + T::one();
            let gamma = T::of(gamma);
            Zip::indexed(&mut g).for_each(|(i, j), v| {
                let sq = (nx[i] + ny[j] - two * *v).max(T::zero());
                *v = (-gamma * sq).exp();
            });
            if y.is_none() {
                g.diag_mut().fill(T::one());
            }
        }
    }
    Ok(GramMatrix {
        values: g,
        spec: *spec,
    })
}
