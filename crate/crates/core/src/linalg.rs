//! Dense Cholesky and conjugate-gradient solvers for symmetric positive
//! definite systems.

use ndarray::{Array1, Array2, ArrayView1, ArrayView2, ArrayViewMut1, Axis};

use crate::error::{ensure_dim, Error, Result};
use crate::scalar::Scalar;

/// Lower-triangular Cholesky factor `L` with `A = L L^T`.
#[derive(Debug, Clone)]
pub struct Cholesky<T> {
    lower: Array2<T>,
}

impl<T: Scalar> Cholesky<T> {
    /// Factor a symmetric positive definite matrix; only the lower triangle is read.
    pub fn factor(a: ArrayView2<T>) -> Result<Self> {
        ensure_dim("cholesky square matrix", a.nrows(), a.ncols())?;
        let n = a.nrows();
        let mut l = Array2::<T>::zeros((n, n));
        for i in 0..n {
            for j in 0..=i {
                let (li, lj) = (l.row(i), l.row(j));
                let partial: T = li
                    .slice(ndarray::s![..j])
                    .iter()
                    .zip(lj.slice(ndarray::s![..j]).iter())
                    .map(|(&p, &q)| p * q)
                    .sum();
                let v = a[[i, j]] - partial;
                if i == j {
                    if v.is_nan() || v <= T::zero() || !v.is_finite() {
                        return Err(Error::NotPositiveDefinite {
                            pivot: i,
                            value: v.as_f64(),
                        });
                    }
                    l[[i, i]] = v.sqrt();
                } else {
                    l[[i, j]] = v / l[[j, j]];
                }
            }
        }
        Ok(Self { lower: l })
    }

    pub fn lower(&self) -> ArrayView2<'_, T> {
        self.lower.view()
    }

    fn solve_column(&self, mut b: ArrayViewMut1<T>) {
        let l = &self.lower;
        let n = l.nrows();
        // L z = b
        for i in 0..n {
            let row = l.row(i);
            let mut v = b[i];
            for k in 0..i {
                v -= row[k] * b[k];
            }
            b[i] = v / row[i];
        }
        // L^T x = z
        for i in (0..n).rev() {
            let mut v = b[i];
            for k in (i + 1)..n {
                v -= l[[k, i]] * b[k];
            }
            b[i] = v / l[[i, i]];
        }
    }

    /// Solve `A X = B` column by column.
    pub fn solve(&self, b: ArrayView2<T>) -> Result<Array2<T>> {
        ensure_dim("cholesky right-hand side rows", self.lower.nrows(), b.nrows())?;
        let mut x = b.to_owned();
        for col in x.axis_iter_mut(Axis(1)) {
            self.solve_column(col);
        }
        Ok(x)
    }
}

/// Symmetric positive definite operator `v -> A v`.
pub trait LinearOperator<T> {
    fn dim(&self) -> usize;
    fn apply(&self, v: ArrayView1<T>) -> Array1<T>;
}

/// Explicit matrix plus a diagonal shift: `(M + shift I) v`.
pub struct ShiftedMatrix<'a, T> {
    pub matrix: ArrayView2<'a, T>,
    pub shift: T,
}

impl<T: Scalar> LinearOperator<T> for ShiftedMatrix<'_, T> {
    fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    fn apply(&self, v: ArrayView1<T>) -> Array1<T> {
        let mut out = self.matrix.dot(&v);
        out.scaled_add(self.shift, &v);
        out
    }
}

/// Normal-equation operator `(Phi^T Phi + shift I) v`, never forming `Phi^T Phi`.
pub struct NormalEquations<'a, T> {
    pub design: ArrayView2<'a, T>,
    pub shift: T,
}

impl<T: Scalar> LinearOperator<T> for NormalEquations<'_, T> {
    fn dim(&self) -> usize {
        self.design.ncols()
    }

    fn apply(&self, v: ArrayView1<T>) -> Array1<T> {
        let inner = self.design.dot(&v);
        let mut out = self.design.t().dot(&inner);
        out.scaled_add(self.shift, &v);
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CgOutcome {
    pub iterations: usize,
    pub relative_residual: f64,
}

/// Plain (unpreconditioned) conjugate gradients from a zero start.
///
/// Stops when `||b - A x|| <= tolerance * ||b||`. Exceeding `max_iterations`
/// is an error carrying the final residual.
pub fn conjugate_gradient<T: Scalar, A: LinearOperator<T>>(
    op: &A,
    b: ArrayView1<T>,
    tolerance: f64,
    max_iterations: usize,
) -> Result<(Array1<T>, CgOutcome)> {
    ensure_dim("conjugate gradient right-hand side", op.dim(), b.len())?;
    let n = b.len();
    let mut x = Array1::<T>::zeros(n);
    let b_norm = b.dot(&b).sqrt().as_f64();
    if b_norm == 0.0 {
        return Ok((
            x,
            CgOutcome {
                iterations: 0,
                relative_residual: 0.0,
            },
        ));
    }
    let mut r = b.to_owned();
    let mut p = r.clone();
    let mut rr = r.dot(&r);
    let mut iterations = 0;
    loop {
        let rel = rr.sqrt().as_f64() / b_norm;
        if rel <= tolerance {
            return Ok((
                x,
                CgOutcome {
                    iterations,
                    relative_residual: rel,
                },
            ));
        }
        if iterations >= max_iterations || !rel.is_finite() {
            return Err(Error::NotConverged {
                iterations,
                residual: rel,
            });
        }
        let ap = op.apply(p.view());
        let pap = p.dot(&ap);
        if pap.is_nan() || pap <= T::zero() {
            return Err(Error::NotConverged {
                iterations,
                residual: rel,
            });
        }
        let step = rr / pap;
        x.scaled_add(step, &p);
        r.scaled_add(-step, &ap);
        let rr_next = r.dot(&r);
        let beta = rr_next / rr;
        p.mapv_inplace(|v| v * beta);
        p += &r;
        rr = rr_next;
        iterations += 1;
    }
}

/// Frobenius norm.
pub fn frobenius<T: Scalar>(a: ArrayView2<T>) -> f64 {
    a.iter().map(|v| v.as_f64().powi(2)).sum::<f64>().sqrt()
}
