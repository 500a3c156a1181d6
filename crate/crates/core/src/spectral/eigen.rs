//! Dense Hermitian eigensolvers.
//!
//! Matrices up to [`JACOBI_MAX_DIM`] use a cyclic Jacobi iteration written
//! against the row-major storage (no allocation beyond the working copy), which
//! is what the Monte Carlo loops over thousands of small tuples hit. Larger
//! matrices go through faer's tridiagonal divide-and-conquer solver.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use super::matrix::{ComplexMatrix, HermitianMatrix};
use crate::error::{Error, Result};

pub const JACOBI_MAX_DIM: usize = 16;
const MAX_SWEEPS: usize = 100;

/// Eigenvalues in ascending order with orthonormal eigenvectors as columns.
#[derive(Clone, Debug)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl EigenDecomposition {
    /// `U diag(f(λ)) U*`.
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> HermitianMatrix {
        let d: Vec<f64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        let u = &self.eigenvectors;
        let ud = u.scale_columns(&d);
        ud.matmul(&u.adjoint()).expect("square factors").hermitian_part()
    }

    pub fn reconstruct(&self) -> HermitianMatrix {
        self.reconstruct_with(|l| l)
    }

    /// Orthogonal projection onto the span of the selected eigenvectors.
    pub fn projection(&self, select: impl Fn(f64) -> bool) -> HermitianMatrix {
        self.reconstruct_with(|l| if select(l) { 1.0 } else { 0.0 })
    }

    pub fn basis(&self, select: impl Fn(f64) -> bool) -> ComplexMatrix {
        let idx: Vec<usize> = (0..self.eigenvalues.len())
            .filter(|&k| select(self.eigenvalues[k]))
            .collect();
        self.eigenvectors.select_columns(&idx)
    }
}

pub fn eig_hermitian(a: &HermitianMatrix) -> Result<EigenDecomposition> {
    let n = a.dim();
    if n <= JACOBI_MAX_DIM {
        return match a.im() {
            None => {
                let mut w = a.re().to_vec();
                let mut v = identity::<f64>(n);
                jacobi(&mut w, n, Some(&mut v))?;
                let vecs = v.into_iter().map(|x| Complex64::new(x, 0.0)).collect();
                Ok(sorted(diagonal(&w, n), vecs, n))
            }
            Some(_) => {
                let mut w = a.to_complex_vec();
                let mut v = identity::<Complex64>(n);
                jacobi(&mut w, n, Some(&mut v))?;
                Ok(sorted(diagonal(&w, n), v, n))
            }
        };
    }
    let (vals, vecs) = match a.im() {
        None => {
            let m = faer::Mat::<f64>::from_fn(n, n, |i, j| a.re()[i * n + j]);
            let e = m
                .self_adjoint_eigen(faer::Side::Lower)
                .map_err(|e| Error::NonConvergence(format!("{e:?}")))?;
            let u = e.U();
            let vals = (0..n).map(|k| e.S()[k]).collect::<Vec<f64>>();
            (vals, ComplexMatrix::from_real_fn(n, n, |i, j| u[(i, j)]))
        }
        Some(_) => {
            let m = a.to_dense().to_faer();
            let e = m
                .self_adjoint_eigen(faer::Side::Lower)
                .map_err(|e| Error::NonConvergence(format!("{e:?}")))?;
            let vals = (0..n).map(|k| e.S()[k].re).collect::<Vec<f64>>();
            (vals, ComplexMatrix::from_faer(e.U()))
        }
    };
    Ok(EigenDecomposition { eigenvalues: vals, eigenvectors: vecs })
}

/// Eigenvalues only, ascending.
pub fn eigenvalues(a: &HermitianMatrix) -> Result<Vec<f64>> {
    let n = a.dim();
    let mut vals = if n <= JACOBI_MAX_DIM {
        match a.im() {
            None => {
                let mut w = a.re().to_vec();
                jacobi::<f64>(&mut w, n, None)?;
                diagonal(&w, n)
            }
            Some(_) => {
                let mut w = a.to_complex_vec();
                jacobi::<Complex64>(&mut w, n, None)?;
                diagonal(&w, n)
            }
        }
    } else {
        let err = |e: faer::linalg::evd::EvdError| Error::NonConvergence(format!("{e:?}"));
        match a.im() {
            None => faer::Mat::<f64>::from_fn(n, n, |i, j| a.re()[i * n + j])
                .self_adjoint_eigenvalues(faer::Side::Lower)
                .map_err(err)?,
            Some(_) => a
                .to_dense()
                .to_faer()
                .self_adjoint_eigenvalues(faer::Side::Lower)
                .map_err(err)?,
        }
    };
    vals.sort_by(f64::total_cmp);
    Ok(vals)
}

/// Scalar field abstraction so one Jacobi routine serves real symmetric and
/// complex Hermitian storage.
trait Field: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> {
    const ZERO: Self;
    const ONE: Self;
    fn conj(self) -> Self;
    fn abs(self) -> f64;
    fn re(self) -> f64;
    fn real(x: f64) -> Self;
    fn scale(self, c: f64) -> Self;
}

impl Field for f64 {
    const ZERO: Self = 0.0;
    const ONE: Self = 1.0;
    fn conj(self) -> Self {
        self
    }
    fn abs(self) -> f64 {
        f64::abs(self)
    }
    fn re(self) -> f64 {
        self
    }
    fn real(x: f64) -> Self {
        x
    }
    fn scale(self, c: f64) -> Self {
        self * c
    }
}

impl Field for Complex64 {
    const ZERO: Self = Complex64::new(0.0, 0.0);
    const ONE: Self = Complex64::new(1.0, 0.0);
    fn conj(self) -> Self {
        Complex64::conj(&self)
    }
    fn abs(self) -> f64 {
        self.norm()
    }
    fn re(self) -> f64 {
        self.re
    }
    fn real(x: f64) -> Self {
        Complex64::new(x, 0.0)
    }
    fn scale(self, c: f64) -> Self {
        self * c
    }
}

fn identity<T: Field>(n: usize) -> Vec<T> {
    let mut v = vec![T::ZERO; n * n];
    for k in 0..n {
        v[k * n + k] = T::ONE;
    }
    v
}

fn diagonal<T: Field>(a: &[T], n: usize) -> Vec<f64> {
    (0..n).map(|k| a[k * n + k].re()).collect()
}

fn sorted(vals: Vec<f64>, vecs: Vec<Complex64>, n: usize) -> EigenDecomposition {
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| vals[i].total_cmp(&vals[j]));
    let eigenvalues = order.iter().map(|&k| vals[k]).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, n, |i, j| vecs[i * n + order[j]]);
    EigenDecomposition { eigenvalues, eigenvectors }
}

/// Cyclic Jacobi on a row-major Hermitian matrix. On return `a` is diagonal up
/// to roundoff and `v` (if given) holds the accumulated unitary `W` with
/// `A_in = W diag W*`.
///
/// Each rotation first removes the phase of `a_pq` with a diagonal unitary and
/// then applies the classical real rotation, so the combined step is
/// `W = D P` with `D_qq = conj(e)`, `e = a_pq / |a_pq|`.
fn jacobi<T: Field>(a: &mut [T], n: usize, mut v: Option<&mut Vec<T>>) -> Result<()> {
    let frob: f64 = a.iter().map(|x| x.abs() * x.abs()).sum::<f64>().sqrt();
    if frob == 0.0 || n == 1 {
        return Ok(());
    }
    for sweep in 0..MAX_SWEEPS {
        let mut off = 0.0;
        for p in 0..n {
            for q in p + 1..n {
                let x = a[p * n + q].abs();
                off += x * x;
            }
        }
        if off.sqrt() <= 1e-16 * frob {
            return Ok(());
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                let g = apq.abs();
                if g == 0.0 {
                    continue;
                }
                let app = a[p * n + p].re();
                let aqq = a[q * n + q].re();
                if sweep > 3 && g <= 1e-18 * frob {
                    a[p * n + q] = T::ZERO;
                    a[q * n + p] = T::ZERO;
                    continue;
                }
                let e = apq.scale(1.0 / g);
                let ec = e.conj();
                let theta = (aqq - app) / (2.0 * g);
                let t = if theta.abs() > 1e150 {
                    0.5 / theta
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                let cs = T::real(c);
                let ss = T::real(s);
                // A <- A W (columns p, q)
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = cs * akp - ss * ec * akq;
                    a[k * n + q] = ss * akp + cs * ec * akq;
                }
                // A <- W* A (rows p, q)
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = cs * apk - ss * e * aqk;
                    a[q * n + k] = ss * apk + cs * e * aqk;
                }
                a[p * n + q] = T::ZERO;
                a[q * n + p] = T::ZERO;
                a[p * n + p] = T::real(a[p * n + p].re());
                a[q * n + q] = T::real(a[q * n + q].re());
                if let Some(v) = v.as_deref_mut() {
                    for k in 0..n {
                        let vkp = v[k * n + p];
                        let vkq = v[k * n + q];
                        v[k * n + p] = cs * vkp - ss * ec * vkq;
                        v[k * n + q] = ss * vkp + cs * ec * vkq;
                    }
                }
            }
        }
    }
    Err(Error::NonConvergence(format!(
        "Jacobi iteration exceeded {MAX_SWEEPS} sweeps (n = {n})"
    )))
}
