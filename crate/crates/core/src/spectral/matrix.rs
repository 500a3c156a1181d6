use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance on `|a_jk - conj(a_kj)|` accepted at construction.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// A dense m×m complex Hermitian matrix, stored row-major as separate real and
/// imaginary planes. Matrices whose imaginary plane vanishes are stored as real
/// symmetric and take the real eigensolver path.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MatrixJson", into = "MatrixJson")]
pub struct HermitianMatrix {
    dim: usize,
    re: Vec<f64>,
    im: Option<Vec<f64>>,
}

impl HermitianMatrix {
    pub fn zeros(m: usize) -> Self {
        Self { dim: m, re: vec![0.0; m * m], im: None }
    }

    pub fn identity(m: usize) -> Self {
        Self::from_diagonal(&vec![1.0; m])
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let m = diag.len();
        let mut re = vec![0.0; m * m];
        for (k, &x) in diag.iter().enumerate() {
            re[k * m + k] = x;
        }
        Self { dim: m, re, im: None }
    }

    /// Real symmetric matrix from row-major entries.
    pub fn from_real(m: usize, re: Vec<f64>) -> Result<Self> {
        Self::from_parts(m, re, None)
    }

    /// Complex Hermitian matrix from row-major real and imaginary planes.
    pub fn from_complex(m: usize, re: Vec<f64>, im: Vec<f64>) -> Result<Self> {
        Self::from_parts(m, re, Some(im))
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let m = rows.len();
        let mut re = Vec::with_capacity(m * m);
        for row in rows {
            if row.len() != m {
                return Err(Error::InvalidMatrix(format!(
                    "row of length {} in a {m}x{m} matrix",
                    row.len()
                )));
            }
            re.extend_from_slice(row);
        }
        Self::from_real(m, re)
    }

    /// Validates Hermitian symmetry and finiteness, then symmetrizes exactly as
    /// `(A + A*)/2`.
    pub fn from_parts(m: usize, mut re: Vec<f64>, mut im: Option<Vec<f64>>) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidMatrix("dimension must be positive".into()));
        }
        if re.len() != m * m || im.as_ref().is_some_and(|v| v.len() != m * m) {
            return Err(Error::InvalidMatrix(format!("expected {} entries", m * m)));
        }
        if re.iter().chain(im.iter().flatten()).any(|x| !x.is_finite()) {
            return Err(Error::InvalidMatrix("non-finite entry".into()));
        }
        for j in 0..m {
            for k in j..m {
                let (a, b) = (j * m + k, k * m + j);
                let dr = re[a] - re[b];
                let di = im.as_ref().map_or(0.0, |v| v[a] + v[b]);
                if dr.hypot(di) > HERMITIAN_TOL {
                    return Err(Error::InvalidMatrix(format!(
                        "entries ({j},{k}) and ({k},{j}) are not conjugate"
                    )));
                }
                let r = 0.5 * (re[a] + re[b]);
                re[a] = r;
                re[b] = r;
                if let Some(v) = im.as_mut() {
                    let i = 0.5 * (v[a] - v[b]);
                    v[a] = i;
                    v[b] = -i;
                }
            }
        }
        if im.as_ref().is_some_and(|v| v.iter().all(|&x| x == 0.0)) {
            im = None;
        }
        Ok(Self { dim: m, re, im })
    }

    /// Builds from a closure over the upper triangle (`j <= k`); the lower triangle
    /// is filled by conjugation and diagonal imaginary parts are dropped.
    pub fn from_upper_fn(m: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut re = vec![0.0; m * m];
        let mut im = vec![0.0; m * m];
        for j in 0..m {
            for k in j..m {
                let z = f(j, k);
                re[j * m + k] = z.re;
                re[k * m + j] = z.re;
                if j != k {
                    im[j * m + k] = z.im;
                    im[k * m + j] = -z.im;
                }
            }
        }
        let im = if im.iter().all(|&x| x == 0.0) { None } else { Some(im) };
        Self { dim: m, re, im }
    }

    pub(crate) fn from_parts_unchecked(m: usize, re: Vec<f64>, im: Option<Vec<f64>>) -> Self {
        debug_assert_eq!(re.len(), m * m);
        Self { dim: m, re, im }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_real(&self) -> bool {
        self.im.is_none()
    }

    pub fn re(&self) -> &[f64] {
        &self.re
    }

    pub fn im(&self) -> Option<&[f64]> {
        self.im.as_deref()
    }

    pub fn get(&self, j: usize, k: usize) -> Complex64 {
        let idx = j * self.dim + k;
        Complex64::new(self.re[idx], self.im.as_ref().map_or(0.0, |v| v[idx]))
    }

    pub fn to_complex_vec(&self) -> Vec<Complex64> {
        match &self.im {
            None => self.re.iter().map(|&r| Complex64::new(r, 0.0)).collect(),
            Some(im) => self.re.iter().zip(im).map(|(&r, &i)| Complex64::new(r, i)).collect(),
        }
    }

    pub fn to_dense(&self) -> ComplexMatrix {
        ComplexMatrix { rows: self.dim, cols: self.dim, data: self.to_complex_vec() }
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|k| self.re[k * self.dim + k]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        let s: f64 = self.re.iter().chain(self.im.iter().flatten()).map(|x| x * x).sum();
        s.sqrt()
    }

    pub fn max_abs_entry(&self) -> f64 {
        (0..self.re.len())
            .map(|i| self.re[i].hypot(self.im.as_ref().map_or(0.0, |v| v[i])))
            .fold(0.0, f64::max)
    }

    /// The real inner product `<A, B> = Re Tr(A B)` on Hermitian matrices.
    pub fn inner(&self, other: &Self) -> Result<f64> {
        self.check_same_dim(other)?;
        let mut s: f64 = self.re.iter().zip(&other.re).map(|(a, b)| a * b).sum();
        if let (Some(a), Some(b)) = (&self.im, &other.im) {
            s += a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
        }
        Ok(s)
    }

    pub fn scale(&self, c: f64) -> Self {
        Self {
            dim: self.dim,
            re: self.re.iter().map(|x| c * x).collect(),
            im: self.im.as_ref().map(|v| v.iter().map(|x| c * x).collect()),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let mut out = self.clone();
        out.add_scaled(1.0, other)?;
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        let mut out = self.clone();
        out.add_scaled(-1.0, other)?;
        Ok(out)
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, c: f64, other: &Self) -> Result<()> {
        self.check_same_dim(other)?;
        for (a, b) in self.re.iter_mut().zip(&other.re) {
            *a += c * b;
        }
        if let Some(ob) = &other.im {
            let im = self.im.get_or_insert_with(|| vec![0.0; ob.len()]);
            for (a, b) in im.iter_mut().zip(ob) {
                *a += c * b;
            }
        }
        Ok(())
    }

    /// `self + s * I`.
    pub fn shift_diagonal(&self, s: f64) -> Self {
        let mut out = self.clone();
        for k in 0..self.dim {
            out.re[k * self.dim + k] += s;
        }
        out
    }

    /// `V* A V` for a basis `V` with `dim` rows.
    pub fn compress(&self, basis: &ComplexMatrix) -> Result<Self> {
        if basis.rows() != self.dim {
            return Err(Error::dims(self.dim, basis.rows()));
        }
        let av = self.to_dense().matmul(basis)?;
        let c = basis.adjoint().matmul(&av)?;
        Ok(c.hermitian_part())
    }

    /// `U A U*` for a square `U`.
    pub fn conjugate_by(&self, u: &ComplexMatrix) -> Result<Self> {
        let ua = u.matmul(&self.to_dense())?;
        Ok(ua.matmul(&u.adjoint())?.hermitian_part())
    }

    fn check_same_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::dims(self.dim, other.dim));
        }
        Ok(())
    }
}

/// JSON wire form `{"m": int, "re": [[...]], "im": [[...]]}`; `im` is omitted for
/// real matrices.
#[derive(Serialize, Deserialize)]
struct MatrixJson {
    m: usize,
    re: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    im: Option<Vec<Vec<f64>>>,
}

impl From<HermitianMatrix> for MatrixJson {
    fn from(a: HermitianMatrix) -> Self {
        let rows = |v: &[f64]| v.chunks(a.dim).map(<[f64]>::to_vec).collect();
        MatrixJson { m: a.dim, re: rows(&a.re), im: a.im.as_deref().map(rows) }
    }
}

impl TryFrom<MatrixJson> for HermitianMatrix {
    type Error = Error;

    fn try_from(j: MatrixJson) -> Result<Self> {
        let flatten = |rows: Vec<Vec<f64>>| -> Result<Vec<f64>> {
            if rows.len() != j.m || rows.iter().any(|r| r.len() != j.m) {
                return Err(Error::InvalidMatrix(format!("expected {0}x{0} rows", j.m)));
            }
            Ok(rows.into_iter().flatten().collect())
        };
        let re = flatten(j.re)?;
        let im = j.im.map(flatten).transpose()?;
        HermitianMatrix::from_parts(j.m, re, im)
    }
}

/// General dense complex matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

/// Above this size products are delegated to faer's blocked kernels.
const SMALL_MATMUL: usize = 48;

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![Complex64::new(0.0, 0.0); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut out = Self::zeros(n, n);
        for k in 0..n {
            out.data[k * n + k] = Complex64::new(1.0, 0.0);
        }
        out
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_real_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        Self::from_fn(rows, cols, |i, j| Complex64::new(f(i, j), 0.0))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, z: Complex64) {
        self.data[i * self.cols + j] = z;
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|z| z * c).collect() }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::dims(self.rows * self.cols, other.rows * other.cols));
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Ok(Self { rows: self.rows, cols: self.cols, data })
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Selects a subset of columns, in the given order.
    pub fn select_columns(&self, cols: &[usize]) -> Self {
        Self::from_fn(self.rows, cols.len(), |i, j| self.get(i, cols[j]))
    }

    /// Scales column `j` by `d[j]`, i.e. `self * diag(d)`.
    pub fn scale_columns(&self, d: &[f64]) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| self.get(i, j) * d[j])
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::dims(self.cols, other.rows));
        }
        if self.rows.max(self.cols).max(other.cols) > SMALL_MATMUL {
            let a = self.to_faer();
            let b = other.to_faer();
            return Ok(Self::from_faer((&a * &b).as_ref()));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let row = &other.data[k * other.cols..(k + 1) * other.cols];
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        Ok(out)
    }

    /// `(M + M*)/2` as a Hermitian matrix; requires a square matrix.
    pub fn hermitian_part(&self) -> HermitianMatrix {
        assert_eq!(self.rows, self.cols, "hermitian_part of a non-square matrix");
        let n = self.rows;
        HermitianMatrix::from_upper_fn(n, |j, k| 0.5 * (self.get(j, k) + self.get(k, j).conj()))
    }

    pub(crate) fn to_faer(&self) -> faer::Mat<Complex64> {
        faer::Mat::from_fn(self.rows, self.cols, |i, j| self.get(i, j))
    }

    pub(crate) fn from_faer(m: faer::MatRef<'_, Complex64>) -> Self {
        Self::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
    }
}
