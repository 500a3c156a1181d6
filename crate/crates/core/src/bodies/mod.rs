//! Operatopes: Minkowski sums of linear images of the operator-norm ball of
//! Hermitian matrices, plus direction nets, Hausdorff brackets and boundary
//! extraction.

mod constructions;
mod mesh;
mod net;

pub use constructions::{
    disc, ellipsoid_operatope, nonzonoid_example, segment, support_2x2_closed_form, two_by_two,
};
pub use mesh::{boundary_mesh, boundary_point, write_csv_points, write_obj_points};
pub use net::{
    circumradius_bound, circumradius_from_values, direction_net, hausdorff_estimate, support_on_net, DirectionNet,
    HausdorffBracket, NetKind,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::{trace_norm, HermitianMatrix};

/// A d-tuple of equally sized Hermitian matrices, i.e. the linear map
/// `X ↦ (⟨A_1, X⟩, …, ⟨A_d, X⟩)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<HermitianMatrix>", into = "Vec<HermitianMatrix>")]
pub struct MatrixTuple {
    matrices: Vec<HermitianMatrix>,
}

impl MatrixTuple {
    pub fn new(matrices: Vec<HermitianMatrix>) -> Result<Self> {
        let Some(first) = matrices.first() else {
            return Err(Error::InvalidInput("a matrix tuple needs d >= 1".into()));
        };
        let m = first.dim();
        if let Some(bad) = matrices.iter().find(|a| a.dim() != m) {
            return Err(Error::dims(m, bad.dim()));
        }
        Ok(Self { matrices })
    }

    pub fn zeros(d: usize, m: usize) -> Self {
        Self { matrices: vec![HermitianMatrix::zeros(m); d] }
    }

    pub fn d(&self) -> usize {
        self.matrices.len()
    }

    pub fn m(&self) -> usize {
        self.matrices[0].dim()
    }

    pub fn matrices(&self) -> &[HermitianMatrix] {
        &self.matrices
    }

    pub fn into_matrices(self) -> Vec<HermitianMatrix> {
        self.matrices
    }

    pub fn scale(&self, c: f64) -> Self {
        Self { matrices: self.matrices.iter().map(|a| a.scale(c)).collect() }
    }

    pub fn map(&self, f: impl Fn(&HermitianMatrix) -> Result<HermitianMatrix>) -> Result<Self> {
        Self::new(self.matrices.iter().map(f).collect::<Result<_>>()?)
    }

    /// `Σ u_i A_i`.
    pub fn apply_adjoint(&self, u: &[f64]) -> Result<HermitianMatrix> {
        if u.len() != self.d() {
            return Err(Error::dims(self.d(), u.len()));
        }
        let mut out = HermitianMatrix::zeros(self.m());
        for (a, &ui) in self.matrices.iter().zip(u) {
            if ui != 0.0 {
                out.add_scaled(ui, a)?;
            }
        }
        Ok(out)
    }

    /// `‖Σ u_i A_i‖_1`, the support function of the image of the unit ball.
    pub fn trace_norm_at(&self, u: &[f64]) -> Result<f64> {
        trace_norm(&self.apply_adjoint(u)?)
    }

    /// `(Tr A_1, …, Tr A_d)`.
    pub fn traces(&self) -> Vec<f64> {
        self.matrices.iter().map(HermitianMatrix::trace).collect()
    }
}

impl TryFrom<Vec<HermitianMatrix>> for MatrixTuple {
    type Error = Error;

    fn try_from(v: Vec<HermitianMatrix>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<MatrixTuple> for Vec<HermitianMatrix> {
    fn from(t: MatrixTuple) -> Self {
        t.matrices
    }
}

/// `h(u) = ⟨v, u⟩ + Σ_j ‖Σ_i u_i A_i^{(j)}‖_1`.
///
/// Summands may have different matrix sizes; the order of the operatope is the
/// largest of them.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "OperatopeJson", into = "OperatopeJson")]
pub struct Operatope {
    v: Vec<f64>,
    summands: Vec<MatrixTuple>,
}

#[derive(Serialize, Deserialize)]
struct OperatopeJson {
    d: usize,
    v: Vec<f64>,
    summands: Vec<MatrixTuple>,
}

impl TryFrom<OperatopeJson> for Operatope {
    type Error = Error;

    fn try_from(j: OperatopeJson) -> Result<Self> {
        if j.v.len() != j.d {
            return Err(Error::dims(j.d, j.v.len()));
        }
        Self::new(j.v, j.summands)
    }
}

impl From<Operatope> for OperatopeJson {
    fn from(z: Operatope) -> Self {
        OperatopeJson { d: z.d(), v: z.v, summands: z.summands }
    }
}

impl Operatope {
    pub fn new(v: Vec<f64>, summands: Vec<MatrixTuple>) -> Result<Self> {
        if summands.is_empty() {
            return Err(Error::InvalidInput("an operatope needs at least one summand".into()));
        }
        let d = v.len();
        if let Some(bad) = summands.iter().find(|t| t.d() != d) {
            return Err(Error::dims(d, bad.d()));
        }
        if v.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidInput("non-finite translation".into()));
        }
        Ok(Self { v, summands })
    }

    /// The single point `v`, stored as a zero 1×1 summand.
    pub fn point(v: Vec<f64>) -> Self {
        let d = v.len().max(1);
        let v = if v.is_empty() { vec![0.0] } else { v };
        Self { v, summands: vec![MatrixTuple::zeros(d, 1)] }
    }

    pub fn from_tuple(t: MatrixTuple) -> Self {
        Self { v: vec![0.0; t.d()], summands: vec![t] }
    }

    pub fn d(&self) -> usize {
        self.v.len()
    }

    pub fn translation(&self) -> &[f64] {
        &self.v
    }

    pub fn summands(&self) -> &[MatrixTuple] {
        &self.summands
    }

    /// Largest summand matrix size.
    pub fn order(&self) -> usize {
        self.summands.iter().map(MatrixTuple::m).max().unwrap_or(0)
    }

    pub fn support(&self, u: &[f64]) -> Result<f64> {
        Ok(dot(&self.v, u)? + self.centered_support(u)?)
    }

    /// Support of `Z - v`, which is an even function of `u`.
    pub fn centered_support(&self, u: &[f64]) -> Result<f64> {
        if u.len() != self.d() {
            return Err(Error::dims(self.d(), u.len()));
        }
        let parts = self
            .summands
            .iter()
            .map(|t| t.trace_norm_at(u))
            .collect::<Result<Vec<f64>>>()?;
        Ok(crate::stats::pairwise_sum(&parts))
    }

    pub fn minkowski_sum(&self, other: &Operatope) -> Result<Operatope> {
        if self.d() != other.d() {
            return Err(Error::dims(self.d(), other.d()));
        }
        let v = self.v.iter().zip(&other.v).map(|(a, b)| a + b).collect();
        let summands = self.summands.iter().chain(&other.summands).cloned().collect();
        Ok(Operatope { v, summands })
    }

    pub fn dilate(&self, t: f64) -> Result<Operatope> {
        if !(t >= 0.0) {
            return Err(Error::NegativeScale(t));
        }
        Ok(Operatope {
            v: self.v.iter().map(|x| t * x).collect(),
            summands: self.summands.iter().map(|s| s.scale(t)).collect(),
        })
    }

    pub fn translate(&self, w: &[f64]) -> Result<Operatope> {
        if w.len() != self.d() {
            return Err(Error::dims(self.d(), w.len()));
        }
        let v = self.v.iter().zip(w).map(|(a, b)| a + b).collect();
        Ok(Operatope { v, summands: self.summands.clone() })
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::dims(a.len(), b.len()));
    }
    Ok(a.iter().zip(b).map(|(x, y)| x * y).sum())
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    a.iter().map(|x| x * x).sum::<f64>().sqrt()
}
