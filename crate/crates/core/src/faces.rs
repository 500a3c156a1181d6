//! Exposed faces of operatopes.
//!
//! For `M = Σ ξ_i A_i` with signed eigenprojections `P₊, P₀, P₋`, the one-sided
//! derivative of the trace norm is
//!
//! ```text
//! d/dλ ‖M + λN‖₁ |₀₊ = Tr((P₊ - P₋) N) + ‖P₀ N P₀‖₁
//! ```
//!
//! so the face `F_ξ` of a summand is the translate by `(⟨A_i, P₊ - P₋⟩)_i` of
//! the operatope of the compressed tuple `(P₀ A_i P₀)` on the kernel of `M`.
//! Eigenvalues with `|λ| ≤ zero_tol` count as kernel; the computed face is the
//! exact face of an operatope within `zero_tol` of the input.

use rayon::prelude::*;
use serde::Serialize;

use crate::bodies::{MatrixTuple, Operatope};
use crate::error::{Error, Result};
use crate::spectral::eig_hermitian;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FaceSummand {
    pub translation: Vec<f64>,
    /// Compressed tuple on the kernel, `None` when the kernel is trivial.
    pub residual: Option<MatrixTuple>,
    pub kernel_dim: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FaceDescriptor {
    pub xi: Vec<f64>,
    pub summands: Vec<FaceSummand>,
    /// Body translation plus every summand's translation.
    pub translation: Vec<f64>,
}

impl FaceDescriptor {
    pub fn d(&self) -> usize {
        self.xi.len()
    }

    /// True if every kernel is trivial, so the face is a single point.
    pub fn is_point(&self) -> bool {
        self.summands.iter().all(|s| s.residual.is_none())
    }

    /// The face as an operatope (a point operatope when all kernels are trivial).
    pub fn to_operatope(&self) -> Result<Operatope> {
        let residuals: Vec<MatrixTuple> = self.summands.iter().filter_map(|s| s.residual.clone()).collect();
        if residuals.is_empty() {
            return Ok(Operatope::point(self.translation.clone()));
        }
        Operatope::new(self.translation.clone(), residuals)
    }
}

/// `1e-8 (1 + ‖M‖_op)`.
pub fn default_face_tol(eigs: &[f64]) -> f64 {
    let op = eigs.iter().fold(0.0f64, |a, l| a.max(l.abs()));
    1e-8 * (1.0 + op)
}

fn face_of_summand(t: &MatrixTuple, xi: &[f64], zero_tol: Option<f64>) -> Result<FaceSummand> {
    let e = eig_hermitian(&t.apply_adjoint(xi)?)?;
    let tol = zero_tol.unwrap_or_else(|| default_face_tol(&e.eigenvalues));
    let sign = e.reconstruct_with(|l| {
        if l > tol {
            1.0
        } else if l < -tol {
            -1.0
        } else {
            0.0
        }
    });
    let translation = t.matrices().iter().map(|a| a.inner(&sign)).collect::<Result<Vec<_>>>()?;
    let basis = e.basis(|l| l.abs() <= tol);
    let kernel_dim = basis.cols();
    let residual = if kernel_dim == 0 { None } else { Some(t.map(|a| a.compress(&basis))?) };
    Ok(FaceSummand { translation, residual, kernel_dim })
}

/// The exposed face of `z` in direction `xi` (normalized internally).
/// `zero_tol = None` uses [`default_face_tol`] per summand.
pub fn face_at_direction(z: &Operatope, xi: &[f64], zero_tol: Option<f64>) -> Result<FaceDescriptor> {
    if xi.len() != z.d() {
        return Err(Error::dims(z.d(), xi.len()));
    }
    if let Some(t) = zero_tol {
        if !(t > 0.0) {
            return Err(Error::InvalidInput(format!("zero_tol must be positive, got {t}")));
        }
    }
    let r = xi.iter().map(|x| x * x).sum::<f64>().sqrt();
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::InvalidInput("face direction must be nonzero".into()));
    }
    let xi: Vec<f64> = xi.iter().map(|x| x / r).collect();
    let summands = z
        .summands()
        .par_iter()
        .map(|t| face_of_summand(t, &xi, zero_tol))
        .collect::<Result<Vec<_>>>()?;
    let mut translation = z.translation().to_vec();
    for s in &summands {
        for (a, b) in translation.iter_mut().zip(&s.translation) {
            *a += b;
        }
    }
    Ok(FaceDescriptor { xi, summands, translation })
}

/// `h_F(u) = ⟨translation, u⟩ + Σ_j ‖Σ_i u_i [A_i^{(j)}]_ker‖₁`.
pub fn face_support(fd: &FaceDescriptor, u: &[f64]) -> Result<f64> {
    if u.len() != fd.d() {
        return Err(Error::dims(fd.d(), u.len()));
    }
    let lin: f64 = fd.translation.iter().zip(u).map(|(a, b)| a * b).sum();
    let mut parts = Vec::with_capacity(fd.summands.len());
    for s in &fd.summands {
        if let Some(t) = &s.residual {
            parts.push(t.trace_norm_at(u)?);
        }
    }
    Ok(lin + crate::stats::pairwise_sum(&parts))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bodies::{disc, segment};
    use crate::ensembles::{sample_goe, RngStream};
    use crate::spectral::HermitianMatrix;
    use rand::Rng;
    use rand_distr::{Distribution, StandardNormal};

    fn unit(rng: &mut impl Rng, d: usize) -> Vec<f64> {
        let g: Vec<f64> = (0..d).map(|_| StandardNormal.sample(rng)).collect();
        let r = g.iter().map(|x| x * x).sum::<f64>().sqrt();
        g.into_iter().map(|x| x / r).collect()
    }

    fn random_operatope(rng: &mut impl Rng, d: usize, m: usize, summands: usize) -> Operatope {
        let ts = (0..summands)
            .map(|_| MatrixTuple::new((0..d).map(|_| sample_goe(m, 1.0, rng)).collect()).unwrap())
            .collect();
        let v = (0..d).map(|_| StandardNormal.sample(rng)).collect();
        Operatope::new(v, ts).unwrap()
    }

    #[test]
    fn disc_faces_are_points() {
        let z = disc();
        for k in 0..12 {
            let t = 0.5 * k as f64;
            let fd = face_at_direction(&z, &[t.cos(), t.sin()], None).unwrap();
            assert!(fd.is_point());
            assert!((fd.translation[0] - t.cos()).abs() < 1e-12);
            assert!((fd.translation[1] - t.sin()).abs() < 1e-12);
        }
        let fd = face_at_direction(&z, &[3.0, 4.0], None).unwrap();
        assert!((fd.xi[0] - 0.6).abs() < 1e-15);
    }

    #[test]
    fn segment_face_is_whole_segment() {
        let z = segment(&[1.0, 0.0]);
        let fd = face_at_direction(&z, &[0.0, 1.0], None).unwrap();
        assert_eq!(fd.summands[0].kernel_dim, 1);
        for u in [[1.0, 0.0], [-0.3, 0.7], [0.2, -5.0]] {
            assert!((face_support(&fd, &u).unwrap() - u[0].abs()).abs() < 1e-15);
        }
        // facet of a zonotope summand inside a larger body
        let z2 = z.minkowski_sum(&segment(&[0.0, 2.0])).unwrap();
        let fd = face_at_direction(&z2, &[0.0, 1.0], None).unwrap();
        for u in [[1.0, 0.0], [-0.3, 0.7]] {
            assert!((face_support(&fd, &u).unwrap() - (u[0].abs() + 2.0 * u[1])).abs() < 1e-14);
        }
    }

    #[test]
    fn face_matches_one_sided_difference_quotient() {
        let mut rng = RngStream::new(17, 0).rng();
        let lambda = 1e-5;
        for _ in 0..40 {
            let z = random_operatope(&mut rng, 3, 5, 2);
            let xi = unit(&mut rng, 3);
            let u = unit(&mut rng, 3);
            let fd = face_at_direction(&z, &xi, None).unwrap();
            let shifted: Vec<f64> = xi.iter().zip(&u).map(|(a, b)| a + lambda * b).collect();
            let fdq = (z.support(&shifted).unwrap() - z.support(&xi).unwrap()) / lambda;
            let hf = face_support(&fd, &u).unwrap();
            assert!((hf - fdq).abs() <= 1e-3 * hf.abs().max(1.0), "{hf} vs {fdq}");
        }
    }

    #[test]
    fn degenerate_direction_matches_difference_quotient() {
        // M_ξ = diag(1, 0, 0, -1) has a two-dimensional kernel
        let a1 = HermitianMatrix::from_diagonal(&[1.0, 0.0, 0.0, -1.0]);
        let a2 = HermitianMatrix::from_rows(&[
            vec![0.3, 0.1, 0.0, 0.2],
            vec![0.1, 1.0, 0.5, 0.0],
            vec![0.0, 0.5, -2.0, 0.4],
            vec![0.2, 0.0, 0.4, 0.7],
        ])
        .unwrap();
        let z = Operatope::from_tuple(MatrixTuple::new(vec![a1, a2]).unwrap());
        let fd = face_at_direction(&z, &[1.0, 0.0], None).unwrap();
        assert_eq!(fd.summands[0].kernel_dim, 2);
        for u in [[0.0, 1.0], [0.5, -1.0], [-1.0, 0.3]] {
            let lambda = 1e-7;
            let fdq = (z.support(&[1.0 + lambda * u[0], lambda * u[1]]).unwrap() - z.support(&[1.0, 0.0]).unwrap()) / lambda;
            assert!((face_support(&fd, &u).unwrap() - fdq).abs() < 1e-5);
        }
    }

    #[test]
    fn sandwich_and_smooth_points() {
        let mut rng = RngStream::new(18, 0).rng();
        for _ in 0..20 {
            let z = random_operatope(&mut rng, 3, 4, 3);
            let xi = unit(&mut rng, 3);
            let fd = face_at_direction(&z, &xi, None).unwrap();
            assert!((face_support(&fd, &xi).unwrap() - z.support(&xi).unwrap()).abs() < 1e-9);
            for _ in 0..20 {
                let u = unit(&mut rng, 3);
                assert!(face_support(&fd, &u).unwrap() <= z.support(&u).unwrap() + 1e-9);
            }
            // generic directions give points: h_F is linear
            assert!(fd.is_point());
            let u = unit(&mut rng, 3);
            let neg: Vec<f64> = u.iter().map(|x| -x).collect();
            let c: f64 = fd.translation.iter().zip(&u).map(|(a, b)| a * b).sum();
            let hu = face_support(&fd, &u).unwrap() - c;
            let hn = face_support(&fd, &neg).unwrap() + c;
            assert!((hu + hn).abs() < 1e-12);
        }
    }

    #[test]
    fn face_of_a_face_is_dominated() {
        let a1 = HermitianMatrix::from_diagonal(&[1.0, 0.0, 0.0]);
        let a2 = HermitianMatrix::from_rows(&[vec![0.0, 1.0, 0.0], vec![1.0, 0.0, 0.2], vec![0.0, 0.2, 0.5]]).unwrap();
        let a3 = HermitianMatrix::from_diagonal(&[0.0, 1.0, -1.0]);
        let z = Operatope::from_tuple(MatrixTuple::new(vec![a1, a2, a3]).unwrap());
        let fd = face_at_direction(&z, &[1.0, 0.0, 0.0], None).unwrap();
        assert_eq!(fd.summands[0].kernel_dim, 2);
        let f = fd.to_operatope().unwrap();
        let fd2 = face_at_direction(&f, &[0.0, 0.6, 0.8], None).unwrap();
        let mut rng = RngStream::new(19, 0).rng();
        for _ in 0..50 {
            let u = unit(&mut rng, 3);
            assert!(face_support(&fd2, &u).unwrap() <= face_support(&fd, &u).unwrap() + 1e-12);
            assert!((f.support(&u).unwrap() - face_support(&fd, &u).unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn errors() {
        let z = disc();
        assert!(face_at_direction(&z, &[1.0], None).is_err());
        assert!(face_at_direction(&z, &[0.0, 0.0], None).is_err());
        assert!(face_at_direction(&z, &[1.0, 0.0], Some(0.0)).is_err());
        let fd = face_at_direction(&z, &[1.0, 0.0], None).unwrap();
        assert!(matches!(face_support(&fd, &[1.0, 0.0, 0.0]), Err(Error::DimensionMismatch { .. })));
        let json = serde_json::to_value(&fd).unwrap();
        assert!(json.get("translation").is_some());
    }
}
