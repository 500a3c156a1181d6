//! Hermitian linear algebra: eigendecomposition, trace norm, positive-part
//! trace, signed eigenspace projections and the Jordan–Wielandt lift.

mod eigen;
mod matrix;

pub use eigen::{eig_hermitian, eigenvalues, EigenDecomposition, JACOBI_MAX_DIM};
pub use matrix::{ComplexMatrix, HermitianMatrix, HERMITIAN_TOL};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Sum of absolute eigenvalues.
pub fn trace_norm(a: &HermitianMatrix) -> Result<f64> {
    Ok(trace_norm_of(&eigenvalues(a)?))
}

/// Sum of positive eigenvalues.
pub fn positive_part_trace(a: &HermitianMatrix) -> Result<f64> {
    Ok(eigenvalues(a)?.iter().map(|&l| l.max(0.0)).sum())
}

/// `Σ |λ_k|`, summed in order of increasing `|λ_k|` so that `A` and `-A` give
/// bit-identical results.
pub fn trace_norm_of(eigs: &[f64]) -> f64 {
    let mut abs: Vec<f64> = eigs.iter().map(|l| l.abs()).collect();
    abs.sort_by(f64::total_cmp);
    crate::stats::pairwise_sum(&abs)
}

/// Spectral range based kernel threshold, `1e-8 * max(1, λ_max - λ_min)`.
pub fn default_zero_tol(eigs: &[f64]) -> f64 {
    let range = match (eigs.first(), eigs.last()) {
        (Some(lo), Some(hi)) => hi - lo,
        _ => 0.0,
    };
    1e-8 * range.max(1.0)
}

/// Orthogonal projections onto the positive, kernel and negative eigenspaces.
#[derive(Clone, Debug)]
pub struct SignedProjections {
    pub plus: HermitianMatrix,
    pub zero: HermitianMatrix,
    pub minus: HermitianMatrix,
    pub ranks: (usize, usize, usize),
}

pub fn eigenspace_projections(a: &HermitianMatrix, zero_tol: f64) -> Result<SignedProjections> {
    if !(zero_tol > 0.0) {
        return Err(Error::InvalidInput(format!("zero_tol must be positive, got {zero_tol}")));
    }
    let e = eig_hermitian(a)?;
    Ok(split_projections(&e, zero_tol))
}

pub(crate) fn split_projections(e: &EigenDecomposition, zero_tol: f64) -> SignedProjections {
    let count = |f: &dyn Fn(f64) -> bool| e.eigenvalues.iter().filter(|&&l| f(l)).count();
    let ranks = (
        count(&|l| l > zero_tol),
        count(&|l| l.abs() <= zero_tol),
        count(&|l| l < -zero_tol),
    );
    SignedProjections {
        plus: e.projection(|l| l > zero_tol),
        zero: e.projection(|l| l.abs() <= zero_tol),
        minus: e.projection(|l| l < -zero_tol),
        ranks,
    }
}

/// `[[0, B], [B*, 0]]`. Its eigenvalues are `±` the singular values of `B`.
pub fn jordan_wielandt_lift(b: &ComplexMatrix) -> Result<HermitianMatrix> {
    if b.rows() != b.cols() {
        return Err(Error::InvalidMatrix(format!(
            "Jordan-Wielandt lift needs a square matrix, got {}x{}",
            b.rows(),
            b.cols()
        )));
    }
    let m = b.rows();
    Ok(HermitianMatrix::from_upper_fn(2 * m, |j, k| {
        if j < m && k >= m {
            b.get(j, k - m)
        } else {
            Complex64::new(0.0, 0.0)
        }
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    /// Eigenvalues of a real symmetric matrix by Faddeev–LeVerrier characteristic
    /// polynomial coefficients and Durand–Kerner root finding. Independent of
    /// the Jacobi/faer path; fine for m ≤ 6 with well separated spectra.
    fn charpoly_eigenvalues(a: &[f64], m: usize) -> Vec<f64> {
        let mul = |x: &[f64], y: &[f64]| {
            let mut z = vec![0.0; m * m];
            for i in 0..m {
                for k in 0..m {
                    for j in 0..m {
                        z[i * m + j] += x[i * m + k] * y[k * m + j];
                    }
                }
            }
            z
        };
        // c[k] is the coefficient of λ^{m-k}, c[0] = 1.
        let mut c = vec![1.0];
        let mut mk = vec![0.0; m * m];
        for k in 1..=m {
            let mut prev = mk.clone();
            for i in 0..m {
                prev[i * m + i] += c[k - 1];
            }
            mk = mul(a, &prev);
            let tr: f64 = (0..m).map(|i| mk[i * m + i]).sum();
            c.push(-tr / k as f64);
        }
        let eval = |z: Complex64| c.iter().fold(Complex64::new(0.0, 0.0), |acc, &ck| acc * z + ck);
        let mut roots: Vec<Complex64> = (0..m)
            .map(|k| Complex64::new(0.4, 0.9).powu(k as u32) * 2.0)
            .collect();
        for _ in 0..2000 {
            for i in 0..m {
                let mut den = Complex64::new(1.0, 0.0);
                for j in 0..m {
                    if i != j {
                        den *= roots[i] - roots[j];
                    }
                }
                let step = eval(roots[i]) / den;
                roots[i] -= step;
            }
        }
        let mut r: Vec<f64> = roots.iter().map(|z| z.re).collect();
        r.sort_by(f64::total_cmp);
        r
    }

    #[test]
    fn trivial_spectra() {
        let d = HermitianMatrix::from_diagonal(&[1.0, -2.0]);
        assert_eq!(eigenvalues(&d).unwrap(), vec![-2.0, 1.0]);
        assert_eq!(trace_norm(&d).unwrap(), 3.0);
        assert_eq!(positive_part_trace(&d).unwrap(), 1.0);
        assert_eq!(eigenvalues(&HermitianMatrix::zeros(3)).unwrap(), vec![0.0; 3]);
        let x = HermitianMatrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let e = eigenvalues(&x).unwrap();
        assert!(close(e[0], -1.0, 1e-15) && close(e[1], 1.0, 1e-15));
        assert_eq!(trace_norm(&HermitianMatrix::identity(7)).unwrap(), 7.0);
        assert_eq!(positive_part_trace(&HermitianMatrix::identity(4).scale(-1.0)).unwrap(), 0.0);
    }

    #[test]
    fn matches_charpoly_oracle() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for m in 1..=6 {
            for _ in 0..20 {
                let a = HermitianMatrix::from_upper_fn(m, |_, _| {
                    Complex64::new(rng.random_range(-1.0..1.0), 0.0)
                });
                let ours = eigenvalues(&a).unwrap();
                let oracle = charpoly_eigenvalues(a.re(), m);
                let tn: f64 = oracle.iter().map(|l| l.abs()).sum();
                assert!(close(trace_norm(&a).unwrap(), tn, 1e-7), "m={m}");
                for (x, y) in ours.iter().zip(&oracle) {
                    assert!(close(*x, *y, 1e-6), "m={m}: {ours:?} vs {oracle:?}");
                }
            }
        }
    }

    #[test]
    fn complex_and_large_paths_reconstruct() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for &m in &[3usize, 16, 17, 40] {
            for complex in [false, true] {
                let a = HermitianMatrix::from_upper_fn(m, |j, k| {
                    let im = if complex && j != k { rng.random_range(-1.0..1.0) } else { 0.0 };
                    Complex64::new(rng.random_range(-1.0..1.0), im)
                });
                let e = eig_hermitian(&a).unwrap();
                assert!(e.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
                let err = e.reconstruct().sub(&a).unwrap().frobenius_norm();
                assert!(err <= 1e-9 * m as f64 * a.max_abs_entry(), "m={m} err={err}");
                let u = &e.eigenvectors;
                let g = u.adjoint().matmul(u).unwrap();
                assert!(g.sub(&ComplexMatrix::identity(m)).unwrap().frobenius_norm() <= 1e-10);
                let only = eigenvalues(&a).unwrap();
                for (x, y) in only.iter().zip(&e.eigenvalues) {
                    assert!(close(*x, *y, 1e-10));
                }
            }
        }
    }

    #[test]
    fn projections_split_identity() {
        let a = HermitianMatrix::from_diagonal(&[2.0, 0.0, -1.0]);
        let p = eigenspace_projections(&a, 1e-8).unwrap();
        assert_eq!(p.ranks, (1, 1, 1));
        let p = eigenspace_projections(&HermitianMatrix::identity(4), 1e-8).unwrap();
        assert_eq!(p.ranks, (4, 0, 0));
        assert!(p.plus.sub(&HermitianMatrix::identity(4)).unwrap().frobenius_norm() < 1e-12);
        let a = HermitianMatrix::from_diagonal(&[1.0, 1e-12]);
        assert_eq!(eigenspace_projections(&a, 1e-8).unwrap().ranks, (1, 1, 0));
        assert!(eigenspace_projections(&a, 0.0).is_err());
    }

    #[test]
    fn jordan_wielandt_examples() {
        let lift = jordan_wielandt_lift(&ComplexMatrix::identity(5)).unwrap();
        assert!(close(trace_norm(&lift).unwrap(), 10.0, 1e-12));
        let three = ComplexMatrix::from_real_fn(1, 1, |_, _| 3.0);
        let e = eigenvalues(&jordan_wielandt_lift(&three).unwrap()).unwrap();
        assert!(close(e[0], -3.0, 1e-14) && close(e[1], 3.0, 1e-14));
        let perm = [2usize, 0, 3, 1];
        let p = ComplexMatrix::from_real_fn(4, 4, |i, j| if perm[i] == j { 1.0 } else { 0.0 });
        assert!(close(trace_norm(&jordan_wielandt_lift(&p).unwrap()).unwrap(), 8.0, 1e-12));
        assert!(jordan_wielandt_lift(&ComplexMatrix::zeros(2, 3)).is_err());
    }

    #[test]
    fn json_round_trip_is_bit_exact() {
        let a = HermitianMatrix::from_upper_fn(3, |j, k| {
            Complex64::new(0.1 * (j + 2 * k) as f64 + 1e-17, if j == k { 0.0 } else { 1.0 / 3.0 })
        });
        let s = serde_json::to_string(&a).unwrap();
        let b: HermitianMatrix = serde_json::from_str(&s).unwrap();
        assert_eq!(a, b);
        let r = HermitianMatrix::from_diagonal(&[0.1, 0.2]);
        let s = serde_json::to_string(&r).unwrap();
        assert!(!s.contains("im"));
    }

    fn hermitian(max_m: usize) -> impl Strategy<Value = HermitianMatrix> {
        (1..=max_m).prop_flat_map(|m| {
            (
                proptest::collection::vec(-5.0f64..5.0, m * m),
                proptest::collection::vec(-5.0f64..5.0, m * m),
                any::<bool>(),
            )
                .prop_map(move |(re, im, complex)| {
                    HermitianMatrix::from_upper_fn(m, |j, k| {
                        let i = if complex && j != k { im[j * m + k] } else { 0.0 };
                        Complex64::new(re[j * m + k], i)
                    })
                })
        })
    }

    proptest! {
        #[test]
        fn trace_norm_is_homogeneous(a in hermitian(8), c in -4.0f64..4.0) {
            let lhs = trace_norm(&a.scale(c)).unwrap();
            let rhs = c.abs() * trace_norm(&a).unwrap();
            prop_assert!((lhs - rhs).abs() <= 1e-10 * (1.0 + rhs));
        }

        #[test]
        fn triangle_inequality(a in hermitian(6), seed in any::<u64>()) {
            let m = a.dim();
            let b = a.scale(-0.5).shift_diagonal((seed % 7) as f64 - 3.0);
            let ab = trace_norm(&a.add(&b).unwrap()).unwrap();
            prop_assert!(ab <= trace_norm(&a).unwrap() + trace_norm(&b).unwrap() + 1e-9);
            prop_assert_eq!(b.dim(), m);
        }

        #[test]
        fn positive_part_identities(a in hermitian(8)) {
            let pp = positive_part_trace(&a).unwrap();
            let pm = positive_part_trace(&a.scale(-1.0)).unwrap();
            let tn = trace_norm(&a).unwrap();
            prop_assert!((pp + pm - tn).abs() <= 1e-10 * (1.0 + tn));
            prop_assert!((pp - 0.5 * (a.trace() + tn)).abs() <= 1e-10 * (1.0 + tn));
        }

        #[test]
        fn projections_are_orthogonal(a in hermitian(6)) {
            let e = eigenvalues(&a).unwrap();
            let p = eigenspace_projections(&a, default_zero_tol(&e)).unwrap();
            let m = a.dim();
            let sum = p.plus.add(&p.zero).unwrap().add(&p.minus).unwrap();
            prop_assert!(sum.sub(&HermitianMatrix::identity(m)).unwrap().frobenius_norm() <= 1e-10);
            for q in [&p.plus, &p.zero, &p.minus] {
                let d = q.to_dense();
                let sq = d.matmul(&d).unwrap();
                prop_assert!(sq.sub(&d).unwrap().frobenius_norm() <= 1e-9);
            }
            let cross = p.plus.to_dense().matmul(&p.minus.to_dense()).unwrap();
            prop_assert!(cross.frobenius_norm() <= 1e-9);
        }

        #[test]
        fn lift_spectrum_is_symmetric(re in proptest::collection::vec(-3.0f64..3.0, 16),
                                      im in proptest::collection::vec(-3.0f64..3.0, 16)) {
            let b = ComplexMatrix::from_fn(4, 4, |i, j| Complex64::new(re[i * 4 + j], im[i * 4 + j]));
            let e = eigenvalues(&jordan_wielandt_lift(&b).unwrap()).unwrap();
            for k in 0..4 {
                prop_assert!((e[k] + e[7 - k]).abs() <= 1e-10 * (1.0 + e[7].abs()));
            }
        }
    }
}
