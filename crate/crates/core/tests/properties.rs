use operanoid::bodies::{boundary_point, MatrixTuple, Operatope};
use operanoid::faces::{face_at_direction, face_support};
use operanoid::freeprob::{free_zonoid_semicircle_support, SpectralLaw};
use operanoid::lift::{lift_nc_zonoid_support, lift_operatope_support};
use operanoid::spectral::HermitianMatrix;
use proptest::prelude::*;

const D: usize = 3;
const M: usize = 3;

fn hermitian() -> impl Strategy<Value = HermitianMatrix> {
    (prop::collection::vec(-2.0f64..2.0, M * M), prop::collection::vec(-2.0f64..2.0, M * M)).prop_map(|(a, b)| {
        HermitianMatrix::from_upper_fn(M, |j, k| {
            if j == k {
                a[j * M + k].into()
            } else {
                num_complex::Complex64::new(a[j * M + k], b[j * M + k])
            }
        })
    })
}

fn tuple() -> impl Strategy<Value = MatrixTuple> {
    prop::collection::vec(hermitian(), D).prop_map(|ms| MatrixTuple::new(ms).unwrap())
}

fn body() -> impl Strategy<Value = Operatope> {
    (prop::collection::vec(-1.0f64..1.0, D), prop::collection::vec(tuple(), 1..3))
        .prop_map(|(v, ts)| Operatope::new(v, ts).unwrap())
}

fn direction() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.0f64..1.0, D).prop_filter("nonzero", |u| u.iter().map(|x| x * x).sum::<f64>() > 1e-2)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn support_is_sublinear(z in body(), u in direction(), w in direction(), t in 0.1f64..5.0) {
        let h = |x: &[f64]| z.support(x).unwrap();
        let tu: Vec<f64> = u.iter().map(|x| t * x).collect();
        prop_assert!(close(h(&tu), t * h(&u), 1e-10));
        let s: Vec<f64> = u.iter().zip(&w).map(|(a, b)| a + b).collect();
        prop_assert!(h(&s) <= h(&u) + h(&w) + 1e-10);
    }

    #[test]
    fn centred_body_is_symmetric(z in body(), u in direction()) {
        let neg: Vec<f64> = u.iter().map(|x| -x).collect();
        let v = z.translation();
        prop_assert!(close(z.support(&u).unwrap() - dot(v, &u), z.support(&neg).unwrap() + dot(v, &u), 1e-10));
    }

    #[test]
    fn minkowski_sum_adds_supports(a in body(), b in body(), u in direction()) {
        let s = a.minkowski_sum(&b).unwrap();
        prop_assert!(close(s.support(&u).unwrap(), a.support(&u).unwrap() + b.support(&u).unwrap(), 1e-10));
    }

    #[test]
    fn boundary_point_is_a_supporting_point(z in body(), u in direction(), w in direction()) {
        let p = boundary_point(&z, &u).unwrap();
        prop_assert!(close(dot(&p, &u), z.support(&u).unwrap(), 1e-9));
        prop_assert!(dot(&p, &w) <= z.support(&w).unwrap() + 1e-9);
    }

    #[test]
    fn face_support_is_the_directional_derivative(z in body(), xi in direction(), u in direction()) {
        let fd = face_at_direction(&z, &xi, None).unwrap();
        let hf = face_support(&fd, &u).unwrap();
        // the face lies in the body and touches the supporting hyperplane at xi
        prop_assert!(hf <= z.support(&u).unwrap() + 1e-9);
        prop_assert!(close(face_support(&fd, &xi).unwrap(), z.support(&xi).unwrap(), 1e-9));
        // one-sided difference quotients decrease to h_F(u)
        let q = |t: f64| {
            let x: Vec<f64> = xi.iter().zip(&u).map(|(a, b)| a + t * b).collect();
            (z.support(&x).unwrap() - z.support(&xi).unwrap()) / t
        };
        prop_assert!(q(1e-3) + 1e-9 >= hf);
    }

    #[test]
    fn lift_splits_into_positive_and_negative_parts(t in tuple(), u in direction(), c in 0.1f64..3.0) {
        let ts = [t.clone()];
        let mut up = vec![0.0];
        up.extend_from_slice(&u);
        let mut un = vec![0.0];
        un.extend(u.iter().map(|x| -x));
        let sum = lift_operatope_support(&ts, &up, false).unwrap() + lift_operatope_support(&ts, &un, false).unwrap();
        prop_assert!(close(sum, t.trace_norm_at(&u).unwrap(), 1e-10));
        // a large enough u₀ makes the matrix positive, leaving a plain trace
        let big = 1.0 + t.trace_norm_at(&u).unwrap();
        let mut ub = vec![big];
        ub.extend_from_slice(&u);
        let want = big * M as f64 + dot(&t.traces(), &u);
        prop_assert!(close(lift_operatope_support(&ts, &ub, false).unwrap(), want, 1e-10));
        let mut uc = vec![c];
        uc.extend(std::iter::repeat_n(0.0, D));
        prop_assert!(close(lift_operatope_support(&ts, &uc, true).unwrap(), c, 1e-12));
    }

    #[test]
    fn semicircle_free_zonoid_is_an_ellipse(s1 in 0.1f64..3.0, s2 in 0.1f64..3.0, u0 in -1.0f64..1.0, u1 in -1.0f64..1.0) {
        let h = free_zonoid_semicircle_support(&[s1, s2], &[u0, u1]).unwrap();
        let want = 8.0 / (3.0 * std::f64::consts::PI) * ((s1 * u0).powi(2) + (s2 * u1).powi(2)).sqrt();
        prop_assert!(close(h, want, 1e-12));
    }

    #[test]
    fn semicircle_lift_positive_part(sigma in 0.1f64..3.0, b in 0.1f64..3.0) {
        let law = SpectralLaw::Semicircle { sigma };
        let h = lift_nc_zonoid_support(&law, &[0.0, b]).unwrap();
        prop_assert!(close(h, 4.0 * sigma * b / (3.0 * std::f64::consts::PI), 1e-8));
    }
}
