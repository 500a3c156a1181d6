use num_complex::Complex64;

use super::{dot, MatrixTuple, Operatope};
use crate::error::{Error, Result};
use crate::spectral::HermitianMatrix;

/// Support of the one-summand operatope with `A_i = [[a_i, b_i], [b_i, c_i]]`,
/// `max{|⟨u, a + c⟩|, sqrt(⟨u, a - c⟩² + ⟨u, 2b⟩²)}`.
pub fn support_2x2_closed_form(a: &[f64], b: &[f64], c: &[f64], u: &[f64]) -> Result<f64> {
    let d = u.len();
    for x in [a, b, c] {
        if x.len() != d {
            return Err(Error::dims(d, x.len()));
        }
    }
    let (ua, ub, uc) = (dot(u, a)?, dot(u, b)?, dot(u, c)?);
    Ok((ua + uc).abs().max((ua - uc).hypot(2.0 * ub)))
}

/// One-summand operatope with real symmetric 2×2 matrices `[[a_i, b_i], [b_i, c_i]]`.
pub fn two_by_two(a: &[f64], b: &[f64], c: &[f64]) -> Result<Operatope> {
    let d = a.len();
    if b.len() != d || c.len() != d {
        return Err(Error::dims(d, if b.len() != d { b.len() } else { c.len() }));
    }
    let mats = (0..d)
        .map(|i| HermitianMatrix::from_rows(&[vec![a[i], b[i]], vec![b[i], c[i]]]))
        .collect::<Result<Vec<_>>>()?;
    Ok(Operatope::from_tuple(MatrixTuple::new(mats)?))
}

/// Ellipsoid with support `‖C u‖₂`, realized in `ℍ^{d+1}`: the
/// matrix `A_i` carries column `i` of `C`, halved, in its last row and column.
/// Then `Σ u_i A_i` has eigenvalues `±‖Cu‖/2` and zeros.
pub fn ellipsoid_operatope(c: &[Vec<f64>]) -> Result<Operatope> {
    let d = c.len();
    if d == 0 {
        return Err(Error::InvalidInput("empty matrix".into()));
    }
    if let Some(row) = c.iter().find(|r| r.len() != d) {
        return Err(Error::dims(d, row.len()));
    }
    let mats = (0..d)
        .map(|i| {
            HermitianMatrix::from_upper_fn(d + 1, |j, k| {
                if k == d && j < d {
                    Complex64::new(0.5 * c[j][i], 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            })
        })
        .collect();
    Ok(Operatope::from_tuple(MatrixTuple::new(mats)?))
}

/// Unit disc in the plane as a 2-operatope.
pub fn disc() -> Operatope {
    two_by_two(&[0.5, 0.0], &[0.0, 0.5], &[-0.5, 0.0]).expect("fixed sizes")
}

/// Segment `[-a, a]` as a 1-operatope.
pub fn segment(a: &[f64]) -> Operatope {
    let mats = a.iter().map(|&x| HermitianMatrix::from_diagonal(&[x])).collect();
    Operatope::from_tuple(MatrixTuple::new(mats).expect("equal sizes"))
}

/// The 2-operatope in `ℝ³` with `A_1 = diag(1, -1)`, `A_2 = [[0,1],[1,0]]`,
/// `A_3 = I`: the convex hull of a unit-radius disc and a segment, which is not
/// a zonoid.
pub fn nonzonoid_example() -> Operatope {
    two_by_two(&[1.0, 0.0, 1.0], &[0.0, 1.0, 0.0], &[-1.0, 0.0, 1.0]).expect("fixed sizes")
}
