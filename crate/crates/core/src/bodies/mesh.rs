use std::io::Write;

use rayon::prelude::*;

use super::{DirectionNet, Operatope};
use crate::error::Result;
use crate::io::fmt_float;
use crate::spectral::{default_zero_tol, eig_hermitian};

/// A maximizer of `⟨·, u⟩` over `Z`: `v + Σ_j (⟨A_i^{(j)}, S_j⟩)_i` with
/// `S_j = U_j sign(Λ_j) U_j*`, kernel eigenvalues getting sign 0.
///
/// At directions where some summand is singular this selects one point of the
/// exposed face, not the whole face.
pub fn boundary_point(z: &Operatope, u: &[f64]) -> Result<Vec<f64>> {
    let mut p = z.translation().to_vec();
    for t in z.summands() {
        let e = eig_hermitian(&t.apply_adjoint(u)?)?;
        let tol = default_zero_tol(&e.eigenvalues);
        let s = e.reconstruct_with(|l| {
            if l > tol {
                1.0
            } else if l < -tol {
                -1.0
            } else {
                0.0
            }
        });
        for (pi, a) in p.iter_mut().zip(t.matrices()) {
            *pi += a.inner(&s)?;
        }
    }
    Ok(p)
}

/// One boundary point per net direction, in net order. For `d = 2` the
/// equally spaced net makes this an angle-ordered polygon.
pub fn boundary_mesh(z: &Operatope, net: &DirectionNet) -> Result<Vec<Vec<f64>>> {
    net.directions().par_iter().map(|u| boundary_point(z, u)).collect()
}

/// One point per line, comma separated, values at `precision` significant digits.
pub fn write_csv_points(mut w: impl Write, points: &[Vec<f64>], precision: usize) -> Result<()> {
    for p in points {
        let row: Vec<String> = p.iter().map(|&x| fmt_float(x, precision)).collect();
        writeln!(w, "{}", row.join(","))?;
    }
    Ok(())
}

/// Wavefront OBJ vertex lines `v x y z` for three-dimensional point clouds.
pub fn write_obj_points(mut w: impl Write, points: &[Vec<f64>], precision: usize) -> Result<()> {
    for p in points {
        let row: Vec<String> = p.iter().map(|&x| fmt_float(x, precision)).collect();
        writeln!(w, "v {}", row.join(" "))?;
    }
    Ok(())
}
