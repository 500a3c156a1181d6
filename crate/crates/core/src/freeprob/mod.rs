//! Spectral laws, free-probability closed forms, and the Marchenko–Pastur ⊞
//! semicircle density.

mod law;
mod mp_semicircle;

pub use law::{mp_density, mp_edges, semicircle_density, LawSampler, SpectralLaw, MASS_TOL};
pub use mp_semicircle::{mp_plus_semicircle_density, mp_plus_semicircle_support, MpSemicircle};

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{integrate, DEFAULT_ABS_TOL, DEFAULT_MAX_PANELS};

/// `∫ |t| dν` for the standard semicircle law.
pub const SEMICIRCLE_ABS_MEAN: f64 = 8.0 / (3.0 * PI);

/// Variance of `Σ u_i a_i` for free semicircular `a_i` of variances `σ_i²`:
/// R-transforms add, `R(s) = Σ u_i² σ_i² s`, so the sum is semicircular with
/// variance `Σ u_i² σ_i²`.
pub fn linear_combo_r_transform_semicircle(sigmas: &[f64], u: &[f64]) -> Result<f64> {
    if sigmas.len() != u.len() {
        return Err(Error::dims(sigmas.len(), u.len()));
    }
    Ok(sigmas.iter().zip(u).map(|(s, x)| x * x * s * s).sum())
}

/// Support function of the free zonoid of free semicircular variables,
/// `(8 / 3π) sqrt(Σ u_i² σ_i²)`: an axis-aligned ellipsoid.
pub fn free_zonoid_semicircle_support(sigmas: &[f64], u: &[f64]) -> Result<f64> {
    Ok(SEMICIRCLE_ABS_MEAN * linear_combo_r_transform_semicircle(sigmas, u)?.sqrt())
}

/// `∫ |x| ρ(x) dx` over `[lo, hi]` with the kink at zero as a panel boundary.
pub fn free_zonoid_support_from_density(
    density: impl Fn(f64) -> f64,
    lo: f64,
    hi: f64,
    breaks: &[f64],
) -> Result<f64> {
    let mut b = breaks.to_vec();
    b.push(0.0);
    Ok(integrate(|x| x.abs() * density(x), lo, hi, &b, DEFAULT_ABS_TOL, DEFAULT_MAX_PANELS)?.value)
}

/// `τ(|a|) = ∫ |t| dν(t)` for the spectral law `ν` of `a = Σ u_i a_i`.
pub fn nc_zonoid_support_from_law(law: &SpectralLaw) -> Result<f64> {
    law.abs_mean()
}

/// A free zonoid: translation plus `τ(|Σ u_i w_i a_i|)` for free `a_i` with
/// the given laws and optional weights `w_i`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FreeZonoidSpec {
    pub laws: Vec<SpectralLaw>,
    #[serde(default)]
    pub weights: Option<Vec<f64>>,
    #[serde(default)]
    pub v: Option<Vec<f64>>,
}

impl FreeZonoidSpec {
    pub fn new(laws: Vec<SpectralLaw>) -> Self {
        Self { laws, weights: None, v: None }
    }

    /// The pair of Example-type free variables `(Y - κ^{-1/2}, β S)` with `Y`
    /// the Wishart limit `MP(κ, 1)/√κ` and `S` standard semicircular.
    pub fn mp_semicircle(kappa: f64, beta: f64) -> Self {
        let r = kappa.sqrt();
        Self {
            laws: vec![
                SpectralLaw::ShiftedMarchenkoPastur { kappa, sigma: 1.0, scale: 1.0 / r, shift: -1.0 / r },
                SpectralLaw::Semicircle { sigma: 1.0 },
            ],
            weights: Some(vec![1.0, beta]),
            v: None,
        }
    }

    pub fn d(&self) -> usize {
        self.laws.len()
    }

    pub fn validate(&self) -> Result<()> {
        if self.laws.is_empty() {
            return Err(Error::InvalidInput("free zonoid needs d >= 1".into()));
        }
        for l in &self.laws {
            l.validate()?;
        }
        if let Some(w) = &self.weights {
            if w.len() != self.d() {
                return Err(Error::dims(self.d(), w.len()));
            }
        }
        if let Some(v) = &self.v {
            if v.len() != self.d() {
                return Err(Error::dims(self.d(), v.len()));
            }
        }
        Ok(())
    }

    fn weight(&self, i: usize) -> f64 {
        self.weights.as_ref().map_or(1.0, |w| w[i])
    }

    /// Support function where a closed form or a one-dimensional density is
    /// available: all-semicircle tuples, `d = 1`, and the MP ⊞ semicircle pair.
    pub fn support(&self, u: &[f64]) -> Result<f64> {
        self.validate()?;
        if u.len() != self.d() {
            return Err(Error::dims(self.d(), u.len()));
        }
        let shift = self.v.as_ref().map_or(0.0, |v| v.iter().zip(u).map(|(a, b)| a * b).sum());
        let sc: Option<Vec<f64>> = self
            .laws
            .iter()
            .enumerate()
            .map(|(i, l)| match l {
                SpectralLaw::Semicircle { sigma } => Some(sigma * self.weight(i).abs()),
                _ => None,
            })
            .collect();
        if let Some(sigmas) = sc {
            return Ok(shift + free_zonoid_semicircle_support(&sigmas, u)?);
        }
        if self.d() == 1 {
            return Ok(shift + (u[0] * self.weight(0)).abs() * self.laws[0].abs_mean()?);
        }
        if let Some((kappa, beta)) = self.as_mp_semicircle() {
            return Ok(shift + mp_plus_semicircle_support(kappa, beta, u)?);
        }
        Err(Error::Unsupported(
            "free zonoid support needs semicircular laws, d = 1, or the MP/semicircle pair".into(),
        ))
    }

    fn as_mp_semicircle(&self) -> Option<(f64, f64)> {
        if self.d() != 2 || self.weight(0) != 1.0 {
            return None;
        }
        match (&self.laws[0], &self.laws[1]) {
            (
                SpectralLaw::ShiftedMarchenkoPastur { kappa, sigma, scale, shift },
                SpectralLaw::Semicircle { sigma: s },
            ) if *sigma == 1.0
                && (scale - 1.0 / kappa.sqrt()).abs() < 1e-15
                && (shift + 1.0 / kappa.sqrt()).abs() < 1e-15 =>
            {
                Some((*kappa, s * self.weight(1)))
            }
            _ => None,
        }
    }
}
