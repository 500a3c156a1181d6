//! Lift bodies in `ℝ^{d+1}`.
//!
//! The lift operanoid of a random tuple has support
//! `h(u) = E Tr(u₀ I + Σ_{i≥1} u_i A_i)₊`, with `u = (u₀, u₁, …, u_d)`. With
//! `normalize` on (the default) the trace is divided by `m`, so `h(e₀) = 1` and
//! the deterministic `d = 1` case is the lift zonoid of the spectral measure,
//! a probability measure. With it off the plain trace is used.

use rayon::prelude::*;

use crate::bodies::{MatrixTuple, Operatope};
use crate::error::{Error, Result};
use crate::freeprob::SpectralLaw;
use crate::montecarlo::{draw_streams, OperanoidSampler, SupportEstimate};
use crate::spectral::positive_part_trace;
use crate::stats::{mean_and_stderr, pairwise_sum};

fn lift_one(t: &MatrixTuple, u: &[f64], normalize: bool) -> Result<f64> {
    if u.len() != t.d() + 1 {
        return Err(Error::dims(t.d() + 1, u.len()));
    }
    let x = t.apply_adjoint(&u[1..])?.shift_diagonal(u[0]);
    let p = positive_part_trace(&x)?;
    Ok(if normalize { p / t.m() as f64 } else { p })
}

/// Average over `tuples` of `Tr(u₀ I + Σ u_i A_i)₊` (divided by `m` when
/// `normalize`).
pub fn lift_operatope_support(tuples: &[MatrixTuple], u: &[f64], normalize: bool) -> Result<f64> {
    if tuples.is_empty() {
        return Err(Error::InvalidInput("lift support needs at least one tuple".into()));
    }
    let parts = tuples.iter().map(|t| lift_one(t, u, normalize)).collect::<Result<Vec<_>>>()?;
    Ok(pairwise_sum(&parts) / tuples.len() as f64)
}

/// `∫ max(0, u₀ + u₁ x) dν(x)`.
pub fn lift_nc_zonoid_support(law: &SpectralLaw, u: &[f64]) -> Result<f64> {
    if u.len() != 2 {
        return Err(Error::dims(2, u.len()));
    }
    law.validate()?;
    let (a, b) = (u[0], u[1]);
    let breaks: Vec<f64> = if b != 0.0 { vec![-a / b] } else { vec![] };
    law.expect(|x| (a + b * x).max(0.0), &breaks)
}

/// `½ (mean Tr A_1, …, mean Tr A_d)` over the tuples.
pub fn symmetry_center(tuples: &[MatrixTuple]) -> Result<Vec<f64>> {
    let first = tuples.first().ok_or_else(|| Error::InvalidInput("no tuples".into()))?;
    let d = first.d();
    if let Some(bad) = tuples.iter().find(|t| t.d() != d) {
        return Err(Error::dims(d, bad.d()));
    }
    let traces: Vec<Vec<f64>> = tuples.iter().map(MatrixTuple::traces).collect();
    Ok((0..d)
        .map(|i| {
            let col: Vec<f64> = traces.iter().map(|t| t[i]).collect();
            0.5 * pairwise_sum(&col) / tuples.len() as f64
        })
        .collect())
}

/// Monte Carlo `½ E Tr A_i` with standard errors, from draws `0..n` of `seed`.
pub fn symmetry_center_mc(sampler: &OperanoidSampler, n: usize, seed: u64) -> Result<Vec<SupportEstimate>> {
    if n < 2 {
        return Err(Error::InvalidInput(format!("need N >= 2, got {n}")));
    }
    let traces = draw_streams(seed, 0, n)
        .par_iter()
        .map(|&s| Ok(sampler.draw(s)?.traces()))
        .collect::<Result<Vec<_>>>()?;
    Ok((0..sampler.d())
        .map(|i| {
            let col: Vec<f64> = traces.iter().map(|t| 0.5 * t[i]).collect();
            let (value, std_error) = mean_and_stderr(&col);
            SupportEstimate { value, std_error, n_samples: n }
        })
        .collect())
}

/// The body of positive parts, `h(u) = mean Tr(Σ u_i A_i)₊` on `ℝ^d`. It is
/// centrally symmetric about [`symmetry_center`]:
/// `h(u) - ⟨x₀, u⟩ = h(-u) + ⟨x₀, u⟩`.
pub fn positive_part_support(tuples: &[MatrixTuple], u: &[f64]) -> Result<f64> {
    if tuples.is_empty() {
        return Err(Error::InvalidInput("no tuples".into()));
    }
    let parts = tuples
        .iter()
        .map(|t| positive_part_trace(&t.apply_adjoint(u)?))
        .collect::<Result<Vec<_>>>()?;
    Ok(pairwise_sum(&parts) / tuples.len() as f64)
}

/// What a lift body is built from.
#[derive(Clone, Debug)]
pub enum LiftBase {
    /// Equally weighted deterministic tuples.
    Tuples(Vec<MatrixTuple>),
    /// Monte Carlo over draws `0..n` of `seed`.
    Sampler { sampler: OperanoidSampler, n: usize, seed: u64 },
    /// `d = 1` lift NC zonoid of a spectral law.
    Law(SpectralLaw),
}

#[derive(Clone, Debug)]
pub struct LiftBody {
    pub base: LiftBase,
    pub normalize: bool,
}

impl LiftBody {
    pub fn new(base: LiftBase) -> Self {
        Self { base, normalize: true }
    }

    /// Lift of an operatope's summands, each with weight `1/N`. Translated
    /// operatopes have no lift and are rejected.
    pub fn from_operatope(z: &Operatope) -> Result<Self> {
        if z.translation().iter().any(|&x| x != 0.0) {
            return Err(Error::InvalidInput("lift bodies are defined for operatopes with zero translation".into()));
        }
        Ok(Self::new(LiftBase::Tuples(z.summands().to_vec())))
    }

    pub fn with_normalize(mut self, on: bool) -> Self {
        self.normalize = on;
        self
    }

    /// Dimension `d + 1` of the space the body lives in.
    pub fn ambient_dim(&self) -> usize {
        match &self.base {
            LiftBase::Tuples(t) => t.first().map_or(1, |t| t.d() + 1),
            LiftBase::Sampler { sampler, .. } => sampler.d() + 1,
            LiftBase::Law(_) => 2,
        }
    }

    /// Support value; the standard error is zero except for samplers.
    pub fn support(&self, u: &[f64]) -> Result<SupportEstimate> {
        if u.len() != self.ambient_dim() {
            return Err(Error::dims(self.ambient_dim(), u.len()));
        }
        match &self.base {
            LiftBase::Tuples(t) => Ok(SupportEstimate {
                value: lift_operatope_support(t, u, self.normalize)?,
                std_error: 0.0,
                n_samples: t.len(),
            }),
            LiftBase::Law(law) => {
                Ok(SupportEstimate { value: lift_nc_zonoid_support(law, u)?, std_error: 0.0, n_samples: 1 })
            }
            LiftBase::Sampler { sampler, n, seed } => {
                if *n < 2 {
                    return Err(Error::InvalidInput(format!("need N >= 2, got {n}")));
                }
                let xs = draw_streams(*seed, 0, *n)
                    .par_iter()
                    .map(|&s| lift_one(&sampler.draw(s)?, u, self.normalize))
                    .collect::<Result<Vec<_>>>()?;
                let (value, std_error) = mean_and_stderr(&xs);
                Ok(SupportEstimate { value, std_error, n_samples: *n })
            }
        }
    }
}
