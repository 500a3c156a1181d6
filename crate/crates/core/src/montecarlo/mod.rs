//! Monte Carlo operanoids: empirical operatopes, support estimates with
//! standard errors, sample-size planning and convergence-rate diagnostics.
//!
//! Stream layout: draw `k` of a run with seed `s` uses `RngStream(s, k)`.
//! Reference bodies for rate experiments use `RngStream(s, 2⁶³ + k)`, so they
//! never share draws with the empirical bodies they are compared against.
//! Parallel loops split draws into fixed chunks and reduce them in chunk
//! order, so every result is independent of the worker count.

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::bodies::{circumradius_from_values, DirectionNet, MatrixTuple, NetKind, Operatope};
use crate::ensembles::{EnsembleSpec, PreparedEnsemble, RngStream};
use crate::error::{Error, Result};
use crate::stats::{mean_and_stderr, ols_slope, pairwise_sum};

/// First stream id used by reference bodies.
pub const REFERENCE_STREAM_BASE: u64 = 1 << 63;
const CHUNK: usize = 256;

pub type DrawCallback = Arc<dyn Fn(RngStream) -> Result<MatrixTuple> + Send + Sync>;

#[derive(Clone)]
enum Source {
    Spec(PreparedEnsemble),
    Callback(DrawCallback),
}

/// Produces iid random tuples `(A_1, …, A_d)` of fixed shape.
#[derive(Clone)]
pub struct OperanoidSampler {
    source: Source,
    d: usize,
    m: usize,
    normalized: bool,
}

impl fmt::Debug for OperanoidSampler {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let src = match &self.source {
            Source::Spec(p) => format!("{:?}", p.spec()),
            Source::Callback(_) => "callback".to_string(),
        };
        f.debug_struct("OperanoidSampler")
            .field("source", &src)
            .field("d", &self.d)
            .field("m", &self.m)
            .field("normalized", &self.normalized)
            .finish()
    }
}

impl OperanoidSampler {
    pub fn from_spec(spec: &EnsembleSpec) -> Result<Self> {
        let prepared = spec.prepare()?;
        Ok(Self { d: spec.d(), m: spec.matrix_dim()?, source: Source::Spec(prepared), normalized: false })
    }

    /// Wraps a user draw function; every draw must have shape `(d, m)`.
    pub fn from_callback(
        d: usize,
        m: usize,
        f: impl Fn(RngStream) -> Result<MatrixTuple> + Send + Sync + 'static,
    ) -> Self {
        Self { source: Source::Callback(Arc::new(f)), d, m, normalized: false }
    }

    /// With `on`, draws are scaled by `1/m` so trace norms become normalized
    /// traces `τ(|·|)`, the setting of noncommutative and free zonoids.
    pub fn normalized(mut self, on: bool) -> Self {
        self.normalized = on;
        self
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn spec(&self) -> Option<&EnsembleSpec> {
        match &self.source {
            Source::Spec(p) => Some(p.spec()),
            Source::Callback(_) => None,
        }
    }

    pub fn draw(&self, stream: RngStream) -> Result<MatrixTuple> {
        let t = match &self.source {
            Source::Spec(p) => p.sample(&mut stream.rng())?,
            Source::Callback(f) => f(stream)?,
        };
        if t.d() != self.d || t.m() != self.m {
            return Err(Error::InvalidInput(format!(
                "draw has shape (d={}, m={}), sampler declares (d={}, m={})",
                t.d(),
                t.m(),
                self.d,
                self.m
            )));
        }
        Ok(if self.normalized { t.scale(1.0 / self.m as f64) } else { t })
    }
}

/// Streams `(seed, first), …, (seed, first + n - 1)`.
pub fn draw_streams(seed: u64, first: u64, n: usize) -> Vec<RngStream> {
    (0..n as u64).map(|k| RngStream::new(seed, first + k)).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SupportEstimate {
    pub value: f64,
    pub std_error: f64,
    pub n_samples: usize,
}

/// One-draw supports `‖Σ u_i A_i^{(k)}‖_1`, in stream order.
pub fn support_samples(sampler: &OperanoidSampler, u: &[f64], streams: &[RngStream]) -> Result<Vec<f64>> {
    if u.len() != sampler.d() {
        return Err(Error::dims(sampler.d(), u.len()));
    }
    streams.par_iter().map(|&s| sampler.draw(s)?.trace_norm_at(u)).collect()
}

/// Mean and standard error of the one-draw supports over `streams`.
pub fn support_mc_streams(sampler: &OperanoidSampler, u: &[f64], streams: &[RngStream]) -> Result<SupportEstimate> {
    if streams.len() < 2 {
        return Err(Error::InvalidInput(format!("support_mc needs N >= 2, got {}", streams.len())));
    }
    let xs = support_samples(sampler, u, streams)?;
    let (value, std_error) = mean_and_stderr(&xs);
    Ok(SupportEstimate { value, std_error, n_samples: xs.len() })
}

/// `E‖Σ u_i A_i‖_1` estimated from draws `0..n` of `seed`.
pub fn support_mc(sampler: &OperanoidSampler, u: &[f64], n: usize, seed: u64) -> Result<SupportEstimate> {
    support_mc_streams(sampler, u, &draw_streams(seed, 0, n))
}

/// `Z_N` with support `(1/N) Σ_k ‖Σ u_i A_i^{(k)}‖_1`: draws `0..n` of `seed`,
/// each scaled by `1/N`, no translation.
pub fn empirical_operatope(sampler: &OperanoidSampler, n: usize, seed: u64) -> Result<Operatope> {
    if n == 0 {
        return Err(Error::InvalidInput("empirical operatope needs N >= 1".into()));
    }
    let c = 1.0 / n as f64;
    let summands = draw_streams(seed, 0, n)
        .par_iter()
        .map(|&s| Ok(sampler.draw(s)?.scale(c)))
        .collect::<Result<Vec<_>>>()?;
    Operatope::new(vec![0.0; sampler.d()], summands)
}

/// `N = ⌈c m² L² d² / ε²⌉`.
pub fn plan_sample_size(m: usize, l: f64, d: usize, eps: f64, c_planner: f64) -> Result<u64> {
    if m == 0 || d == 0 || !(l > 0.0) || !(eps > 0.0) || !(c_planner > 0.0) {
        return Err(Error::NonPositiveInput(format!(
            "m={m}, L={l}, d={d}, eps={eps}, c={c_planner} must all be positive"
        )));
    }
    let (mf, df) = (m as f64, d as f64);
    let n = (c_planner * mf * mf * l * l * df * df / (eps * eps)).ceil();
    if !n.is_finite() || n > u64::MAX as f64 {
        return Err(Error::InvalidInput(format!("planned sample size {n} is not representable")));
    }
    Ok(n as u64)
}

/// Support values of an empirical body on a net, with an upper bound on its
/// circumradius.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NetEstimate {
    pub n: usize,
    pub values: Vec<f64>,
    pub radius: f64,
}

/// Per draw: trace norms on the net, then the Frobenius radius bound
/// `√m (Σ_i ‖A_i‖_F²)^{1/2}`.
fn draw_on_net(sampler: &OperanoidSampler, net: &DirectionNet, stream: RngStream) -> Result<Vec<f64>> {
    let t = sampler.draw(stream)?;
    let mut row = Vec::with_capacity(net.len() + 1);
    for u in net.directions() {
        row.push(t.trace_norm_at(u)?);
    }
    let f2: f64 = t.matrices().iter().map(|a| a.frobenius_norm().powi(2)).sum();
    row.push((t.m() as f64).sqrt() * f2.sqrt());
    Ok(row)
}

/// Per-column pairwise sums of the rows of draws `[lo, hi)`.
fn chunk_sums(sampler: &OperanoidSampler, net: &DirectionNet, seed: u64, base: u64, lo: usize, hi: usize) -> Result<Vec<f64>> {
    let rows = (lo..hi)
        .map(|k| draw_on_net(sampler, net, RngStream::new(seed, base + k as u64)))
        .collect::<Result<Vec<_>>>()?;
    let width = net.len() + 1;
    let mut col = vec![0.0; rows.len()];
    Ok((0..width)
        .map(|j| {
            for (c, r) in col.iter_mut().zip(&rows) {
                *c = r[j];
            }
            pairwise_sum(&col)
        })
        .collect())
}

/// Net values of the empirical bodies built from the draw prefixes
/// `0..ns[0]`, `0..ns[1]`, … of streams `(seed, base + k)`. Each draw is
/// evaluated once; `ns` must be strictly increasing.
fn prefix_net_estimates(
    sampler: &OperanoidSampler,
    net: &DirectionNet,
    seed: u64,
    base: u64,
    ns: &[usize],
) -> Result<Vec<NetEstimate>> {
    if net.d() != sampler.d() {
        return Err(Error::dims(sampler.d(), net.d()));
    }
    if ns.is_empty() || ns[0] == 0 || ns.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidInput("sample sizes must be positive and strictly increasing".into()));
    }
    let mut pieces = Vec::new();
    let mut start = 0;
    for &b in ns {
        while start < b {
            let end = (start + CHUNK).min(b);
            pieces.push((start, end));
            start = end;
        }
    }
    let sums = pieces
        .par_iter()
        .map(|&(lo, hi)| chunk_sums(sampler, net, seed, base, lo, hi))
        .collect::<Result<Vec<_>>>()?;
    let width = net.len() + 1;
    let mut acc = vec![0.0; width];
    let mut out = Vec::with_capacity(ns.len());
    let mut next = 0;
    for ((_, hi), s) in pieces.iter().zip(&sums) {
        for (a, x) in acc.iter_mut().zip(s) {
            *a += x;
        }
        if *hi == ns[next] {
            let n = ns[next] as f64;
            let values: Vec<f64> = acc[..net.len()].iter().map(|x| x / n).collect();
            let mut radius = acc[net.len()] / n;
            if net.kind() != NetKind::Probabilistic {
                if let Some(r) = circumradius_from_values(&values, net.covering_radius()) {
                    radius = radius.min(r);
                }
            }
            out.push(NetEstimate { n: ns[next], values, radius });
            next += 1;
        }
    }
    Ok(out)
}

/// Net values of `Z_N` for each `N` in `ns` (draw prefixes of one run).
pub fn empirical_support_on_net(
    sampler: &OperanoidSampler,
    net: &DirectionNet,
    ns: &[usize],
    seed: u64,
) -> Result<Vec<NetEstimate>> {
    prefix_net_estimates(sampler, net, seed, 0, ns)
}

/// Net values of an `n_ref`-draw reference body on the reserved reference
/// streams of `seed`.
pub fn reference_support_on_net(
    sampler: &OperanoidSampler,
    net: &DirectionNet,
    n_ref: usize,
    seed: u64,
) -> Result<NetEstimate> {
    Ok(prefix_net_estimates(sampler, net, seed, REFERENCE_STREAM_BASE, &[n_ref])?.remove(0))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RateRow {
    pub n: usize,
    pub d_lower: f64,
    pub d_upper: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RateExperiment {
    pub rows: Vec<RateRow>,
    /// Draws in the reference body standing in for the operanoid. Its own
    /// distance to the operanoid (of order `N_ref^{-1/2}`) is included in
    /// every reported distance.
    pub reference_n: usize,
    pub net_size: usize,
    pub covering_radius: f64,
}

/// Hausdorff brackets between `Z_N` (draw prefixes of `seed`) and a given
/// reference.
pub fn rate_rows_against(
    sampler: &OperanoidSampler,
    ns: &[usize],
    net: &DirectionNet,
    seed: u64,
    reference: &NetEstimate,
) -> Result<Vec<RateRow>> {
    if reference.values.len() != net.len() {
        return Err(Error::dims(net.len(), reference.values.len()));
    }
    let delta = net.covering_radius();
    empirical_support_on_net(sampler, net, ns, seed)?
        .into_iter()
        .map(|e| {
            let b = crate::bodies::HausdorffBracket::from_values(&e.values, &reference.values, delta, e.radius, reference.radius)?;
            Ok(RateRow { n: e.n, d_lower: b.lower, d_upper: b.upper })
        })
        .collect()
}

/// `d_H(Z_N, Z_ref)` brackets for each `N`, with `Z_ref` built from
/// `16 · max(ns)` reference draws of the same seed.
pub fn convergence_rate_experiment(
    sampler: &OperanoidSampler,
    ns: &[usize],
    net: &DirectionNet,
    seed: u64,
) -> Result<RateExperiment> {
    let n_ref = 16 * ns.iter().copied().max().unwrap_or(0);
    let reference = reference_support_on_net(sampler, net, n_ref, seed)?;
    let rows = rate_rows_against(sampler, ns, net, seed, &reference)?;
    Ok(RateExperiment { rows, reference_n: n_ref, net_size: net.len(), covering_radius: net.covering_radius() })
}

/// Least-squares slope of `log d_lower` against `log N`.
pub fn log_log_slope(ns: &[usize], d: &[f64]) -> Result<f64> {
    if ns.len() != d.len() || ns.len() < 2 || d.iter().any(|&x| !(x > 0.0)) {
        return Err(Error::InvalidInput("slope needs at least two positive distances".into()));
    }
    let x: Vec<f64> = ns.iter().map(|&n| (n as f64).ln()).collect();
    let y: Vec<f64> = d.iter().map(|v| v.ln()).collect();
    Ok(ols_slope(&x, &y))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CalibrationRow {
    pub eps: f64,
    /// Smallest tried `N` (a power of two) with `d_lower ≤ ε`, if any.
    pub n_needed: Option<usize>,
    pub c: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Calibration {
    pub rows: Vec<CalibrationRow>,
    /// Smallest `c` for which the planner meets every reached `ε`.
    pub c_planner: Option<f64>,
    pub reference_n: usize,
}

/// Empirical constant for [`plan_sample_size`]: for each `ε`, the smallest
/// power-of-two `N ≤ max_n` whose empirical body is within `ε` (net lower
/// bound) of a `16 · max_n`-draw reference, converted to
/// `c = N ε² / (m² L² d²)`.
pub fn calibrate_planner(
    sampler: &OperanoidSampler,
    entry_bound: f64,
    eps: &[f64],
    net: &DirectionNet,
    max_n: usize,
    seed: u64,
) -> Result<Calibration> {
    if !(entry_bound > 0.0) || eps.iter().any(|&e| !(e > 0.0)) || max_n == 0 {
        return Err(Error::NonPositiveInput("calibration needs L > 0, eps > 0 and max_n >= 1".into()));
    }
    let ns: Vec<usize> = (0..).map(|k| 1usize << k).take_while(|&n| n <= max_n).collect();
    let n_ref = 16 * max_n;
    let reference = reference_support_on_net(sampler, net, n_ref, seed)?;
    let rows = rate_rows_against(sampler, &ns, net, seed, &reference)?;
    let scale = (sampler.m() as f64 * entry_bound * sampler.d() as f64).powi(2);
    let out: Vec<CalibrationRow> = eps
        .iter()
        .map(|&e| {
            let n_needed = rows.iter().find(|r| r.d_lower <= e).map(|r| r.n);
            CalibrationRow { eps: e, n_needed, c: n_needed.map(|n| n as f64 * e * e / scale) }
        })
        .collect();
    let c_planner = out.iter().filter_map(|r| r.c).fold(None, |acc: Option<f64>, c| Some(acc.map_or(c, |a| a.max(c))));
    Ok(Calibration { rows: out, c_planner, reference_n: n_ref })
}
