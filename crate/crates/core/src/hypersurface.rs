//! Stationary Poisson hypersurface model.
//!
//! Events `t_j` form a Poisson process of intensity `γ` on `(0, ∞)`, each
//! carrying an iid tuple `(U_1, …, U_d)` of Hermitian `m × m` matrices with
//! `Σ U_i² = I`. The hypersurface of event `j` is
//! `{x : det(m t_j I - Σ x_i U_i) = 0}`, and the segment `[-v, v]` crosses it
//! once per eigenvalue with `|λ_k(Σ v_i U_i)| ≥ m t_j`. Hence
//! `E #crossings = (γ/m) E‖Σ v_i U_i‖₁`.
//!
//! Since `‖Σ v_i U_i‖_op ≤ ‖v‖₁ ≤ √d ‖v‖₂`, events with
//! `t > √d ‖v‖₂ / m` never matter; realizations are truncated at a horizon
//! `T` and queries beyond it fail with `HorizonTooShort`.
//!
//! Streams: realization `r` of a batch with seed `s` uses `RngStream(s, r)`;
//! the Monte Carlo for the associated operanoid uses
//! `RngStream(s, 2⁶² + k)` so the two estimates are independent.

use std::sync::Arc;

use rand::Rng;
use rand_distr::{Distribution, Poisson, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bodies::MatrixTuple;
use crate::ensembles::{sample_haar_unitary, Rng64, RngStream};
use crate::error::{Error, Result};
use crate::montecarlo::SupportEstimate;
use crate::spectral::{eigenvalues, trace_norm, HermitianMatrix};
use crate::stats::mean_and_stderr;

pub const OPERANOID_STREAM_BASE: u64 = 1 << 62;
/// Tolerance on the minimum eigenvalue in chamber membership.
pub const PSD_TOL: f64 = 1e-10;
pub const DEFAULT_CONSTRAINT_TOL: f64 = 1e-10;

/// Law of the unit vectors `φ` on `𝕊^{d-1}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case")]
pub enum DirectionalLaw {
    Uniform,
    /// Finitely many directions with probabilities proportional to `weights`.
    Discrete { directions: Vec<Vec<f64>>, weights: Vec<f64> },
}

impl DirectionalLaw {
    pub fn validate(&self, d: usize) -> Result<()> {
        match self {
            Self::Uniform => Ok(()),
            Self::Discrete { directions, weights } => {
                if directions.is_empty() || directions.len() != weights.len() {
                    return Err(Error::InvalidInput("discrete law needs matching directions and weights".into()));
                }
                for u in directions {
                    if u.len() != d {
                        return Err(Error::dims(d, u.len()));
                    }
                    let r = u.iter().map(|x| x * x).sum::<f64>().sqrt();
                    if (r - 1.0).abs() > 1e-12 {
                        return Err(Error::InvalidInput(format!("direction {u:?} is not a unit vector")));
                    }
                }
                if weights.iter().any(|&w| !(w >= 0.0)) || !(weights.iter().sum::<f64>() > 0.0) {
                    return Err(Error::InvalidInput("weights must be nonnegative with positive sum".into()));
                }
                Ok(())
            }
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, d: usize, rng: &mut R) -> Vec<f64> {
        match self {
            Self::Uniform => loop {
                let g: Vec<f64> = (0..d).map(|_| StandardNormal.sample(rng)).collect();
                let r = g.iter().map(|x| x * x).sum::<f64>().sqrt();
                if r > 1e-12 {
                    break g.into_iter().map(|x| x / r).collect();
                }
            },
            Self::Discrete { directions, weights } => {
                let total: f64 = weights.iter().sum();
                let mut p = rng.random::<f64>() * total;
                for (u, w) in directions.iter().zip(weights) {
                    if p < *w {
                        return u.clone();
                    }
                    p -= w;
                }
                directions[directions.len() - 1].clone()
            }
        }
    }
}

/// Commuting tuple `U_i = W diag(u^{(1)}_i, …, u^{(m)}_i) W*` with rows
/// `u^{(k)} ~ φ` and `W` Haar unitary (omitted for `m = 1`). `Σ U_i² = I`.
pub fn commuting_frame_generator<R: Rng + ?Sized>(
    m: usize,
    d: usize,
    phi: &DirectionalLaw,
    rng: &mut R,
) -> Result<MatrixTuple> {
    let rows: Vec<Vec<f64>> = (0..m).map(|_| phi.sample(d, rng)).collect();
    let diag = |i: usize| -> Vec<f64> { rows.iter().map(|r| r[i]).collect() };
    if m == 1 {
        return MatrixTuple::new((0..d).map(|i| HermitianMatrix::from_diagonal(&diag(i))).collect());
    }
    let w = sample_haar_unitary(m, rng);
    let wa = w.adjoint();
    let mats = (0..d)
        .map(|i| Ok(w.scale_columns(&diag(i)).matmul(&wa)?.hermitian_part()))
        .collect::<Result<Vec<_>>>()?;
    MatrixTuple::new(mats)
}

/// `‖Σ U_i² - I‖_F`.
pub fn isometry_residual(t: &MatrixTuple) -> Result<f64> {
    let m = t.m();
    let mut s = HermitianMatrix::identity(m).scale(-1.0);
    for u in t.matrices() {
        let d = u.to_dense();
        s.add_scaled(1.0, &d.matmul(&d)?.hermitian_part())?;
    }
    Ok(s.frobenius_norm())
}

pub type TupleHook = Arc<dyn Fn(&mut Rng64) -> Result<MatrixTuple> + Send + Sync>;

#[derive(Clone)]
pub enum TupleGenerator {
    CommutingFrame(DirectionalLaw),
    /// User tuples, checked against the isometry constraint on every draw.
    Custom(TupleHook),
}

impl std::fmt::Debug for TupleGenerator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::CommutingFrame(phi) => f.debug_tuple("CommutingFrame").field(phi).finish(),
            Self::Custom(_) => f.write_str("Custom"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct HypersurfaceModel {
    gamma: f64,
    m: usize,
    d: usize,
    generator: TupleGenerator,
    constraint_tol: f64,
}

impl HypersurfaceModel {
    pub fn new(gamma: f64, m: usize, d: usize, phi: DirectionalLaw) -> Result<Self> {
        if !(gamma > 0.0 && gamma.is_finite()) {
            return Err(Error::InvalidInput(format!("intensity must be positive, got {gamma}")));
        }
        if m == 0 || d == 0 {
            return Err(Error::InvalidInput("m and d must be at least 1".into()));
        }
        phi.validate(d)?;
        Ok(Self { gamma, m, d, generator: TupleGenerator::CommutingFrame(phi), constraint_tol: DEFAULT_CONSTRAINT_TOL })
    }

    pub fn with_custom_generator(
        mut self,
        hook: impl Fn(&mut Rng64) -> Result<MatrixTuple> + Send + Sync + 'static,
    ) -> Self {
        self.generator = TupleGenerator::Custom(Arc::new(hook));
        self
    }

    pub fn with_constraint_tol(mut self, tol: f64) -> Self {
        self.constraint_tol = tol;
        self
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn generate(&self, rng: &mut Rng64) -> Result<MatrixTuple> {
        match &self.generator {
            TupleGenerator::CommutingFrame(phi) => commuting_frame_generator(self.m, self.d, phi, rng),
            TupleGenerator::Custom(hook) => {
                let t = hook(rng)?;
                if t.d() != self.d || t.m() != self.m {
                    return Err(Error::InvalidInput(format!(
                        "generated tuple has shape (d={}, m={}), model needs (d={}, m={})",
                        t.d(),
                        t.m(),
                        self.d,
                        self.m
                    )));
                }
                let r = isometry_residual(&t)?;
                if r > self.constraint_tol {
                    return Err(Error::ConstraintViolation(r));
                }
                Ok(t)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Event {
    pub t: f64,
    pub tuple: MatrixTuple,
}

/// Events of one realization with `t ≤ horizon`, in increasing time.
#[derive(Clone, Debug, PartialEq)]
pub struct Realization {
    horizon: f64,
    m: usize,
    events: Vec<Event>,
}

impl Realization {
    pub fn new(horizon: f64, m: usize, events: Vec<Event>) -> Result<Self> {
        if !(horizon > 0.0) {
            return Err(Error::InvalidInput(format!("horizon must be positive, got {horizon}")));
        }
        if events.windows(2).any(|w| w[0].t >= w[1].t) || events.iter().any(|e| !(e.t > 0.0 && e.t <= horizon)) {
            return Err(Error::InvalidInput("event times must be increasing and lie in (0, T]".into()));
        }
        if events.iter().any(|e| e.tuple.m() != m) {
            return Err(Error::InvalidInput("event tuples must all have size m".into()));
        }
        Ok(Self { horizon, m, events })
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    fn check_horizon(&self, x: &[f64]) -> Result<()> {
        if let Some(e) = self.events.first() {
            if e.tuple.d() != x.len() {
                return Err(Error::dims(e.tuple.d(), x.len()));
            }
        }
        let required = required_horizon(x, self.m);
        if self.horizon < required {
            return Err(Error::HorizonTooShort { horizon: self.horizon, required });
        }
        Ok(())
    }
}

/// `√d ‖x‖₂ / m`: no event beyond this time interacts with `x`.
pub fn required_horizon(x: &[f64], m: usize) -> f64 {
    (x.len() as f64).sqrt() * x.iter().map(|a| a * a).sum::<f64>().sqrt() / m as f64
}

/// Poisson(`γT`) events with sorted uniform times on `(0, T]`.
pub fn simulate(model: &HypersurfaceModel, horizon: f64, rng: &mut Rng64) -> Result<Realization> {
    if !(horizon > 0.0 && horizon.is_finite()) {
        return Err(Error::InvalidInput(format!("horizon must be positive, got {horizon}")));
    }
    let mean = model.gamma * horizon;
    let n = Poisson::new(mean).map_err(|e| Error::InvalidInput(format!("Poisson mean {mean}: {e}")))?.sample(rng) as usize;
    let mut times: Vec<f64> = (0..n).map(|_| horizon * (1.0 - rng.random::<f64>())).collect();
    times.sort_by(f64::total_cmp);
    times.dedup();
    let events = times
        .into_iter()
        .map(|t| Ok(Event { t, tuple: model.generate(rng)? }))
        .collect::<Result<Vec<_>>>()?;
    Realization::new(horizon, model.m, events)
}

/// `Σ_j #{k : |λ_k(Σ v_i U_i^{(j)})| ≥ m t_j}`.
pub fn count_intersections_segment(r: &Realization, v: &[f64]) -> Result<usize> {
    r.check_horizon(v)?;
    let mut count = 0;
    for e in &r.events {
        let lam = eigenvalues(&e.tuple.apply_adjoint(v)?)?;
        let thr = r.m as f64 * e.t;
        count += lam.iter().filter(|l| l.abs() >= thr).count();
    }
    Ok(count)
}

/// `(γ/m) E‖Σ v_i U_i‖₁` from `n_mc` generator draws.
pub fn associated_operanoid_support(model: &HypersurfaceModel, v: &[f64], n_mc: usize, seed: u64) -> Result<SupportEstimate> {
    if v.len() != model.d {
        return Err(Error::dims(model.d, v.len()));
    }
    if n_mc < 2 {
        return Err(Error::InvalidInput(format!("need N >= 2, got {n_mc}")));
    }
    let c = model.gamma / model.m as f64;
    let xs = (0..n_mc as u64)
        .into_par_iter()
        .map(|k| {
            let mut rng = RngStream::new(seed, OPERANOID_STREAM_BASE + k).rng();
            Ok(c * trace_norm(&model.generate(&mut rng)?.apply_adjoint(v)?)?)
        })
        .collect::<Result<Vec<_>>>()?;
    let (value, std_error) = mean_and_stderr(&xs);
    Ok(SupportEstimate { value, std_error, n_samples: n_mc })
}

/// Mean crossing count of `[-v, v]` over `reps` realizations truncated at
/// [`required_horizon`].
pub fn mean_intersection_count(model: &HypersurfaceModel, v: &[f64], reps: usize, seed: u64) -> Result<SupportEstimate> {
    if v.len() != model.d {
        return Err(Error::dims(model.d, v.len()));
    }
    if reps < 2 {
        return Err(Error::InvalidInput(format!("need at least 2 realizations, got {reps}")));
    }
    let horizon = required_horizon(v, model.m);
    if horizon == 0.0 {
        return Ok(SupportEstimate { value: 0.0, std_error: 0.0, n_samples: reps });
    }
    let xs = (0..reps as u64)
        .into_par_iter()
        .map(|k| {
            let r = simulate(model, horizon, &mut RngStream::new(seed, k).rng())?;
            Ok(count_intersections_segment(&r, v)? as f64)
        })
        .collect::<Result<Vec<_>>>()?;
    let (value, std_error) = mean_and_stderr(&xs);
    Ok(SupportEstimate { value, std_error, n_samples: reps })
}

/// `m t_j I - Σ x_i U_i^{(j)} ⪰ 0` for every event, up to [`PSD_TOL`].
pub fn zero_chamber_contains(r: &Realization, x: &[f64]) -> Result<bool> {
    r.check_horizon(x)?;
    for e in &r.events {
        let lam = eigenvalues(&e.tuple.apply_adjoint(x)?)?;
        // min eigenvalue of m t I - X is m t - λ_max(X)
        if r.m as f64 * e.t - lam[lam.len() - 1] < -PSD_TOL {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Hit-or-miss volume of the chamber inside an axis-aligned box, with its
/// standard error. The realization must reach every point of the box.
pub fn zero_chamber_volume_mc(r: &Realization, bbox: &[(f64, f64)], n: usize, seed: u64) -> Result<(f64, f64)> {
    if bbox.iter().any(|(lo, hi)| !(hi > lo)) {
        return Err(Error::InvalidInput("box sides must have positive length".into()));
    }
    if n < 2 {
        return Err(Error::InvalidInput(format!("need N >= 2, got {n}")));
    }
    let far: Vec<f64> = bbox.iter().map(|(lo, hi)| lo.abs().max(hi.abs())).collect();
    r.check_horizon(&far)?;
    let volume: f64 = bbox.iter().map(|(lo, hi)| hi - lo).product();
    let hits = (0..n as u64)
        .into_par_iter()
        .map(|k| {
            let mut rng = RngStream::new(seed, k).rng();
            let x: Vec<f64> = bbox.iter().map(|(lo, hi)| lo + (hi - lo) * rng.random::<f64>()).collect();
            Ok(if zero_chamber_contains(r, &x)? { 1.0 } else { 0.0 })
        })
        .collect::<Result<Vec<f64>>>()?;
    let (p, se) = mean_and_stderr(&hits);
    Ok((volume * p, volume * se))
}

/// Membership on a `grid × grid` lattice of cell centres over a planar box,
/// row by row in increasing `y`, as `(x, y, inside)`.
pub fn zero_chamber_grid(r: &Realization, bbox: [(f64, f64); 2], grid: usize) -> Result<Vec<(f64, f64, bool)>> {
    if grid == 0 {
        return Err(Error::InvalidInput("grid must be at least 1".into()));
    }
    let far = [bbox[0].0.abs().max(bbox[0].1.abs()), bbox[1].0.abs().max(bbox[1].1.abs())];
    r.check_horizon(&far)?;
    let coord = |(lo, hi): (f64, f64), k: usize| lo + (hi - lo) * (k as f64 + 0.5) / grid as f64;
    (0..grid * grid)
        .into_par_iter()
        .map(|idx| {
            let (i, j) = (idx % grid, idx / grid);
            let (x, y) = (coord(bbox[0], i), coord(bbox[1], j));
            Ok((x, y, zero_chamber_contains(r, &[x, y])?))
        })
        .collect()
}

/// Direct Poisson hyperplane process, kept independent of the matrix code
/// as a reference for the `m = 1` case.
pub mod hyperplane {
    use super::*;

    /// Hyperplanes `{x : ⟨u_j, x⟩ = t_j}` with `t_j ≤ horizon`.
    #[derive(Clone, Debug)]
    pub struct HyperplaneRealization {
        pub horizon: f64,
        pub planes: Vec<(Vec<f64>, f64)>,
    }

    /// Distances from exponential inter-arrival gaps of rate `γ`; normals
    /// from `φ`.
    pub fn simulate_hyperplanes<R: Rng + ?Sized>(
        gamma: f64,
        d: usize,
        phi: &DirectionalLaw,
        horizon: f64,
        rng: &mut R,
    ) -> HyperplaneRealization {
        let mut planes = Vec::new();
        let mut t = 0.0;
        loop {
            let gap = -(1.0 - rng.random::<f64>()).ln() / gamma;
            t += gap;
            if t > horizon {
                break;
            }
            planes.push((phi.sample(d, rng), t));
        }
        HyperplaneRealization { horizon, planes }
    }

    fn side(u: &[f64], x: &[f64], t: f64) -> f64 {
        u.iter().zip(x).map(|(a, b)| a * b).sum::<f64>() - t
    }

    /// Hyperplanes separating (or touching) the endpoints of `[-v, v]`.
    pub fn count_hits(r: &HyperplaneRealization, v: &[f64]) -> usize {
        let w: Vec<f64> = v.iter().map(|x| -x).collect();
        r.planes.iter().filter(|(u, t)| side(u, v, *t) * side(u, &w, *t) <= 0.0).count()
    }

    /// `x` lies in every half-space `⟨u_j, x⟩ ≤ t_j`.
    pub fn zero_cell_contains(r: &HyperplaneRealization, x: &[f64]) -> bool {
        r.planes.iter().all(|(u, t)| side(u, x, *t) <= 0.0)
    }

    /// Mean hit count over `reps` realizations on streams `(seed, k)`.
    pub fn mean_hit_count(gamma: f64, phi: &DirectionalLaw, v: &[f64], reps: usize, seed: u64) -> SupportEstimate {
        let horizon = v.iter().map(|a| a.abs()).sum::<f64>();
        let xs: Vec<f64> = (0..reps as u64)
            .into_par_iter()
            .map(|k| {
                let r = simulate_hyperplanes(gamma, v.len(), phi, horizon, &mut RngStream::new(seed, k).rng());
                count_hits(&r, v) as f64
            })
            .collect();
        let (value, std_error) = mean_and_stderr(&xs);
        SupportEstimate { value, std_error, n_samples: reps }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn rng(s: u64) -> Rng64 {
        RngStream::new(99, s).rng()
    }

    fn uniform(m: usize, d: usize) -> HypersurfaceModel {
        HypersurfaceModel::new(5.0, m, d, DirectionalLaw::Uniform).unwrap()
    }

    #[test]
    fn generator_constraint_and_reduction() {
        let mut r = rng(0);
        for m in [1, 2, 3, 6] {
            for _ in 0..20 {
                let t = commuting_frame_generator(m, 3, &DirectionalLaw::Uniform, &mut r).unwrap();
                assert!(isometry_residual(&t).unwrap() <= 1e-12);
            }
        }
        let t = commuting_frame_generator(1, 2, &DirectionalLaw::Uniform, &mut r).unwrap();
        let u: Vec<f64> = t.matrices().iter().map(|a| a.re()[0]).collect();
        assert!(((u[0] * u[0] + u[1] * u[1]) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn commuting_frame_scalar_oracle() {
        // (1/m)‖Σ v_i U_i‖₁ = mean_k |⟨u^{(k)}, v⟩|, whose mean is E|⟨u, v⟩| = (2/π)‖v‖
        let v = [0.3, -1.1];
        let mut r = rng(1);
        let xs: Vec<f64> = (0..10_000)
            .map(|_| {
                let t = commuting_frame_generator(3, 2, &DirectionalLaw::Uniform, &mut r).unwrap();
                t.trace_norm_at(&v).unwrap() / 3.0
            })
            .collect();
        let (mu, se) = mean_and_stderr(&xs);
        let want = 2.0 / PI * (v[0] * v[0] + v[1] * v[1]).sqrt();
        assert!((mu - want).abs() < 3.0 * se, "{mu} {want} {se}");
    }

    #[test]
    fn poisson_event_counts() {
        let model = uniform(1, 2);
        let reps = 10_000;
        let horizon = 0.8;
        let counts: Vec<f64> =
            (0..reps).map(|k| simulate(&model, horizon, &mut rng(k)).unwrap().events().len() as f64).collect();
        let (mu, _) = mean_and_stderr(&counts);
        let lam = 5.0 * horizon;
        assert!((mu - lam).abs() < 3.0 * (lam / reps as f64).sqrt());
        let a = simulate(&model, horizon, &mut rng(3)).unwrap();
        assert_eq!(a, simulate(&model, horizon, &mut rng(3)).unwrap());
        assert!(a.events().windows(2).all(|w| w[0].t < w[1].t));
        let tiny = simulate(&model, 1e-12, &mut rng(4)).unwrap();
        assert!(tiny.events().is_empty());
    }

    #[test]
    fn count_basics() {
        let model = uniform(3, 2);
        let r = simulate(&model, 2.0, &mut rng(5)).unwrap();
        assert_eq!(count_intersections_segment(&r, &[0.0, 0.0]).unwrap(), 0);
        let v = [1.0, 0.5];
        let c1 = count_intersections_segment(&r, &v).unwrap();
        let c2 = count_intersections_segment(&r, &[2.0, 1.0]).unwrap();
        assert!(c2 >= c1);
        assert!(matches!(count_intersections_segment(&r, &[10.0, 0.0]), Err(Error::HorizonTooShort { .. })));
        // a longer horizon does not change in-range answers
        let short = Realization::new(
            required_horizon(&v, 3),
            3,
            r.events().iter().filter(|e| e.t <= required_horizon(&v, 3)).cloned().collect(),
        )
        .unwrap();
        assert_eq!(count_intersections_segment(&short, &v).unwrap(), c1);
        assert_eq!(zero_chamber_contains(&short, &v).unwrap(), zero_chamber_contains(&r, &v).unwrap());
    }

    #[test]
    fn m1_counts_are_hyperplane_counts() {
        let model = uniform(1, 2);
        let v = [0.4, 0.7];
        let r = simulate(&model, 2.0, &mut rng(6)).unwrap();
        let direct = r
            .events()
            .iter()
            .filter(|e| {
                let u = [e.tuple.matrices()[0].re()[0], e.tuple.matrices()[1].re()[0]];
                (u[0] * v[0] + u[1] * v[1]).abs() >= e.t
            })
            .count();
        assert_eq!(count_intersections_segment(&r, &v).unwrap(), direct);
    }

    #[test]
    fn operanoid_support_closed_form_m1() {
        let model = uniform(1, 2);
        assert_eq!(associated_operanoid_support(&model, &[0.0, 0.0], 10, 0).unwrap().value, 0.0);
        let v = [0.6, 0.8];
        let e = associated_operanoid_support(&model, &v, 100_000, 7).unwrap();
        let want = 2.0 * 5.0 / PI;
        assert!((e.value - want).abs() < 4.0 * e.std_error);
        // quadrature oracle for E|cos θ| = 2/π
        let q = crate::quadrature::integrate_default(|t: f64| t.cos().abs() / (2.0 * PI), 0.0, 2.0 * PI, &[PI / 2.0, 1.5 * PI])
            .unwrap();
        assert!((q - 2.0 / PI).abs() < 1e-9);
    }

    #[test]
    fn mean_count_matches_operanoid_support() {
        for m in [1, 3] {
            let model = uniform(m, 2);
            let v = [1.0, 0.0];
            let c = mean_intersection_count(&model, &v, 10_000, 7).unwrap();
            let h = associated_operanoid_support(&model, &v, 10_000, 7).unwrap();
            let se = c.std_error.hypot(h.std_error);
            assert!((c.value - h.value).abs() <= 3.0 * se, "m={m}: {c:?} {h:?}");
        }
    }

    #[test]
    fn direct_hyperplane_reference() {
        let phi = DirectionalLaw::Uniform;
        let v = [0.5, -0.9];
        let direct = hyperplane::mean_hit_count(5.0, &phi, &v, 10_000, 11);
        let model = HypersurfaceModel::new(5.0, 1, 2, phi.clone()).unwrap();
        let c = mean_intersection_count(&model, &v, 10_000, 12).unwrap();
        assert!((direct.value - c.value).abs() <= 3.0 * direct.std_error.hypot(c.std_error));
        let r = hyperplane::simulate_hyperplanes(5.0, 2, &phi, 1.0, &mut rng(8));
        assert!(hyperplane::zero_cell_contains(&r, &[0.0, 0.0]));
    }

    #[test]
    fn chamber_membership() {
        let model = uniform(3, 2);
        let r = simulate(&model, 3.0, &mut rng(9)).unwrap();
        assert!(zero_chamber_contains(&r, &[0.0, 0.0]).unwrap());
        let mut g = rng(10);
        for _ in 0..200 {
            let x = [4.0 * g.random::<f64>() - 2.0, 4.0 * g.random::<f64>() - 2.0];
            if zero_chamber_contains(&r, &x).unwrap() {
                for s in [0.0, 0.3, 0.9] {
                    assert!(zero_chamber_contains(&r, &[s * x[0], s * x[1]]).unwrap());
                }
            }
        }
        assert!(matches!(zero_chamber_contains(&r, &[10.0, 0.0]), Err(Error::HorizonTooShort { .. })));
    }

    #[test]
    fn m1_chamber_matches_half_spaces() {
        let model = uniform(1, 2);
        let r = simulate(&model, 2.0, &mut rng(13)).unwrap();
        let planes = hyperplane::HyperplaneRealization {
            horizon: 2.0,
            planes: r
                .events()
                .iter()
                .map(|e| (e.tuple.matrices().iter().map(|a| a.re()[0]).collect(), e.t))
                .collect(),
        };
        let mut g = rng(14);
        for _ in 0..500 {
            let x = [2.0 * g.random::<f64>() - 1.0, 2.0 * g.random::<f64>() - 1.0];
            assert_eq!(zero_chamber_contains(&r, &x).unwrap(), hyperplane::zero_cell_contains(&planes, &x));
        }
    }

    #[test]
    fn chamber_volume() {
        let empty = Realization::new(5.0, 1, vec![]).unwrap();
        let bbox = [(-1.0, 1.0), (-1.0, 1.0)];
        assert_eq!(zero_chamber_volume_mc(&empty, &bbox, 100, 0).unwrap(), (4.0, 0.0));
        // single line x₁ = 0.5 clips [-1, 1]² to area 3
        let t = MatrixTuple::new(vec![HermitianMatrix::from_diagonal(&[1.0]), HermitianMatrix::from_diagonal(&[0.0])]).unwrap();
        let one = Realization::new(5.0, 1, vec![Event { t: 0.5, tuple: t }]).unwrap();
        let (v, se) = zero_chamber_volume_mc(&one, &bbox, 40_000, 1).unwrap();
        assert!((v - 3.0).abs() < 4.0 * se, "{v} {se}");
        // coupling: a denser process (events superset) gives a smaller chamber
        let sparse = HypersurfaceModel::new(1.0, 2, 2, DirectionalLaw::Uniform).unwrap();
        let dense = HypersurfaceModel::new(8.0, 2, 2, DirectionalLaw::Uniform).unwrap();
        let rs = simulate(&sparse, 3.0, &mut rng(15)).unwrap();
        let rd = simulate(&dense, 3.0, &mut rng(15)).unwrap();
        let (vs, _) = zero_chamber_volume_mc(&rs, &bbox, 4000, 2).unwrap();
        let (vd, _) = zero_chamber_volume_mc(&rd, &bbox, 4000, 2).unwrap();
        assert!(vd <= vs);
    }

    #[test]
    fn custom_generator_is_checked() {
        let bad = uniform(2, 2).with_custom_generator(|_| {
            MatrixTuple::new(vec![HermitianMatrix::identity(2), HermitianMatrix::identity(2)])
        });
        assert!(matches!(bad.generate(&mut rng(0)), Err(Error::ConstraintViolation(_))));
        let good = uniform(2, 2).with_custom_generator(|_| {
            MatrixTuple::new(vec![HermitianMatrix::from_diagonal(&[1.0, 0.0]), HermitianMatrix::from_diagonal(&[0.0, 1.0])])
        });
        let r = simulate(&good, 1.0, &mut rng(1)).unwrap();
        assert!(count_intersections_segment(&r, &[0.5, 0.5]).is_ok());
    }

    #[test]
    fn discrete_law() {
        let phi = DirectionalLaw::Discrete { directions: vec![vec![1.0, 0.0], vec![0.0, 1.0]], weights: vec![1.0, 3.0] };
        phi.validate(2).unwrap();
        let mut g = rng(16);
        let n = 20_000;
        let hits = (0..n).filter(|_| phi.sample(2, &mut g)[0] == 1.0).count();
        assert!((hits as f64 / n as f64 - 0.25).abs() < 0.015);
        let bad = DirectionalLaw::Discrete { directions: vec![vec![1.0, 1.0]], weights: vec![1.0] };
        assert!(bad.validate(2).is_err());
    }
}
