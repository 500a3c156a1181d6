use std::f64::consts::PI;

use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

use super::{norm, Operatope};
use crate::ensembles::RngStream;
use crate::error::{Error, Result};

/// How the covering radius of a net was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum NetKind {
    /// Equally spaced circle; δ is the chord between neighbours.
    Exact,
    /// Fibonacci sphere; δ is a documented area-based estimate.
    Estimated,
    /// Random directions; δ holds with high probability only.
    Probabilistic,
}

/// Unit directions with a covering radius `δ`: every unit vector lies within
/// Euclidean distance `δ` of some net point.
#[derive(Clone, Debug, Serialize)]
pub struct DirectionNet {
    d: usize,
    directions: Vec<Vec<f64>>,
    covering_radius: f64,
    kind: NetKind,
}

impl DirectionNet {
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn directions(&self) -> &[Vec<f64>] {
        &self.directions
    }

    pub fn len(&self) -> usize {
        self.directions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.directions.is_empty()
    }

    pub fn covering_radius(&self) -> f64 {
        self.covering_radius
    }

    pub fn kind(&self) -> NetKind {
        self.kind
    }
}

/// Builds a net of `target_count` directions in `ℝ^d`.
///
/// * `d = 2`: angles `2πk/count`, `δ = 2 sin(π/count)`.
/// * `d = 3`: Fibonacci sphere, `δ = 2 sqrt(2π / (√5 count))`.
/// * `d ≥ 4`: normalized Gaussian vectors from stream `(seed, 0)`,
///   `δ = 2 (d log(count) / count)^{1/(d-1)}`.
pub fn direction_net(d: usize, target_count: usize, seed: u64) -> Result<DirectionNet> {
    if d < 2 || target_count < 2 * d {
        return Err(Error::InvalidCount { d, count: target_count });
    }
    let n = target_count;
    let (directions, covering_radius, kind) = match d {
        2 => {
            let dirs = (0..n)
                .map(|k| {
                    let t = 2.0 * PI * k as f64 / n as f64;
                    vec![t.cos(), t.sin()]
                })
                .collect();
            (dirs, 2.0 * (PI / n as f64).sin(), NetKind::Exact)
        }
        3 => {
            let golden = PI * (3.0 - 5f64.sqrt());
            let dirs = (0..n)
                .map(|k| {
                    let z = 1.0 - (2 * k + 1) as f64 / n as f64;
                    let r = (1.0 - z * z).sqrt();
                    let t = golden * k as f64;
                    vec![r * t.cos(), r * t.sin(), z]
                })
                .collect();
            let delta = 2.0 * (2.0 * PI / (5f64.sqrt() * n as f64)).sqrt();
            (dirs, delta, NetKind::Estimated)
        }
        _ => {
            let mut rng = RngStream::new(seed, 0).rng();
            let dirs = (0..n)
                .map(|_| loop {
                    let g: Vec<f64> = (0..d).map(|_| StandardNormal.sample(&mut rng)).collect();
                    let r = norm(&g);
                    if r > 1e-12 {
                        break g.into_iter().map(|x| x / r).collect();
                    }
                })
                .collect();
            let nf = n as f64;
            let delta = 2.0 * (nf.ln() * d as f64 / nf).powf(1.0 / (d - 1) as f64);
            (dirs, delta, NetKind::Probabilistic)
        }
    };
    Ok(DirectionNet { d, directions, covering_radius, kind })
}

/// Evaluates a support function at every net direction, in net order.
pub fn support_on_net<F>(h: F, net: &DirectionNet) -> Result<Vec<f64>>
where
    F: Fn(&[f64]) -> Result<f64> + Sync,
{
    net.directions.par_iter().map(|u| h(u)).collect()
}

/// Lower and upper bounds on a Hausdorff distance.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct HausdorffBracket {
    pub lower: f64,
    pub upper: f64,
}

impl HausdorffBracket {
    /// From support values on a net and Lipschitz constants (circumradii about
    /// the origin) of both support functions.
    pub fn from_values(ha: &[f64], hb: &[f64], delta: f64, ra: f64, rb: f64) -> Result<Self> {
        if ha.len() != hb.len() {
            return Err(Error::dims(ha.len(), hb.len()));
        }
        let lower = ha.iter().zip(hb).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        Ok(Self { lower, upper: lower + (ra + rb) * delta })
    }
}

/// `lower = max_net |h_A - h_B|`, `upper = lower + (R_A + R_B) δ`.
pub fn hausdorff_estimate<FA, FB>(
    ha: FA,
    hb: FB,
    net: &DirectionNet,
    radius_a: f64,
    radius_b: f64,
) -> Result<HausdorffBracket>
where
    FA: Fn(&[f64]) -> Result<f64> + Sync,
    FB: Fn(&[f64]) -> Result<f64> + Sync,
{
    let a = support_on_net(ha, net)?;
    let b = support_on_net(hb, net)?;
    HausdorffBracket::from_values(&a, &b, net.covering_radius, radius_a, radius_b)
}

/// Upper bound on `max_{x ∈ Z} ‖x‖`, the Lipschitz constant of `h_Z`.
///
/// Uses `max_net h / (1 - δ)` when the net is fine enough, and always the
/// Frobenius bound `‖v‖ + Σ_j sqrt(m_j) sqrt(Σ_i ‖A_i^{(j)}‖_F²)`; the smaller
/// of the two is returned.
pub fn circumradius_bound(z: &Operatope, net: &DirectionNet) -> Result<f64> {
    let frob = norm(z.translation())
        + z.summands()
            .iter()
            .map(|t| {
                let s: f64 = t.matrices().iter().map(|a| a.frobenius_norm().powi(2)).sum();
                (t.m() as f64).sqrt() * s.sqrt()
            })
            .sum::<f64>();
    let delta = net.covering_radius;
    if delta < 1.0 && net.kind != NetKind::Probabilistic {
        let hmax = support_on_net(|u| z.support(u), net)?.into_iter().fold(0.0, f64::max);
        return Ok(frob.min(hmax / (1.0 - delta)));
    }
    Ok(frob)
}

/// Circumradius bound from precomputed net values of a support function.
pub fn circumradius_from_values(values: &[f64], delta: f64) -> Option<f64> {
    (delta < 1.0).then(|| values.iter().copied().fold(0.0, f64::max) / (1.0 - delta))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bodies::{disc, ellipsoid_operatope, nonzonoid_example};

    #[test]
    fn circle_nets() {
        let net = direction_net(2, 4, 0).unwrap();
        let want = [[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0], [0.0, -1.0]];
        for (u, w) in net.directions().iter().zip(want) {
            assert!((u[0] - w[0]).abs() < 1e-15 && (u[1] - w[1]).abs() < 1e-15);
        }
        assert!((net.covering_radius() - 2.0 * (PI / 4.0).sin()).abs() < 1e-15);
        let net = direction_net(2, 360, 0).unwrap();
        assert!((net.covering_radius() - 2.0 * (PI / 360.0).sin()).abs() < 1e-15);
        assert_eq!(net.kind(), NetKind::Exact);
        assert!(matches!(direction_net(2, 3, 0), Err(Error::InvalidCount { .. })));
        assert!(direction_net(1, 10, 0).is_err());
    }

    #[test]
    fn sphere_nets_are_unit_and_reproducible() {
        for d in [3, 4, 6] {
            let a = direction_net(d, 1000, 42).unwrap();
            let b = direction_net(d, 1000, 42).unwrap();
            assert_eq!(a.directions(), b.directions());
            assert!(a.directions().iter().all(|u| (norm(u) - 1.0).abs() < 1e-12));
            assert!(a.covering_radius() > 0.0);
        }
        assert_eq!(direction_net(4, 100, 1).unwrap().kind(), NetKind::Probabilistic);
    }

    #[test]
    fn fibonacci_covering_estimate_holds_empirically() {
        // probe random points on the sphere; each must be within δ of the net
        let net = direction_net(3, 1000, 0).unwrap();
        let mut rng = RngStream::new(9, 1).rng();
        for _ in 0..2000 {
            let g: Vec<f64> = (0..3).map(|_| StandardNormal.sample(&mut rng)).collect();
            let r = norm(&g);
            let p: Vec<f64> = g.iter().map(|x| x / r).collect();
            let best = net
                .directions()
                .iter()
                .map(|u| norm(&[u[0] - p[0], u[1] - p[1], u[2] - p[2]]))
                .fold(f64::INFINITY, f64::min);
            assert!(best <= net.covering_radius());
        }
    }

    #[test]
    fn concentric_balls() {
        let net = direction_net(2, 720, 0).unwrap();
        let b = hausdorff_estimate(|u| Ok(norm(u)), |u| Ok(2.0 * norm(u)), &net, 1.0, 2.0).unwrap();
        assert!((b.lower - 1.0).abs() < 1e-6);
        assert!(b.upper <= 1.0 + 3.0 * net.covering_radius() + 1e-15);
        let same = hausdorff_estimate(|u| disc().support(u), |u| disc().support(u), &net, 1.0, 1.0).unwrap();
        assert_eq!(same.lower, 0.0);
        assert!(same.upper < 0.02);
    }

    #[test]
    fn translated_balls_bracket_truth() {
        // d_H between B and B + w is ‖w‖
        let net = direction_net(2, 50, 0).unwrap();
        let w = [0.3, 0.4];
        let moved = disc().translate(&w).unwrap();
        let r = circumradius_bound(&moved, &net).unwrap();
        let b = hausdorff_estimate(|u| disc().support(u), |u| moved.support(u), &net, 1.0, r).unwrap();
        assert!(b.lower <= 0.5 + 1e-12 && 0.5 <= b.upper);
    }

    #[test]
    fn circumradius_is_an_upper_bound() {
        let z = nonzonoid_example();
        let coarse = direction_net(3, 20, 0).unwrap();
        let fine = direction_net(3, 20000, 0).unwrap();
        let true_r = support_on_net(|u| z.support(u), &fine).unwrap().into_iter().fold(0.0, f64::max);
        assert!(circumradius_bound(&z, &coarse).unwrap() >= true_r - 1e-12);
        let e = ellipsoid_operatope(&[vec![3.0, 0.0], vec![0.0, 1.0]]).unwrap();
        let net = direction_net(2, 720, 0).unwrap();
        let r = circumradius_bound(&e, &net).unwrap();
        assert!((3.0..3.03).contains(&r));
    }
}
