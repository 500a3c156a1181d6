//! Density of `u₁ (Y - κ^{-1/2}) + u₂ β S` for free `Y ~ MP(κ, 1)/√κ` and
//! standard semicircular `S`, from the cubic-discriminant formula
//!
//! ```text
//! γ = 1/κ,  a = u₁/√κ,  ν = (u₁² + (1 - u₁²) β²)/κ
//! α₂ = (ν + a x) γ / (a (ν - a²)),  α₁ = (a + γ x) γ / (a (ν - a²)),  α₀ = γ² / (a (ν - a²))
//! Q = (3α₁ - α₂²)/9,  R = (9 α₂ α₁ - 27 α₀ - 2 α₂³)/54,  D = Q³ + R²
//! ρ(x) = sqrt(3/2) (∛(√D + R) + ∛(√D - R))  for D > 0, else 0
//! ```
//!
//! with real cube roots. The bracket equals `√2 Im G` for the complex pair of
//! roots of `G³ + α₂G² + α₁G + α₀`; it is evaluated that way (real root by
//! safeguarded Newton, then deflation) because Cardano's form cancels
//! catastrophically when `u₂β` is small. The raw `ρ` integrates to
//! `Z(u) = π√2` rather than one; the density is renormalized by the
//! quadrature value of `Z(u)`, which is reported separately.

use super::law::SpectralLaw;
use super::SEMICIRCLE_ABS_MEAN;
use crate::error::{Error, Result};
use crate::quadrature::{integrate, DEFAULT_ABS_TOL, DEFAULT_MAX_PANELS};

const SCAN_POINTS: usize = 8192;
/// Components of `u` below this are treated as exactly zero.
const AXIS_TOL: f64 = 1e-10;

#[derive(Clone, Debug)]
pub struct MpSemicircle {
    kappa: f64,
    beta: f64,
    u: [f64; 2],
    a: f64,
    gamma: f64,
    nu: f64,
    w: f64,
    intervals: Vec<(f64, f64)>,
    raw_mass: f64,
}

impl MpSemicircle {
    pub fn new(kappa: f64, beta: f64, u: [f64; 2]) -> Result<Self> {
        if !(kappa > 0.0 && kappa.is_finite() && beta.is_finite()) {
            return Err(Error::InvalidInput(format!("need kappa > 0 and finite beta, got {kappa}, {beta}")));
        }
        if ((u[0] * u[0] + u[1] * u[1]).sqrt() - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidInput("direction must be a unit vector".into()));
        }
        let gamma = 1.0 / kappa;
        let a = u[0] / kappa.sqrt();
        let nu = (u[0] * u[0] + (1.0 - u[0] * u[0]) * beta * beta) / kappa;
        // ν - a², formed without cancellation
        let w = u[1] * u[1] * beta * beta / kappa;
        if a == 0.0 {
            return Err(Error::DegenerateParameters("u₁ = 0 (pure semicircle)".into()));
        }
        if w <= 1e-24 * nu {
            return Err(Error::DegenerateParameters("ν = a² (u₂β = 0, pure Marchenko-Pastur)".into()));
        }
        let mut s = Self { kappa, beta, u, a, gamma, nu, w, intervals: vec![], raw_mass: 0.0 };
        s.intervals = s.find_intervals();
        if s.intervals.is_empty() {
            return Err(Error::DegenerateParameters("density vanishes on the scan range".into()));
        }
        s.raw_mass = s.integrate_raw(|_| 1.0)?;
        Ok(s)
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn direction(&self) -> [f64; 2] {
        self.u
    }

    /// The printed formula, before renormalization.
    pub fn raw_density(&self, x: f64) -> f64 {
        // a(ν - a²) · (G³ + α₂G² + α₁G + α₀)
        let (a, g) = (self.a, self.gamma);
        let c = [g * g, (a + g * x) * g, (self.nu + a * x) * g, a * self.w];
        2f64.sqrt() * cubic_pair_imag(c)
    }

    /// `Z(u) = ∫ ρ_raw`.
    pub fn raw_mass(&self) -> f64 {
        self.raw_mass
    }

    pub fn density(&self, x: f64) -> f64 {
        self.raw_density(x) / self.raw_mass
    }

    /// Maximal intervals where `D > 0`, endpoints located by bisection.
    pub fn intervals(&self) -> &[(f64, f64)] {
        &self.intervals
    }

    pub fn support(&self) -> (f64, f64) {
        (self.intervals[0].0, self.intervals[self.intervals.len() - 1].1)
    }

    fn scan_range(&self) -> (f64, f64) {
        let r = self.kappa.sqrt();
        let (y0, y1) = (-1.0 / r, ((1.0 + r).powi(2) - 1.0) / r);
        let (p, q) = (self.u[0] * y0, self.u[0] * y1);
        let s = 2.0 * (self.u[1] * self.beta).abs();
        let (lo, hi) = (p.min(q) - s, p.max(q) + s);
        let margin = 0.25 * (hi - lo) + 0.5;
        (lo - margin, hi + margin)
    }

    /// Global grid plus a fine grid around `-a`, where a narrow bump carries
    /// the Marchenko–Pastur atom when `u₂β` is small.
    fn scan_points(&self) -> Vec<f64> {
        let (lo, hi) = self.scan_range();
        let step = (hi - lo) / SCAN_POINTS as f64;
        let mut xs: Vec<f64> = (0..=SCAN_POINTS).map(|k| lo + step * k as f64).collect();
        let r = 4.0 * (self.u[1] * self.beta).abs();
        if r < 64.0 * step {
            let n = 1024;
            xs.extend((0..=n).map(|k| -self.a - r + 2.0 * r * k as f64 / n as f64));
            xs.sort_by(f64::total_cmp);
            xs.dedup();
        }
        xs
    }

    fn find_intervals(&self) -> Vec<(f64, f64)> {
        let xs = self.scan_points();
        let on = |x: f64| self.raw_density(x) > 0.0;
        let edge = |mut out: f64, mut inn: f64| {
            for _ in 0..80 {
                let mid = 0.5 * (out + inn);
                if on(mid) {
                    inn = mid;
                } else {
                    out = mid;
                }
            }
            0.5 * (out + inn)
        };
        let mut intervals = Vec::new();
        let mut start = None;
        let mut prev_x = xs[0];
        let mut prev_on = on(prev_x);
        if prev_on {
            start = Some(prev_x);
        }
        for &x in &xs[1..] {
            let now = on(x);
            if now && !prev_on {
                start = Some(edge(prev_x, x));
            } else if !now && prev_on {
                intervals.push((start.take().unwrap_or(prev_x), edge(x, prev_x)));
            }
            prev_x = x;
            prev_on = now;
        }
        if let Some(s) = start {
            intervals.push((s, prev_x));
        }
        intervals
    }

    fn integrate_raw(&self, f: impl Fn(f64) -> f64) -> Result<f64> {
        let mut total = 0.0;
        for &(lo, hi) in &self.intervals {
            // -a is where the Marchenko-Pastur atom sits; the density peaks there
            total += integrate(|x| f(x) * self.raw_density(x), lo, hi, &[0.0, -self.a], DEFAULT_ABS_TOL, DEFAULT_MAX_PANELS)?
                .value;
        }
        Ok(total)
    }

    /// `∫ f ρ` with the renormalized density.
    pub fn expect(&self, f: impl Fn(f64) -> f64) -> Result<f64> {
        Ok(self.integrate_raw(f)? / self.raw_mass)
    }

    /// Free zonoid support `∫ |x| ρ(x; u) dx`.
    pub fn abs_mean(&self) -> Result<f64> {
        self.expect(f64::abs)
    }

    pub fn cdf_many(&self, xs: &[f64]) -> Result<Vec<f64>> {
        let mut order: Vec<usize> = (0..xs.len()).collect();
        order.sort_by(|&i, &j| xs[i].total_cmp(&xs[j]));
        let mut out = vec![0.0; xs.len()];
        let mut acc = 0.0;
        let mut prev = self.support().0;
        let tol = DEFAULT_ABS_TOL / (1.0 + xs.len() as f64).sqrt();
        for &i in &order {
            let x = xs[i];
            for &(lo, hi) in &self.intervals {
                let a = prev.max(lo);
                let b = x.min(hi);
                if b > a {
                    acc += integrate(|t| self.raw_density(t), a, b, &[0.0], tol, DEFAULT_MAX_PANELS)?.value;
                }
            }
            prev = prev.max(x);
            out[i] = (acc / self.raw_mass).min(1.0);
        }
        Ok(out)
    }
}

fn horner(c: &[f64; 4], x: f64) -> (f64, f64) {
    let p = ((c[3] * x + c[2]) * x + c[1]) * x + c[0];
    let dp = (3.0 * c[3] * x + 2.0 * c[2]) * x + c[1];
    (p, dp)
}

/// `|Im|` of the complex-conjugate roots of `c₃x³ + c₂x² + c₁x + c₀`, or zero
/// when all roots are real. Requires `c₃ ≠ 0`.
fn cubic_pair_imag(c: [f64; 4]) -> f64 {
    let bound = 1.0 + c[..3].iter().map(|v| (v / c[3]).abs()).fold(0.0, f64::max);
    let (mut lo, mut hi) = (-bound, bound);
    if horner(&c, lo).0 > 0.0 {
        std::mem::swap(&mut lo, &mut hi);
    }
    let mut r = 0.5 * (lo + hi);
    for _ in 0..200 {
        let (p, dp) = horner(&c, r);
        if p == 0.0 {
            break;
        }
        if p < 0.0 {
            lo = r;
        } else {
            hi = r;
        }
        let newton = r - p / dp;
        let next = if dp != 0.0 && (newton - lo) * (newton - hi) < 0.0 { newton } else { 0.5 * (lo + hi) };
        if (next - r).abs() <= 4.0 * f64::EPSILON * r.abs().max(f64::MIN_POSITIVE) {
            r = next;
            break;
        }
        r = next;
    }
    // deflate from whichever end keeps the recurrence stable
    let (e2, e1, e0) = if (c[3] * r.powi(3)).abs() > c[0].abs() {
        let e0 = -c[0] / r;
        let e1 = (e0 - c[1]) / r;
        (c[3], e1, e0)
    } else {
        let e2 = c[3];
        let e1 = c[2] + e2 * r;
        (e2, e1, c[1] + e1 * r)
    };
    let disc = 4.0 * e2 * e0 - e1 * e1;
    if disc <= 0.0 {
        0.0
    } else {
        disc.sqrt() / (2.0 * e2.abs())
    }
}

/// Renormalized density at `x` for a unit direction `u`.
pub fn mp_plus_semicircle_density(kappa: f64, beta: f64, u: [f64; 2], x: f64) -> Result<f64> {
    Ok(MpSemicircle::new(kappa, beta, u)?.density(x))
}

/// Support function at any `u ∈ ℝ²` of the free zonoid of the MP/semicircle
/// pair, dispatching to the pure branches when `u₁ = 0` or `u₂β = 0`.
pub fn mp_plus_semicircle_support(kappa: f64, beta: f64, u: &[f64]) -> Result<f64> {
    if u.len() != 2 {
        return Err(Error::dims(2, u.len()));
    }
    let r = u[0].hypot(u[1]);
    if r == 0.0 {
        return Ok(0.0);
    }
    let (u1, u2) = (u[0] / r, u[1] / r);
    if u1.abs() <= AXIS_TOL {
        return Ok(r * (u2 * beta).abs() * SEMICIRCLE_ABS_MEAN);
    }
    if (u2 * beta).abs() <= AXIS_TOL {
        let s = kappa.sqrt();
        let law = SpectralLaw::ShiftedMarchenkoPastur { kappa, sigma: 1.0, scale: u1 / s, shift: -u1 / s };
        return Ok(r * law.abs_mean()?);
    }
    Ok(r * MpSemicircle::new(kappa, beta, [u1, u2])?.abs_mean()?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    #[test]
    fn raw_mass_and_normalization() {
        let d = MpSemicircle::new(5.0, 1.0, [FRAC_1_SQRT_2, FRAC_1_SQRT_2]).unwrap();
        assert!((d.raw_mass() - PI * 2f64.sqrt()).abs() < 1e-5, "{}", d.raw_mass());
        assert!((d.expect(|_| 1.0).unwrap() - 1.0).abs() < 1e-9);
        // mean of u₁(Y - κ^{-1/2}) + u₂βS is zero
        assert!(d.expect(|x| x).unwrap().abs() < 1e-6);
        // variance adds freely: u₁² Var(Y) + u₂² β² with Var(Y) = 1/κ · κ = 1
        let var = d.expect(|x| x * x).unwrap();
        assert!((var - 1.0).abs() < 1e-6, "{var}");
        assert!((d.abs_mean().unwrap() - 0.79167).abs() < 2e-4);
    }

    fn cardano(kappa: f64, beta: f64, u1: f64, x: f64) -> f64 {
        let g = 1.0 / kappa;
        let a = u1 / kappa.sqrt();
        let nu = (u1 * u1 + (1.0 - u1 * u1) * beta * beta) / kappa;
        let den = a * (nu - a * a);
        let (a2, a1, a0) = ((nu + a * x) * g / den, (a + g * x) * g / den, g * g / den);
        let q = (3.0 * a1 - a2 * a2) / 9.0;
        let r = (9.0 * a2 * a1 - 27.0 * a0 - 2.0 * a2.powi(3)) / 54.0;
        let d = q.powi(3) + r * r;
        if d <= 0.0 {
            return 0.0;
        }
        1.5f64.sqrt() * ((d.sqrt() + r).cbrt() + (d.sqrt() - r).cbrt())
    }

    #[test]
    fn matches_cardano_away_from_axes() {
        for &(u1, beta) in &[(FRAC_1_SQRT_2, 1.0), (-0.6, 0.75), (0.3, 1.25)] {
            let u2 = (1.0f64 - u1 * u1).sqrt();
            let d = MpSemicircle::new(5.0, beta, [u1, u2]).unwrap();
            let (lo, hi) = d.support();
            for k in 1..200 {
                let x = lo + (hi - lo) * k as f64 / 200.0;
                let c = cardano(5.0, beta, u1, x);
                assert!((d.raw_density(x) - c).abs() < 1e-8 * (1.0 + c), "{u1} {x}");
            }
        }
    }

    #[test]
    fn outside_support_is_zero() {
        let d = MpSemicircle::new(5.0, 1.0, [FRAC_1_SQRT_2, FRAC_1_SQRT_2]).unwrap();
        let (lo, hi) = d.support();
        assert_eq!(d.raw_density(lo - 0.1), 0.0);
        assert_eq!(d.raw_density(hi + 0.1), 0.0);
        assert!(d.raw_density(0.5 * (lo + hi)) > 0.0);
        // continuity at the edges
        assert!(d.density(lo + 1e-9) < 1e-3 && d.density(hi - 1e-9) < 1e-3);
    }

    #[test]
    fn negative_first_coordinate() {
        for &(u1, beta) in &[(-FRAC_1_SQRT_2, 1.0), (0.3, 0.75), (-0.9, 1.25)] {
            let u2 = (1.0f64 - u1 * u1).sqrt();
            let d = MpSemicircle::new(5.0, beta, [u1, u2]).unwrap();
            assert!((d.expect(|_| 1.0).unwrap() - 1.0).abs() < 1e-9);
            let var = d.expect(|x| x * x).unwrap();
            assert!((var - (u1 * u1 + u2 * u2 * beta * beta)).abs() < 1e-5, "{u1} {beta}: {var}");
        }
    }

    #[test]
    fn degenerate_parameters() {
        assert!(matches!(MpSemicircle::new(5.0, 1.0, [0.0, 1.0]), Err(Error::DegenerateParameters(_))));
        assert!(matches!(MpSemicircle::new(5.0, 1.0, [1.0, 0.0]), Err(Error::DegenerateParameters(_))));
        assert!(matches!(MpSemicircle::new(5.0, 0.0, [0.6, 0.8]), Err(Error::DegenerateParameters(_))));
        assert!(MpSemicircle::new(5.0, 1.0, [0.6, 0.6]).is_err());
    }

    #[test]
    fn support_function_is_continuous_across_axes() {
        let at = |t: f64| mp_plus_semicircle_support(5.0, 1.0, &[t.cos(), t.sin()]).unwrap();
        let h = PI / 2.0;
        for eps in [1e-2, 1e-4, 1e-6] {
            assert!((at(h) - at(h - eps)).abs() < 2.0 * eps, "{eps}");
            assert!((at(0.0) - at(eps)).abs() < 2.0 * eps, "{eps}");
            assert!((at(PI) - at(PI - eps)).abs() < 2.0 * eps, "{eps}");
        }
        let h2 = mp_plus_semicircle_support(5.0, 1.0, &[0.6, 0.8]).unwrap();
        let h4 = mp_plus_semicircle_support(5.0, 1.0, &[1.2, 1.6]).unwrap();
        assert!((h4 - 2.0 * h2).abs() < 1e-9);
    }

    #[test]
    fn cdf_endpoints() {
        let d = MpSemicircle::new(5.0, 1.0, [FRAC_1_SQRT_2, FRAC_1_SQRT_2]).unwrap();
        let (lo, hi) = d.support();
        let c = d.cdf_many(&[hi + 1.0, lo - 1.0, 0.0]).unwrap();
        assert!(c[1] == 0.0 && (c[0] - 1.0).abs() < 1e-7 && c[2] > 0.0 && c[2] < 1.0);
    }
}
