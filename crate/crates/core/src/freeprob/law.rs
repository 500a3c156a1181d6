use std::f64::consts::PI;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{integrate, DEFAULT_ABS_TOL, DEFAULT_MAX_PANELS};

/// Mass tolerance accepted for user-supplied gridded densities.
pub const MASS_TOL: f64 = 1e-8;

/// A compactly supported probability law on the real line, standing in for
/// the spectral distribution of one self-adjoint noncommutative variable.
///
/// Marchenko–Pastur convention: `MarchenkoPastur { kappa, sigma }` is the
/// limit of the eigenvalue distribution of `X Xᵀ / m` for an `κm × m` matrix
/// `X` of iid `N(0, σ²)` entries. Its continuous part has density
/// `sqrt((b - x)(x - a)) / (2π σ² κ x)` on `[a, b] = [σ²(1 - √κ)², σ²(1 + √κ)²]`,
/// there is an atom of mass `(1 - 1/κ)₊` at zero, and the mean is `σ²`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case")]
pub enum SpectralLaw {
    /// Density `sqrt((4σ² - t²)₊) / (2πσ²)` on `[-2σ, 2σ]`, variance `σ²`.
    Semicircle { sigma: f64 },
    MarchenkoPastur { kappa: f64, sigma: f64 },
    /// Law of `scale · X + shift` with `X ~ MarchenkoPastur(kappa, sigma)`.
    ShiftedMarchenkoPastur { kappa: f64, sigma: f64, scale: f64, shift: f64 },
    PointMass { x0: f64 },
    /// Piecewise-linear density through `(grid[k], weights[k])` plus atoms
    /// given as `(location, mass)` pairs.
    GriddedDensity {
        grid: Vec<f64>,
        weights: Vec<f64>,
        #[serde(default)]
        atoms: Vec<(f64, f64)>,
    },
    /// Uniform weights on the given points.
    Empirical { points: Vec<f64> },
}

pub fn semicircle_density(sigma: f64, t: f64) -> f64 {
    (4.0 * sigma * sigma - t * t).max(0.0).sqrt() / (2.0 * PI * sigma * sigma)
}

fn semicircle_cdf(sigma: f64, t: f64) -> f64 {
    let x = (t / sigma).clamp(-2.0, 2.0);
    0.5 + x * (4.0 - x * x).max(0.0).sqrt() / (4.0 * PI) + (0.5 * x).asin() / PI
}

/// Continuous density and the atom at zero of `MarchenkoPastur(kappa, sigma)`.
pub fn mp_density(kappa: f64, sigma: f64, x: f64) -> (f64, f64) {
    let (a, b) = mp_edges(kappa, sigma);
    let atom = (1.0 - 1.0 / kappa).max(0.0);
    let dens = if x > a && x < b && x > 0.0 {
        ((b - x) * (x - a)).sqrt() / (2.0 * PI * sigma * sigma * kappa * x)
    } else {
        0.0
    };
    (dens, atom)
}

pub fn mp_edges(kappa: f64, sigma: f64) -> (f64, f64) {
    let s2 = sigma * sigma;
    let r = kappa.sqrt();
    (s2 * (1.0 - r).powi(2), s2 * (1.0 + r).powi(2))
}

fn positive(name: &str, x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("{name} must be positive and finite, got {x}")))
    }
}

impl SpectralLaw {
    /// The law `scale · MP(κ, σ)` followed by a Wishart matrix
    /// `X Xᵀ / (m √κ)` with `X` of size `κm × m`.
    pub fn wishart_limit(kappa: f64, sigma: f64) -> Self {
        Self::ShiftedMarchenkoPastur { kappa, sigma, scale: 1.0 / kappa.sqrt(), shift: 0.0 }
    }

    /// Checks parameters and, for gridded densities, that total mass is one.
    pub fn validate(&self) -> Result<()> {
        match self {
            Self::Semicircle { sigma } => positive("sigma", *sigma),
            Self::MarchenkoPastur { kappa, sigma } => {
                positive("kappa", *kappa)?;
                positive("sigma", *sigma)
            }
            Self::ShiftedMarchenkoPastur { kappa, sigma, scale, shift } => {
                positive("kappa", *kappa)?;
                positive("sigma", *sigma)?;
                if *scale == 0.0 || !scale.is_finite() || !shift.is_finite() {
                    return Err(Error::InvalidInput("scale must be nonzero and finite".into()));
                }
                Ok(())
            }
            Self::PointMass { x0 } => {
                if x0.is_finite() {
                    Ok(())
                } else {
                    Err(Error::InvalidInput("point mass location must be finite".into()))
                }
            }
            Self::GriddedDensity { grid, weights, atoms } => {
                if grid.len() < 2 || grid.len() != weights.len() {
                    return Err(Error::InvalidInput(
                        "gridded density needs at least two nodes and one weight per node".into(),
                    ));
                }
                if grid.windows(2).any(|w| !(w[0] < w[1])) || grid.iter().any(|x| !x.is_finite()) {
                    return Err(Error::InvalidInput("grid must be finite and strictly ascending".into()));
                }
                if weights.iter().chain(atoms.iter().map(|a| &a.1)).any(|w| !(*w >= 0.0) || !w.is_finite()) {
                    return Err(Error::InvalidInput("weights must be nonnegative".into()));
                }
                let mass = self.total_mass()?;
                if (mass - 1.0).abs() > MASS_TOL {
                    return Err(Error::InvalidInput(format!("total mass {mass} differs from 1")));
                }
                Ok(())
            }
            Self::Empirical { points } => {
                if points.is_empty() || points.iter().any(|x| !x.is_finite()) {
                    return Err(Error::InvalidInput("empirical law needs finite points".into()));
                }
                Ok(())
            }
        }
    }

    /// Interval carrying the continuous part, if any.
    pub fn continuous_support(&self) -> Option<(f64, f64)> {
        match self {
            Self::Semicircle { sigma } => Some((-2.0 * sigma, 2.0 * sigma)),
            Self::MarchenkoPastur { kappa, sigma } => Some(mp_edges(*kappa, *sigma)),
            Self::ShiftedMarchenkoPastur { kappa, sigma, scale, shift } => {
                let (a, b) = mp_edges(*kappa, *sigma);
                let (x, y) = (scale * a + shift, scale * b + shift);
                Some((x.min(y), x.max(y)))
            }
            Self::GriddedDensity { grid, .. } => Some((grid[0], grid[grid.len() - 1])),
            Self::PointMass { .. } | Self::Empirical { .. } => None,
        }
    }

    /// Point masses `(location, mass)`; empirical points count as atoms.
    pub fn atoms(&self) -> Vec<(f64, f64)> {
        match self {
            Self::MarchenkoPastur { kappa, .. } => {
                let w = (1.0 - 1.0 / kappa).max(0.0);
                if w > 0.0 { vec![(0.0, w)] } else { vec![] }
            }
            Self::ShiftedMarchenkoPastur { kappa, shift, .. } => {
                let w = (1.0 - 1.0 / kappa).max(0.0);
                if w > 0.0 { vec![(*shift, w)] } else { vec![] }
            }
            Self::PointMass { x0 } => vec![(*x0, 1.0)],
            Self::GriddedDensity { atoms, .. } => atoms.clone(),
            Self::Empirical { points } => {
                let w = 1.0 / points.len() as f64;
                points.iter().map(|&x| (x, w)).collect()
            }
            Self::Semicircle { .. } => vec![],
        }
    }

    /// Smallest interval containing the support.
    pub fn support(&self) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        if let Some((a, b)) = self.continuous_support() {
            lo = a;
            hi = b;
        }
        for (x, _) in self.atoms() {
            lo = lo.min(x);
            hi = hi.max(x);
        }
        (lo, hi)
    }

    /// Density of the continuous part.
    pub fn density(&self, x: f64) -> f64 {
        match self {
            Self::Semicircle { sigma } => semicircle_density(*sigma, x),
            Self::MarchenkoPastur { kappa, sigma } => mp_density(*kappa, *sigma, x).0,
            Self::ShiftedMarchenkoPastur { kappa, sigma, scale, shift } => {
                mp_density(*kappa, *sigma, (x - shift) / scale).0 / scale.abs()
            }
            Self::GriddedDensity { grid, weights, .. } => {
                if x < grid[0] || x > grid[grid.len() - 1] {
                    return 0.0;
                }
                let k = grid.partition_point(|&g| g <= x).clamp(1, grid.len() - 1);
                let (x0, x1) = (grid[k - 1], grid[k]);
                let t = (x - x0) / (x1 - x0);
                weights[k - 1] * (1.0 - t) + weights[k] * t
            }
            Self::PointMass { .. } | Self::Empirical { .. } => 0.0,
        }
    }

    /// `∫_a^b f ρ` for the continuous part. Laws with square-root (or, for
    /// `κ = 1`, inverse square-root) edges are integrated in the angle `θ`
    /// with `x = lo + (hi - lo)(1 - cos θ)/2`, which makes the integrand smooth.
    fn integrate_continuous(&self, f: &impl Fn(f64) -> f64, a: f64, b: f64, breaks: &[f64], tol: f64) -> Result<f64> {
        let Some((lo, hi)) = self.continuous_support() else {
            return Ok(0.0);
        };
        let (a, b) = (a.max(lo), b.min(hi));
        if b <= a {
            return Ok(0.0);
        }
        if matches!(self, Self::GriddedDensity { .. }) {
            return Ok(integrate(|x| f(x) * self.density(x), a, b, breaks, tol, DEFAULT_MAX_PANELS)?.value);
        }
        let half = 0.5 * (hi - lo);
        let theta = |x: f64| (1.0 - (x - lo) / half).clamp(-1.0, 1.0).acos();
        let tb: Vec<f64> = breaks.iter().map(|&x| theta(x)).collect();
        let g = |t: f64| {
            let x = lo + half * (1.0 - t.cos());
            f(x) * self.density(x) * half * t.sin()
        };
        Ok(integrate(g, theta(a), theta(b), &tb, tol, DEFAULT_MAX_PANELS)?.value)
    }

    fn kinks(&self) -> Vec<f64> {
        match self {
            Self::GriddedDensity { grid, .. } => grid.clone(),
            _ => vec![],
        }
    }

    /// `∫ f dν`, continuous part by adaptive quadrature (split at `breaks` and
    /// at the law's own kinks) plus the atoms.
    pub fn expect(&self, f: impl Fn(f64) -> f64, breaks: &[f64]) -> Result<f64> {
        let mut total = 0.0;
        if let Some((lo, hi)) = self.continuous_support() {
            let mut b = self.kinks();
            b.extend_from_slice(breaks);
            total += self.integrate_continuous(&f, lo, hi, &b, DEFAULT_ABS_TOL)?;
        }
        let atoms: Vec<f64> = self.atoms().iter().map(|&(x, w)| w * f(x)).collect();
        Ok(total + crate::stats::pairwise_sum(&atoms))
    }

    pub fn total_mass(&self) -> Result<f64> {
        self.expect(|_| 1.0, &[])
    }

    pub fn mean(&self) -> Result<f64> {
        match self {
            Self::Semicircle { .. } => Ok(0.0),
            Self::MarchenkoPastur { sigma, .. } => Ok(sigma * sigma),
            Self::ShiftedMarchenkoPastur { sigma, scale, shift, .. } => Ok(scale * sigma * sigma + shift),
            Self::PointMass { x0 } => Ok(*x0),
            Self::Empirical { points } => Ok(crate::stats::mean(points)),
            Self::GriddedDensity { .. } => self.expect(|x| x, &[]),
        }
    }

    /// `∫ |t| dν(t)`.
    pub fn abs_mean(&self) -> Result<f64> {
        match self {
            Self::Semicircle { sigma } => Ok(8.0 * sigma / (3.0 * PI)),
            _ => self.expect(f64::abs, &[0.0]),
        }
    }

    /// `ν((-∞, x])`.
    pub fn cdf(&self, x: f64) -> Result<f64> {
        Ok(self.cdf_many(&[x])?[0])
    }

    /// CDF at many points; the continuous part is accumulated panel by panel
    /// between consecutive sorted query points.
    pub fn cdf_many(&self, xs: &[f64]) -> Result<Vec<f64>> {
        if let Self::Semicircle { sigma } = self {
            return Ok(xs.iter().map(|&x| semicircle_cdf(*sigma, x)).collect());
        }
        let mut order: Vec<usize> = (0..xs.len()).collect();
        order.sort_by(|&i, &j| xs[i].total_cmp(&xs[j]));
        let mut atoms = self.atoms();
        atoms.sort_by(|a, b| a.0.total_cmp(&b.0));
        let cont = self.continuous_support();
        let kinks = self.kinks();
        let mut out = vec![0.0; xs.len()];
        let mut acc = 0.0;
        let mut prev = cont.map_or(0.0, |c| c.0);
        let mut ai = 0;
        let mut atom_mass = 0.0;
        for &i in &order {
            let x = xs[i];
            if let Some((lo, hi)) = cont {
                let upto = x.clamp(lo, hi);
                if upto > prev {
                    // per-segment tolerance keeps the accumulated error bounded
                    let tol = DEFAULT_ABS_TOL / (1.0 + xs.len() as f64).sqrt();
                    acc += self.integrate_continuous(&|_| 1.0, prev, upto, &kinks, tol)?;
                    prev = upto;
                }
            }
            while ai < atoms.len() && atoms[ai].0 <= x {
                atom_mass += atoms[ai].1;
                ai += 1;
            }
            out[i] = (acc + atom_mass).min(1.0);
        }
        Ok(out)
    }

    /// Sampler for iid draws; builds an inverse-CDF table where no direct
    /// method exists.
    pub fn sampler(&self) -> Result<LawSampler> {
        self.validate()?;
        Ok(match self {
            Self::Semicircle { sigma } => LawSampler::Semicircle(*sigma),
            Self::PointMass { x0 } => LawSampler::Point(*x0),
            Self::Empirical { points } => LawSampler::Empirical(points.clone()),
            _ => LawSampler::table(self)?,
        })
    }
}

/// Draws from a [`SpectralLaw`].
#[derive(Clone, Debug)]
pub enum LawSampler {
    /// Projection of a uniform point in the disc of radius `2σ`.
    Semicircle(f64),
    Point(f64),
    Empirical(Vec<f64>),
    /// Atoms first (by cumulative mass), then linear interpolation of the
    /// continuous CDF tabulated on a fine grid.
    Table { atoms: Vec<(f64, f64)>, xs: Vec<f64>, cdf: Vec<f64> },
}

const TABLE_SIZE: usize = 8192;

impl LawSampler {
    fn table(law: &SpectralLaw) -> Result<Self> {
        let atoms = law.atoms();
        let (xs, cdf) = match law.continuous_support() {
            Some((lo, hi)) => {
                // cosine spacing concentrates nodes at the square-root edges
                let xs: Vec<f64> = (0..=TABLE_SIZE)
                    .map(|k| {
                        let t = k as f64 / TABLE_SIZE as f64;
                        lo + (hi - lo) * 0.5 * (1.0 - (PI * t).cos())
                    })
                    .collect();
                let mut running = Vec::with_capacity(xs.len());
                let mut acc = 0.0;
                running.push(0.0);
                let kinks = law.kinks();
                for w in xs.windows(2) {
                    acc += law.integrate_continuous(&|_| 1.0, w[0], w[1], &kinks, 1e-10)?;
                    running.push(acc);
                }
                let total = acc;
                if total > 0.0 {
                    for c in &mut running {
                        *c /= total;
                    }
                }
                (xs, running)
            }
            None => (vec![], vec![]),
        };
        Ok(LawSampler::Table { atoms, xs, cdf })
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self {
            Self::Semicircle(sigma) => {
                let r = 2.0 * sigma * rng.random::<f64>().sqrt();
                let t = 2.0 * PI * rng.random::<f64>();
                r * t.cos()
            }
            Self::Point(x) => *x,
            Self::Empirical(points) => points[rng.random_range(0..points.len())],
            Self::Table { atoms, xs, cdf } => {
                let mut p: f64 = rng.random();
                for &(x, w) in atoms {
                    if p < w {
                        return x;
                    }
                    p -= w;
                }
                if xs.is_empty() {
                    return atoms.last().map_or(0.0, |a| a.0);
                }
                let atom_mass: f64 = atoms.iter().map(|a| a.1).sum();
                let q = (p / (1.0 - atom_mass).max(f64::MIN_POSITIVE)).clamp(0.0, 1.0);
                let k = cdf.partition_point(|&c| c < q).clamp(1, xs.len() - 1);
                let (c0, c1) = (cdf[k - 1], cdf[k]);
                let t = if c1 > c0 { (q - c0) / (c1 - c0) } else { 0.5 };
                xs[k - 1] + t * (xs[k] - xs[k - 1])
            }
        }
    }
}
