//! Seeded random-matrix samplers.
//!
//! Randomness comes from ChaCha8 (`rand_chacha` 0.9.0) keyed by
//! `seed_from_u64(seed)` with the 64-bit stream id selected through
//! `set_stream`, and normal variates from `rand_distr` 0.5.1's
//! `StandardNormal` (ziggurat). Both crates are pinned to exact versions so
//! that a `(seed, stream_id)` pair reproduces the same draws bit for bit.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::bodies::MatrixTuple;
use crate::error::{Error, Result};
use crate::freeprob::SpectralLaw;
use crate::spectral::{eigenvalues, jordan_wielandt_lift, ComplexMatrix, HermitianMatrix};

pub type Rng64 = ChaCha8Rng;

/// Identifies one independent random stream.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RngStream {
    pub seed: u64,
    pub stream_id: u64,
}

impl RngStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        Self { seed, stream_id }
    }

    pub fn rng(&self) -> Rng64 {
        let mut r = ChaCha8Rng::seed_from_u64(self.seed);
        r.set_stream(self.stream_id);
        r
    }
}

fn normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    StandardNormal.sample(rng)
}

/// Real symmetric GOE matrix: off-diagonal `N(0, σ²)`, diagonal `N(0, 2σ²)`.
pub fn sample_goe<R: Rng + ?Sized>(m: usize, sigma: f64, rng: &mut R) -> HermitianMatrix {
    let sd = 2f64.sqrt() * sigma;
    HermitianMatrix::from_upper_fn(m, |j, k| {
        let s = if j == k { sd } else { sigma };
        Complex64::new(s * normal(rng), 0.0)
    })
}

/// Lower Cholesky-type factor `L` with `L Lᵀ = Σ` for a symmetric PSD `Σ`,
/// via the symmetric eigendecomposition (robust to singular `Σ`).
fn psd_factor(cov: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
    let d = cov.len();
    if cov.iter().any(|r| r.len() != d) {
        return Err(Error::InvalidInput("covariance must be square".into()));
    }
    let flat: Vec<f64> = cov.iter().flatten().copied().collect();
    let s = HermitianMatrix::from_real(d, flat)?;
    let e = crate::spectral::eig_hermitian(&s)?;
    let scale = 1.0f64.max(s.max_abs_entry());
    let lmin = e.eigenvalues[0];
    if lmin < -1e-10 * scale {
        return Err(Error::NotPsd(lmin));
    }
    Ok((0..d)
        .map(|i| {
            (0..d)
                .map(|k| e.eigenvectors.get(i, k).re * e.eigenvalues[k].max(0.0).sqrt())
                .collect()
        })
        .collect())
}

/// Tuple whose entry vectors `((A_1)_{jk}, …, (A_d)_{jk})` are iid `N(0, Σ)`
/// above the diagonal and `N(0, 2Σ)` on it.
pub fn sample_correlated_wigner_tuple<R: Rng + ?Sized>(
    m: usize,
    cov: &[Vec<f64>],
    rng: &mut R,
) -> Result<MatrixTuple> {
    let l = psd_factor(cov)?;
    Ok(correlated_wigner_with_factor(m, &l, rng))
}

fn correlated_wigner_with_factor<R: Rng + ?Sized>(m: usize, l: &[Vec<f64>], rng: &mut R) -> MatrixTuple {
    let d = l.len();
    let mut re = vec![vec![0.0; m * m]; d];
    let mut g = vec![0.0; d];
    for j in 0..m {
        for k in j..m {
            let s = if j == k { 2f64.sqrt() } else { 1.0 };
            for x in g.iter_mut() {
                *x = normal(rng);
            }
            for i in 0..d {
                let v = s * l[i].iter().zip(&g).map(|(a, b)| a * b).sum::<f64>();
                re[i][j * m + k] = v;
                re[i][k * m + j] = v;
            }
        }
    }
    let mats = re.into_iter().map(|r| HermitianMatrix::from_parts_unchecked(m, r, None)).collect();
    MatrixTuple::new(mats).expect("equal sizes")
}

/// Uniform random permutation (Fisher–Yates) as an index map `i ↦ p[i]`.
pub fn sample_permutation<R: Rng + ?Sized>(m: usize, rng: &mut R) -> Vec<usize> {
    let mut p: Vec<usize> = (0..m).collect();
    for i in (1..m).rev() {
        let j = rng.random_range(0..=i);
        p.swap(i, j);
    }
    p
}

/// Jordan–Wielandt lift of a uniformly random `m × m` permutation matrix.
pub fn sample_permutation_jw<R: Rng + ?Sized>(m: usize, rng: &mut R) -> HermitianMatrix {
    let p = sample_permutation(m, rng);
    let b = ComplexMatrix::from_real_fn(m, m, |i, j| if p[i] == j { 1.0 } else { 0.0 });
    jordan_wielandt_lift(&b).expect("square")
}

/// Checks that `κ m` is a positive integer and returns it.
pub fn wishart_size(m: usize, kappa: f64) -> Result<usize> {
    let n = kappa * m as f64;
    let r = n.round();
    if !(kappa > 0.0) || r < 1.0 || (n - r).abs() > 1e-9 * n.max(1.0) {
        return Err(Error::NonIntegerSize(n));
    }
    Ok(r as usize)
}

/// `Y = X Xᵀ / (m √κ)` with `X` a `κm × m` matrix of iid `N(0, σ²)` entries.
pub fn sample_wishart<R: Rng + ?Sized>(m: usize, kappa: f64, sigma: f64, rng: &mut R) -> Result<HermitianMatrix> {
    let n = wishart_size(m, kappa)?;
    let x = faer::Mat::<f64>::from_fn(n, m, |_, _| sigma * normal(rng));
    let y = &x * x.transpose();
    let c = 1.0 / (m as f64 * kappa.sqrt());
    let mut re = vec![0.0; n * n];
    for i in 0..n {
        for j in i..n {
            let v = c * 0.5 * (y[(i, j)] + y[(j, i)]);
            re[i * n + j] = v;
            re[j * n + i] = v;
        }
    }
    Ok(HermitianMatrix::from_parts_unchecked(n, re, None))
}

/// Haar-distributed unitary: QR of a standard complex Gaussian matrix with
/// the phases of `diag(R)` moved into `Q`.
pub fn sample_haar_unitary<R: Rng + ?Sized>(m: usize, rng: &mut R) -> ComplexMatrix {
    let s = 0.5f64.sqrt();
    let z = faer::Mat::<Complex64>::from_fn(m, m, |_, _| Complex64::new(s * normal(rng), s * normal(rng)));
    let qr = z.qr();
    let q = qr.compute_Q();
    let r = qr.R();
    let phases: Vec<Complex64> = (0..m)
        .map(|k| {
            let d = r[(k, k)];
            let a = d.norm();
            if a > 0.0 { d / a } else { Complex64::new(1.0, 0.0) }
        })
        .collect();
    ComplexMatrix::from_fn(m, m, |i, j| q[(i, j)] * phases[j])
}

/// Diagonal matrix with iid entries from `law`.
pub fn sample_diagonal_from_law<R: Rng + ?Sized>(m: usize, law: &SpectralLaw, rng: &mut R) -> Result<HermitianMatrix> {
    let s = law.sampler()?;
    let diag: Vec<f64> = (0..m).map(|_| s.sample(rng)).collect();
    Ok(HermitianMatrix::from_diagonal(&diag))
}

/// `A_i = U_i D_i U_i*` with independent Haar unitaries and `D_i` diagonal with
/// iid draws from `laws[i]`. The spectrum of `A_i` is the diagonal of `D_i`.
pub fn liberated_tuple<R: Rng + ?Sized>(m: usize, laws: &[SpectralLaw], rng: &mut R) -> Result<MatrixTuple> {
    let samplers = laws.iter().map(SpectralLaw::sampler).collect::<Result<Vec<_>>>()?;
    liberated_with_samplers(m, &samplers, rng)
}

fn liberated_with_samplers<R: Rng + ?Sized>(
    m: usize,
    samplers: &[crate::freeprob::LawSampler],
    rng: &mut R,
) -> Result<MatrixTuple> {
    let mats = samplers
        .iter()
        .map(|s| {
            let diag: Vec<f64> = (0..m).map(|_| s.sample(rng)).collect();
            let u = sample_haar_unitary(m, rng);
            Ok(u.scale_columns(&diag).matmul(&u.adjoint())?.hermitian_part())
        })
        .collect::<Result<Vec<_>>>()?;
    MatrixTuple::new(mats)
}

/// A random-matrix ensemble producing `d`-tuples. Serialized with a
/// `"variant"` discriminator.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case")]
pub enum EnsembleSpec {
    /// Independent GOE matrices.
    Goe { m: usize, d: usize, sigma: f64 },
    /// Correlated Wigner tuple; `d` is the size of `cov`.
    CorrelatedWigner { m: usize, cov: Vec<Vec<f64>> },
    /// Independent Jordan–Wielandt lifts of uniform permutations (size `2m`).
    PermutationJw { m: usize, d: usize },
    /// Independent Wishart matrices (size `κm`).
    Wishart { m: usize, d: usize, kappa: f64, sigma: f64 },
    /// Independent diagonal matrices with iid law-distributed entries.
    DiagonalFromLaw { m: usize, laws: Vec<SpectralLaw> },
    /// Haar-conjugated diagonal matrices (asymptotically free).
    Liberated { m: usize, laws: Vec<SpectralLaw> },
    /// Every draw is this tuple.
    Deterministic { tuple: MatrixTuple },
}

impl EnsembleSpec {
    pub fn d(&self) -> usize {
        match self {
            Self::Goe { d, .. } | Self::PermutationJw { d, .. } | Self::Wishart { d, .. } => *d,
            Self::CorrelatedWigner { cov, .. } => cov.len(),
            Self::DiagonalFromLaw { laws, .. } | Self::Liberated { laws, .. } => laws.len(),
            Self::Deterministic { tuple } => tuple.d(),
        }
    }

    /// Size of the generated matrices.
    pub fn matrix_dim(&self) -> Result<usize> {
        Ok(match self {
            Self::Goe { m, .. }
            | Self::CorrelatedWigner { m, .. }
            | Self::DiagonalFromLaw { m, .. }
            | Self::Liberated { m, .. } => *m,
            Self::PermutationJw { m, .. } => 2 * m,
            Self::Wishart { m, kappa, .. } => wishart_size(*m, *kappa)?,
            Self::Deterministic { tuple } => tuple.m(),
        })
    }

    pub fn is_deterministic(&self) -> bool {
        matches!(self, Self::Deterministic { .. })
    }

    pub fn validate(&self) -> Result<()> {
        let pos = |name: &str, x: f64| {
            if x > 0.0 && x.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidInput(format!("{name} must be positive, got {x}")))
            }
        };
        let size = |m: usize, d: usize| {
            if m == 0 || d == 0 {
                Err(Error::InvalidInput("m and d must be at least 1".into()))
            } else {
                Ok(())
            }
        };
        match self {
            Self::Goe { m, d, sigma } => {
                size(*m, *d)?;
                pos("sigma", *sigma)
            }
            Self::CorrelatedWigner { m, cov } => {
                size(*m, cov.len())?;
                psd_factor(cov).map(|_| ())
            }
            Self::PermutationJw { m, d } => size(*m, *d),
            Self::Wishart { m, d, kappa, sigma } => {
                size(*m, *d)?;
                pos("sigma", *sigma)?;
                wishart_size(*m, *kappa).map(|_| ())
            }
            Self::DiagonalFromLaw { m, laws } | Self::Liberated { m, laws } => {
                size(*m, laws.len())?;
                laws.iter().try_for_each(SpectralLaw::validate)
            }
            Self::Deterministic { .. } => Ok(()),
        }
    }

    /// Precomputes per-spec state (covariance factors, law samplers).
    pub fn prepare(&self) -> Result<PreparedEnsemble> {
        self.validate()?;
        let state = match self {
            Self::CorrelatedWigner { cov, .. } => Prepared::Factor(psd_factor(cov)?),
            Self::DiagonalFromLaw { laws, .. } | Self::Liberated { laws, .. } => {
                Prepared::Samplers(laws.iter().map(SpectralLaw::sampler).collect::<Result<_>>()?)
            }
            _ => Prepared::None,
        };
        Ok(PreparedEnsemble { spec: self.clone(), state })
    }
}

#[derive(Clone, Debug)]
enum Prepared {
    None,
    Factor(Vec<Vec<f64>>),
    Samplers(Vec<crate::freeprob::LawSampler>),
}

/// An [`EnsembleSpec`] with its precomputed sampling state.
#[derive(Clone, Debug)]
pub struct PreparedEnsemble {
    spec: EnsembleSpec,
    state: Prepared,
}

impl PreparedEnsemble {
    pub fn spec(&self) -> &EnsembleSpec {
        &self.spec
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<MatrixTuple> {
        match (&self.spec, &self.state) {
            (EnsembleSpec::Goe { m, d, sigma }, _) => {
                MatrixTuple::new((0..*d).map(|_| sample_goe(*m, *sigma, rng)).collect())
            }
            (EnsembleSpec::CorrelatedWigner { m, .. }, Prepared::Factor(l)) => {
                Ok(correlated_wigner_with_factor(*m, l, rng))
            }
            (EnsembleSpec::PermutationJw { m, d }, _) => {
                MatrixTuple::new((0..*d).map(|_| sample_permutation_jw(*m, rng)).collect())
            }
            (EnsembleSpec::Wishart { m, d, kappa, sigma }, _) => {
                MatrixTuple::new((0..*d).map(|_| sample_wishart(*m, *kappa, *sigma, rng)).collect::<Result<_>>()?)
            }
            (EnsembleSpec::DiagonalFromLaw { m, .. }, Prepared::Samplers(s)) => MatrixTuple::new(
                s.iter()
                    .map(|s| HermitianMatrix::from_diagonal(&(0..*m).map(|_| s.sample(rng)).collect::<Vec<_>>()))
                    .collect(),
            ),
            (EnsembleSpec::Liberated { m, .. }, Prepared::Samplers(s)) => liberated_with_samplers(*m, s, rng),
            (EnsembleSpec::Deterministic { tuple }, _) => Ok(tuple.clone()),
            _ => unreachable!("prepare() pairs every spec with its state"),
        }
    }
}

/// Smallest eigenvalue, used by PSD checks in tests and diagnostics.
pub fn min_eigenvalue(a: &HermitianMatrix) -> Result<f64> {
    Ok(eigenvalues(a)?[0])
}
