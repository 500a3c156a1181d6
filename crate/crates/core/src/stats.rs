//! Order-fixed summation and simple sample statistics.
//!
//! All Monte Carlo accumulation goes through [`pairwise_sum`], whose
//! recursion tree depends only on the slice length. Results are therefore
//! independent of how the per-draw values were produced in parallel.

const BLOCK: usize = 32;

pub fn pairwise_sum(xs: &[f64]) -> f64 {
    pairwise_sum_by(xs, |x| x)
}

pub fn pairwise_sum_by(xs: &[f64], f: impl Fn(f64) -> f64 + Copy) -> f64 {
    if xs.len() <= BLOCK {
        return xs.iter().map(|&x| f(x)).sum();
    }
    let mid = xs.len() / 2;
    pairwise_sum_by(&xs[..mid], f) + pairwise_sum_by(&xs[mid..], f)
}

pub fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return f64::NAN;
    }
    pairwise_sum(xs) / xs.len() as f64
}

/// Sample mean and standard error `s / sqrt(n)` with the unbiased variance.
/// The standard error is zero for a single sample, and a constant sample
/// returns its value exactly.
pub fn mean_and_stderr(xs: &[f64]) -> (f64, f64) {
    let n = xs.len();
    if n > 0 && xs.iter().all(|&x| x == xs[0]) {
        return (xs[0], 0.0);
    }
    let mu = mean(xs);
    if n < 2 {
        return (mu, 0.0);
    }
    let var = pairwise_sum_by(xs, |x| (x - mu) * (x - mu)) / (n - 1) as f64;
    (mu, (var / n as f64).sqrt())
}

/// Least-squares slope of `y` against `x`.
pub fn ols_slope(x: &[f64], y: &[f64]) -> f64 {
    let mx = mean(x);
    let my = mean(y);
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

/// Kolmogorov–Smirnov distance between a sample and a continuous CDF, plus
/// optional atoms handled by the caller through `cdf` being right-continuous.
pub fn ks_distance(sample: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let mut xs = sample.to_vec();
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    let mut worst: f64 = 0.0;
    let mut i = 0;
    while i < xs.len() {
        let mut j = i;
        while j + 1 < xs.len() && xs[j + 1] == xs[i] {
            j += 1;
        }
        let f = cdf(xs[i]);
        // a tie marks an atom, so the lower step is compared with F(x-)
        let f_below = if j > i { cdf(xs[i].next_down()) } else { f };
        let left = i as f64 / n;
        let right = (j + 1) as f64 / n;
        worst = worst.max((f_below - left).abs()).max((f - right).abs());
        i = j + 1;
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairwise_matches_naive() {
        let xs: Vec<f64> = (0..1000).map(|k| (k as f64).sin()).collect();
        let naive: f64 = xs.iter().sum();
        assert!((pairwise_sum(&xs) - naive).abs() < 1e-12);
    }

    #[test]
    fn stderr_of_constant_is_zero() {
        assert_eq!(mean_and_stderr(&[2.0; 10]), (2.0, 0.0));
        let (m, s) = mean_and_stderr(&[1.0, 3.0]);
        assert_eq!(m, 2.0);
        assert!((s - 1.0).abs() < 1e-15);
    }

    #[test]
    fn slope_of_line() {
        let x = [1.0, 2.0, 3.0, 4.0];
        let y: Vec<f64> = x.iter().map(|v| -0.5 * v + 3.0).collect();
        assert!((ols_slope(&x, &y) + 0.5).abs() < 1e-14);
    }

    #[test]
    fn ks_of_uniform_grid() {
        let xs: Vec<f64> = (0..100).map(|k| (k as f64 + 0.5) / 100.0).collect();
        assert!((ks_distance(&xs, |x| x.clamp(0.0, 1.0)) - 0.005).abs() < 1e-12);
    }
}
