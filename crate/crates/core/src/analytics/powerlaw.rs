use crate::error::{Error, Result};
use crate::num::Scalar;

/// Fewest tail points accepted by [`fit_power_law`].
pub const MIN_TAIL_POINTS: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerLawFit<F> {
    /// Maximum-likelihood exponent.
    pub exponent: F,
    pub stderr: F,
    pub xmin: F,
    pub tail_points: usize,
    /// `1 - slope` of a least-squares line through the log-log CCDF of the
    /// tail, when at least two distinct tail values exist.
    pub loglog_exponent: Option<F>,
}

/// Lower empirical quantile: the element at index `floor(q * (n - 1))` of
/// the sorted values.
pub fn empirical_quantile<F: Scalar>(sorted: &[F], q: f64) -> Option<F> {
    if sorted.is_empty() {
        return None;
    }
    let idx = ((q.clamp(0.0, 1.0)) * (sorted.len() - 1) as f64).floor() as usize;
    Some(sorted[idx])
}

/// Hill estimator with `xmin` at the `quantile` of the sizes.
pub fn fit_power_law<F: Scalar>(sizes: &[F], quantile: f64) -> Result<PowerLawFit<F>> {
    if sizes.iter().any(|x| !x.is_finite() || *x <= F::zero()) {
        return Err(Error::InvalidArgument("power-law sizes must be positive and finite".into()));
    }
    let mut sorted = sizes.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    let xmin = empirical_quantile(&sorted, quantile).ok_or(Error::TooFewTailPoints {
        min: MIN_TAIL_POINTS,
        got: 0,
    })?;
    fit_power_law_with_xmin(&sorted, xmin)
}

/// Hill estimator over the values `>= xmin`.
pub fn fit_power_law_with_xmin<F: Scalar>(sizes: &[F], xmin: F) -> Result<PowerLawFit<F>> {
    if !(xmin > F::zero()) || !xmin.is_finite() {
        return Err(Error::InvalidArgument("xmin must be positive".into()));
    }
    let mut tail: Vec<F> = sizes.iter().copied().filter(|&x| x >= xmin).collect();
    let n = tail.len();
    if n < MIN_TAIL_POINTS {
        return Err(Error::TooFewTailPoints {
            min: MIN_TAIL_POINTS,
            got: n,
        });
    }
    let log_sum = tail.iter().fold(F::zero(), |acc, &x| acc + (x / xmin).ln());
    if !(log_sum > F::zero()) {
        return Err(Error::DegenerateTail);
    }
    let nf = F::from_usize_lossy(n);
    let exponent = F::one() + nf / log_sum;
    let stderr = (exponent - F::one()) / nf.sqrt();
    tail.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    Ok(PowerLawFit {
        exponent,
        stderr,
        xmin,
        tail_points: n,
        loglog_exponent: loglog_slope(&tail).map(|s| F::one() - s),
    })
}

/// Least-squares slope of `ln P(X >= x)` against `ln x` over the distinct
/// values of a sorted sample.
pub fn loglog_slope<F: Scalar>(sorted: &[F]) -> Option<F> {
    let n = sorted.len();
    let mut points: Vec<(f64, f64)> = Vec::new();
    let mut i = 0;
    while i < n {
        let x = sorted[i];
        points.push((x.to_f64_lossy().ln(), ((n - i) as f64 / n as f64).ln()));
        while i < n && sorted[i] == x {
            i += 1;
        }
    }
    if points.len() < 2 {
        return None;
    }
    let m = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / m;
    let my = points.iter().map(|p| p.1).sum::<f64>() / m;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    (sxx > 0.0).then(|| F::from_f64_lossy(sxy / sxx))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn pareto(seed: u64, n: usize, alpha: f64, xmin: f64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n)
            .map(|_| {
                let u: f64 = rng.random();
                xmin * (1.0 - u).powf(-1.0 / (alpha - 1.0))
            })
            .collect()
    }

    #[test]
    fn all_equal_is_degenerate() {
        let sizes = vec![5.0f64; 50];
        let err = fit_power_law(&sizes, 0.5).unwrap_err();
        assert!(err.to_string().contains("degenerate tail"));
    }

    #[test]
    fn too_few_points_names_minimum() {
        let err = fit_power_law(&[1.0f64, 2.0, 3.0], 0.0).unwrap_err();
        assert!(matches!(err, Error::TooFewTailPoints { min: 10, got: 3 }));
        assert!(err.to_string().contains("10"));
        assert!(fit_power_law::<f64>(&[], 0.5).is_err());
        assert!(fit_power_law(&[0.0f64; 20], 0.5).is_err());
    }

    #[test]
    fn hand_computed() {
        // ln(x/1) sums to 10 ln 2 over ten points at 2 plus ten at 1.
        let mut sizes = vec![1.0f64; 10];
        sizes.extend([2.0; 10]);
        let fit = fit_power_law(&sizes, 0.0).unwrap();
        let expected = 1.0 + 20.0 / (10.0 * 2f64.ln());
        assert!((fit.exponent - expected).abs() < 1e-12);
        assert!((fit.stderr - (expected - 1.0) / 20f64.sqrt()).abs() < 1e-12);
        assert_eq!(fit.tail_points, 20);
        // CCDF points (0, 0) and (ln 2, ln 0.5): slope -1.
        assert!((fit.loglog_exponent.unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn scale_invariance() {
        let sizes = pareto(7, 500, 2.08, 1.0);
        let scaled: Vec<f64> = sizes.iter().map(|x| x * 10.0).collect();
        let a = fit_power_law(&sizes, 0.5).unwrap();
        let b = fit_power_law(&scaled, 0.5).unwrap();
        assert!((a.xmin * 10.0 - b.xmin).abs() < 1e-9);
        assert!((a.exponent - b.exponent).abs() < 1e-9);
    }

    #[test]
    fn f32_fit() {
        let sizes: Vec<f32> = pareto(3, 3700, 2.08, 1.0).into_iter().map(|x| x as f32).collect();
        let fit = fit_power_law(&sizes, 0.5).unwrap();
        assert!((fit.exponent - 2.08).abs() < 0.15, "{}", fit.exponent);
    }

    #[test]
    fn stderr_interval_coverage() {
        let covered = (0..100u64)
            .filter(|&seed| {
                let fit = fit_power_law(&pareto(1000 + seed, 3700, 2.08, 1.0), 0.5).unwrap();
                (fit.exponent - 2.08).abs() <= 2.0 * fit.stderr
            })
            .count();
        assert!(covered >= 90, "covered {covered}");
    }
}
