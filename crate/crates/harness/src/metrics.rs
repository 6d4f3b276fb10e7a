//! Accuracy metrics over independent replications.

use statrs::distribution::{ContinuousCDF, Normal};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MetricsError {
    #[error("no estimates")]
    Empty,
    #[error("true value is zero; relative metrics are undefined")]
    ZeroTruth,
    #[error("confidence level {0} is outside (0, 1)")]
    InvalidLevel(f64),
}

pub fn mean(xs: &[f64]) -> Result<f64, MetricsError> {
    if xs.is_empty() {
        return Err(MetricsError::Empty);
    }
    Ok(xs.iter().sum::<f64>() / xs.len() as f64)
}

/// Unbiased sample variance; zero for a single estimate.
pub fn sample_variance(xs: &[f64]) -> Result<f64, MetricsError> {
    let m = mean(xs)?;
    if xs.len() < 2 {
        return Ok(0.0);
    }
    Ok(xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (xs.len() - 1) as f64)
}

/// `(mean(estimates) − truth) / truth`.
pub fn relative_error(estimates: &[f64], truth: f64) -> Result<f64, MetricsError> {
    if truth == 0.0 {
        return Err(MetricsError::ZeroTruth);
    }
    Ok((mean(estimates)? - truth) / truth)
}

/// `sqrt(mean((estimate − truth)²)) / truth`.
pub fn nrmse(estimates: &[f64], truth: f64) -> Result<f64, MetricsError> {
    if truth == 0.0 {
        return Err(MetricsError::ZeroTruth);
    }
    let sq: Vec<f64> = estimates.iter().map(|x| (x - truth) * (x - truth)).collect();
    Ok(mean(&sq)?.sqrt() / truth.abs())
}

/// Two-sided normal-approximation interval for the mean:
/// `mean ± z·s/√R` with `z` the `(1 + level)/2` standard normal quantile.
pub fn confidence_interval(estimates: &[f64], level: f64) -> Result<(f64, f64), MetricsError> {
    if !(level > 0.0 && level < 1.0) {
        return Err(MetricsError::InvalidLevel(level));
    }
    let m = mean(estimates)?;
    let half = z_quantile(level) * (sample_variance(estimates)? / estimates.len() as f64).sqrt();
    Ok((m - half, m + half))
}

fn z_quantile(level: f64) -> f64 {
    Normal::standard().inverse_cdf(0.5 + level / 2.0)
}
