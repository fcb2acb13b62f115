//! Least-squares power-law fits on log-log axes.

use crate::error::{Error, Result};

/// Result of fitting y = C x^slope through (x_i, y_i) in log-log coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerFit {
    pub slope: f64,
    /// ln C, the intercept of the fitted line.
    pub intercept: f64,
    pub points: usize,
}

/// Fit a power law through strictly positive samples.
///
/// At least three points are required; scaling claims read off a slope are
/// meaningless from two, and callers translate this error into an
/// inconclusive verdict rather than a pass or fail.
pub fn log_log_fit(xs: &[f64], ys: &[f64]) -> Result<PowerFit> {
    if xs.len() != ys.len() {
        return Err(Error::Check(format!(
            "fit needs paired samples, got {} x vs {} y",
            xs.len(),
            ys.len()
        )));
    }
    if xs.len() < 3 {
        return Err(Error::Check(format!(
            "fit needs at least 3 points, got {}",
            xs.len()
        )));
    }
    for (&x, &y) in xs.iter().zip(ys) {
        if !(x > 0.0 && x.is_finite() && y > 0.0 && y.is_finite()) {
            return Err(Error::Check(format!(
                "fit needs positive finite samples, got ({x}, {y})"
            )));
        }
    }
    let n = xs.len() as f64;
    let lx: Vec<f64> = xs.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|v| v.ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (a, b) in lx.iter().zip(&ly) {
        sxx += (a - mx) * (a - mx);
        sxy += (a - mx) * (b - my);
    }
    if sxx == 0.0 {
        return Err(Error::Check("fit needs at least two distinct x values".into()));
    }
    let slope = sxy / sxx;
    Ok(PowerFit {
        slope,
        intercept: my - slope * mx,
        points: xs.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_exact_power_law() {
        let xs: [f64; 4] = [2.0, 4.0, 8.0, 16.0];
        let ys: Vec<f64> = xs.iter().map(|&x| 3.0 * x.powf(-1.5)).collect();
        let fit = log_log_fit(&xs, &ys).unwrap();
        assert!((fit.slope + 1.5).abs() < 1e-12);
        assert!((fit.intercept - 3.0f64.ln()).abs() < 1e-12);
        assert_eq!(fit.points, 4);
    }

    #[test]
    fn tolerates_mild_noise() {
        let xs: [f64; 5] = [1.0, 2.0, 4.0, 8.0, 16.0];
        let bumps = [1.02, 0.97, 1.01, 0.99, 1.03];
        let ys: Vec<f64> = xs
            .iter()
            .zip(&bumps)
            .map(|(&x, b)| b * x.powf(0.75))
            .collect();
        let fit = log_log_fit(&xs, &ys).unwrap();
        assert!((fit.slope - 0.75).abs() < 0.05, "slope {}", fit.slope);
    }

    #[test]
    fn rejects_underdetermined_or_invalid_input() {
        assert!(log_log_fit(&[1.0, 2.0], &[1.0, 2.0]).is_err());
        assert!(log_log_fit(&[1.0, 2.0, 3.0], &[1.0, 2.0]).is_err());
        assert!(log_log_fit(&[1.0, 2.0, 3.0], &[1.0, -2.0, 3.0]).is_err());
        assert!(log_log_fit(&[1.0, 2.0, 3.0], &[1.0, 0.0, 3.0]).is_err());
        assert!(log_log_fit(&[2.0, 2.0, 2.0], &[1.0, 2.0, 3.0]).is_err());
    }
}
