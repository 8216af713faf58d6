//! Class weighting and correlation statistics.

use super::MetricError;

/// Inverse-frequency class weights `1 / count^gamma`.
///
/// `gamma = 1` is full inverse frequency, `gamma = 0` disables weighting,
/// values in between temper the correction. Counts must all be positive and
/// `gamma` finite and non-negative.
pub fn class_weights(
    counts: &[u64],
    gamma: f64,
) -> Result<Vec<f64>, MetricError> {
    if !gamma.is_finite() || gamma < 0.0 {
        return Err(MetricError::InvalidGamma(gamma));
    }
    counts
        .iter()
        .enumerate()
        .map(|(i, &c)| {
            if c == 0 {
                Err(MetricError::ZeroCount(i))
            } else {
                Ok(1.0 / (c as f64).powf(gamma))
            }
        })
        .collect()
}

/// Pearson correlation coefficient of two equally long samples.
///
/// Requires at least two points and non-zero variance on both sides.
pub fn pearson(xs: &[f64], ys: &[f64]) -> Result<f64, MetricError> {
    if xs.len() != ys.len() {
        return Err(MetricError::ShapeMismatch {
            expected: xs.len(),
            got: ys.len(),
        });
    }
    if xs.len() < 2 {
        return Err(MetricError::DegenerateInput(
            "fewer than two samples".to_string(),
        ));
    }
    let n = xs.len() as f64;
    let mean_x = xs.iter().sum::<f64>() / n;
    let mean_y = ys.iter().sum::<f64>() / n;
    let mut cov = 0.0;
    let mut var_x = 0.0;
    let mut var_y = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        let dx = x - mean_x;
        let dy = y - mean_y;
        cov += dx * dy;
        var_x += dx * dx;
        var_y += dy * dy;
    }
    if var_x == 0.0 || var_y == 0.0 {
        return Err(MetricError::DegenerateInput(
            "zero variance".to_string(),
        ));
    }
    Ok(cov / (var_x * var_y).sqrt())
}
