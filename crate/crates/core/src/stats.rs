//! Small sample-statistics helpers shared by the estimators.

/// Mean and standard error (sample standard deviation with `ddof = 1`,
/// divided by `√n`). Returns `None` for fewer than two values.
pub fn mean_se(values: &[f64]) -> Option<(f64, f64)> {
    let n = values.len();
    if n < 2 {
        return None;
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    Some((mean, (var / n as f64).sqrt()))
}

/// Means of consecutive chunks of `batch_len` values. The last chunk may be
/// shorter.
pub fn batch_means(values: &[f64], batch_len: usize) -> Vec<f64> {
    let batch_len = batch_len.max(1);
    values
        .chunks(batch_len)
        .map(|c| c.iter().sum::<f64>() / c.len() as f64)
        .collect()
}

/// Number of batches `batch_means` would produce.
pub fn batch_count(len: usize, batch_len: usize) -> usize {
    len.div_ceil(batch_len.max(1))
}

/// Standard error of the overall mean estimated from batch means.
pub fn batched_se(values: &[f64], batch_len: usize) -> Option<f64> {
    mean_se(&batch_means(values, batch_len)).map(|(_, se)| se)
}

/// Ordinary least-squares slope of `y` on `x`.
pub fn ols_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    sxy / sxx
}
