/// Linear region half-width used by the order-flow plots.
pub const DEFAULT_LINEAR_THRESHOLD: f64 = 1e-4;

/// Symmetric logarithm: identity on `[-t, t]`, and
/// `sign(x) * t * (1 + log10(|x| / t))` outside, which is continuous and
/// strictly increasing, and odd.
pub fn symlog(x: f64, threshold: f64) -> f64 {
    assert!(threshold > 0.0, "symlog threshold must be positive");
    let a = x.abs();
    if a <= threshold {
        x
    } else {
        x.signum() * threshold * (1.0 + (a / threshold).log10())
    }
}

pub fn symlog_all(values: &[f64], threshold: f64) -> Vec<f64> {
    values.iter().map(|&v| symlog(v, threshold)).collect()
}
