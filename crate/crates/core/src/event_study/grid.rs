use serde::{Deserialize, Serialize};

use crate::types::NANOS_PER_SEC;

/// Logarithmic grid of positive lags, stored as exact nanoseconds.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LagGrid {
    lags_ns: Vec<u64>,
}

impl LagGrid {
    /// `per_decade` points per decade from `min_secs` to `max_secs`
    /// inclusive. Lags are rounded to whole nanoseconds and deduplicated.
    pub fn logarithmic(min_secs: f64, max_secs: f64, per_decade: u32) -> Self {
        assert!(
            min_secs > 0.0 && max_secs >= min_secs && per_decade > 0,
            "invalid lag grid"
        );
        let lo = min_secs.log10();
        let hi = max_secs.log10();
        let steps = ((hi - lo) * per_decade as f64 + 1e-9).floor() as u32;
        let mut lags_ns: Vec<u64> = (0..=steps)
            .map(|i| {
                let secs = 10f64.powf(lo + i as f64 / per_decade as f64);
                ((secs * NANOS_PER_SEC as f64).round() as u64).max(1)
            })
            .collect();
        lags_ns.dedup();
        LagGrid { lags_ns }
    }

    /// 20 points per decade from 1e-7 s to 10 s.
    pub fn standard() -> Self {
        Self::logarithmic(1e-7, 10.0, 20)
    }

    pub fn from_nanos(mut lags_ns: Vec<u64>) -> Self {
        lags_ns.sort_unstable();
        lags_ns.dedup();
        assert!(lags_ns.first().is_none_or(|&l| l > 0), "lags must be positive");
        LagGrid { lags_ns }
    }

    pub fn lags_ns(&self) -> &[u64] {
        &self.lags_ns
    }

    pub fn len(&self) -> usize {
        self.lags_ns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lags_ns.is_empty()
    }

    pub fn max_ns(&self) -> u64 {
        self.lags_ns.last().copied().unwrap_or(0)
    }

    pub fn secs(&self, i: usize) -> f64 {
        self.lags_ns[i] as f64 / NANOS_PER_SEC as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_grid_spans_eight_decades() {
        let g = LagGrid::standard();
        assert_eq!(g.len(), 161);
        assert_eq!(g.lags_ns()[0], 100);
        assert_eq!(g.lags_ns()[20], 1_000);
        assert_eq!(g.max_ns(), 10 * NANOS_PER_SEC);
        assert!(g.lags_ns().windows(2).all(|w| w[0] < w[1]));
    }
}
