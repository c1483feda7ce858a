use std::collections::BTreeMap;
use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use super::grid::LagGrid;
use super::trajectory::{Mode, NetFlowTrajectory, Orientation, QuoteSide};
use super::StudyError;
use crate::stats::{bootstrap_stderr_counts, derive_seed};
use crate::types::NANOS_PER_SEC;

/// Exact sufficient statistics of the samples at one lag.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LagStats {
    pub count: u64,
    pub sum: i128,
    pub histogram: BTreeMap<i64, u64>,
}

impl LagStats {
    pub fn push(&mut self, value: i64) {
        self.count += 1;
        self.sum += value as i128;
        *self.histogram.entry(value).or_insert(0) += 1;
    }

    pub fn merge(&mut self, other: &LagStats) {
        self.count += other.count;
        self.sum += other.sum;
        for (&v, &c) in &other.histogram {
            *self.histogram.entry(v).or_insert(0) += c;
        }
    }

    pub fn mean(&self) -> Option<f64> {
        (self.count > 0).then(|| self.sum as f64 / self.count as f64)
    }
}

/// Mergeable accumulator for one curve.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveAccumulator {
    pub side: QuoteSide,
    pub orientation: Orientation,
    pub mode: Mode,
    pub lags: Vec<LagStats>,
}

impl CurveAccumulator {
    pub fn new(grid: &LagGrid, side: QuoteSide, orientation: Orientation, mode: Mode) -> Self {
        CurveAccumulator {
            side,
            orientation,
            mode,
            lags: vec![LagStats::default(); grid.len()],
        }
    }

    pub fn add(&mut self, trajectory: &NetFlowTrajectory) {
        debug_assert_eq!(trajectory.side, self.side);
        debug_assert_eq!(trajectory.orientation, self.orientation);
        for (stats, &v) in self.lags.iter_mut().zip(&trajectory.values) {
            stats.push(v);
        }
    }

    pub fn merge(&mut self, other: &CurveAccumulator) {
        assert_eq!(self.lags.len(), other.lags.len(), "grid mismatch");
        for (a, b) in self.lags.iter_mut().zip(&other.lags) {
            a.merge(b);
        }
    }

    /// Means plus bootstrap errors; lag `j` is resampled with seed
    /// `derive_seed(seed, j)`. Lags without samples are left absent.
    pub fn finish(&self, grid: &LagGrid, resamples: usize, seed: u64) -> AggregateCurve {
        let stderr = (0..self.lags.len())
            .map(|j| lag_stderr(&self.lags[j], resamples, seed, j))
            .collect();
        self.finish_with(grid, stderr, resamples, seed)
    }

    /// Like [`finish`](Self::finish) with caller-supplied per-lag errors,
    /// for parallel evaluation via [`lag_stderr`].
    pub fn finish_with(&self, grid: &LagGrid, stderr: Vec<Option<f64>>, resamples: usize, seed: u64) -> AggregateCurve {
        assert_eq!(grid.len(), self.lags.len(), "grid mismatch");
        AggregateCurve {
            side: self.side,
            orientation: self.orientation,
            mode: self.mode,
            lags_ns: grid.lags_ns().to_vec(),
            mean: self.lags.iter().map(LagStats::mean).collect(),
            stderr,
            n: self.lags.iter().map(|s| s.count).collect(),
            resamples,
            seed,
            normalization: None,
        }
    }
}

/// Bootstrap standard error of the mean at lag `index`.
pub fn lag_stderr(stats: &LagStats, resamples: usize, seed: u64, index: usize) -> Option<f64> {
    if stats.count == 0 {
        return None;
    }
    let counts: Vec<(f64, u64)> = stats.histogram.iter().map(|(&v, &c)| (v as f64, c)).collect();
    bootstrap_stderr_counts(&counts, resamples, derive_seed(seed, index as u64))
        .ok()
        .map(|e| e.stderr)
}

/// Cross-event mean flow with bootstrap errors, per lag.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggregateCurve {
    pub side: QuoteSide,
    pub orientation: Orientation,
    pub mode: Mode,
    pub lags_ns: Vec<u64>,
    pub mean: Vec<Option<f64>>,
    pub stderr: Vec<Option<f64>>,
    pub n: Vec<u64>,
    pub resamples: usize,
    pub seed: u64,
    /// Divisor applied by [`normalize`], if any.
    pub normalization: Option<f64>,
}

impl AggregateCurve {
    /// Signed lag in seconds: negative for before-curves.
    pub fn tau(&self, j: usize) -> f64 {
        let secs = self.lags_ns[j] as f64 / NANOS_PER_SEC as f64;
        match self.orientation {
            Orientation::After => secs,
            Orientation::Before => -secs,
        }
    }

    /// Writes `tau,mean,stderr,n`; absent values are empty fields.
    /// Before-curves are written in increasing `tau`.
    pub fn write_csv<W: Write>(&self, out: &mut W) -> io::Result<()> {
        writeln!(out, "tau,mean,stderr,n")?;
        let order: Box<dyn Iterator<Item = usize>> = match self.orientation {
            Orientation::After => Box::new(0..self.lags_ns.len()),
            Orientation::Before => Box::new((0..self.lags_ns.len()).rev()),
        };
        let opt = |v: Option<f64>| v.map(|x| format!("{x}")).unwrap_or_default();
        for j in order {
            writeln!(
                out,
                "{:e},{},{},{}",
                self.tau(j),
                opt(self.mean[j]),
                opt(self.stderr[j]),
                self.n[j]
            )?;
        }
        Ok(())
    }
}

/// Aggregates trajectories of one side and orientation.
pub fn aggregate<'a>(
    trajectories: impl IntoIterator<Item = &'a NetFlowTrajectory>,
    grid: &LagGrid,
    side: QuoteSide,
    orientation: Orientation,
    mode: Mode,
    resamples: usize,
    seed: u64,
) -> AggregateCurve {
    let mut acc = CurveAccumulator::new(grid, side, orientation, mode);
    for t in trajectories {
        acc.add(t);
    }
    acc.finish(grid, resamples, seed)
}

/// Divides means and errors by `basis`.
pub fn normalize(curve: &AggregateCurve, basis: f64) -> Result<AggregateCurve, StudyError> {
    if !(basis.is_finite() && basis > 0.0) {
        return Err(StudyError::InvalidBasis(basis));
    }
    let mut out = curve.clone();
    for m in out.mean.iter_mut().flatten() {
        *m /= basis;
    }
    for s in out.stderr.iter_mut().flatten() {
        *s /= basis;
    }
    out.normalization = Some(basis);
    Ok(out)
}
