//! End-to-end event study over one or more replayed days.

use serde::{Deserialize, Serialize};

use super::aggregate::{lag_stderr, normalize, AggregateCurve, CurveAccumulator, LagStats};
use super::detect::MarketOrderEvent;
use super::grid::LagGrid;
use super::partition::SizeBins;
use super::select::{select_event_set, select_event_set_before};
use super::timeline::{BasisIntegral, StudyDay};
use super::trajectory::{trajectory_after, trajectory_before, Mode, Orientation, QuoteSide};
use super::StudyError;
use crate::stats::derive_seed;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudySpec {
    pub grid: LagGrid,
    pub mode: Mode,
    /// Minimum calm period `T` around a selected market order.
    pub separation_ns: u64,
    pub maintaining_only: bool,
}

/// The four curves in output order.
pub const CURVES: [(QuoteSide, Orientation); 4] = [
    (QuoteSide::Same, Orientation::After),
    (QuoteSide::Opposite, Orientation::After),
    (QuoteSide::Same, Orientation::Before),
    (QuoteSide::Opposite, Orientation::Before),
];

/// Selected market orders of one day.
#[derive(Debug, Clone, Default)]
pub struct DaySelection {
    pub after: Vec<MarketOrderEvent>,
    pub before: Vec<MarketOrderEvent>,
}

impl DaySelection {
    pub fn new(day: &StudyDay, spec: &StudySpec) -> Self {
        DaySelection {
            after: select_event_set(&day.market_orders, spec.separation_ns, spec.maintaining_only),
            before: select_event_set_before(&day.market_orders, spec.separation_ns, spec.maintaining_only),
        }
    }

    /// Sizes used for binning: the forward-looking event set.
    pub fn sizes(&self) -> impl Iterator<Item = u64> + '_ {
        self.after.iter().map(|e| e.total_shares)
    }
}

fn curve_set(spec: &StudySpec) -> Vec<CurveAccumulator> {
    CURVES
        .iter()
        .map(|&(s, o)| CurveAccumulator::new(&spec.grid, s, o, spec.mode))
        .collect()
}

/// Mergeable partial result of a study.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudyAccumulator {
    pub curves: Vec<CurveAccumulator>,
    /// Same four curves per size bin (empty when unbinned).
    pub binned: Vec<Vec<CurveAccumulator>>,
    pub basis: BasisIntegral,
    pub events_after: u64,
    pub events_before: u64,
    pub strict_terminations: u64,
    pub clipped: u64,
}

impl StudyAccumulator {
    pub fn new(spec: &StudySpec, bins: Option<&SizeBins>) -> Self {
        StudyAccumulator {
            curves: curve_set(spec),
            binned: bins.map_or(Vec::new(), |b| (0..b.len()).map(|_| curve_set(spec)).collect()),
            basis: BasisIntegral::default(),
            events_after: 0,
            events_before: 0,
            strict_terminations: 0,
            clipped: 0,
        }
    }

    /// Accumulates one day. Before-curves are binned by the size of the
    /// market order they precede.
    pub fn add_day(&mut self, day: &StudyDay, selection: &DaySelection, spec: &StudySpec, bins: Option<&SizeBins>) {
        self.basis.merge(&day.basis);
        for (events, offset, forward) in [(&selection.after, 0, true), (&selection.before, 2, false)] {
            for ev in events {
                let pair = if forward {
                    self.events_after += 1;
                    trajectory_after(ev, day, &spec.grid, spec.mode)
                } else {
                    self.events_before += 1;
                    trajectory_before(ev, day, &spec.grid, spec.mode)
                };
                self.strict_terminations += pair[0].terminated_by_quote_change as u64;
                self.clipped += pair[0].clipped as u64;
                for (k, traj) in pair.iter().enumerate() {
                    self.curves[offset + k].add(traj);
                    if let Some(b) = bins {
                        self.binned[b.bin_of(ev.total_shares)][offset + k].add(traj);
                    }
                }
            }
        }
    }

    pub fn merge(&mut self, other: &StudyAccumulator) {
        assert_eq!(self.binned.len(), other.binned.len(), "bin layout mismatch");
        for (a, b) in self.curves.iter_mut().zip(&other.curves) {
            a.merge(b);
        }
        for (xs, ys) in self.binned.iter_mut().zip(&other.binned) {
            for (a, b) in xs.iter_mut().zip(ys) {
                a.merge(b);
            }
        }
        self.basis.merge(&other.basis);
        self.events_after += other.events_after;
        self.events_before += other.events_before;
        self.strict_terminations += other.strict_terminations;
        self.clipped += other.clipped;
    }

    fn all_curves(&self) -> impl Iterator<Item = &CurveAccumulator> {
        self.curves.iter().chain(self.binned.iter().flatten())
    }

    /// Bootstrap work items, one per (curve, lag).
    pub fn stderr_jobs(&self, seed: u64) -> Vec<StderrJob<'_>> {
        self.all_curves()
            .enumerate()
            .flat_map(|(c, acc)| {
                let curve_seed = derive_seed(seed, c as u64);
                acc.lags.iter().enumerate().map(move |(index, stats)| StderrJob {
                    stats,
                    seed: curve_seed,
                    index,
                })
            })
            .collect()
    }

    pub fn finish(
        &self,
        spec: &StudySpec,
        resamples: usize,
        seed: u64,
        normalized: bool,
    ) -> Result<StudyResult, StudyError> {
        self.finish_with(spec, resamples, seed, normalized, |jobs| {
            jobs.iter().map(|j| j.run(resamples)).collect()
        })
    }

    /// Finishes with a caller-provided executor for the bootstrap jobs;
    /// results must be returned in job order.
    pub fn finish_with<F>(
        &self,
        spec: &StudySpec,
        resamples: usize,
        seed: u64,
        normalized: bool,
        run: F,
    ) -> Result<StudyResult, StudyError>
    where
        F: FnOnce(&[StderrJob<'_>]) -> Vec<Option<f64>>,
    {
        let jobs = self.stderr_jobs(seed);
        let errs = run(&jobs);
        assert_eq!(errs.len(), jobs.len(), "executor dropped jobs");
        let g = spec.grid.len();
        let basis = self.basis.mean_best_volume();
        let mut curves = Vec::new();
        for (c, acc) in self.all_curves().enumerate() {
            let curve = acc.finish_with(
                &spec.grid,
                errs[c * g..(c + 1) * g].to_vec(),
                resamples,
                derive_seed(seed, c as u64),
            );
            curves.push(if normalized {
                normalize(&curve, basis.ok_or(StudyError::InvalidBasis(0.0))?)?
            } else {
                curve
            });
        }
        let binned = curves.split_off(CURVES.len());
        Ok(StudyResult {
            curves,
            binned: binned.chunks(CURVES.len()).map(<[AggregateCurve]>::to_vec).collect(),
            basis,
            events_after: self.events_after,
            events_before: self.events_before,
        })
    }
}

pub struct StderrJob<'a> {
    pub stats: &'a LagStats,
    pub seed: u64,
    pub index: usize,
}

impl StderrJob<'_> {
    pub fn run(&self, resamples: usize) -> Option<f64> {
        lag_stderr(self.stats, resamples, self.seed, self.index)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudyResult {
    /// Same/after, opposite/after, same/before, opposite/before.
    pub curves: Vec<AggregateCurve>,
    pub binned: Vec<Vec<AggregateCurve>>,
    /// Time-weighted mean best volume, if any quote was ever present.
    pub basis: Option<f64>,
    pub events_after: u64,
    pub events_before: u64,
}

/// Runs the whole study on a set of days.
pub fn run_study(
    days: &[StudyDay],
    spec: &StudySpec,
    n_bins: usize,
    resamples: usize,
    seed: u64,
    normalized: bool,
) -> Result<StudyResult, StudyError> {
    let selections: Vec<DaySelection> = days.iter().map(|d| DaySelection::new(d, spec)).collect();
    let bins = if n_bins > 1 {
        let sizes: Vec<u64> = selections.iter().flat_map(DaySelection::sizes).collect();
        Some(SizeBins::from_sizes(&sizes, n_bins)?)
    } else {
        None
    };
    let mut acc = StudyAccumulator::new(spec, bins.as_ref());
    for (day, sel) in days.iter().zip(&selections) {
        acc.add_day(day, sel, spec, bins.as_ref());
    }
    acc.finish(spec, resamples, seed, normalized)
}
