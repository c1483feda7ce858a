//! Net order flow at the best quotes around market order arrivals.

mod aggregate;
mod detect;
mod grid;
mod partition;
mod select;
mod study;
mod timeline;
mod trajectory;


use thiserror::Error;

pub use aggregate::{aggregate, lag_stderr, normalize, AggregateCurve, CurveAccumulator, LagStats};
pub use detect::{detect_market_orders, link_gaps, Fill, MarketOrderDetector, MarketOrderEvent};
pub use grid::LagGrid;
pub use partition::{partition_by_size, SizeBins, SizePartition};
pub use select::{select_event_set, select_event_set_before};
pub use study::{run_study, DaySelection, StderrJob, StudyAccumulator, StudyResult, StudySpec, CURVES};
pub use timeline::{BasisIntegral, FlowRecord, StudyDay, StudyDayBuilder, TimeWindow};
pub use trajectory::{trajectory_after, trajectory_before, Mode, NetFlowTrajectory, Orientation, QuoteSide};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StudyError {
    #[error("normalization basis must be positive and finite, got {0}")]
    InvalidBasis(f64),
    #[error("cannot split {events} events into {bins} size bins")]
    TooFewEvents { events: usize, bins: usize },
}
