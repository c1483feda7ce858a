//! Trading-hours filtering.

use thiserror::Error;

use super::message::RawMessage;
use super::replay::Step;
use crate::types::{Timestamp, NANOS_PER_SEC};

/// Continuous trading opens at 09:30.
pub const MARKET_OPEN: Timestamp = Timestamp(34_200 * NANOS_PER_SEC);
/// Continuous trading closes at 16:00.
pub const MARKET_CLOSE: Timestamp = Timestamp(57_600 * NANOS_PER_SEC);
/// Activity this close to the open or close is excluded.
pub const EDGE_EXCLUSION_NS: u64 = 1_000 * NANOS_PER_SEC;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("session window [{start}, {end}) must lie within [{}, {}) and be non-empty", MARKET_OPEN.saturating_add(EDGE_EXCLUSION_NS), MARKET_CLOSE.saturating_sub(EDGE_EXCLUSION_NS))]
pub struct SessionError {
    pub start: Timestamp,
    pub end: Timestamp,
}

/// Half-open window `[start, end)` of one trading day kept for analysis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DaySession {
    pub date: Option<String>,
    pub open_filter_start: Timestamp,
    pub open_filter_end: Timestamp,
}

impl DaySession {
    /// 09:30 to 16:00 with the first and last 1000 seconds removed.
    pub fn standard(date: Option<String>) -> Self {
        DaySession {
            date,
            open_filter_start: MARKET_OPEN.saturating_add(EDGE_EXCLUSION_NS),
            open_filter_end: MARKET_CLOSE.saturating_sub(EDGE_EXCLUSION_NS),
        }
    }

    /// A narrower window inside the standard one.
    pub fn new(date: Option<String>, start: Timestamp, end: Timestamp) -> Result<Self, SessionError> {
        let std = Self::standard(None);
        if start < std.open_filter_start || end > std.open_filter_end || start >= end {
            return Err(SessionError { start, end });
        }
        Ok(DaySession {
            date,
            open_filter_start: start,
            open_filter_end: end,
        })
    }

    pub fn contains(&self, t: Timestamp) -> bool {
        self.open_filter_start <= t && t < self.open_filter_end
    }

    pub fn duration_ns(&self) -> u64 {
        self.open_filter_end.nanos() - self.open_filter_start.nanos()
    }
}

pub trait Timed {
    fn time(&self) -> Timestamp;
}

impl Timed for RawMessage {
    fn time(&self) -> Timestamp {
        self.time
    }
}

impl Timed for Step {
    fn time(&self) -> Timestamp {
        self.message.time
    }
}

impl<T: Timed> Timed for &T {
    fn time(&self) -> Timestamp {
        (*self).time()
    }
}

/// Keeps only the items whose time falls inside the session window.
pub fn session_filter<'a, I>(events: I, session: &'a DaySession) -> impl Iterator<Item = I::Item> + 'a
where
    I: IntoIterator,
    I::Item: Timed,
    I::IntoIter: 'a,
{
    events.into_iter().filter(move |e| session.contains(e.time()))
}
