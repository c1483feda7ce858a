//! Checks a replayed message stream against its snapshot stream.

use thiserror::Error;

use super::message::{ParseError, RawMessage};
use super::replay::{ReplayError, Replayer};
use super::snapshot::SnapshotRow;
use crate::book::Book;

#[derive(Debug, Error)]
pub enum ValidateError {
    #[error("message stream: {0}")]
    Messages(#[source] ParseError),
    #[error("snapshot stream: {0}")]
    Snapshots(#[source] ParseError),
    #[error(transparent)]
    Replay(#[from] ReplayError),
    #[error("stream length mismatch: {messages} messages, {snapshots} snapshot rows")]
    LengthMismatch { messages: usize, snapshots: usize },
    #[error("snapshot row {index} has {found} levels, {requested} requested")]
    TooFewLevels {
        index: usize,
        found: usize,
        requested: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mismatch {
    /// Zero-based message index.
    pub index: usize,
    pub expected: SnapshotRow,
    pub reconstructed: SnapshotRow,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub checked: usize,
    pub mismatch_count: usize,
    /// The first mismatches, up to the requested limit.
    pub mismatches: Vec<Mismatch>,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.mismatch_count == 0
    }
}

/// Replays `messages` into `book` and compares the top `k` levels after each
/// message with the aligned snapshot row. `k = 0` compares every level the
/// snapshot rows carry.
pub fn validate_snapshots<M, S>(
    messages: M,
    snapshots: S,
    k: usize,
    book: Book,
    max_reported: usize,
) -> Result<ValidationReport, ValidateError>
where
    M: IntoIterator<Item = Result<RawMessage, ParseError>>,
    S: IntoIterator<Item = Result<SnapshotRow, ParseError>>,
{
    let mut replayer = Replayer::new(book);
    let mut report = ValidationReport::default();
    let mut messages = messages.into_iter();
    let mut snapshots = snapshots.into_iter();
    loop {
        let (msg, row) = match (messages.next(), snapshots.next()) {
            (None, None) => break,
            (Some(m), Some(s)) => (
                m.map_err(ValidateError::Messages)?,
                s.map_err(ValidateError::Snapshots)?,
            ),
            (m, s) => {
                let extra_m = usize::from(m.is_some()) + messages.count();
                let extra_s = usize::from(s.is_some()) + snapshots.count();
                return Err(ValidateError::LengthMismatch {
                    messages: report.checked + extra_m,
                    snapshots: report.checked + extra_s,
                });
            }
        };
        let index = report.checked;
        let mut row = row;
        let levels = if k == 0 { row.levels() } else { k };
        if row.levels() < levels {
            return Err(ValidateError::TooFewLevels {
                index,
                found: row.levels(),
                requested: levels,
            });
        }
        row.asks.truncate(levels);
        row.bids.truncate(levels);
        replayer.apply(&msg)?;
        if !row.matches_book(replayer.book()) {
            report.mismatch_count += 1;
            if report.mismatches.len() < max_reported {
                report.mismatches.push(Mismatch {
                    index,
                    reconstructed: SnapshotRow::from_book(replayer.book(), levels),
                    expected: row,
                });
            }
        }
        report.checked += 1;
    }
    Ok(report)
}
