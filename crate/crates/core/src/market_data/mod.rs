//! Message and snapshot file formats, replay and validation.

pub mod message;
pub mod replay;
pub mod session;
pub mod snapshot;
pub mod validate;

pub use message::{
    parse_message_line, parse_messages, parse_time, write_message, write_messages, MessageReader, MessageType,
    ParseError, RawMessage,
};
pub use replay::{replay, Replay, ReplayError, Replayer, Step};
pub use session::{session_filter, DaySession, SessionError, Timed};
pub use snapshot::{parse_snapshots, write_snapshot, LevelEntry, SnapshotReader, SnapshotRow};
pub use validate::{validate_snapshots, Mismatch, ValidateError, ValidationReport};
