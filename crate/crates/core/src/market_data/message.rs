//! Message-file rows: `time,type,order_id,size,price,direction`.
//!
//! Times are decimal seconds after midnight with up to nine fractional
//! digits; prices are integer 10^-4 currency units; direction is `1` for
//! buy and `-1` for sell. Execution rows carry the resting order's side.

use std::io::{self, BufRead, Write};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::types::{OrderId, Side, Timestamp, NANOS_PER_SEC};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MessageType {
    NewLimit = 1,
    PartialCancel = 2,
    Delete = 3,
    ExecuteVisible = 4,
    ExecuteHidden = 5,
    Halt = 7,
}

impl MessageType {
    pub fn code(self) -> u8 {
        self as u8
    }

    pub fn from_code(code: u8) -> Option<Self> {
        Some(match code {
            1 => MessageType::NewLimit,
            2 => MessageType::PartialCancel,
            3 => MessageType::Delete,
            4 => MessageType::ExecuteVisible,
            5 => MessageType::ExecuteHidden,
            7 => MessageType::Halt,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawMessage {
    pub time: Timestamp,
    pub msg_type: MessageType,
    pub order_id: OrderId,
    pub shares: u64,
    /// Price in 10^-4 units. Halt rows use `-1`.
    pub price: i64,
    pub direction: Side,
}

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("line {line}: {reason}")]
    Malformed { line: usize, reason: String },
    #[error("line {line}: unknown message type {value:?} (expected one of 1,2,3,4,5,7)")]
    UnknownType { line: usize, value: String },
    #[error("line {line}: time {current} precedes previous time {previous}")]
    TimeRegression {
        line: usize,
        previous: Timestamp,
        current: Timestamp,
    },
    #[error("read error: {0}")]
    Io(#[from] io::Error),
}

impl ParseError {
    pub fn line(&self) -> Option<usize> {
        match self {
            ParseError::Malformed { line, .. }
            | ParseError::UnknownType { line, .. }
            | ParseError::TimeRegression { line, .. } => Some(*line),
            ParseError::Io(_) => None,
        }
    }
}

/// Parses `seconds[.fraction]` into exact nanoseconds. Fractions shorter
/// than nine digits are right-padded with zeros.
pub fn parse_time(field: &str) -> Result<Timestamp, String> {
    parse_time_bytes(field.as_bytes())
        .ok_or_else(|| format!("invalid time {field:?} (seconds with at most 9 fractional digits)"))
}

fn parse_time_bytes(field: &[u8]) -> Option<Timestamp> {
    let (whole, frac) = match field.iter().position(|&c| c == b'.') {
        Some(i) => (&field[..i], &field[i + 1..]),
        None => (field, &field[field.len()..]),
    };
    if frac.len() > 9 || (!frac.is_empty() && !frac.iter().all(u8::is_ascii_digit)) {
        return None;
    }
    let secs = parse_digits(whole)?;
    let mut nanos = 0u64;
    for &c in frac {
        nanos = nanos * 10 + u64::from(c - b'0');
    }
    nanos *= 10u64.pow(9 - frac.len() as u32);
    secs.checked_mul(NANOS_PER_SEC)?.checked_add(nanos).map(Timestamp)
}

/// Unsigned decimal digits; `None` when empty, non-numeric or overflowing.
fn parse_digits(field: &[u8]) -> Option<u64> {
    if field.is_empty() {
        return None;
    }
    let mut v = 0u64;
    for &c in field {
        let d = c.wrapping_sub(b'0');
        if d > 9 {
            return None;
        }
        v = v.checked_mul(10)?.checked_add(u64::from(d))?;
    }
    Some(v)
}

fn parse_signed(field: &[u8]) -> Option<i64> {
    match field.split_first() {
        Some((b'-', rest)) => i64::try_from(parse_digits(rest)?).ok().map(|v| -v),
        _ => i64::try_from(parse_digits(field)?).ok(),
    }
}

const COLUMNS: [&str; 6] = ["time", "type", "order id", "size", "price", "direction"];

fn parse_fields(line: &str, line_no: usize) -> Result<RawMessage, ParseError> {
    let malformed = |reason: String| ParseError::Malformed { line: line_no, reason };
    let mut fields: [&[u8]; 6] = [&[]; 6];
    let mut count = 0;
    for field in line.as_bytes().split(|&c| c == b',') {
        if count == 6 {
            return Err(malformed("expected 6 columns".into()));
        }
        fields[count] = field;
        count += 1;
    }
    if count < 6 {
        return Err(malformed(format!("missing {} column", COLUMNS[count])));
    }
    let text = |i: usize| String::from_utf8_lossy(fields[i]).into_owned();
    let invalid = |i: usize| malformed(format!("invalid {} {:?}", COLUMNS[i], text(i)));

    let time = parse_time_bytes(fields[0]).ok_or_else(|| {
        malformed(format!(
            "invalid time {:?} (seconds with at most 9 fractional digits)",
            text(0)
        ))
    })?;
    let msg_type = parse_digits(fields[1])
        .and_then(|c| u8::try_from(c).ok())
        .and_then(MessageType::from_code)
        .ok_or_else(|| ParseError::UnknownType {
            line: line_no,
            value: text(1),
        })?;
    let order_id = parse_digits(fields[2]).ok_or_else(|| invalid(2))?;
    let shares = parse_digits(fields[3]).ok_or_else(|| invalid(3))?;
    let price = parse_signed(fields[4]).ok_or_else(|| invalid(4))?;
    let dir = parse_signed(fields[5]).ok_or_else(|| invalid(5))?;
    let direction = Side::from_sign(dir).ok_or_else(|| malformed(format!("direction must be 1 or -1, got {dir}")))?;
    if msg_type != MessageType::Halt && shares == 0 {
        return Err(malformed("size must be positive".into()));
    }
    Ok(RawMessage {
        time,
        msg_type,
        order_id,
        shares,
        price,
        direction,
    })
}

/// Parses one line (without the trailing newline). `line_no` is 1-based and
/// only used for diagnostics.
pub fn parse_message_line(line: &str, line_no: usize) -> Result<RawMessage, ParseError> {
    parse_fields(line.trim_end_matches('\r'), line_no)
}

/// Streaming, constant-memory reader over a message file.
///
/// Yields an error (and then stops) on the first malformed row or time
/// regression.
pub struct MessageReader<R> {
    input: R,
    buf: String,
    line: usize,
    last_time: Option<Timestamp>,
    failed: bool,
}

impl<R: BufRead> MessageReader<R> {
    pub fn new(input: R) -> Self {
        MessageReader {
            input,
            buf: String::with_capacity(64),
            line: 0,
            last_time: None,
            failed: false,
        }
    }
}

impl<R: BufRead> Iterator for MessageReader<R> {
    type Item = Result<RawMessage, ParseError>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.failed {
            return None;
        }
        loop {
            self.buf.clear();
            match self.input.read_line(&mut self.buf) {
                Ok(0) => return None,
                Ok(_) => {}
                Err(e) => {
                    self.failed = true;
                    return Some(Err(e.into()));
                }
            }
            self.line += 1;
            let line = self.buf.trim_end_matches(['\n', '\r']);
            if line.is_empty() {
                continue;
            }
            let result = parse_fields(line, self.line).and_then(|msg| {
                if let Some(prev) = self.last_time {
                    if msg.time < prev {
                        return Err(ParseError::TimeRegression {
                            line: self.line,
                            previous: prev,
                            current: msg.time,
                        });
                    }
                }
                self.last_time = Some(msg.time);
                Ok(msg)
            });
            if result.is_err() {
                self.failed = true;
            }
            return Some(result);
        }
    }
}

/// Parses a whole message stream.
pub fn parse_messages<R: BufRead>(input: R) -> MessageReader<R> {
    MessageReader::new(input)
}

/// Writes one row in canonical form (nine fractional time digits, LF).
pub fn write_message<W: Write>(out: &mut W, msg: &RawMessage) -> io::Result<()> {
    writeln!(
        out,
        "{},{},{},{},{},{}",
        msg.time,
        msg.msg_type.code(),
        msg.order_id,
        msg.shares,
        msg.price,
        msg.direction.sign()
    )
}

pub fn write_messages<'a, W: Write>(out: &mut W, messages: impl IntoIterator<Item = &'a RawMessage>) -> io::Result<()> {
    for m in messages {
        write_message(out, m)?;
    }
    Ok(())
}
