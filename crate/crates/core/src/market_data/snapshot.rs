//! Order-book snapshot rows aligned one-to-one with message rows.
//!
//! Each row has `4k` columns: `ask price, ask size, bid price, bid size` for
//! levels 1..=k. Missing levels use the placeholder prices
//! [`EMPTY_ASK_PRICE`] / [`EMPTY_BID_PRICE`] with size 0.

use std::io::{self, BufRead, Write};

use serde::{Deserialize, Serialize};

use super::message::ParseError;
use crate::book::Book;
use crate::types::Side;

pub const EMPTY_ASK_PRICE: i64 = 9_999_999_999;
pub const EMPTY_BID_PRICE: i64 = -9_999_999_999;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelEntry {
    pub price: i64,
    pub shares: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SnapshotRow {
    pub asks: Vec<LevelEntry>,
    pub bids: Vec<LevelEntry>,
}

impl SnapshotRow {
    pub fn levels(&self) -> usize {
        self.asks.len()
    }

    /// Top `k` levels of `book`, padded with placeholders.
    pub fn from_book(book: &Book, k: usize) -> Self {
        let mut row = SnapshotRow {
            asks: Vec::with_capacity(k),
            bids: Vec::with_capacity(k),
        };
        row.fill_from(book, k);
        row
    }

    /// Overwrites this row with the top `k` levels of `book`.
    pub fn fill_from(&mut self, book: &Book, k: usize) {
        for (side, out, empty) in [
            (Side::Sell, &mut self.asks, EMPTY_ASK_PRICE),
            (Side::Buy, &mut self.bids, EMPTY_BID_PRICE),
        ] {
            out.clear();
            out.extend(book.levels(side).take(k).map(|(p, v)| LevelEntry {
                price: p.units(),
                shares: v,
            }));
            out.resize(
                k,
                LevelEntry {
                    price: empty,
                    shares: 0,
                },
            );
        }
    }

    /// True when the top levels of `book` equal this row.
    pub fn matches_book(&self, book: &Book) -> bool {
        let k = self.levels();
        [
            (Side::Sell, &self.asks, EMPTY_ASK_PRICE),
            (Side::Buy, &self.bids, EMPTY_BID_PRICE),
        ]
        .into_iter()
        .all(|(side, expected, empty)| {
            let mut levels = book.levels(side).take(k);
            expected.iter().all(|e| match levels.next() {
                Some((p, v)) => e.price == p.units() && e.shares == v,
                None => e.shares == 0 && e.price == empty,
            })
        })
    }
}

pub fn parse_snapshot_line(line: &str, line_no: usize) -> Result<SnapshotRow, ParseError> {
    let malformed = |reason: String| ParseError::Malformed { line: line_no, reason };
    let mut values = Vec::with_capacity(40);
    for field in line.trim_end_matches(['\n', '\r']).split(',') {
        values.push(
            field
                .parse::<i64>()
                .map_err(|_| malformed(format!("invalid snapshot field {field:?}")))?,
        );
    }
    if values.is_empty() || values.len() % 4 != 0 {
        return Err(malformed(format!(
            "snapshot rows need a multiple of 4 columns, got {}",
            values.len()
        )));
    }
    let k = values.len() / 4;
    let mut row = SnapshotRow {
        asks: Vec::with_capacity(k),
        bids: Vec::with_capacity(k),
    };
    for chunk in values.chunks_exact(4) {
        if chunk[1] < 0 || chunk[3] < 0 {
            return Err(malformed("snapshot sizes must be non-negative".into()));
        }
        row.asks.push(LevelEntry {
            price: chunk[0],
            shares: chunk[1] as u64,
        });
        row.bids.push(LevelEntry {
            price: chunk[2],
            shares: chunk[3] as u64,
        });
    }
    for (i, w) in row.asks.windows(2).enumerate() {
        if w[1].shares > 0 && w[0].price >= w[1].price {
            return Err(malformed(format!("ask levels {} and {} not increasing", i + 1, i + 2)));
        }
    }
    for (i, w) in row.bids.windows(2).enumerate() {
        if w[1].shares > 0 && w[0].price <= w[1].price {
            return Err(malformed(format!("bid levels {} and {} not decreasing", i + 1, i + 2)));
        }
    }
    Ok(row)
}

/// Streaming reader over a snapshot file.
pub struct SnapshotReader<R> {
    input: R,
    buf: String,
    line: usize,
    failed: bool,
}

impl<R: BufRead> SnapshotReader<R> {
    pub fn new(input: R) -> Self {
        SnapshotReader {
            input,
            buf: String::with_capacity(256),
            line: 0,
            failed: false,
        }
    }
}

impl<R: BufRead> Iterator for SnapshotReader<R> {
    type Item = Result<SnapshotRow, ParseError>;

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
            if self.buf.trim_end_matches(['\n', '\r']).is_empty() {
                continue;
            }
            let r = parse_snapshot_line(&self.buf, self.line);
            self.failed = r.is_err();
            return Some(r);
        }
    }
}

pub fn parse_snapshots<R: BufRead>(input: R) -> SnapshotReader<R> {
    SnapshotReader::new(input)
}

pub fn write_snapshot<W: Write>(out: &mut W, row: &SnapshotRow) -> io::Result<()> {
    for (i, (a, b)) in row.asks.iter().zip(&row.bids).enumerate() {
        if i > 0 {
            out.write_all(b",")?;
        }
        write!(out, "{},{},{},{}", a.price, a.shares, b.price, b.shares)?;
    }
    out.write_all(b"\n")
}
