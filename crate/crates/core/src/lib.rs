//! Limit order book reconstruction, zero-intelligence order flow, and
//! event studies of net order flow around market order arrivals.
//!
//! * [`book`]: price-time priority matching and best-quote state.
//! * [`market_data`]: message/snapshot files, replay, validation, trading hours.
//! * [`zi_sim`]: Poisson order-flow generator writing the same file formats.
//! * [`event_study`]: market-order detection, net-flow trajectories, aggregate curves.
//! * [`stats`]: ECDFs, bootstrap standard errors, symmetric-log transform.

pub mod book;
pub mod event_study;
pub mod market_data;
pub mod stats;
pub mod types;
pub mod zi_sim;

pub use book::{is_price_maintaining, Book, BookError, BookEvent, Classification, EventKind, Order, QuoteSnapshot};
pub use types::{OrderId, Price, Side, Timestamp, NANOS_PER_SEC, PRICE_SCALE};
