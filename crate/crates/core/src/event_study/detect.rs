//! Grouping visible executions into market order arrivals.

use serde::{Deserialize, Serialize};

use crate::book::QuoteSnapshot;
use crate::market_data::{MessageType, Step};
use crate::types::{OrderId, Price, Side, Timestamp};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fill {
    pub order_id: OrderId,
    pub shares: u64,
    pub price: Price,
}

/// One market order arrival reconstructed from its fills.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MarketOrderEvent {
    pub time: Timestamp,
    /// Aggressor direction: a buy market order consumes the ask.
    pub direction: Side,
    pub total_shares: u64,
    pub price_maintaining: bool,
    pub fills: Vec<Fill>,
    /// Message index of the first and last fill.
    pub first_index: usize,
    pub last_index: usize,
    /// Quotes just before the first fill and just after the last.
    pub before: QuoteSnapshot,
    pub after: QuoteSnapshot,
    /// Time since the previous market order of the day, if any.
    pub prev_gap_ns: Option<u64>,
    /// Time until the next market order of the day, if any.
    pub next_gap_ns: Option<u64>,
}

impl MarketOrderEvent {
    /// The quote side the order consumed.
    pub fn same_side(&self) -> Side {
        self.direction.opposite()
    }
}

/// Streaming detector: consecutive visible executions with an identical
/// timestamp and aggressor direction form one market order.
#[derive(Debug, Default)]
pub struct MarketOrderDetector {
    open: Option<MarketOrderEvent>,
    last_time: Option<Timestamp>,
}

impl MarketOrderDetector {
    pub fn new() -> Self {
        Self::default()
    }

    /// Feeds one replayed step; returns a market order when one completes.
    pub fn push(&mut self, step: &Step) -> Option<MarketOrderEvent> {
        let msg = &step.message;
        let is_fill = msg.msg_type == MessageType::ExecuteVisible;
        let direction = msg.direction.opposite();
        if let Some(open) = &mut self.open {
            if is_fill && open.time == msg.time && open.direction == direction {
                open.fills.push(Fill {
                    order_id: msg.order_id,
                    shares: msg.shares,
                    price: Price(msg.price),
                });
                open.total_shares += msg.shares;
                open.last_index = step.index;
                open.after = step.after;
                open.price_maintaining = open.before.same_prices(&open.after);
                return None;
            }
        }
        let done = self.close();
        if is_fill {
            self.open = Some(MarketOrderEvent {
                time: msg.time,
                direction,
                total_shares: msg.shares,
                price_maintaining: step.before.same_prices(&step.after),
                fills: vec![Fill {
                    order_id: msg.order_id,
                    shares: msg.shares,
                    price: Price(msg.price),
                }],
                first_index: step.index,
                last_index: step.index,
                before: step.before,
                after: step.after,
                prev_gap_ns: None,
                next_gap_ns: None,
            });
        }
        done
    }

    fn close(&mut self) -> Option<MarketOrderEvent> {
        let mut ev = self.open.take()?;
        ev.prev_gap_ns = self.last_time.map(|t| ev.time.nanos() - t.nanos());
        self.last_time = Some(ev.time);
        Some(ev)
    }

    /// Flushes the trailing market order, if any.
    pub fn finish(&mut self) -> Option<MarketOrderEvent> {
        self.close()
    }
}

/// Fills in `next_gap_ns` from consecutive arrival times.
pub fn link_gaps(events: &mut [MarketOrderEvent]) {
    let n = events.len();
    for i in 0..n {
        events[i].next_gap_ns = events.get(i + 1).map(|next| next.time.nanos() - events[i].time.nanos());
    }
}

/// Detects all market orders in a replayed stream.
pub fn detect_market_orders<'a>(steps: impl IntoIterator<Item = &'a Step>) -> Vec<MarketOrderEvent> {
    let mut det = MarketOrderDetector::new();
    let mut out: Vec<MarketOrderEvent> = steps.into_iter().filter_map(|s| det.push(s)).collect();
    out.extend(det.finish());
    link_gaps(&mut out);
    out
}
