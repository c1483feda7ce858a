//! Price-time priority limit order book.
//!
//! Each side is an ordered map from price to a FIFO queue of resting orders.
//! Book state is exact integer arithmetic throughout: prices in 10^-4 units,
//! sizes in shares, times in nanoseconds.
//!
//! Every mutating operation appends [`BookEvent`]s describing what happened,
//! followed by a [`EventKind::PriceChange`] for each side whose best price
//! moved.

use std::collections::{BTreeMap, VecDeque};

use rustc_hash::FxHashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::types::{OrderId, Price, Side, Timestamp};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BookError {
    #[error("order size must be positive")]
    NonPositiveShares,
    #[error("price {price} must be positive")]
    NonPositivePrice { price: i64 },
    #[error("price {price} is not a multiple of the tick {tick}")]
    MisalignedPrice { price: i64, tick: i64 },
    #[error("order id {0} is already resting in the book")]
    DuplicateOrder(OrderId),
    #[error("order id {0} is not resting in the book")]
    UnknownOrder(OrderId),
    #[error("cannot remove {requested} shares from order {id}: only {resident} resting")]
    Oversized { id: OrderId, requested: u64, resident: u64 },
    #[error("{side} limit order {id} at {price} would cross the opposite best quote")]
    CrossingLimit { id: OrderId, side: Side, price: Price },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Order {
    pub id: OrderId,
    pub side: Side,
    pub price: Price,
    /// Remaining unsigned size; the side carries the sign.
    pub shares: u64,
    /// Arrival sequence number, the FIFO tiebreaker within a level.
    pub entry_seq: u64,
}

impl Order {
    /// Signed size with buy positive and sell negative.
    pub fn signed_size(&self) -> i64 {
        self.side.sign() * self.shares as i64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EventKind {
    LimitArrival,
    Cancellation,
    Execution,
    /// The best price on `side` moved. `price` holds the new best, or the
    /// previous best when the side emptied.
    PriceChange {
        previous: Option<Price>,
        current: Option<Price>,
    },
}

type OrderIndex = FxHashMap<OrderId, (Side, Price)>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BookEvent {
    pub kind: EventKind,
    pub time: Timestamp,
    /// Side of the resting order (or of the quote, for price changes).
    pub side: Side,
    pub price: Price,
    /// Signed change of resting volume at `(side, price)`.
    pub delta: i64,
    pub order_id: OrderId,
    pub aggressor_id: Option<OrderId>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Classification {
    MarketOrder,
    LimitOrder,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Submission {
    pub order_id: OrderId,
    pub classification: Classification,
    pub filled: u64,
    pub rested: u64,
    pub events: Vec<BookEvent>,
}

/// Best quotes and the volumes resting at them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct QuoteSnapshot {
    pub bid: Option<Price>,
    pub ask: Option<Price>,
    pub bid_volume: u64,
    pub ask_volume: u64,
}

impl QuoteSnapshot {
    pub fn best(&self, side: Side) -> Option<Price> {
        match side {
            Side::Buy => self.bid,
            Side::Sell => self.ask,
        }
    }

    pub fn volume(&self, side: Side) -> u64 {
        match side {
            Side::Buy => self.bid_volume,
            Side::Sell => self.ask_volume,
        }
    }

    pub fn spread(&self) -> Option<i64> {
        Some(self.ask?.units() - self.bid?.units())
    }

    /// Twice the mid price, exact at half-tick resolution.
    pub fn mid_x2(&self) -> Option<i64> {
        Some(self.ask?.units() + self.bid?.units())
    }

    pub fn mid(&self) -> Option<f64> {
        self.mid_x2().map(|m| m as f64 / 2.0)
    }

    pub fn same_prices(&self, other: &QuoteSnapshot) -> bool {
        self.bid == other.bid && self.ask == other.ask
    }
}

/// True iff the market order left both best prices where they were.
///
/// `pre` is the snapshot before the first fill, `post` the snapshot after the
/// last fill of a single classified market order.
pub fn is_price_maintaining(events: &[BookEvent], pre: &QuoteSnapshot, post: &QuoteSnapshot) -> bool {
    debug_assert!(events.iter().any(|e| e.kind == EventKind::Execution));
    pre.same_prices(post)
}

#[derive(Debug, Clone, Default)]
struct Level {
    orders: VecDeque<Order>,
    volume: u64,
}

/// Full-depth limit order book for one instrument.
#[derive(Debug, Clone)]
pub struct Book {
    bids: BTreeMap<Price, Level>,
    asks: BTreeMap<Price, Level>,
    index: OrderIndex,
    tick: i64,
    seq: u64,
    next_id: OrderId,
}

impl Book {
    /// Creates an empty book. `tick` is in price units and must be positive.
    pub fn new(tick: i64) -> Self {
        assert!(tick > 0, "tick must be positive");
        Book {
            bids: BTreeMap::new(),
            asks: BTreeMap::new(),
            index: OrderIndex::default(),
            tick,
            seq: 0,
            next_id: 1,
        }
    }

    pub fn tick(&self) -> i64 {
        self.tick
    }

    pub fn is_empty(&self) -> bool {
        self.index.is_empty()
    }

    /// Number of resting orders.
    pub fn len(&self) -> usize {
        self.index.len()
    }

    pub fn contains(&self, id: OrderId) -> bool {
        self.index.contains_key(&id)
    }

    pub fn order(&self, id: OrderId) -> Option<&Order> {
        let (side, price) = *self.index.get(&id)?;
        self.side(side).get(&price)?.orders.iter().find(|o| o.id == id)
    }

    pub fn best_bid(&self) -> Option<Price> {
        self.bids.keys().next_back().copied()
    }

    pub fn best_ask(&self) -> Option<Price> {
        self.asks.keys().next().copied()
    }

    pub fn best(&self, side: Side) -> Option<Price> {
        match side {
            Side::Buy => self.best_bid(),
            Side::Sell => self.best_ask(),
        }
    }

    pub fn volume_at(&self, side: Side, price: Price) -> u64 {
        self.side(side).get(&price).map_or(0, |l| l.volume)
    }

    pub fn quotes(&self) -> QuoteSnapshot {
        let bid = self.bids.iter().next_back();
        let ask = self.asks.iter().next();
        QuoteSnapshot {
            bid: bid.map(|(p, _)| *p),
            ask: ask.map(|(p, _)| *p),
            bid_volume: bid.map_or(0, |(_, l)| l.volume),
            ask_volume: ask.map_or(0, |(_, l)| l.volume),
        }
    }

    /// Best `k` levels of one side as `(price, volume)`, best first.
    pub fn depth(&self, side: Side, k: usize) -> Vec<(Price, u64)> {
        match side {
            Side::Buy => self.bids.iter().rev().take(k).map(|(p, l)| (*p, l.volume)).collect(),
            Side::Sell => self.asks.iter().take(k).map(|(p, l)| (*p, l.volume)).collect(),
        }
    }

    /// Iterates levels of one side best first.
    pub fn levels(&self, side: Side) -> Box<dyn Iterator<Item = (Price, u64)> + '_> {
        match side {
            Side::Buy => Box::new(self.bids.iter().rev().map(|(p, l)| (*p, l.volume))),
            Side::Sell => Box::new(self.asks.iter().map(|(p, l)| (*p, l.volume))),
        }
    }

    /// Resting orders of one side in priority order.
    pub fn orders(&self, side: Side) -> impl Iterator<Item = &Order> + '_ {
        let levels: Box<dyn Iterator<Item = &Level>> = match side {
            Side::Buy => Box::new(self.bids.values().rev()),
            Side::Sell => Box::new(self.asks.values()),
        };
        levels.flat_map(|l| l.orders.iter())
    }

    pub fn total_volume(&self, side: Side) -> u64 {
        self.side(side).values().map(|l| l.volume).sum()
    }

    fn side(&self, side: Side) -> &BTreeMap<Price, Level> {
        match side {
            Side::Buy => &self.bids,
            Side::Sell => &self.asks,
        }
    }

    fn side_mut(&mut self, side: Side) -> &mut BTreeMap<Price, Level> {
        self.side_and_index(side).0
    }

    fn side_and_index(&mut self, side: Side) -> (&mut BTreeMap<Price, Level>, &mut OrderIndex) {
        match side {
            Side::Buy => (&mut self.bids, &mut self.index),
            Side::Sell => (&mut self.asks, &mut self.index),
        }
    }

    fn check_order(&self, price: Price, shares: u64) -> Result<(), BookError> {
        if shares == 0 {
            return Err(BookError::NonPositiveShares);
        }
        if price.units() <= 0 {
            return Err(BookError::NonPositivePrice { price: price.units() });
        }
        if !price.is_aligned(self.tick) {
            return Err(BookError::MisalignedPrice {
                price: price.units(),
                tick: self.tick,
            });
        }
        Ok(())
    }

    fn crosses(&self, side: Side, price: Price) -> bool {
        match side {
            Side::Buy => self.best_ask().is_some_and(|a| price >= a),
            Side::Sell => self.best_bid().is_some_and(|b| price <= b),
        }
    }

    /// Submits an order with a book-assigned id. See [`Book::submit_with_id`].
    pub fn submit_order(
        &mut self,
        side: Side,
        price: Price,
        shares: u64,
        time: Timestamp,
    ) -> Result<Submission, BookError> {
        let id = self.next_id;
        self.submit_with_id(id, side, price, shares, time)
    }

    /// Submits an order that may match on arrival.
    ///
    /// A crossing order fills against the opposite side best price first and
    /// FIFO within a level, always at the resting order's price. Any
    /// unfilled remainder rests at `price`. The order is a market order iff
    /// at least one fill happened.
    pub fn submit_with_id(
        &mut self,
        id: OrderId,
        side: Side,
        price: Price,
        shares: u64,
        time: Timestamp,
    ) -> Result<Submission, BookError> {
        let mut events = Vec::new();
        let (filled, rested) = self.submit_into(id, side, price, shares, time, &mut events)?;
        Ok(Submission {
            order_id: id,
            classification: if filled > 0 {
                Classification::MarketOrder
            } else {
                Classification::LimitOrder
            },
            filled,
            rested,
            events,
        })
    }

    /// Allocation-free form of [`Book::submit_with_id`]; returns `(filled, rested)`.
    pub fn submit_into(
        &mut self,
        id: OrderId,
        side: Side,
        price: Price,
        shares: u64,
        time: Timestamp,
        events: &mut Vec<BookEvent>,
    ) -> Result<(u64, u64), BookError> {
        self.check_order(price, shares)?;
        if self.index.contains_key(&id) {
            return Err(BookError::DuplicateOrder(id));
        }
        let before = self.best_pair();
        let mut remaining = shares;

        let opposite = side.opposite();
        while remaining > 0 {
            let best = match self.best(opposite) {
                Some(p) if self.crosses(side, price) => p,
                _ => break,
            };
            let (book_side, index) = self.side_and_index(opposite);
            let level = book_side.get_mut(&best).expect("best level exists");
            let front = level.orders.front_mut().expect("levels are never empty");
            let fill = remaining.min(front.shares);
            front.shares -= fill;
            level.volume -= fill;
            remaining -= fill;
            let resting_id = front.id;
            events.push(BookEvent {
                kind: EventKind::Execution,
                time,
                side: opposite,
                price: best,
                delta: -(fill as i64),
                order_id: resting_id,
                aggressor_id: Some(id),
            });
            if front.shares == 0 {
                level.orders.pop_front();
                index.remove(&resting_id);
                if level.orders.is_empty() {
                    book_side.remove(&best);
                }
            }
        }

        let filled = shares - remaining;
        if remaining > 0 {
            self.rest(id, side, price, remaining, time, events);
        } else {
            self.next_id = self.next_id.max(id + 1);
        }
        self.push_price_changes(before, time, id, events);
        Ok((filled, remaining))
    }

    /// Adds a non-crossing limit order to the tail of its level.
    pub fn add_resting(
        &mut self,
        id: OrderId,
        side: Side,
        price: Price,
        shares: u64,
        time: Timestamp,
    ) -> Result<Vec<BookEvent>, BookError> {
        let mut events = Vec::with_capacity(2);
        self.add_resting_into(id, side, price, shares, time, &mut events)?;
        Ok(events)
    }

    pub fn add_resting_into(
        &mut self,
        id: OrderId,
        side: Side,
        price: Price,
        shares: u64,
        time: Timestamp,
        events: &mut Vec<BookEvent>,
    ) -> Result<(), BookError> {
        self.check_order(price, shares)?;
        if self.index.contains_key(&id) {
            return Err(BookError::DuplicateOrder(id));
        }
        if self.crosses(side, price) {
            return Err(BookError::CrossingLimit { id, side, price });
        }
        let before = self.best_pair();
        self.rest(id, side, price, shares, time, events);
        self.push_price_changes(before, time, id, events);
        Ok(())
    }

    fn rest(
        &mut self,
        id: OrderId,
        side: Side,
        price: Price,
        shares: u64,
        time: Timestamp,
        events: &mut Vec<BookEvent>,
    ) {
        self.seq += 1;
        let order = Order {
            id,
            side,
            price,
            shares,
            entry_seq: self.seq,
        };
        let level = self.side_mut(side).entry(price).or_default();
        level.orders.push_back(order);
        level.volume += shares;
        self.index.insert(id, (side, price));
        self.next_id = self.next_id.max(id + 1);
        events.push(BookEvent {
            kind: EventKind::LimitArrival,
            time,
            side,
            price,
            delta: shares as i64,
            order_id: id,
            aggressor_id: None,
        });
    }

    /// Cancels `shares` of an order, or all of it when `shares` is `None`.
    ///
    /// A partial cancel keeps the order's queue position.
    pub fn cancel(&mut self, id: OrderId, shares: Option<u64>, time: Timestamp) -> Result<Vec<BookEvent>, BookError> {
        let mut events = Vec::with_capacity(2);
        self.cancel_into(id, shares, time, &mut events)?;
        Ok(events)
    }

    pub fn cancel_into(
        &mut self,
        id: OrderId,
        shares: Option<u64>,
        time: Timestamp,
        events: &mut Vec<BookEvent>,
    ) -> Result<(), BookError> {
        self.reduce(id, shares, time, EventKind::Cancellation, events)
    }

    /// Executes `shares` of a resting order against an implicit aggressor.
    pub fn execute(&mut self, id: OrderId, shares: u64, time: Timestamp) -> Result<Vec<BookEvent>, BookError> {
        let mut events = Vec::with_capacity(2);
        self.execute_into(id, shares, time, &mut events)?;
        Ok(events)
    }

    pub fn execute_into(
        &mut self,
        id: OrderId,
        shares: u64,
        time: Timestamp,
        events: &mut Vec<BookEvent>,
    ) -> Result<(), BookError> {
        if shares == 0 {
            return Err(BookError::NonPositiveShares);
        }
        self.reduce(id, Some(shares), time, EventKind::Execution, events)
    }

    fn reduce(
        &mut self,
        id: OrderId,
        shares: Option<u64>,
        time: Timestamp,
        kind: EventKind,
        events: &mut Vec<BookEvent>,
    ) -> Result<(), BookError> {
        let (side, price) = *self.index.get(&id).ok_or(BookError::UnknownOrder(id))?;
        if shares == Some(0) {
            return Err(BookError::NonPositiveShares);
        }
        let before = self.best_pair();
        let (book_side, index) = self.side_and_index(side);
        let level = book_side.get_mut(&price).expect("indexed level exists");
        let pos = level
            .orders
            .iter()
            .position(|o| o.id == id)
            .expect("indexed order exists");
        let resident = level.orders[pos].shares;
        let removed = shares.unwrap_or(resident);
        if removed > resident {
            return Err(BookError::Oversized {
                id,
                requested: removed,
                resident,
            });
        }
        level.volume -= removed;
        if removed == resident {
            level.orders.remove(pos);
            if level.orders.is_empty() {
                book_side.remove(&price);
            }
            index.remove(&id);
        } else {
            level.orders[pos].shares -= removed;
        }
        events.push(BookEvent {
            kind,
            time,
            side,
            price,
            delta: -(removed as i64),
            order_id: id,
            aggressor_id: None,
        });
        self.push_price_changes(before, time, id, events);
        Ok(())
    }

    fn best_pair(&self) -> (Option<Price>, Option<Price>) {
        (self.best_bid(), self.best_ask())
    }

    fn push_price_changes(
        &self,
        before: (Option<Price>, Option<Price>),
        time: Timestamp,
        order_id: OrderId,
        events: &mut Vec<BookEvent>,
    ) {
        let after = self.best_pair();
        for (side, previous, current) in [(Side::Buy, before.0, after.0), (Side::Sell, before.1, after.1)] {
            if previous != current {
                events.push(BookEvent {
                    kind: EventKind::PriceChange { previous, current },
                    time,
                    side,
                    price: current.or(previous).expect("one of the prices exists"),
                    delta: 0,
                    order_id,
                    aggressor_id: None,
                });
            }
        }
    }

    /// Checks the structural invariants. Intended for tests and debugging.
    pub fn check_invariants(&self) -> Result<(), String> {
        if let (Some(b), Some(a)) = (self.best_bid(), self.best_ask()) {
            if b >= a {
                return Err(format!("crossed book: bid {b} >= ask {a}"));
            }
        }
        let mut counted = 0;
        for side in [Side::Buy, Side::Sell] {
            for (price, level) in self.side(side) {
                if level.orders.is_empty() {
                    return Err(format!("empty {side} level at {price}"));
                }
                let sum: u64 = level.orders.iter().map(|o| o.shares).sum();
                if sum != level.volume {
                    return Err(format!("{side} level {price}: volume {} != sum {sum}", level.volume));
                }
                let mut last_seq = 0;
                for o in &level.orders {
                    if o.shares == 0 || o.side != side || o.price != *price {
                        return Err(format!("malformed order {:?} at {side} {price}", o));
                    }
                    if o.entry_seq <= last_seq {
                        return Err(format!("FIFO order violated at {side} {price}"));
                    }
                    last_seq = o.entry_seq;
                    if self.index.get(&o.id) != Some(&(side, *price)) {
                        return Err(format!("index out of sync for order {}", o.id));
                    }
                }
                counted += level.orders.len();
            }
        }
        if counted != self.index.len() {
            return Err(format!("index has {} orders, levels hold {counted}", self.index.len()));
        }
        Ok(())
    }
}

/// Two books are equal when they hold the same orders (id, side, price,
/// remaining size) in the same queue order. Sequence counters are
/// bookkeeping and are ignored.
impl PartialEq for Book {
    fn eq(&self, other: &Self) -> bool {
        fn same(a: &BTreeMap<Price, Level>, b: &BTreeMap<Price, Level>) -> bool {
            a.len() == b.len()
                && a.iter().zip(b.iter()).all(|((pa, la), (pb, lb))| {
                    pa == pb
                        && la.volume == lb.volume
                        && la.orders.len() == lb.orders.len()
                        && la
                            .orders
                            .iter()
                            .zip(lb.orders.iter())
                            .all(|(x, y)| x.id == y.id && x.shares == y.shares)
                })
        }
        self.tick == other.tick && same(&self.bids, &other.bids) && same(&self.asks, &other.asks)
    }
}

impl Eq for Book {}
