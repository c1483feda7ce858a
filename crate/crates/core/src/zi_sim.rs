//! Zero-intelligence order flow.
//!
//! Limit arrivals, market arrivals and cancellations are independent Poisson
//! processes with fixed rates. Limit prices are uniform over a band of `L`
//! ticks measured from the opposite best quote, cancellations hit a
//! uniformly chosen resting order, and market orders walk the opposite side
//! in price-time priority. The simulator writes exactly the message format
//! of [`crate::market_data`], so its output can be replayed and validated.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::str::FromStr;

use log::debug;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{weighted::WeightedIndex, Distribution, Exp1};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::book::{Book, BookEvent, QuoteSnapshot};
use crate::market_data::{MessageType, RawMessage, SnapshotRow};
use crate::types::{OrderId, Price, Side, Timestamp, NANOS_PER_SEC};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConfigError {
    #[error("unknown config keys: {}", .0.join(", "))]
    UnknownKeys(Vec<String>),
    #[error("invalid value for {key}: {reason}")]
    InvalidValue { key: String, reason: String },
    #[error("line {0}: expected key=value")]
    Syntax(usize),
}

fn invalid(key: &str, reason: impl Into<String>) -> ConfigError {
    ConfigError::InvalidValue {
        key: key.to_string(),
        reason: reason.into(),
    }
}

/// Discrete order-size distribution in shares.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum SizeDistribution {
    /// Every multiple of `step` in `low..=high`, equally likely.
    Uniform { low: u64, high: u64, step: u64 },
    /// Explicit `(size, weight)` pairs.
    Weighted(Vec<(u64, f64)>),
}

impl Default for SizeDistribution {
    /// {1..10} x 100 shares, uniform.
    fn default() -> Self {
        SizeDistribution::Uniform {
            low: 100,
            high: 1000,
            step: 100,
        }
    }
}

impl SizeDistribution {
    fn validate(&self, key: &str) -> Result<(), ConfigError> {
        match self {
            SizeDistribution::Uniform { low, high, step } => {
                if *low == 0 || *step == 0 || high < low || (high - low) % step != 0 {
                    return Err(invalid(
                        key,
                        "uniform sizes need 0 < low <= high and step dividing high-low",
                    ));
                }
            }
            SizeDistribution::Weighted(pairs) => {
                if pairs.is_empty()
                    || pairs.iter().any(|(s, w)| *s == 0 || !w.is_finite() || *w < 0.0)
                    || pairs.iter().all(|(_, w)| *w == 0.0)
                {
                    return Err(invalid(
                        key,
                        "weighted sizes need positive sizes and non-negative weights",
                    ));
                }
            }
        }
        Ok(())
    }

    pub fn mean(&self) -> f64 {
        match self {
            SizeDistribution::Uniform { low, high, .. } => (*low + *high) as f64 / 2.0,
            SizeDistribution::Weighted(pairs) => {
                let total: f64 = pairs.iter().map(|(_, w)| w).sum();
                pairs.iter().map(|(s, w)| *s as f64 * w).sum::<f64>() / total
            }
        }
    }

    fn sampler(&self) -> SizeSampler {
        match self {
            SizeDistribution::Uniform { low, high, step } => SizeSampler::Uniform {
                low: *low,
                count: (high - low) / step + 1,
                step: *step,
            },
            SizeDistribution::Weighted(pairs) => SizeSampler::Weighted {
                sizes: pairs.iter().map(|(s, _)| *s).collect(),
                index: WeightedIndex::new(pairs.iter().map(|(_, w)| *w)).expect("validated weights"),
            },
        }
    }
}

impl std::fmt::Display for SizeDistribution {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SizeDistribution::Uniform { low, high, step } => write!(f, "uniform:{low}:{high}:{step}"),
            SizeDistribution::Weighted(pairs) => {
                for (i, (s, w)) in pairs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{s}@{w}")?;
                }
                Ok(())
            }
        }
    }
}

impl FromStr for SizeDistribution {
    type Err = String;

    /// `uniform:LOW:HIGH:STEP`, or `SIZE@WEIGHT,SIZE@WEIGHT,...`, or a
    /// single fixed size.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if let Some(rest) = s.strip_prefix("uniform:") {
            let parts: Vec<&str> = rest.split(':').collect();
            let nums: Result<Vec<u64>, _> = parts.iter().map(|p| p.trim().parse::<u64>()).collect();
            return match nums.as_deref() {
                Ok([low, high, step]) => Ok(SizeDistribution::Uniform {
                    low: *low,
                    high: *high,
                    step: *step,
                }),
                Ok([low, high]) => Ok(SizeDistribution::Uniform {
                    low: *low,
                    high: *high,
                    step: 1,
                }),
                _ => Err(format!("expected uniform:LOW:HIGH[:STEP], got {s:?}")),
            };
        }
        let mut pairs = Vec::new();
        for item in s.split(',') {
            let (size, weight) = match item.split_once('@') {
                Some((a, b)) => (
                    a,
                    b.trim().parse::<f64>().map_err(|_| format!("bad weight in {item:?}"))?,
                ),
                None => (item, 1.0),
            };
            let size = size
                .trim()
                .parse::<u64>()
                .map_err(|_| format!("bad size in {item:?}"))?;
            pairs.push((size, weight));
        }
        Ok(SizeDistribution::Weighted(pairs))
    }
}

enum SizeSampler {
    Uniform { low: u64, count: u64, step: u64 },
    Weighted { sizes: Vec<u64>, index: WeightedIndex<f64> },
}

impl SizeSampler {
    fn sample(&self, rng: &mut ChaCha8Rng) -> u64 {
        match self {
            SizeSampler::Uniform { low, count, step } => low + step * rng.random_range(0..*count),
            SizeSampler::Weighted { sizes, index } => sizes[index.sample(rng)],
        }
    }
}

/// Rate parameters and initial conditions of a simulated day.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZiConfig {
    /// Limit arrivals per second, per price level in the band, per side.
    pub limit_rate: f64,
    /// Market arrivals per second, per side.
    pub market_rate: f64,
    /// Cancellations per second, per resting order.
    pub cancel_rate: f64,
    /// Band width `L` in ticks, measured from the opposite best quote.
    pub levels: u32,
    pub order_sizes: SizeDistribution,
    /// Market order sizes; defaults to `order_sizes`.
    pub market_sizes: Option<SizeDistribution>,
    pub tick: i64,
    /// Initial best bid; the initial ask is one tick above.
    pub initial_bid: i64,
    /// Orders per level on each of the `L` initial levels per side, and the
    /// number of orders placed when reseeding a depleted side.
    pub initial_depth: u32,
    pub latency_floor_ns: u64,
    pub horizon_secs: f64,
    pub start_time: Timestamp,
    pub seed: u64,
    /// Snapshot depth `k` emitted alongside messages.
    pub snapshot_levels: usize,
}

impl Default for ZiConfig {
    fn default() -> Self {
        ZiConfig {
            limit_rate: 1.0,
            market_rate: 0.1,
            cancel_rate: 0.05,
            levels: 5,
            order_sizes: SizeDistribution::default(),
            market_sizes: None,
            tick: 100,
            initial_bid: 100_000,
            initial_depth: 5,
            latency_floor_ns: 0,
            horizon_secs: 600.0,
            // 1000 s after the 09:30 open, the start of the default analysis window
            start_time: Timestamp::from_secs(35_200),
            seed: 1,
            snapshot_levels: 5,
        }
    }
}

const CONFIG_KEYS: &[&str] = &[
    "limit_rate",
    "market_rate",
    "cancel_rate",
    "levels",
    "order_sizes",
    "market_sizes",
    "tick",
    "initial_bid",
    "initial_depth",
    "latency_floor_ns",
    "horizon",
    "start_time",
    "seed",
    "snapshot_levels",
];

impl ZiConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        for (key, rate) in [
            ("limit_rate", self.limit_rate),
            ("market_rate", self.market_rate),
            ("cancel_rate", self.cancel_rate),
        ] {
            if !rate.is_finite() || rate < 0.0 {
                return Err(invalid(key, "rates must be finite and >= 0"));
            }
        }
        if self.levels == 0 {
            return Err(invalid("levels", "must be >= 1"));
        }
        if !(self.horizon_secs.is_finite() && self.horizon_secs > 0.0) {
            return Err(invalid("horizon", "must be > 0"));
        }
        if self.tick <= 0 {
            return Err(invalid("tick", "must be > 0"));
        }
        if self.initial_bid <= 0 || self.initial_bid % self.tick != 0 {
            return Err(invalid("initial_bid", "must be a positive multiple of the tick"));
        }
        if self.initial_depth == 0 {
            return Err(invalid("initial_depth", "must be >= 1"));
        }
        self.order_sizes.validate("order_sizes")?;
        if let Some(m) = &self.market_sizes {
            m.validate("market_sizes")?;
        }
        Ok(())
    }

    /// Applies one `key=value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        fn num<T: FromStr>(key: &str, v: &str) -> Result<T, ConfigError> {
            v.trim()
                .parse()
                .map_err(|_| invalid(key, format!("cannot parse {v:?}")))
        }
        match key {
            "limit_rate" => self.limit_rate = num(key, value)?,
            "market_rate" => self.market_rate = num(key, value)?,
            "cancel_rate" => self.cancel_rate = num(key, value)?,
            "levels" => self.levels = num(key, value)?,
            "order_sizes" => self.order_sizes = value.parse().map_err(|e: String| invalid(key, e))?,
            "market_sizes" => {
                self.market_sizes = if value.trim().is_empty() {
                    None
                } else {
                    Some(value.parse().map_err(|e: String| invalid(key, e))?)
                }
            }
            "tick" => self.tick = num(key, value)?,
            "initial_bid" => self.initial_bid = num(key, value)?,
            "initial_depth" => self.initial_depth = num(key, value)?,
            "latency_floor_ns" => self.latency_floor_ns = num(key, value)?,
            "horizon" => self.horizon_secs = num(key, value)?,
            "start_time" => {
                self.start_time = crate::market_data::parse_time(value.trim()).map_err(|e| invalid(key, e))?
            }
            "seed" => self.seed = num(key, value)?,
            "snapshot_levels" => self.snapshot_levels = num(key, value)?,
            _ => return Err(ConfigError::UnknownKeys(vec![key.to_string()])),
        }
        Ok(())
    }

    /// Parses a plain-text `key = value` file; `#` starts a comment.
    /// Unknown keys are collected and reported together.
    pub fn from_kv_str(text: &str) -> Result<Self, ConfigError> {
        let mut cfg = ZiConfig::default();
        let mut unknown = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or(ConfigError::Syntax(i + 1))?;
            let k = k.trim();
            if !CONFIG_KEYS.contains(&k) {
                unknown.push(k.to_string());
                continue;
            }
            cfg.set(k, v.trim())?;
        }
        if !unknown.is_empty() {
            return Err(ConfigError::UnknownKeys(unknown));
        }
        cfg.validate()?;
        Ok(cfg)
    }

    /// Serializes to the key-value format accepted by [`ZiConfig::from_kv_str`].
    pub fn to_kv_string(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "limit_rate = {}", self.limit_rate);
        let _ = writeln!(s, "market_rate = {}", self.market_rate);
        let _ = writeln!(s, "cancel_rate = {}", self.cancel_rate);
        let _ = writeln!(s, "levels = {}", self.levels);
        let _ = writeln!(s, "order_sizes = {}", self.order_sizes);
        let _ = writeln!(
            s,
            "market_sizes = {}",
            self.market_sizes.as_ref().map(|m| m.to_string()).unwrap_or_default()
        );
        let _ = writeln!(s, "tick = {}", self.tick);
        let _ = writeln!(s, "initial_bid = {}", self.initial_bid);
        let _ = writeln!(s, "initial_depth = {}", self.initial_depth);
        let _ = writeln!(s, "latency_floor_ns = {}", self.latency_floor_ns);
        let _ = writeln!(s, "horizon = {}", self.horizon_secs);
        let _ = writeln!(s, "start_time = {}", self.start_time);
        let _ = writeln!(s, "seed = {}", self.seed);
        let _ = writeln!(s, "snapshot_levels = {}", self.snapshot_levels);
        s
    }

    /// Total event rate for a book holding `resting` orders.
    pub fn total_rate(&self, resting: usize) -> f64 {
        2.0 * self.levels as f64 * self.limit_rate + 2.0 * self.market_rate + self.cancel_rate * resting as f64
    }
}

/// A market order as generated by the simulator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimMarketOrder {
    /// Message time (after the latency floor).
    pub time: Timestamp,
    /// Aggressor direction.
    pub direction: Side,
    pub total_shares: u64,
    pub fills: usize,
    pub price_maintaining: bool,
}

/// A depleted side was refilled at its last quote.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Reseed {
    pub time: Timestamp,
    pub side: Side,
    pub price: Price,
    pub orders: u32,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EventCounts {
    pub limit: u64,
    pub market: u64,
    pub cancel: u64,
}

/// Everything but the per-message streams, which go to the sink.
#[derive(Debug, Clone)]
pub struct SimSummary {
    pub initial_book: Book,
    pub final_book: Book,
    /// Number of leading messages that build the initial book.
    pub seed_message_count: usize,
    pub market_orders: Vec<SimMarketOrder>,
    pub reseeds: Vec<Reseed>,
    pub counts: EventCounts,
}

#[derive(Debug, Clone)]
pub struct SimOutput {
    /// Type-1 rows that build the initial book from empty, at `start_time`.
    pub seed_messages: Vec<RawMessage>,
    pub seed_snapshots: Vec<SnapshotRow>,
    /// The simulated flow, starting from `initial_book`.
    pub messages: Vec<RawMessage>,
    /// One row per entry of `messages` (empty when `snapshot_levels` is 0).
    pub snapshots: Vec<SnapshotRow>,
    pub initial_book: Book,
    pub final_book: Book,
    pub market_orders: Vec<SimMarketOrder>,
    pub reseeds: Vec<Reseed>,
    pub counts: EventCounts,
}

impl SimOutput {
    /// Seed rows followed by the simulated flow, replayable from an empty book.
    pub fn full_messages(&self) -> impl Iterator<Item = &RawMessage> + '_ {
        self.seed_messages.iter().chain(&self.messages)
    }

    pub fn full_snapshots(&self) -> impl Iterator<Item = &SnapshotRow> + '_ {
        self.seed_snapshots.iter().chain(&self.snapshots)
    }
}

/// Delays events so consecutive distinct event times are at least `floor`
/// apart. Messages sharing an input timestamp are one event and stay
/// together.
#[derive(Debug, Clone)]
pub struct LatencyFloor {
    floor: u64,
    last_in: Option<Timestamp>,
    last_out: Timestamp,
}

impl LatencyFloor {
    pub fn new(floor_ns: u64) -> Self {
        LatencyFloor {
            floor: floor_ns,
            last_in: None,
            last_out: Timestamp(0),
        }
    }

    pub fn apply(&mut self, t: Timestamp) -> Timestamp {
        let out = match self.last_in {
            None => t,
            Some(prev) if prev == t => self.last_out,
            Some(_) => t.max(self.last_out.saturating_add(self.floor)),
        };
        self.last_in = Some(t);
        self.last_out = out;
        out
    }
}

pub fn inject_latency_floor(messages: &[RawMessage], floor_ns: u64) -> Vec<RawMessage> {
    let mut floor = LatencyFloor::new(floor_ns);
    messages
        .iter()
        .map(|m| RawMessage {
            time: floor.apply(m.time),
            ..*m
        })
        .collect()
}

struct Sim<'a, F> {
    cfg: &'a ZiConfig,
    rng: ChaCha8Rng,
    book: Book,
    limit_sizes: SizeSampler,
    market_sizes: SizeSampler,
    resting: Vec<OrderId>,
    position: HashMap<OrderId, usize>,
    next_id: OrderId,
    last_bid: Price,
    last_ask: Price,
    floor: LatencyFloor,
    scratch: Vec<BookEvent>,
    sink: F,
    market_orders: Vec<SimMarketOrder>,
    reseeds: Vec<Reseed>,
    counts: EventCounts,
    emitted: usize,
}

impl<F: FnMut(&RawMessage, &Book)> Sim<'_, F> {
    fn emit(&mut self, msg: RawMessage) {
        (self.sink)(&msg, &self.book);
        self.emitted += 1;
    }

    fn track(&mut self, id: OrderId) {
        self.position.insert(id, self.resting.len());
        self.resting.push(id);
    }

    fn untrack(&mut self, id: OrderId) {
        let idx = self.position.remove(&id).expect("tracked order");
        self.resting.swap_remove(idx);
        if let Some(&moved) = self.resting.get(idx) {
            self.position.insert(moved, idx);
        }
    }

    fn add_limit(&mut self, side: Side, price: Price, shares: u64, time: Timestamp) {
        let id = self.next_id;
        self.next_id += 1;
        self.scratch.clear();
        self.book
            .add_resting_into(id, side, price, shares, time, &mut self.scratch)
            .expect("simulated limit orders never cross");
        self.track(id);
        self.emit(RawMessage {
            time,
            msg_type: MessageType::NewLimit,
            order_id: id,
            shares,
            price: price.units(),
            direction: side,
        });
    }

    fn remember_quotes(&mut self) {
        if let Some(b) = self.book.best_bid() {
            self.last_bid = b;
        }
        if let Some(a) = self.book.best_ask() {
            self.last_ask = a;
        }
    }

    fn reseed_if_empty(&mut self, time: Timestamp) {
        for side in [Side::Buy, Side::Sell] {
            if self.book.best(side).is_none() {
                let price = match side {
                    Side::Buy => self.last_bid,
                    Side::Sell => self.last_ask,
                };
                debug!("reseeding empty {side} side at {price} (t={time})");
                for _ in 0..self.cfg.initial_depth {
                    let shares = self.limit_sizes.sample(&mut self.rng);
                    self.add_limit(side, price, shares, time);
                }
                self.reseeds.push(Reseed {
                    time,
                    side,
                    price,
                    orders: self.cfg.initial_depth,
                });
            }
        }
    }

    fn limit_arrival(&mut self, time: Timestamp) {
        let side = if self.rng.random::<bool>() {
            Side::Buy
        } else {
            Side::Sell
        };
        let k = self.rng.random_range(1..=self.cfg.levels) as i64;
        let tick = self.cfg.tick;
        let price = match side {
            Side::Buy => (self.book.best_ask().unwrap_or(self.last_ask).units() - k * tick).max(tick),
            Side::Sell => self.book.best_bid().unwrap_or(self.last_bid).units() + k * tick,
        };
        let shares = self.limit_sizes.sample(&mut self.rng);
        self.add_limit(side, Price(price), shares, time);
        self.counts.limit += 1;
    }

    fn market_arrival(&mut self, time: Timestamp) {
        let direction = if self.rng.random::<bool>() {
            Side::Buy
        } else {
            Side::Sell
        };
        let resting_side = direction.opposite();
        let wanted = self.market_sizes.sample(&mut self.rng);
        let available = self.book.total_volume(resting_side);
        let mut remaining = wanted.min(available);
        let total = remaining;
        let pre: QuoteSnapshot = self.book.quotes();
        let mut fills = 0;
        while remaining > 0 {
            let front = *self.book.orders(resting_side).next().expect("volume available");
            let fill = remaining.min(front.shares);
            self.scratch.clear();
            self.book
                .execute_into(front.id, fill, time, &mut self.scratch)
                .expect("front order is resident");
            if fill == front.shares {
                self.untrack(front.id);
            }
            remaining -= fill;
            fills += 1;
            self.emit(RawMessage {
                time,
                msg_type: MessageType::ExecuteVisible,
                order_id: front.id,
                shares: fill,
                price: front.price.units(),
                direction: resting_side,
            });
        }
        let post = self.book.quotes();
        self.counts.market += 1;
        if fills > 0 {
            self.market_orders.push(SimMarketOrder {
                time,
                direction,
                total_shares: total,
                fills,
                price_maintaining: pre.same_prices(&post),
            });
        }
    }

    fn cancellation(&mut self, time: Timestamp) {
        let id = self.resting[self.rng.random_range(0..self.resting.len())];
        let order = *self.book.order(id).expect("tracked orders are resident");
        self.scratch.clear();
        self.book
            .cancel_into(id, None, time, &mut self.scratch)
            .expect("tracked orders are resident");
        self.untrack(id);
        self.counts.cancel += 1;
        self.emit(RawMessage {
            time,
            msg_type: MessageType::Delete,
            order_id: id,
            shares: order.shares,
            price: order.price.units(),
            direction: order.side,
        });
    }
}

/// Runs the simulation, handing every message and the book state right after
/// it to `sink`. The initial book is emitted first as type-1 rows at
/// `start_time`.
pub fn simulate_into<F>(config: &ZiConfig, sink: F) -> Result<SimSummary, ConfigError>
where
    F: FnMut(&RawMessage, &Book),
{
    config.validate()?;
    let tick = config.tick;
    let mut sim = Sim {
        cfg: config,
        rng: ChaCha8Rng::seed_from_u64(config.seed),
        book: Book::new(tick),
        limit_sizes: config.order_sizes.sampler(),
        market_sizes: config.market_sizes.as_ref().unwrap_or(&config.order_sizes).sampler(),
        resting: Vec::new(),
        position: HashMap::new(),
        next_id: 1,
        last_bid: Price(config.initial_bid),
        last_ask: Price(config.initial_bid + tick),
        floor: LatencyFloor::new(config.latency_floor_ns),
        scratch: Vec::with_capacity(4),
        sink,
        market_orders: Vec::new(),
        reseeds: Vec::new(),
        counts: EventCounts::default(),
        emitted: 0,
    };

    let start = config.start_time;
    for level in 0..config.levels as i64 {
        for side in [Side::Buy, Side::Sell] {
            let price = match side {
                Side::Buy => config.initial_bid - level * tick,
                Side::Sell => config.initial_bid + tick + level * tick,
            };
            if price <= 0 {
                continue;
            }
            for _ in 0..config.initial_depth {
                let shares = sim.limit_sizes.sample(&mut sim.rng);
                sim.add_limit(side, Price(price), shares, start);
            }
        }
    }
    let initial_book = sim.book.clone();
    let seed_message_count = sim.emitted;
    sim.floor.apply(start);

    let end_ns = start.nanos() as f64 + config.horizon_secs * NANOS_PER_SEC as f64;
    let limit_total = 2.0 * config.levels as f64 * config.limit_rate;
    let market_total = 2.0 * config.market_rate;
    let mut clock = start.nanos();
    loop {
        let cancel_total = config.cancel_rate * sim.resting.len() as f64;
        let total = limit_total + market_total + cancel_total;
        if total <= 0.0 {
            break;
        }
        let gap: f64 = sim.rng.sample::<f64, _>(Exp1) / total;
        let gap_ns = (gap * NANOS_PER_SEC as f64).round().max(1.0);
        if clock as f64 + gap_ns > end_ns {
            break;
        }
        clock += gap_ns as u64;
        let time = sim.floor.apply(Timestamp(clock));
        let u = sim.rng.random::<f64>() * total;
        if u < limit_total {
            sim.limit_arrival(time);
        } else if u < limit_total + market_total {
            sim.market_arrival(time);
        } else {
            sim.cancellation(time);
        }
        sim.reseed_if_empty(time);
        sim.remember_quotes();
    }

    Ok(SimSummary {
        initial_book,
        final_book: sim.book,
        seed_message_count,
        market_orders: sim.market_orders,
        reseeds: sim.reseeds,
        counts: sim.counts,
    })
}

/// Runs the simulation and collects all streams in memory.
pub fn simulate_day(config: &ZiConfig) -> Result<SimOutput, ConfigError> {
    let k = config.snapshot_levels;
    let mut messages = Vec::new();
    let mut snapshots = Vec::new();
    let summary = simulate_into(config, |msg, book| {
        messages.push(*msg);
        if k > 0 {
            snapshots.push(SnapshotRow::from_book(book, k));
        }
    })?;
    let seed = summary.seed_message_count;
    let seed_snapshots = if k > 0 {
        snapshots.drain(..seed).collect()
    } else {
        Vec::new()
    };
    Ok(SimOutput {
        seed_messages: messages.drain(..seed).collect(),
        seed_snapshots,
        messages,
        snapshots,
        initial_book: summary.initial_book,
        final_book: summary.final_book,
        market_orders: summary.market_orders,
        reseeds: summary.reseeds,
        counts: summary.counts,
    })
}
