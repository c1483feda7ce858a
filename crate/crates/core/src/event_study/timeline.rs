//! Compact per-message record of volume changes at the best quotes.

use serde::{Deserialize, Serialize};

use super::detect::{link_gaps, MarketOrderDetector, MarketOrderEvent};
use crate::market_data::{DaySession, MessageType, Step};
use crate::types::{Side, Timestamp};

/// Half-open analysis window `[start, end)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TimeWindow {
    pub start: Timestamp,
    pub end: Timestamp,
}

impl TimeWindow {
    pub fn new(start: Timestamp, end: Timestamp) -> Self {
        assert!(start < end, "empty window");
        TimeWindow { start, end }
    }

    pub fn contains(&self, t: Timestamp) -> bool {
        self.start <= t && t < self.end
    }

    pub fn duration_ns(&self) -> u64 {
        self.end.nanos() - self.start.nanos()
    }
}

impl From<&DaySession> for TimeWindow {
    fn from(s: &DaySession) -> Self {
        TimeWindow::new(s.open_filter_start, s.open_filter_end)
    }
}

/// Signed change of best-quote volume caused by one message.
///
/// A change on side `S` counts when it happens at the best price of `S`
/// either before or after the message: limit arrivals at or improving the
/// quote, cancellations and fills at the quote, and volume wiped out when a
/// level empties.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FlowRecord {
    pub time: u64,
    pub bid_flow: i64,
    pub ask_flow: i64,
    pub quotes_changed: bool,
}

impl FlowRecord {
    pub fn from_step(step: &Step) -> Self {
        let mut rec = FlowRecord {
            time: step.message.time.nanos(),
            bid_flow: 0,
            ask_flow: 0,
            quotes_changed: step.quotes_changed(),
        };
        if let Some(ev) = step.event {
            let at_quote = step.before.best(ev.side) == Some(ev.price) || step.after.best(ev.side) == Some(ev.price);
            if at_quote {
                match ev.side {
                    Side::Buy => rec.bid_flow = ev.delta,
                    Side::Sell => rec.ask_flow = ev.delta,
                }
            }
        }
        rec
    }

    pub fn flow(&self, side: Side) -> i64 {
        match side {
            Side::Buy => self.bid_flow,
            Side::Sell => self.ask_flow,
        }
    }
}

/// Running time integral of best-quote volumes over a window.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct BasisIntegral {
    /// Share-nanoseconds resting at the best bid and best ask.
    pub bid_area: f64,
    pub ask_area: f64,
    /// Nanoseconds during which each side had a quote.
    pub bid_time: u64,
    pub ask_time: u64,
}

impl BasisIntegral {
    pub fn merge(&mut self, other: &BasisIntegral) {
        self.bid_area += other.bid_area;
        self.ask_area += other.ask_area;
        self.bid_time += other.bid_time;
        self.ask_time += other.ask_time;
    }

    /// Time-weighted mean best volume pooled over both sides.
    pub fn mean_best_volume(&self) -> Option<f64> {
        let time = self.bid_time + self.ask_time;
        (time > 0).then(|| (self.bid_area + self.ask_area) / time as f64)
    }
}

#[derive(Debug, Clone)]
struct BasisTracker {
    integral: BasisIntegral,
    window: Option<TimeWindow>,
    last_time: Option<u64>,
    bid_volume: Option<u64>,
    ask_volume: Option<u64>,
}

impl BasisTracker {
    fn advance(&mut self, to: u64) {
        let Some(from) = self.last_time else {
            self.last_time = Some(to);
            return;
        };
        let (lo, hi) = match self.window {
            Some(w) => (from.max(w.start.nanos()), to.min(w.end.nanos())),
            None => (from, to),
        };
        if hi > lo {
            let dt = hi - lo;
            if let Some(v) = self.bid_volume {
                self.integral.bid_area += v as f64 * dt as f64;
                self.integral.bid_time += dt;
            }
            if let Some(v) = self.ask_volume {
                self.integral.ask_area += v as f64 * dt as f64;
                self.integral.ask_time += dt;
            }
        }
        self.last_time = Some(to.max(from));
    }
}

/// Everything the event study needs from one replayed day.
#[derive(Debug, Clone)]
pub struct StudyDay {
    pub records: Vec<FlowRecord>,
    /// Market orders arriving inside the window, with gaps measured against
    /// every market order of the day.
    pub market_orders: Vec<MarketOrderEvent>,
    pub halts: Vec<u64>,
    pub window: Option<TimeWindow>,
    pub basis: BasisIntegral,
}

/// Incremental [`StudyDay`] construction from replayed steps.
#[derive(Debug)]
pub struct StudyDayBuilder {
    records: Vec<FlowRecord>,
    detector: MarketOrderDetector,
    orders: Vec<MarketOrderEvent>,
    halts: Vec<u64>,
    basis: BasisTracker,
}

impl StudyDayBuilder {
    pub fn new(window: Option<TimeWindow>) -> Self {
        StudyDayBuilder {
            records: Vec::new(),
            detector: MarketOrderDetector::new(),
            orders: Vec::new(),
            halts: Vec::new(),
            basis: BasisTracker {
                integral: BasisIntegral::default(),
                window,
                last_time: None,
                bid_volume: None,
                ask_volume: None,
            },
        }
    }

    pub fn with_capacity(window: Option<TimeWindow>, messages: usize) -> Self {
        let mut b = Self::new(window);
        b.records.reserve(messages);
        b
    }

    pub fn push(&mut self, step: &Step) {
        let t = step.message.time.nanos();
        if self.basis.last_time.is_none() {
            self.basis.bid_volume = step.before.bid.map(|_| step.before.bid_volume);
            self.basis.ask_volume = step.before.ask.map(|_| step.before.ask_volume);
        }
        self.basis.advance(t);
        self.basis.bid_volume = step.after.bid.map(|_| step.after.bid_volume);
        self.basis.ask_volume = step.after.ask.map(|_| step.after.ask_volume);
        if step.message.msg_type == MessageType::Halt {
            self.halts.push(t);
        }
        self.records.push(FlowRecord::from_step(step));
        if let Some(ev) = self.detector.push(step) {
            self.orders.push(ev);
        }
    }

    pub fn finish(mut self) -> StudyDay {
        self.orders.extend(self.detector.finish());
        link_gaps(&mut self.orders);
        let window = self.basis.window;
        if let Some(w) = window {
            self.basis.advance(w.end.nanos());
            self.orders.retain(|o| w.contains(o.time));
        }
        StudyDay {
            records: self.records,
            market_orders: self.orders,
            halts: self.halts,
            window,
            basis: self.basis.integral,
        }
    }
}

impl StudyDay {
    pub fn from_steps<'a>(steps: impl IntoIterator<Item = &'a Step>, window: Option<TimeWindow>) -> Self {
        let mut b = StudyDayBuilder::new(window);
        for s in steps {
            b.push(s);
        }
        b.finish()
    }
}
