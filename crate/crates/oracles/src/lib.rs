//! Slow, obviously-correct reference implementations for tests.
//!
//! Nothing here shares code with `lobkit-core` beyond plain data types.

use std::collections::HashMap;

use lobkit_core::market_data::{MessageType, RawMessage};
use lobkit_core::Side;

/// One fill reported by the brute-force matcher.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Trade {
    pub aggressor: u64,
    pub resting: u64,
    pub price: i64,
    pub shares: u64,
}

#[derive(Debug, Clone, Copy)]
struct Resting {
    id: u64,
    side: Side,
    price: i64,
    shares: u64,
    seq: u64,
}

/// Matching engine that keeps a flat list of orders and rescans it for
/// every fill.
#[derive(Debug, Default, Clone)]
pub struct BruteBook {
    orders: Vec<Resting>,
    seq: u64,
}

impl BruteBook {
    pub fn new() -> Self {
        Self::default()
    }

    fn crosses(side: Side, limit: i64, resting: i64) -> bool {
        match side {
            Side::Buy => resting <= limit,
            Side::Sell => resting >= limit,
        }
    }

    fn better(side: Side, a: i64, b: i64) -> bool {
        match side {
            Side::Buy => a > b,
            Side::Sell => a < b,
        }
    }

    /// Matches and rests; returns the fills in execution order.
    pub fn submit(&mut self, id: u64, side: Side, price: i64, mut shares: u64) -> Vec<Trade> {
        let mut trades = Vec::new();
        while shares > 0 {
            let mut pick: Option<usize> = None;
            for (i, o) in self.orders.iter().enumerate() {
                if o.side == side || !Self::crosses(side, price, o.price) {
                    continue;
                }
                pick = match pick {
                    None => Some(i),
                    Some(j) => {
                        let p = &self.orders[j];
                        if Self::better(o.side, o.price, p.price) || (o.price == p.price && o.seq < p.seq) {
                            Some(i)
                        } else {
                            Some(j)
                        }
                    }
                };
            }
            let Some(i) = pick else { break };
            let fill = shares.min(self.orders[i].shares);
            trades.push(Trade {
                aggressor: id,
                resting: self.orders[i].id,
                price: self.orders[i].price,
                shares: fill,
            });
            shares -= fill;
            self.orders[i].shares -= fill;
            if self.orders[i].shares == 0 {
                self.orders.remove(i);
            }
        }
        if shares > 0 {
            self.seq += 1;
            self.orders.push(Resting {
                id,
                side,
                price,
                shares,
                seq: self.seq,
            });
        }
        trades
    }

    /// Removes `shares` (or everything) from a resting order.
    pub fn cancel(&mut self, id: u64, shares: Option<u64>) -> bool {
        let Some(i) = self.orders.iter().position(|o| o.id == id) else {
            return false;
        };
        let cut = shares.unwrap_or(self.orders[i].shares);
        if cut > self.orders[i].shares {
            return false;
        }
        self.orders[i].shares -= cut;
        if self.orders[i].shares == 0 {
            self.orders.remove(i);
        }
        true
    }

    pub fn resting_ids(&self) -> Vec<u64> {
        self.orders.iter().map(|o| o.id).collect()
    }

    /// `(id, price, shares)` in priority order: best price first, then
    /// arrival order.
    pub fn side_in_priority(&self, side: Side) -> Vec<(u64, i64, u64)> {
        let mut v: Vec<&Resting> = self.orders.iter().filter(|o| o.side == side).collect();
        v.sort_by(|a, b| {
            let by_price = match side {
                Side::Buy => b.price.cmp(&a.price),
                Side::Sell => a.price.cmp(&b.price),
            };
            by_price.then(a.seq.cmp(&b.seq))
        });
        v.into_iter().map(|o| (o.id, o.price, o.shares)).collect()
    }
}

/// Best price and volume on one side, `None` when the side is empty.
pub type BestLevel = Option<(i64, u64)>;

/// Book keyed by order id; every query scans all resting orders.
#[derive(Debug, Default, Clone)]
pub struct NaiveBook {
    orders: HashMap<u64, (Side, i64, u64)>,
}

impl NaiveBook {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn apply(&mut self, m: &RawMessage) {
        match m.msg_type {
            MessageType::NewLimit => {
                self.orders.insert(m.order_id, (m.direction, m.price, m.shares));
            }
            MessageType::PartialCancel | MessageType::Delete | MessageType::ExecuteVisible => {
                let o = self.orders.get_mut(&m.order_id).expect("known order");
                o.2 -= if m.msg_type == MessageType::Delete {
                    o.2
                } else {
                    m.shares
                };
                if o.2 == 0 {
                    self.orders.remove(&m.order_id);
                }
            }
            MessageType::ExecuteHidden | MessageType::Halt => {}
        }
    }

    pub fn best(&self, side: Side) -> BestLevel {
        let price = self
            .orders
            .values()
            .filter(|o| o.0 == side)
            .map(|o| o.1)
            .reduce(|a, b| match side {
                Side::Buy => a.max(b),
                Side::Sell => a.min(b),
            })?;
        let volume = self
            .orders
            .values()
            .filter(|o| o.0 == side && o.1 == price)
            .map(|o| o.2)
            .sum();
        Some((price, volume))
    }

    pub fn volume_at_best(&self, side: Side) -> u64 {
        self.best(side).map_or(0, |b| b.1)
    }
}

/// Number of leading messages with time `<= t`.
pub fn prefix_at_time(messages: &[RawMessage], t: u64) -> usize {
    messages.iter().take_while(|m| m.time.nanos() <= t).count()
}

/// `(bid, ask)` best levels after applying each requested message prefix.
/// `prefixes` must be non-decreasing.
pub fn best_levels_at_prefixes(messages: &[RawMessage], prefixes: &[usize]) -> Vec<(BestLevel, BestLevel)> {
    let mut book = NaiveBook::new();
    let mut applied = 0;
    prefixes
        .iter()
        .map(|&p| {
            assert!(p >= applied, "prefixes must be sorted");
            for m in &messages[applied..p] {
                book.apply(m);
            }
            applied = p;
            (book.best(Side::Buy), book.best(Side::Sell))
        })
        .collect()
}

/// Per-message contribution to the relaxed flow on `side`, phrased in terms
/// of best-level volumes rather than individual order deltas:
/// unchanged best price contributes the volume change; an improving quote
/// contributes the arriving size; a retreating quote contributes minus the
/// volume that left.
pub fn relaxed_contributions(messages: &[RawMessage], side: Side) -> Vec<i64> {
    let mut book = NaiveBook::new();
    messages
        .iter()
        .map(|m| {
            let before = book.best(side);
            book.apply(m);
            let after = book.best(side);
            match (before, after) {
                (Some((pb, vb)), Some((pa, va))) if pb == pa => va as i64 - vb as i64,
                (None, None) => 0,
                (Some((pb, vb)), Some((pa, _))) => {
                    let improved = match side {
                        Side::Buy => pa > pb,
                        Side::Sell => pa < pb,
                    };
                    if improved {
                        m.shares as i64
                    } else {
                        -(vb as i64)
                    }
                }
                (None, Some(_)) => m.shares as i64,
                (Some((_, vb)), None) => -(vb as i64),
            }
        })
        .collect()
}

/// Market orders read straight off the message rows: runs of visible
/// executions sharing a timestamp and resting side.
/// Returns `(time, aggressor direction, shares)`.
pub fn scan_market_orders(messages: &[RawMessage]) -> Vec<(u64, Side, u64)> {
    let mut out: Vec<(u64, Side, u64)> = Vec::new();
    let mut prev_fill = false;
    for m in messages {
        let fill = m.msg_type == MessageType::ExecuteVisible;
        if fill {
            let dir = m.direction.opposite();
            match out.last_mut() {
                Some(last) if prev_fill && last.0 == m.time.nanos() && last.1 == dir => last.2 += m.shares,
                _ => out.push((m.time.nanos(), dir, m.shares)),
            }
        }
        prev_fill = fill;
    }
    out
}

/// Indices `i` with `times[i + 1] - times[i] >= separation`.
pub fn separated_indices(times: &[u64], separation: u64) -> Vec<usize> {
    let mut out = Vec::new();
    for i in 0..times.len().saturating_sub(1) {
        if times[i + 1] - times[i] >= separation {
            out.push(i);
        }
    }
    out
}

/// Trapezoid rule over `(t, value)` samples; a jump is represented by two
/// samples at the same `t`.
pub fn trapezoid(points: &[(f64, f64)]) -> f64 {
    points
        .windows(2)
        .map(|w| (w[1].0 - w[0].0) * (w[0].1 + w[1].1) / 2.0)
        .sum()
}

/// Dvoretzky–Kiefer–Wolfowitz band half-width at confidence `1 - alpha`.
pub fn dkw_epsilon(n: usize, alpha: f64) -> f64 {
    ((2.0 / alpha).ln() / (2.0 * n as f64)).sqrt()
}

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Sample standard deviation (divisor `n - 1`).
pub fn sample_std(xs: &[f64]) -> f64 {
    let m = mean(xs);
    (xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (xs.len() as f64 - 1.0)).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn brute_matcher_walks_levels_in_priority() {
        let mut b = BruteBook::new();
        assert!(b.submit(1, Side::Sell, 101, 5).is_empty());
        assert!(b.submit(2, Side::Sell, 101, 5).is_empty());
        assert!(b.submit(3, Side::Sell, 100, 2).is_empty());
        let t = b.submit(4, Side::Buy, 101, 10);
        let fills: Vec<(u64, i64, u64)> = t.iter().map(|t| (t.resting, t.price, t.shares)).collect();
        assert_eq!(fills, vec![(3, 100, 2), (1, 101, 5), (2, 101, 3)]);
        assert_eq!(b.side_in_priority(Side::Sell), vec![(2, 101, 2)]);
    }

    #[test]
    fn trapezoid_of_step_function() {
        let pts = [(0.0, 2.0), (1.0, 2.0), (1.0, 4.0), (3.0, 4.0)];
        assert_eq!(trapezoid(&pts), 10.0);
    }

    #[test]
    fn separated_indices_example() {
        assert_eq!(separated_indices(&[0, 500, 2000], 1000), vec![1]);
    }
}
