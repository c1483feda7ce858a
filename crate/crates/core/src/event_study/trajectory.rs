use serde::{Deserialize, Serialize};

use super::detect::MarketOrderEvent;
use super::grid::LagGrid;
use super::timeline::StudyDay;
use crate::types::{Side, Timestamp};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Windows end at the first change of either best price.
    Strict,
    /// Windows run through quote changes, counting only at-quote flow.
    Relaxed,
}

impl std::str::FromStr for Mode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "strict" => Ok(Mode::Strict),
            "relaxed" => Ok(Mode::Relaxed),
            _ => Err(format!("unknown mode {s:?} (expected strict or relaxed)")),
        }
    }
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Mode::Strict => "strict",
            Mode::Relaxed => "relaxed",
        })
    }
}

/// Quote side relative to the market order: `Same` is the side it consumed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum QuoteSide {
    Same,
    Opposite,
}

impl QuoteSide {
    pub fn resolve(self, direction: Side) -> Side {
        match self {
            QuoteSide::Same => direction.opposite(),
            QuoteSide::Opposite => direction,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            QuoteSide::Same => "same",
            QuoteSide::Opposite => "opposite",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    After,
    Before,
}

impl Orientation {
    pub fn name(self) -> &'static str {
        match self {
            Orientation::After => "after",
            Orientation::Before => "before",
        }
    }
}

/// Cumulative net best-quote flow of one market order, sampled on a grid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NetFlowTrajectory {
    pub event_time: Timestamp,
    pub direction: Side,
    pub side: QuoteSide,
    pub orientation: Orientation,
    pub mode: Mode,
    /// `values[j]` is the flow at grid lag `j`; lags beyond the window are
    /// absent, so the vector may be shorter than the grid.
    pub values: Vec<i64>,
    pub horizon_ns: u64,
    pub terminated_by_quote_change: bool,
    /// The window was shortened by the session edge or a trading halt.
    pub clipped: bool,
}

struct Horizon {
    ns: u64,
    clipped: bool,
}

fn after_horizon(event: &MarketOrderEvent, day: &StudyDay, tau_max: u64) -> Horizon {
    let t = event.time.nanos();
    let mut ns = tau_max.min(event.next_gap_ns.unwrap_or(u64::MAX));
    let mut limit = u64::MAX;
    if let Some(w) = day.window {
        limit = w.end.nanos().saturating_sub(t + 1);
    }
    let next_halt = day.halts.partition_point(|&h| h <= t);
    if let Some(&h) = day.halts.get(next_halt) {
        limit = limit.min(h - t);
    }
    let clipped = limit < ns;
    ns = ns.min(limit);
    Horizon { ns, clipped }
}

fn before_horizon(event: &MarketOrderEvent, day: &StudyDay, tau_max: u64) -> Horizon {
    let t = event.time.nanos();
    let mut ns = tau_max.min(event.prev_gap_ns.unwrap_or(u64::MAX));
    let mut limit = t;
    if let Some(w) = day.window {
        limit = t.saturating_sub(w.start.nanos());
    }
    let prev_halt = day.halts.partition_point(|&h| h < t);
    if prev_halt > 0 {
        limit = limit.min(t - day.halts[prev_halt - 1]);
    }
    let clipped = limit < ns;
    ns = ns.min(limit);
    Horizon { ns, clipped }
}

fn build(
    event: &MarketOrderEvent,
    orientation: Orientation,
    mode: Mode,
    values: [Vec<i64>; 2],
    horizon: &Horizon,
    terminated: bool,
) -> [NetFlowTrajectory; 2] {
    let [same, opposite] = values;
    let mk = |side, values| NetFlowTrajectory {
        event_time: event.time,
        direction: event.direction,
        side,
        orientation,
        mode,
        values,
        horizon_ns: horizon.ns,
        terminated_by_quote_change: terminated,
        clipped: horizon.clipped,
    };
    [mk(QuoteSide::Same, same), mk(QuoteSide::Opposite, opposite)]
}

/// Same-side and opposite-side flow after `event`:
/// `W(τ) = V(t + τ) - V(t)` where `V(t)` already reflects every message
/// stamped `t`, including the order's own fills.
///
/// A lag is kept when it does not exceed the gap to the next market order,
/// the largest grid lag, or the distance to the session end or next halt.
pub fn trajectory_after(
    event: &MarketOrderEvent,
    day: &StudyDay,
    grid: &LagGrid,
    mode: Mode,
) -> [NetFlowTrajectory; 2] {
    let t = event.time.nanos();
    let horizon = after_horizon(event, day, grid.max_ns());
    let lags = grid.lags_ns();
    let same = event.same_side();
    let opp = event.direction;
    let cap = lags.partition_point(|&l| l <= horizon.ns);
    let mut vals = [Vec::with_capacity(cap), Vec::with_capacity(cap)];
    let (mut ws, mut wo) = (0i64, 0i64);
    let mut j = 0;
    let mut terminated = false;
    for rec in &day.records[event.last_index + 1..] {
        if rec.time == t {
            continue;
        }
        while j < cap && t + lags[j] < rec.time {
            vals[0].push(ws);
            vals[1].push(wo);
            j += 1;
        }
        if j == cap {
            break;
        }
        if mode == Mode::Strict && rec.quotes_changed {
            terminated = true;
            break;
        }
        ws += rec.flow(same);
        wo += rec.flow(opp);
    }
    if !terminated {
        while j < cap {
            vals[0].push(ws);
            vals[1].push(wo);
            j += 1;
        }
    }
    build(event, Orientation::After, mode, vals, &horizon, terminated)
}

/// Same-side and opposite-side flow before `event`:
/// `W(-τ) = V(t⁻) - V(t - τ)` where `V(t⁻)` is the state just before the
/// order's first fill.
pub fn trajectory_before(
    event: &MarketOrderEvent,
    day: &StudyDay,
    grid: &LagGrid,
    mode: Mode,
) -> [NetFlowTrajectory; 2] {
    let t = event.time.nanos();
    let horizon = before_horizon(event, day, grid.max_ns());
    let lags = grid.lags_ns();
    let same = event.same_side();
    let opp = event.direction;
    let cap = lags.partition_point(|&l| l <= horizon.ns);
    let mut vals = [Vec::with_capacity(cap), Vec::with_capacity(cap)];
    let (mut ws, mut wo) = (0i64, 0i64);
    let mut j = 0;
    let mut terminated = false;
    for rec in day.records[..event.first_index].iter().rev() {
        while j < cap && rec.time + lags[j] <= t {
            vals[0].push(ws);
            vals[1].push(wo);
            j += 1;
        }
        if j == cap {
            break;
        }
        if mode == Mode::Strict && rec.quotes_changed {
            terminated = true;
            break;
        }
        ws += rec.flow(same);
        wo += rec.flow(opp);
    }
    if !terminated {
        while j < cap {
            vals[0].push(ws);
            vals[1].push(wo);
            j += 1;
        }
    }
    build(event, Orientation::Before, mode, vals, &horizon, terminated)
}
