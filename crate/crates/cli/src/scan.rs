//! Summary statistics of message streams.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use lobkit_core::event_study::{BasisIntegral, StudyDayBuilder, TimeWindow};
use lobkit_core::market_data::{MessageType, Step};
use lobkit_core::PRICE_SCALE;
use rayon::prelude::*;

use crate::config::{join_paths, line, opt_path, parse, parse_opt_path, parse_paths, Params, SessionSpec};
use crate::{echo_config, ensure_dir, replay_file, sorted_inputs, thread_pool, write_file, CliError, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct ScanParams {
    pub messages: Vec<PathBuf>,
    pub tick: i64,
    pub session: SessionSpec,
    pub out_dir: Option<PathBuf>,
}

impl Default for ScanParams {
    fn default() -> Self {
        ScanParams {
            messages: Vec::new(),
            tick: 100,
            session: SessionSpec::Standard,
            out_dir: None,
        }
    }
}

impl Params for ScanParams {
    const KEYS: &'static [&'static str] = &["messages", "tick", "session", "out_dir"];

    fn set(&mut self, key: &str, value: &str) -> std::result::Result<(), String> {
        match key {
            "messages" => self.messages = parse_paths(value),
            "tick" => self.tick = parse(value)?,
            "session" => self.session = parse(value)?,
            "out_dir" => self.out_dir = parse_opt_path(value),
            _ => return Err(format!("unknown key {key}")),
        }
        Ok(())
    }

    fn echo(&self) -> String {
        let mut s = String::new();
        line(&mut s, "messages", join_paths(&self.messages));
        line(&mut s, "tick", self.tick);
        line(&mut s, "session", self.session);
        line(&mut s, "out_dir", opt_path(&self.out_dir));
        s
    }
}

/// Mergeable per-day tallies.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ScanTally {
    pub messages: u64,
    pub market_orders: u64,
    pub limit_orders: u64,
    pub cancellations: u64,
    pub executions: u64,
    pub hidden_executions: u64,
    pub market_order_shares: u64,
    pub maintaining_orders: u64,
    pub maintaining_shares: u64,
    pub trade_value: i128,
    pub trade_shares: u64,
    pub spread_area: f64,
    pub spread_time: u64,
    pub basis: BasisIntegral,
}

impl ScanTally {
    pub fn merge(&mut self, o: &ScanTally) {
        self.messages += o.messages;
        self.market_orders += o.market_orders;
        self.limit_orders += o.limit_orders;
        self.cancellations += o.cancellations;
        self.executions += o.executions;
        self.hidden_executions += o.hidden_executions;
        self.market_order_shares += o.market_order_shares;
        self.maintaining_orders += o.maintaining_orders;
        self.maintaining_shares += o.maintaining_shares;
        self.trade_value += o.trade_value;
        self.trade_shares += o.trade_shares;
        self.spread_area += o.spread_area;
        self.spread_time += o.spread_time;
        self.basis.merge(&o.basis);
    }
}

struct SpreadClock {
    window: Option<TimeWindow>,
    last: Option<(u64, Option<i64>)>,
    area: f64,
    time: u64,
}

impl SpreadClock {
    fn advance(&mut self, to: u64, spread_after: Option<i64>) {
        if let Some((from, spread)) = self.last {
            let (lo, hi) = match self.window {
                Some(w) => (from.max(w.start.nanos()), to.min(w.end.nanos())),
                None => (from, to),
            };
            if let (Some(s), true) = (spread, hi > lo) {
                self.area += s as f64 * (hi - lo) as f64;
                self.time += hi - lo;
            }
        }
        self.last = Some((to, spread_after));
    }
}

/// Tallies one message file.
pub fn scan_day(path: &Path, tick: i64, session: SessionSpec) -> Result<ScanTally> {
    let window = session.window();
    let mut t = ScanTally::default();
    let mut builder = StudyDayBuilder::new(window);
    let mut spread = SpreadClock {
        window,
        last: None,
        area: 0.0,
        time: 0,
    };
    let inside = |s: &Step| window.is_none_or(|w| w.contains(s.message.time));
    replay_file(path, tick, |step| {
        let time = step.message.time.nanos();
        if spread.last.is_none() {
            spread.last = Some((time, step.before.spread()));
        }
        spread.advance(time, step.after.spread());
        builder.push(step);
        if !inside(step) {
            return;
        }
        let m = &step.message;
        t.messages += 1;
        match m.msg_type {
            MessageType::NewLimit => t.limit_orders += 1,
            MessageType::PartialCancel | MessageType::Delete => t.cancellations += 1,
            MessageType::ExecuteVisible | MessageType::ExecuteHidden => {
                if m.msg_type == MessageType::ExecuteVisible {
                    t.executions += 1;
                } else {
                    t.hidden_executions += 1;
                }
                t.trade_value += m.price as i128 * m.shares as i128;
                t.trade_shares += m.shares;
            }
            MessageType::Halt => {}
        }
    })?;
    if let Some(w) = window {
        spread.advance(w.end.nanos(), None);
    }
    let day = builder.finish();
    for ev in &day.market_orders {
        t.market_orders += 1;
        t.market_order_shares += ev.total_shares;
        if ev.price_maintaining {
            t.maintaining_orders += 1;
            t.maintaining_shares += ev.total_shares;
        }
    }
    t.spread_area = spread.area;
    t.spread_time = spread.time;
    t.basis = day.basis;
    Ok(t)
}

/// Table of `(statistic, value)`; absent values are `None`.
pub fn summarize(t: &ScanTally, days: usize) -> Vec<(&'static str, Option<f64>)> {
    let ratio = |a: f64, b: u64| (b > 0).then(|| a / b as f64);
    let events = t.market_orders + t.limit_orders + t.cancellations;
    let pct = |x: u64| ratio(100.0 * x as f64, events);
    let scale = PRICE_SCALE as f64;
    vec![
        ("days", Some(days as f64)),
        ("messages", Some(t.messages as f64)),
        ("market_orders", Some(t.market_orders as f64)),
        ("limit_orders", Some(t.limit_orders as f64)),
        ("cancellations", Some(t.cancellations as f64)),
        ("market_order_pct", pct(t.market_orders)),
        ("limit_order_pct", pct(t.limit_orders)),
        ("cancellation_pct", pct(t.cancellations)),
        ("visible_executions", Some(t.executions as f64)),
        ("hidden_executions", Some(t.hidden_executions as f64)),
        (
            "mean_spread",
            (t.spread_time > 0).then(|| t.spread_area / t.spread_time as f64 / scale),
        ),
        ("mean_trade_price", ratio(t.trade_value as f64 / scale, t.trade_shares)),
        ("mean_best_volume", t.basis.mean_best_volume()),
        (
            "mean_market_order_size",
            ratio(t.market_order_shares as f64, t.market_orders),
        ),
        (
            "mean_price_maintaining_size",
            ratio(t.maintaining_shares as f64, t.maintaining_orders),
        ),
        (
            "price_maintaining_pct",
            ratio(100.0 * t.maintaining_orders as f64, t.market_orders),
        ),
    ]
}

pub fn render(rows: &[(&str, Option<f64>)]) -> String {
    let mut s = String::from("statistic,value\n");
    for (k, v) in rows {
        let _ = writeln!(s, "{k},{}", v.map(|x| x.to_string()).unwrap_or_default());
    }
    s
}

/// Computes the summary table; writes `scan.csv` when an output directory
/// is set.
pub fn cmd_scan(p: &ScanParams) -> Result<String> {
    let inputs = sorted_inputs(&p.messages)?;
    if let Some(dir) = &p.out_dir {
        ensure_dir(dir)?;
    }
    echo_config(p.out_dir.as_deref(), &p.echo())?;
    let per_day: Vec<Result<ScanTally>> =
        thread_pool()?.install(|| inputs.par_iter().map(|f| scan_day(f, p.tick, p.session)).collect());
    let mut total = ScanTally::default();
    for d in per_day {
        total.merge(&d?);
    }
    if total.messages == 0 {
        return Err(CliError::Analysis("no messages inside the session window".into()));
    }
    let text = render(&summarize(&total, inputs.len()));
    if let Some(dir) = &p.out_dir {
        write_file(&dir.join("scan.csv"), text.as_bytes())?;
    }
    Ok(text)
}
