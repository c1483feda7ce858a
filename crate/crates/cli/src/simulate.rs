use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use lobkit_core::market_data::{write_message, write_snapshot, SnapshotRow};
use lobkit_core::zi_sim::{simulate_into, SimSummary, ZiConfig};

use crate::config::{line, opt_path, parse_opt_path, Params};
use crate::{create, echo_config, ensure_dir, write_file, CliError, Result};

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SimulateParams {
    pub zi: ZiConfig,
    pub name: Option<String>,
    pub out_dir: Option<PathBuf>,
}

impl Params for SimulateParams {
    const KEYS: &'static [&'static str] = &[
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
        "name",
        "out_dir",
    ];

    fn set(&mut self, key: &str, value: &str) -> std::result::Result<(), String> {
        match key {
            "name" => self.name = Some(value.trim().to_string()).filter(|s| !s.is_empty()),
            "out_dir" => self.out_dir = parse_opt_path(value),
            k => self.zi.set(k, value).map_err(|e| e.to_string())?,
        }
        Ok(())
    }

    fn echo(&self) -> String {
        let mut s = self.zi.to_kv_string();
        line(&mut s, "name", self.name.as_deref().unwrap_or(""));
        line(&mut s, "out_dir", opt_path(&self.out_dir));
        s
    }
}

impl SimulateParams {
    pub fn file_stem(&self) -> String {
        self.name.clone().unwrap_or_else(|| format!("zi_seed{}", self.zi.seed))
    }
}

/// Writes `<name>_message.csv`, `<name>_orderbook.csv` (when
/// `snapshot_levels > 0`) and `<name>_log.txt`.
pub fn cmd_simulate(p: &SimulateParams) -> Result<SimSummary> {
    let out_dir = p
        .out_dir
        .clone()
        .ok_or_else(|| CliError::Usage("--out-dir is required".into()))?;
    p.zi.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    ensure_dir(&out_dir)?;
    echo_config(Some(&out_dir), &p.echo())?;
    let stem = p.file_stem();
    let msg_path = out_dir.join(format!("{stem}_message.csv"));
    let book_path = out_dir.join(format!("{stem}_orderbook.csv"));
    let k = p.zi.snapshot_levels;
    let mut messages = create(&msg_path)?;
    let mut books = if k > 0 { Some(create(&book_path)?) } else { None };
    let mut row = SnapshotRow {
        asks: Vec::with_capacity(k),
        bids: Vec::with_capacity(k),
    };
    let mut failure: Option<(PathBuf, std::io::Error)> = None;
    let summary = simulate_into(&p.zi, |msg, book| {
        if failure.is_some() {
            return;
        }
        if let Err(e) = write_message(&mut messages, msg) {
            failure = Some((msg_path.clone(), e));
            return;
        }
        if let Some(out) = books.as_mut() {
            row.fill_from(book, k);
            if let Err(e) = write_snapshot(out, &row) {
                failure = Some((book_path.clone(), e));
            }
        }
    })
    .map_err(|e| CliError::Usage(e.to_string()))?;
    if let Some((path, e)) = failure {
        return Err(CliError::io(&path, e));
    }
    messages.flush().map_err(|e| CliError::io(&msg_path, e))?;
    if let Some(mut b) = books {
        b.flush().map_err(|e| CliError::io(&book_path, e))?;
    }

    let mut log = String::new();
    let c = &summary.counts;
    let _ = writeln!(log, "# initial book messages: {}", summary.seed_message_count);
    let _ = writeln!(log, "# limit {} market {} cancel {}", c.limit, c.market, c.cancel);
    let _ = writeln!(log, "# reseeds {}", summary.reseeds.len());
    for r in &summary.reseeds {
        let _ = writeln!(
            log,
            "reseed,{},{},{},{}",
            r.time,
            r.side.sign(),
            r.price.units(),
            r.orders
        );
    }
    let _ = writeln!(log, "# market orders: time,direction,shares,fills,price_maintaining");
    for m in &summary.market_orders {
        let _ = writeln!(
            log,
            "market,{},{},{},{},{}",
            m.time,
            m.direction.sign(),
            m.total_shares,
            m.fills,
            m.price_maintaining as u8
        );
    }
    write_file(&out_dir.join(format!("{stem}_log.txt")), log.as_bytes())?;
    Ok(summary)
}
