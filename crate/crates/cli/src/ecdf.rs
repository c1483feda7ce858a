use std::path::PathBuf;

use lobkit_core::event_study::MarketOrderDetector;
use lobkit_core::stats::{min_shifted_ecdf, Ecdf};
use lobkit_core::NANOS_PER_SEC;
use rayon::prelude::*;

use crate::config::{join_paths, line, opt_path, parse, parse_bool, parse_opt_path, parse_paths, Params, SessionSpec};
use crate::{create, echo_config, ensure_dir, replay_file, sorted_inputs, thread_pool, CliError, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct EcdfParams {
    pub messages: Vec<PathBuf>,
    pub tick: i64,
    pub session: SessionSpec,
    pub shifted: bool,
    pub out_dir: Option<PathBuf>,
}

impl Default for EcdfParams {
    fn default() -> Self {
        EcdfParams {
            messages: Vec::new(),
            tick: 100,
            session: SessionSpec::Standard,
            shifted: false,
            out_dir: None,
        }
    }
}

impl Params for EcdfParams {
    const KEYS: &'static [&'static str] = &["messages", "tick", "session", "shifted", "out_dir"];

    fn set(&mut self, key: &str, value: &str) -> std::result::Result<(), String> {
        match key {
            "messages" => self.messages = parse_paths(value),
            "tick" => self.tick = parse(value)?,
            "session" => self.session = parse(value)?,
            "shifted" => self.shifted = parse_bool(value)?,
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
        line(&mut s, "shifted", self.shifted);
        line(&mut s, "out_dir", opt_path(&self.out_dir));
        s
    }
}

/// Market-order inter-arrival times in nanoseconds, within each day's
/// window.
pub fn inter_arrivals(path: &std::path::Path, tick: i64, session: SessionSpec) -> Result<Vec<u64>> {
    let window = session.window();
    let mut det = MarketOrderDetector::new();
    let mut times = Vec::new();
    replay_file(path, tick, |step| {
        if let Some(ev) = det.push(step) {
            times.push(ev.time);
        }
    })?;
    times.extend(det.finish().map(|e| e.time));
    times.retain(|t| window.is_none_or(|w| w.contains(*t)));
    Ok(times.windows(2).map(|w| w[1].nanos() - w[0].nanos()).collect())
}

/// Writes `ecdf.csv` (`x,F`) and `ecdf_upper.csv` (`x,one_minus_F`), with
/// `x` in seconds.
pub fn cmd_ecdf(p: &EcdfParams) -> Result<Ecdf> {
    let out_dir = p
        .out_dir
        .clone()
        .ok_or_else(|| CliError::Usage("--out-dir is required".into()))?;
    let inputs = sorted_inputs(&p.messages)?;
    ensure_dir(&out_dir)?;
    echo_config(Some(&out_dir), &p.echo())?;
    let per_day: Vec<Result<Vec<u64>>> = thread_pool()?.install(|| {
        inputs
            .par_iter()
            .map(|f| inter_arrivals(f, p.tick, p.session))
            .collect()
    });
    let mut gaps = Vec::new();
    for d in per_day {
        gaps.extend(d?);
    }
    if gaps.is_empty() {
        return Err(CliError::Analysis(
            "fewer than 2 market orders in the session window".into(),
        ));
    }
    let secs = gaps.iter().map(|&g| g as f64 / NANOS_PER_SEC as f64);
    let ecdf = if p.shifted {
        min_shifted_ecdf(secs)
    } else {
        Ecdf::new(secs)
    }
    .map_err(|e| CliError::Analysis(e.to_string()))?;
    let path = out_dir.join("ecdf.csv");
    let mut f = create(&path)?;
    ecdf.write_csv(&mut f).map_err(|e| CliError::io(&path, e))?;
    let path = out_dir.join("ecdf_upper.csv");
    let mut f = create(&path)?;
    ecdf.write_upper_tail_csv(&mut f).map_err(|e| CliError::io(&path, e))?;
    Ok(ecdf)
}
