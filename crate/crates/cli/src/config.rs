//! Plain-text `key = value` run configuration.
//!
//! Effective settings are built from defaults, then the `--config` file,
//! then command-line flags. The echo written next to every output parses
//! back to the same settings.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use lobkit_core::event_study::{Mode, TimeWindow};
use lobkit_core::market_data::{parse_time, DaySession};
use lobkit_core::Timestamp;

use crate::CliError;

/// Parses `key = value` lines; `#` starts a comment.
pub fn parse_kv(text: &str) -> Result<Vec<(String, String)>, CliError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("config line {}: expected key = value", i + 1)))?;
        out.push((k.trim().to_string(), v.trim().to_string()));
    }
    Ok(out)
}

pub fn read_config_file(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

/// Command parameters settable from config files and flags.
pub trait Params: Default {
    const KEYS: &'static [&'static str];

    fn set(&mut self, key: &str, value: &str) -> Result<(), String>;

    /// Key-value lines in `KEYS` order.
    fn echo(&self) -> String;

    fn resolve(file: Option<&Path>, flags: Vec<(&'static str, String)>) -> Result<Self, CliError> {
        let mut p = Self::default();
        if let Some(path) = file {
            let entries = parse_kv(&read_config_file(path)?)?;
            let unknown: Vec<&str> = entries
                .iter()
                .map(|(k, _)| k.as_str())
                .filter(|k| !Self::KEYS.contains(k))
                .collect();
            if !unknown.is_empty() {
                return Err(CliError::Usage(format!("unknown config keys: {}", unknown.join(", "))));
            }
            for (k, v) in &entries {
                p.set(k, v)
                    .map_err(|e| CliError::Usage(format!("config key {k}: {e}")))?;
            }
        }
        for (k, v) in flags {
            p.set(k, &v).map_err(|e| CliError::Usage(format!("--{k}: {e}")))?;
        }
        Ok(p)
    }
}

pub fn parse<T: FromStr>(value: &str) -> Result<T, String>
where
    T::Err: std::fmt::Display,
{
    value.trim().parse().map_err(|e: T::Err| format!("{value:?}: {e}"))
}

pub fn parse_bool(value: &str) -> Result<bool, String> {
    match value.trim() {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        v => Err(format!("expected true or false, got {v:?}")),
    }
}

pub fn parse_paths(value: &str) -> Vec<PathBuf> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(PathBuf::from)
        .collect()
}

pub fn join_paths(paths: &[PathBuf]) -> String {
    paths
        .iter()
        .map(|p| p.display().to_string())
        .collect::<Vec<_>>()
        .join(",")
}

pub fn opt_path(p: &Option<PathBuf>) -> String {
    p.as_ref().map(|p| p.display().to_string()).unwrap_or_default()
}

pub fn parse_opt_path(value: &str) -> Option<PathBuf> {
    let v = value.trim();
    (!v.is_empty()).then(|| PathBuf::from(v))
}

/// Which part of each day is analysed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SessionSpec {
    /// 09:30 to 16:00 less 1000 s at each end.
    #[default]
    Standard,
    /// Everything in the file.
    Full,
    /// `start-end` in seconds after midnight.
    Custom(Timestamp, Timestamp),
}

impl SessionSpec {
    pub fn window(&self) -> Option<TimeWindow> {
        match *self {
            SessionSpec::Standard => Some(TimeWindow::from(&DaySession::standard(None))),
            SessionSpec::Full => None,
            SessionSpec::Custom(a, b) => Some(TimeWindow::new(a, b)),
        }
    }
}

impl FromStr for SessionSpec {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim() {
            "standard" => Ok(SessionSpec::Standard),
            "full" => Ok(SessionSpec::Full),
            v => {
                let (a, b) = v
                    .split_once('-')
                    .ok_or_else(|| format!("expected standard, full or START-END, got {v:?}"))?;
                let (a, b) = (parse_time(a.trim())?, parse_time(b.trim())?);
                if a >= b {
                    return Err(format!("empty session window {v:?}"));
                }
                Ok(SessionSpec::Custom(a, b))
            }
        }
    }
}

impl std::fmt::Display for SessionSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SessionSpec::Standard => f.write_str("standard"),
            SessionSpec::Full => f.write_str("full"),
            SessionSpec::Custom(a, b) => write!(f, "{a}-{b}"),
        }
    }
}

/// Appends one `key = value` line.
pub fn line(out: &mut String, key: &str, value: impl std::fmt::Display) {
    let _ = writeln!(out, "{key} = {value}");
}

/// `strict` / `relaxed` plus the `auto` maintaining-only default.
pub fn maintaining_default(mode: Mode) -> bool {
    mode == Mode::Strict
}
