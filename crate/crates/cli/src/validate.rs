use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use lobkit_core::market_data::{
    parse_messages, parse_snapshots, validate_snapshots, write_snapshot, SnapshotRow, ValidateError,
};
use lobkit_core::Book;

use crate::config::{line, opt_path, parse, parse_opt_path, Params};
use crate::{echo_config, ensure_dir, open, write_file, CliError, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct ValidateParams {
    pub messages: Option<PathBuf>,
    pub snapshots: Option<PathBuf>,
    /// Levels compared per row; 0 compares every level in the file.
    pub levels: usize,
    pub tick: i64,
    pub max_report: usize,
    pub out_dir: Option<PathBuf>,
}

impl Default for ValidateParams {
    fn default() -> Self {
        ValidateParams {
            messages: None,
            snapshots: None,
            levels: 0,
            tick: 100,
            max_report: 20,
            out_dir: None,
        }
    }
}

impl Params for ValidateParams {
    const KEYS: &'static [&'static str] = &["messages", "snapshots", "levels", "tick", "max_report", "out_dir"];

    fn set(&mut self, key: &str, value: &str) -> std::result::Result<(), String> {
        match key {
            "messages" => self.messages = parse_opt_path(value),
            "snapshots" => self.snapshots = parse_opt_path(value),
            "levels" => self.levels = parse(value)?,
            "tick" => self.tick = parse(value)?,
            "max_report" => self.max_report = parse(value)?,
            "out_dir" => self.out_dir = parse_opt_path(value),
            _ => return Err(format!("unknown key {key}")),
        }
        Ok(())
    }

    fn echo(&self) -> String {
        let mut s = String::new();
        line(&mut s, "messages", opt_path(&self.messages));
        line(&mut s, "snapshots", opt_path(&self.snapshots));
        line(&mut s, "levels", self.levels);
        line(&mut s, "tick", self.tick);
        line(&mut s, "max_report", self.max_report);
        line(&mut s, "out_dir", opt_path(&self.out_dir));
        s
    }
}

/// Replays `messages` and compares every snapshot row. Returns the report
/// text; a clean run is `Ok`, any mismatch an analysis error.
pub fn cmd_validate(p: &ValidateParams) -> Result<String> {
    let need = |x: &Option<PathBuf>, flag: &str| {
        x.clone()
            .ok_or_else(|| CliError::Usage(format!("--{flag} is required")))
    };
    let messages = need(&p.messages, "messages")?;
    let snapshots = need(&p.snapshots, "snapshots")?;
    if let Some(dir) = &p.out_dir {
        ensure_dir(dir)?;
    }
    echo_config(p.out_dir.as_deref(), &p.echo())?;
    let result = validate_snapshots(
        parse_messages(open(&messages)?),
        parse_snapshots(open(&snapshots)?),
        p.levels,
        Book::new(p.tick),
        p.max_report,
    );
    let report = match result {
        Ok(r) => r,
        Err(e @ ValidateError::Messages(_)) => return Err(CliError::Usage(format!("{}: {e}", messages.display()))),
        Err(e @ ValidateError::Snapshots(_)) => return Err(CliError::Usage(format!("{}: {e}", snapshots.display()))),
        Err(e) => return finish(p.out_dir.as_deref(), format!("FAIL: {e}\n"), false),
    };
    let mut text = String::new();
    let _ = writeln!(
        text,
        "checked {} rows, {} mismatches",
        report.checked, report.mismatch_count
    );
    for m in &report.mismatches {
        let _ = write!(text, "row {} expected: {}", m.index + 1, row_text(&m.expected));
        let _ = write!(text, "row {} rebuilt:  {}", m.index + 1, row_text(&m.reconstructed));
    }
    finish(p.out_dir.as_deref(), text, report.is_clean())
}

fn finish(out_dir: Option<&Path>, text: String, ok: bool) -> Result<String> {
    if let Some(dir) = out_dir {
        write_file(&dir.join("report.txt"), text.as_bytes())?;
    }
    if ok {
        Ok(text)
    } else {
        Err(CliError::Analysis(text.trim_end().to_string()))
    }
}

fn row_text(row: &SnapshotRow) -> String {
    let mut buf = Vec::new();
    write_snapshot(&mut buf, row).expect("writing to memory");
    String::from_utf8(buf).expect("ascii")
}
