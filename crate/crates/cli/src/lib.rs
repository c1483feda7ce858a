//! Batch commands: validate, scan, study, simulate, ecdf.

pub mod config;
pub mod ecdf;
pub mod scan;
pub mod simulate;
pub mod study;
pub mod validate;

use std::fs::{self, File};
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use lobkit_core::market_data::{parse_messages, Replayer, Step};
use lobkit_core::Book;
use thiserror::Error;

/// Failure with its process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags, bad config or unreadable input: exit 2.
    #[error("{0}")]
    Usage(String),
    /// The analysis itself failed (mismatch, empty event set): exit 1.
    #[error("{0}")]
    Analysis(String),
}

impl CliError {
    pub fn io(path: &Path, e: io::Error) -> Self {
        CliError::Usage(format!("{}: {e}", path.display()))
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Analysis(_) => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

/// Thread pool honouring `LOBKIT_THREADS`.
pub fn thread_pool() -> Result<rayon::ThreadPool> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var("LOBKIT_THREADS") {
        let n: usize = v
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("LOBKIT_THREADS must be a positive integer, got {v:?}")))?;
        b = b.num_threads(n.max(1));
    }
    b.build().map_err(|e| CliError::Usage(format!("thread pool: {e}")))
}

/// Input days in a deterministic order.
pub fn sorted_inputs(paths: &[PathBuf]) -> Result<Vec<PathBuf>> {
    if paths.is_empty() {
        return Err(CliError::Usage("no --messages given".into()));
    }
    let mut v = paths.to_vec();
    v.sort();
    v.dedup();
    Ok(v)
}

pub fn open(path: &Path) -> Result<BufReader<File>> {
    File::open(path)
        .map(|f| BufReader::with_capacity(1 << 20, f))
        .map_err(|e| CliError::io(path, e))
}

pub fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path)
        .map(|f| BufWriter::with_capacity(1 << 20, f))
        .map_err(|e| CliError::io(path, e))
}

pub fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))
}

pub fn write_file(path: &Path, contents: &[u8]) -> Result<()> {
    let mut f = create(path)?;
    f.write_all(contents).map_err(|e| CliError::io(path, e))?;
    f.flush().map_err(|e| CliError::io(path, e))
}

/// Streams a message file through a fresh book, calling `f` per step.
pub fn replay_file(path: &Path, tick: i64, mut f: impl FnMut(&Step)) -> Result<usize> {
    let mut replayer = Replayer::new(Book::new(tick));
    for msg in parse_messages(open(path)?) {
        let msg = msg.map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
        let step = replayer
            .apply(&msg)
            .map_err(|e| CliError::Usage(format!("{}: inconsistent stream: {e}", path.display())))?;
        f(&step);
    }
    Ok(replayer.applied())
}

/// Writes the effective configuration next to the outputs, or to stderr.
pub fn echo_config(out_dir: Option<&Path>, text: &str) -> Result<()> {
    match out_dir {
        Some(dir) => write_file(&dir.join("config.txt"), text.as_bytes()),
        None => {
            eprint!("{text}");
            Ok(())
        }
    }
}
