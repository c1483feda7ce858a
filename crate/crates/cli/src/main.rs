use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use lobkit::config::Params;
use lobkit::ecdf::{cmd_ecdf, EcdfParams};
use lobkit::scan::{cmd_scan, ScanParams};
use lobkit::simulate::{cmd_simulate, SimulateParams};
use lobkit::study::{cmd_study, StudyParams};
use lobkit::validate::{cmd_validate, ValidateParams};
use lobkit::CliError;

#[derive(Parser)]
#[command(
    name = "lobkit",
    version,
    about = "Limit order book reconstruction, simulation and event studies"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Replay a message file and compare every snapshot row.
    Validate(ValidateArgs),
    /// Summary statistics of one or more message files.
    Scan(ScanArgs),
    /// Net order flow around market orders.
    Study(StudyArgs),
    /// Simulate a zero-intelligence trading day.
    Simulate(SimulateArgs),
    /// Market-order inter-arrival ECDF.
    Ecdf(EcdfArgs),
}

#[derive(Args)]
struct Common {
    /// Key-value config file; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

#[derive(Args)]
struct Input {
    /// Message files, one per day (repeat or comma-separate).
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    messages: Vec<PathBuf>,
    /// Price grid in 10^-4 units; orders off the grid are rejected.
    #[arg(long)]
    tick: Option<i64>,
    /// `standard`, `full`, or `START-END` in seconds after midnight.
    #[arg(long)]
    session: Option<String>,
}

#[derive(Args)]
struct ValidateArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    messages: Option<PathBuf>,
    #[arg(long)]
    snapshots: Option<PathBuf>,
    /// Levels compared per row (0 = all columns in the file).
    #[arg(long)]
    levels: Option<usize>,
    #[arg(long)]
    tick: Option<i64>,
    #[arg(long)]
    max_report: Option<usize>,
}

#[derive(Args)]
struct ScanArgs {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    input: Input,
}

#[derive(Args)]
struct StudyArgs {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    input: Input,
    #[arg(long)]
    stock: Option<String>,
    /// Minimum gap to the next market order, seconds.
    #[arg(long = "T")]
    separation: Option<f64>,
    #[arg(long)]
    tau_min: Option<f64>,
    #[arg(long)]
    tau_max: Option<f64>,
    #[arg(long)]
    per_decade: Option<u32>,
    /// strict or relaxed.
    #[arg(long)]
    mode: Option<String>,
    /// true, false or auto (strict mode keeps only price-maintaining orders).
    #[arg(long)]
    maintaining_only: Option<String>,
    #[arg(long)]
    bins: Option<usize>,
    #[arg(long = "bootstrap-B")]
    bootstrap_b: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    normalize: Option<bool>,
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    seed: Option<u64>,
    /// Output file prefix.
    #[arg(long)]
    name: Option<String>,
    /// Extra `key=value` settings.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

#[derive(Args)]
struct EcdfArgs {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    input: Input,
    /// Subtract the smallest inter-arrival time.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    shifted: Option<bool>,
}

type Flags = Vec<(&'static str, String)>;

fn push<T: ToString>(flags: &mut Flags, key: &'static str, v: Option<T>) {
    if let Some(v) = v {
        flags.push((key, v.to_string()));
    }
}

fn common_flags(c: &Common) -> Flags {
    let mut f = Flags::new();
    push(&mut f, "out_dir", c.out_dir.as_ref().map(|p| p.display()));
    f
}

fn input_flags(f: &mut Flags, i: &Input) {
    if !i.messages.is_empty() {
        f.push(("messages", lobkit::config::join_paths(&i.messages)));
    }
    push(f, "tick", i.tick);
    push(f, "session", i.session.clone());
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Validate(a) => {
            let mut f = common_flags(&a.common);
            push(&mut f, "messages", a.messages.as_ref().map(|p| p.display()));
            push(&mut f, "snapshots", a.snapshots.as_ref().map(|p| p.display()));
            push(&mut f, "levels", a.levels);
            push(&mut f, "tick", a.tick);
            push(&mut f, "max_report", a.max_report);
            let p = ValidateParams::resolve(a.common.config.as_deref(), f)?;
            match cmd_validate(&p) {
                Ok(report) => {
                    print!("{report}");
                    Ok(())
                }
                Err(e) => Err(e),
            }
        }
        Command::Scan(a) => {
            let mut f = common_flags(&a.common);
            input_flags(&mut f, &a.input);
            let p = ScanParams::resolve(a.common.config.as_deref(), f)?;
            print!("{}", cmd_scan(&p)?);
            Ok(())
        }
        Command::Study(a) => {
            let mut f = common_flags(&a.common);
            input_flags(&mut f, &a.input);
            push(&mut f, "stock", a.stock);
            push(&mut f, "T", a.separation);
            push(&mut f, "tau_min", a.tau_min);
            push(&mut f, "tau_max", a.tau_max);
            push(&mut f, "per_decade", a.per_decade);
            push(&mut f, "mode", a.mode);
            push(&mut f, "maintaining_only", a.maintaining_only);
            push(&mut f, "bins", a.bins);
            push(&mut f, "bootstrap_B", a.bootstrap_b);
            push(&mut f, "seed", a.seed);
            push(&mut f, "normalize", a.normalize);
            let p = StudyParams::resolve(a.common.config.as_deref(), f)?;
            let r = cmd_study(&p)?;
            println!(
                "{} forward and {} backward events; basis {}",
                r.events_after,
                r.events_before,
                r.basis.map_or("n/a".to_string(), |b| b.to_string())
            );
            Ok(())
        }
        Command::Simulate(a) => {
            let mut f = common_flags(&a.common);
            push(&mut f, "seed", a.seed);
            push(&mut f, "name", a.name);
            let mut extra = Flags::new();
            for kv in &a.set {
                let (k, v) = kv
                    .split_once('=')
                    .ok_or_else(|| CliError::Usage(format!("--set expects KEY=VALUE, got {kv:?}")))?;
                let key = SimulateParams::KEYS
                    .iter()
                    .find(|&&known| known == k.trim())
                    .ok_or_else(|| CliError::Usage(format!("unknown config keys: {}", k.trim())))?;
                extra.push((key, v.trim().to_string()));
            }
            extra.extend(f);
            let p = SimulateParams::resolve(a.common.config.as_deref(), extra)?;
            let s = cmd_simulate(&p)?;
            println!(
                "{} limit, {} market, {} cancel events",
                s.counts.limit, s.counts.market, s.counts.cancel
            );
            Ok(())
        }
        Command::Ecdf(a) => {
            let mut f = common_flags(&a.common);
            input_flags(&mut f, &a.input);
            push(&mut f, "shifted", a.shifted);
            let p = EcdfParams::resolve(a.common.config.as_deref(), f)?;
            let e = cmd_ecdf(&p)?;
            println!("{} inter-arrival times, minimum {} s", e.len(), e.min());
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("lobkit: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
