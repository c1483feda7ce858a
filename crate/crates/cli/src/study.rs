use std::path::{Path, PathBuf};

use lobkit_core::event_study::{
    AggregateCurve, DaySelection, LagGrid, Mode, SizeBins, StudyAccumulator, StudyDay, StudyDayBuilder, StudyResult,
    StudySpec,
};
use lobkit_core::stats::DEFAULT_RESAMPLES;
use lobkit_core::NANOS_PER_SEC;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{
    join_paths, line, maintaining_default, opt_path, parse, parse_bool, parse_opt_path, parse_paths, Params,
    SessionSpec,
};
use crate::{create, echo_config, ensure_dir, replay_file, sorted_inputs, thread_pool, write_file, CliError, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct StudyParams {
    pub messages: Vec<PathBuf>,
    pub out_dir: Option<PathBuf>,
    pub stock: String,
    pub tick: i64,
    pub session: SessionSpec,
    /// Separation `T` in seconds.
    pub separation: f64,
    pub tau_min: f64,
    pub tau_max: f64,
    pub per_decade: u32,
    pub mode: Mode,
    /// `None` follows the mode: strict studies keep only price-maintaining
    /// orders.
    pub maintaining_only: Option<bool>,
    pub bins: usize,
    pub resamples: usize,
    pub seed: u64,
    pub normalize: bool,
}

impl Default for StudyParams {
    fn default() -> Self {
        StudyParams {
            messages: Vec::new(),
            out_dir: None,
            stock: String::new(),
            tick: 100,
            session: SessionSpec::Standard,
            separation: 0.0,
            tau_min: 1e-7,
            tau_max: 10.0,
            per_decade: 20,
            mode: Mode::Strict,
            maintaining_only: None,
            bins: 1,
            resamples: DEFAULT_RESAMPLES,
            seed: 0,
            normalize: true,
        }
    }
}

impl Params for StudyParams {
    const KEYS: &'static [&'static str] = &[
        "messages",
        "out_dir",
        "stock",
        "tick",
        "session",
        "T",
        "tau_min",
        "tau_max",
        "per_decade",
        "mode",
        "maintaining_only",
        "bins",
        "bootstrap_B",
        "seed",
        "normalize",
    ];

    fn set(&mut self, key: &str, value: &str) -> std::result::Result<(), String> {
        match key {
            "messages" => self.messages = parse_paths(value),
            "out_dir" => self.out_dir = parse_opt_path(value),
            "stock" => self.stock = value.trim().to_string(),
            "tick" => self.tick = parse(value)?,
            "session" => self.session = parse(value)?,
            "T" => self.separation = non_negative(parse(value)?)?,
            "tau_min" => self.tau_min = positive(parse(value)?)?,
            "tau_max" => self.tau_max = positive(parse(value)?)?,
            "per_decade" => self.per_decade = parse(value)?,
            "mode" => self.mode = parse(value)?,
            "maintaining_only" => {
                self.maintaining_only = match value.trim() {
                    "auto" | "" => None,
                    v => Some(parse_bool(v)?),
                }
            }
            "bins" => self.bins = parse(value)?,
            "bootstrap_B" => self.resamples = parse(value)?,
            "seed" => self.seed = parse(value)?,
            "normalize" => self.normalize = parse_bool(value)?,
            _ => return Err(format!("unknown key {key}")),
        }
        Ok(())
    }

    fn echo(&self) -> String {
        let mut s = String::new();
        line(&mut s, "messages", join_paths(&self.messages));
        line(&mut s, "out_dir", opt_path(&self.out_dir));
        line(&mut s, "stock", &self.stock);
        line(&mut s, "tick", self.tick);
        line(&mut s, "session", self.session);
        line(&mut s, "T", self.separation);
        line(&mut s, "tau_min", self.tau_min);
        line(&mut s, "tau_max", self.tau_max);
        line(&mut s, "per_decade", self.per_decade);
        line(&mut s, "mode", self.mode);
        line(
            &mut s,
            "maintaining_only",
            self.maintaining_only.map_or("auto".to_string(), |b| b.to_string()),
        );
        line(&mut s, "bins", self.bins);
        line(&mut s, "bootstrap_B", self.resamples);
        line(&mut s, "seed", self.seed);
        line(&mut s, "normalize", self.normalize);
        s
    }
}

fn positive(x: f64) -> std::result::Result<f64, String> {
    if x.is_finite() && x > 0.0 {
        Ok(x)
    } else {
        Err(format!("must be positive, got {x}"))
    }
}

fn non_negative(x: f64) -> std::result::Result<f64, String> {
    if x.is_finite() && x >= 0.0 {
        Ok(x)
    } else {
        Err(format!("must be non-negative, got {x}"))
    }
}

impl StudyParams {
    pub fn spec(&self) -> Result<StudySpec> {
        if self.tau_min > self.tau_max || self.per_decade == 0 {
            return Err(CliError::Usage("need 0 < tau_min <= tau_max and per_decade > 0".into()));
        }
        if self.resamples == 0 {
            return Err(CliError::Usage("bootstrap_B must be at least 1".into()));
        }
        Ok(StudySpec {
            grid: LagGrid::logarithmic(self.tau_min, self.tau_max, self.per_decade),
            mode: self.mode,
            separation_ns: (self.separation * NANOS_PER_SEC as f64).round() as u64,
            maintaining_only: self.maintaining_only.unwrap_or(maintaining_default(self.mode)),
        })
    }
}

pub fn load_day(path: &Path, tick: i64, session: SessionSpec) -> Result<StudyDay> {
    let mut b = StudyDayBuilder::new(session.window());
    replay_file(path, tick, |s| b.push(s))?;
    Ok(b.finish())
}

#[derive(Serialize)]
struct CurveFile<'a> {
    stock: &'a str,
    mode: Mode,
    side: &'a str,
    orientation: &'a str,
    separation_secs: f64,
    maintaining_only: bool,
    normalization_basis: Option<f64>,
    normalized: bool,
    bootstrap_resamples: usize,
    seed: u64,
    curve_seed: u64,
    events: u64,
    size_bin: Option<SizeBinInfo>,
    tau: Vec<f64>,
    mean: &'a [Option<f64>],
    stderr: &'a [Option<f64>],
    n: &'a [u64],
}

#[derive(Serialize, Clone, Copy)]
struct SizeBinInfo {
    index: usize,
    lower_exclusive: Option<u64>,
    upper_inclusive: u64,
}

fn curve_name(c: &AggregateCurve) -> String {
    format!("{}_{}", c.side.name(), c.orientation.name())
}

fn write_curve(
    dir: &Path,
    prefix: &str,
    curve: &AggregateCurve,
    p: &StudyParams,
    spec: &StudySpec,
    result: &StudyResult,
    bin: Option<SizeBinInfo>,
) -> Result<()> {
    let name = format!("{prefix}{}", curve_name(curve));
    let path = dir.join(format!("{name}.csv"));
    let mut f = create(&path)?;
    curve.write_csv(&mut f).map_err(|e| CliError::io(&path, e))?;
    drop(f);
    let meta = CurveFile {
        stock: &p.stock,
        mode: spec.mode,
        side: curve.side.name(),
        orientation: curve.orientation.name(),
        separation_secs: p.separation,
        maintaining_only: spec.maintaining_only,
        normalization_basis: result.basis,
        normalized: curve.normalization.is_some(),
        bootstrap_resamples: curve.resamples,
        seed: p.seed,
        curve_seed: curve.seed,
        events: match curve.orientation {
            lobkit_core::event_study::Orientation::After => result.events_after,
            lobkit_core::event_study::Orientation::Before => result.events_before,
        },
        size_bin: bin,
        tau: (0..curve.lags_ns.len()).map(|j| curve.tau(j)).collect(),
        mean: &curve.mean,
        stderr: &curve.stderr,
        n: &curve.n,
    };
    let json = serde_json::to_vec_pretty(&meta).expect("serializable");
    write_file(&dir.join(format!("{name}.json")), &json)
}

/// Runs the event study and writes one CSV and one JSON file per curve.
pub fn cmd_study(p: &StudyParams) -> Result<StudyResult> {
    let out_dir = p
        .out_dir
        .clone()
        .ok_or_else(|| CliError::Usage("--out-dir is required".into()))?;
    let spec = p.spec()?;
    let inputs = sorted_inputs(&p.messages)?;
    ensure_dir(&out_dir)?;
    echo_config(Some(&out_dir), &p.echo())?;
    let pool = thread_pool()?;

    let (acc, bins) = pool.install(|| -> Result<(StudyAccumulator, Option<SizeBins>)> {
        if p.bins > 1 {
            // Bin edges come from the pooled event set, so keep all days.
            let days: Vec<Result<(StudyDay, DaySelection)>> = inputs
                .par_iter()
                .map(|f| {
                    let day = load_day(f, p.tick, p.session)?;
                    let sel = DaySelection::new(&day, &spec);
                    Ok((day, sel))
                })
                .collect();
            let days: Vec<(StudyDay, DaySelection)> = days.into_iter().collect::<Result<_>>()?;
            let sizes: Vec<u64> = days.iter().flat_map(|(_, s)| s.sizes()).collect();
            let bins = SizeBins::from_sizes(&sizes, p.bins).map_err(|e| CliError::Analysis(e.to_string()))?;
            let parts: Vec<StudyAccumulator> = days
                .par_iter()
                .map(|(day, sel)| {
                    let mut a = StudyAccumulator::new(&spec, Some(&bins));
                    a.add_day(day, sel, &spec, Some(&bins));
                    a
                })
                .collect();
            Ok((merge(parts, &spec, Some(&bins)), Some(bins)))
        } else {
            let parts: Vec<Result<StudyAccumulator>> = inputs
                .par_iter()
                .map(|f| {
                    let day = load_day(f, p.tick, p.session)?;
                    let sel = DaySelection::new(&day, &spec);
                    let mut a = StudyAccumulator::new(&spec, None);
                    a.add_day(&day, &sel, &spec, None);
                    Ok(a)
                })
                .collect();
            let parts: Vec<StudyAccumulator> = parts.into_iter().collect::<Result<_>>()?;
            Ok((merge(parts, &spec, None), None))
        }
    })?;

    if acc.events_after == 0 && acc.events_before == 0 {
        return Err(CliError::Analysis(format!(
            "no market orders satisfy the selection (T = {} s, maintaining_only = {})",
            p.separation, spec.maintaining_only
        )));
    }
    let result = pool
        .install(|| {
            acc.finish_with(&spec, p.resamples, p.seed, p.normalize, |jobs| {
                jobs.par_iter().map(|j| j.run(p.resamples)).collect()
            })
        })
        .map_err(|e| CliError::Analysis(e.to_string()))?;

    for c in &result.curves {
        write_curve(&out_dir, "", c, p, &spec, &result, None)?;
    }
    if let Some(bins) = &bins {
        let mut table = String::from("bin,lower_exclusive,upper_inclusive\n");
        for (b, curves) in result.binned.iter().enumerate() {
            let info = SizeBinInfo {
                index: b,
                lower_exclusive: b.checked_sub(1).map(|i| bins.upper_bounds[i]),
                upper_inclusive: bins.upper_bounds[b],
            };
            table.push_str(&format!(
                "{b},{},{}\n",
                info.lower_exclusive.map(|x| x.to_string()).unwrap_or_default(),
                info.upper_inclusive
            ));
            for c in curves {
                write_curve(&out_dir, &format!("bin{b}_"), c, p, &spec, &result, Some(info))?;
            }
        }
        write_file(&out_dir.join("bins.csv"), table.as_bytes())?;
    }
    Ok(result)
}

fn merge(parts: Vec<StudyAccumulator>, spec: &StudySpec, bins: Option<&SizeBins>) -> StudyAccumulator {
    let mut acc = StudyAccumulator::new(spec, bins);
    for p in &parts {
        acc.merge(p);
    }
    acc
}
