//! Experiment configuration: TOML files with one table per concern and one
//! sub-table per algorithm. Several files merge in order, then
//! `--section.key=value` overrides apply.
//!
//! ```toml
//! [code]
//! m = 8
//! t = 2
//!
//! [simulation]
//! iterations = 10
//! seed = 1
//! algorithms = ["ibdd", "igmdd-sr"]
//! ebno = { start = 4.2, stop = 5.0, step = 0.1 }
//!
//! [algorithm.igmdd-sr]
//! w = [8.0, 9.0, 10.0]
//! w_at = { "4.3" = [7.0, 8.0, 9.0] }
//! ```

use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};
use toml::{Table, Value};

use pcdec::harness::{default_grid, Algorithm, OptimizerSettings, ScheduleTable, SimConfig, StopRule, Transmission};
use pcdec::product::ScalingSchedule;
use pcdec::tpd::ChaseConfig;

#[derive(Clone, Debug, Default, Deserialize, Serialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct Config {
    #[serde(default)]
    pub code: CodeSection,
    #[serde(default)]
    pub simulation: SimulationSection,
    #[serde(default)]
    pub optimize: OptimizeSection,
    #[serde(default)]
    pub report: ReportSection,
    #[serde(default)]
    pub algorithm: BTreeMap<String, AlgorithmSection>,
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct CodeSection {
    pub m: u32,
    pub t: usize,
}

impl Default for CodeSection {
    fn default() -> Self {
        Self { m: 8, t: 2 }
    }
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
#[serde(untagged)]
pub enum EbnoGrid {
    List(Vec<f64>),
    Range { start: f64, stop: f64, step: f64 },
}

impl EbnoGrid {
    pub fn points(&self) -> Result<Vec<f64>> {
        match self {
            EbnoGrid::List(v) => Ok(v.clone()),
            EbnoGrid::Range { start, stop, step } => {
                if !(*step > 0.0) || stop < start {
                    bail!("invalid Eb/N0 range {start}..{stop} step {step}");
                }
                let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
                Ok((0..count).map(|i| round_db(start + step * i as f64)).collect())
            }
        }
    }
}

/// Rounds to 1e-6 dB so that ranges produce clean grid values.
fn round_db(v: f64) -> f64 {
    (v * 1e6).round() / 1e6
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct SimulationSection {
    pub iterations: usize,
    pub seed: u64,
    pub workers: Option<usize>,
    pub min_frame_errors: u64,
    pub max_frames: u64,
    pub transmission: String,
    pub algorithms: Vec<String>,
    pub ebno: Option<EbnoGrid>,
    pub ber_floor: Option<f64>,
    /// Fail when any point runs out of frames before reaching the
    /// frame-error target.
    pub strict: bool,
}

impl Default for SimulationSection {
    fn default() -> Self {
        let stop = StopRule::default();
        Self {
            iterations: 10,
            seed: 1,
            workers: None,
            min_frame_errors: stop.min_frame_errors,
            max_frames: stop.max_frames,
            transmission: "all-zero".into(),
            algorithms: vec!["ibdd".into()],
            ebno: None,
            ber_floor: None,
            strict: false,
        }
    }
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct OptimizeSection {
    pub grid: Vec<f64>,
    /// Grid entries are multiples of `2/σ²`.
    pub relative: bool,
    pub eval_frames: u64,
    pub eval_seed: u64,
    pub max_sweeps: usize,
}

impl Default for OptimizeSection {
    fn default() -> Self {
        let s = OptimizerSettings::default();
        Self {
            grid: default_grid(),
            relative: s.relative_grid,
            eval_frames: s.eval_frames,
            eval_seed: s.eval_seed,
            max_sweeps: s.max_sweeps,
        }
    }
}

impl OptimizeSection {
    pub fn settings(&self) -> OptimizerSettings {
        OptimizerSettings {
            eval_frames: self.eval_frames,
            eval_seed: self.eval_seed,
            max_sweeps: self.max_sweeps,
            relative_grid: self.relative,
        }
    }
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct ReportSection {
    pub target_ber: f64,
    /// Rate used for capacity limits; defaults to the code rate in the CSV.
    pub rate: Option<f64>,
}

impl Default for ReportSection {
    fn default() -> Self {
        Self { target_ber: 1e-4, rate: None }
    }
}

#[derive(Clone, Debug, Default, Deserialize, Serialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct AlgorithmSection {
    pub ebno: Option<EbnoGrid>,
    pub iterations: Option<usize>,
    pub w: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub w_at: BTreeMap<String, Vec<f64>>,
    /// Points at which `optimize-w` tunes the schedule.
    pub optimize_at: Option<Vec<f64>>,
    pub threshold: Option<usize>,
    pub p: Option<usize>,
    pub alpha: Option<Vec<f64>>,
    pub beta: Option<Vec<f64>>,
    pub min_frame_errors: Option<u64>,
    pub max_frames: Option<u64>,
}

/// Reads, merges and overrides configuration sources into one table.
pub fn load_table(paths: &[impl AsRef<Path>], overrides: &[String]) -> Result<Table> {
    let mut table = Table::new();
    for p in paths {
        let p = p.as_ref();
        let text = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
        let t: Table = text.parse().with_context(|| format!("parsing {}", p.display()))?;
        merge(&mut table, t);
    }
    for o in overrides {
        apply_override(&mut table, o)?;
    }
    Ok(table)
}

pub fn from_table(table: Table) -> Result<Config> {
    let cfg: Config = Value::Table(table).try_into().context("invalid configuration")?;
    for name in cfg.simulation.algorithms.iter().chain(cfg.algorithm.keys()) {
        name.parse::<Algorithm>()?;
    }
    Ok(cfg)
}

pub fn load(paths: &[impl AsRef<Path>], overrides: &[String]) -> Result<Config> {
    from_table(load_table(paths, overrides)?)
}

fn merge(dst: &mut Table, src: Table) {
    for (k, v) in src {
        match (dst.get_mut(&k), v) {
            (Some(Value::Table(d)), Value::Table(s)) => merge(d, s),
            (_, v) => {
                dst.insert(k, v);
            }
        }
    }
}

/// Applies `--a.b.c=value`. The value is read as a TOML value, falling back
/// to a plain string.
pub fn apply_override(table: &mut Table, arg: &str) -> Result<()> {
    let body =
        arg.strip_prefix("--").with_context(|| format!("override '{arg}' must look like --section.key=value"))?;
    let (path, raw) =
        body.split_once('=').with_context(|| format!("override '{arg}' must look like --section.key=value"))?;
    let value = parse_value(raw);
    let keys: Vec<&str> = path.split('.').collect();
    if keys.iter().any(|k| k.is_empty()) {
        bail!("override '{arg}' has an empty key");
    }
    let (last, parents) = keys.split_last().expect("split yields one key");
    let mut cur = table;
    for k in parents {
        let entry = cur.entry(k.to_string()).or_insert_with(|| Value::Table(Table::new()));
        cur = match entry {
            Value::Table(t) => t,
            _ => bail!("override '{arg}': '{k}' is not a table"),
        };
    }
    cur.insert(last.to_string(), value);
    Ok(())
}

fn parse_value(raw: &str) -> Value {
    format!("v = {raw}")
        .parse::<Table>()
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| Value::String(raw.to_string()))
}

impl Config {
    pub fn algorithms(&self) -> Result<Vec<Algorithm>> {
        self.simulation.algorithms.iter().map(|a| Ok(a.parse()?)).collect()
    }

    pub fn section(&self, alg: Algorithm) -> AlgorithmSection {
        self.algorithm
            .iter()
            .find(|(k, _)| k.parse::<Algorithm>().ok() == Some(alg))
            .map(|(_, v)| v.clone())
            .unwrap_or_default()
    }

    pub fn section_mut(&mut self, alg: Algorithm) -> &mut AlgorithmSection {
        let key = self
            .algorithm
            .keys()
            .find(|k| k.parse::<Algorithm>().ok() == Some(alg))
            .cloned()
            .unwrap_or_else(|| alg.name().to_string());
        self.algorithm.entry(key).or_default()
    }

    pub fn workers(&self) -> usize {
        self.simulation.workers.unwrap_or_else(|| std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1))
    }

    pub fn ebno_points(&self, alg: Algorithm) -> Result<Vec<f64>> {
        match self.section(alg).ebno.as_ref().or(self.simulation.ebno.as_ref()) {
            Some(g) => g.points(),
            None => bail!("no Eb/N0 grid configured for {alg}"),
        }
    }

    /// Builds the harness configuration for one algorithm. Schedules are
    /// only required when `need_schedule` is set.
    pub fn sim_config(&self, alg: Algorithm, need_schedule: bool) -> Result<SimConfig> {
        let sec = self.section(alg);
        let sim = &self.simulation;
        let mut cfg = SimConfig::new(alg, self.code.m);
        cfg.t_design = self.code.t;
        cfg.max_iterations = sec.iterations.unwrap_or(sim.iterations);
        cfg.master_seed = sim.seed;
        cfg.workers = self.workers();
        cfg.stop = StopRule {
            min_frame_errors: sec.min_frame_errors.unwrap_or(sim.min_frame_errors),
            max_frames: sec.max_frames.unwrap_or(sim.max_frames),
        };
        cfg.transmission = match sim.transmission.as_str() {
            "all-zero" => Transmission::AllZero,
            "random" | "random-codeword" => Transmission::RandomCodeword,
            other => bail!("unknown transmission mode '{other}'"),
        };
        cfg.ber_floor = sim.ber_floor;
        cfg.ebno_grid = self.ebno_points(alg).unwrap_or_default();
        if let Some(t) = sec.threshold {
            cfg.anchor_threshold = t;
        }
        let mut chase = ChaseConfig::default();
        if let Some(p) = sec.p {
            chase.p = p;
        }
        if let Some(a) = &sec.alpha {
            chase.alpha = a.clone();
        }
        if let Some(b) = &sec.beta {
            chase.beta = b.clone();
        }
        cfg.chase = chase;
        if alg.uses_schedule() {
            cfg.schedules = schedule_table(&sec)?;
            if need_schedule && cfg.schedules.is_none() {
                bail!("{alg} needs a scaling schedule: set algorithm.{alg}.w or run optimize-w");
            }
            if !need_schedule && cfg.schedules.is_none() {
                let placeholder = ScalingSchedule::constant(1.0, cfg.max_iterations)?;
                cfg.schedules = Some(ScheduleTable::uniform(placeholder));
            }
        }
        Ok(cfg)
    }
}

fn schedule_table(sec: &AlgorithmSection) -> Result<Option<ScheduleTable>> {
    let mut per_point = Vec::new();
    for (k, w) in &sec.w_at {
        let e: f64 = k.parse().with_context(|| format!("w_at key '{k}' is not an Eb/N0 value"))?;
        per_point.push((e, ScalingSchedule::new(w.clone())?));
    }
    per_point.sort_by(|a, b| a.0.total_cmp(&b.0));
    let default = match (&sec.w, per_point.first()) {
        (Some(w), _) => ScalingSchedule::new(w.clone())?,
        (None, Some((_, s))) => s.clone(),
        (None, None) => return Ok(None),
    };
    Ok(Some(ScheduleTable { default, per_point }))
}

/// Canonical key for a per-point schedule.
pub fn ebno_key(ebno_db: f64) -> String {
    format!("{}", round_db(ebno_db))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn range_points() {
        let g = EbnoGrid::Range { start: 4.0, stop: 4.3, step: 0.1 };
        assert_eq!(g.points().unwrap(), vec![4.0, 4.1, 4.2, 4.3]);
        assert!(EbnoGrid::Range { start: 1.0, stop: 0.0, step: 0.1 }.points().is_err());
    }

    #[test]
    fn overrides_and_merge() {
        let mut t: Table = "[simulation]\nseed = 3\n[algorithm.ad]\nthreshold = 1\n".parse().unwrap();
        apply_override(&mut t, "--simulation.seed=9").unwrap();
        apply_override(&mut t, "--algorithm.ibdd-sr.w=[1.0, 2.0]").unwrap();
        apply_override(&mut t, "--simulation.transmission=random").unwrap();
        assert!(apply_override(&mut t, "simulation.seed=1").is_err());
        assert!(apply_override(&mut t, "--simulation.seed").is_err());
        let cfg = from_table(t).unwrap();
        assert_eq!(cfg.simulation.seed, 9);
        assert_eq!(cfg.simulation.transmission, "random");
        assert_eq!(cfg.section(Algorithm::IbddSr).w, Some(vec![1.0, 2.0]));
        assert_eq!(cfg.section(Algorithm::Anchor).threshold, Some(1));

        let mut a: Table = "[code]\nm = 6\nt = 2\n[simulation]\nseed = 1\n".parse().unwrap();
        merge(&mut a, "[simulation]\nseed = 2\n".parse().unwrap());
        let cfg = from_table(a).unwrap();
        assert_eq!((cfg.code.m, cfg.simulation.seed), (6, 2));
    }

    #[test]
    fn rejects_unknown_names() {
        assert!(from_table("[simulation]\nalgorithms = [\"nope\"]\n".parse().unwrap()).is_err());
        assert!(from_table("[simulation]\nbogus = 1\n".parse().unwrap()).is_err());
    }

    #[test]
    fn schedule_lookup() {
        let t: Table = "[algorithm.igmdd-sr]\nw_at = { \"4.3\" = [2.0], \"4.4\" = [3.0] }\n".parse().unwrap();
        let mut cfg = from_table(t).unwrap();
        cfg.simulation.ebno = Some(EbnoGrid::List(vec![4.3, 4.4, 4.5]));
        let sim = cfg.sim_config(Algorithm::IgmddSr, true).unwrap();
        let table = sim.schedules.unwrap();
        assert_eq!(table.at(4.4).weights(), &[3.0]);
        assert_eq!(table.at(4.5).weights(), &[2.0]);
        assert!(cfg.sim_config(Algorithm::IbddSr, true).is_err());
        assert!(cfg.sim_config(Algorithm::IbddSr, false).is_ok());
    }
}
