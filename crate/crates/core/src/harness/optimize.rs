use std::collections::HashMap;

use crate::bch::ComponentCode;
use crate::channel::ChannelParams;
use crate::error::Error;
use crate::product::{ProductCode, ScalingSchedule};

use super::{SimConfig, Simulator};

/// Search settings for [`optimize_scaling`].
#[derive(Clone, Debug, PartialEq)]
pub struct OptimizerSettings {
    /// Frames simulated per objective evaluation.
    pub eval_frames: u64,
    /// Master seed used for every evaluation, so candidates see the same
    /// noise.
    pub eval_seed: u64,
    /// Upper bound on full coordinate sweeps.
    pub max_sweeps: usize,
    /// Grid entries are multiples of the channel LLR scale `2/σ²` at the
    /// target Eb/N0 rather than absolute weights.
    pub relative_grid: bool,
}

impl Default for OptimizerSettings {
    fn default() -> Self {
        Self { eval_frames: 2_000, eval_seed: 0x5eed, max_sweeps: 8, relative_grid: true }
    }
}

/// Default weight grid `{0.4, 0.6, …, 3.0}`.
pub fn default_grid() -> Vec<f64> {
    (0..14).map(|i| 0.4 + 0.2 * i as f64).map(|v| (v * 10.0).round() / 10.0).collect()
}

/// Every evaluated vector and its bit error count, in evaluation order.
#[derive(Clone, Debug, Default)]
pub struct OptimizerTrace {
    pub evaluations: Vec<(Vec<f64>, u64)>,
}

struct Objective<'a> {
    sim: &'a Simulator,
    ebno_db: f64,
    frames: u64,
    cache: HashMap<Vec<usize>, u64>,
    trace: OptimizerTrace,
}

impl Objective<'_> {
    fn eval(&mut self, grid: &[f64], idx: &[usize]) -> u64 {
        if let Some(&v) = self.cache.get(idx) {
            return v;
        }
        let w: Vec<f64> = idx.iter().map(|&i| grid[i]).collect();
        let s = ScalingSchedule::new(w.clone()).expect("grid is positive");
        let errors = self.sim.count_errors(self.ebno_db, Some(&s), self.frames);
        self.cache.insert(idx.to_vec(), errors);
        self.trace.evaluations.push((w, errors));
        errors
    }
}

/// Coordinate search for a monotone non-decreasing schedule of length
/// `cfg.max_iterations` with entries from `grid` (scaled by `2/σ²` when
/// the grid is relative), minimizing the Monte Carlo bit error count at
/// `ebno_db`.
///
/// Starts from the best constant vector, then sweeps positions `1…ℓmax`
/// until a full sweep brings no improvement. Ties keep the incumbent.
pub fn optimize_scaling(
    cfg: &SimConfig,
    ebno_db: f64,
    grid: &[f64],
    settings: &OptimizerSettings,
) -> Result<(ScalingSchedule, OptimizerTrace), Error> {
    if grid.is_empty() || grid.iter().any(|g| !(g.is_finite() && *g > 0.0)) {
        return Err(Error::InvalidConfig("optimizer grid must be nonempty and positive".into()));
    }
    if !cfg.algorithm.uses_schedule() {
        return Err(Error::InvalidConfig(format!("{} has no scaling schedule", cfg.algorithm)));
    }
    if settings.eval_frames == 0 {
        return Err(Error::InvalidConfig("optimizer needs at least one frame".into()));
    }
    let len = cfg.max_iterations;
    let mut sim_cfg = cfg.clone();
    let scale = if settings.relative_grid {
        let rate = ProductCode::new(ComponentCode::ebch(cfg.m, cfg.t_design)?).rate();
        2.0 / ChannelParams::new(ebno_db, rate)?.sigma2
    } else {
        1.0
    };
    let mut grid: Vec<f64> = grid.iter().map(|g| g * scale).collect();
    grid.sort_by(f64::total_cmp);
    grid.dedup();

    sim_cfg.master_seed = settings.eval_seed;
    sim_cfg.schedules = Some(super::ScheduleTable::uniform(ScalingSchedule::constant(grid[0], len)?));
    let sim = Simulator::new(sim_cfg)?;
    let mut obj = Objective {
        sim: &sim,
        ebno_db,
        frames: settings.eval_frames,
        cache: HashMap::new(),
        trace: OptimizerTrace::default(),
    };

    let mut best = vec![0usize; len];
    let mut best_err = obj.eval(&grid, &best);
    for g in 1..grid.len() {
        let cand = vec![g; len];
        let e = obj.eval(&grid, &cand);
        if e < best_err {
            best = cand;
            best_err = e;
        }
    }

    if len > 1 {
        for _ in 0..settings.max_sweeps {
            let mut improved = false;
            for l in 0..len {
                let lo = if l == 0 { 0 } else { best[l - 1] };
                let hi = if l + 1 == len { grid.len() - 1 } else { best[l + 1] };
                for g in lo..=hi {
                    if g == best[l] {
                        continue;
                    }
                    let mut cand = best.clone();
                    cand[l] = g;
                    let e = obj.eval(&grid, &cand);
                    if e < best_err {
                        best = cand;
                        best_err = e;
                        improved = true;
                    }
                }
            }
            if !improved {
                break;
            }
        }
    }

    let w = best.iter().map(|&i| grid[i]).collect();
    Ok((ScalingSchedule::new(w)?, obj.trace))
}
