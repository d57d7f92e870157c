//! Monte Carlo BER/FER estimation over the bi-AWGN channel.
//!
//! Every frame draws its randomness from its own ChaCha stream keyed by
//! `(master_seed, frame_index)`, and frames are tallied in index order, so
//! results do not depend on the number of worker threads.

mod capacity;
mod gain;
mod optimize;

pub use capacity::{bi_awgn_capacity, capacity_gap, capacity_threshold_db, hd_capacity, CapacityMode};
pub use gain::{coding_gain, ebno_at_ber};
pub use optimize::{default_grid, optimize_scaling, OptimizerSettings, OptimizerTrace};

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bch::ComponentCode;
use crate::channel::{self, ChannelParams};
use crate::error::Error;
use crate::product::{
    anchor_decode, ibdd, ibdd_sr, ideal_ibdd, igmdd_sr, CodeArray, OpCounters, ProductCode, ScalingSchedule,
};
use crate::tpd::{tpd_decode, ChaseConfig};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    /// No decoding: hard channel decisions.
    Uncoded,
    Ibdd,
    Anchor,
    IbddSr,
    IdealIbdd,
    IgmddSr,
    Tpd,
}

impl Algorithm {
    pub const ALL: [Algorithm; 7] = [
        Algorithm::Uncoded,
        Algorithm::Ibdd,
        Algorithm::Anchor,
        Algorithm::IbddSr,
        Algorithm::IdealIbdd,
        Algorithm::IgmddSr,
        Algorithm::Tpd,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Uncoded => "none",
            Algorithm::Ibdd => "ibdd",
            Algorithm::Anchor => "ad",
            Algorithm::IbddSr => "ibdd-sr",
            Algorithm::IdealIbdd => "ideal-ibdd",
            Algorithm::IgmddSr => "igmdd-sr",
            Algorithm::Tpd => "tpd",
        }
    }

    /// Whether the decoder uses a scaling schedule.
    pub fn uses_schedule(self) -> bool {
        matches!(self, Algorithm::IbddSr | Algorithm::IgmddSr)
    }

    /// Capacity against which the decoder is judged: channel reliabilities
    /// in use means soft-decision capacity.
    pub fn capacity_mode(self) -> CapacityMode {
        match self {
            Algorithm::IbddSr | Algorithm::IgmddSr | Algorithm::Tpd => CapacityMode::Soft,
            _ => CapacityMode::Hard,
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let s = s.trim().to_ascii_lowercase();
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .or(match s.as_str() {
                "uncoded" => Some(Algorithm::Uncoded),
                "anchor" => Some(Algorithm::Anchor),
                "ideal" => Some(Algorithm::IdealIbdd),
                _ => None,
            })
            .ok_or_else(|| Error::InvalidConfig(format!("unknown algorithm '{s}'")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Transmission {
    AllZero,
    RandomCodeword,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StopRule {
    pub min_frame_errors: u64,
    pub max_frames: u64,
}

impl Default for StopRule {
    fn default() -> Self {
        Self { min_frame_errors: 100, max_frames: 100_000 }
    }
}

/// Scaling schedules for one algorithm: a default plus optional
/// per-Eb/N0 overrides.
#[derive(Clone, Debug, PartialEq)]
pub struct ScheduleTable {
    pub default: ScalingSchedule,
    pub per_point: Vec<(f64, ScalingSchedule)>,
}

impl ScheduleTable {
    pub fn uniform(s: ScalingSchedule) -> Self {
        Self { default: s, per_point: Vec::new() }
    }

    pub fn at(&self, ebno_db: f64) -> &ScalingSchedule {
        self.per_point.iter().find(|(e, _)| (e - ebno_db).abs() < 1e-9).map(|(_, s)| s).unwrap_or(&self.default)
    }
}

/// Everything needed to simulate one algorithm.
#[derive(Clone, Debug)]
pub struct SimConfig {
    pub algorithm: Algorithm,
    /// Field degree of the extended BCH component; n = 2^m.
    pub m: u32,
    pub t_design: usize,
    pub max_iterations: usize,
    pub schedules: Option<ScheduleTable>,
    pub anchor_threshold: usize,
    pub chase: ChaseConfig,
    pub ebno_grid: Vec<f64>,
    pub stop: StopRule,
    pub master_seed: u64,
    pub workers: usize,
    pub transmission: Transmission,
    /// Stop a sweep after the first point whose BER falls below this.
    pub ber_floor: Option<f64>,
}

impl SimConfig {
    pub fn new(algorithm: Algorithm, m: u32) -> Self {
        Self {
            algorithm,
            m,
            t_design: 2,
            max_iterations: 10,
            schedules: None,
            anchor_threshold: 1,
            chase: ChaseConfig::default(),
            ebno_grid: Vec::new(),
            stop: StopRule::default(),
            master_seed: 1,
            workers: 1,
            transmission: Transmission::AllZero,
            ber_floor: None,
        }
    }

    pub fn validate(&self) -> Result<(), Error> {
        if self.stop.min_frame_errors < 1 {
            return Err(Error::InvalidConfig("min frame errors must be at least 1".into()));
        }
        if self.stop.max_frames < 1 {
            return Err(Error::InvalidConfig("max frames must be at least 1".into()));
        }
        if self.max_iterations < 1 {
            return Err(Error::InvalidConfig("at least one iteration is required".into()));
        }
        if self.workers < 1 {
            return Err(Error::InvalidConfig("at least one worker is required".into()));
        }
        if self.ebno_grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidConfig("Eb/N0 grid must be strictly increasing".into()));
        }
        if self.algorithm.uses_schedule() && self.schedules.is_none() {
            return Err(Error::InvalidConfig(format!("{} requires a scaling schedule", self.algorithm)));
        }
        self.chase.validate()
    }
}

/// One measured point of a BER curve.
#[derive(Clone, Debug, PartialEq)]
pub struct BerRecord {
    pub algorithm: Algorithm,
    pub ebno_db: f64,
    pub iterations: usize,
    pub frames: u64,
    pub bit_errors: u64,
    pub frame_errors: u64,
    pub ber: f64,
    pub fer: f64,
    pub w: Option<Vec<f64>>,
    pub seed: u64,
    pub wall_time: Duration,
    /// The frame budget ran out before the frame-error target was met.
    pub budget_exhausted: bool,
    pub ops: OpCounters,
}

/// Per-frame RNG: stream `frame_index` of the ChaCha generator seeded with
/// `master_seed`.
pub fn frame_rng(master_seed: u64, frame_index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(frame_index);
    rng
}

#[derive(Clone, Copy, Debug, Default)]
struct FrameOutcome {
    bit_errors: u64,
    ops: OpCounters,
}

/// A configured simulator for one algorithm.
pub struct Simulator {
    cfg: SimConfig,
    pc: ProductCode,
}

impl Simulator {
    pub fn new(cfg: SimConfig) -> Result<Self, Error> {
        cfg.validate()?;
        let pc = ProductCode::new(ComponentCode::ebch(cfg.m, cfg.t_design)?);
        Ok(Self { cfg, pc })
    }

    pub fn config(&self) -> &SimConfig {
        &self.cfg
    }

    pub fn product_code(&self) -> &ProductCode {
        &self.pc
    }

    /// Simulates one frame and returns the post-decoding bit error count.
    fn run_frame(&self, params: &ChannelParams, schedule: Option<&ScalingSchedule>, frame_index: u64) -> FrameOutcome {
        let mut rng = frame_rng(self.cfg.master_seed, frame_index);
        let n = self.pc.n();
        let sent = match self.cfg.transmission {
            Transmission::AllZero => CodeArray::zeros(n),
            Transmission::RandomCodeword => self.pc.random_codeword(&mut rng),
        };
        let x = channel::modulate(&sent);
        let y = channel::transmit(&x, params, &mut rng);
        let llr = channel::llr(&y, n, params).expect("finite channel output");
        let hard = channel::hard_decide(&llr);
        let iters = self.cfg.max_iterations;
        let result = match self.cfg.algorithm {
            Algorithm::Uncoded => None,
            Algorithm::Ibdd => Some(ibdd(&self.pc, &hard, iters)),
            Algorithm::Anchor => Some(anchor_decode(&self.pc, &hard, iters, self.cfg.anchor_threshold)),
            Algorithm::IdealIbdd => Some(ideal_ibdd(&self.pc, &hard, &sent, iters)),
            Algorithm::IbddSr => Some(ibdd_sr(&self.pc, &llr, schedule.expect("validated"), iters)),
            Algorithm::IgmddSr => Some(igmdd_sr(&self.pc, &llr, schedule.expect("validated"), iters)),
            Algorithm::Tpd => Some(tpd_decode(&self.pc, &llr, &self.cfg.chase, iters)),
        };
        match result {
            Some(r) => FrameOutcome { bit_errors: r.array.hamming_distance(&sent) as u64, ops: r.ops },
            None => FrameOutcome { bit_errors: hard.hamming_distance(&sent) as u64, ops: OpCounters::default() },
        }
    }

    fn pool(&self) -> rayon::ThreadPool {
        rayon::ThreadPoolBuilder::new().num_threads(self.cfg.workers).build().expect("thread pool")
    }

    /// Bit errors of frames `0..frames` at `ebno_db` with an explicit
    /// schedule. Used by the optimizer.
    pub fn count_errors(&self, ebno_db: f64, schedule: Option<&ScalingSchedule>, frames: u64) -> u64 {
        let params = ChannelParams::new(ebno_db, self.pc.rate()).expect("validated rate");
        self.pool()
            .install(|| (0..frames).into_par_iter().map(|f| self.run_frame(&params, schedule, f).bit_errors).sum())
    }

    /// Runs frames until the stop rule triggers.
    pub fn run_point(&self, ebno_db: f64) -> Result<BerRecord, Error> {
        let schedule = self.cfg.schedules.as_ref().map(|t| t.at(ebno_db).clone());
        self.run_point_with(ebno_db, schedule.as_ref())
    }

    pub fn run_point_with(&self, ebno_db: f64, schedule: Option<&ScalingSchedule>) -> Result<BerRecord, Error> {
        let params = ChannelParams::new(ebno_db, self.pc.rate())?;
        let start = Instant::now();
        let stop = self.cfg.stop;
        let batch = (4 * self.cfg.workers as u64).max(8);
        let pool = self.pool();
        let (mut frames, mut bit_errors, mut frame_errors) = (0u64, 0u64, 0u64);
        let mut ops = OpCounters::default();
        'outer: while frames < stop.max_frames {
            let end = (frames + batch).min(stop.max_frames);
            let outcomes: Vec<FrameOutcome> =
                pool.install(|| (frames..end).into_par_iter().map(|f| self.run_frame(&params, schedule, f)).collect());
            for o in outcomes {
                frames += 1;
                bit_errors += o.bit_errors;
                frame_errors += (o.bit_errors > 0) as u64;
                ops += o.ops;
                if frame_errors >= stop.min_frame_errors {
                    break 'outer;
                }
            }
        }
        let bits = frames as f64 * (self.pc.n() * self.pc.n()) as f64;
        Ok(BerRecord {
            algorithm: self.cfg.algorithm,
            ebno_db,
            iterations: self.cfg.max_iterations,
            frames,
            bit_errors,
            frame_errors,
            ber: bit_errors as f64 / bits,
            fer: frame_errors as f64 / frames as f64,
            w: schedule.map(|s| s.weights().to_vec()),
            seed: self.cfg.master_seed,
            wall_time: start.elapsed(),
            budget_exhausted: frame_errors < stop.min_frame_errors,
            ops,
        })
    }

    /// One record per grid point, in grid order. Stops early once a point
    /// falls below the configured BER floor.
    pub fn run_sweep(&self) -> Result<Vec<BerRecord>, Error> {
        self.run_sweep_with(|_| {})
    }

    pub fn run_sweep_with<F: FnMut(&BerRecord)>(&self, mut on_record: F) -> Result<Vec<BerRecord>, Error> {
        let mut out = Vec::with_capacity(self.cfg.ebno_grid.len());
        for &e in &self.cfg.ebno_grid {
            let rec = self.run_point(e)?;
            on_record(&rec);
            let below_floor = self.cfg.ber_floor.is_some_and(|f| rec.ber < f);
            out.push(rec);
            if below_floor {
                break;
            }
        }
        Ok(out)
    }
}

/// Convenience wrapper: a single BER point.
pub fn run_ber_point(cfg: &SimConfig, ebno_db: f64) -> Result<BerRecord, Error> {
    Simulator::new(cfg.clone())?.run_point(ebno_db)
}

/// Convenience wrapper: the configured Eb/N0 sweep.
pub fn run_sweep(cfg: &SimConfig) -> Result<Vec<BerRecord>, Error> {
    Simulator::new(cfg.clone())?.run_sweep()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(alg: Algorithm) -> SimConfig {
        let mut cfg = SimConfig::new(alg, 4);
        cfg.stop = StopRule { min_frame_errors: 20, max_frames: 200 };
        cfg.master_seed = 7;
        if alg.uses_schedule() {
            cfg.schedules = Some(ScheduleTable::uniform(ScalingSchedule::constant(2.0, 10).unwrap()));
        }
        cfg
    }

    #[test]
    fn algorithm_names_round_trip() {
        for a in Algorithm::ALL {
            assert_eq!(a.name().parse::<Algorithm>().unwrap(), a);
        }
        assert!("bogus".parse::<Algorithm>().is_err());
    }

    #[test]
    fn validation() {
        let mut cfg = small(Algorithm::Ibdd);
        cfg.ebno_grid = vec![1.0, 1.0];
        assert!(cfg.validate().is_err());
        let mut cfg = small(Algorithm::IbddSr);
        cfg.schedules = None;
        assert!(cfg.validate().is_err());
        let mut cfg = small(Algorithm::Ibdd);
        cfg.stop.min_frame_errors = 0;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn noiseless_point_has_no_errors() {
        for alg in Algorithm::ALL {
            let rec = run_ber_point(&small(alg), 30.0).unwrap();
            assert_eq!(rec.bit_errors, 0, "{alg}");
            assert_eq!(rec.frames, 200);
            assert!(rec.budget_exhausted);
        }
    }

    #[test]
    fn repeatable_and_worker_independent() {
        let mut cfg = small(Algorithm::IgmddSr);
        cfg.transmission = Transmission::RandomCodeword;
        let a = run_ber_point(&cfg, 4.0).unwrap();
        cfg.workers = 3;
        let b = run_ber_point(&cfg, 4.0).unwrap();
        assert_eq!((a.frames, a.bit_errors, a.frame_errors), (b.frames, b.bit_errors, b.frame_errors));
        assert_eq!(a.ops, b.ops);
    }

    #[test]
    fn sweep_is_ordered_and_respects_floor() {
        let mut cfg = small(Algorithm::Ibdd);
        cfg.ebno_grid = vec![3.0, 5.0, 30.0, 31.0];
        cfg.ber_floor = Some(1e-9);
        let recs = run_sweep(&cfg).unwrap();
        assert_eq!(recs.len(), 3);
        assert!(recs.windows(2).all(|w| w[0].ebno_db < w[1].ebno_db));
    }
}
