use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::Serialize;

use pcdec::harness::{optimize_scaling, BerRecord, Simulator};

use crate::config::{self, AlgorithmSection, Config};
use crate::output::{self, ResultsWriter, RunManifest, MANIFEST_COMMENT};
use crate::report;

/// Parses `4.5,4.6` or `start:step:stop`.
pub fn parse_ebno_list(s: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() == 3 {
        let v: Vec<f64> = parts.iter().map(|p| p.trim().parse()).collect::<Result<_, _>>()?;
        return config::EbnoGrid::Range { start: v[0], step: v[1], stop: v[2] }.points();
    }
    s.split(',').map(|p| p.trim().parse::<f64>().with_context(|| format!("bad Eb/N0 '{p}'"))).collect()
}

fn toml_list<T: ToString>(items: &[T]) -> String {
    format!("[{}]", items.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(", "))
}

/// Named flags shared by the subcommands, applied as overrides on top of
/// the configuration files.
#[derive(Clone, Debug, Default)]
pub struct RunFlags {
    pub configs: Vec<PathBuf>,
    pub seed: Option<u64>,
    pub workers: Option<usize>,
    pub algorithms: Option<Vec<String>>,
    pub ebno: Option<Vec<f64>>,
    pub min_frame_errors: Option<u64>,
    pub max_frames: Option<u64>,
    /// Raw `--section.key=value` overrides.
    pub overrides: Vec<String>,
}

impl RunFlags {
    fn all_overrides(&self) -> Vec<String> {
        let mut o = Vec::new();
        if let Some(s) = self.seed {
            o.push(format!("--simulation.seed={s}"));
        }
        if let Some(w) = self.workers {
            o.push(format!("--simulation.workers={w}"));
        }
        if let Some(a) = &self.algorithms {
            let quoted: Vec<String> = a.iter().map(|s| format!("\"{}\"", s.trim())).collect();
            o.push(format!("--simulation.algorithms={}", toml_list(&quoted)));
        }
        if let Some(e) = &self.ebno {
            o.push(format!("--simulation.ebno={}", toml_list(e)));
        }
        if let Some(m) = self.min_frame_errors {
            o.push(format!("--simulation.min_frame_errors={m}"));
        }
        if let Some(m) = self.max_frames {
            o.push(format!("--simulation.max_frames={m}"));
        }
        o.extend(self.overrides.iter().cloned());
        o
    }

    /// Effective configuration and its TOML snapshot.
    pub fn load(&self) -> Result<(Config, String)> {
        let mut table = config::load_table(&self.configs, &self.all_overrides())?;
        if self.ebno.is_some() {
            // An explicit grid on the command line wins over per-algorithm grids.
            if let Some(toml::Value::Table(algs)) = table.get_mut("algorithm") {
                for (_, sec) in algs.iter_mut() {
                    if let toml::Value::Table(t) = sec {
                        t.remove("ebno");
                    }
                }
            }
        }
        let snapshot = toml::to_string(&table)?;
        Ok((config::from_table(table)?, snapshot))
    }
}

fn progress(rec: &BerRecord) {
    let rel = if rec.frame_errors > 0 { 1.96 / (rec.frame_errors as f64).sqrt() } else { f64::INFINITY };
    eprintln!(
        "[{}] Eb/N0 {:.3} dB: frames {}, frame errors {}, BER {:.3e} (95% ±{:.0}%), {:.1} s{}",
        rec.algorithm,
        rec.ebno_db,
        rec.frames,
        rec.frame_errors,
        rec.ber,
        100.0 * rel,
        rec.wall_time.as_secs_f64(),
        if rec.budget_exhausted { ", frame budget exhausted" } else { "" }
    );
}

/// Runs every configured sweep and streams the rows to `out` (stdout when
/// absent). With `strict`, budget exhaustion is an error after the file is
/// complete.
pub fn simulate(flags: &RunFlags, out: Option<&Path>, quiet: bool) -> Result<Vec<BerRecord>> {
    let (cfg, snapshot) = flags.load()?;
    let algorithms = cfg.algorithms()?;
    let sims = algorithms
        .iter()
        .map(|&a| Simulator::new(cfg.sim_config(a, true)?).map_err(Into::into))
        .collect::<Result<Vec<_>>>()?;
    for (a, s) in algorithms.iter().zip(&sims) {
        if s.config().ebno_grid.is_empty() {
            bail!("no Eb/N0 grid configured for {a}");
        }
    }
    let outputs = out.map(|p| vec![p.display().to_string()]).unwrap_or_default();
    let mut manifest = RunManifest::start("simulate", cfg.simulation.seed, outputs, snapshot);
    let pc = sims[0].product_code();
    let comments = vec![format!("{MANIFEST_COMMENT}{}", manifest.id), output::code_comment(pc.n(), pc.k(), pc.rate())];
    let mut writer = ResultsWriter::create(out, &comments)?;
    let mut all = Vec::new();
    for sim in &sims {
        let mut write_err = None;
        let recs = sim.run_sweep_with(|r| {
            if !quiet {
                progress(r);
            }
            if write_err.is_none() {
                write_err = writer.write(r).err();
            }
        })?;
        if let Some(e) = write_err {
            return Err(e);
        }
        all.extend(recs);
    }
    manifest.finish();
    if let Some(p) = out {
        manifest.write(&RunManifest::path_for(p))?;
    }
    if cfg.simulation.strict && all.iter().any(|r| r.budget_exhausted) {
        bail!("frame budget exhausted before reaching {} frame errors", cfg.simulation.min_frame_errors);
    }
    Ok(all)
}

#[derive(Serialize)]
struct Fragment {
    algorithm: BTreeMap<String, AlgorithmSection>,
}

/// Optimizes the scaling schedule of every configured algorithm that uses
/// one, at each of its optimization points, and writes a configuration
/// fragment after every point.
pub fn optimize_w(flags: &RunFlags, out: Option<&Path>, quiet: bool) -> Result<String> {
    let (cfg, _) = flags.load()?;
    let mut fragment = Fragment { algorithm: BTreeMap::new() };
    let mut text = String::new();
    let algorithms: Vec<_> = cfg.algorithms()?.into_iter().filter(|a| a.uses_schedule()).collect();
    if algorithms.is_empty() {
        bail!("none of the configured algorithms uses a scaling schedule");
    }
    for alg in algorithms {
        let sim_cfg = cfg.sim_config(alg, false)?;
        let points = match (&flags.ebno, cfg.section(alg).optimize_at) {
            (Some(e), _) => e.clone(),
            (None, Some(p)) => p,
            (None, None) => cfg.ebno_points(alg)?,
        };
        let mut sec = AlgorithmSection::default();
        for (i, &e) in points.iter().enumerate() {
            let (w, trace) = optimize_scaling(&sim_cfg, e, &cfg.optimize.grid, &cfg.optimize.settings())?;
            if !quiet {
                let best = trace.evaluations.iter().map(|t| t.1).min().unwrap_or(0);
                eprintln!(
                    "[{alg}] Eb/N0 {e:.3} dB: {} evaluations, best {best} bit errors, w = {}",
                    trace.evaluations.len(),
                    output::join_weights(w.weights())
                );
            }
            sec.w_at.insert(config::ebno_key(e), w.weights().to_vec());
            if i == points.len() / 2 {
                sec.w = Some(w.weights().to_vec());
            }
            fragment.algorithm.insert(alg.name().to_string(), sec.clone());
            text = format!(
                "# scaling schedules from optimize-w (grid {}, {} frames, seed {})\n{}",
                output::join_weights(&cfg.optimize.grid),
                cfg.optimize.eval_frames,
                cfg.optimize.eval_seed,
                toml::to_string(&fragment)?
            );
            if let Some(p) = out {
                std::fs::write(p, &text).with_context(|| format!("writing {}", p.display()))?;
            }
        }
    }
    if out.is_none() {
        print!("{text}");
    }
    Ok(text)
}

/// Table of gains over iBDD and capacity gaps for a results file.
pub fn report(input: &Path, target_ber: f64, rate: Option<f64>) -> Result<String> {
    let (comments, rows) = output::read_results(input)?;
    let rate = match rate.or_else(|| output::rate_from_comments(&comments)) {
        Some(r) => r,
        None => bail!("no code rate recorded in {}; pass --rate", input.display()),
    };
    let records = rows.iter().map(|r| r.to_record()).collect::<Result<Vec<_>>>()?;
    let table = report::build(&records, target_ber, rate)?;
    Ok(report::render(&table, target_ber, rate))
}
