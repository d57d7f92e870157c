//! Gain and capacity-gap tables from results files.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use anyhow::{bail, Result};

use pcdec::harness::{capacity_gap, ebno_at_ber, Algorithm, BerRecord, CapacityMode};

#[derive(Clone, Debug, PartialEq)]
pub struct ReportRow {
    pub algorithm: Algorithm,
    /// Eb/N0 at the target BER, if the curve crosses it.
    pub ebno_db: Option<f64>,
    pub gain_db: Option<f64>,
    pub gap_db: Option<f64>,
    pub mode: CapacityMode,
}

/// One row per algorithm, in canonical order. Gains are relative to the
/// iBDD curve, which must be present.
pub fn build(records: &[BerRecord], target_ber: f64, rate: f64) -> Result<Vec<ReportRow>> {
    let mut curves: BTreeMap<Algorithm, Vec<BerRecord>> = BTreeMap::new();
    for r in records {
        curves.entry(r.algorithm).or_default().push(r.clone());
    }
    let Some(reference) = curves.get(&Algorithm::Ibdd) else {
        bail!("results contain no ibdd curve");
    };
    let reference_ebno = ebno_at_ber(reference, target_ber).ok();
    Ok(curves
        .iter()
        .map(|(&algorithm, curve)| {
            let ebno_db = ebno_at_ber(curve, target_ber).ok();
            let mode = algorithm.capacity_mode();
            ReportRow {
                algorithm,
                ebno_db,
                gain_db: reference_ebno.zip(ebno_db).map(|(r, e)| r - e),
                gap_db: ebno_db.map(|e| capacity_gap(rate, e, mode)),
                mode,
            }
        })
        .collect())
}

fn cell(v: Option<f64>) -> String {
    v.map(|v| format!("{v:.2}")).unwrap_or_else(|| "n/a".into())
}

pub fn render(rows: &[ReportRow], target_ber: f64, rate: f64) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "target BER {target_ber:.1e}, rate {rate:.4}");
    let _ = writeln!(
        out,
        "{:<12} {:>12} {:>20} {:>24}",
        "algorithm", "Eb/N0 [dB]", "gain over iBDD [dB]", "gap from capacity [dB]"
    );
    for r in rows {
        let gap = match r.gap_db {
            Some(g) => format!("{g:.2} ({})", r.mode.label()),
            None => "n/a".into(),
        };
        let _ = writeln!(out, "{:<12} {:>12} {:>20} {:>24}", r.algorithm.name(), cell(r.ebno_db), cell(r.gain_db), gap);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use pcdec::product::OpCounters;
    use std::time::Duration;

    fn curve(alg: Algorithm, shift: f64) -> Vec<BerRecord> {
        (0..4)
            .map(|i| BerRecord {
                algorithm: alg,
                ebno_db: shift + 0.1 * i as f64,
                iterations: 10,
                frames: 10,
                bit_errors: 10,
                frame_errors: 10,
                ber: 10f64.powi(-3 - i),
                fer: 1.0,
                w: None,
                seed: 1,
                wall_time: Duration::ZERO,
                budget_exhausted: false,
                ops: OpCounters::default(),
            })
            .collect()
    }

    #[test]
    fn single_curve() {
        let rows = build(&curve(Algorithm::Ibdd, 5.0), 1e-4, 0.87).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].gain_db, Some(0.0));
        assert!(render(&rows, 1e-4, 0.87).contains("ibdd"));
    }

    #[test]
    fn duplicated_curve_has_zero_gain() {
        let mut recs = curve(Algorithm::Ibdd, 5.0);
        let mut dup = curve(Algorithm::Tpd, 5.0);
        recs.append(&mut dup);
        let rows = build(&recs, 1e-4, 0.87).unwrap();
        assert_eq!(rows[1].gain_db, Some(0.0));
        assert_eq!(rows[1].mode, CapacityMode::Soft);
    }

    #[test]
    fn missing_crossings_render_as_na() {
        let mut recs = curve(Algorithm::Ibdd, 5.0);
        recs.extend(curve(Algorithm::Anchor, 4.8));
        let rows = build(&recs, 1e-9, 0.87).unwrap();
        assert!(rows.iter().all(|r| r.gain_db.is_none()));
        let text = render(&rows, 1e-9, 0.87);
        assert!(text.contains("n/a"));
        assert!(build(&curve(Algorithm::Tpd, 4.0), 1e-4, 0.87).is_err());
    }
}
