use crate::error::Error;

use super::BerRecord;

/// Eb/N0 (dB) at which a BER curve crosses `target_ber`, by linear
/// interpolation of `log10(BER)` between the bracketing points. Points with
/// zero measured errors are ignored.
pub fn ebno_at_ber(records: &[BerRecord], target_ber: f64) -> Result<f64, Error> {
    let name = records.first().map(|r| r.algorithm.name()).unwrap_or("<empty>");
    let mut pts: Vec<(f64, f64)> = records.iter().filter(|r| r.ber > 0.0).map(|r| (r.ebno_db, r.ber)).collect();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    let target = target_ber.log10();
    for w in pts.windows(2) {
        let ((e0, b0), (e1, b1)) = (w[0], w[1]);
        let (l0, l1) = (b0.log10(), b1.log10());
        if l0 >= target && target >= l1 {
            if l0 == l1 {
                return Ok(e0);
            }
            return Ok(e0 + (e1 - e0) * (l0 - target) / (l0 - l1));
        }
    }
    Err(Error::NotBracketed(name.to_string()))
}

/// Gain of curve `a` over curve `b` at `target_ber`:
/// `Eb/N0_b − Eb/N0_a`, positive when `a` needs less energy.
pub fn coding_gain(a: &[BerRecord], b: &[BerRecord], target_ber: f64) -> Result<f64, Error> {
    Ok(ebno_at_ber(b, target_ber)? - ebno_at_ber(a, target_ber)?)
}
