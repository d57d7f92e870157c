use pcdec::bch::ComponentCode;
use pcdec::channel::{llr, modulate, transmit, ChannelParams};
use pcdec::product::{
    anchor_decode, ibdd, ibdd_sr, ideal_ibdd, igmdd_sr, CodeArray, DecoderResult, LlrMatrix, ProductCode,
    ScalingSchedule,
};
use pcdec::tpd::{tpd_decode, ChaseConfig};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const ITERS: usize = 6;

fn pc16() -> ProductCode {
    ProductCode::new(ComponentCode::ebch(4, 2).unwrap())
}

/// Random codeword and a noisy observation of it at `ebno` dB.
fn frame(pc: &ProductCode, ebno: f64, seed: u64) -> (CodeArray, LlrMatrix) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let c = pc.random_codeword(&mut rng);
    let params = ChannelParams::new(ebno, pc.rate()).unwrap();
    let y = transmit(&modulate(&c), &params, &mut rng);
    (c, llr(&y, pc.n(), &params).unwrap())
}

fn schedule(w: f64) -> ScalingSchedule {
    ScalingSchedule::constant(w, ITERS).unwrap()
}

fn all_decoders(pc: &ProductCode, truth: &CodeArray, l: &LlrMatrix) -> Vec<(&'static str, DecoderResult)> {
    let hard = l.hard_decisions();
    vec![
        ("ibdd", ibdd(pc, &hard, ITERS)),
        ("ideal", ideal_ibdd(pc, &hard, truth, ITERS)),
        ("anchor", anchor_decode(pc, &hard, ITERS, 1)),
        ("ibdd-sr", ibdd_sr(pc, l, &schedule(4.0), ITERS)),
        ("igmdd-sr", igmdd_sr(pc, l, &schedule(3.0), ITERS)),
        ("tpd", tpd_decode(pc, l, &ChaseConfig::default(), ITERS)),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn converged_flag_means_product_codeword(ebno in 1.0f64..6.0, seed: u64) {
        let pc = pc16();
        let (c, l) = frame(&pc, ebno, seed);
        for (name, res) in all_decoders(&pc, &c, &l) {
            prop_assert_eq!(res.array.n(), pc.n(), "{}", name);
            prop_assert_eq!(res.converged, pc.is_codeword(&res.array), "{}", name);
            prop_assert!(res.iterations_used <= ITERS, "{}", name);
        }
    }

    #[test]
    fn decoders_are_deterministic(ebno in 1.0f64..6.0, seed: u64) {
        let pc = pc16();
        let (c, l) = frame(&pc, ebno, seed);
        let a = all_decoders(&pc, &c, &l);
        let b = all_decoders(&pc, &c, &l);
        for ((name, x), (_, y)) in a.iter().zip(&b) {
            prop_assert_eq!(&x.array, &y.array, "{}", name);
            prop_assert_eq!(x.ops, y.ops, "{}", name);
            prop_assert_eq!(x.iterations_used, y.iterations_used, "{}", name);
        }
    }

    #[test]
    fn ibdd_spends_two_n_bdd_calls_per_iteration(ebno in 1.0f64..6.0, seed: u64) {
        let pc = pc16();
        let (_, l) = frame(&pc, ebno, seed);
        let res = ibdd(&pc, &l.hard_decisions(), ITERS);
        prop_assert_eq!(res.ops.bdd_calls, (2 * pc.n() * res.iterations_used) as u64);
    }

    #[test]
    fn igmdd_sr_error_erasure_calls_are_bounded(ebno in 1.0f64..6.0, seed: u64) {
        let pc = pc16();
        let (_, l) = frame(&pc, ebno, seed);
        let res = igmdd_sr(&pc, &l, &schedule(3.0), ITERS);
        let t = pc.component().t();
        prop_assert!(res.ops.error_erasure_calls <= (2 * pc.n() * (t + 1) * res.iterations_used) as u64);
    }

    #[test]
    fn genie_only_moves_bits_toward_the_truth(ebno in 1.0f64..6.0, seed: u64) {
        let pc = pc16();
        let (c, l) = frame(&pc, ebno, seed);
        let hard = l.hard_decisions();
        let res = ideal_ibdd(&pc, &hard, &c, ITERS);
        for (i, ((&out, &rx), &tx)) in res.array.bits().iter().zip(hard.bits()).zip(c.bits()).enumerate() {
            prop_assert!(out == rx || out == tx, "bit {} moved away from the transmitted value", i);
        }
        prop_assert!(res.array.hamming_distance(&c) <= hard.hamming_distance(&c));
    }
}

#[test]
fn noiseless_frames_are_returned_unchanged() {
    for m in [4, 6] {
        let pc = ProductCode::new(ComponentCode::ebch(m, 2).unwrap());
        for seed in 0..5 {
            let (c, l) = frame(&pc, 60.0, seed);
            for (name, res) in all_decoders(&pc, &c, &l) {
                assert!(res.converged, "{name}");
                assert_eq!(res.array, c, "{name}");
            }
        }
    }
}

#[test]
fn tpd_decisions_are_fixed_points() {
    let pc = ProductCode::new(ComponentCode::ebch(6, 2).unwrap());
    let cfg = ChaseConfig::default();
    let mut checked = 0;
    for seed in 0..40 {
        let (_, l) = frame(&pc, 3.0, seed);
        let first = tpd_decode(&pc, &l, &cfg, 10);
        if !first.converged {
            continue;
        }
        checked += 1;
        let longer = tpd_decode(&pc, &l, &cfg, 20);
        assert_eq!(longer.array, first.array);
        // Re-decoding a confident observation of the decision keeps it.
        let again: Vec<f64> = first.array.bits().iter().map(|&b| if b == 0 { 4.0 } else { -4.0 }).collect();
        let res = tpd_decode(&pc, &LlrMatrix::new(pc.n(), again).unwrap(), &cfg, 10);
        assert_eq!(res.array, first.array);
        assert_eq!(res.iterations_used, 1);
    }
    assert!(checked >= 10, "only {checked} converged frames");
}

#[test]
fn igmdd_sr_beats_ibdd_near_the_waterfall() {
    // Aggregate bit errors over frames near the iBDD waterfall.
    let pc = ProductCode::new(ComponentCode::ebch(6, 2).unwrap());
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let (mut e_ibdd, mut e_gmd) = (0usize, 0usize);
    for _ in 0..60 {
        let (c, l) = frame(&pc, 3.6, rng.gen());
        e_ibdd += ibdd(&pc, &l.hard_decisions(), 10).array.hamming_distance(&c);
        let w = 2.0 * 2.0 / ChannelParams::new(3.6, pc.rate()).unwrap().sigma2;
        e_gmd += igmdd_sr(&pc, &l, &ScalingSchedule::constant(w, 10).unwrap(), 10).array.hamming_distance(&c);
    }
    assert!(e_gmd < e_ibdd, "igmdd-sr {e_gmd} vs ibdd {e_ibdd}");
}
