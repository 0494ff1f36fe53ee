//! Acceptance gate: one test per criterion, each printing a single
//! pass/fail line. Tolerances are pinned as constants next to each check.
//!
//! The Monte Carlo criteria run the reference (1024, 512+32) code at desk
//! scale; expect a total runtime in the tens of minutes on one core.

use rayon::prelude::*;

use psclf::channel::{frame_rng, modulate, transmit};
use psclf::crc::{crc_append, crc_check, CrcSpec};
use psclf::design::{design_partitions, estimate_first_error_cdf, load_cdf_file, partition_error_probs};
use psclf::flip::{build_flip_set, psclf_decode, sclf_decode, DecodeStatus, FlipConfig};
use psclf::latency::{sc_partial_latency, scl_latency, LatencyParams};
use psclf::polar::{build_message_word, polar_transform, PartitionSpec, PolarCode};
use psclf::scl::{sc_decode, FlipDirective, SclDecoder};
use psclf::sim::{run_fer_sweep, DecoderKind, ExperimentConfig, ResultRow, StopRule};
use rand::Rng;

fn verdict(criterion: usize, name: &str, pass: bool, detail: String) {
    println!("ACCEPTANCE {criterion} ({name}): {}", if pass { "PASS" } else { "FAIL" });
    assert!(pass, "criterion {criterion} ({name}): {detail}");
}

fn reference_code() -> PolarCode {
    PolarCode::construct(1024, 512, 32, 2.0).unwrap()
}

fn noisy_frame(code: &PolarCode, partitions: &PartitionSpec, ebn0_db: f64, seed: u64, idx: u64) -> (Vec<u8>, psclf::channel::LlrFrame) {
    let mut rng = frame_rng(seed, idx);
    let m: Vec<u8> = (0..code.payload_len()).map(|_| rng.gen_range(0..2)).collect();
    let word = build_message_word(&m, code, partitions).unwrap();
    let u = code.insert_message(&word.with_crc).unwrap();
    let frame = transmit(&modulate(&code.encode(&u).unwrap()), ebn0_db, code.rate(), &mut rng).unwrap();
    (u, frame)
}

#[test]
fn criterion_1_latency_exactness() {
    let params = LatencyParams::new(1024, 64, 544).unwrap();
    let mut pass = sc_partial_latency(1023, &params).unwrap() == 2080 && scl_latency(&params) == 2624;
    let mut detail = String::new();
    let mut n = 8usize;
    while n <= 4096 {
        let mut phi = 1usize;
        while 4 * phi <= n {
            let p = LatencyParams::new(n, phi, 0).unwrap();
            let summed = sc_partial_latency(n - 1, &p).unwrap() as f64;
            let closed = 2.0 * n as f64 + (n as f64 / phi as f64) * ((n as f64) / (4.0 * phi as f64)).log2();
            if summed != closed {
                pass = false;
                detail = format!("N={n} phi={phi}: {summed} != {closed}");
            }
            phi *= 2;
        }
        n *= 2;
    }
    verdict(1, "latency exactness", pass, detail);
}

#[test]
fn criterion_2_equivalence_oracles() {
    const FRAMES: u64 = 1000;
    let code = PolarCode::construct(128, 64, 8, 2.0).unwrap();
    let single = PartitionSpec::single(&code);
    let mut detail = String::new();
    let mut pass = true;
    for idx in 0..FRAMES {
        let (_, frame) = noisy_frame(&code, &single, 2.0, 21, idx);
        // SCL with L = 1 degenerates to SC
        let sc = sc_decode(&frame, &code).unwrap();
        let mut scl1 = SclDecoder::new(&code, 1, &frame, 1).unwrap();
        scl1.decode_all(&single).unwrap();
        if scl1.paths()[0].decisions() != sc.as_slice() {
            pass = false;
            detail = format!("frame {idx}: SCL(1) != SC");
            break;
        }
        // one partition makes PSCLF the SCLF algorithm
        let flip = FlipConfig { t_max: 8, alpha: 1.2 };
        let a = sclf_decode(&frame, &code, 4, flip, None).unwrap();
        let b = psclf_decode(&frame, &code, &single, 4, flip, None).unwrap();
        if a.status != b.status || a.decoded != b.decoded {
            pass = false;
            detail = format!("frame {idx}: PSCLF(P=1) != SCLF");
            break;
        }
        // a unit trial budget disables flipping entirely
        let c = sclf_decode(&frame, &code, 4, FlipConfig { t_max: 1, alpha: 1.2 }, None).unwrap();
        let mut plain = SclDecoder::new(&code, 4, &frame, 1).unwrap();
        plain.decode_all(&single).unwrap();
        let plain_out = plain.select_output().map(|p| p.decisions().to_vec());
        if c.decoded != plain_out {
            pass = false;
            detail = format!("frame {idx}: SCLF(T=1) != CA-SCL");
            break;
        }
    }
    verdict(2, "equivalence oracles", pass, detail);
}

#[test]
fn criterion_3_encoder_crc_properties() {
    let mut pass = true;
    let mut detail = String::new();
    let mut rng = frame_rng(3, 0);
    // transform involution, 10^4 vectors spread over block lengths
    for trial in 0..10_000 {
        let n = [64, 256, 1024][trial % 3];
        let u: Vec<u8> = (0..n).map(|_| rng.gen_range(0..2)).collect();
        let mut x = u.clone();
        polar_transform(&mut x);
        polar_transform(&mut x);
        if x != u {
            pass = false;
            detail = format!("involution broken at N={n}");
        }
    }
    // append/check round trip, 10^4 payloads per supported length
    for len in [3usize, 7, 8, 10, 11, 16, 32] {
        let spec = CrcSpec::standard(len).unwrap();
        for _ in 0..10_000 {
            let payload: Vec<u8> = (0..48).map(|_| rng.gen_range(0..2)).collect();
            if !crc_check(&crc_append(&payload, &spec), &spec).unwrap() {
                pass = false;
                detail = format!("round trip failed for C={len}");
            }
        }
        // exhaustive single-bit-error detection
        for _ in 0..200 {
            let payload: Vec<u8> = (0..48).map(|_| rng.gen_range(0..2)).collect();
            let coded = crc_append(&payload, &spec);
            for pos in 0..coded.len() {
                let mut bad = coded.clone();
                bad[pos] ^= 1;
                if crc_check(&bad, &spec).unwrap() {
                    pass = false;
                    detail = format!("missed single-bit error, C={len} pos={pos}");
                }
            }
        }
    }
    verdict(3, "encoder and CRC properties", pass, detail);
}

#[test]
fn criterion_4_cdf_behavior() {
    const MIN_EVENTS: u64 = 2000;
    const MEDIAN_2DB_RANGE: (usize, usize) = (550, 630);
    let code = reference_code();
    let cap = 4_000_000;
    let cross_half = |snr: f64| {
        estimate_first_error_cdf(&code, 4, snr, MIN_EVENTS, cap, 41).unwrap().crossing(0.5).unwrap()
    };
    let c10 = cross_half(1.0);
    let c15 = cross_half(1.5);
    let c20 = cross_half(2.0);
    let quarter = |list: usize| {
        estimate_first_error_cdf(&code, list, 2.0, MIN_EVENTS, cap, 42).unwrap().crossing(0.25).unwrap()
    };
    let q1 = quarter(1);
    let q2 = quarter(2);
    let q4 = quarter(4);
    let pass = (MEDIAN_2DB_RANGE.0..=MEDIAN_2DB_RANGE.1).contains(&c20)
        && c10 < c15
        && c15 < c20
        && q1 <= q2
        && q2 <= q4
        && q1 < q4;
    verdict(
        4,
        "first-error CDF behavior",
        pass,
        format!("median crossings {c10}/{c15}/{c20}, quartile by L {q1}/{q2}/{q4}"),
    );
}

#[test]
fn criterion_5_partition_designer() {
    const PROB_TOL: f64 = 0.02;
    let dir = tempfile::tempdir().unwrap();
    let write = |name: &str, body: &str| {
        let path = dir.path().join(name);
        std::fs::write(&path, body).unwrap();
        path
    };
    // digitized quantile crossings of the reference first-error curves
    let f2 = write(
        "2db.cdf",
        "# N=1024 K=512 C=32 L=4 ebn0_db=2.0 events=100000\n410 0.25\n590 0.50\n708 0.75\n1023 1.0\n",
    );
    let f1 = write(
        "1db.cdf",
        "# N=1024 K=512 C=32 L=4 ebn0_db=1.0 events=100000\n335 0.25\n409 0.50\n589 0.75\n1023 1.0\n",
    );
    let f275 = write(
        "2.75db.cdf",
        "# N=1024 K=512 C=32 L=4 ebn0_db=2.75 events=100000\n410 0.09\n590 0.23\n708 0.44\n1023 1.0\n",
    );
    let cdf2 = load_cdf_file(&f2).unwrap();
    let cdf1 = load_cdf_file(&f1).unwrap();
    let cdf275 = load_cdf_file(&f275).unwrap();
    let mu2 = design_partitions(&cdf2, 4, None).unwrap();
    let mu1 = design_partitions(&cdf1, 4, None).unwrap();
    let probs2 = partition_error_probs(&cdf2, &mu2).unwrap();
    let probs275 = partition_error_probs(&cdf275, &mu2).unwrap();
    let rows_ok = probs2.iter().all(|p| (p - 0.25).abs() <= PROB_TOL)
        && probs275
            .iter()
            .zip([0.09, 0.14, 0.21, 0.56])
            .all(|(got, want)| (got - want).abs() <= PROB_TOL);
    let pass = mu2 == vec![410, 590, 708, 1023] && mu1 == vec![335, 409, 589, 1023] && rows_ok;
    verdict(5, "partition designer", pass, format!("mu2={mu2:?} mu1={mu1:?} probs={probs2:?}/{probs275:?}"));
}

fn reference_config(decoder: DecoderKind, mu: Vec<usize>, crc: Vec<usize>) -> ExperimentConfig {
    let code = reference_code();
    let partitions = PartitionSpec::new(&code, mu, crc).unwrap();
    let mut config = ExperimentConfig::new(code, partitions);
    config.decoder = decoder;
    config.list_size = 4;
    config.list_schedule = vec![1, 2, 4, 8, 16];
    config.flip = FlipConfig { t_max: 15, alpha: 1.2 };
    config.seed = 6;
    config.phi = 64;
    config
}

fn run_at(config: &mut ExperimentConfig, snr: f64, stop: StopRule) -> ResultRow {
    config.snr_points = vec![snr];
    config.stop = stop;
    run_fer_sweep(config).unwrap().remove(0)
}

/// Not worse beyond the joint 95% confidence band.
fn not_worse(a: &ResultRow, b: &ResultRow) -> bool {
    a.fer <= b.fer + a.ci + b.ci
}

#[test]
fn criterion_6_fer_ordering() {
    let stop = StopRule { min_errors: 200, max_frames: 100_000 };
    let snr = 2.0;
    let psclf = run_at(&mut reference_config(DecoderKind::Psclf, vec![590, 1023], vec![16, 16]), snr, stop);
    let sclf = run_at(&mut reference_config(DecoderKind::Sclf, vec![1023], vec![32]), snr, stop);
    let scl = run_at(&mut reference_config(DecoderKind::Scl, vec![1023], vec![32]), snr, stop);
    let ascl = run_at(&mut reference_config(DecoderKind::Ascl, vec![1023], vec![32]), snr, stop);
    // flip decoders must beat plain SCL with clear CI separation
    let separated = psclf.fer + psclf.ci < scl.fer - scl.ci && sclf.fer + sclf.ci < scl.fer - scl.ci;
    let pass = not_worse(&psclf, &sclf) && not_worse(&sclf, &scl) && not_worse(&ascl, &scl) && separated;
    verdict(
        6,
        "FER ordering",
        pass,
        format!(
            "psclf={:.3e}±{:.1e} sclf={:.3e}±{:.1e} scl={:.3e}±{:.1e} ascl={:.3e}±{:.1e}",
            psclf.fer, psclf.ci, sclf.fer, sclf.ci, scl.fer, scl.ci, ascl.fer, ascl.ci
        ),
    );
}

#[test]
fn criterion_7_crc_structure_effect() {
    const MIN_ERRORS: u64 = 150;
    let stop = StopRule { min_errors: MIN_ERRORS, max_frames: 1_500_000 };
    let snr = 2.5;
    let mu = vec![410, 590, 708, 1023];
    let eq = run_at(&mut reference_config(DecoderKind::Psclf, mu.clone(), vec![8, 8, 8, 8]), snr, stop);
    let skew = run_at(&mut reference_config(DecoderKind::Psclf, mu, vec![7, 7, 7, 11]), snr, stop);
    let p1 = *eq.pep.last().unwrap();
    let p2 = *skew.pep.last().unwrap();
    let (n1, n2) = (eq.errors as f64, skew.errors as f64);
    let margin = 1.96 * (p1 * (1.0 - p1) / n1 + p2 * (1.0 - p2) / n2).sqrt();
    let pass = eq.errors >= MIN_ERRORS && skew.errors >= MIN_ERRORS && p1 - p2 > margin;
    verdict(
        7,
        "CRC structure effect",
        pass,
        format!("P(E_P): equal={p1:.3} ({} errs) vs skewed={p2:.3} ({} errs), margin={margin:.3}", eq.errors, skew.errors),
    );
}

/// Linear interpolation of modeled cycles at a target FER over a sweep,
/// in log10(FER).
fn cycles_at_fer(rows: &[ResultRow], target: f64) -> Option<f64> {
    for pair in rows.windows(2) {
        let (hi, lo) = (&pair[0], &pair[1]);
        if hi.fer >= target && lo.fer <= target && lo.fer > 0.0 {
            let t = (target.log10() - hi.fer.log10()) / (lo.fer.log10() - hi.fer.log10());
            return Some(hi.cycles + t * (lo.cycles - hi.cycles));
        }
    }
    None
}

#[test]
fn criterion_8_execution_time_reduction() {
    const L_SCL: f64 = 2624.0;
    // expected reduction windows (percentage points) vs SCLF
    const P4_AT_1E1: (f64, f64) = (35.0, 55.0);
    const P2_AT_1E1: (f64, f64) = (19.0, 39.0);
    const P4_AT_1E2: (f64, f64) = (6.0, 22.0);
    const P2_AT_1E2: (f64, f64) = (0.0, 10.0);
    let stop = StopRule { min_errors: 200, max_frames: 150_000 };
    let sweep = |decoder, mu: Vec<usize>, crc: Vec<usize>| -> Vec<ResultRow> {
        let mut config = reference_config(decoder, mu, crc);
        config.snr_points = psclf::sim::parse_snr_sweep("1.0:0.25:2.5").unwrap();
        config.stop = stop;
        run_fer_sweep(&config).unwrap()
    };
    let sclf = sweep(DecoderKind::Sclf, vec![1023], vec![32]);
    let p2 = sweep(DecoderKind::Psclf, vec![590, 1023], vec![16, 16]);
    let p4 = sweep(DecoderKind::Psclf, vec![410, 590, 708, 1023], vec![7, 7, 7, 11]);
    let reduction = |part: &[ResultRow], fer: f64| -> Option<f64> {
        Some(100.0 * (1.0 - cycles_at_fer(part, fer)? / cycles_at_fer(&sclf, fer)?))
    };
    let r4_1 = reduction(&p4, 1e-1);
    let r2_1 = reduction(&p2, 1e-1);
    let r4_2 = reduction(&p4, 1e-2);
    let r2_2 = reduction(&p2, 1e-2);
    let within = |r: Option<f64>, (lo, hi): (f64, f64)| r.map_or(false, |r| r >= lo && r <= hi);
    // deep-SNR asymptote: partitioned cycles fall back to a single SCL pass
    let asymptote = p4
        .iter()
        .filter(|row| row.fer > 0.0 && row.fer < 4e-3)
        .map(|row| (row.cycles - L_SCL).abs() / L_SCL)
        .fold(None, |_, d| Some(d));
    let pass = within(r4_1, P4_AT_1E1)
        && within(r2_1, P2_AT_1E1)
        && within(r4_2, P4_AT_1E2)
        && within(r2_2, P2_AT_1E2)
        && asymptote.map_or(false, |d| d <= 0.05);
    verdict(
        8,
        "execution-time reduction",
        pass,
        format!("reductions P4@1e-1={r4_1:?} P2@1e-1={r2_1:?} P4@1e-2={r4_2:?} P2@1e-2={r2_2:?} asymptote={asymptote:?}"),
    );
}

#[test]
fn criterion_9_flip_metric_sanity() {
    const WANT_FRAMES: usize = 100;
    const MIN_RATIO: f64 = 3.0;
    let code = reference_code();
    let single = PartitionSpec::single(&code);
    let mut captured = 0usize;
    let mut min_fm_hits = 0usize;
    let mut random_rate_sum = 0.0f64;
    let mut idx = 0u64;
    while captured < WANT_FRAMES {
        let (u, frame) = noisy_frame(&code, &single, 2.0, 91, idx);
        idx += 1;
        let mut decoder = SclDecoder::new(&code, 4, &frame, 1).unwrap();
        let records = decoder.decode_all(&single).unwrap();
        if decoder.any_pass(0) {
            continue;
        }
        captured += 1;
        // exhaustive one-flip oracle over every sorting index
        let corrected: Vec<bool> = records
            .par_iter()
            .map(|record| {
                let mut retry = SclDecoder::new(&code, 4, &frame, 1).unwrap();
                retry
                    .decode_segment(&single, 0, Some(FlipDirective { index: record.index }))
                    .unwrap();
                retry.select_output().map_or(false, |path| path.decisions() == u.as_slice())
            })
            .collect();
        let best = build_flip_set(&records, 1.2, 2).indices()[0];
        let best_pos = records.iter().position(|r| r.index == best).unwrap();
        min_fm_hits += corrected[best_pos] as usize;
        random_rate_sum += corrected.iter().filter(|&&c| c).count() as f64 / corrected.len() as f64;
    }
    let min_fm_rate = min_fm_hits as f64 / captured as f64;
    let random_rate = random_rate_sum / captured as f64;
    let pass = min_fm_rate >= MIN_RATIO * random_rate && captured >= WANT_FRAMES;
    verdict(
        9,
        "flip-metric sanity",
        pass,
        format!("min-FM corrects {min_fm_rate:.3}, random index corrects {random_rate:.4} over {captured} frames"),
    );
}
