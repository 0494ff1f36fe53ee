//! Seeded Monte Carlo harness: SNR sweeps, deterministic frame-parallel
//! simulation, statistics aggregation, and CSV/manifest emission.
//!
//! Every frame's randomness is a pure function of (seed, SNR index, frame
//! index), and per-batch statistics are folded in frame order, so results
//! are bit-identical for any worker count.

use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use rayon::prelude::*;

use crate::channel::{frame_rng, modulate, transmit, transmit_noiseless, LlrFrame};
use crate::crc::allocate_crc_structure;
use crate::design::{
    design_partitions, estimate_first_error_cdf, partition_error_probs, EmpiricalCdf,
};
use crate::error::{Error, Result};
use crate::flip::{ascl_decode, psclf_decode, scf_decode, sclf_decode, FlipConfig};
use crate::latency::{
    ascl_attempt_cycles, avg_exec_time_psclf, avg_exec_time_scf, avg_exec_time_sclf, sc_latency,
    scl_latency, ExecTimeStats, LatencyParams,
};
use crate::polar::{build_message_word, PartitionSpec, PolarCode};
use crate::scl::sc_decode;
use rand::Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecoderKind {
    Sc,
    Scl,
    Ascl,
    Scf,
    Sclf,
    Psclf,
}

impl DecoderKind {
    pub fn parse(name: &str) -> Result<Self> {
        match name.to_ascii_lowercase().as_str() {
            "sc" => Ok(Self::Sc),
            "scl" => Ok(Self::Scl),
            "ascl" => Ok(Self::Ascl),
            "scf" => Ok(Self::Scf),
            "sclf" => Ok(Self::Sclf),
            "psclf" => Ok(Self::Psclf),
            other => Err(Error::invalid("decoder", format!("unknown decoder {other:?}"))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Sc => "sc",
            Self::Scl => "scl",
            Self::Ascl => "ascl",
            Self::Scf => "scf",
            Self::Sclf => "sclf",
            Self::Psclf => "psclf",
        }
    }
}

/// Simulation ends at an SNR point once either bound is hit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StopRule {
    pub min_errors: u64,
    pub max_frames: u64,
}

impl Default for StopRule {
    fn default() -> Self {
        Self { min_errors: 200, max_frames: 1_000_000 }
    }
}

/// Fully resolved experiment description.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub code: PolarCode,
    pub partitions: PartitionSpec,
    pub decoder: DecoderKind,
    pub list_size: usize,
    /// ASCL only; strictly ascending.
    pub list_schedule: Vec<usize>,
    pub flip: FlipConfig,
    pub snr_points: Vec<f64>,
    pub noiseless: bool,
    pub stop: StopRule,
    pub seed: u64,
    pub workers: Option<usize>,
    pub phi: usize,
}

impl ExperimentConfig {
    pub fn new(code: PolarCode, partitions: PartitionSpec) -> Self {
        Self {
            code,
            partitions,
            decoder: DecoderKind::Psclf,
            list_size: 4,
            list_schedule: vec![1, 2, 4, 8, 16],
            flip: FlipConfig::default(),
            snr_points: vec![2.0],
            noiseless: false,
            stop: StopRule::default(),
            seed: 0,
            workers: None,
            phi: 64,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.snr_points.is_empty() {
            return Err(Error::invalid("snr", "sweep is empty"));
        }
        if self.stop.max_frames == 0 || self.stop.min_errors == 0 {
            return Err(Error::invalid("stop_rule", "bounds must be positive"));
        }
        if self.decoder == DecoderKind::Ascl {
            if self.list_schedule.is_empty() || self.list_schedule.windows(2).any(|w| w[1] <= w[0]) {
                return Err(Error::invalid("L_schedule", "must be nonempty and strictly ascending"));
            }
        } else if !self.list_size.is_power_of_two() {
            return Err(Error::invalid("L", "must be a power of two"));
        }
        self.latency_params()?;
        Ok(())
    }

    pub fn latency_params(&self) -> Result<LatencyParams> {
        LatencyParams::new(self.code.block_len(), self.phi, self.code.info_len())
    }
}

/// Aggregated statistics at one SNR point.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub ebn0_db: f64,
    pub frames: u64,
    pub errors: u64,
    pub fer: f64,
    /// 95% binomial confidence half-width on the FER.
    pub ci: f64,
    /// Average decoding trials per frame, all partitions combined.
    pub tbar: f64,
    /// P(T_p): fraction of frames reaching each partition.
    pub ptp: Vec<f64>,
    /// Collision share: fraction of erroneous frames whose partition-p CRC
    /// passed only on wrong paths.
    pub pep: Vec<f64>,
    /// Modeled average execution cycles per frame.
    pub cycles: f64,
}

struct FrameStat {
    error: bool,
    trials: Vec<usize>,
    collisions: Vec<bool>,
    attempts: usize,
}

fn simulate_frame(config: &ExperimentConfig, ebn0_db: f64, frame_index: u64) -> Result<FrameStat> {
    let code = &config.code;
    let mut rng = frame_rng(config.seed, frame_index);
    let m: Vec<u8> = (0..code.payload_len()).map(|_| rng.gen_range(0..2)).collect();
    let word = build_message_word(&m, code, &config.partitions)?;
    let u = code.insert_message(&word.with_crc)?;
    let symbols = modulate(&code.encode(&u)?);
    let frame: LlrFrame = if config.noiseless {
        transmit_noiseless(&symbols)
    } else {
        transmit(&symbols, ebn0_db, code.rate(), &mut rng)?
    };
    let stat = match config.decoder {
        DecoderKind::Sc => {
            let decoded = sc_decode(&frame, code)?;
            FrameStat { error: decoded != u, trials: vec![1], collisions: vec![false], attempts: 1 }
        }
        DecoderKind::Scl => {
            let out = sclf_decode(&frame, code, config.list_size, FlipConfig { t_max: 1, alpha: 1.0 }, Some(&u))?;
            FrameStat { error: out.frame_error, trials: out.trials_per_partition, collisions: out.collisions, attempts: 1 }
        }
        DecoderKind::Ascl => {
            let out = ascl_decode(&frame, code, &config.list_schedule, Some(&u))?;
            FrameStat { error: out.frame_error, trials: out.trials_per_partition, collisions: out.collisions, attempts: out.attempts }
        }
        DecoderKind::Scf => {
            let out = scf_decode(&frame, code, config.flip.t_max, Some(&u))?;
            FrameStat { error: out.frame_error, trials: out.trials_per_partition, collisions: out.collisions, attempts: out.attempts }
        }
        DecoderKind::Sclf => {
            let out = sclf_decode(&frame, code, config.list_size, config.flip, Some(&u))?;
            FrameStat { error: out.frame_error, trials: out.trials_per_partition, collisions: out.collisions, attempts: out.attempts }
        }
        DecoderKind::Psclf => {
            let out = psclf_decode(&frame, code, &config.partitions, config.list_size, config.flip, Some(&u))?;
            FrameStat { error: out.frame_error, trials: out.trials_per_partition, collisions: out.collisions, attempts: out.attempts }
        }
    };
    Ok(stat)
}

const SIM_BATCH: u64 = 256;

#[derive(Clone)]
struct PointAccumulator {
    frames: u64,
    errors: u64,
    trials_total: u64,
    reached: Vec<u64>,
    trials_per_partition: Vec<u64>,
    collisions: Vec<u64>,
    attempts_ge: Vec<u64>,
}

impl PointAccumulator {
    fn new(partition_count: usize, schedule_len: usize) -> Self {
        Self {
            frames: 0,
            errors: 0,
            trials_total: 0,
            reached: vec![0; partition_count],
            trials_per_partition: vec![0; partition_count],
            collisions: vec![0; partition_count],
            attempts_ge: vec![0; schedule_len.max(1)],
        }
    }

    fn absorb(&mut self, stat: &FrameStat) {
        self.frames += 1;
        self.errors += stat.error as u64;
        for (p, &t) in stat.trials.iter().enumerate() {
            self.trials_total += t as u64;
            if p < self.reached.len() {
                self.reached[p] += 1;
                self.trials_per_partition[p] += t as u64;
            }
        }
        if stat.error {
            for (p, &c) in stat.collisions.iter().enumerate() {
                if c && p < self.collisions.len() {
                    self.collisions[p] += 1;
                }
            }
        }
        for j in 0..stat.attempts.min(self.attempts_ge.len()) {
            self.attempts_ge[j] += 1;
        }
    }
}

fn model_cycles(config: &ExperimentConfig, acc: &PointAccumulator) -> Result<f64> {
    let params = config.latency_params()?;
    let frames = acc.frames as f64;
    let tbar = acc.trials_total as f64 / frames;
    Ok(match config.decoder {
        DecoderKind::Sc => sc_latency(&params) as f64,
        DecoderKind::Scl => scl_latency(&params) as f64,
        DecoderKind::Scf => avg_exec_time_scf(tbar, &params),
        DecoderKind::Sclf => avg_exec_time_sclf(tbar, &params),
        DecoderKind::Psclf => {
            let reach_prob: Vec<f64> = acc.reached.iter().map(|&r| r as f64 / frames).collect();
            let avg_trials: Vec<f64> = acc
                .reached
                .iter()
                .zip(&acc.trials_per_partition)
                .map(|(&r, &t)| if r == 0 { 1.0 } else { t as f64 / r as f64 })
                .collect();
            let stats = ExecTimeStats::new(reach_prob, avg_trials)?;
            avg_exec_time_psclf(&stats, &config.partitions, &params)?
        }
        DecoderKind::Ascl => config
            .list_schedule
            .iter()
            .zip(&acc.attempts_ge)
            .map(|(&l, &n)| (n as f64 / frames) * ascl_attempt_cycles(l, &params) as f64)
            .sum(),
    })
}

fn run_point(config: &ExperimentConfig, snr_idx: usize, ebn0_db: f64) -> Result<ResultRow> {
    let partition_count = config.partitions.partition_count();
    let mut acc = PointAccumulator::new(partition_count, config.list_schedule.len());
    let base = (snr_idx as u64) << 40;
    while acc.errors < config.stop.min_errors && acc.frames < config.stop.max_frames {
        let batch_len = SIM_BATCH.min(config.stop.max_frames - acc.frames);
        let start = base + acc.frames;
        let stats: Vec<Result<FrameStat>> = (start..start + batch_len)
            .into_par_iter()
            .map(|idx| simulate_frame(config, ebn0_db, idx))
            .collect();
        for stat in stats {
            acc.absorb(&stat?);
        }
    }
    let frames = acc.frames as f64;
    let fer = acc.errors as f64 / frames;
    let erroneous = acc.errors.max(1) as f64;
    Ok(ResultRow {
        ebn0_db,
        frames: acc.frames,
        errors: acc.errors,
        fer,
        ci: 1.96 * (fer * (1.0 - fer) / frames).sqrt(),
        tbar: acc.trials_total as f64 / frames,
        ptp: acc.reached.iter().map(|&r| r as f64 / frames).collect(),
        pep: acc.collisions.iter().map(|&c| c as f64 / erroneous).collect(),
        cycles: model_cycles(config, &acc)?,
    })
}

fn in_pool<T: Send>(workers: Option<usize>, job: impl FnOnce() -> T + Send) -> Result<T> {
    match workers {
        None => Ok(job()),
        Some(w) => {
            if w == 0 {
                return Err(Error::invalid("workers", "must be >= 1"));
            }
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(w)
                .build()
                .map_err(|e| Error::invalid("workers", e.to_string()))?;
            Ok(pool.install(job))
        }
    }
}

/// Simulate every SNR point of the sweep under the configured stop rule.
pub fn run_fer_sweep(config: &ExperimentConfig) -> Result<Vec<ResultRow>> {
    config.validate()?;
    in_pool(config.workers, || {
        config
            .snr_points
            .iter()
            .enumerate()
            .map(|(i, &snr)| run_point(config, i, snr))
            .collect()
    })?
}

/// FER sweep projected onto (ebn0_db, fer, avg_cycles) for latency plots.
pub fn run_exec_time_sweep(config: &ExperimentConfig) -> Result<Vec<(f64, f64, f64)>> {
    Ok(run_fer_sweep(config)?.into_iter().map(|r| (r.ebn0_db, r.fer, r.cycles)).collect())
}

/// Parse "start:step:stop" (or a single value) into sweep points, inclusive
/// of the endpoint up to rounding.
pub fn parse_snr_sweep(text: &str) -> Result<Vec<f64>> {
    let bad = |reason: &str| Error::invalid("snr", format!("{text:?}: {reason}"));
    let parts: Vec<&str> = text.split(':').collect();
    let parse = |s: &str| s.trim().parse::<f64>().map_err(|_| bad("not a number"));
    match parts.as_slice() {
        [single] => Ok(vec![parse(single)?]),
        [start, step, stop] => {
            let (start, step, stop) = (parse(start)?, parse(step)?, parse(stop)?);
            if step <= 0.0 {
                return Err(bad("step must be positive"));
            }
            if stop < start {
                return Err(bad("stop precedes start"));
            }
            let count = ((stop - start) / step + 0.5).floor() as usize + 1;
            Ok((0..count).map(|i| start + step * i as f64).collect())
        }
        _ => Err(bad("expected VALUE or START:STEP:STOP")),
    }
}

/// Partition/CRC design workflow parameters.
#[derive(Debug, Clone)]
pub struct DesignConfig {
    pub code: PolarCode,
    pub list_size: usize,
    pub ebn0_db: f64,
    pub partition_count: usize,
    pub crc_total: usize,
    pub crc_floor: usize,
    pub min_events: u64,
    pub max_frames: u64,
    pub seed: u64,
    pub workers: Option<usize>,
}

/// Design workflow outputs.
#[derive(Debug, Clone)]
pub struct DesignArtifacts {
    pub cdf: EmpiricalCdf,
    pub mu: Vec<usize>,
    pub crc_lengths: Vec<usize>,
    pub error_probs: Vec<f64>,
}

/// Estimate the first-error CDF, place partition boundaries, and allocate
/// the CRC budget by partition error probability.
pub fn run_design_pipeline(config: &DesignConfig) -> Result<DesignArtifacts> {
    let cdf = in_pool(config.workers, || {
        estimate_first_error_cdf(
            &config.code,
            config.list_size,
            config.ebn0_db,
            config.min_events,
            config.max_frames,
            config.seed,
        )
    })??;
    design_from_cdf(&cdf, config)
}

/// The design pipeline's deterministic tail: reusable with a CDF loaded
/// from file.
pub fn design_from_cdf(cdf: &EmpiricalCdf, config: &DesignConfig) -> Result<DesignArtifacts> {
    let mu = design_partitions(cdf, config.partition_count, Some(config.code.info_set()))?;
    let error_probs = partition_error_probs(cdf, &mu)?;
    let crc_lengths =
        allocate_crc_structure(config.crc_total, config.partition_count, &error_probs, config.crc_floor)?;
    Ok(DesignArtifacts { cdf: cdf.clone(), mu, crc_lengths, error_probs })
}

/// CSV with the fixed header
/// ebn0_db,frames,errors,fer,ci,tbar,ptp_1..P,pep_1..P,cycles.
pub fn result_csv(rows: &[ResultRow], partition_count: usize) -> String {
    let mut out = String::from("ebn0_db,frames,errors,fer,ci,tbar");
    for p in 1..=partition_count {
        write!(out, ",ptp_{p}").unwrap();
    }
    for p in 1..=partition_count {
        write!(out, ",pep_{p}").unwrap();
    }
    out.push_str(",cycles\n");
    for r in rows {
        write!(out, "{},{},{},{:.6e},{:.6e},{:.4}", r.ebn0_db, r.frames, r.errors, r.fer, r.ci, r.tbar).unwrap();
        for p in 0..partition_count {
            write!(out, ",{:.6}", r.ptp.get(p).copied().unwrap_or(0.0)).unwrap();
        }
        for p in 0..partition_count {
            write!(out, ",{:.6}", r.pep.get(p).copied().unwrap_or(0.0)).unwrap();
        }
        writeln!(out, ",{:.1}", r.cycles).unwrap();
    }
    out
}

pub fn write_results(path: &Path, rows: &[ResultRow], config: &ExperimentConfig) -> Result<()> {
    let mut file = std::fs::File::create(path)?;
    file.write_all(result_csv(rows, config.partitions.partition_count()).as_bytes())?;
    let manifest_path = path.with_extension("manifest.txt");
    let mut file = std::fs::File::create(manifest_path)?;
    file.write_all(manifest_text(config).as_bytes())?;
    Ok(())
}

/// Structured text capturing the full resolved configuration.
pub fn manifest_text(config: &ExperimentConfig) -> String {
    let mut out = String::new();
    let code = &config.code;
    writeln!(out, "decoder = {}", config.decoder.name()).unwrap();
    writeln!(out, "n = {}", code.block_len()).unwrap();
    writeln!(out, "k = {}", code.payload_len()).unwrap();
    writeln!(out, "c = {}", code.crc_len()).unwrap();
    let mu: Vec<String> = config.partitions.mu().iter().map(|m| m.to_string()).collect();
    writeln!(out, "mu = {}", mu.join(",")).unwrap();
    let crc: Vec<String> = config.partitions.crc_lengths().iter().map(|c| c.to_string()).collect();
    writeln!(out, "crc = {}", crc.join(",")).unwrap();
    match config.decoder {
        DecoderKind::Ascl => {
            let sched: Vec<String> = config.list_schedule.iter().map(|l| l.to_string()).collect();
            writeln!(out, "list_schedule = {}", sched.join(",")).unwrap();
        }
        _ => writeln!(out, "list = {}", config.list_size).unwrap(),
    }
    writeln!(out, "tmax = {}", config.flip.t_max).unwrap();
    writeln!(out, "alpha = {}", config.flip.alpha).unwrap();
    let snr: Vec<String> = config.snr_points.iter().map(|s| s.to_string()).collect();
    writeln!(out, "snr_points = {}", snr.join(",")).unwrap();
    writeln!(out, "noiseless = {}", config.noiseless).unwrap();
    writeln!(out, "min_errors = {}", config.stop.min_errors).unwrap();
    writeln!(out, "max_frames = {}", config.stop.max_frames).unwrap();
    writeln!(out, "seed = {}", config.seed).unwrap();
    writeln!(out, "workers = {}", config.workers.map_or("auto".into(), |w| w.to_string())).unwrap();
    writeln!(out, "phi = {}", config.phi).unwrap();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_config(decoder: DecoderKind) -> ExperimentConfig {
        let code = PolarCode::construct(128, 48, 16, 2.0).unwrap();
        let partitions = match decoder {
            DecoderKind::Psclf => PartitionSpec::new(&code, vec![63, 127], vec![8, 8]).unwrap(),
            _ => PartitionSpec::single(&code),
        };
        let mut config = ExperimentConfig::new(code, partitions);
        config.decoder = decoder;
        config.flip = FlipConfig { t_max: 4, alpha: 1.2 };
        config.list_schedule = vec![1, 2, 4];
        config.stop = StopRule { min_errors: 20, max_frames: 2000 };
        config.snr_points = vec![1.5];
        config.seed = 11;
        config.phi = 8;
        config
    }

    #[test]
    fn noiseless_sweep_has_zero_fer() {
        for decoder in [
            DecoderKind::Sc,
            DecoderKind::Scl,
            DecoderKind::Ascl,
            DecoderKind::Scf,
            DecoderKind::Sclf,
            DecoderKind::Psclf,
        ] {
            let mut config = small_config(decoder);
            config.noiseless = true;
            config.stop = StopRule { min_errors: 1, max_frames: 200 };
            let rows = run_fer_sweep(&config).unwrap();
            assert_eq!(rows[0].errors, 0, "{decoder:?}");
            assert_eq!(rows[0].frames, 200);
            assert_eq!(rows[0].fer, 0.0);
            // one trial per partition when nothing fails
            let partitions = config.partitions.partition_count() as f64;
            assert!((rows[0].tbar - partitions).abs() < 1e-12);
        }
    }

    #[test]
    fn results_identical_across_worker_counts() {
        let mut config = small_config(DecoderKind::Psclf);
        config.workers = Some(1);
        let a = run_fer_sweep(&config).unwrap();
        config.workers = Some(4);
        let b = run_fer_sweep(&config).unwrap();
        config.workers = None;
        let c = run_fer_sweep(&config).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, c);
    }

    #[test]
    fn stop_rule_bounds_hold() {
        let mut config = small_config(DecoderKind::Scl);
        config.snr_points = vec![0.0];
        config.stop = StopRule { min_errors: 30, max_frames: 100_000 };
        let rows = run_fer_sweep(&config).unwrap();
        assert!(rows[0].errors >= 30);
        // batch granularity: overshoot bounded by one batch
        assert!(rows[0].frames <= 100_000);
        config.stop = StopRule { min_errors: 1_000_000, max_frames: 300 };
        let rows = run_fer_sweep(&config).unwrap();
        assert_eq!(rows[0].frames, 300);
    }

    #[test]
    fn statistics_are_internally_consistent() {
        let config = small_config(DecoderKind::Psclf);
        let row = &run_fer_sweep(&config).unwrap()[0];
        assert!((row.fer - row.errors as f64 / row.frames as f64).abs() < 1e-12);
        assert!((row.ptp[0] - 1.0).abs() < 1e-12);
        assert!(row.ptp[1] <= row.ptp[0]);
        assert!(row.tbar >= 1.0 && row.tbar <= (config.flip.t_max * 2) as f64);
        assert!(row.cycles > 0.0);
        for &pep in &row.pep {
            assert!((0.0..=1.0).contains(&pep));
        }
    }

    #[test]
    fn scl_cycles_are_constant_and_psclf_approaches_them() {
        let scl = small_config(DecoderKind::Scl);
        let params = scl.latency_params().unwrap();
        let row = &run_fer_sweep(&scl).unwrap()[0];
        assert_eq!(row.cycles, scl_latency(&params) as f64);
        let mut psclf = small_config(DecoderKind::Psclf);
        psclf.noiseless = true;
        psclf.stop = StopRule { min_errors: 1, max_frames: 200 };
        let row = &run_fer_sweep(&psclf).unwrap()[0];
        assert!((row.cycles - scl_latency(&params) as f64).abs() < 1e-9);
    }

    #[test]
    fn snr_sweep_parsing() {
        assert_eq!(parse_snr_sweep("2.0").unwrap(), vec![2.0]);
        let pts = parse_snr_sweep("1.0:0.25:2.75").unwrap();
        assert_eq!(pts.len(), 8);
        assert!((pts[0] - 1.0).abs() < 1e-12);
        assert!((pts[7] - 2.75).abs() < 1e-12);
        assert!(parse_snr_sweep("1.0:0.0:2.0").is_err());
        assert!(parse_snr_sweep("2.0:0.5:1.0").is_err());
        assert!(parse_snr_sweep("a:b").is_err());
    }

    #[test]
    fn csv_and_manifest_shapes() {
        let config = small_config(DecoderKind::Psclf);
        let rows = run_fer_sweep(&config).unwrap();
        let csv = result_csv(&rows, 2);
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), "ebn0_db,frames,errors,fer,ci,tbar,ptp_1,ptp_2,pep_1,pep_2,cycles");
        assert_eq!(lines.next().unwrap().split(',').count(), 11);
        let manifest = manifest_text(&config);
        assert!(manifest.contains("decoder = psclf"));
        assert!(manifest.contains("seed = 11"));
        assert!(manifest.contains("mu = 63,127"));
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("out.csv");
        write_results(&path, &rows, &config).unwrap();
        assert!(path.exists());
        assert!(dir.path().join("out.manifest.txt").exists());
    }

    #[test]
    fn design_pipeline_small_code() {
        let code = PolarCode::construct(128, 48, 16, 2.0).unwrap();
        let config = DesignConfig {
            code,
            list_size: 2,
            ebn0_db: 1.0,
            partition_count: 2,
            crc_total: 16,
            crc_floor: 7,
            min_events: 200,
            max_frames: 1 << 20,
            seed: 5,
            workers: Some(2),
        };
        let artifacts = run_design_pipeline(&config).unwrap();
        assert_eq!(artifacts.mu.len(), 2);
        assert_eq!(artifacts.mu[1], 127);
        assert_eq!(artifacts.crc_lengths.iter().sum::<usize>(), 16);
        assert!((artifacts.error_probs.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        let again = run_design_pipeline(&config).unwrap();
        assert_eq!(artifacts.mu, again.mu);
    }

    #[test]
    fn config_validation_failures() {
        let mut config = small_config(DecoderKind::Scl);
        config.snr_points.clear();
        assert!(config.validate().is_err());
        let mut config = small_config(DecoderKind::Scl);
        config.list_size = 3;
        assert!(config.validate().is_err());
        let mut config = small_config(DecoderKind::Ascl);
        config.list_schedule = vec![4, 2];
        assert!(config.validate().is_err());
        let mut config = small_config(DecoderKind::Scl);
        config.phi = 3;
        assert!(config.validate().is_err());
    }
}
