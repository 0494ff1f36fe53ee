//! Trial-level decoding strategies on top of the SCL kernel: SCF, SCLF,
//! PSCLF, and adaptive SCL.
//!
//! A failed trial yields a flip set ordered by the flip metric
//! `FM = -PM[0] + alpha * PM[L]`; each retrial inverts the path selection
//! at exactly one candidate index. PSCLF applies the same scheme per
//! partition, restarting retries from the partition-boundary snapshot and
//! terminating early when a partition exhausts its budget.

use crate::channel::LlrFrame;
use crate::error::{Error, Result};
use crate::polar::{PartitionSpec, PolarCode};
use crate::scl::{FlipDirective, SclDecoder, SortRecord};

/// Trial budget and flip-metric normalization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlipConfig {
    /// Maximum SCL trials per partition, initial trial included.
    pub t_max: usize,
    /// Flip-metric normalization, >= 1.
    pub alpha: f64,
}

impl FlipConfig {
    pub fn new(t_max: usize, alpha: f64) -> Result<Self> {
        if t_max < 1 {
            return Err(Error::invalid("T_max", "must be >= 1"));
        }
        if !(alpha >= 1.0) {
            return Err(Error::invalid("alpha", format!("{alpha} < 1")));
        }
        Ok(Self { t_max, alpha })
    }
}

impl Default for FlipConfig {
    fn default() -> Self {
        Self { t_max: 15, alpha: 1.2 }
    }
}

/// Ordered flip candidates, ascending by flip metric.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlipSet(Vec<usize>);

impl FlipSet {
    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecodeStatus {
    Success,
    Failure,
}

/// Result of one decoded frame.
#[derive(Debug, Clone)]
pub struct DecodeOutcome {
    pub status: DecodeStatus,
    /// Selected input-vector estimate, on success.
    pub decoded: Option<Vec<u8>>,
    /// SCL trials spent in each reached partition (1 = no flips).
    pub trials_per_partition: Vec<usize>,
    /// Partition index of an early termination, None if decoding reached
    /// the end of the frame.
    pub terminated_at: Option<usize>,
    /// Genie diagnostic: per reached partition, whether the accepting trial
    /// only had CRC-passing paths that differ from the true input segment.
    pub collisions: Vec<bool>,
    /// Failure, or (when the genie is available) success with a wrong word.
    pub frame_error: bool,
    /// Decoding attempts performed (ASCL: one per tried list size).
    pub attempts: usize,
}

/// FM = -PM[0] + alpha * PM[L].
pub fn compute_flip_metric(record: &SortRecord, alpha: f64) -> f64 {
    -record.pm_best + alpha * record.pm_lth
}

/// Sort the failed trial's records ascending by flip metric and keep the
/// first `t_max - 1` indices; ties break toward the lower bit index.
pub fn build_flip_set(records: &[SortRecord], alpha: f64, t_max: usize) -> FlipSet {
    let mut scored: Vec<(f64, usize)> = records
        .iter()
        .map(|r| (compute_flip_metric(r, alpha), r.index))
        .collect();
    scored.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.cmp(&b.1)));
    let keep = t_max.saturating_sub(1).min(scored.len());
    FlipSet(scored[..keep].iter().map(|&(_, i)| i).collect())
}

fn finish_outcome(
    decoder: &SclDecoder,
    genie: Option<&[u8]>,
    trials: Vec<usize>,
    collisions: Vec<bool>,
    attempts: usize,
) -> DecodeOutcome {
    match decoder.select_output() {
        Some(path) => {
            let decoded = path.decisions().to_vec();
            let frame_error = genie.map(|u| decoded != u).unwrap_or(false);
            DecodeOutcome {
                status: DecodeStatus::Success,
                decoded: Some(decoded),
                trials_per_partition: trials,
                terminated_at: None,
                collisions,
                frame_error,
                attempts,
            }
        }
        None => DecodeOutcome {
            status: DecodeStatus::Failure,
            decoded: None,
            trials_per_partition: trials,
            terminated_at: None,
            collisions,
            frame_error: true,
            attempts,
        },
    }
}

/// Genie collision check for partition p at the accepting trial: some path
/// passed the partition CRC, but no passing path carries the true segment.
fn partition_collision(decoder: &SclDecoder, code: &PolarCode, partitions: &PartitionSpec, p: usize, true_u: &[u8]) -> bool {
    let (lo, hi) = partitions.message_range(p);
    let positions = &code.info_set()[lo..hi];
    let mut any_pass = false;
    for path in decoder.paths() {
        if path.crc_flags()[p] {
            any_pass = true;
            if positions.iter().all(|&i| path.decisions()[i] == true_u[i]) {
                return false;
            }
        }
    }
    any_pass
}

/// SCLF: plain SCL first, then up to `t_max - 1` single-flip retrials from
/// scratch, each inverting the path selection at one flip-set index.
pub fn sclf_decode(
    frame: &LlrFrame,
    code: &PolarCode,
    list_size: usize,
    config: FlipConfig,
    genie: Option<&[u8]>,
) -> Result<DecodeOutcome> {
    let partitions = PartitionSpec::single(code);
    let mut decoder = SclDecoder::new(code, list_size, frame, 1)?;
    let records = decoder.decode_segment(&partitions, 0, None)?;
    let mut trials = 1usize;
    if !decoder.any_pass(0) {
        let flips = build_flip_set(&records, config.alpha, config.t_max);
        for &index in flips.indices() {
            if trials >= config.t_max {
                break;
            }
            decoder = SclDecoder::new(code, list_size, frame, 1)?;
            decoder.decode_segment(&partitions, 0, Some(FlipDirective { index }))?;
            trials += 1;
            if decoder.any_pass(0) {
                break;
            }
        }
    }
    let collisions = match genie {
        Some(u) => vec![partition_collision(&decoder, code, &partitions, 0, u)],
        None => vec![false],
    };
    let mut outcome = finish_outcome(&decoder, genie, vec![trials], collisions, trials);
    if outcome.status == DecodeStatus::Failure {
        outcome.terminated_at = Some(0);
    }
    Ok(outcome)
}

/// PSCLF: per partition, decode from the boundary snapshot, retry with
/// single flips on CRC failure, and terminate early when a partition
/// exhausts its trial budget. Check-and-keep forwards all L paths.
pub fn psclf_decode(
    frame: &LlrFrame,
    code: &PolarCode,
    partitions: &PartitionSpec,
    list_size: usize,
    config: FlipConfig,
    genie: Option<&[u8]>,
) -> Result<DecodeOutcome> {
    let partition_count = partitions.partition_count();
    let mut decoder = SclDecoder::new(code, list_size, frame, partition_count)?;
    let mut trials = Vec::with_capacity(partition_count);
    let mut collisions = Vec::with_capacity(partition_count);
    let mut attempts = 0usize;
    for p in 0..partition_count {
        let snapshot = decoder.snapshot();
        let records = decoder.decode_segment(partitions, p, None)?;
        let mut t = 1usize;
        attempts += 1;
        if !decoder.any_pass(p) {
            let flips = build_flip_set(&records, config.alpha, config.t_max);
            let mut recovered = false;
            for &index in flips.indices() {
                if t >= config.t_max {
                    break;
                }
                decoder.restore(&snapshot);
                decoder.decode_segment(partitions, p, Some(FlipDirective { index }))?;
                t += 1;
                attempts += 1;
                if decoder.any_pass(p) {
                    recovered = true;
                    break;
                }
            }
            if !recovered {
                trials.push(t);
                return Ok(DecodeOutcome {
                    status: DecodeStatus::Failure,
                    decoded: None,
                    trials_per_partition: trials,
                    terminated_at: Some(p),
                    collisions,
                    frame_error: true,
                    attempts,
                });
            }
        }
        trials.push(t);
        if let Some(u) = genie {
            collisions.push(partition_collision(&decoder, code, partitions, p, u));
        } else {
            collisions.push(false);
        }
    }
    Ok(finish_outcome(&decoder, genie, trials, collisions, attempts))
}

/// SCF: SC trials with single decision flips, candidates ordered by leaf
/// LLR reliability. With L = 1 the inverted sort selection is exactly the
/// reversed hard decision, and PM[1] - PM[0] equals |leaf LLR|, so the
/// flip set is the alpha = 1 flip metric ordering.
pub fn scf_decode(
    frame: &LlrFrame,
    code: &PolarCode,
    t_max: usize,
    genie: Option<&[u8]>,
) -> Result<DecodeOutcome> {
    if t_max < 1 {
        return Err(Error::invalid("T_max", "must be >= 1"));
    }
    sclf_decode(frame, code, 1, FlipConfig { t_max, alpha: 1.0 }, genie)
}

/// Adaptive SCL: CRC-aided SCL with successively larger list sizes, stopping
/// at the first CRC pass.
pub fn ascl_decode(
    frame: &LlrFrame,
    code: &PolarCode,
    list_schedule: &[usize],
    genie: Option<&[u8]>,
) -> Result<DecodeOutcome> {
    if list_schedule.is_empty() {
        return Err(Error::invalid("L_schedule", "must be nonempty"));
    }
    if list_schedule.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::invalid("L_schedule", "must be strictly ascending"));
    }
    let partitions = PartitionSpec::single(code);
    let mut attempts = 0usize;
    let mut last = None;
    for &list_size in list_schedule {
        let mut decoder = SclDecoder::new(code, list_size, frame, 1)?;
        decoder.decode_segment(&partitions, 0, None)?;
        attempts += 1;
        let passed = decoder.any_pass(0);
        let collisions = match genie {
            Some(u) => vec![partition_collision(&decoder, code, &partitions, 0, u)],
            None => vec![false],
        };
        let outcome = finish_outcome(&decoder, genie, vec![1], collisions, attempts);
        if passed {
            return Ok(outcome);
        }
        last = Some(outcome);
    }
    let mut outcome = last.unwrap();
    outcome.terminated_at = Some(0);
    Ok(outcome)
}
