//! Cycle-count model for a semi-parallel SC/SCL decoder with phi
//! processing elements, and average execution times for the flip decoders.
//!
//! The partial latency up to leaf i is
//! L_SC(i) = sum_s ceil(2^s/phi) * (1 + floor(i/2^s)), s = 0..n-1,
//! whose full-frame value collapses to 2N + (N/phi) log2(N/(4 phi)).
//! SCL adds one sorting cycle per non-frozen bit: L_SCL = L_SC(N-1) + |I|.

use crate::error::{Error, Result};
use crate::polar::PartitionSpec;

/// Semi-parallel architecture parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LatencyParams {
    pub block_len: usize,
    pub phi: usize,
    pub info_size: usize,
}

impl LatencyParams {
    pub fn new(block_len: usize, phi: usize, info_size: usize) -> Result<Self> {
        if !block_len.is_power_of_two() || block_len < 4 {
            return Err(Error::invalid("N", format!("{block_len} is not a power of two >= 4")));
        }
        if !phi.is_power_of_two() || 4 * phi > block_len {
            return Err(Error::invalid("phi", format!("{phi} is not a power of two <= N/4")));
        }
        if info_size > block_len {
            return Err(Error::invalid("info_size", format!("{info_size} > N")));
        }
        Ok(Self { block_len, phi, info_size })
    }

    fn stages(&self) -> u32 {
        self.block_len.trailing_zeros()
    }
}

/// Cycles for the semi-parallel SC decoder to emit leaf i.
pub fn sc_partial_latency(i: usize, params: &LatencyParams) -> Result<u64> {
    if i >= params.block_len {
        return Err(Error::invalid("i", format!("{i} >= N={}", params.block_len)));
    }
    let mut cycles = 0u64;
    for s in 0..params.stages() {
        let per_stage = ((1u64 << s) + params.phi as u64 - 1) / params.phi as u64;
        cycles += per_stage * (1 + (i as u64 >> s));
    }
    Ok(cycles)
}

/// Full-frame SC latency, L_SC(N-1).
pub fn sc_latency(params: &LatencyParams) -> u64 {
    sc_partial_latency(params.block_len - 1, params).unwrap()
}

/// L_SCL = L_SC(N-1) + |I| (one sorting cycle per non-frozen bit).
pub fn scl_latency(params: &LatencyParams) -> u64 {
    sc_latency(params) + params.info_size as u64
}

/// Cycles for SCL to clear partition p (1-based); p = 0 is the convention 0.
/// Adds the sorting cycles of all non-frozen bits up to the boundary mu_p.
pub fn scl_partial_latency(p: usize, partitions: &PartitionSpec, params: &LatencyParams) -> Result<u64> {
    if p == 0 {
        return Ok(0);
    }
    if p > partitions.partition_count() {
        return Err(Error::invalid("p", format!("{p} > P={}", partitions.partition_count())));
    }
    let sorts: u64 = (0..p).map(|m| partitions.nonfrozen_len(m) as u64).sum();
    Ok(sorts + sc_partial_latency(partitions.boundary(p - 1), params)?)
}

/// Per-partition reach probabilities and trial averages measured from a
/// simulation.
#[derive(Debug, Clone, PartialEq)]
pub struct ExecTimeStats {
    /// P(T_p): probability decoding reaches partition p.
    pub reach_prob: Vec<f64>,
    /// Average SCL trials spent in partition p, given it was reached.
    pub avg_trials: Vec<f64>,
}

impl ExecTimeStats {
    pub fn new(reach_prob: Vec<f64>, avg_trials: Vec<f64>) -> Result<Self> {
        if reach_prob.len() != avg_trials.len() || reach_prob.is_empty() {
            return Err(Error::invalid("stats", "reach/trial vectors must be nonempty and equal length"));
        }
        if (reach_prob[0] - 1.0).abs() > 1e-9 {
            return Err(Error::invalid("stats", format!("P(T_1)={} != 1", reach_prob[0])));
        }
        if reach_prob.windows(2).any(|w| w[1] > w[0] + 1e-9) {
            return Err(Error::invalid("stats", "reach probabilities must be non-increasing"));
        }
        if avg_trials.iter().any(|&t| t < 1.0) {
            return Err(Error::invalid("stats", "average trials must be >= 1"));
        }
        Ok(Self { reach_prob, avg_trials })
    }
}

/// SCLF average execution time: tbar * L_SCL.
pub fn avg_exec_time_sclf(tbar: f64, params: &LatencyParams) -> f64 {
    tbar * scl_latency(params) as f64
}

/// SCF average execution time: tbar * L_SC.
pub fn avg_exec_time_scf(tbar: f64, params: &LatencyParams) -> f64 {
    tbar * sc_latency(params) as f64
}

/// PSCLF average execution time:
/// sum_p P(T_p) * tbar_p * (L_SCL(mu_p) - L_SCL(mu_{p-1})).
pub fn avg_exec_time_psclf(
    stats: &ExecTimeStats,
    partitions: &PartitionSpec,
    params: &LatencyParams,
) -> Result<f64> {
    if stats.reach_prob.len() != partitions.partition_count() {
        return Err(Error::LengthMismatch {
            expected: partitions.partition_count(),
            got: stats.reach_prob.len(),
        });
    }
    let mut total = 0.0;
    let mut prev = 0u64;
    for p in 0..partitions.partition_count() {
        let here = scl_partial_latency(p + 1, partitions, params)?;
        total += stats.reach_prob[p] * stats.avg_trials[p] * (here - prev) as f64;
        prev = here;
    }
    Ok(total)
}

/// One ASCL attempt at list size L, modeled with 4 parallel SC modules:
/// ceil(L/4) sequential SC passes plus the sorting term.
pub fn ascl_attempt_cycles(list_size: usize, params: &LatencyParams) -> u64 {
    let passes = (list_size as u64 + 3) / 4;
    passes * sc_latency(params) + params.info_size as u64
}
