//! SC / SCL decoding kernel.
//!
//! LLR-based list decoding with min-sum f/g updates and the
//! magnitude-penalty path metric. The kernel records path-metric sort
//! pairs for the flip metric, evaluates per-partition CRC checkpoints
//! without pruning (check-and-keep), accepts a single flip directive that
//! inverts one sort, and supports snapshot/restore at partition
//! boundaries so a partition can be re-decoded.
//!
//! A decoder instance is single-threaded and owns its state; run one
//! instance per frame.

use crate::channel::LlrFrame;
use crate::crc::crc_check;
use crate::error::{Error, Result};
use crate::polar::{PartitionSpec, PolarCode};

/// Path-metric pair recorded at a sorting index: the best kept metric and
/// the best discarded metric out of the 2L candidates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SortRecord {
    pub index: usize,
    pub pm_best: f64,
    pub pm_lth: f64,
}

/// Invert the path selection at one sorting index.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FlipDirective {
    pub index: usize,
}

/// One SCL decoding path: decoder tree memory, partial decisions, path
/// metric, and per-partition CRC flags.
#[derive(Debug, Clone)]
pub struct PathState {
    /// Per-level LLR memory; level l (1..=n) lives at llr[l-1], length N >> l.
    llr: Vec<Vec<f64>>,
    /// Per-level partial-sum memory with two phase slots per entry.
    bits: Vec<Vec<u8>>,
    decisions: Vec<u8>,
    pm: f64,
    crc_flags: Vec<bool>,
    matches_truth: bool,
}

impl PathState {
    fn new(code: &PolarCode, partitions: usize) -> Self {
        let n = code.block_len();
        let stages = code.stages();
        let llr = (1..=stages).map(|l| vec![0.0; n >> l]).collect();
        let bits = (0..=stages).map(|l| vec![0u8; 2 * (n >> l)]).collect();
        Self {
            llr,
            bits,
            decisions: Vec::with_capacity(n),
            pm: 0.0,
            crc_flags: vec![false; partitions],
            matches_truth: true,
        }
    }

    pub fn decisions(&self) -> &[u8] {
        &self.decisions
    }

    pub fn path_metric(&self) -> f64 {
        self.pm
    }

    pub fn crc_flags(&self) -> &[bool] {
        &self.crc_flags
    }

    /// Whether every decision so far equals the genie's true input prefix.
    pub fn matches_truth(&self) -> bool {
        self.matches_truth
    }

    fn leaf_llr(&self) -> f64 {
        *self.llr.last().unwrap().first().unwrap()
    }
}

/// Full decoder state captured at a partition boundary.
#[derive(Debug, Clone)]
pub struct DecoderSnapshot {
    paths: Vec<PathState>,
    position: usize,
    info_rank: usize,
}

impl DecoderSnapshot {
    pub fn position(&self) -> usize {
        self.position
    }
}

/// Magnitude-penalty path-metric update: penalize by |llr| whenever the
/// decision disagrees with the channel hard decision (hard(0) = 0).
pub fn pm_update(pm: f64, llr: f64, decision: u8) -> f64 {
    let hard = (llr < 0.0) as u8;
    if decision != hard {
        pm + llr.abs()
    } else {
        pm
    }
}

fn min_sum_f(a: f64, b: f64) -> f64 {
    let sign = if (a < 0.0) != (b < 0.0) { -1.0 } else { 1.0 };
    sign * a.abs().min(b.abs())
}

fn g_update(a: f64, b: f64, partial_sum: u8) -> f64 {
    if partial_sum == 0 {
        b + a
    } else {
        b - a
    }
}

#[derive(Debug, Clone, Copy)]
struct Candidate {
    path: usize,
    bit: u8,
    pm: f64,
}

pub struct SclDecoder<'a> {
    code: &'a PolarCode,
    list_size: usize,
    channel: Vec<f64>,
    paths: Vec<PathState>,
    position: usize,
    info_rank: usize,
    genie: Option<Vec<u8>>,
    first_divergence: Option<usize>,
}

impl<'a> SclDecoder<'a> {
    pub fn new(code: &'a PolarCode, list_size: usize, frame: &LlrFrame, partitions: usize) -> Result<Self> {
        if list_size == 0 || !list_size.is_power_of_two() {
            return Err(Error::invalid("L", format!("{list_size} is not a power of two >= 1")));
        }
        if frame.len() != code.block_len() {
            return Err(Error::LengthMismatch {
                expected: code.block_len(),
                got: frame.len(),
            });
        }
        Ok(Self {
            code,
            list_size,
            channel: frame.0.clone(),
            paths: vec![PathState::new(code, partitions)],
            position: 0,
            info_rank: 0,
            genie: None,
            first_divergence: None,
        })
    }

    /// Track divergence from the true input vector (simulation diagnostic;
    /// never influences decoding).
    pub fn set_genie(&mut self, true_u: &[u8]) {
        debug_assert_eq!(true_u.len(), self.code.block_len());
        self.genie = Some(true_u.to_vec());
    }

    pub fn paths(&self) -> &[PathState] {
        &self.paths
    }

    pub fn position(&self) -> usize {
        self.position
    }

    /// First sorting index at which every path had diverged from the true
    /// input prefix, if that has happened.
    pub fn first_divergence(&self) -> Option<usize> {
        self.first_divergence
    }

    pub fn snapshot(&self) -> DecoderSnapshot {
        DecoderSnapshot {
            paths: self.paths.clone(),
            position: self.position,
            info_rank: self.info_rank,
        }
    }

    pub fn restore(&mut self, snapshot: &DecoderSnapshot) {
        self.paths = snapshot.paths.clone();
        self.position = snapshot.position;
        self.info_rank = snapshot.info_rank;
    }

    /// Decode one partition: all leaves through its boundary, then evaluate
    /// its CRC on every path (check-and-keep; nothing is pruned). Returns
    /// the sort records of indices inside the partition.
    pub fn decode_segment(
        &mut self,
        partitions: &PartitionSpec,
        p: usize,
        directive: Option<FlipDirective>,
    ) -> Result<Vec<SortRecord>> {
        let start = self.position;
        let end = partitions.boundary(p);
        if let Some(d) = directive {
            if d.index < start || d.index > end {
                return Err(Error::invalid(
                    "flip_directive",
                    format!("index {} outside partition range {start}..={end}", d.index),
                ));
            }
            if self.code.is_frozen(d.index) {
                return Err(Error::invalid("flip_directive", format!("index {} is frozen", d.index)));
            }
        }
        let mut records = Vec::new();
        while self.position <= end {
            self.step(directive, &mut records);
        }
        let (lo, hi) = partitions.message_range(p);
        for path in &mut self.paths {
            let segment: Vec<u8> = self.code.info_set()[lo..hi]
                .iter()
                .map(|&i| path.decisions[i])
                .collect();
            path.crc_flags[p] = crc_check(&segment, partitions.crc_spec(p))?;
        }
        Ok(records)
    }

    /// Decode every partition in order with no directives.
    pub fn decode_all(&mut self, partitions: &PartitionSpec) -> Result<Vec<SortRecord>> {
        let mut records = Vec::new();
        for p in 0..partitions.partition_count() {
            records.extend(self.decode_segment(partitions, p, None)?);
        }
        Ok(records)
    }

    /// True if at least one path satisfies the CRC of partition p.
    pub fn any_pass(&self, p: usize) -> bool {
        self.paths.iter().any(|path| path.crc_flags[p])
    }

    /// Minimum-metric path among those whose CRC flags hold for every
    /// partition, or None if no path passes.
    pub fn select_output(&self) -> Option<&PathState> {
        self.paths
            .iter()
            .filter(|path| path.crc_flags.iter().all(|&f| f))
            .min_by(|a, b| a.pm.partial_cmp(&b.pm).unwrap())
    }

    fn step(&mut self, directive: Option<FlipDirective>, records: &mut Vec<SortRecord>) {
        let leaf = self.position;
        let stages = self.code.stages();
        for path in &mut self.paths {
            calc_llr(path, &self.channel, stages, leaf);
        }
        if self.code.is_frozen(leaf) {
            for path in &mut self.paths {
                let llr = path.leaf_llr();
                path.pm = pm_update(path.pm, llr, 0);
                apply_decision(path, stages, leaf, 0);
            }
        } else {
            self.info_rank += 1;
            if self.paths.len() * 2 <= self.list_size {
                // Covered region: keep every extension, no sorting.
                let mut doubled = Vec::with_capacity(self.paths.len() * 2);
                for path in self.paths.drain(..) {
                    let mut one = path.clone();
                    let mut zero = path;
                    let llr = zero.leaf_llr();
                    zero.pm = pm_update(zero.pm, llr, 0);
                    apply_decision(&mut zero, stages, leaf, 0);
                    one.pm = pm_update(one.pm, llr, 1);
                    apply_decision(&mut one, stages, leaf, 1);
                    doubled.push(zero);
                    doubled.push(one);
                }
                self.paths = doubled;
            } else {
                self.sort_step(leaf, directive, records);
            }
        }
        if let Some(true_u) = &self.genie {
            let truth = true_u[leaf];
            for path in &mut self.paths {
                if path.matches_truth && path.decisions[leaf] != truth {
                    path.matches_truth = false;
                }
            }
            if self.first_divergence.is_none() && !self.paths.iter().any(|p| p.matches_truth) {
                self.first_divergence = Some(leaf);
            }
        }
        self.position += 1;
    }

    fn sort_step(&mut self, leaf: usize, directive: Option<FlipDirective>, records: &mut Vec<SortRecord>) {
        let keep = self.list_size;
        let mut candidates = Vec::with_capacity(2 * self.paths.len());
        for (idx, path) in self.paths.iter().enumerate() {
            let llr = path.leaf_llr();
            for bit in 0..2u8 {
                candidates.push(Candidate {
                    path: idx,
                    bit,
                    pm: pm_update(path.pm, llr, bit),
                });
            }
        }
        // Stable: ties resolved toward the lower path index / zero bit.
        candidates.sort_by(|a, b| a.pm.partial_cmp(&b.pm).unwrap());
        records.push(SortRecord {
            index: leaf,
            pm_best: candidates[0].pm,
            pm_lth: candidates[keep].pm,
        });
        let flip_here = directive.map(|d| d.index == leaf).unwrap_or(false);
        let survivors: Vec<Candidate> = if flip_here {
            candidates[keep..].to_vec()
        } else {
            candidates[..keep].to_vec()
        };
        let mut uses = vec![0usize; self.paths.len()];
        for s in &survivors {
            uses[s.path] += 1;
        }
        let mut slots: Vec<Option<PathState>> = self.paths.drain(..).map(Some).collect();
        let stages = self.code.stages();
        let mut next = Vec::with_capacity(keep);
        for s in &survivors {
            let mut path = if uses[s.path] > 1 {
                uses[s.path] -= 1;
                slots[s.path].as_ref().unwrap().clone()
            } else {
                slots[s.path].take().unwrap()
            };
            path.pm = s.pm;
            apply_decision(&mut path, stages, leaf, s.bit);
            next.push(path);
        }
        self.paths = next;
    }
}

fn calc_llr(path: &mut PathState, channel: &[f64], stages: usize, leaf: usize) {
    calc_level(path, channel, stages, leaf);
}

fn calc_level(path: &mut PathState, channel: &[f64], level: usize, phase: usize) {
    if level == 0 {
        return;
    }
    if phase % 2 == 0 && level > 1 {
        calc_level(path, channel, level - 1, phase >> 1);
    }
    let len = channel.len() >> level;
    // Split-borrow: level-1 is either the shared channel or a lower row.
    if level == 1 {
        let half = channel.len() >> 1;
        let (lo, rest) = channel.split_at(half);
        compute_row(&mut path.llr[0], lo, rest, phase, &path.bits[1][..len]);
    } else {
        let (lower_rows, upper_rows) = path.llr.split_at_mut(level - 1);
        let lower = &lower_rows[level - 2];
        let half = lower.len() / 2;
        let (lo, hi) = lower.split_at(half);
        compute_row(&mut upper_rows[0], lo, hi, phase, &path.bits[level][..len]);
    }
}

fn compute_row(out: &mut [f64], lo: &[f64], hi: &[f64], phase: usize, partial_sums: &[u8]) {
    if phase % 2 == 0 {
        for (i, slot) in out.iter_mut().enumerate() {
            *slot = min_sum_f(lo[i], hi[i]);
        }
    } else {
        for (i, slot) in out.iter_mut().enumerate() {
            *slot = g_update(lo[i], hi[i], partial_sums[i]);
        }
    }
}

fn apply_decision(path: &mut PathState, stages: usize, leaf: usize, bit: u8) {
    debug_assert_eq!(path.decisions.len(), leaf);
    path.decisions.push(bit);
    path.bits[stages][leaf % 2] = bit;
    if leaf % 2 == 1 {
        update_partial_sums(path, stages, leaf);
    }
}

fn update_partial_sums(path: &mut PathState, level: usize, phase: usize) {
    debug_assert_eq!(phase % 2, 1);
    let parent_phase = phase >> 1;
    let len = path.bits[level].len() / 2;
    let slot = (parent_phase % 2) * 2 * len;
    let (lower_levels, upper_levels) = path.bits.split_at_mut(level);
    let current = &upper_levels[0];
    let below = &mut lower_levels[level - 1];
    for beta in 0..len {
        let c0 = current[beta];
        let c1 = current[len + beta];
        below[slot + beta] = c0 ^ c1;
        below[slot + len + beta] = c1;
    }
    if parent_phase % 2 == 1 {
        update_partial_sums(path, level - 1, parent_phase);
    }
}

/// Plain successive cancellation (L = 1, no CRC use).
pub fn sc_decode(frame: &LlrFrame, code: &PolarCode) -> Result<Vec<u8>> {
    let partitions = PartitionSpec::single(code);
    let mut decoder = SclDecoder::new(code, 1, frame, 1)?;
    decoder.decode_all(&partitions)?;
    Ok(decoder.paths[0].decisions.clone())
}
