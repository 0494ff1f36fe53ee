//! First-error statistics under genie-aided SCL and partition design.
//!
//! The first-error index X of a frame is the first input position at which
//! every list path has diverged from the true input prefix. Its CDF F(k),
//! conditioned on an error occurring, drives the partition boundaries:
//! mu_p is the smallest k with F(k) >= p/P, so each partition captures an
//! equal share of first errors.

use std::fmt::Write as _;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use rayon::prelude::*;

use crate::channel::{frame_rng, modulate, transmit};
use crate::error::{Error, Result};
use crate::polar::{build_message_word, PartitionSpec, PolarCode};
use crate::scl::SclDecoder;
use rand::Rng;

/// Provenance of an estimated CDF.
#[derive(Debug, Clone, PartialEq)]
pub struct CdfMetadata {
    pub block_len: usize,
    pub payload_len: usize,
    pub crc_len: usize,
    pub list_size: usize,
    pub ebn0_db: f64,
    pub events: u64,
}

/// Estimated distribution F(k) of the first-error index, conditional on an
/// error event; dense over [0, N).
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalCdf {
    values: Vec<f64>,
    pub metadata: CdfMetadata,
}

impl EmpiricalCdf {
    /// Build from per-index event counts; normalizes by the total.
    pub fn from_event_counts(counts: &[u64], metadata: CdfMetadata) -> Result<Self> {
        if counts.len() != metadata.block_len {
            return Err(Error::LengthMismatch { expected: metadata.block_len, got: counts.len() });
        }
        let total: u64 = counts.iter().sum();
        if total == 0 {
            return Err(Error::invalid("events", "no error events recorded"));
        }
        let mut values = Vec::with_capacity(counts.len());
        let mut acc = 0u64;
        for &c in counts {
            acc += c;
            values.push(acc as f64 / total as f64);
        }
        Ok(Self { values, metadata })
    }

    /// Build from sparse step points (index, F) ascending; F holds its last
    /// value between steps and is 0 before the first.
    pub fn from_steps(steps: &[(usize, f64)], metadata: CdfMetadata) -> Result<Self> {
        let n = metadata.block_len;
        if steps.is_empty() {
            return Err(Error::invalid("steps", "empty"));
        }
        let mut values = vec![0.0; n];
        let mut prev_idx = None;
        let mut prev_val = 0.0;
        for &(k, f) in steps {
            if k >= n {
                return Err(Error::invalid("steps", format!("index {k} >= N={n}")));
            }
            if prev_idx.map_or(false, |p| k <= p) {
                return Err(Error::invalid("steps", "indices must be strictly increasing"));
            }
            if f < prev_val || f > 1.0 + 1e-12 {
                return Err(Error::invalid("steps", format!("F={f} breaks monotonicity")));
            }
            for v in values.iter_mut().take(n).skip(k) {
                *v = f;
            }
            prev_idx = Some(k);
            prev_val = f;
        }
        if (values[n - 1] - 1.0).abs() > 1e-9 {
            return Err(Error::invalid("steps", format!("F(N-1)={} != 1", values[n - 1])));
        }
        values[n - 1] = 1.0;
        Ok(Self { values, metadata })
    }

    pub fn block_len(&self) -> usize {
        self.values.len()
    }

    /// F(k).
    pub fn value(&self, k: usize) -> f64 {
        self.values[k]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Smallest k with F(k) >= q.
    pub fn crossing(&self, q: f64) -> Option<usize> {
        self.values.iter().position(|&f| f >= q)
    }

    /// Number of distinct step indices (positions where F increases).
    pub fn step_count(&self) -> usize {
        let mut prev = 0.0;
        let mut steps = 0;
        for &f in &self.values {
            if f > prev {
                steps += 1;
                prev = f;
            }
        }
        steps
    }

    /// Two-column text with a metadata header; only step rows are written.
    pub fn write_file(&self, path: &Path) -> Result<()> {
        let mut body = String::new();
        let m = &self.metadata;
        writeln!(
            body,
            "# N={} K={} C={} L={} ebn0_db={} events={}",
            m.block_len, m.payload_len, m.crc_len, m.list_size, m.ebn0_db, m.events
        )
        .unwrap();
        let mut prev = 0.0;
        for (k, &f) in self.values.iter().enumerate() {
            if f > prev || k == self.values.len() - 1 {
                writeln!(body, "{k} {f:.9}").unwrap();
                prev = f;
            }
        }
        let mut file = std::fs::File::create(path)?;
        file.write_all(body.as_bytes())?;
        Ok(())
    }
}

/// Parse the two-column CDF format written by [`EmpiricalCdf::write_file`].
pub fn load_cdf_file(path: &Path) -> Result<EmpiricalCdf> {
    let malformed = |reason: String| Error::Malformed { path: path.display().to_string(), reason };
    let reader = BufReader::new(std::fs::File::open(path)?);
    let mut metadata: Option<CdfMetadata> = None;
    let mut steps = Vec::new();
    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            if metadata.is_some() {
                continue;
            }
            let mut fields = std::collections::HashMap::new();
            for tok in rest.split_whitespace() {
                if let Some((k, v)) = tok.split_once('=') {
                    fields.insert(k.to_string(), v.to_string());
                }
            }
            let get = |name: &str| -> Result<String> {
                fields
                    .get(name)
                    .cloned()
                    .ok_or_else(|| malformed(format!("missing header field {name}")))
            };
            metadata = Some(CdfMetadata {
                block_len: get("N")?.parse().map_err(|e| malformed(format!("N: {e}")))?,
                payload_len: get("K")?.parse().map_err(|e| malformed(format!("K: {e}")))?,
                crc_len: get("C")?.parse().map_err(|e| malformed(format!("C: {e}")))?,
                list_size: get("L")?.parse().map_err(|e| malformed(format!("L: {e}")))?,
                ebn0_db: get("ebn0_db")?.parse().map_err(|e| malformed(format!("ebn0_db: {e}")))?,
                events: get("events")?.parse().map_err(|e| malformed(format!("events: {e}")))?,
            });
            continue;
        }
        let mut cols = line.split_whitespace();
        let k: usize = cols
            .next()
            .ok_or_else(|| malformed(format!("line {}: missing index", lineno + 1)))?
            .parse()
            .map_err(|e| malformed(format!("line {}: {e}", lineno + 1)))?;
        let f: f64 = cols
            .next()
            .ok_or_else(|| malformed(format!("line {}: missing value", lineno + 1)))?
            .parse()
            .map_err(|e| malformed(format!("line {}: {e}", lineno + 1)))?;
        steps.push((k, f));
    }
    let metadata = metadata.ok_or_else(|| malformed("missing metadata header".into()))?;
    EmpiricalCdf::from_steps(&steps, metadata)
}

const ESTIMATION_BATCH: u64 = 256;

/// Monte Carlo estimate of the first-error CDF under plain (genie-observed)
/// SCL. Frames are drawn from deterministic per-index streams; only frames
/// whose lists fully diverge contribute events.
pub fn estimate_first_error_cdf(
    code: &PolarCode,
    list_size: usize,
    ebn0_db: f64,
    min_events: u64,
    max_frames: u64,
    seed: u64,
) -> Result<EmpiricalCdf> {
    if min_events < 100 {
        return Err(Error::invalid("min_events", "must be >= 100"));
    }
    let n = code.block_len();
    let partitions = PartitionSpec::single(code);
    let mut counts = vec![0u64; n];
    let mut events = 0u64;
    let mut frames = 0u64;
    while events < min_events {
        if frames >= max_frames {
            return Err(Error::FrameCapReached { max_frames, events, wanted: min_events });
        }
        let batch: Vec<Option<usize>> = (frames..frames + ESTIMATION_BATCH)
            .into_par_iter()
            .map(|idx| {
                let mut rng = frame_rng(seed, idx);
                let m: Vec<u8> = (0..code.payload_len()).map(|_| rng.gen_range(0..2)).collect();
                let word = build_message_word(&m, code, &partitions).unwrap();
                let u = code.insert_message(&word.with_crc).unwrap();
                let x = code.encode(&u).unwrap();
                let frame = transmit(&modulate(&x), ebn0_db, code.rate(), &mut rng).unwrap();
                let mut decoder = SclDecoder::new(code, list_size, &frame, 1).unwrap();
                decoder.set_genie(&u);
                decoder.decode_all(&partitions).unwrap();
                decoder.first_divergence()
            })
            .collect();
        for div in batch {
            if let Some(k) = div {
                counts[k] += 1;
                events += 1;
            }
        }
        frames += ESTIMATION_BATCH;
    }
    EmpiricalCdf::from_event_counts(
        &counts,
        CdfMetadata {
            block_len: n,
            payload_len: code.payload_len(),
            crc_len: code.crc_len(),
            list_size,
            ebn0_db,
            events,
        },
    )
}

/// Boundary rule: mu_p = smallest k with F(k) >= p/P; mu_P forced to N-1.
/// Boundaries are pushed right as needed so they stay strictly increasing
/// and, when an information set is supplied, so every partition holds at
/// least one non-frozen bit.
pub fn design_partitions(
    cdf: &EmpiricalCdf,
    partition_count: usize,
    info_set: Option<&[usize]>,
) -> Result<Vec<usize>> {
    if partition_count < 1 {
        return Err(Error::invalid("P", "must be >= 1"));
    }
    let n = cdf.block_len();
    let mut mu = Vec::with_capacity(partition_count);
    let mut prev: isize = -1;
    for p in 1..partition_count {
        let q = p as f64 / partition_count as f64;
        let mut k = cdf.crossing(q).expect("F(N-1) = 1 always crosses");
        if k as isize <= prev {
            k = (prev + 1) as usize;
        }
        if let Some(info) = info_set {
            // first non-frozen index past the previous boundary
            if let Some(&first) = info.iter().find(|&&i| i as isize > prev) {
                if first > k {
                    k = first;
                }
            }
        }
        if k >= n - 1 {
            return Err(Error::invalid(
                "P",
                format!("{partition_count} partitions exceed the CDF's distinct steps"),
            ));
        }
        mu.push(k);
        prev = k as isize;
    }
    mu.push(n - 1);
    Ok(mu)
}

/// P(e_p) = F(mu_p) - F(mu_{p-1}) over half-open boundary intervals; sums
/// to 1 exactly.
pub fn partition_error_probs(cdf: &EmpiricalCdf, mu: &[usize]) -> Result<Vec<f64>> {
    if mu.is_empty() || *mu.last().unwrap() != cdf.block_len() - 1 {
        return Err(Error::invalid("mu", "must end at N-1"));
    }
    if mu.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::invalid("mu", "must be strictly increasing"));
    }
    let mut probs = Vec::with_capacity(mu.len());
    let mut prev = 0.0;
    for &m in mu {
        let f = cdf.value(m);
        probs.push(f - prev);
        prev = f;
    }
    Ok(probs)
}

/// Equal non-frozen split: floor(|I|/P) non-frozen bits per partition, the
/// remainder absorbed by the last; mu_p is the last non-frozen index of
/// partition p, mu_P = N-1.
pub fn design_partitions_uniform(code: &PolarCode, partition_count: usize) -> Result<Vec<usize>> {
    if partition_count < 1 {
        return Err(Error::invalid("P", "must be >= 1"));
    }
    let info = code.info_set();
    if partition_count > info.len() {
        return Err(Error::invalid("P", format!("{partition_count} partitions > {} non-frozen bits", info.len())));
    }
    let per = info.len() / partition_count;
    let mut mu: Vec<usize> = (1..partition_count).map(|p| info[p * per - 1]).collect();
    mu.push(code.block_len() - 1);
    Ok(mu)
}
