//! Polar code construction, message insertion, and encoding.
//!
//! A `(N, K+C)` CRC-aided polar code is fully described by its information
//! set: the `K+C` input positions carrying payload and CRC bits. The
//! remaining positions are frozen to zero. Encoding is `x = u * T2^{(x)n}`
//! in natural (non-bit-reversed) order.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::crc::{crc_append, CrcSpec};
use crate::error::{Error, Result};

/// A CRC-aided polar code: block length, payload/CRC split, and the
/// information set. Immutable after construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolarCode {
    block_len: usize,
    stages: usize,
    payload_len: usize,
    crc_len: usize,
    info_set: Vec<usize>,
    frozen_mask: Vec<bool>,
}

impl PolarCode {
    /// Build a code from an explicit information set.
    pub fn new(block_len: usize, payload_len: usize, crc_len: usize, info_set: Vec<usize>) -> Result<Self> {
        if !block_len.is_power_of_two() || block_len < 2 {
            return Err(Error::invalid("N", format!("{block_len} is not a power of two >= 2")));
        }
        if payload_len + crc_len > block_len || payload_len == 0 {
            return Err(Error::invalid(
                "K",
                format!("K+C = {} out of range for N = {block_len}", payload_len + crc_len),
            ));
        }
        if info_set.len() != payload_len + crc_len {
            return Err(Error::LengthMismatch {
                expected: payload_len + crc_len,
                got: info_set.len(),
            });
        }
        let mut frozen_mask = vec![true; block_len];
        let mut prev = None;
        for &i in &info_set {
            if i >= block_len {
                return Err(Error::invalid("info_set", format!("index {i} >= N = {block_len}")));
            }
            if let Some(p) = prev {
                if i <= p {
                    return Err(Error::invalid("info_set", "indices must be strictly increasing"));
                }
            }
            prev = Some(i);
            frozen_mask[i] = false;
        }
        Ok(Self {
            block_len,
            stages: block_len.trailing_zeros() as usize,
            payload_len,
            crc_len,
            info_set,
            frozen_mask,
        })
    }

    /// Build a code with the information set chosen by Gaussian-approximation
    /// density evolution at the given design Eb/N0.
    pub fn construct(block_len: usize, payload_len: usize, crc_len: usize, design_snr_db: f64) -> Result<Self> {
        let info_set = construct_info_set(block_len, payload_len + crc_len, design_snr_db)?;
        Self::new(block_len, payload_len, crc_len, info_set)
    }

    pub fn block_len(&self) -> usize {
        self.block_len
    }

    /// log2(N).
    pub fn stages(&self) -> usize {
        self.stages
    }

    pub fn payload_len(&self) -> usize {
        self.payload_len
    }

    pub fn crc_len(&self) -> usize {
        self.crc_len
    }

    /// |I| = K + C.
    pub fn info_len(&self) -> usize {
        self.payload_len + self.crc_len
    }

    pub fn info_set(&self) -> &[usize] {
        &self.info_set
    }

    pub fn is_frozen(&self, index: usize) -> bool {
        self.frozen_mask[index]
    }

    /// Rate convention K/N: CRC bits count as overhead.
    pub fn rate(&self) -> f64 {
        self.payload_len as f64 / self.block_len as f64
    }

    /// Scatter `m_prime` (K+C bits) into the information set, zeros elsewhere.
    pub fn insert_message(&self, m_prime: &[u8]) -> Result<Vec<u8>> {
        if m_prime.len() != self.info_len() {
            return Err(Error::LengthMismatch {
                expected: self.info_len(),
                got: m_prime.len(),
            });
        }
        let mut u = vec![0u8; self.block_len];
        for (bit, &pos) in m_prime.iter().zip(&self.info_set) {
            u[pos] = *bit;
        }
        Ok(u)
    }

    /// Gather the K+C information-position bits of an input vector.
    pub fn extract_message(&self, u: &[u8]) -> Vec<u8> {
        self.info_set.iter().map(|&i| u[i]).collect()
    }

    /// x = u * T2^{(x)n}. Requires u zero on the frozen set.
    pub fn encode(&self, u: &[u8]) -> Result<Vec<u8>> {
        if u.len() != self.block_len {
            return Err(Error::LengthMismatch {
                expected: self.block_len,
                got: u.len(),
            });
        }
        for (i, &bit) in u.iter().enumerate() {
            if self.frozen_mask[i] && bit != 0 {
                return Err(Error::invalid("u", format!("frozen position {i} is nonzero")));
            }
        }
        let mut x = u.to_vec();
        polar_transform(&mut x);
        Ok(x)
    }
}

/// In-place butterfly application of T2^{(x)n}; an involution over GF(2).
pub fn polar_transform(bits: &mut [u8]) {
    let n = bits.len();
    debug_assert!(n.is_power_of_two());
    let mut step = 1;
    while step < n {
        for block in (0..n).step_by(2 * step) {
            for j in 0..step {
                bits[block + j] ^= bits[block + j + step];
            }
        }
        step *= 2;
    }
}

/// Per-partition boundaries and CRC lengths of a partitioned polar code.
///
/// `mu` holds the last codeword index of each partition with
/// `mu[P-1] = N-1`. Bookkeeping fields give the number of non-frozen bits
/// per partition (`s_p`) and their cumulative sums.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionSpec {
    mu: Vec<usize>,
    crc_lengths: Vec<usize>,
    crc_specs: Vec<CrcSpec>,
    nonfrozen_per_partition: Vec<usize>,
    cumulative_nonfrozen: Vec<usize>,
}

impl PartitionSpec {
    pub fn new(code: &PolarCode, mu: Vec<usize>, crc_lengths: Vec<usize>) -> Result<Self> {
        if mu.is_empty() || mu.len() != crc_lengths.len() {
            return Err(Error::invalid("mu", "boundary and CRC lists must be nonempty and equal-length"));
        }
        if *mu.last().unwrap() != code.block_len() - 1 {
            return Err(Error::invalid("mu", format!("last boundary must be N-1 = {}", code.block_len() - 1)));
        }
        for w in mu.windows(2) {
            if w[1] <= w[0] {
                return Err(Error::invalid("mu", "boundaries must be strictly increasing"));
            }
        }
        let total_crc: usize = crc_lengths.iter().sum();
        if total_crc != code.crc_len() {
            return Err(Error::invalid(
                "crc_lengths",
                format!("sum {} != C = {}", total_crc, code.crc_len()),
            ));
        }
        let mut nonfrozen = Vec::with_capacity(mu.len());
        let mut cumulative = Vec::with_capacity(mu.len());
        let mut lo = 0usize;
        let mut cum = 0usize;
        for (&hi, &c_p) in mu.iter().zip(&crc_lengths) {
            let s_p = code.info_set().iter().filter(|&&i| i >= lo && i <= hi).count();
            if s_p <= c_p {
                return Err(Error::invalid(
                    "mu",
                    format!("partition ending at {hi} has {s_p} non-frozen bits for a {c_p}-bit CRC"),
                ));
            }
            cum += s_p;
            nonfrozen.push(s_p);
            cumulative.push(cum);
            lo = hi + 1;
        }
        debug_assert_eq!(cum, code.info_len());
        let crc_specs = crc_lengths
            .iter()
            .map(|&c| CrcSpec::standard(c))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            mu,
            crc_lengths,
            crc_specs,
            nonfrozen_per_partition: nonfrozen,
            cumulative_nonfrozen: cumulative,
        })
    }

    /// The whole code as one partition carrying the full CRC.
    pub fn single(code: &PolarCode) -> Self {
        Self::new(code, vec![code.block_len() - 1], vec![code.crc_len()])
            .expect("single partition is always valid")
    }

    pub fn partition_count(&self) -> usize {
        self.mu.len()
    }

    pub fn mu(&self) -> &[usize] {
        &self.mu
    }

    pub fn crc_lengths(&self) -> &[usize] {
        &self.crc_lengths
    }

    pub fn crc_spec(&self, p: usize) -> &CrcSpec {
        &self.crc_specs[p]
    }

    /// s_p = K_p + C_p.
    pub fn nonfrozen_len(&self, p: usize) -> usize {
        self.nonfrozen_per_partition[p]
    }

    /// K_p.
    pub fn payload_len(&self, p: usize) -> usize {
        self.nonfrozen_per_partition[p] - self.crc_lengths[p]
    }

    /// Range of m' bit offsets [start, end) belonging to partition p.
    pub fn message_range(&self, p: usize) -> (usize, usize) {
        let start = if p == 0 { 0 } else { self.cumulative_nonfrozen[p - 1] };
        (start, self.cumulative_nonfrozen[p])
    }

    /// Last codeword index of partition p.
    pub fn boundary(&self, p: usize) -> usize {
        self.mu[p]
    }
}

/// K information bits and the K+C-bit word after per-partition CRC insertion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MessageWord {
    pub payload: Vec<u8>,
    pub with_crc: Vec<u8>,
}

/// Lay out `m` as per-partition `[payload | CRC]` segments.
pub fn build_message_word(m: &[u8], code: &PolarCode, partitions: &PartitionSpec) -> Result<MessageWord> {
    if m.len() != code.payload_len() {
        return Err(Error::LengthMismatch {
            expected: code.payload_len(),
            got: m.len(),
        });
    }
    let mut with_crc = Vec::with_capacity(code.info_len());
    let mut consumed = 0usize;
    for p in 0..partitions.partition_count() {
        let k_p = partitions.payload_len(p);
        let segment = &m[consumed..consumed + k_p];
        with_crc.extend(crc_append(segment, partitions.crc_spec(p)));
        consumed += k_p;
    }
    debug_assert_eq!(with_crc.len(), code.info_len());
    Ok(MessageWord {
        payload: m.to_vec(),
        with_crc,
    })
}

/// Select the `k_total` most reliable bit-channels at the design Eb/N0 by
/// Gaussian-approximation density evolution. Deterministic for fixed inputs.
pub fn construct_info_set(block_len: usize, k_total: usize, design_snr_db: f64) -> Result<Vec<usize>> {
    if !block_len.is_power_of_two() || block_len < 2 {
        return Err(Error::invalid("N", format!("{block_len} is not a power of two >= 2")));
    }
    if k_total == 0 || k_total > block_len {
        return Err(Error::invalid("K_total", format!("{k_total} out of range 1..={block_len}")));
    }
    let rate = k_total as f64 / block_len as f64;
    // Channel LLR mean 2/sigma^2 with sigma^2 = 1/(2 R Eb/N0).
    let mut means = vec![4.0 * rate * 10f64.powf(design_snr_db / 10.0); block_len];
    let stages = block_len.trailing_zeros() as usize;
    // The first transform applied to the channel mean corresponds to the
    // most significant index bit, matching the decoder's traversal order.
    for stage in 0..stages {
        let half = block_len >> (stage + 1);
        let mut next = vec![0.0; block_len];
        for i in 0..block_len {
            let partner = i ^ half;
            if i < partner {
                let m = means[i];
                next[i] = ga_check_mean(m);
                next[partner] = 2.0 * m;
            }
        }
        means = next;
    }
    let mut order: Vec<usize> = (0..block_len).collect();
    // Descending reliability, ties toward the higher index (the more
    // polarized position in every standard ordering).
    order.sort_by(|&a, &b| means[b].partial_cmp(&means[a]).unwrap().then(b.cmp(&a)));
    let mut chosen: Vec<usize> = order[..k_total].to_vec();
    chosen.sort_unstable();
    Ok(chosen)
}

/// Mean LLR of the check-node (minus) channel under the two-piece phi
/// approximation of Chung et al.
fn ga_check_mean(m: f64) -> f64 {
    phi_inv(1.0 - (1.0 - phi(m)).powi(2))
}

fn phi(x: f64) -> f64 {
    if x <= 0.0 {
        1.0
    } else if x < 10.0 {
        (-0.4527 * x.powf(0.86) + 0.0218).exp()
    } else {
        (std::f64::consts::PI / x).sqrt() * (-x / 4.0).exp() * (1.0 - 10.0 / (7.0 * x))
    }
}

fn phi_inv(y: f64) -> f64 {
    if y >= 1.0 {
        return 0.0;
    }
    // phi is strictly decreasing; bisect on [0, hi].
    let mut lo = 0.0f64;
    let mut hi = 10.0f64;
    while phi(hi) > y {
        hi *= 2.0;
        if hi > 1e12 {
            return hi;
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if phi(mid) > y {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Write an information set as plain text: header `N=.. K=.. C=..`, then one
/// ascending decimal index per line.
pub fn write_info_set_file(path: &Path, code: &PolarCode) -> Result<()> {
    let mut out = String::new();
    writeln!(out, "N={} K={} C={}", code.block_len(), code.payload_len(), code.crc_len()).unwrap();
    for &i in code.info_set() {
        writeln!(out, "{i}").unwrap();
    }
    fs::write(path, out)?;
    Ok(())
}

/// Load a code from an information-set file written by [`write_info_set_file`].
pub fn load_info_set_file(path: &Path) -> Result<PolarCode> {
    let text = fs::read_to_string(path)?;
    let malformed = |reason: &str| Error::Malformed {
        path: path.display().to_string(),
        reason: reason.to_string(),
    };
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines.next().ok_or_else(|| malformed("empty file"))?;
    let mut n = None;
    let mut k = None;
    let mut c = None;
    for field in header.split_whitespace() {
        let (name, value) = field
            .split_once('=')
            .ok_or_else(|| malformed("header fields must be NAME=VALUE"))?;
        let value: usize = value.parse().map_err(|_| malformed("non-numeric header value"))?;
        match name {
            "N" => n = Some(value),
            "K" => k = Some(value),
            "C" => c = Some(value),
            _ => return Err(malformed("unknown header field")),
        }
    }
    let (n, k, c) = match (n, k, c) {
        (Some(n), Some(k), Some(c)) => (n, k, c),
        _ => return Err(malformed("header must contain N, K, and C")),
    };
    let info_set: Vec<usize> = lines
        .map(|l| l.trim().parse().map_err(|_| malformed("non-numeric index line")))
        .collect::<Result<_>>()?;
    PolarCode::new(n, k, c, info_set)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smallest_code_upgraded_channel() {
        assert_eq!(construct_info_set(2, 1, 0.0).unwrap(), vec![1]);
        assert_eq!(construct_info_set(2, 1, 5.0).unwrap(), vec![1]);
    }

    #[test]
    fn rate_one_code_takes_all_indices() {
        assert_eq!(construct_info_set(8, 8, 2.0).unwrap(), (0..8).collect::<Vec<_>>());
    }

    #[test]
    fn construction_is_deterministic_and_increasing() {
        let a = construct_info_set(256, 128, 1.5).unwrap();
        let b = construct_info_set(256, 128, 1.5).unwrap();
        assert_eq!(a, b);
        assert!(a.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn construction_rejects_out_of_range_k() {
        assert!(construct_info_set(8, 0, 2.0).is_err());
        assert!(construct_info_set(8, 9, 2.0).is_err());
    }

    #[test]
    fn encode_two_bit_kernel() {
        let code = PolarCode::new(2, 2, 0, vec![0, 1]).unwrap();
        assert_eq!(code.encode(&[0, 1]).unwrap(), vec![1, 1]);
        assert_eq!(code.encode(&[0, 0]).unwrap(), vec![0, 0]);
    }

    #[test]
    fn encode_all_zero_is_all_zero() {
        let code = PolarCode::construct(64, 32, 0, 2.0).unwrap();
        let x = code.encode(&vec![0u8; 64]).unwrap();
        assert!(x.iter().all(|&b| b == 0));
    }

    #[test]
    fn encode_rejects_nonzero_frozen() {
        let code = PolarCode::new(4, 1, 0, vec![3]).unwrap();
        let mut u = vec![0u8; 4];
        u[0] = 1;
        assert!(code.encode(&u).is_err());
    }

    #[test]
    fn insert_message_fixed_example() {
        let code = PolarCode::new(8, 4, 0, vec![3, 5, 6, 7]).unwrap();
        let u = code.insert_message(&[1, 0, 1, 1]).unwrap();
        assert_eq!(u, vec![0, 0, 0, 1, 0, 0, 1, 1]);
    }

    #[test]
    fn insert_message_no_frozen_bits_is_identity() {
        let code = PolarCode::new(4, 4, 0, vec![0, 1, 2, 3]).unwrap();
        let m = vec![1, 0, 0, 1];
        assert_eq!(code.insert_message(&m).unwrap(), m);
    }

    #[test]
    fn insert_message_length_checked() {
        let code = PolarCode::new(8, 4, 0, vec![3, 5, 6, 7]).unwrap();
        assert!(code.insert_message(&[1, 0]).is_err());
    }

    #[test]
    fn partition_spec_bookkeeping() {
        let code = PolarCode::construct(64, 16, 16, 2.0).unwrap();
        let n = code.block_len();
        // split after the 16th non-frozen position so both halves hold 16
        let part = PartitionSpec::new(&code, vec![code.info_set()[15], n - 1], vec![8, 8]).unwrap();
        assert_eq!(part.partition_count(), 2);
        assert_eq!(part.nonfrozen_len(0) + part.nonfrozen_len(1), code.info_len());
        assert_eq!(part.message_range(0).0, 0);
        assert_eq!(part.message_range(1).1, code.info_len());
    }

    #[test]
    fn partition_spec_rejects_bad_boundaries() {
        let code = PolarCode::construct(64, 16, 16, 2.0).unwrap();
        assert!(PartitionSpec::new(&code, vec![30, 62], vec![8, 8]).is_err());
        assert!(PartitionSpec::new(&code, vec![40, 31, 63], vec![8, 8, 0]).is_err());
        assert!(PartitionSpec::new(&code, vec![31, 63], vec![8, 7]).is_err());
        // First partition of an all-late info set has no non-frozen bits.
        let late = PolarCode::new(64, 4, 0, vec![60, 61, 62, 63]).unwrap();
        assert!(PartitionSpec::new(&late, vec![3, 63], vec![0, 0]).is_err());
    }

    #[test]
    fn message_word_checks_per_partition() {
        let code = PolarCode::construct(64, 16, 16, 2.0).unwrap();
        let part = PartitionSpec::new(&code, vec![code.info_set()[15], 63], vec![8, 8]).unwrap();
        let m: Vec<u8> = (0..16).map(|i| (i % 3 == 0) as u8).collect();
        let word = build_message_word(&m, &code, &part).unwrap();
        assert_eq!(word.with_crc.len(), 32);
        for p in 0..2 {
            let (lo, hi) = part.message_range(p);
            assert!(crate::crc::crc_check(&word.with_crc[lo..hi], part.crc_spec(p)).unwrap());
        }
    }

    #[test]
    fn info_set_file_round_trip() {
        let code = PolarCode::construct(128, 56, 8, 2.0).unwrap();
        let dir = std::env::temp_dir().join("psclf-info-set-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("info.txt");
        write_info_set_file(&path, &code).unwrap();
        let loaded = load_info_set_file(&path).unwrap();
        assert_eq!(loaded, code);
    }
}
