//! Per-partition CRC encoding/checking and CRC-bit allocation.
//!
//! Plain polynomial division over GF(2): zero initial value, no final XOR,
//! no reflection. All functions are stateless and thread-safe.

use crate::error::{Error, Result};

/// A CRC generator polynomial of the given degree. The leading coefficient
/// is implicit; `poly` holds the low `length` coefficient bits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrcSpec {
    length: usize,
    poly: u64,
}

impl CrcSpec {
    pub fn new(length: usize, poly: u64) -> Result<Self> {
        if length > 63 {
            return Err(Error::invalid("crc_length", format!("{length} > 63 unsupported")));
        }
        if length > 0 && poly >> length != 0 {
            return Err(Error::invalid("crc_poly", "coefficients exceed the stated degree"));
        }
        Ok(Self { length, poly })
    }

    /// Default generator for each supported length. A zero length is a
    /// degenerate always-passing CRC.
    pub fn standard(length: usize) -> Result<Self> {
        let poly = match length {
            0 => 0,
            3 => 0x3,
            7 => 0x09,
            8 => 0x07,
            10 => 0x233,
            11 => 0x385,
            16 => 0x1021,
            32 => 0x04C1_1DB7,
            _ => {
                return Err(Error::invalid(
                    "crc_length",
                    format!("no default generator for length {length}"),
                ))
            }
        };
        Ok(Self { length, poly })
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn poly(&self) -> u64 {
        self.poly
    }

    /// Remainder of `bits * x^length` modulo the generator, MSB first.
    fn remainder(&self, bits: &[u8]) -> Vec<u8> {
        if self.length == 0 {
            return Vec::new();
        }
        let mask = (1u64 << self.length) - 1;
        let top = 1u64 << (self.length - 1);
        let mut reg = 0u64;
        for &bit in bits {
            let feedback = ((reg & top) != 0) ^ (bit != 0);
            reg = (reg << 1) & mask;
            if feedback {
                reg ^= self.poly;
            }
        }
        (0..self.length)
            .rev()
            .map(|i| ((reg >> i) & 1) as u8)
            .collect()
    }
}

/// Append the CRC remainder to a payload.
pub fn crc_append(payload: &[u8], spec: &CrcSpec) -> Vec<u8> {
    let mut out = payload.to_vec();
    out.extend(spec.remainder(payload));
    out
}

/// True iff the segment is a multiple of the generator.
pub fn crc_check(segment: &[u8], spec: &CrcSpec) -> Result<bool> {
    if segment.len() <= spec.length() {
        return Err(Error::LengthMismatch {
            expected: spec.length() + 1,
            got: segment.len(),
        });
    }
    if spec.length() == 0 {
        return Ok(true);
    }
    let (payload, tail) = segment.split_at(segment.len() - spec.length());
    Ok(spec.remainder(payload) == tail)
}

/// Floor-plus-remainder CRC allocation: every partition gets `floor` bits
/// and the remainder goes to the partition with the largest first-error
/// probability, ties toward the last partition.
pub fn allocate_crc_structure(
    c_total: usize,
    partitions: usize,
    error_probs: &[f64],
    floor: usize,
) -> Result<Vec<usize>> {
    if partitions == 0 || error_probs.len() != partitions {
        return Err(Error::invalid("P", "partition count and probability list must match"));
    }
    if c_total < partitions * floor {
        return Err(Error::InfeasibleCrcAllocation {
            total: c_total,
            partitions,
            floor,
        });
    }
    let sum: f64 = error_probs.iter().sum();
    if (sum - 1.0).abs() > 1e-9 {
        return Err(Error::invalid("error_probs", format!("sum {sum} != 1")));
    }
    let mut lengths = vec![floor; partitions];
    let mut argmax = 0usize;
    for (p, &prob) in error_probs.iter().enumerate() {
        if prob >= error_probs[argmax] {
            argmax = p;
        }
    }
    lengths[argmax] += c_total - partitions * floor;
    Ok(lengths)
}

/// Parse a comma list such as "7,7,7,11".
pub fn parse_crc_list(text: &str) -> Result<Vec<usize>> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse()
                .map_err(|_| Error::invalid("crc_list", format!("bad entry {s:?}")))
        })
        .collect()
}
