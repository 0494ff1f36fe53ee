//! C ABI over the psclf library: opaque handles, integer error codes, and
//! caller-owned buffers. The generated header lives in include/psclf.h.
//!
//! Every function returns `PSCLF_OK` (0) or a negative error code; decode
//! success/failure is reported through an out-parameter, not the return
//! value. Handles must be released with the matching `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::ptr;

use psclf::channel::LlrFrame;
use psclf::flip::{psclf_decode as decode_partitioned, DecodeStatus, FlipConfig};
use psclf::latency::{sc_partial_latency, scl_latency, LatencyParams};
use psclf::polar::{build_message_word, PartitionSpec, PolarCode};

pub const PSCLF_OK: i32 = 0;
pub const PSCLF_ERR_NULL_POINTER: i32 = -1;
pub const PSCLF_ERR_INVALID_ARGUMENT: i32 = -2;
pub const PSCLF_ERR_BUFFER_SIZE: i32 = -3;
pub const PSCLF_ERR_INTERNAL: i32 = -4;

/// Decode outcome reported through `psclf_decoder_run`.
pub const PSCLF_DECODE_SUCCESS: i32 = 0;
pub const PSCLF_DECODE_FAILURE: i32 = 1;

pub struct PsclfCode {
    code: PolarCode,
}

pub struct PsclfPartitions {
    partitions: PartitionSpec,
    block_len: usize,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(err: &psclf::Error) {
    let msg = CString::new(err.to_string()).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = msg);
}

fn fail(err: psclf::Error) -> i32 {
    set_error(&err);
    PSCLF_ERR_INVALID_ARGUMENT
}

/// Message of the most recent error on this thread; valid until the next
/// failing call. Never null.
#[no_mangle]
pub extern "C" fn psclf_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Construct a code of length `n` with `k` payload and `c` CRC bits, the
/// information set chosen at `design_snr_db`. On success `*out` owns the
/// handle.
#[no_mangle]
pub extern "C" fn psclf_code_new(
    n: usize,
    k: usize,
    c: usize,
    design_snr_db: f64,
    out: *mut *mut PsclfCode,
) -> i32 {
    if out.is_null() {
        return PSCLF_ERR_NULL_POINTER;
    }
    match PolarCode::construct(n, k, c, design_snr_db) {
        Ok(code) => {
            unsafe { *out = Box::into_raw(Box::new(PsclfCode { code })) };
            PSCLF_OK
        }
        Err(err) => fail(err),
    }
}

#[no_mangle]
pub extern "C" fn psclf_code_free(code: *mut PsclfCode) {
    if !code.is_null() {
        drop(unsafe { Box::from_raw(code) });
    }
}

#[no_mangle]
pub extern "C" fn psclf_code_block_len(code: *const PsclfCode) -> usize {
    if code.is_null() {
        return 0;
    }
    unsafe { &*code }.code.block_len()
}

#[no_mangle]
pub extern "C" fn psclf_code_payload_len(code: *const PsclfCode) -> usize {
    if code.is_null() {
        return 0;
    }
    unsafe { &*code }.code.payload_len()
}

/// Copy the information set into `out` (capacity `cap` indices); returns
/// the number of indices, or a negative error code if `cap` is too small.
#[no_mangle]
pub extern "C" fn psclf_code_info_set(code: *const PsclfCode, out: *mut usize, cap: usize) -> i32 {
    if code.is_null() || out.is_null() {
        return PSCLF_ERR_NULL_POINTER;
    }
    let info = unsafe { &*code }.code.info_set();
    if cap < info.len() {
        return PSCLF_ERR_BUFFER_SIZE;
    }
    unsafe { ptr::copy_nonoverlapping(info.as_ptr(), out, info.len()) };
    info.len() as i32
}

/// Partition structure from explicit boundaries `mu` (ascending, ending at
/// n-1) and per-partition CRC lengths, both of length `partition_count`.
#[no_mangle]
pub extern "C" fn psclf_partitions_new(
    code: *const PsclfCode,
    mu: *const usize,
    crc_lengths: *const usize,
    partition_count: usize,
    out: *mut *mut PsclfPartitions,
) -> i32 {
    if code.is_null() || mu.is_null() || crc_lengths.is_null() || out.is_null() {
        return PSCLF_ERR_NULL_POINTER;
    }
    let code = &unsafe { &*code }.code;
    let mu = unsafe { std::slice::from_raw_parts(mu, partition_count) }.to_vec();
    let crc = unsafe { std::slice::from_raw_parts(crc_lengths, partition_count) }.to_vec();
    match PartitionSpec::new(code, mu, crc) {
        Ok(partitions) => {
            unsafe {
                *out = Box::into_raw(Box::new(PsclfPartitions { partitions, block_len: code.block_len() }))
            };
            PSCLF_OK
        }
        Err(err) => fail(err),
    }
}

#[no_mangle]
pub extern "C" fn psclf_partitions_free(partitions: *mut PsclfPartitions) {
    if !partitions.is_null() {
        drop(unsafe { Box::from_raw(partitions) });
    }
}

/// Append per-partition CRCs to `payload` (k bits of 0/1), place the result
/// on the information set, and encode. `codeword` receives n bits.
#[no_mangle]
pub extern "C" fn psclf_encode(
    code: *const PsclfCode,
    partitions: *const PsclfPartitions,
    payload: *const u8,
    payload_len: usize,
    codeword: *mut u8,
    codeword_cap: usize,
) -> i32 {
    if code.is_null() || partitions.is_null() || payload.is_null() || codeword.is_null() {
        return PSCLF_ERR_NULL_POINTER;
    }
    let code = &unsafe { &*code }.code;
    let partitions = &unsafe { &*partitions }.partitions;
    if payload_len != code.payload_len() || codeword_cap < code.block_len() {
        return PSCLF_ERR_BUFFER_SIZE;
    }
    let payload = unsafe { std::slice::from_raw_parts(payload, payload_len) };
    let encoded = build_message_word(payload, code, partitions)
        .and_then(|word| code.insert_message(&word.with_crc))
        .and_then(|u| code.encode(&u));
    match encoded {
        Ok(x) => {
            unsafe { ptr::copy_nonoverlapping(x.as_ptr(), codeword, x.len()) };
            PSCLF_OK
        }
        Err(err) => fail(err),
    }
}

/// Run partitioned SCL flip decoding on `llrs` (n channel LLRs, positive
/// favoring bit 0). On `PSCLF_OK`, `*status` is PSCLF_DECODE_SUCCESS or
/// PSCLF_DECODE_FAILURE; on success `payload` receives the k decoded bits.
#[no_mangle]
pub extern "C" fn psclf_decoder_run(
    code: *const PsclfCode,
    partitions: *const PsclfPartitions,
    llrs: *const f64,
    llr_len: usize,
    list_size: usize,
    t_max: usize,
    alpha: f64,
    payload: *mut u8,
    payload_cap: usize,
    status: *mut i32,
) -> i32 {
    if code.is_null() || partitions.is_null() || llrs.is_null() || payload.is_null() || status.is_null() {
        return PSCLF_ERR_NULL_POINTER;
    }
    let code = &unsafe { &*code }.code;
    let spec = unsafe { &*partitions };
    if spec.block_len != code.block_len() {
        return PSCLF_ERR_INVALID_ARGUMENT;
    }
    if llr_len != code.block_len() || payload_cap < code.payload_len() {
        return PSCLF_ERR_BUFFER_SIZE;
    }
    let frame = LlrFrame(unsafe { std::slice::from_raw_parts(llrs, llr_len) }.to_vec());
    let flip = match FlipConfig::new(t_max, alpha) {
        Ok(f) => f,
        Err(err) => return fail(err),
    };
    match decode_partitioned(&frame, code, &spec.partitions, list_size, flip, None) {
        Ok(outcome) => {
            match outcome.status {
                DecodeStatus::Success => {
                    let u = outcome.decoded.expect("success carries a decoded word");
                    let m_prime = code.extract_message(&u);
                    let mut out = Vec::with_capacity(code.payload_len());
                    for p in 0..spec.partitions.partition_count() {
                        let (lo, _) = spec.partitions.message_range(p);
                        out.extend_from_slice(&m_prime[lo..lo + spec.partitions.payload_len(p)]);
                    }
                    unsafe {
                        ptr::copy_nonoverlapping(out.as_ptr(), payload, out.len());
                        *status = PSCLF_DECODE_SUCCESS;
                    }
                }
                DecodeStatus::Failure => unsafe { *status = PSCLF_DECODE_FAILURE },
            }
            PSCLF_OK
        }
        Err(err) => fail(err),
    }
}

/// Cycles for a semi-parallel SC decoder with `phi` processing elements to
/// emit leaf `i` of an n-leaf frame.
#[no_mangle]
pub extern "C" fn psclf_sc_partial_latency(n: usize, phi: usize, i: usize, out: *mut u64) -> i32 {
    if out.is_null() {
        return PSCLF_ERR_NULL_POINTER;
    }
    let cycles = LatencyParams::new(n, phi, 0).and_then(|p| sc_partial_latency(i, &p));
    match cycles {
        Ok(c) => {
            unsafe { *out = c };
            PSCLF_OK
        }
        Err(err) => fail(err),
    }
}

/// Full SCL latency: L_SC(n-1) plus one sorting cycle per non-frozen bit.
#[no_mangle]
pub extern "C" fn psclf_scl_latency(n: usize, phi: usize, info_size: usize, out: *mut u64) -> i32 {
    if out.is_null() {
        return PSCLF_ERR_NULL_POINTER;
    }
    match LatencyParams::new(n, phi, info_size) {
        Ok(p) => {
            unsafe { *out = scl_latency(&p) };
            PSCLF_OK
        }
        Err(err) => fail(err),
    }
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn psclf_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}
