#ifndef PSCLF_H
#define PSCLF_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

#define PSCLF_OK 0

#define PSCLF_ERR_NULL_POINTER -1

#define PSCLF_ERR_INVALID_ARGUMENT -2

#define PSCLF_ERR_BUFFER_SIZE -3

#define PSCLF_ERR_INTERNAL -4

/**
 * Decode outcome reported through `psclf_decoder_run`.
 */
#define PSCLF_DECODE_SUCCESS 0

#define PSCLF_DECODE_FAILURE 1

typedef struct PsclfCode PsclfCode;

typedef struct PsclfPartitions PsclfPartitions;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the most recent error on this thread; valid until the next
 * failing call. Never null.
 */
const char *psclf_last_error_message(void);

/**
 * Construct a code of length `n` with `k` payload and `c` CRC bits, the
 * information set chosen at `design_snr_db`. On success `*out` owns the
 * handle.
 */
int32_t psclf_code_new(uintptr_t n,
                       uintptr_t k,
                       uintptr_t c,
                       double design_snr_db,
                       struct PsclfCode **out);

void psclf_code_free(struct PsclfCode *code);

uintptr_t psclf_code_block_len(const struct PsclfCode *code);

uintptr_t psclf_code_payload_len(const struct PsclfCode *code);

/**
 * Copy the information set into `out` (capacity `cap` indices); returns
 * the number of indices, or a negative error code if `cap` is too small.
 */
int32_t psclf_code_info_set(const struct PsclfCode *code, uintptr_t *out, uintptr_t cap);

/**
 * Partition structure from explicit boundaries `mu` (ascending, ending at
 * n-1) and per-partition CRC lengths, both of length `partition_count`.
 */
int32_t psclf_partitions_new(const struct PsclfCode *code,
                             const uintptr_t *mu,
                             const uintptr_t *crc_lengths,
                             uintptr_t partition_count,
                             struct PsclfPartitions **out);

void psclf_partitions_free(struct PsclfPartitions *partitions);

/**
 * Append per-partition CRCs to `payload` (k bits of 0/1), place the result
 * on the information set, and encode. `codeword` receives n bits.
 */
int32_t psclf_encode(const struct PsclfCode *code,
                     const struct PsclfPartitions *partitions,
                     const uint8_t *payload,
                     uintptr_t payload_len,
                     uint8_t *codeword,
                     uintptr_t codeword_cap);

/**
 * Run partitioned SCL flip decoding on `llrs` (n channel LLRs, positive
 * favoring bit 0). On `PSCLF_OK`, `*status` is PSCLF_DECODE_SUCCESS or
 * PSCLF_DECODE_FAILURE; on success `payload` receives the k decoded bits.
 */
int32_t psclf_decoder_run(const struct PsclfCode *code,
                          const struct PsclfPartitions *partitions,
                          const double *llrs,
                          uintptr_t llr_len,
                          uintptr_t list_size,
                          uintptr_t t_max,
                          double alpha,
                          uint8_t *payload,
                          uintptr_t payload_cap,
                          int32_t *status);

/**
 * Cycles for a semi-parallel SC decoder with `phi` processing elements to
 * emit leaf `i` of an n-leaf frame.
 */
int32_t psclf_sc_partial_latency(uintptr_t n, uintptr_t phi, uintptr_t i, uint64_t *out);

/**
 * Full SCL latency: L_SC(n-1) plus one sorting cycle per non-frozen bit.
 */
int32_t psclf_scl_latency(uintptr_t n, uintptr_t phi, uintptr_t info_size, uint64_t *out);

/**
 * Library version as a static NUL-terminated string.
 */
const char *psclf_version(void);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* PSCLF_H */
