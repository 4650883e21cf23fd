/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#ifndef MRE_H
#define MRE_H

#include <stddef.h>
#include <stdint.h>

// Values accepted by the `convention` parameters.
typedef enum MreConvention {
  MRE_CONVENTION_PAIRING = 0,
  MRE_CONVENTION_PRINTED = 1,
} MreConvention;

typedef enum MreStatus {
  MRE_STATUS_OK = 0,
  MRE_STATUS_NULL_POINTER = 1,
  MRE_STATUS_INVALID_INPUT = 2,
  MRE_STATUS_UNSUPPORTED_SIZE = 3,
  MRE_STATUS_NUMERICAL = 4,
  MRE_STATUS_PANIC = 5,
} MreStatus;

// Values accepted by the `surrogate` parameter.
typedef enum MreSurrogate {
  MRE_SURROGATE_CONDITIONAL = 0,
  MRE_SURROGATE_MINIMIZED = 1,
} MreSurrogate;

// Opaque density matrix.
typedef struct MreDensity MreDensity;

// Opaque pure state.
typedef struct MreState MreState;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Builds a pure state from `len = 2^n_qubits` amplitudes split into real
// and imaginary parts. Amplitudes within `1e-4` of unit norm are
// renormalized.
//
// # Safety
// `re` and `im` must point to `len` doubles; `out` must be writable.
enum MreStatus mre_state_new(uintptr_t n_qubits,
                             const double *re,
                             const double *im,
                             uintptr_t len,
                             struct MreState **out);

// # Safety
// `state` must be null or come from [`mre_state_new`] and not be freed twice.
void mre_state_free(struct MreState *state);

// # Safety
// `state` must be a live handle; `out` must be writable.
enum MreStatus mre_state_num_qubits(const struct MreState *state, uintptr_t *out);

// MRE of a pure state.
//
// # Safety
// `state` must be a live handle; `out` must be writable.
enum MreStatus mre_state_pure(const struct MreState *state, int32_t convention, double *out);

// Assistant upper bound `E_AIR` of a pure state.
//
// # Safety
// `state` must be a live handle; `out` must be writable.
enum MreStatus mre_state_assistant(const struct MreState *state,
                                   int32_t convention,
                                   int32_t surrogate,
                                   double *out);

// Builds a density matrix from `len = 4^n_qubits` row-major entries.
//
// # Safety
// `re` and `im` must point to `len` doubles; `out` must be writable.
enum MreStatus mre_density_new(uintptr_t n_qubits,
                               const double *re,
                               const double *im,
                               uintptr_t len,
                               struct MreDensity **out);

// # Safety
// `density` must be null or come from [`mre_density_new`] and not be freed twice.
void mre_density_free(struct MreDensity *density);

// Decomposition-minimized MRE of a mixed state. `restarts = 0` uses the
// default.
//
// # Safety
// `density` must be a live handle; `out` must be writable.
enum MreStatus mre_density_mixed(const struct MreDensity *density,
                                 int32_t convention,
                                 uint64_t seed,
                                 uintptr_t restarts,
                                 double *out);

// `k_n` as an exact fraction.
//
// # Safety
// `numerator` and `denominator` must be writable.
enum MreStatus mre_kn(uintptr_t n, int32_t convention, uint64_t *numerator, uint64_t *denominator);

// # Safety
// `out` must be writable.
enum MreStatus mre_binary_entropy(double x, double *out);

// Message for the most recent failure on this thread; empty if none. The
// pointer stays valid until the next failing call on the same thread.
const char *mre_last_error(void);

const char *mre_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MRE_H */
