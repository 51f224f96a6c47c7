#ifndef NANBU_H
#define NANBU_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum NanbuStatus {
  NANBU_STATUS_OK = 0,
  NANBU_STATUS_NULL_POINTER = 1,
  NANBU_STATUS_DOMAIN = 2,
  NANBU_STATUS_INPUT = 3,
  NANBU_STATUS_CAPACITY = 4,
  NANBU_STATUS_NUMERICAL = 5,
  NANBU_STATUS_CONFIG = 6,
  NANBU_STATUS_IO = 7,
  NANBU_STATUS_PANIC = 8,
} NanbuStatus;

typedef enum NanbuKernelFamily {
  NANBU_KERNEL_FAMILY_MAXWELL_MOLECULES = 0,
  NANBU_KERNEL_FAMILY_HARD_POTENTIAL = 1,
  NANBU_KERNEL_FAMILY_HARD_SPHERE = 2,
} NanbuKernelFamily;

/**
 * Opaque simulation state.
 */
typedef struct NanbuSim NanbuSim;

/**
 * Kernel |v−v_*|^γ β(θ). `gamma` is ignored for Maxwell molecules,
 * both exponents for hard spheres.
 */
typedef struct NanbuKernel {
  enum NanbuKernelFamily family;
  double gamma;
  double nu;
} NanbuKernel;

typedef struct NanbuVec3 {
  double x;
  double y;
  double z;
} NanbuVec3;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copy the last error message of this thread into `buf` (NUL-terminated,
 * truncated to `len`). Returns the full message length without the NUL,
 * 0 if no error was recorded.
 *
 * # Safety
 * `buf` must be null or point to `len` writable bytes.
 */
size_t nanbu_last_error_message(char *buf, size_t len);

/**
 * Library version as a static NUL-terminated string.
 */
const char *nanbu_version(void);

/**
 * New simulation of `n` particles with i.i.d. Gaussian initial velocities
 * (component standard deviation `sigma`) at cutoff `k`. Same seed, same
 * trajectory as the core simulator's replica 0.
 *
 * # Safety
 * `kernel` must be valid to read and `out` valid to write.
 */
enum NanbuStatus nanbu_sim_new(const struct NanbuKernel *kernel,
                               size_t n,
                               double k,
                               double sigma,
                               uint64_t seed,
                               struct NanbuSim **out);

/**
 * Apply every event with time ≤ `t`; the clock then reads `t`.
 *
 * # Safety
 * `sim` must come from [`nanbu_sim_new`] and not be freed.
 */
enum NanbuStatus nanbu_sim_run_until(struct NanbuSim *sim, double t);

/**
 * # Safety
 * `sim` must be a live handle; `out` valid to write.
 */
enum NanbuStatus nanbu_sim_time(const struct NanbuSim *sim, double *out);

/**
 * Events drawn so far, inert ones included.
 *
 * # Safety
 * `sim` must be a live handle; `out` valid to write.
 */
enum NanbuStatus nanbu_sim_events(const struct NanbuSim *sim, uint64_t *out);

/**
 * Copy the velocities into `out`, which must hold exactly N entries.
 *
 * # Safety
 * `sim` must be a live handle; `out` must point to `len` writable entries.
 */
enum NanbuStatus nanbu_sim_velocities(const struct NanbuSim *sim,
                                      struct NanbuVec3 *out,
                                      size_t len);

/**
 * # Safety
 * `sim` must be null or a handle from [`nanbu_sim_new`] not yet freed.
 */
void nanbu_sim_free(struct NanbuSim *sim);

/**
 * Deviation angle for the intensity coordinate `z` (relative speed 1).
 *
 * # Safety
 * Pointers must be valid.
 */
enum NanbuStatus nanbu_kernel_angle(const struct NanbuKernel *kernel, double z, double *out);

/**
 * Integrated (1 − cos θ) weight below the cutoff at relative speed `x`.
 *
 * # Safety
 * Pointers must be valid.
 */
enum NanbuStatus nanbu_kernel_weight_below(const struct NanbuKernel *kernel,
                                           double x,
                                           double k,
                                           double *out);

/**
 * Integrated (1 − cos θ) weight above the cutoff at relative speed `x`.
 *
 * # Safety
 * Pointers must be valid.
 */
enum NanbuStatus nanbu_kernel_weight_above(const struct NanbuKernel *kernel,
                                           double x,
                                           double k,
                                           double *out);

/**
 * Azimuth offsets aligning the frames of `x` and `y`.
 *
 * # Safety
 * Output pointers must be valid.
 */
enum NanbuStatus nanbu_tanaka_angles(struct NanbuVec3 x,
                                     struct NanbuVec3 y,
                                     double *phi0,
                                     double *phi1);

/**
 * Exact W₂² between two uniform clouds of `n` points each.
 *
 * # Safety
 * `a` and `b` must point to `n` readable entries; `out` valid to write.
 */
enum NanbuStatus nanbu_w2_exact(const struct NanbuVec3 *a,
                                const struct NanbuVec3 *b,
                                size_t n,
                                double *out);

/**
 * Exact W₂² between uniform clouds of sizes `n` and `m`.
 *
 * # Safety
 * `a` must point to `n`, `b` to `m` readable entries; `out` valid to write.
 */
enum NanbuStatus nanbu_w2_unequal(const struct NanbuVec3 *a,
                                  size_t n,
                                  const struct NanbuVec3 *b,
                                  size_t m,
                                  double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* NANBU_H */
