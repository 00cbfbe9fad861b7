#ifndef COSMIC_CODE_H
#define COSMIC_CODE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Number of entries written by [`cc_boson_ladder`].
 */
#define CC_LADDER_LEN 14

typedef enum {
  CC_GAP_SATISFIED = 0,
  CC_GAP_BOUNDARY = 1,
  CC_GAP_COMPLETE_ATTACHMENT = 2,
  CC_GAP_COMPLETE_DETACHMENT = 3,
  CC_GAP_BELOW_BOUND = 4,
} CcGap;

typedef enum {
  CC_STATUS_OK = 0,
  CC_STATUS_NULL_POINTER = 1,
  CC_STATUS_INVALID_ARGUMENT = 2,
  CC_STATUS_OUT_OF_RANGE = 3,
  CC_STATUS_PARSE = 4,
  CC_STATUS_STAGE = 5,
  CC_STATUS_BUFFER_TOO_SMALL = 6,
  CC_STATUS_PANIC = 7,
} CcStatus;

typedef struct CcConstants CcConstants;

typedef struct CcReport CcReport;

typedef struct CcWavefunction CcWavefunction;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Last error message on this thread, or NULL. The pointer stays valid until
 * the next failing call on the same thread.
 */
const char *cc_last_error_message(void);

/**
 * Engine version as a static NUL-terminated string.
 */
const char *cc_version(void);

CcConstants *cc_constants_new_default(void);

/**
 * Parses a constants JSON document. An empty string yields the defaults.
 */
CcStatus cc_constants_from_json(const char *json, CcConstants **out);

void cc_constants_free(CcConstants *c);

double cc_constants_alpha(const CcConstants *c);

CcStatus cc_alpha_power(const CcConstants *c, int32_t k, double *out);

CcStatus cc_qvsl_speed(const CcConstants *c, int32_t spacetime_dim, double *out);

CcStatus cc_superluminal_energy(const CcConstants *c,
                                double m0,
                                int32_t spacetime_dim,
                                double *out);

CcStatus cc_effective_rest_mass(const CcConstants *c, double m0, int32_t mass_dim, double *out);

/**
 * Writes the ladder masses F5, B5, …, F11, B11 (GeV) into `out`, which
 * must hold at least `CC_LADDER_LEN` doubles.
 */
CcStatus cc_boson_ladder(const CcConstants *c, double *out, size_t len);

/**
 * Number of dimensional orbitals produced by fissioning a `d` particle by `n`.
 */
CcStatus cc_leap_fission_orbitals(int32_t mass_dim, uint8_t n, uint8_t *out_count);

CcStatus cc_gap_check(const CcConstants *c, double dx, double dp, CcGap *out);

/**
 * Builds a wavefunction from `len` attachment weights, each in (0, 1).
 */
CcStatus cc_wavefunction_new(const double *weights, size_t len, CcWavefunction **out);

void cc_wavefunction_free(CcWavefunction *wf);

size_t cc_wavefunction_len(const CcWavefunction *wf);

CcStatus cc_wavefunction_density(const CcWavefunction *wf, double *out, size_t len);

/**
 * Collapses onto an explicit cell.
 */
CcStatus cc_wavefunction_collapse_at(const CcWavefunction *wf, size_t index, size_t *out_index);

/**
 * Seeded collapse; the same seed always selects the same cell.
 */
CcStatus cc_wavefunction_decohere(const CcWavefunction *wf, uint64_t seed, size_t *out_index);

/**
 * Parses and runs a scenario document (all sections).
 */
CcStatus cc_scenario_run(const char *json, CcReport **out);

/**
 * Report as JSON; owned by the handle and valid until it is freed.
 */
const char *cc_report_json(const CcReport *report);

CcStatus cc_report_dark_to_baryonic(const CcReport *report, double *out);

void cc_report_free(CcReport *report);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* COSMIC_CODE_H */
