#ifndef DYNDIV_H
#define DYNDIV_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum {
  DYNDIV_STATUS_OK = 0,
  DYNDIV_STATUS_NULL_POINTER = 1,
  DYNDIV_STATUS_INVALID_UTF8 = 2,
  DYNDIV_STATUS_CONFIG = 3,
  DYNDIV_STATUS_NUMERICAL = 4,
  DYNDIV_STATUS_OUT_OF_RANGE = 5,
  DYNDIV_STATUS_INTERNAL = 6,
  DYNDIV_STATUS_PANIC = 7,
} DyndivStatus;

typedef enum {
  DYNDIV_VERDICT_NO = 0,
  DYNDIV_VERDICT_YES = 1,
  DYNDIV_VERDICT_UNKNOWN = 2,
  DYNDIV_VERDICT_INDETERMINATE = 3,
} DyndivVerdict;

// Opaque result of [`dyndiv_analyze`].
typedef struct DyndivReport DyndivReport;

// Verdicts at one grid time.
typedef struct {
  double t;
  DyndivVerdict cp;
  DyndivVerdict p;
  DyndivVerdict d;
} DyndivPoint;

// Verdicts over the whole grid plus oracle counts.
typedef struct {
  DyndivVerdict cp;
  DyndivVerdict p;
  DyndivVerdict d;
  size_t oracle_checks;
  size_t oracle_disagreements;
} DyndivSummary;

// Pointwise verdicts for a single rate vector.
typedef struct {
  DyndivVerdict cp;
  DyndivVerdict p;
  DyndivVerdict d;
} DyndivRateVerdict;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Parses a TOML configuration, runs the analysis and stores a new report
// in `*out`.
//
// # Safety
// `config_toml` must be a NUL-terminated string and `out` a valid pointer.
DyndivStatus dyndiv_analyze(const char *config_toml, DyndivReport **out);

// Releases a report. Null is ignored.
//
// # Safety
// `report` must come from [`dyndiv_analyze`] and not be used afterwards.
void dyndiv_report_free(DyndivReport *report);

// Number of grid points, or 0 for a null report.
//
// # Safety
// `report` must be null or a live report.
size_t dyndiv_report_len(const DyndivReport *report);

// # Safety
// `report` must be a live report and `out` a valid pointer.
DyndivStatus dyndiv_report_point(const DyndivReport *report, size_t index, DyndivPoint *out);

// # Safety
// `report` must be a live report and `out` a valid pointer.
DyndivStatus dyndiv_report_summary(const DyndivReport *report, DyndivSummary *out);

// Full JSON report; free the string with [`dyndiv_string_free`].
//
// # Safety
// `report` must be a live report and `out` a valid pointer.
DyndivStatus dyndiv_report_to_json(const DyndivReport *report, char **out);

// Timeline CSV; free the string with [`dyndiv_string_free`].
//
// # Safety
// `report` must be a live report and `out` a valid pointer.
DyndivStatus dyndiv_report_to_csv(const DyndivReport *report, char **out);

// Releases a string returned by this library. Null is ignored.
//
// # Safety
// `s` must come from this library and not be used afterwards.
void dyndiv_string_free(char *s);

// Pointwise verdicts for qubit Pauli rates `(γ₁, γ₂, γ₃)`.
//
// # Safety
// `rates` must point to 3 doubles and `out` be a valid pointer.
DyndivStatus dyndiv_classify_pauli(const double *rates, DyndivRateVerdict *out);

// Pointwise verdicts for generalized Pauli rates `γ₁ … γ_{d+1}`.
//
// # Safety
// `rates` must point to `len` doubles and `out` be a valid pointer.
DyndivStatus dyndiv_classify_gpc(const double *rates,
                                 size_t len,
                                 size_t dim,
                                 DyndivRateVerdict *out);

// Pointwise verdicts for phase-covariant rates `(γ₊, γ₋, γ₃)`.
//
// # Safety
// `rates` must point to 3 doubles and `out` be a valid pointer.
DyndivStatus dyndiv_classify_phasecov(const double *rates, DyndivRateVerdict *out);

// Message of the last failed call on this thread, or null. The pointer
// stays valid until the next library call on the same thread.
const char *dyndiv_last_error_message(void);

// Library version as a static string.
const char *dyndiv_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DYNDIV_H */
