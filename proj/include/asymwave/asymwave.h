/* C interface to the asymwave library.
 *
 * Every function returning aw_status leaves a message retrievable with
 * aw_last_error() (thread-local) when the status is not AW_OK. Handles are
 * opaque and must be released with their matching *_destroy function;
 * strings returned through char** must be released with aw_string_free.
 */
#ifndef ASYMWAVE_H
#define ASYMWAVE_H

#include <stddef.h>
#include <stdint.h>

#if defined(ASYMWAVE_BUILDING_LIBRARY)
#define AW_API __attribute__((visibility("default")))
#else
#define AW_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum aw_status {
  AW_OK = 0,
  AW_ERR_INVALID_ARGUMENT = 1,
  AW_ERR_DOMAIN = 2,
  AW_ERR_UNSOLVABLE = 3,
  AW_ERR_NUMERIC = 4,
  AW_ERR_NOT_CONVERGED = 5,
  AW_ERR_IO = 6,
  AW_ERR_INTERNAL = 7
} aw_status;

typedef enum aw_verdict {
  AW_VERDICT_NO_NONTRIVIAL_SOLUTIONS = 0,
  AW_VERDICT_SYMMETRIC_ONLY = 1,
  AW_VERDICT_NO_ASYMMETRIC = 2,
  AW_VERDICT_CANDIDATE_ASYMMETRIC = 3,
  AW_VERDICT_INCONCLUSIVE = 4
} aw_verdict;

typedef enum aw_format { AW_FORMAT_CSV = 0, AW_FORMAT_JSON = 1 } aw_format;

typedef struct aw_model aw_model;
typedef struct aw_report aw_report;
typedef struct aw_scan aw_scan;
typedef struct aw_verify aw_verify;

typedef struct aw_options {
  double zero_threshold;  /* default 1e-10 */
  int max_order;          /* default 40 */
  int k_check;            /* 0: 16 * k2 */
  int include_noncoprime; /* scans only */
} aw_options;

typedef struct aw_verify_config {
  int k1, k2;      /* default 2, 3 */
  int modes;       /* 0: 8 (k1 + k2) */
  int order;       /* default 3 */
  uint64_t seed;   /* default 1 */
  double T, d;     /* whitham-fin values for the depth suite; default 1, 2 */
} aw_verify_config;

AW_API const char* aw_last_error(void);
AW_API const char* aw_version(void);
AW_API const char* aw_verdict_name(aw_verdict v);
AW_API void aw_string_free(char* s);

/* id: whitham-fin | whitham-inf | babenko-inf | babenko-fin */
AW_API aw_status aw_model_create(const char* id, aw_model** out);
AW_API void aw_model_destroy(aw_model* model);
AW_API aw_status aw_model_id(const aw_model* model, const char** out);
AW_API aw_status aw_model_parameter_count(const aw_model* model, size_t* out);
AW_API aw_status aw_model_parameter_name(const aw_model* model, size_t i, const char** out);
AW_API aw_status aw_model_fixed_count(const aw_model* model, size_t* out);
AW_API aw_status aw_model_fixed_name(const aw_model* model, size_t i, const char** out);
/* Sets a parameter held fixed while solving for the kernel point. */
AW_API aw_status aw_model_set_fixed(aw_model* model, const char* name, double value);

/* l_mu(k) with mu in the model's parameter order. */
AW_API aw_status aw_linear_symbol(const aw_model* model, const double* mu, size_t n_mu, long k,
                                  double* out);
/* Writes the kernel parameters mu0 (parameter order) into mu_out[0..n). */
AW_API aw_status aw_solve_kernel(const aw_model* model, int k1, int k2, double* mu_out,
                                 size_t capacity, size_t* n_out);
AW_API aw_status aw_resonance_coefficient(const aw_model* model, int k1, int k2, double* value,
                                          double* order_scale);

AW_API void aw_options_default(aw_options* options);

/* options may be NULL for defaults. */
AW_API aw_status aw_classify(const aw_model* model, int k1, int k2, const aw_options* options,
                             aw_report** out);
AW_API void aw_report_destroy(aw_report* report);
AW_API aw_status aw_report_verdict(const aw_report* report, aw_verdict* out);
AW_API aw_status aw_report_render(const aw_report* report, aw_format format, char** out);

AW_API aw_status aw_scan_run(const aw_model* model, int kmax, const aw_options* options,
                             aw_scan** out);
AW_API void aw_scan_destroy(aw_scan* scan);
AW_API aw_status aw_scan_count(const aw_scan* scan, size_t* out);
AW_API aw_status aw_scan_count_inconclusive(const aw_scan* scan, size_t* out);
AW_API aw_status aw_scan_render(const aw_scan* scan, aw_format format, char** out);

AW_API void aw_verify_config_default(aw_verify_config* config);
/* suite: scaling | factorization | gradient | depth | oracle | all */
AW_API aw_status aw_verify_run(const aw_model* model, const char* suite,
                               const aw_verify_config* config, aw_verify** out);
AW_API void aw_verify_destroy(aw_verify* result);
AW_API aw_status aw_verify_count(const aw_verify* result, size_t* out);
AW_API aw_status aw_verify_check(const aw_verify* result, size_t i, const char** name,
                                 int* passed, const char** detail);
AW_API aw_status aw_verify_all_passed(const aw_verify* result, int* out);

#ifdef __cplusplus
}
#endif

#endif /* ASYMWAVE_H */
