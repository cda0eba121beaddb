#ifndef CMDDE_H
#define CMDDE_H

/* C interface to the cmdde shared library. Objects are opaque handles; every
 * call returns a status code and records a message retrievable with
 * cmdde_last_error() on the calling thread. Strings returned through char**
 * out-parameters are owned by the caller and released with cmdde_string_free. */

#include <stddef.h>

#if defined(_WIN32)
#define CMDDE_API __declspec(dllexport)
#else
#define CMDDE_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cmdde_status {
  CMDDE_OK = 0,
  CMDDE_INVALID_ARGUMENT = 1,
  CMDDE_PARSE = 2,
  CMDDE_IO = 3,
  CMDDE_MATH = 4,
  CMDDE_INTERNAL = 5
} cmdde_status;

typedef struct cmdde_model cmdde_model;
typedef struct cmdde_analysis cmdde_analysis;

typedef struct cmdde_options {
  double hopf_tol;         /* tolerance on |F(i omega)| */
  const double* eps_grid;  /* NULL: model file block, else the default grid */
  size_t eps_count;
  const char* family;      /* NULL: model file block, else "scale-b" */
  int run_oracle;          /* nonzero runs the perturbation oracle */
} cmdde_options;

typedef struct cmdde_sweep_spec {
  const char* param; /* "j,k" or "B" */
  double min;
  double max;
  int points;
} cmdde_sweep_spec;

CMDDE_API const char* cmdde_version(void);

/* Message and kebab-case error name of the last failure on this thread. */
CMDDE_API const char* cmdde_last_error(void);
CMDDE_API const char* cmdde_last_error_name(void);
/* Time at which the last failed simulation diverged, NaN otherwise. */
CMDDE_API double cmdde_last_divergence_time(void);

/* 0 for CMDDE_OK, 2 for CMDDE_MATH, 1 otherwise. */
CMDDE_API int cmdde_exit_code(cmdde_status status);

CMDDE_API void cmdde_options_init(cmdde_options* opts);

CMDDE_API cmdde_status cmdde_model_from_json(const char* text, cmdde_model** out);
CMDDE_API cmdde_status cmdde_model_load(const char* path, cmdde_model** out);
CMDDE_API cmdde_status cmdde_model_create(double A, double B, double r, cmdde_model** out);
CMDDE_API cmdde_status cmdde_model_set_coefficient(cmdde_model* model, int j, int k, double value);
CMDDE_API cmdde_status cmdde_model_set_omega_hint(cmdde_model* model, double omega);
CMDDE_API void cmdde_model_free(cmdde_model* model);

/* opts may be NULL for defaults. */
CMDDE_API cmdde_status cmdde_analyze(const cmdde_model* model, const cmdde_options* opts,
                                     cmdde_analysis** out);
/* out[0..3] = Re w21(0), Im w21(0), Re w21(-r), Im w21(-r). */
CMDDE_API cmdde_status cmdde_analysis_w21(const cmdde_analysis* a, double out[4]);
CMDDE_API cmdde_status cmdde_analysis_l1(const cmdde_analysis* a, double* out);
CMDDE_API cmdde_status cmdde_analysis_omega(const cmdde_analysis* a, double* out);
/* CMDDE_INVALID_ARGUMENT when the oracle was not run. */
CMDDE_API cmdde_status cmdde_analysis_oracle_gap(const cmdde_analysis* a, double* out);
CMDDE_API cmdde_status cmdde_analysis_to_json(const cmdde_analysis* a, int include_timing,
                                              char** out);
CMDDE_API void cmdde_analysis_free(cmdde_analysis* a);

/* spec NULL uses the model file's sweep block. jobs >= 1. Either output
 * pointer may be NULL. */
CMDDE_API cmdde_status cmdde_sweep(const cmdde_model* model, const cmdde_sweep_spec* spec,
                                   int jobs, double hopf_tol, char** json_out, char** csv_out);

/* Perturbation oracle only; gap_out (nullable) receives |extrapolated - closed form|. */
CMDDE_API cmdde_status cmdde_perturb_check(const cmdde_model* model, const cmdde_options* opts,
                                           char** json_out, double* gap_out);

/* Full-equation simulation per the model file's simulate block. */
CMDDE_API cmdde_status cmdde_simulate(const cmdde_model* model, double hopf_tol, char** csv_out,
                                      char** json_out);

/* rect = {re_min, re_max, im_min, im_max}; NULL uses the default audit
 * rectangle around the model's Hopf frequency. */
CMDDE_API cmdde_status cmdde_count_roots(const cmdde_model* model, const double* rect,
                                         double hopf_tol, int* count);

CMDDE_API void cmdde_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* CMDDE_H */
