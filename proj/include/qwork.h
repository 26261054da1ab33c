#ifndef QWORK_H
#define QWORK_H

#include <stddef.h>
#include <stdint.h>

#if defined(QWORK_BUILDING_LIBRARY)
#define QW_API __attribute__((visibility("default")))
#else
#define QW_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qw_status {
  QW_OK = 0,
  QW_ERR_PARSE = 1,
  QW_ERR_VALIDATION = 2,
  QW_ERR_SCHEME = 3,
  QW_ERR_ARGUMENT = 4,
  QW_ERR_IO = 5,
  QW_ERR_INTERNAL = 6
} qw_status;

typedef struct qw_scenario qw_scenario;
typedef struct qw_distribution qw_distribution;

QW_API const char* qw_version(void);

/* Details of the last failure on the calling thread. Empty strings when the
   last call succeeded. The path names the offending scenario field. */
QW_API const char* qw_last_error(void);
QW_API const char* qw_last_error_code(void);
QW_API const char* qw_last_error_path(void);

/* Strings returned through char** are owned by the caller. */
QW_API void qw_string_free(char* s);

QW_API qw_status qw_scenario_parse(const char* json, qw_scenario** out);
QW_API qw_status qw_scenario_load(const char* path, qw_scenario** out);
/* Random GUE H, H', Haar U (or a linear ramp when protocol != 0) and a
   random density matrix (diagonal in H when coherent == 0). */
QW_API qw_status qw_scenario_random(size_t dim, uint64_t seed, int coherent, int protocol, qw_scenario** out);
QW_API qw_status qw_scenario_to_json(const qw_scenario* s, char** out);
QW_API size_t qw_scenario_dim(const qw_scenario* s);
QW_API qw_status qw_scenario_mean_energy_change(const qw_scenario* s, double* out);
QW_API void qw_scenario_free(qw_scenario* s);

typedef struct qw_scheme_options {
  int has_lambda;
  double lambda;     /* collective; λ_max when has_lambda == 0 */
  int ch_steps;      /* consistent histories K */
  int has_pointer;
  double coupling;   /* pointer g; weak regime when has_pointer == 0 */
  double spread;     /* pointer s */
  int has_decomposition_seed;
  uint64_t decomposition_seed;
  size_t decomposition_states;
} qw_scheme_options;

QW_API void qw_scheme_options_init(qw_scheme_options* opts);

/* scheme: tpm, work-operator, fcs, mh, ch, state-dependent, sub-ensemble,
   collective, gaussian, post-selection. opts may be NULL. */
QW_API qw_status qw_distribution_compute(const qw_scenario* s, const char* scheme, const qw_scheme_options* opts,
                                         qw_distribution** out);
QW_API size_t qw_distribution_size(const qw_distribution* d);
QW_API qw_status qw_distribution_atom(const qw_distribution* d, size_t i, double* work, double* weight);
QW_API int qw_distribution_is_quasi(const qw_distribution* d);
QW_API double qw_distribution_mean(const qw_distribution* d);
QW_API qw_status qw_distribution_to_csv(const qw_distribution* d, char** out);
QW_API qw_status qw_distribution_to_json(const qw_distribution* d, char** out);
QW_API void qw_distribution_free(qw_distribution* d);

/* Reports are JSON documents carrying tool version, seed and tolerances.
   condition: "C1", "C2", "C3" or NULL for all three. */
QW_API qw_status qw_audit_run(const char* scheme, const char* condition, size_t dim, size_t samples, uint64_t seed,
                              char** out_json);
QW_API qw_status qw_table1_run(size_t dim, size_t samples, uint64_t seed, int supplementary, char** out_json);
QW_API qw_status qw_nogo_run(size_t dim, uint64_t seed, size_t samples, char** out_json);
QW_API qw_status qw_witness_run(size_t budget, uint64_t seed, char** out_json);
/* all_passed may be NULL. */
QW_API qw_status qw_thermo_run(uint64_t seed, size_t draws, char** out_json, int* all_passed);
QW_API qw_status qw_pointer_sweep(const qw_scenario* s, size_t points, char** out_json);

#ifdef __cplusplus
}
#endif

#endif
