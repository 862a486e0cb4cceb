/*
 * proxsim C API.
 *
 * The simulation-to-detection toolkit lives in libproxsim; this header is the
 * stable surface. A session wraps one run configuration (JSON text or file,
 * strict-parsed, unknown keys rejected). All heavy operations return an error
 * code and, on success, a heap string the caller releases with
 * proxsim_string_free().
 *
 * Error codes mirror the CLI exit codes:
 *   0 ok, 1 usage/config, 2 I/O, 3 internal.
 */
#ifndef PROXSIM_H
#define PROXSIM_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#define PROXSIM_OK 0
#define PROXSIM_ERR_CONFIG 1
#define PROXSIM_ERR_IO 2
#define PROXSIM_ERR_INTERNAL 3

typedef struct proxsim_session proxsim_session;

const char* proxsim_version(void);

/* config_json may be NULL or "{}" for the built-in defaults. */
int proxsim_session_create(const char* config_json, proxsim_session** out);
int proxsim_session_create_from_file(const char* path, proxsim_session** out);
void proxsim_session_destroy(proxsim_session* s);

/* Message for the last failing call on this session; never NULL. */
const char* proxsim_session_last_error(const proxsim_session* s);

/* Overrides applied on top of the loaded configuration. */
int proxsim_session_set_seed(proxsim_session* s, uint64_t master_seed);
int proxsim_session_set_scenarios_per_cell(proxsim_session* s, uint32_t n);

/* Canonical configuration echo / hash (hash is embedded in every output). */
int proxsim_session_config_json(const proxsim_session* s, char** out_json);
uint64_t proxsim_session_config_hash(const proxsim_session* s);

/* Generates the labeled dataset (CSV shards + manifest.json) under out_dir.
 * out_summary_json receives per-cell row counts and measured duty cycles. */
int proxsim_generate(proxsim_session* s, const char* out_dir, char** out_summary_json);

/* Builds and persists one feature view ("rf" | "kin" | "fused") from an
 * existing dataset directory. */
int proxsim_build_features(proxsim_session* s, const char* data_dir, const char* view,
                           const char* out_dir, char** out_summary_json);

/* Grouped split, forest training and evaluation for one view; writes
 * metrics/confusion/ROC/model files to out_dir and returns the metrics JSON. */
int proxsim_train_eval(proxsim_session* s, const char* data_dir, const char* view,
                       const char* out_dir, char** out_metrics_json);

/* Receiver-noise sensitivity sweep over sigma_grid (NULL to use the
 * configured grid); writes sweep.csv to out_dir and returns its contents. */
int proxsim_noise_sweep(proxsim_session* s, const char* out_dir, const double* sigma_grid,
                        size_t grid_len, char** out_sweep_csv);

/* Formats the metrics files found in in_dir as a plain-text table. */
int proxsim_report(proxsim_session* s, const char* in_dir, char** out_text);

void proxsim_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* PROXSIM_H */
