/* C interface to the exciton-phonon transfer library. */
#ifndef QST_QST_H
#define QST_QST_H

#include <stddef.h>

#if defined(QST_BUILDING_LIBRARY)
#define QST_API __attribute__((visibility("default")))
#else
#define QST_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
    QST_OK = 0,
    QST_ERR_CONFIG = 1,
    QST_ERR_NUMERICAL = 2,
    QST_ERR_VALIDATION = 3,
    QST_ERR_ARGUMENT = 4,
    QST_ERR_INTERNAL = 5
} qst_status;

typedef struct qst_config qst_config;
typedef struct qst_result qst_result;

QST_API const char* qst_version(void);

/* Message for the last failing call on this thread; empty string if none. */
QST_API const char* qst_last_error(void);

/* Configuration starts from the built-in defaults. */
QST_API qst_status qst_config_create(qst_config** out);
QST_API void qst_config_destroy(qst_config* cfg);

/* Apply "key = value" lines. */
QST_API qst_status qst_config_parse(qst_config* cfg, const char* text);
QST_API qst_status qst_config_set(qst_config* cfg, const char* key, const char* value);

/* Resolved configuration as text. The buffer is owned by cfg and lives until the next call on it. */
QST_API qst_status qst_config_echo(qst_config* cfg, const char** text);

/* Configuration keys, in echo order. Returns NULL past the end. */
QST_API size_t qst_config_key_count(void);
QST_API const char* qst_config_key(size_t i);

/* Derived quantity by name: E_B_cm, Omega_c_cm, Omega_cm, eta_cm, g_cm, Delta_N, E_bar_cm,
   Delta_omega_cm, beta_Omega, n_bar, L_star. */
QST_API qst_status qst_config_derived(const qst_config* cfg, const char* name, double* value);

/* Run a subcommand: spectrum, crossing, shifts, propagate, sweep-eps, sweep-temp, analytic, validate.
   A failed validation still yields a result and returns QST_ERR_VALIDATION. */
QST_API qst_status qst_run(const qst_config* cfg, const char* subcommand, qst_result** out);
QST_API void qst_result_destroy(qst_result* res);

QST_API size_t qst_result_table_count(const qst_result* res);
QST_API const char* qst_result_table_name(const qst_result* res, size_t table);
QST_API size_t qst_result_rows(const qst_result* res, size_t table);
QST_API size_t qst_result_cols(const qst_result* res, size_t table);
QST_API const char* qst_result_column_name(const qst_result* res, size_t table, size_t col);
/* Numeric cell; text cells give QST_ERR_ARGUMENT. */
QST_API qst_status qst_result_value(const qst_result* res, size_t table, size_t row, size_t col, double* value);
/* Any cell rendered as text; owned by res. */
QST_API const char* qst_result_cell(const qst_result* res, size_t table, size_t row, size_t col);
QST_API qst_status qst_result_write_csv(const qst_result* res, size_t table, const char* path);

/* G(t) for the first configured engine at the given times (units of 1/Phi). */
QST_API qst_status qst_propagate(const qst_config* cfg, const double* times_phi, size_t n, double* re, double* im);

#ifdef __cplusplus
}
#endif

#endif
