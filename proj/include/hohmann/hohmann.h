#ifndef HOHMANN_H
#define HOHMANN_H

/* C interface of libhohmann.
 *
 * Every function returns a status code; on failure a message is available
 * from hohmann_last_error() until the next call on the same thread. Strings
 * returned through `char**` are owned by the caller and released with
 * hohmann_string_free(). Handles are released with their *_free function.
 */

#include <stddef.h>

#if defined(_WIN32)
#define HOHMANN_API __declspec(dllexport)
#else
#define HOHMANN_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum hohmann_status {
  HOHMANN_OK = 0,
  HOHMANN_E_INTERNAL = 1,
  HOHMANN_E_CONFIG = 2,
  HOHMANN_E_NONCONVERGENCE = 3,
  HOHMANN_E_VERIFICATION = 4,
  HOHMANN_E_DOMAIN = 5,
  HOHMANN_E_ARGUMENT = 6
} hohmann_status;

typedef struct hohmann_config hohmann_config;
typedef struct hohmann_summary hohmann_summary;
typedef struct hohmann_report hohmann_report;

HOHMANN_API const char* hohmann_version(void);
HOHMANN_API const char* hohmann_last_error(void);
HOHMANN_API const char* hohmann_status_name(int status);
HOHMANN_API void hohmann_string_free(char* s);

/* Scenario configs */
HOHMANN_API int hohmann_config_parse(const char* text, hohmann_config** out);
HOHMANN_API int hohmann_config_load(const char* path, hohmann_config** out);
HOHMANN_API int hohmann_config_preset(const char* name, hohmann_config** out);
/* Sets one key as if it appeared in the config text; the result is revalidated. */
HOHMANN_API int hohmann_config_set(hohmann_config* config, const char* key, const char* value);
HOHMANN_API int hohmann_config_serialize(const hohmann_config* config, char** out_text);
HOHMANN_API void hohmann_config_free(hohmann_config* config);

HOHMANN_API size_t hohmann_preset_count(void);
/* NULL when index is out of range. The pointer stays valid for the process. */
HOHMANN_API const char* hohmann_preset_name(size_t index);

/* Runs a scenario, writing its artifacts into out_dir. With verbose != 0 the
 * solver and verification lines are echoed to stdout. Solver nonconvergence
 * and verification failures still produce a summary. */
HOHMANN_API int hohmann_run(const hohmann_config* config, const char* out_dir, int verbose,
                            hohmann_summary** out);
HOHMANN_API int hohmann_summary_json(const hohmann_summary* summary, char** out_json);
HOHMANN_API int hohmann_summary_text(const hohmann_summary* summary, char** out_text);
HOHMANN_API void hohmann_summary_free(hohmann_summary* summary);

/* Acceptance suite. filter: NULL, "" or "all", or a list such as "1,3,7-9".
 * Returns HOHMANN_E_VERIFICATION when any selected criterion fails. */
HOHMANN_API int hohmann_verify(const char* filter, int verbose, hohmann_report** out);
HOHMANN_API size_t hohmann_report_count(const hohmann_report* report);
HOHMANN_API int hohmann_report_item(const hohmann_report* report, size_t index, int* id,
                                    int* passed, const char** line);
HOHMANN_API int hohmann_report_text(const hohmann_report* report, char** out_text);
HOHMANN_API void hohmann_report_free(hohmann_report* report);

/* Closed-form stationary points over n log-spaced ratios in [lo, hi], lo > 1.
 * The CSV is written to csv_path when it is not NULL and returned through
 * out_csv when that is not NULL. */
HOHMANN_API int hohmann_sweep(double lo, double hi, size_t n, const char* csv_path,
                              char** out_csv);

/* Hohmann impulses (in the orbital plane, first impulse at (r0, 0, 0)) and
 * transfer time. */
HOHMANN_API int hohmann_analytic_plan(double mu, double r0, double rf, double dv0[3],
                                      double dv1[3], double* transfer_time);

/* Nondimensional stationary points at rbar_f: each array holds
 * {x0, y0, lambda, yf, cost}. */
HOHMANN_API int hohmann_stationary_points(double rbar_f, double prograde[5],
                                          double retrograde[5]);

#ifdef __cplusplus
}
#endif

#endif
