#ifndef KAEHLER_KAEHLER_H
#define KAEHLER_KAEHLER_H

/* C interface to the kaehler verification library. Handles are opaque;
 * every fallible call returns a kf_status and records a message retrievable
 * with kf_last_error() on the calling thread. Strings returned through char**
 * out-parameters are owned by the caller and released with kf_string_free. */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(KAEHLER_BUILDING_LIBRARY)
#    define KAEHLER_API __declspec(dllexport)
#  else
#    define KAEHLER_API __declspec(dllimport)
#  endif
#else
#  define KAEHLER_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum kf_status {
  KF_OK = 0,
  KF_CHECK_FAILED = 1,   /* a report was produced and at least one check failed */
  KF_PRECONDITION = 2,   /* a report was produced but a hypothesis did not hold */
  KF_INPUT_ERROR = 3,    /* malformed document, unreadable file or bad parameter */
  KF_INVALID_ARGUMENT = 4,
  KF_INTERNAL = 5
} kf_status;

typedef struct kf_form kf_form;
typedef struct kf_report kf_report;

KAEHLER_API const char* kf_version(void);
KAEHLER_API const char* kf_last_error(void);
KAEHLER_API void kf_string_free(char* s);

KAEHLER_API kf_status kf_form_load(const char* path, double tol, kf_form** out);
KAEHLER_API kf_status kf_form_parse(const char* text, double tol, kf_form** out);
KAEHLER_API kf_status kf_form_save(const kf_form* form, const char* path);
KAEHLER_API kf_status kf_form_dump(const kf_form* form, char** out);
/* Domain dimension, or -1 for a null handle. */
KAEHLER_API int kf_form_dim(const kf_form* form);
KAEHLER_API void kf_form_free(kf_form* form);

KAEHLER_API kf_status kf_check_flat(const kf_form* form, double tol, kf_report** report);
/* basis_json may be null; it is set to null when no basis was found. */
KAEHLER_API kf_status kf_diagonalize(const kf_form* form, double tol, uint64_t seed, kf_report** report,
                                     char** basis_json);
KAEHLER_API kf_status kf_example_suite(const double* radii, size_t count, int points, double tol, uint64_t seed,
                                       kf_report** report, char** form_json);
KAEHLER_API kf_status kf_horosphere_suite(int n, int points, double tol, uint64_t seed, kf_report** report,
                                          char** form_json);
KAEHLER_API kf_status kf_random_suite(int trials, int n, int p, int corrupt, double tol, uint64_t seed,
                                      kf_report** report);

KAEHLER_API kf_status kf_report_json(const kf_report* report, int include_runtime, char** out);
KAEHLER_API int kf_report_passed(const kf_report* report);
KAEHLER_API int kf_report_exit_code(const kf_report* report);
KAEHLER_API void kf_report_free(kf_report* report);

#ifdef __cplusplus
}
#endif

#endif
