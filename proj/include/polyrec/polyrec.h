/* C interface to the polyrec library. All objects are opaque handles created
 * and released through the functions below. Every call returns a status; on
 * failure polyrec_last_error() describes the problem (thread-local). */
#ifndef POLYREC_POLYREC_H
#define POLYREC_POLYREC_H

#include <stddef.h>
#include <stdint.h>

#if defined(POLYREC_BUILDING_LIBRARY)
#define POLYREC_API __attribute__((visibility("default")))
#else
#define POLYREC_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum polyrec_status {
  POLYREC_OK = 0,
  POLYREC_INVALID_ARGUMENT = 1,
  POLYREC_PRECONDITION = 2,
  POLYREC_BUDGET_EXCEEDED = 3,
  POLYREC_NUMERICAL = 4,
  POLYREC_INTERNAL = 5,
  POLYREC_NULL_POINTER = 6,
  POLYREC_OUT_OF_MEMORY = 7
} polyrec_status;

typedef struct polyrec_config polyrec_config;
typedef struct polyrec_set polyrec_set;
typedef struct polyrec_family polyrec_family;
typedef struct polyrec_lattice polyrec_lattice;
typedef struct polyrec_system polyrec_system;
typedef struct polyrec_report polyrec_report;

POLYREC_API const char* polyrec_version(void);
POLYREC_API const char* polyrec_status_string(polyrec_status status);
/* Message of the last failed call on this thread, "" if none. */
POLYREC_API const char* polyrec_last_error(void);
/* Releases strings returned through char** out-parameters. */
POLYREC_API void polyrec_string_free(char* s);

/* ---- configuration ---------------------------------------------------- */
POLYREC_API polyrec_status polyrec_config_default(polyrec_config** out);
/* JSON object with optional keys seed, threads, constants{...},
 * tolerances{...}, budgets{...}, json_out, csv_out. Unknown keys are errors. */
POLYREC_API polyrec_status polyrec_config_from_json(const char* json, polyrec_config** out);
POLYREC_API polyrec_status polyrec_config_to_json(const polyrec_config* config, char** out);
POLYREC_API void polyrec_config_free(polyrec_config* config);

/* ---- integer sets A in [1, N] ------------------------------------------ */
POLYREC_API polyrec_status polyrec_set_create(int64_t N, const int64_t* elements, size_t count,
                                              polyrec_set** out);
/* kind: "full", "evens", "ap" (start, step) or "random" (density, seed). */
POLYREC_API polyrec_status polyrec_set_generate(const char* kind, int64_t N, int64_t start,
                                                int64_t step, double density, uint64_t seed,
                                                polyrec_set** out);
POLYREC_API polyrec_status polyrec_set_size(const polyrec_set* set, size_t* out);
POLYREC_API polyrec_status polyrec_set_ambient(const polyrec_set* set, int64_t* out);
/* Copies up to `capacity` elements; `written` receives the full size. */
POLYREC_API polyrec_status polyrec_set_elements(const polyrec_set* set, int64_t* buffer,
                                                size_t capacity, size_t* written);
POLYREC_API void polyrec_set_free(polyrec_set* set);

/* ---- polynomial families ("c1,...,ck;..." coefficient lists) ------------ */
POLYREC_API polyrec_status polyrec_family_parse(const char* literal, polyrec_family** out);
POLYREC_API polyrec_status polyrec_family_size(const polyrec_family* family, size_t* out);
POLYREC_API polyrec_status polyrec_family_degree(const polyrec_family* family, int* out);
POLYREC_API void polyrec_family_free(polyrec_family* family);

/* ---- product lattices ----------------------------------------------------
 * {"blocks": [{"dim": d, "basis": [row-major d*d]}, ...]}; rows are basis
 * vectors and block j is acted on by n^j. */
POLYREC_API polyrec_status polyrec_lattice_from_json(const char* json, polyrec_lattice** out);
POLYREC_API polyrec_status polyrec_lattice_scaled_integer(double R, const size_t* dims,
                                                          size_t count, polyrec_lattice** out);
POLYREC_API polyrec_status polyrec_lattice_dimension(const polyrec_lattice* lattice, size_t* out);
POLYREC_API polyrec_status polyrec_lattice_determinant(const polyrec_lattice* lattice,
                                                       double* out);
POLYREC_API void polyrec_lattice_free(polyrec_lattice* lattice);
/* x holds all blocks concatenated. dual != 0 evaluates the Poisson dual series. */
POLYREC_API polyrec_status polyrec_theta(const polyrec_lattice* lattice, double t,
                                         const double* x, size_t length, int dual, double* out);
POLYREC_API polyrec_status polyrec_a_lambda(const polyrec_lattice* lattice, double poisson_tol,
                                            double* direct, double* dual);

/* ---- finite measure-preserving systems ---------------------------------- */
/* "rotation:m:a", "skew:m:a" or "perm:<path>". */
POLYREC_API polyrec_status polyrec_system_parse(const char* spec, polyrec_system** out);
POLYREC_API polyrec_status polyrec_system_from_permutation(const size_t* permutation, size_t m,
                                                           polyrec_system** out);
POLYREC_API polyrec_status polyrec_system_size(const polyrec_system* system, size_t* out);
POLYREC_API void polyrec_system_free(polyrec_system* system);
/* |A ∩ T^{-shift} A| / m as num / den (den = m). */
POLYREC_API polyrec_status polyrec_recurrence_measure(const polyrec_system* system,
                                                      const size_t* A, size_t count,
                                                      int64_t shift, int64_t* num, int64_t* den);

/* ---- direct numerical operations ---------------------------------------- */
/* f^(xi) = (1/N) sum_x f(x) e(-x xi / N). */
POLYREC_API polyrec_status polyrec_dft(const double* re, const double* im, size_t N,
                                       double* out_re, double* out_im);
/* Exact Tarry count as a decimal string; method "auto", "convolution" or
 * "meet-in-the-middle". */
POLYREC_API polyrec_status polyrec_tarry_count(int K, int k, int64_t M, const char* method,
                                               char** count);
POLYREC_API polyrec_status polyrec_difference_identity(int j, int64_t x, int64_t d, int* equal);

/* ---- experiment runs ------------------------------------------------------
 * subcommand: search, decompose, weyl, tarry, dioph, ergodic, lift, selftest.
 * args_json is a JSON object of subcommand arguments (may be NULL). The
 * report owns a JSON document, an optional CSV table and a pass flag. */
POLYREC_API polyrec_status polyrec_run(const char* subcommand, const char* args_json,
                                       const polyrec_config* config, polyrec_report** out);
POLYREC_API polyrec_status polyrec_report_json(const polyrec_report* report, const char** out);
POLYREC_API polyrec_status polyrec_report_csv(const polyrec_report* report, const char** out);
POLYREC_API polyrec_status polyrec_report_passed(const polyrec_report* report, int* out);
POLYREC_API void polyrec_report_free(polyrec_report* report);

#ifdef __cplusplus
}
#endif

#endif /* POLYREC_POLYREC_H */
