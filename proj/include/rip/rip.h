#ifndef RIP_RIP_H
#define RIP_RIP_H

/* C interface to the joint-structure partition function library.
 *
 * Sequences passed to rip_fold are in internal orientation: seq_r 5'->3' and
 * seq_s 3'->5' (position 1 of S is its 3' end). Matrices are row-major with
 * 0-based storage of 1-based positions. Every call that can fail returns a
 * rip_status; on failure rip_last_error() describes the cause for the
 * calling thread. */

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define RIP_API __declspec(dllexport)
#else
#define RIP_API __attribute__((visibility("default")))
#endif

typedef enum rip_status {
  RIP_OK = 0,
  RIP_ERR_USAGE = 1,
  RIP_ERR_INPUT = 2,
  RIP_ERR_RESOURCE = 3,
  RIP_ERR_VERIFY = 4,
  RIP_ERR_INTERNAL = 5
} rip_status;

typedef enum rip_matrix { RIP_MATRIX_RR = 0, RIP_MATRIX_SS = 1, RIP_MATRIX_RS = 2 } rip_matrix;

typedef struct rip_model rip_model;
typedef struct rip_result rip_result;

#define RIP_FOLD_PARALLEL 1u
#define RIP_FOLD_NO_OUTSIDE 2u

/* Unit-weight model: all energies zero, theta 3. */
RIP_API rip_status rip_model_create(rip_model** out);
/* Reads a `key = value` parameter file. */
RIP_API rip_status rip_model_load(const char* path, rip_model** out);
RIP_API rip_status rip_model_parse(const char* text, rip_model** out);
RIP_API rip_status rip_model_set(rip_model* model, const char* key, const char* value);
RIP_API double rip_model_kt(const rip_model* model);
RIP_API void rip_model_destroy(rip_model* model);

RIP_API rip_status rip_fold(const rip_model* model, const char* seq_r, const char* seq_s,
                            unsigned flags, rip_result** out);
RIP_API double rip_result_partition(const rip_result* result);
RIP_API int rip_result_n(const rip_result* result);
RIP_API int rip_result_m(const rip_result* result);
/* Borrowed pointer valid until rip_result_destroy. Fails without outside. */
RIP_API rip_status rip_result_matrix(const rip_result* result, rip_matrix which,
                                     const double** data, size_t* rows, size_t* cols);
RIP_API rip_status rip_result_unpaired(const rip_result* result, int strand_s,
                                       const double** data, size_t* len);
RIP_API size_t rip_result_table_entries(const rip_result* result);
RIP_API size_t rip_result_table_bytes(const rip_result* result);
RIP_API void rip_result_destroy(rip_result* result);

/* Number of joint structures on strands of lengths n and m. */
RIP_API rip_status rip_count(int n, int m, int theta, uint64_t* out);

typedef struct rip_verify_options {
  int max_n;
  int max_m;
  int theta;
  uint64_t seed;
  int random_models;
  /* Test hook: name of a subclass whose productions are perturbed, or NULL. */
  const char* corrupt;
} rip_verify_options;

RIP_API void rip_verify_defaults(rip_verify_options* opt);
/* Runs the oracle gates. *report receives a string to free with
 * rip_string_free. Returns RIP_ERR_VERIFY when any gate fails. */
RIP_API rip_status rip_verify(const rip_verify_options* opt, char** report);
RIP_API void rip_string_free(char* s);

RIP_API const char* rip_last_error(void);

#ifdef __cplusplus
}
#endif

#endif
