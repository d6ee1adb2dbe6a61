#ifndef LIPFREE_LIPFREE_H
#define LIPFREE_LIPFREE_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(LIPFREE_BUILDING_LIBRARY)
#    define LF_API __declspec(dllexport)
#  else
#    define LF_API __declspec(dllimport)
#  endif
#else
#  define LF_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes. Every call returns one; details are in lf_last_error(). */
typedef enum lf_status {
  LF_OK = 0,
  LF_DOMAIN_FAILURE = 1,      /* input outside the operation's domain, or a failed certificate */
  LF_INVALID_ARGUMENT = 2,    /* null pointers, out-of-range parameters */
  LF_PARSE_ERROR = 3,         /* malformed JSON or wrong document shape */
  LF_CAP_EXCEEDED = 4,        /* desk-scale size cap */
  LF_VERIFICATION_FAILED = 5, /* a post-hoc certificate check did not hold */
  LF_INTERNAL = 6
} lf_status;

typedef struct lf_space lf_space;
typedef struct lf_tree lf_tree;
typedef struct lf_sequence lf_sequence;

LF_API const char* lf_version(void);

/* Message of the last failed call on this thread, "" if none. */
LF_API const char* lf_last_error(void);

/* Strings returned through char** out-parameters are owned by the caller. */
LF_API void lf_string_free(char* text);

/* ---- metric spaces ---------------------------------------------------- */

/* Row-major n x n matrix; labels may be NULL ("0", "1", ...). Point 0 is
 * the base point. Fails with LF_DOMAIN_FAILURE if the matrix is not a metric. */
LF_API lf_status lf_space_create(size_t n, const double* dist, const char* const* labels, lf_space** out);
LF_API lf_status lf_space_from_json(const char* json, lf_space** out);
LF_API void lf_space_free(lf_space* space);
LF_API size_t lf_space_size(const lf_space* space);
LF_API double lf_space_distance(const lf_space* space, size_t i, size_t j);
LF_API int lf_space_is_integer(const lf_space* space);
LF_API lf_status lf_space_to_json(const lf_space* space, char** out);

LF_API lf_status lf_round_metric(const lf_space* space, double scale, lf_space** out);
LF_API lf_status lf_snowflake(const lf_space* space, double exponent, lf_space** out);
LF_API lf_status lf_subdominant_ultrametric(const lf_space* space, lf_space** out);

/* ---- free-space norms ------------------------------------------------- */

/* mu = sum_k coeffs[k] delta(points[k]). potential may be NULL, otherwise it
 * receives lf_space_size() values of the dual 1-Lipschitz certificate. */
LF_API lf_status lf_free_norm(const lf_space* space, size_t k, const size_t* points, const double* coeffs,
                              double* value, double* potential);

/* Integer metrics only. values receives lf_space_size() integers. */
LF_API lf_status lf_integer_potential(const lf_space* space, size_t k, const size_t* points, const double* coeffs,
                                      int64_t* values);

/* ---- trees ------------------------------------------------------------ */

LF_API lf_status lf_tree_embed(const lf_space* space, lf_tree** out);
LF_API lf_status lf_tree_from_json(const char* json, lf_tree** out);
LF_API void lf_tree_free(lf_tree* tree);
LF_API size_t lf_tree_node_count(const lf_tree* tree);
LF_API size_t lf_tree_steiner_count(const lf_tree* tree);
LF_API lf_status lf_tree_to_json(const lf_tree* tree, char** out);
LF_API lf_status lf_tree_cut_norm(const lf_tree* tree, size_t k, const size_t* points, const double* coeffs,
                                  double* value);

/* ---- sequences -------------------------------------------------------- */

LF_API lf_status lf_sequence_from_json(const char* json, lf_sequence** out);
LF_API void lf_sequence_free(lf_sequence* seq);
LF_API size_t lf_sequence_length(const lf_sequence* seq);
LF_API lf_status lf_sequence_osc(const lf_sequence* seq, double* ca);
/* On LF_DOMAIN_FAILURE *report still holds the partial report. */
LF_API lf_status lf_schur_certificate(const lf_sequence* seq, double epsilon, char** report);

/* ---- JSON front ends -------------------------------------------------- *
 * Each takes JSON documents and writes a JSON report. A report is also
 * written on LF_DOMAIN_FAILURE so callers can show what went wrong. */

LF_API lf_status lf_validate_json(const char* space_json, char** report);
LF_API lf_status lf_classify_json(const char* space_json, char** report);
LF_API lf_status lf_norm_json(const char* space_json, const char* element_json, int integer_certificate,
                              char** report);
LF_API lf_status lf_witness_json(const char* sequence_json, double epsilon, char** report);
/* params_json may be NULL: {"points", "N", "blocks", "support"}. */
LF_API lf_status lf_generate_json(const char* family, const char* params_json, uint64_t seed, char** out);
LF_API lf_status lf_tree_embed_json(const char* space_json, char** tree_json);
LF_API lf_status lf_tree_norm_json(const char* tree_json, const char* element_json, char** report);
LF_API lf_status lf_density_json(const char* intervals_json, double epsilon, char** report);
/* {"sample": [...], "n": k, "interval": [a, b], "dist": optional ultrametric}
 * Without "dist" the subdominant ultrametric of |x - y| is used. */
LF_API lf_status lf_distortion_json(const char* sample_json, char** report);
LF_API lf_status lf_round_metric_json(const char* space_json, double scale, char** out);
LF_API lf_status lf_snowflake_json(const char* space_json, double exponent, char** out);

#ifdef __cplusplus
}
#endif

#endif
