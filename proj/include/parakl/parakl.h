#ifndef PARAKL_H
#define PARAKL_H

/* C interface to the parakl library: Coxeter systems, Bruhat intervals,
 * parabolic Kazhdan-Lusztig and R-polynomials, the maximal-quotient
 * extension and the invariance scan.
 *
 * Results are returned as JSON documents in strings owned by the caller;
 * release them with parakl_free_string. On failure a status other than
 * PARAKL_OK is returned and parakl_last_error() describes the problem
 * (per thread, valid until the next call on that thread).
 *
 * Words are whitespace-separated generator names; "" is the identity.
 * Quotients are comma or whitespace separated lists of names.
 * KL types are "q" or "-1"; kinds are "P" or "R"; methods are
 * "recursion", "duality" or "both". NULL selects the default (first) value. */

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(__GNUC__)
#define PARAKL_API __attribute__((visibility("default")))
#else
#define PARAKL_API
#endif

typedef enum parakl_status {
  PARAKL_OK = 0,
  PARAKL_DISAGREEMENT = 1,  /* a computed comparison failed; output is still set */
  PARAKL_INPUT_ERROR = 2,
  PARAKL_PRECONDITION = 3,
  PARAKL_LIMIT = 4,
  PARAKL_INTERNAL = 5
} parakl_status;

typedef struct parakl_system parakl_system;

typedef void (*parakl_warning_fn)(const char* message, void* user);

PARAKL_API const char* parakl_version(void);
PARAKL_API const char* parakl_last_error(void);
PARAKL_API void parakl_free_string(char* s);
/* NULL restores the default handler, which writes to stderr. */
PARAKL_API void parakl_set_warning_handler(parakl_warning_fn fn, void* user);

PARAKL_API parakl_status parakl_system_from_json(const char* json, parakl_system** out);
PARAKL_API parakl_status parakl_system_from_file(const char* path, parakl_system** out);
PARAKL_API void parakl_system_free(parakl_system* sys);
PARAKL_API parakl_status parakl_system_to_json(const parakl_system* sys, char** out);
PARAKL_API parakl_status parakl_system_fingerprint(const parakl_system* sys, char** out);
PARAKL_API size_t parakl_system_rank(const parakl_system* sys);

/* {"word", "display", "length", "reduced", "left_descents", "right_descents"} */
PARAKL_API parakl_status parakl_canonicalize(const parakl_system* sys, const char* word,
                                             char** out);
PARAKL_API parakl_status parakl_bruhat_leq(const parakl_system* sys, const char* u,
                                           const char* v, int* out);

/* With method "both" the result carries both values and an "agree" flag, and
 * PARAKL_DISAGREEMENT is returned when they differ. */
PARAKL_API parakl_status parakl_poly(parakl_system* sys, const char* u, const char* v,
                                     const char* quotient, const char* type,
                                     const char* kind, const char* method, char** out);

/* dot may be NULL. */
PARAKL_API parakl_status parakl_interval(parakl_system* sys, const char* u, const char* v,
                                         const char* quotient, char** json, char** dot);

/* policy ("s1=3,s3=inf") and class_x ("3,inf") may be NULL.
 * The result holds the extended system under "extended". */
PARAKL_API parakl_status parakl_extend(const parakl_system* sys, const char* quotient,
                                       const char* policy, const char* class_x,
                                       char** out);
/* Checks every pair u <= v in W^J with l(v) <= max_length. */
PARAKL_API parakl_status parakl_verify_reduction(parakl_system* sys, const char* quotient,
                                                 const char* policy, const char* class_x,
                                                 size_t max_length, char** out);

/* Relative system paths in the config resolve against base_dir (may be NULL).
 * cache_path may be NULL; cache_hits may be NULL. Returns PARAKL_DISAGREEMENT
 * when the report has counterexamples or failed controls. */
PARAKL_API parakl_status parakl_scan(const char* config_json, const char* base_dir,
                                     const char* cache_path, char** report_json,
                                     char** csv, size_t* cache_hits);

/* A missing or unreadable cache warns and loads nothing. */
PARAKL_API parakl_status parakl_cache_load(parakl_system* sys, const char* path,
                                           size_t* loaded);
PARAKL_API parakl_status parakl_cache_store(parakl_system* sys, const char* path,
                                            size_t* written);
PARAKL_API size_t parakl_cache_hits(const parakl_system* sys);

#ifdef __cplusplus
}
#endif

#endif
