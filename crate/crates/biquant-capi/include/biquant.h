/* C interface to the biquant library.
 *
 * Maintained by hand to match the extern "C" surface of
 * crates/biquant-capi/src/lib.rs.
 *
 * Conventions:
 *   - Lie bialgebras are opaque handles created from the JSON
 *     structure-constants document and released with
 *     biquant_bialgebra_free().
 *   - Report-producing calls write a NUL-terminated UTF-8 string through
 *     an out-pointer; release it with biquant_string_free(). A report is
 *     produced even when its verdict is a failure status.
 *   - Every call returns a status code; on an error status a
 *     thread-local message is available through
 *     biquant_last_error_message() until the next failing call on the
 *     same thread.
 */

#ifndef BIQUANT_H
#define BIQUANT_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes. */
enum {
  /* The run completed and every asserted identity holds. */
  BIQUANT_STATUS_OK = 0,
  /* The run completed and produced a report whose verdict is FAIL. */
  BIQUANT_STATUS_CHECK_FAILED = 1,
  /* A required pointer argument was null. */
  BIQUANT_STATUS_NULL_POINTER = 2,
  /* An input string was not valid UTF-8. */
  BIQUANT_STATUS_INVALID_UTF8 = 3,
  /* The input document could not be parsed into a bialgebra. */
  BIQUANT_STATUS_PARSE_ERROR = 4,
  /* The requested truncation order is not supported. */
  BIQUANT_STATUS_UNSUPPORTED_ORDER = 5,
  /* Any other failure; consult the last error message. */
  BIQUANT_STATUS_ERROR = 6
};

/* Opaque handle to a Lie bialgebra. */
typedef struct BiquantBialgebra BiquantBialgebra;

/* Last error message of this thread, or NULL when no error is recorded.
 * The pointer stays valid until the next failing call on this thread. */
const char *biquant_last_error_message(void);

/* Parse the JSON structure-constants document into a new handle. */
int biquant_bialgebra_from_json(const char *json, BiquantBialgebra **out);

/* Release a handle. NULL is ignored. */
void biquant_bialgebra_free(BiquantBialgebra *ptr);

/* Dimension of the bialgebra, or -1 on a null handle. */
int biquant_bialgebra_dim(const BiquantBialgebra *ptr);

/* Release a string returned through an out-pointer. NULL is ignored. */
void biquant_string_free(char *s);

/* Axiom report: one PASS/FAIL line per axiom. */
int biquant_check_report(const BiquantBialgebra *ptr, char **out);

/* The Drinfeld double in the JSON schema plus its verification lines. */
int biquant_double_report(const BiquantBialgebra *ptr, char **out);

/* Campbell-Hausdorff coefficient table through the given degree. */
int biquant_bch_table(unsigned int order, char **out);

/* Gram matrix and triangularity report of the dual pairing. */
int biquant_pair_report(const BiquantBialgebra *ptr, unsigned int max_degree,
                        unsigned int order, char **out);

/* Twist, R-matrix, deformed coproducts, and quasitriangularity residuals
 * at the given order (at most 3). */
int biquant_quantize_report(const BiquantBialgebra *ptr, unsigned int order,
                            char **out);

/* Full biquantization-square report at the given order (2 or 3). */
int biquant_square_report(const BiquantBialgebra *ptr, unsigned int order,
                          char **out);

/* Trivial-bialgebra oracle cross-check. */
int biquant_oracle_report(unsigned int dim, unsigned int order, char **out);

#ifdef __cplusplus
}
#endif

#endif /* BIQUANT_H */
