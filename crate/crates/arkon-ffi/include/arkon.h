#ifndef ARKON_H
#define ARKON_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Outcome of an API call.
 */
typedef enum ArkonStatus {
  ArkonStatus_Ok = 0,
  /**
   * A required pointer argument was NULL.
   */
  ArkonStatus_NullArgument = 1,
  /**
   * An input string was not valid UTF-8.
   */
  ArkonStatus_InvalidUtf8 = 2,
  /**
   * The theory text did not parse.
   */
  ArkonStatus_ParseFailed = 3,
  /**
   * The family name or its parameters were rejected.
   */
  ArkonStatus_InvalidSpec = 4,
  /**
   * The query literal was not a well-formed literal.
   */
  ArkonStatus_InvalidLiteral = 5,
  /**
   * A panic or other internal failure was caught at the boundary.
   */
  ArkonStatus_InternalError = 6,
} ArkonStatus;

/**
 * Answer for a queried literal.
 */
typedef enum ArkonVerdict {
  /**
   * Neither the literal nor its complement is defeasibly provable.
   */
  ArkonVerdict_Undetermined = 0,
  /**
   * The literal is defeasibly provable.
   */
  ArkonVerdict_ProvablyTrue = 1,
  /**
   * The complement of the literal is defeasibly provable.
   */
  ArkonVerdict_ProvablyFalse = 2,
} ArkonVerdict;

/**
 * Opaque handle to an immutable theory.
 */
typedef struct ArkonTheory ArkonTheory;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses theory text into a new handle.
 *
 * On success writes the handle through `out`; the caller owns it and must
 * release it with [`arkon_theory_free`].
 *
 * # Safety
 *
 * `text` must be NULL or a valid NUL-terminated string; `out` must be NULL
 * or a valid pointer to writable memory.
 */
enum ArkonStatus arkon_theory_parse(const char *text, struct ArkonTheory **out);

/**
 * Generates a benchmark family instance into a new handle.
 *
 * `family` is one of the family names accepted by the command line
 * (`chain`, `chains`, `circle`, `circles`, `dag`, `levels-`, `levels`,
 * `hierarchies`); `k` is the branching factor for the families that take
 * one and must be 0 for the others.
 *
 * # Safety
 *
 * `family` must be NULL or a valid NUL-terminated string; `out` must be
 * NULL or a valid pointer to writable memory.
 */
enum ArkonStatus arkon_theory_generate(const char *family,
                                       uint32_t n,
                                       uint32_t k,
                                       struct ArkonTheory **out);

/**
 * Releases a handle returned by parse or generate. NULL is ignored.
 *
 * # Safety
 *
 * `theory` must be NULL or a handle previously returned by this library
 * that has not been freed yet.
 */
void arkon_theory_free(struct ArkonTheory *theory);

/**
 * Releases a string returned by this library. NULL is ignored.
 *
 * # Safety
 *
 * `text` must be NULL or a string previously returned by this library
 * that has not been freed yet.
 */
void arkon_string_free(char *text);

/**
 * Writes the canonical text form of the theory through `out`.
 *
 * # Safety
 *
 * `theory` must be NULL or a live handle; `out` must be NULL or a valid
 * pointer to writable memory.
 */
enum ArkonStatus arkon_theory_print(const struct ArkonTheory *theory, char **out);

/**
 * Writes the natural-language rendering of the theory through `out`, one
 * sentence per line. NULL `noun` or `article` pick the defaults.
 *
 * # Safety
 *
 * `theory` must be NULL or a live handle; `noun` and `article` must each
 * be NULL or valid NUL-terminated strings; `out` must be NULL or a valid
 * pointer to writable memory.
 */
enum ArkonStatus arkon_theory_translate(const struct ArkonTheory *theory,
                                        const char *noun,
                                        const char *article,
                                        char **out);

/**
 * Queries one literal (prefix `-` for the negation) and writes the
 * verdict through `out`.
 *
 * # Safety
 *
 * `theory` must be NULL or a live handle; `literal` must be NULL or a
 * valid NUL-terminated string; `out` must be NULL or a valid pointer to
 * writable memory.
 */
enum ArkonStatus arkon_theory_query(const struct ArkonTheory *theory,
                                    const char *literal,
                                    enum ArkonVerdict *out);

/**
 * Writes every tagged conclusion of the theory through `out` as a JSON
 * document.
 *
 * # Safety
 *
 * `theory` must be NULL or a live handle; `out` must be NULL or a valid
 * pointer to writable memory.
 */
enum ArkonStatus arkon_theory_conclusions_json(const struct ArkonTheory *theory, char **out);

/**
 * Returns the library version as a static NUL-terminated string. The
 * caller must not free it.
 */
const char *arkon_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ARKON_H */
