#ifndef FSM_H
#define FSM_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum {
  FSM_STATUS_OK = 0,
  FSM_STATUS_NULL_ARGUMENT = 1,
  FSM_STATUS_INVALID_UTF8 = 2,
  FSM_STATUS_SYNTAX = 3,
  /**
   * A constructor rejected the definition.
   */
  FSM_STATUS_INVALID = 4,
  /**
   * The operation does not apply to this kind of value.
   */
  FSM_STATUS_UNSUPPORTED = 5,
  /**
   * The run failed, e.g. a word outside the alphabet or a tm leaving the tape.
   */
  FSM_STATUS_RUNTIME = 6,
  FSM_STATUS_STEP_LIMIT = 7,
  FSM_STATUS_PANIC = 8,
} FsmStatus;

typedef enum {
  FSM_DERIVABILITY_DERIVABLE = 0,
  FSM_DERIVABILITY_NOT_DERIVABLE = 1,
  FSM_DERIVABILITY_UNDECIDED = 2,
} FsmDerivability;

/**
 * A parsed machine, grammar, regular expression or combined tm.
 */
typedef struct FsmValue FsmValue;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses a definition. On success `*out` owns a new handle.
 *
 * # Safety
 * `source` must be a NUL-terminated string and `out` a writable pointer.
 */
FsmStatus fsm_value_parse(const char *source, FsmValue **out);

/**
 * Releases a handle. Null is ignored.
 *
 * # Safety
 * `v` must come from this library and not be used afterwards.
 */
void fsm_value_free(FsmValue *v);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void fsm_string_free(char *s);

/**
 * The definition's tag ("dfa", "cfg", "regexp", ...), or null for a null
 * handle. The string is static.
 *
 * # Safety
 * `v` must be null or a live handle.
 */
const char *fsm_value_kind(const FsmValue *v);

/**
 * Writes the canonical text of a value to `*out`.
 *
 * # Safety
 * `v` must be a live handle and `out` writable.
 */
FsmStatus fsm_value_render(const FsmValue *v, char **out);

/**
 * Runs a machine (or the machine of a regexp or grammar) on a word of
 * whitespace-separated tokens. `step_limit` bounds tm runs; 0 keeps the
 * default.
 *
 * # Safety
 * `v` must be a live handle, `word` a NUL-terminated string and
 * `accepted` writable.
 */
FsmStatus fsm_apply(const FsmValue *v,
                    const char *word,
                    size_t head,
                    size_t step_limit,
                    bool *accepted);

/**
 * Searches for a derivation of `word` in a grammar. When the word is
 * derivable and `derivation` is not null, `*derivation` receives the
 * sentential forms joined by " ⇒ "; otherwise it is set to null.
 *
 * # Safety
 * `g` must be a live handle, `word` a NUL-terminated string, `result`
 * writable and `derivation` null or writable.
 */
FsmStatus fsm_derive(const FsmValue *g,
                     const char *word,
                     FsmDerivability *result,
                     char **derivation);

/**
 * Transforms a value. `target` is one of dfa, ndfa, regexp, grammar,
 * reverse, pda or sm. On success `*out` owns a new handle.
 *
 * # Safety
 * `v` must be a live handle, `target` a NUL-terminated string and `out`
 * writable.
 */
FsmStatus fsm_convert(const FsmValue *v, const char *target, FsmValue **out);

/**
 * Compares two machines on `count` random words drawn from `seed` with
 * lengths up to `max_len`. `*counterexamples` (if not null) receives the
 * disagreeing words, one per line, or null when there are none.
 *
 * # Safety
 * `a` and `b` must be live handles, `equivalent` writable and
 * `counterexamples` null or writable.
 */
FsmStatus fsm_test_equiv(const FsmValue *a,
                         const FsmValue *b,
                         size_t count,
                         uint64_t seed,
                         size_t max_len,
                         bool *equivalent,
                         char **counterexamples);

/**
 * Decides whether a cfg or rg generates no words.
 *
 * # Safety
 * `g` must be a live handle and `empty` writable.
 */
FsmStatus fsm_cfg_is_empty(const FsmValue *g, bool *empty);

/**
 * Runs a combined tm on a tape of whitespace-separated tokens (`_` is the
 * blank). `*config` receives the final configuration, e.g.
 * `(h 7 (add1 _ I I I I I _))`.
 *
 * # Safety
 * `c` must be a live handle, `tape` a NUL-terminated string and `config`
 * writable.
 */
FsmStatus fsm_ctm_run(const FsmValue *c,
                      const char *tape,
                      size_t head,
                      size_t step_limit,
                      char **config);

/**
 * The message for the last failed call on this thread, or "" after a
 * successful one. Valid until the next call into the library.
 */
const char *fsm_last_error_message(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FSM_H */
