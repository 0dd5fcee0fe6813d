#ifndef ORDGRAM_H
#define ORDGRAM_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum OgStatus {
  OG_STATUS_OK = 0,
  OG_STATUS_NULL_POINTER = 1,
  OG_STATUS_INVALID_UTF8 = 2,
  OG_STATUS_PARSE = 3,
  OG_STATUS_INVALID_ARGUMENT = 4,
  OG_STATUS_PANIC = 5,
} OgStatus;

typedef struct OgGrammar OgGrammar;

typedef struct OgOrdinal OgOrdinal;

typedef struct OgSynth OgSynth;

typedef struct OgSystem OgSystem;

/**
 * Message for the last failed call on this thread, or null. The pointer stays
 * valid until the next failing call on the same thread.
 */
const char *og_last_error(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library.
 */
void og_string_free(char *s);

/**
 * Parses an ordinal expression such as `"w^(w^2)*3 + w + 1"`.
 *
 * # Safety
 * `text_ptr` must be a nul-terminated string and `out` writable.
 */
enum OgStatus og_ordinal_parse(const char *text_ptr, struct OgOrdinal **out);

/**
 * # Safety
 * `a` and `b` must be live ordinal handles and `out` writable.
 */
enum OgStatus og_ordinal_add(const struct OgOrdinal *a,
                             const struct OgOrdinal *b,
                             struct OgOrdinal **out);

/**
 * # Safety
 * `a` and `b` must be live ordinal handles and `out` writable.
 */
enum OgStatus og_ordinal_mul(const struct OgOrdinal *a,
                             const struct OgOrdinal *b,
                             struct OgOrdinal **out);

/**
 * Writes -1, 0 or 1 to `out`.
 *
 * # Safety
 * `a` and `b` must be live ordinal handles and `out` writable.
 */
enum OgStatus og_ordinal_compare(const struct OgOrdinal *a,
                                 const struct OgOrdinal *b,
                                 int32_t *out);

/**
 * Canonical text of an ordinal, or null for a null handle.
 *
 * # Safety
 * `a` must be null or a live ordinal handle.
 */
char *og_ordinal_to_string(const struct OgOrdinal *a);

/**
 * # Safety
 * `a` must be null or a handle not yet freed.
 */
void og_ordinal_free(struct OgOrdinal *a);

/**
 * Parses a grammar file and normalizes it.
 *
 * # Safety
 * `text_ptr` must be a nul-terminated string and `out` writable.
 */
enum OgStatus og_grammar_parse(const char *text_ptr, struct OgGrammar **out);

/**
 * # Safety
 * `g` must be null or a live grammar handle.
 */
char *og_grammar_to_string(const struct OgGrammar *g);

/**
 * `ω^(ω^h)` for the height `h` of nonterminal `name`.
 *
 * # Safety
 * `g` must be a live grammar handle, `name` a nul-terminated string and `out` writable.
 */
enum OgStatus og_grammar_height_bound(const struct OgGrammar *g,
                                      const char *name,
                                      struct OgOrdinal **out);

/**
 * Runs the bounded prefix and well-order probes; `clean` receives 1 when
 * both found nothing.
 *
 * # Safety
 * `g` must be a live grammar handle and `clean` writable.
 */
enum OgStatus og_grammar_check(const struct OgGrammar *g, size_t maxlen, int32_t *clean);

/**
 * Words of length at most `maxlen` in lexicographic order, one per line.
 *
 * # Safety
 * `g` must be a live grammar handle and `out` writable.
 */
enum OgStatus og_grammar_enumerate(const struct OgGrammar *g,
                                   size_t maxlen,
                                   size_t cap,
                                   char **out);

/**
 * # Safety
 * `g` must be null or a handle not yet freed.
 */
void og_grammar_free(struct OgGrammar *g);

/**
 * # Safety
 * `a` must be a live ordinal handle and `out` writable.
 */
enum OgStatus og_synth_new(const struct OgOrdinal *a, struct OgSynth **out);

/**
 * The grammar file with its recipe header.
 *
 * # Safety
 * `s` must be null or a live handle.
 */
char *og_synth_to_string(const struct OgSynth *s);

/**
 * # Safety
 * `s` must be a live handle, `word` a nul-terminated string and `out` writable.
 */
enum OgStatus og_synth_rank(const struct OgSynth *s, const char *word, struct OgOrdinal **out);

/**
 * # Safety
 * `s` must be null or a handle not yet freed.
 */
void og_synth_free(struct OgSynth *s);

/**
 * # Safety
 * `text_ptr` must be a nul-terminated string and `out` writable.
 */
enum OgStatus og_system_parse(const char *text_ptr, struct OgSystem **out);

/**
 * # Safety
 * `s` must be a live handle and `out` writable.
 */
enum OgStatus og_system_binarize(const struct OgSystem *s, struct OgSystem **out);

/**
 * The frontier grammar, or the labeled-frontier grammar when `labeled` is
 * nonzero. Neither is reduced.
 *
 * # Safety
 * `s` must be a live handle and `out` writable.
 */
enum OgStatus og_system_translate(const struct OgSystem *s,
                                  int32_t labeled,
                                  struct OgGrammar **out);

/**
 * Bounded comparison of the labeled-frontier grammar with Kleene iterates;
 * `passed` receives 1 when no discrepancy was found.
 *
 * # Safety
 * `s` must be a live handle and `passed` writable.
 */
enum OgStatus og_system_verify(const struct OgSystem *s,
                               size_t depth,
                               size_t maxlen,
                               int32_t *passed);

/**
 * # Safety
 * `s` must be null or a handle not yet freed.
 */
void og_system_free(struct OgSystem *s);

#endif  /* ORDGRAM_H */
