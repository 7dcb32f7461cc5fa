#ifndef SEPGPT_H
#define SEPGPT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SepgptStatus {
  SEPGPT_STATUS_OK = 0,
  SEPGPT_STATUS_INVALID_ARGUMENT = 1,
  SEPGPT_STATUS_UNSUPPORTED_INSTANCE = 2,
  SEPGPT_STATUS_INCONSISTENT_MODEL = 3,
  SEPGPT_STATUS_STRATEGY_MISMATCH = 4,
  SEPGPT_STATUS_PARSE = 5,
  SEPGPT_STATUS_IO = 6,
  SEPGPT_STATUS_JSON = 7,
  SEPGPT_STATUS_NULL_POINTER = 8,
  SEPGPT_STATUS_UTF8 = 9,
  SEPGPT_STATUS_PANIC = 10,
} SepgptStatus;

// Outcome of one simulated game.
typedef struct SepgptGameResult SepgptGameResult;

// A finished suite report with its JSON text.
typedef struct SepgptReport SepgptReport;

// A product of two pure qubit states given by unit Bloch vectors.
typedef struct SepgptProductState {
  double first[3];
  double second[3];
} SepgptProductState;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or null after a
// successful call. Valid until the next call on the same thread.
const char *sepgpt_last_error(void);

// Static name of a status code.
const char *sepgpt_status_name(enum SepgptStatus status);

// Runs the named suite (or `all`) with default options apart from `seed`
// and `rounds`, and stores a new report handle in `*out`.
//
// # Safety
// `name` must be a valid C string and `out` a valid pointer.
enum SepgptStatus sepgpt_run_suite(const char *name,
                                   uint64_t seed,
                                   uint64_t rounds,
                                   struct SepgptReport **out);

// True iff every check passed. False for a null handle.
//
// # Safety
// `r` must be null or a live handle.
bool sepgpt_report_passed(const struct SepgptReport *r);

// # Safety
// `r` must be null or a live handle.
size_t sepgpt_report_check_count(const struct SepgptReport *r);

// JSON text of the report, owned by the handle.
//
// # Safety
// `r` must be null or a live handle.
const char *sepgpt_report_json(const struct SepgptReport *r);

// # Safety
// `r` must be null or a handle not yet freed.
void sepgpt_report_free(struct SepgptReport *r);

// Plays `n` messages with the strategy family `theory` (`sep`, `quantum`,
// `quantum-helstrom`, `frozen`, `classical`). `qubits = 0` lets the
// quantum strategy pick enough qubits.
//
// # Safety
// `theory` must be a valid C string and `out` a valid pointer.
enum SepgptStatus sepgpt_play(size_t n,
                              const char *theory,
                              size_t qubits,
                              uint64_t rounds,
                              uint64_t seed,
                              struct SepgptGameResult **out);

// Fraction of rounds won. NaN for a null handle.
//
// # Safety
// `g` must be null or a live handle.
double sepgpt_game_success(const struct SepgptGameResult *g);

// # Safety
// `g` must be null or a live handle.
uint64_t sepgpt_game_wins(const struct SepgptGameResult *g);

// # Safety
// `g` must be null or a live handle.
uint64_t sepgpt_game_rounds(const struct SepgptGameResult *g);

// # Safety
// `g` must be null or a handle not yet freed.
void sepgpt_game_free(struct SepgptGameResult *g);

// Resources needed for `12^k` messages: `2k` SEP-bits against
// `ceil(log2 12^k)` qubits.
//
// # Safety
// `sep_bits` and `qubits` must be valid pointers.
enum SepgptStatus sepgpt_sep_vs_qubit_count(size_t k, size_t *sep_bits, size_t *qubits);

// `a1.a2 + b1.b2` over the two factors; the pair is perfectly distinguishable
// with separable effects iff this is at most zero.
//
// # Safety
// All pointers must be valid.
enum SepgptStatus sepgpt_arai_dot_sum(const struct SepgptProductState *s,
                                      const struct SepgptProductState *t,
                                      double *out);

// Best quantum success probability for telling `s` from `t`.
//
// # Safety
// All pointers must be valid.
enum SepgptStatus sepgpt_helstrom_bound(const struct SepgptProductState *s,
                                        const struct SepgptProductState *t,
                                        double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SEPGPT_H */
