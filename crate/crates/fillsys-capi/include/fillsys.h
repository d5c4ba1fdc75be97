#ifndef FILLSYS_H
#define FILLSYS_H

/* Generated by cbindgen from fillsys-capi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status codes shared by every entry point.
typedef enum FsStatus {
  FS_STATUS_OK = 0,
  FS_STATUS_NULL_ARGUMENT = 1,
  FS_STATUS_INVALID_UTF8 = 2,
  FS_STATUS_MALFORMED = 3,
  FS_STATUS_BUDGET_EXCEEDED = 4,
  FS_STATUS_CHECK_FAILED = 5,
  FS_STATUS_INTERNAL = 6,
} FsStatus;

// Opaque basis handle.
typedef struct FsBasis FsBasis;

// Opaque chord word handle.
typedef struct FsWord FsWord;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the most recent error on this thread (caller frees).
char *fs_last_error_message(void);

// Frees a string returned by this library. Null is ignored.
//
// # Safety
// `s` must have been returned by a fillsys function and not yet freed.
void fs_string_free(char *s);

// Parses a chord word from its text form, e.g. `"1 2 1 2"`.
//
// # Safety
// `text` must be a valid NUL-terminated string; `out` must be writable.
enum FsStatus fs_word_parse(const char *text, struct FsWord **out);

// # Safety
// `word` must come from this library and not be freed twice.
void fs_word_free(struct FsWord *word);

// Text form of a word (caller frees).
//
// # Safety
// `word` must be a live handle.
char *fs_word_to_string(const struct FsWord *word);

// Number of chords.
//
// # Safety
// `word` must be a live handle.
uint32_t fs_word_chord_count(const struct FsWord *word);

// Canonical representative, sign, and torsion flag of a word's class.
//
// # Safety
// `word` must be live; out-pointers, when non-null, must be writable.
enum FsStatus fs_word_canonical(const struct FsWord *word,
                                struct FsWord **out_word,
                                int32_t *out_sign,
                                bool *out_torsion);

// Boundary-cycle count, genus, and least cycle length of a word.
//
// # Safety
// `word` must be live; out-pointers, when non-null, must be writable.
enum FsStatus fs_word_boundary(const struct FsWord *word,
                               uint32_t *out_cycles,
                               uint32_t *out_genus,
                               uint32_t *out_min_cycle);

// True iff the word is a k-filling system of genus g.
//
// # Safety
// `word` must be a live handle.
bool fs_word_is_filling_system(const struct FsWord *word, uint32_t genus, uint32_t k);

// True iff the crossing graph is disconnected.
//
// # Safety
// `word` must be a live handle.
bool fs_word_is_disconnected(const struct FsWord *word);

// Deterministic SVG rendering of the word (caller frees).
//
// # Safety
// `word` must be a live handle.
char *fs_word_render_svg(const struct FsWord *word);

// The 0-filling system X(g), g >= 1.
//
// # Safety
// `out` must be writable.
enum FsStatus fs_build_x(uint32_t genus, struct FsWord **out);

// The 1-filling system Y(g), g >= 2.
//
// # Safety
// `out` must be writable.
enum FsStatus fs_build_y(uint32_t genus, struct FsWord **out);

// The 1-filling system Z(g), g >= 1.
//
// # Safety
// `out` must be writable.
enum FsStatus fs_build_z(uint32_t genus, struct FsWord **out);

// Enumerates the basis of U_k at a genus. With `override_budget` the
// 20-point enumeration guard is lifted.
//
// # Safety
// `out` must be writable.
enum FsStatus fs_enumerate_basis(uint32_t genus,
                                 uint32_t k,
                                 bool override_budget,
                                 struct FsBasis **out);

// # Safety
// `basis` must come from this library and not be freed twice.
void fs_basis_free(struct FsBasis *basis);

// Number of classes in the basis.
//
// # Safety
// `basis` must be a live handle.
uint64_t fs_basis_len(const struct FsBasis *basis);

// Class `index` of the basis as a fresh word handle; sets the torsion
// flag when requested.
//
// # Safety
// `basis` must be live; out-pointers must be writable.
enum FsStatus fs_basis_class(const struct FsBasis *basis,
                             uint64_t index,
                             struct FsWord **out_word,
                             bool *out_torsion);

// Writes the basis cache file (text form) to `path`.
//
// # Safety
// `basis` must be live; `path` must be a valid NUL-terminated string.
enum FsStatus fs_basis_write(const struct FsBasis *basis, const char *path);

// Cokernel of U_1 -> U_0 at a genus, as a text descriptor such as `0` or
// `Z + Z/2` (caller frees via `out_group`).
//
// # Safety
// `out_group` must be writable.
enum FsStatus fs_coinvariants(uint32_t genus, bool override_budget, char **out_group);

// Runs the verification pipeline at a genus; the machine-format report
// (one `CHECK` line per check) lands in `out_report` (caller frees).
// Returns `CheckFailed` when a check fails.
//
// # Safety
// `out_report`, when non-null, must be writable.
enum FsStatus fs_verify_paper(uint32_t genus,
                              bool stretch,
                              bool override_budget,
                              char **out_report);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* FILLSYS_H */
