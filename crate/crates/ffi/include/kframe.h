#ifndef KFRAME_H
#define KFRAME_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum KfOp {
  KF_OP_ADD = 0,
  KF_OP_SUB = 1,
  KF_OP_MUL = 2,
  KF_OP_DIV = 3,
} KfOp;

typedef enum KfStatus {
  KF_STATUS_OK = 0,
  KF_STATUS_NULL_POINTER = 1,
  KF_STATUS_INVALID_UTF8 = 2,
  KF_STATUS_PARSE_ERROR = 3,
  KF_STATUS_SEMANTIC_ERROR = 4,
  /**
   * The request ran but a guaranteed identity failed; the report is still
   * returned.
   */
  KF_STATUS_VERIFICATION_FAILED = 5,
  /**
   * Element out of range, or an operation undefined on the input.
   */
  KF_STATUS_INVALID_ARGUMENT = 6,
  KF_STATUS_INTERNAL = 7,
} KfStatus;

/**
 * A parsed input document.
 */
typedef struct KfDocument KfDocument;

/**
 * A finite field.
 */
typedef struct KfField KfField;

/**
 * Library version as a static nul-terminated string.
 */
const char *kf_version(void);

/**
 * Message of the last failed call on this thread, or null. Valid until the
 * next call on the same thread.
 */
const char *kf_last_error(void);

/**
 * Line and column of the last parse error (both 0 for other errors).
 *
 * # Safety
 * `line` and `col` must be null or valid for writes.
 */
void kf_last_error_position(size_t *line, size_t *col);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void kf_string_free(char *s);

/**
 * Parses a document.
 *
 * # Safety
 * `text` must be a nul-terminated string and `out` valid for writes.
 */
enum KfStatus kf_document_parse(const char *text, struct KfDocument **out);

/**
 * # Safety
 * `doc` must be null or a handle from [`kf_document_parse`] not yet freed.
 */
void kf_document_free(struct KfDocument *doc);

/**
 * Canonical text of a document.
 *
 * # Safety
 * `doc` must be a live handle and `out` valid for writes.
 */
enum KfStatus kf_document_render(const struct KfDocument *doc, char **out);

/**
 * Runs the document's request and writes the report (key=value lines, or
 * one JSON object when `json` is true). A failed verification still writes
 * the report and returns `VerificationFailed`.
 *
 * # Safety
 * `doc` must be a live handle and `out` valid for writes.
 */
enum KfStatus kf_document_run(const struct KfDocument *doc, bool json, char **out);

/**
 * Opens a finite field from a descriptor such as `F7` or `F9 mod y^2+1`.
 *
 * # Safety
 * `desc` must be a nul-terminated string and `out` valid for writes.
 */
enum KfStatus kf_field_open(const char *desc, struct KfField **out);

/**
 * # Safety
 * `field` must be null or a handle from [`kf_field_open`] not yet freed.
 */
void kf_field_free(struct KfField *field);

/**
 * Number of elements; 0 for a null handle.
 *
 * # Safety
 * `field` must be null or a live handle.
 */
uint64_t kf_field_order(const struct KfField *field);

/**
 * `a op b` on element indices, `op` one of the [`KfOp`] values.
 *
 * # Safety
 * `field` must be a live handle and `out` valid for writes.
 */
enum KfStatus kf_field_arith(const struct KfField *field,
                             uint32_t op,
                             uint64_t a,
                             uint64_t b,
                             uint64_t *out);

/**
 * `a^e`; negative exponents need a nonzero `a`.
 *
 * # Safety
 * `field` must be a live handle and `out` valid for writes.
 */
enum KfStatus kf_field_pow(const struct KfField *field, uint64_t a, int64_t e, uint64_t *out);

/**
 * The fixed generator of the multiplicative group.
 *
 * # Safety
 * `field` must be a live handle and `out` valid for writes.
 */
enum KfStatus kf_field_generator(const struct KfField *field, uint64_t *out);

/**
 * Discrete log of `a` to the base [`kf_field_generator`].
 *
 * # Safety
 * `field` must be a live handle and `out` valid for writes.
 */
enum KfStatus kf_field_log(const struct KfField *field, uint64_t a, uint64_t *out);

/**
 * Human-readable form of an element, e.g. `y+1`.
 *
 * # Safety
 * `field` must be a live handle and `out` valid for writes.
 */
enum KfStatus kf_field_format(const struct KfField *field, uint64_t a, char **out);

#endif  /* KFRAME_H */
