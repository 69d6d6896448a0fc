#ifndef WEDGEKIT_H
#define WEDGEKIT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum WkStatus {
  WK_STATUS_OK = 0,
  WK_STATUS_NULL_POINTER = 1,
  WK_STATUS_INVALID_ARGUMENT = 2,
  WK_STATUS_MALFORMED_WEDGE = 3,
  WK_STATUS_NON_FINITE = 4,
  WK_STATUS_IO = 5,
  WK_STATUS_PARSE = 6,
  WK_STATUS_SIZE_BOUND = 7,
  WK_STATUS_INFEASIBLE = 8,
  WK_STATUS_INTERNAL = 9,
  WK_STATUS_PANIC = 10,
} WkStatus;

typedef enum WkGlyph {
  WK_GLYPH_VERTICAL = 0,
  WK_GLYPH_HORIZONTAL = 1,
  WK_GLYPH_WINKELHAKEN = 2,
} WkGlyph;

typedef enum WkMethod {
  WK_METHOD_APX1 = 0,
  WK_METHOD_APX2 = 1,
  WK_METHOD_EXACT = 2,
} WkMethod;

typedef struct WkDataset WkDataset;

typedef struct WkGraph WkGraph;

typedef struct WkModel WkModel;

typedef struct WkCostModel {
  double alpha;
  double del_cost;
  // Non-zero makes arrangement edges lost with a wedge free.
  uint8_t free_arrangement_deletion;
  // Combined wedge bound for the exact method.
  size_t max_wedges;
} WkCostModel;

// One wedge: a `WkGlyph` value and points as `x, y` pairs in depth, tail,
// right, left order.
typedef struct WkWedge {
  uint32_t glyph;
  double points[8];
} WkWedge;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread; valid until the next call.
const char *wk_last_error(void);

// Library version, a static NUL-terminated string.
const char *wk_version(void);

struct WkCostModel wk_cost_model_default(void);

// Builds a validated graph from `count` wedges.
//
// # Safety
// `id` is a NUL-terminated string, `wedges` points to `count` wedges (may be
// null when `count` is 0) and `out` is writable.
enum WkStatus wk_graph_from_wedges(const char *id,
                                   size_t label,
                                   const struct WkWedge *wedges,
                                   size_t count,
                                   struct WkGraph **out);

// # Safety
// `g` is null or a graph from this library not yet freed.
void wk_graph_free(struct WkGraph *g);

// # Safety
// `g` is a live graph and `out` is writable.
enum WkStatus wk_graph_vertex_count(const struct WkGraph *g, size_t *out);

// # Safety
// `g` is a live graph and `out` is writable.
enum WkStatus wk_graph_edge_count(const struct WkGraph *g, size_t *out);

// # Safety
// `g` is a live graph and `out` is writable.
enum WkStatus wk_graph_label(const struct WkGraph *g, size_t *out);

// Loads a benchmark directory or JSON file.
//
// # Safety
// `path` is a NUL-terminated string and `out` is writable.
enum WkStatus wk_dataset_load(const char *path, struct WkDataset **out);

// # Safety
// `d` is null or a dataset from this library not yet freed.
void wk_dataset_free(struct WkDataset *d);

// # Safety
// `d` is a live dataset and `out` is writable.
enum WkStatus wk_dataset_len(const struct WkDataset *d, size_t *out);

// Copies graph `index` into a new handle owned by the caller.
//
// # Safety
// `d` is a live dataset and `out` is writable.
enum WkStatus wk_dataset_get_graph(const struct WkDataset *d, size_t index, struct WkGraph **out);

// Edit distance from `g` to `h` with a `WkMethod` value. A null `cost` uses
// the defaults.
//
// # Safety
// `g` and `h` are live graphs, `cost` is null or readable, `out` is writable.
enum WkStatus wk_distance(const struct WkGraph *g,
                          const struct WkGraph *h,
                          uint32_t method,
                          const struct WkCostModel *cost,
                          double *out);

// # Safety
// `path` is a NUL-terminated string and `out` is writable.
enum WkStatus wk_model_load(const char *path, struct WkModel **out);

// # Safety
// `m` is null or a model from this library not yet freed.
void wk_model_free(struct WkModel *m);

// # Safety
// `m` is a live model and `out` is writable.
enum WkStatus wk_model_classes(const struct WkModel *m, size_t *out);

// Class probabilities for `g` written to `probs` (`len` must equal the class
// count) and the argmax class to `class_out`. Either output may be null.
//
// # Safety
// `m` and `g` are live, `probs` is null or has room for `len` values.
enum WkStatus wk_model_predict(const struct WkModel *m,
                               const struct WkGraph *g,
                               double *probs,
                               size_t len,
                               size_t *class_out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* WEDGEKIT_H */
