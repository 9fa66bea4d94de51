#ifndef METACIRC_H
#define METACIRC_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * 1 = true, 0 = false, -1 = undecided within the budgets.
 */
#define MC_UNDECIDED -1

/**
 * Scenario outcomes reported by [`mc_verify_scenario`].
 */
#define MC_SCENARIO_PASS 0

#define MC_SCENARIO_FAIL 1

#define MC_SCENARIO_INCONCLUSIVE 2

/**
 * Flags readable from a report.
 */
typedef enum McFlag {
  McFlag_VertexTransitive = 0,
  McFlag_Cayley = 1,
  McFlag_WeakMetacirculant = 2,
  McFlag_SplitWeakMetacirculant = 3,
  McFlag_Metacirculant = 4,
  McFlag_WeakMetacirculantCayley = 5,
} McFlag;

typedef enum McStatus {
  McStatus_Ok = 0,
  McStatus_NullPointer = 1,
  McStatus_InvalidArgument = 2,
  McStatus_ParseError = 3,
  McStatus_CapExceeded = 4,
  McStatus_BudgetExceeded = 5,
  McStatus_PreconditionFailed = 6,
  McStatus_Panic = 7,
} McStatus;

typedef struct McGraph McGraph;

typedef struct McReport McReport;

/**
 * Budgets for [`mc_classify`]; zero fields take the library defaults.
 */
typedef struct McBudgets {
  uint64_t max_group_order;
  uintptr_t max_aut_degree;
  uint64_t search_nodes;
  uint64_t seed;
} McBudgets;

/**
 * Message of the last failed call on this thread, or null. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *mc_last_error(void);

/**
 * # Safety
 * `out` must be valid for a write.
 */
enum McStatus mc_graph_mp(uint64_t m, uint64_t n, uint64_t s, uint64_t t, struct McGraph **out);

/**
 * # Safety
 * `out` must be valid for a write.
 */
enum McStatus mc_graph_petersen(uintptr_t n, uintptr_t t, struct McGraph **out);

/**
 * # Safety
 * `connection` must point to `len` readable values; `out` must be valid for a write.
 */
enum McStatus mc_graph_circulant(uintptr_t n,
                                 const uintptr_t *connection,
                                 uintptr_t len,
                                 struct McGraph **out);

/**
 * Parses the `n <V> m <E>` edge-list format.
 *
 * # Safety
 * `text` must be a nul-terminated string; `out` must be valid for a write.
 */
enum McStatus mc_graph_parse_edge_list(const char *text, struct McGraph **out);

/**
 * # Safety
 * `g` must be null or a handle from this library.
 */
uintptr_t mc_graph_order(const struct McGraph *g);

/**
 * # Safety
 * `g` must be null or a handle from this library.
 */
uintptr_t mc_graph_edge_count(const struct McGraph *g);

/**
 * The graph in edge-list form; release with [`mc_string_free`]. Null on error.
 *
 * # Safety
 * `g` must be null or a handle from this library.
 */
char *mc_graph_to_edge_list(const struct McGraph *g);

/**
 * # Safety
 * `g` must be null or a handle from this library, not yet freed.
 */
void mc_graph_free(struct McGraph *g);

/**
 * Writes 1 to `out` when the graphs are isomorphic, else 0.
 *
 * # Safety
 * `a` and `b` must be graph handles; `out` must be valid for a write.
 */
enum McStatus mc_graphs_isomorphic(const struct McGraph *a,
                                   const struct McGraph *b,
                                   uintptr_t bound,
                                   int32_t *out);

/**
 * Classifies `g`; `p = 0` infers the prime from the order. `budgets` may
 * be null for the defaults.
 *
 * # Safety
 * `g` must be a graph handle, `budgets` null or readable, `out` valid for a write.
 */
enum McStatus mc_classify(const struct McGraph *g,
                          uint64_t p,
                          const struct McBudgets *budgets,
                          struct McReport **out);

/**
 * 1, 0, or [`MC_UNDECIDED`]; [`MC_UNDECIDED`] also for a null report.
 *
 * # Safety
 * `r` must be null or a report handle.
 */
int32_t mc_report_flag(const struct McReport *r, enum McFlag flag);

/**
 * The report as JSON; release with [`mc_string_free`].
 *
 * # Safety
 * `r` must be null or a report handle.
 */
char *mc_report_to_json(const struct McReport *r);

/**
 * # Safety
 * `r` must be null or a report handle, not yet freed.
 */
void mc_report_free(struct McReport *r);

/**
 * Runs one verification scenario with default budgets and the given seed;
 * writes one of the `MC_SCENARIO_*` values to `out`.
 *
 * # Safety
 * `id` must be a nul-terminated string; `out` must be valid for a write.
 */
enum McStatus mc_verify_scenario(const char *id, uint64_t seed, int32_t *out);

/**
 * # Safety
 * `s` must be null or a string returned by this library, not yet freed.
 */
void mc_string_free(char *s);

#endif  /* METACIRC_H */
