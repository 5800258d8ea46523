/* ctqw — spatial search by continuous-time quantum walk.
 *
 * C interface to the analysis library: opaque handles, status codes, and
 * serialized results (JSON reports, CSV traces).  Strings returned by
 * accessor functions stay owned by their handle and remain valid until the
 * handle is destroyed.  All functions are thread-safe as long as each handle
 * is used from one thread at a time.
 */

#ifndef CTQW_H
#define CTQW_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ctqw_status {
  CTQW_OK = 0,
  CTQW_ERROR_INVALID_ARGUMENT = 1,
  CTQW_ERROR_PARSE = 2,         /* graph/marked/gamma spec or file unparseable */
  CTQW_ERROR_INAPPLICABLE = 3,  /* framework inapplicable to the instance */
  CTQW_ERROR_NUMERICAL = 4      /* solver or bracketing failure */
} ctqw_status;

typedef struct ctqw_graph ctqw_graph;
typedef struct ctqw_analysis ctqw_analysis;
typedef struct ctqw_trace ctqw_trace;
typedef struct ctqw_sweep ctqw_sweep;
typedef struct ctqw_schedule ctqw_schedule;

const char* ctqw_version(void);

/* Message for the most recent failure on the calling thread. */
const char* ctqw_last_error(void);

/* Graph spec mini-language: "johnson:n=10,k=2", "complete:n=8",
 * "complete-bipartite:a=6,b=6", "hypercube:d=5", "file:<path>". */
ctqw_status ctqw_graph_create(const char* spec, ctqw_graph** out);
void ctqw_graph_destroy(ctqw_graph* g);
ctqw_status ctqw_graph_num_vertices(const ctqw_graph* g, int* out);
ctqw_status ctqw_graph_distance(const ctqw_graph* g, int v1, int v2, int* out);

/* Marked spec: "0,7", "part:left", "part:right", "auto-delta:1".
 * gamma: "midpoint", "asymptotic", a positive number, or NULL/"" for the
 * default rule (asymptotic on Johnson two-marked instances, else midpoint). */
ctqw_status ctqw_analyze(const char* graph_spec, const char* marked_spec, const char* gamma,
                         ctqw_analysis** out);
void ctqw_analysis_destroy(ctqw_analysis* a);
/* Full report; stable keys include graph, marked, gamma, gamma_mode,
 * lambda_minus, lambda_plus, epsilon, lambda_plus_multiplicity,
 * skipped_eigenvalues, overlaps, leakage_bound, sinusoidal_residual,
 * t_run_predicted, p_succ_predicted, t_opt_measured, p_exact_at_t_opt. */
const char* ctqw_analysis_json(const ctqw_analysis* a);
/* Top-level numeric report field by key. */
ctqw_status ctqw_analysis_number(const ctqw_analysis* a, const char* key, double* out);

/* t_max/dt <= 0 pick the defaults (2.5 * t_run, t_run / 400). */
ctqw_status ctqw_simulate(const char* graph_spec, const char* marked_spec, const char* gamma,
                          double t_max, double dt, ctqw_trace** out);
void ctqw_trace_destroy(ctqw_trace* t);
ctqw_status ctqw_trace_length(const ctqw_trace* t, size_t* out);
ctqw_status ctqw_trace_row(const ctqw_trace* t, size_t i, double* time, double* p_exact, double* p_approx);
/* RFC-4180-style CSV, header t,p_exact,p_approx, 17 significant digits. */
const char* ctqw_trace_csv(const ctqw_trace* t);
const char* ctqw_trace_summary_json(const ctqw_trace* t);

ctqw_status ctqw_sweep_gamma(const char* graph_spec, const char* marked_spec, const double* gammas,
                             size_t count, ctqw_sweep** out);
void ctqw_sweep_destroy(ctqw_sweep* s);
const char* ctqw_sweep_csv(const ctqw_sweep* s);

/* Runs the distance-hypothesis schedule (delta = 1..k) against a Johnson
 * instance whose true marked distance is hidden_delta. */
ctqw_status ctqw_johnson_schedule(int n, int k, int hidden_delta, ctqw_schedule** out);
void ctqw_schedule_destroy(ctqw_schedule* s);
const char* ctqw_schedule_json(const ctqw_schedule* s);

#ifdef __cplusplus
}
#endif

#endif /* CTQW_H */
