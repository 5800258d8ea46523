#include "ctqw/ctqw.h"

#include "core/analysis.hpp"
#include "core/graph.hpp"

#include "json.hpp"

#include <cstring>
#include <string>

struct ctqw_graph {
  std::shared_ptr<const ctqw::Graph> g;
};

struct ctqw_analysis {
  ctqw::AnalysisResult result;
  std::string json;
};

struct ctqw_trace {
  ctqw::AnalysisResult result;  // carries the trace
  std::string csv;
  std::string summary;
};

struct ctqw_sweep {
  std::string csv;
};

struct ctqw_schedule {
  std::string json;
};

namespace {

thread_local std::string g_last_error;

ctqw_status fail(ctqw_status code, const char* what) {
  g_last_error = what ? what : "";
  return code;
}

template <typename Fn>
ctqw_status guarded(Fn&& fn) {
  try {
    fn();
    return CTQW_OK;
  } catch (const ctqw::ParseError& e) {
    return fail(CTQW_ERROR_PARSE, e.what());
  } catch (const ctqw::InapplicableError& e) {
    return fail(CTQW_ERROR_INAPPLICABLE, e.what());
  } catch (const ctqw::NumericalError& e) {
    return fail(CTQW_ERROR_NUMERICAL, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(CTQW_ERROR_INVALID_ARGUMENT, e.what());
  } catch (const std::exception& e) {
    return fail(CTQW_ERROR_NUMERICAL, e.what());
  }
}

}  // namespace

extern "C" {

const char* ctqw_version(void) { return "0.1.0"; }

const char* ctqw_last_error(void) { return g_last_error.c_str(); }

ctqw_status ctqw_graph_create(const char* spec, ctqw_graph** out) {
  if (!spec || !out) return fail(CTQW_ERROR_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] { *out = new ctqw_graph{ctqw::parse_graph_spec(spec)}; });
}

void ctqw_graph_destroy(ctqw_graph* g) { delete g; }

ctqw_status ctqw_graph_num_vertices(const ctqw_graph* g, int* out) {
  if (!g || !out) return fail(CTQW_ERROR_INVALID_ARGUMENT, "null argument");
  *out = g->g->num_vertices();
  return CTQW_OK;
}

ctqw_status ctqw_graph_distance(const ctqw_graph* g, int v1, int v2, int* out) {
  if (!g || !out) return fail(CTQW_ERROR_INVALID_ARGUMENT, "null argument");
  return guarded([&] { *out = g->g->distance(v1, v2); });
}

ctqw_status ctqw_analyze(const char* graph_spec, const char* marked_spec, const char* gamma,
                         ctqw_analysis** out) {
  if (!graph_spec || !marked_spec || !out) return fail(CTQW_ERROR_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    ctqw::AnalysisOptions opts;
    if (gamma) opts.gamma = gamma;
    auto a = std::make_unique<ctqw_analysis>();
    a->result = ctqw::analyze(graph_spec, marked_spec, opts);
    a->json = ctqw::report_json(a->result);
    *out = a.release();
  });
}

void ctqw_analysis_destroy(ctqw_analysis* a) { delete a; }

const char* ctqw_analysis_json(const ctqw_analysis* a) { return a ? a->json.c_str() : ""; }

ctqw_status ctqw_analysis_number(const ctqw_analysis* a, const char* key, double* out) {
  if (!a || !key || !out) return fail(CTQW_ERROR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const auto j = nlohmann::json::parse(a->json);
    const auto it = j.find(key);
    if (it == j.end() || !it->is_number())
      throw std::invalid_argument(std::string("no numeric report field named '") + key + "'");
    *out = it->get<double>();
  });
}

ctqw_status ctqw_simulate(const char* graph_spec, const char* marked_spec, const char* gamma,
                          double t_max, double dt, ctqw_trace** out) {
  if (!graph_spec || !marked_spec || !out) return fail(CTQW_ERROR_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    ctqw::AnalysisOptions opts;
    if (gamma) opts.gamma = gamma;
    opts.t_max = t_max;
    opts.dt = dt;
    opts.with_trace = true;
    auto t = std::make_unique<ctqw_trace>();
    t->result = ctqw::analyze(graph_spec, marked_spec, opts);
    t->csv = ctqw::trace_csv(t->result.trace);
    t->summary = ctqw::trace_summary_json(t->result);
    *out = t.release();
  });
}

void ctqw_trace_destroy(ctqw_trace* t) { delete t; }

ctqw_status ctqw_trace_length(const ctqw_trace* t, size_t* out) {
  if (!t || !out) return fail(CTQW_ERROR_INVALID_ARGUMENT, "null argument");
  *out = t->result.trace.times.size();
  return CTQW_OK;
}

ctqw_status ctqw_trace_row(const ctqw_trace* t, size_t i, double* time, double* p_exact, double* p_approx) {
  if (!t) return fail(CTQW_ERROR_INVALID_ARGUMENT, "null argument");
  const auto& tr = t->result.trace;
  if (i >= tr.times.size()) return fail(CTQW_ERROR_INVALID_ARGUMENT, "row index out of range");
  if (time) *time = tr.times[i];
  if (p_exact) *p_exact = tr.p_exact[i];
  if (p_approx) *p_approx = tr.p_approx[i];
  return CTQW_OK;
}

const char* ctqw_trace_csv(const ctqw_trace* t) { return t ? t->csv.c_str() : ""; }

const char* ctqw_trace_summary_json(const ctqw_trace* t) { return t ? t->summary.c_str() : ""; }

ctqw_status ctqw_sweep_gamma(const char* graph_spec, const char* marked_spec, const double* gammas,
                             size_t count, ctqw_sweep** out) {
  if (!graph_spec || !marked_spec || !out || (!gammas && count > 0))
    return fail(CTQW_ERROR_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    const std::vector<double> grid(gammas, gammas + count);
    const auto rows = ctqw::sweep_gamma(graph_spec, marked_spec, grid);
    *out = new ctqw_sweep{ctqw::sweep_csv(rows)};
  });
}

void ctqw_sweep_destroy(ctqw_sweep* s) { delete s; }

const char* ctqw_sweep_csv(const ctqw_sweep* s) { return s ? s->csv.c_str() : ""; }

ctqw_status ctqw_johnson_schedule(int n, int k, int hidden_delta, ctqw_schedule** out) {
  if (!out) return fail(CTQW_ERROR_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    const auto report = ctqw::johnson_schedule(n, k, hidden_delta);
    *out = new ctqw_schedule{ctqw::schedule_json(report)};
  });
}

void ctqw_schedule_destroy(ctqw_schedule* s) { delete s; }

const char* ctqw_schedule_json(const ctqw_schedule* s) { return s ? s->json.c_str() : ""; }

}  // extern "C"
