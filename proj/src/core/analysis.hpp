#pragma once

#include "core/common.hpp"
#include "core/dynamics.hpp"
#include "core/graph.hpp"
#include "core/johnson.hpp"
#include "core/secular.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace ctqw {

// Graph spec mini-language: johnson:n=..,k=.. | complete:n=.. |
// complete-bipartite:a=..,b=.. | hypercube:d=.. | file:<path>
std::shared_ptr<const Graph> parse_graph_spec(const std::string& spec);

// Marked spec: comma-separated indices, part:left | part:right (bipartite),
// or auto-delta:<d> (canonical Johnson pair).
std::vector<int> parse_marked_spec(const std::string& spec, const Graph& g);

enum class GammaMode { user, midpoint, asymptotic };

struct AnalysisOptions {
  std::string gamma;  // "midpoint" | "asymptotic" | positive number | "" (default rule)
  double sinusoidal_threshold = 0.05;
  double asym_tol = 0.15;
  double t_max = 0;  // 0: 2.5 * t_run
  double dt = 0;     // 0: t_run / 400
  bool with_trace = false;
};

struct AnalysisResult {
  std::string graph_desc;
  std::vector<int> marked;
  std::int64_t num_vertices = 0;
  GammaMode gamma_mode = GammaMode::user;
  double gamma = 0;
  SpectralPair pair;
  double leakage_bound_value = 0;
  SinusoidalCheck sinusoidal;
  double t_run_predicted = 0;
  double p_succ_predicted = 0;
  double t_opt_measured = 0;
  double p_exact_at_t_opt = 0;
  double min_p_gap = 0;  // min_t (p_exact - p_approx) over the grid
  std::vector<std::string> warnings;
  EvolutionTrace trace;  // populated when with_trace
};

const char* gamma_mode_name(GammaMode m);

// The end-to-end numerical recipe: spectra -> gamma -> secular roots ->
// classification -> overlaps -> leakage bound -> predictions -> dynamics.
AnalysisResult analyze(const std::string& graph_spec, const std::string& marked_spec, const AnalysisOptions& opts);

std::string report_json(const AnalysisResult& r);
std::string trace_csv(const EvolutionTrace& t);
std::string trace_summary_json(const AnalysisResult& r);

struct SweepRow {
  double gamma = 0;
  double lambda_minus = 0;
  double lambda_plus = 0;
  double epsilon = 0;
  double p_succ_predicted = 0;
  double p_exact_at_peak = 0;
  std::string note;  // per-row diagnostic; empty on success
  bool ok = false;
};

std::vector<SweepRow> sweep_gamma(const std::string& graph_spec, const std::string& marked_spec,
                                  const std::vector<double>& gammas);
std::string sweep_csv(const std::vector<SweepRow>& rows);

struct ScheduleReport {
  int n = 0, k = 0, hidden_delta = 0;
  ScheduleResult result;
  double time_bound = 0;  // pi k sqrt(N) / (2 sqrt(2))
};

// Runs the unknown-distance schedule on a Johnson instance whose true
// distance is hidden_delta.
ScheduleReport johnson_schedule(int n, int k, int hidden_delta);
std::string schedule_json(const ScheduleReport& r);

}  // namespace ctqw
