#include "core/analysis.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace ctqw {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

// "a=1,b=2" -> values in the order of `keys`; every key required.
std::vector<int> parse_kv_ints(const std::string& body, const std::vector<std::string>& keys,
                               const std::string& what) {
  std::vector<int> out(keys.size());
  std::vector<bool> seen(keys.size(), false);
  std::stringstream ss(body);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw ParseError(what + ": expected key=value, got '" + item + "'");
    const std::string key = trim(item.substr(0, eq));
    const std::string val = trim(item.substr(eq + 1));
    auto it = std::find(keys.begin(), keys.end(), key);
    if (it == keys.end()) throw ParseError(what + ": unknown parameter '" + key + "'");
    std::size_t pos = 0;
    int v = 0;
    try {
      v = std::stoi(val, &pos);
    } catch (const std::exception&) {
      throw ParseError(what + ": '" + val + "' is not an integer");
    }
    if (pos != val.size()) throw ParseError(what + ": '" + val + "' is not an integer");
    const auto idx = static_cast<std::size_t>(it - keys.begin());
    out[idx] = v;
    seen[idx] = true;
  }
  for (std::size_t i = 0; i < keys.size(); ++i)
    if (!seen[i]) throw ParseError(what + ": missing parameter '" + keys[i] + "'");
  return out;
}

std::string format_g17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace

std::shared_ptr<const Graph> parse_graph_spec(const std::string& raw) {
  const std::string spec = trim(raw);
  const auto colon = spec.find(':');
  if (colon == std::string::npos) throw ParseError("graph spec needs the form family:params, got '" + spec + "'");
  const std::string fam = spec.substr(0, colon);
  const std::string body = spec.substr(colon + 1);
  try {
    if (fam == "johnson") {
      const auto v = parse_kv_ints(body, {"n", "k"}, "johnson");
      return std::make_shared<const Graph>(Graph::johnson(v[0], v[1]));
    }
    if (fam == "complete") {
      const auto v = parse_kv_ints(body, {"n"}, "complete");
      return std::make_shared<const Graph>(Graph::complete(v[0]));
    }
    if (fam == "complete-bipartite") {
      const auto v = parse_kv_ints(body, {"a", "b"}, "complete-bipartite");
      return std::make_shared<const Graph>(Graph::complete_bipartite(v[0], v[1]));
    }
    if (fam == "hypercube") {
      const auto v = parse_kv_ints(body, {"d"}, "hypercube");
      return std::make_shared<const Graph>(Graph::hypercube(v[0]));
    }
    if (fam == "file") {
      return std::make_shared<const Graph>(Graph::from_edge_list_file(body));
    }
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("graph spec: ") + e.what());
  }
  throw ParseError("unknown graph family '" + fam + "'");
}

std::vector<int> parse_marked_spec(const std::string& raw, const Graph& g) {
  const std::string spec = trim(raw);
  if (spec.empty()) throw ParseError("marked spec is empty");
  if (spec.rfind("part:", 0) == 0) {
    if (g.family() != GraphFamily::complete_bipartite)
      throw ParseError("part:left/right applies to complete-bipartite graphs only");
    const std::string side = spec.substr(5);
    const int a = g.family_params()[0], b = g.family_params()[1];
    std::vector<int> out;
    if (side == "left")
      for (int i = 0; i < a; ++i) out.push_back(i);
    else if (side == "right")
      for (int i = a; i < a + b; ++i) out.push_back(i);
    else
      throw ParseError("part must be 'left' or 'right'");
    return out;
  }
  if (spec.rfind("auto-delta:", 0) == 0) {
    if (g.family() != GraphFamily::johnson) throw ParseError("auto-delta applies to johnson graphs only");
    int delta = 0;
    try {
      delta = std::stoi(spec.substr(11));
    } catch (const std::exception&) {
      throw ParseError("auto-delta: bad distance value");
    }
    const int n = g.family_params()[0], k = g.family_params()[1];
    try {
      auto [w1, w2] = canonical_marked_pair(n, k, delta);
      return {w1, w2};
    } catch (const std::invalid_argument& e) {
      throw ParseError(std::string("auto-delta: ") + e.what());
    }
  }
  std::vector<int> out;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    std::size_t pos = 0;
    int v = 0;
    try {
      v = std::stoi(item, &pos);
    } catch (const std::exception&) {
      throw ParseError("marked spec: '" + item + "' is not a vertex index");
    }
    if (pos != item.size()) throw ParseError("marked spec: '" + item + "' is not a vertex index");
    if (v < 0 || v >= g.num_vertices()) throw ParseError("marked vertex " + item + " out of range");
    out.push_back(v);
  }
  if (out.empty()) throw ParseError("marked spec is empty");
  std::vector<int> sorted = out;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw ParseError("marked vertices must be distinct");
  return out;
}

const char* gamma_mode_name(GammaMode m) {
  switch (m) {
    case GammaMode::user: return "user";
    case GammaMode::midpoint: return "midpoint";
    case GammaMode::asymptotic: return "asymptotic";
  }
  return "?";
}

namespace {

struct GammaChoice {
  GammaMode mode = GammaMode::user;
  double value = 0;  // user mode only
};

GammaChoice parse_gamma_option(const std::string& raw, bool johnson_two_marked) {
  const std::string s = trim(raw);
  if (s.empty()) return {johnson_two_marked ? GammaMode::asymptotic : GammaMode::midpoint, 0};
  if (s == "midpoint") return {GammaMode::midpoint, 0};
  if (s == "asymptotic") return {GammaMode::asymptotic, 0};
  std::size_t pos = 0;
  double v = 0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw ParseError("gamma must be 'midpoint', 'asymptotic' or a positive number, got '" + s + "'");
  }
  if (pos != s.size() || !(v > 0) || !std::isfinite(v))
    throw ParseError("gamma must be 'midpoint', 'asymptotic' or a positive number, got '" + s + "'");
  return {GammaMode::user, v};
}

constexpr int kReducedDynamicsThreshold = 400;

int johnson_pair_delta(const Graph& g, int w1, int w2) {
  const auto& s1 = g.subset_of(w1);
  const auto& s2 = g.subset_of(w2);
  std::vector<int> inter;
  std::set_intersection(s1.begin(), s1.end(), s2.begin(), s2.end(), std::back_inserter(inter));
  return g.family_params()[1] - static_cast<int>(inter.size());
}

AnalysisResult analyze_on(std::shared_ptr<const Graph> g, const std::vector<int>& marked,
                          const AnalysisOptions& opts) {
  const bool johnson2 = g->family() == GraphFamily::johnson && marked.size() == 2;

  SearchInstance base;
  std::shared_ptr<const Spectrum> spectrum;
  if (johnson2) {
    base = make_johnson_instance(g, marked[0], marked[1], 1.0);
  } else {
    spectrum = std::make_shared<const Spectrum>(spectral_decomposition(*g));
    base = make_search_instance(g, spectrum, marked, 1.0);
  }

  AnalysisResult res;
  res.graph_desc = g->description();
  res.marked = marked;
  res.num_vertices = base.data.num_vertices;
  if (g->family() == GraphFamily::johnson && g->family_params()[0] <= 2 * g->family_params()[1])
    res.warnings.push_back("n <= 2k: the fixed-k large-n regime does not apply to this Johnson graph");

  const GammaChoice choice = parse_gamma_option(opts.gamma, johnson2);
  res.gamma_mode = choice.mode;
  switch (choice.mode) {
    case GammaMode::user:
      res.gamma = choice.value;
      break;
    case GammaMode::midpoint:
      res.gamma = gamma_midpoint(base).gamma;
      break;
    case GammaMode::asymptotic: {
      const AsymptoticGamma ag = gamma_asymptotic(base);
      res.gamma = ag.gamma;
      if (marked.size() >= 2 && !ag.two_symmetric)
        res.warnings.push_back(
            "asymptotic gamma reduced det(M)=0 along the Perron kernel direction; "
            "marked set is not a symmetric pair");
      break;
    }
  }

  const SearchInstance inst = base.with_gamma(res.gamma);
  const Classification cls = classify(inst);
  res.pair = compute_overlaps(inst, cls, choice.mode == GammaMode::midpoint);
  res.leakage_bound_value = leakage_bound(inst, cls.lambda_circ);
  res.sinusoidal = sinusoidal_condition(res.pair, opts.sinusoidal_threshold);
  const RunPrediction pred = run_prediction(res.pair);
  res.t_run_predicted = pred.t_run;
  res.p_succ_predicted = pred.p_succ;
  res.warnings.insert(res.warnings.end(), res.pair.warnings.begin(), res.pair.warnings.end());
  if (!res.sinusoidal.holds)
    res.warnings.push_back("sinusoidal condition fails; t_run/p_succ predictions are asymptotic only");

  // Exact dynamics: dense eigendecomposition, or the invariant-subspace
  // reduction for large Johnson two-marked instances.
  std::unique_ptr<ExactDynamics> dyn;
  if (johnson2 && base.data.num_vertices > kReducedDynamicsThreshold) {
    const int n = g->family_params()[0], k = g->family_params()[1];
    const int delta = johnson_pair_delta(*g, marked[0], marked[1]);
    const InvariantBasis basis = invariant_basis(n, k, delta);
    SearchInstance canon = inst;
    if (!((marked[0] == basis.w1_index && marked[1] == basis.w2_index) ||
          (marked[0] == basis.w2_index && marked[1] == basis.w1_index))) {
      // Same dynamics for every pair at this distance; evolve the canonical one.
      canon = make_johnson_instance(n, k, delta, res.gamma);
    }
    const ReducedHamiltonian red = reduced_hamiltonian(basis, canon);
    if (red.closure_residual > 1e-10)
      throw NumericalError("invariant subspace closure residual " + std::to_string(red.closure_residual));
    dyn = std::make_unique<ExactDynamics>(red.h, red.psi0, std::vector<int>{red.marked_row});
    res.warnings.push_back("p_exact evaluated on the invariant subspace (closed under H)");
  } else {
    const Matrix h = build_hamiltonian(inst);
    Vector psi0;
    if (spectrum) {
      psi0 = initial_state(*g, *spectrum);
    } else {
      const int n = g->num_vertices();
      psi0 = Vector::Constant(n, 1.0 / std::sqrt(static_cast<double>(n)));
    }
    dyn = std::make_unique<ExactDynamics>(h, psi0, marked);
  }

  const double t_max = opts.t_max > 0 ? opts.t_max : 2.5 * res.t_run_predicted;
  const double dt = opts.dt > 0 ? opts.dt : res.t_run_predicted / 400;
  EvolutionTrace trace = simulate_trace(*dyn, res.pair, t_max, dt);
  res.min_p_gap = trace.min_gap;
  if (trace.peak_found) {
    res.t_opt_measured = trace.t_opt;
    res.p_exact_at_t_opt = trace.p_succ_at_topt;
    if (std::abs(res.t_opt_measured / res.t_run_predicted - 1.0) > opts.asym_tol)
      res.warnings.push_back("measured peak time deviates from pi/(2 eps) by more than the asymptotic tolerance");
  } else {
    res.t_opt_measured = 0;
    res.p_exact_at_t_opt = dyn->probability(0);
    res.warnings.push_back("p_approx has no interior peak on (0, t_max]; trace is monotone");
  }
  if (opts.with_trace) res.trace = std::move(trace);
  return res;
}

}  // namespace

AnalysisResult analyze(const std::string& graph_spec, const std::string& marked_spec, const AnalysisOptions& opts) {
  auto g = parse_graph_spec(graph_spec);
  const auto marked = parse_marked_spec(marked_spec, *g);
  return analyze_on(std::move(g), marked, opts);
}

std::string report_json(const AnalysisResult& r) {
  ordered_json j;
  j["graph"] = r.graph_desc;
  j["marked"] = r.marked;
  j["gamma"] = r.gamma;
  j["gamma_mode"] = gamma_mode_name(r.gamma_mode);
  j["lambda_minus"] = r.pair.lambda_minus();
  j["lambda_plus"] = r.pair.lambda_plus();
  j["epsilon"] = r.pair.epsilon;
  j["lambda_plus_multiplicity"] = r.pair.lambda_plus_multiplicity;
  j["lambda_plus_index"] = r.pair.lambda_plus_index;
  ordered_json skipped = ordered_json::array();
  for (const auto& s : r.pair.skipped) {
    ordered_json e;
    e["lambda"] = s.lambda;
    e["multiplicity"] = s.multiplicity;
    e["reason"] = s.reason == SkipReason::in_adjacency_spectrum ? "in-adjacency-spectrum" : "zero-overlap";
    skipped.push_back(e);
  }
  j["skipped_eigenvalues"] = skipped;
  ordered_json overlaps;
  overlaps["marked_minus"] = std::vector<double>(r.pair.minus.overlaps_w.data(),
                                                 r.pair.minus.overlaps_w.data() + r.pair.minus.overlaps_w.size());
  const auto& plus0 = r.pair.plus.front();
  overlaps["marked_plus"] = std::vector<double>(plus0.overlaps_w.data(), plus0.overlaps_w.data() + plus0.overlaps_w.size());
  overlaps["psi0_minus"] = r.pair.minus.overlap_psi0;
  overlaps["psi0_plus"] = plus0.overlap_psi0;
  if (r.pair.plus.size() > 1) {
    ordered_json extra = ordered_json::array();
    for (std::size_t i = 1; i < r.pair.plus.size(); ++i) {
      ordered_json e;
      e["marked"] = std::vector<double>(r.pair.plus[i].overlaps_w.data(),
                                        r.pair.plus[i].overlaps_w.data() + r.pair.plus[i].overlaps_w.size());
      e["psi0"] = r.pair.plus[i].overlap_psi0;
      extra.push_back(e);
    }
    overlaps["plus_eigenspace_extra"] = extra;
  }
  j["overlaps"] = overlaps;
  j["leakage_bound"] = r.leakage_bound_value;
  j["sinusoidal_residual"] = r.sinusoidal.residual;
  j["sinusoidal_holds"] = r.sinusoidal.holds;
  j["t_run_predicted"] = r.t_run_predicted;
  j["p_succ_predicted"] = r.p_succ_predicted;
  j["t_opt_measured"] = r.t_opt_measured;
  j["p_exact_at_t_opt"] = r.p_exact_at_t_opt;
  j["min_p_exact_minus_p_approx"] = r.min_p_gap;
  j["num_vertices"] = r.num_vertices;
  j["warnings"] = r.warnings;
  return j.dump(2) + "\n";
}

std::string trace_csv(const EvolutionTrace& t) {
  std::string out = "t,p_exact,p_approx\n";
  for (std::size_t i = 0; i < t.times.size(); ++i) {
    out += format_g17(t.times[i]);
    out += ',';
    out += format_g17(t.p_exact[i]);
    out += ',';
    out += format_g17(t.p_approx[i]);
    out += '\n';
  }
  return out;
}

std::string trace_summary_json(const AnalysisResult& r) {
  ordered_json j;
  j["t_opt"] = r.t_opt_measured;
  j["p_exact_at_t_opt"] = r.p_exact_at_t_opt;
  j["t_run_predicted"] = r.t_run_predicted;
  j["p_succ_predicted"] = r.p_succ_predicted;
  j["epsilon"] = r.pair.epsilon;
  j["min_p_exact_minus_p_approx"] = r.min_p_gap;
  return j.dump(2) + "\n";
}

std::vector<SweepRow> sweep_gamma(const std::string& graph_spec, const std::string& marked_spec,
                                  const std::vector<double>& gammas) {
  if (gammas.empty()) throw ParseError("gamma grid is empty");
  for (double g : gammas)
    if (!(g > 0) || !std::isfinite(g)) throw ParseError("gamma grid values must be positive");
  std::vector<double> grid = gammas;
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  auto g = parse_graph_spec(graph_spec);
  const auto marked = parse_marked_spec(marked_spec, *g);
  std::vector<SweepRow> rows;
  for (double gamma : grid) {
    SweepRow row;
    row.gamma = gamma;
    try {
      AnalysisOptions opts;
      opts.gamma = format_g17(gamma);
      const AnalysisResult r = analyze_on(g, marked, opts);
      row.lambda_minus = r.pair.lambda_minus();
      row.lambda_plus = r.pair.lambda_plus();
      row.epsilon = r.pair.epsilon;
      row.p_succ_predicted = r.p_succ_predicted;
      row.p_exact_at_peak = r.p_exact_at_t_opt;
      row.ok = true;
    } catch (const std::exception& e) {
      row.note = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out = "gamma,lambda_minus,lambda_plus,epsilon,p_succ_predicted,p_exact_at_peak,note\n";
  for (const auto& r : rows) {
    out += format_g17(r.gamma);
    for (double x : {r.lambda_minus, r.lambda_plus, r.epsilon, r.p_succ_predicted, r.p_exact_at_peak}) {
      out += ',';
      out += r.ok ? format_g17(x) : "";
    }
    out += ',';
    std::string note = r.note;
    std::replace(note.begin(), note.end(), ',', ';');
    std::replace(note.begin(), note.end(), '\n', ' ');
    out += note;
    out += '\n';
  }
  return out;
}

ScheduleReport johnson_schedule(int n, int k, int hidden_delta) {
  validated_johnson_params(n, k, hidden_delta);
  ScheduleReport report;
  report.n = n;
  report.k = k;
  report.hidden_delta = hidden_delta;
  const double nd = static_cast<double>(binomial_i64(n, k));
  report.time_bound = M_PI * k * std::sqrt(nd) / (2 * std::sqrt(2.0));

  auto graph = std::make_shared<const Graph>(Graph::johnson(n, k));
  const auto [w1, w2] = canonical_marked_pair(n, k, hidden_delta);

  // The round schedule is computable without the hidden distance: for each
  // hypothesis, gamma = S1 + S1' and epsilon from the exact secular root of
  // the hypothesis instance (block data only, no graph).
  const auto hypothesis = [&](int delta) {
    const JohnsonPredictions p = johnson_predictions(n, k, delta);
    SearchInstance hyp;
    hyp.marked = {0, 1};
    hyp.gamma = p.gamma;
    hyp.data = johnson_marked_block_data(n, k, delta);
    const Classification cls = classify(hyp);
    const double eps = std::abs(cls.lambda_minus + hyp.gamma * hyp.data.phis[0]);
    return std::pair<double, double>(p.gamma, M_PI / (2 * eps));
  };
  const auto measure = [&](int /*delta*/, double gamma, double t) {
    SearchInstance inst = make_johnson_instance(graph, w1, w2, gamma);
    if (inst.data.num_vertices > 400) {
      const InvariantBasis basis = invariant_basis(n, k, hidden_delta);
      const ReducedHamiltonian red = reduced_hamiltonian(basis, inst);
      ExactDynamics dyn(red.h, red.psi0, {red.marked_row});
      return dyn.probability(t);
    }
    const Matrix h = build_hamiltonian(inst);
    const int nv = graph->num_vertices();
    const Vector psi0 = Vector::Constant(nv, 1.0 / std::sqrt(static_cast<double>(nv)));
    ExactDynamics dyn(h, psi0, inst.marked);
    return dyn.probability(t);
  };
  report.result = unknown_delta_schedule(k, hypothesis, measure);
  return report;
}

std::string schedule_json(const ScheduleReport& r) {
  ordered_json j;
  j["n"] = r.n;
  j["k"] = r.k;
  j["hidden_delta"] = r.hidden_delta;
  ordered_json rounds = ordered_json::array();
  double cumulative = 0;
  for (const auto& round : r.result.rounds) {
    ordered_json e;
    e["delta_hypothesis"] = round.delta_hypothesis;
    e["gamma"] = round.gamma;
    e["t_run"] = round.t_run;
    e["p_round"] = round.p_round;
    cumulative += round.t_run;
    e["cumulative_time"] = cumulative;
    rounds.push_back(e);
  }
  j["rounds"] = rounds;
  j["total_time"] = r.result.total_time;
  j["time_bound"] = r.time_bound;
  j["overall_success"] = r.result.overall_success;
  j["found"] = r.result.found;
  return j.dump(2) + "\n";
}

}  // namespace ctqw
