// ctqw command-line front end.  Talks to the library exclusively through the
// C API in ctqw/ctqw.h.
//
// Exit codes: 0 success, 2 parse/usage error, 3 framework inapplicable,
// 4 numerical failure.

#include "ctqw/ctqw.h"

#include "CLI11.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

int exit_code(ctqw_status st) {
  switch (st) {
    case CTQW_OK: return 0;
    case CTQW_ERROR_PARSE: return 2;
    case CTQW_ERROR_INVALID_ARGUMENT: return 2;
    case CTQW_ERROR_INAPPLICABLE: return 3;
    case CTQW_ERROR_NUMERICAL: return 4;
  }
  return 4;
}

int report_failure(ctqw_status st) {
  std::cerr << "error: " << ctqw_last_error() << "\n";
  return exit_code(st);
}

bool write_output(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
    return true;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    std::cerr << "error: cannot write " << path << "\n";
    return false;
  }
  out << content;
  return true;
}

std::vector<double> parse_grid(const std::string& list, double lo, double hi, int steps) {
  std::vector<double> grid;
  if (!list.empty()) {
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (item.empty()) continue;
      grid.push_back(std::stod(item));
    }
    return grid;
  }
  if (steps == 1) {
    grid.push_back(lo);
    return grid;
  }
  for (int i = 0; i < steps; ++i) grid.push_back(lo + (hi - lo) * i / (steps - 1));
  return grid;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spatial search by continuous-time quantum walk: secular-matrix analysis, "
               "exact dynamics, and closed-form Johnson-graph predictions"};
  app.require_subcommand(1);

  std::string graph_spec, marked_spec, gamma, out_path;

  auto add_instance_flags = [&](CLI::App* cmd, bool with_gamma = true) {
    cmd->add_option("--graph", graph_spec,
                    "Graph spec: johnson:n=..,k=.. | complete:n=.. | "
                    "complete-bipartite:a=..,b=.. | hypercube:d=.. | file:<path>")
        ->required();
    cmd->add_option("--marked", marked_spec,
                    "Marked vertices: comma-separated indices, part:left|right, or auto-delta:<d>")
        ->required();
    if (with_gamma)
      cmd->add_option("--gamma", gamma,
                      "Hopping rate: a positive number, 'midpoint', or 'asymptotic' "
                      "(default: asymptotic on Johnson two-marked instances, else midpoint)");
    cmd->add_option("--out", out_path, "Output file (default: stdout)");
  };

  auto* analyze = app.add_subcommand("analyze", "Full spectral analysis and run-time prediction (JSON report)");
  add_instance_flags(analyze);

  auto* simulate = app.add_subcommand("simulate", "Exact vs two-term evolution trace (CSV + summary JSON)");
  add_instance_flags(simulate);
  double t_max = 0, dt = 0;
  simulate->add_option("--tmax", t_max, "Trace end time (default 2.5 * predicted t_run)");
  simulate->add_option("--dt", dt, "Trace step (default t_run / 400)");

  auto* sweep = app.add_subcommand("sweep-gamma", "Analysis table over a gamma grid (CSV)");
  add_instance_flags(sweep, false);
  std::string grid_list;
  double grid_lo = 0, grid_hi = 0;
  int grid_steps = 0;
  sweep->add_option("--gamma-grid", grid_list, "Comma-separated gamma values");
  sweep->add_option("--gamma-min", grid_lo, "Uniform grid start");
  sweep->add_option("--gamma-max", grid_hi, "Uniform grid end");
  sweep->add_option("--gamma-steps", grid_steps, "Uniform grid size");

  auto* schedule = app.add_subcommand("johnson-schedule",
                                      "Distance-hypothesis schedule for a hidden marked distance (JSON log)");
  int sn = 0, sk = 0, hidden_delta = 0;
  long hidden_seed = -1;
  schedule->add_option("--n", sn, "Johnson parameter n")->required();
  schedule->add_option("--k", sk, "Johnson parameter k")->required();
  schedule->add_option("--hidden-delta", hidden_delta, "True distance between the two marked vertices");
  schedule->add_option("--hidden-seed", hidden_seed, "Derive the hidden distance as 1 + seed mod k");
  schedule->add_option("--out", out_path, "Output file (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  if (analyze->parsed()) {
    ctqw_analysis* a = nullptr;
    const ctqw_status st = ctqw_analyze(graph_spec.c_str(), marked_spec.c_str(), gamma.c_str(), &a);
    if (st != CTQW_OK) return report_failure(st);
    const bool ok = write_output(out_path, ctqw_analysis_json(a));
    ctqw_analysis_destroy(a);
    return ok ? 0 : 4;
  }

  if (simulate->parsed()) {
    ctqw_trace* t = nullptr;
    const ctqw_status st = ctqw_simulate(graph_spec.c_str(), marked_spec.c_str(), gamma.c_str(), t_max, dt, &t);
    if (st != CTQW_OK) return report_failure(st);
    bool ok = write_output(out_path, ctqw_trace_csv(t));
    // Summary lands next to the CSV, or on stderr when streaming to stdout.
    if (ok) {
      if (out_path.empty()) {
        std::cerr << ctqw_trace_summary_json(t);
      } else {
        ok = write_output(out_path + ".summary.json", ctqw_trace_summary_json(t));
      }
    }
    ctqw_trace_destroy(t);
    return ok ? 0 : 4;
  }

  if (sweep->parsed()) {
    std::vector<double> grid;
    try {
      grid = parse_grid(grid_list, grid_lo, grid_hi, grid_steps);
    } catch (const std::exception&) {
      std::cerr << "error: bad gamma grid\n";
      return 2;
    }
    if (grid.empty()) {
      std::cerr << "error: empty gamma grid (use --gamma-grid or --gamma-min/max/steps)\n";
      return 2;
    }
    ctqw_sweep* s = nullptr;
    const ctqw_status st =
        ctqw_sweep_gamma(graph_spec.c_str(), marked_spec.c_str(), grid.data(), grid.size(), &s);
    if (st != CTQW_OK) return report_failure(st);
    const bool ok = write_output(out_path, ctqw_sweep_csv(s));
    ctqw_sweep_destroy(s);
    return ok ? 0 : 4;
  }

  if (schedule->parsed()) {
    if (hidden_delta <= 0 && hidden_seed >= 0 && sk >= 1) hidden_delta = 1 + static_cast<int>(hidden_seed % sk);
    if (hidden_delta <= 0) {
      std::cerr << "error: provide --hidden-delta or --hidden-seed\n";
      return 2;
    }
    ctqw_schedule* s = nullptr;
    const ctqw_status st = ctqw_johnson_schedule(sn, sk, hidden_delta, &s);
    if (st != CTQW_OK) return report_failure(st);
    const bool ok = write_output(out_path, ctqw_schedule_json(s));
    ctqw_schedule_destroy(s);
    return ok ? 0 : 4;
  }

  return 2;
}
