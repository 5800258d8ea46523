#pragma once

#include "core/common.hpp"
#include "core/secular.hpp"

#include <functional>
#include <vector>

namespace ctqw {

// Evaluates p_exact(t) = sum_w |<w|e^{-iHt}|psi(0)>|^2 through a dense
// eigendecomposition computed once.  Also works on a reduced Hamiltonian
// whose marked row already collapses the marked subspace into one amplitude.
class ExactDynamics {
public:
  // Full space: rows are the marked vertices of H.
  ExactDynamics(const Matrix& h, const Vector& psi0, const std::vector<int>& marked_rows);

  double probability(double t) const;

  // |psi(t)> in the basis H was given in; used by norm-conservation checks.
  Vector state_at(double t, Vector* imag_part = nullptr) const;

  const Vector& eigenvalues() const { return evals_; }
  const Matrix& eigenvectors() const { return evecs_; }
  // <psi0|lambda_j> for every eigenvector column.
  const Vector& initial_coefficients() const { return coeffs_; }

private:
  Vector evals_;
  Matrix evecs_;
  Vector coeffs_;
  Matrix marked_rows_;  // rows of evecs_ at the marked vertices
};

// Two-term approximation with phases referenced to the midpoint -gamma*phi0;
// uses the eigenprojection sum when lambda+ is degenerate.
double p_approx(const SpectralPair& pair, double t);

struct SinusoidalCheck {
  double residual = 0;  // max_w |<lam+|psi0><w|lam+> + <lam-|psi0><w|lam->|
  double residual_l2 = 0;
  bool holds = false;
  double threshold = 0.05;
};

SinusoidalCheck sinusoidal_condition(const SpectralPair& pair, double threshold = 0.05);

struct RunPrediction {
  double t_run = 0;   // pi / (2 epsilon)
  double p_succ = 0;  // 4 |<lam-|psi0>|^2 sum_w <w|lam->^2
};

RunPrediction run_prediction(const SpectralPair& pair);

// Same values, but an error when the sinusoidal condition does not hold;
// callers must fall back to find_first_peak then.
RunPrediction predict_run(const SpectralPair& pair, const SinusoidalCheck& check);

struct PeakResult {
  bool found = false;  // false: trace monotone / no interior maximum
  double t_opt = 0;
  double value = 0;
};

// First local maximum of f on (0, t_max]: coarse dt grid, then golden-section
// refinement to dt * 1e-6 resolution.
PeakResult find_first_peak(const std::function<double(double)>& f, double t_max, double dt);

struct EvolutionTrace {
  std::vector<double> times;
  std::vector<double> p_exact;
  std::vector<double> p_approx;
  double t_opt = 0;          // first peak of p_approx
  double p_succ_at_topt = 0; // p_exact evaluated there
  bool peak_found = false;
  double min_gap = 0;        // min_t (p_exact - p_approx), recorded not asserted
};

EvolutionTrace simulate_trace(const ExactDynamics& dyn, const SpectralPair& pair, double t_max, double dt);

struct ScheduleRound {
  int delta_hypothesis = 0;
  double gamma = 0;
  double t_run = 0;
  double p_round = 0;
};

struct ScheduleResult {
  std::vector<ScheduleRound> rounds;
  double total_time = 0;
  double overall_success = 0;  // 1 - prod(1 - p_round)
  bool found = false;          // overall_success >= 0.5
};

// Runs the search once per distance hypothesis delta = 1..k.  hypothesis
// supplies the (gamma, t_run) the algorithm would use for that delta;
// measure returns the true instance's success probability at that setting.
ScheduleResult unknown_delta_schedule(int k, const std::function<std::pair<double, double>(int)>& hypothesis,
                                      const std::function<double(int, double, double)>& measure);

}  // namespace ctqw
