#include "core/dynamics.hpp"

#include <cmath>
#include <complex>

namespace ctqw {

namespace {
constexpr double kGolden = 0.6180339887498949;
}

ExactDynamics::ExactDynamics(const Matrix& h, const Vector& psi0, const std::vector<int>& marked_rows) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
  if (solver.info() != Eigen::Success) throw NumericalError("Hamiltonian eigensolver did not converge");
  evals_ = solver.eigenvalues();
  evecs_ = solver.eigenvectors();
  coeffs_ = evecs_.transpose() * psi0;
  marked_rows_.resize(static_cast<int>(marked_rows.size()), evecs_.cols());
  for (std::size_t i = 0; i < marked_rows.size(); ++i) marked_rows_.row(static_cast<int>(i)) = evecs_.row(marked_rows[i]);
}

double ExactDynamics::probability(double t) const {
  const int m = static_cast<int>(marked_rows_.rows());
  double p = 0;
  for (int w = 0; w < m; ++w) {
    std::complex<double> amp = 0;
    for (int j = 0; j < evals_.size(); ++j)
      amp += marked_rows_(w, j) * coeffs_(j) * std::exp(std::complex<double>(0, -evals_(j) * t));
    p += std::norm(amp);
  }
  return p;
}

Vector ExactDynamics::state_at(double t, Vector* imag_part) const {
  Vector re(evecs_.rows()), im(evecs_.rows());
  Vector cre = coeffs_.array() * (evals_.array() * -t).cos();
  Vector cim = coeffs_.array() * (evals_.array() * -t).sin();
  re = evecs_ * cre;
  im = evecs_ * cim;
  if (imag_part) *imag_part = im;
  return re;
}

double p_approx(const SpectralPair& pair, double t) {
  const std::complex<double> phase_minus = std::exp(std::complex<double>(0, pair.epsilon * t));
  const std::complex<double> phase_plus = std::exp(std::complex<double>(0, -pair.epsilon * t));
  const int m = static_cast<int>(pair.minus.overlaps_w.size());
  double p = 0;
  for (int w = 0; w < m; ++w) {
    std::complex<double> amp = phase_minus * pair.minus.overlaps_w(w) * pair.minus.overlap_psi0;
    for (const EigBranch& b : pair.plus) amp += phase_plus * b.overlaps_w(w) * b.overlap_psi0;
    p += std::norm(amp);
  }
  return p;
}

SinusoidalCheck sinusoidal_condition(const SpectralPair& pair, double threshold) {
  SinusoidalCheck out;
  out.threshold = threshold;
  const int m = static_cast<int>(pair.minus.overlaps_w.size());
  double l2 = 0;
  for (int w = 0; w < m; ++w) {
    double r = pair.minus.overlap_psi0 * pair.minus.overlaps_w(w);
    for (const EigBranch& b : pair.plus) r += b.overlap_psi0 * b.overlaps_w(w);
    out.residual = std::max(out.residual, std::abs(r));
    l2 += r * r;
  }
  out.residual_l2 = std::sqrt(l2);
  out.holds = out.residual < threshold;
  return out;
}

RunPrediction run_prediction(const SpectralPair& pair) {
  RunPrediction out;
  out.t_run = M_PI / (2 * pair.epsilon);
  out.p_succ = 4 * pair.minus.overlap_psi0 * pair.minus.overlap_psi0 * pair.minus.overlaps_w.squaredNorm();
  return out;
}

RunPrediction predict_run(const SpectralPair& pair, const SinusoidalCheck& check) {
  if (!check.holds)
    throw InapplicableError("sinusoidal condition fails (residual " + std::to_string(check.residual) +
                            "); locate the peak numerically instead");
  return run_prediction(pair);
}

PeakResult find_first_peak(const std::function<double(double)>& f, double t_max, double dt) {
  if (!(dt > 0) || !(t_max > dt)) throw std::invalid_argument("need dt > 0 and t_max > dt");
  PeakResult out;
  double prev2 = f(0.0);
  double prev = f(dt);
  for (double t = 2 * dt; t <= t_max + dt / 2; t += dt) {
    const double cur = f(t);
    if (prev > prev2 && prev >= cur) {
      double a = t - 2 * dt, b = t;
      double x1 = a + (1 - kGolden) * (b - a), x2 = a + kGolden * (b - a);
      double f1 = f(x1), f2 = f(x2);
      while (b - a > dt * 1e-6) {
        if (f1 < f2) {
          a = x1;
          x1 = x2;
          f1 = f2;
          x2 = a + kGolden * (b - a);
          f2 = f(x2);
        } else {
          b = x2;
          x2 = x1;
          f2 = f1;
          x1 = a + (1 - kGolden) * (b - a);
          f1 = f(x1);
        }
      }
      out.found = true;
      out.t_opt = 0.5 * (a + b);
      out.value = f(out.t_opt);
      return out;
    }
    prev2 = prev;
    prev = cur;
  }
  return out;  // monotone (or no interior maximum) on (0, t_max]
}

EvolutionTrace simulate_trace(const ExactDynamics& dyn, const SpectralPair& pair, double t_max, double dt) {
  if (!(dt > 0) || !(t_max > dt)) throw std::invalid_argument("need dt > 0 and t_max > dt");
  EvolutionTrace trace;
  trace.min_gap = std::numeric_limits<double>::infinity();
  for (double t = 0; t <= t_max + dt / 2; t += dt) {
    const double pe = dyn.probability(t);
    const double pa = p_approx(pair, t);
    trace.times.push_back(t);
    trace.p_exact.push_back(pe);
    trace.p_approx.push_back(pa);
    trace.min_gap = std::min(trace.min_gap, pe - pa);
  }
  const PeakResult peak = find_first_peak([&](double t) { return p_approx(pair, t); }, t_max, dt);
  trace.peak_found = peak.found;
  if (peak.found) {
    trace.t_opt = peak.t_opt;
    trace.p_succ_at_topt = dyn.probability(peak.t_opt);
  }
  return trace;
}

ScheduleResult unknown_delta_schedule(int k, const std::function<std::pair<double, double>(int)>& hypothesis,
                                      const std::function<double(int, double, double)>& measure) {
  if (k < 1) throw std::invalid_argument("k must be positive");
  ScheduleResult out;
  double miss = 1.0;
  for (int delta = 1; delta <= k; ++delta) {
    auto [gamma, t_run] = hypothesis(delta);
    ScheduleRound round;
    round.delta_hypothesis = delta;
    round.gamma = gamma;
    round.t_run = t_run;
    round.p_round = measure(delta, gamma, t_run);
    out.total_time += t_run;
    miss *= 1.0 - round.p_round;
    out.rounds.push_back(round);
  }
  out.overall_success = 1.0 - miss;
  out.found = out.overall_success >= 0.5;
  return out;
}

}  // namespace ctqw
