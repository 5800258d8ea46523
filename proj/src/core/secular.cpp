#include "core/secular.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace ctqw {

namespace {

constexpr int kScanSamples = 64;
constexpr int kScanSamplesRefined = 512;

// Eigenvalues ascending; analytic path for the small sizes that dominate.
void sym_eig(const Matrix& m, Vector& evals, Matrix* evecs) {
  const int n = static_cast<int>(m.rows());
  if (n == 1) {
    evals = Vector::Constant(1, m(0, 0));
    if (evecs) *evecs = Matrix::Identity(1, 1);
    return;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver;
  const auto opts = evecs ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly;
  if (n <= 3)
    solver.computeDirect(m, opts);
  else
    solver.compute(m, opts);
  if (solver.info() != Eigen::Success) throw NumericalError("secular matrix eigensolver failed");
  evals = solver.eigenvalues();
  if (evecs) *evecs = solver.eigenvectors();
}

int psd_rank(const Matrix& block) {
  Vector evals;
  sym_eig(block, evals, nullptr);
  const double top = std::max(evals.cwiseAbs().maxCoeff(), 0.0);
  const double tol = 1e-10 * std::max(1.0, top);
  int r = 0;
  for (int i = 0; i < evals.size(); ++i)
    if (evals(i) > tol) ++r;
  return r;
}

}  // namespace

MarkedBlockData marked_block_data(const Graph& g, const Spectrum& s, const std::vector<int>& marked) {
  if (marked.empty()) throw std::invalid_argument("marked set is empty");
  {
    std::vector<int> sorted = marked;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size(); ++i) {
      if (sorted[i] < 0 || sorted[i] >= g.num_vertices()) throw std::invalid_argument("marked vertex out of range");
      if (i > 0 && sorted[i] == sorted[i - 1]) throw std::invalid_argument("marked vertices must be distinct");
    }
  }
  const int m = static_cast<int>(marked.size());
  MarkedBlockData data;
  data.phis = s.phis;
  data.multiplicities.assign(s.multiplicities.begin(), s.multiplicities.end());
  data.num_vertices = g.num_vertices();
  data.max_degree = g.max_degree();
  for (const Matrix& p : s.projectors) {
    Matrix block(m, m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) block(i, j) = p(marked[i], marked[j]);
    block = ((block + block.transpose()) / 2).eval();
    data.block_ranks.push_back(psd_rank(block));
    data.blocks.push_back(std::move(block));
  }
  const Vector psi0 = initial_state(g, s);
  data.psi0_marked.resize(m);
  for (int i = 0; i < m; ++i) data.psi0_marked(i) = psi0(marked[i]);
  data.p0_total = data.blocks[0].sum();
  return data;
}

SearchInstance make_search_instance(std::shared_ptr<const Graph> g, std::shared_ptr<const Spectrum> s,
                                    std::vector<int> marked, double gamma) {
  if (!(gamma > 0)) throw std::invalid_argument("gamma must be positive");
  SearchInstance inst;
  inst.data = marked_block_data(*g, *s, marked);
  inst.graph = std::move(g);
  inst.spectrum = std::move(s);
  inst.marked = std::move(marked);
  inst.gamma = gamma;
  return inst;
}

Matrix build_hamiltonian(const Graph& g, const std::vector<int>& marked, double gamma) {
  if (gamma < 0) throw std::invalid_argument("gamma must be nonnegative");
  Matrix h = -gamma * g.adjacency();
  for (int w : marked) {
    if (w < 0 || w >= g.num_vertices()) throw std::invalid_argument("marked vertex out of range");
    h(w, w) -= 1.0;
  }
  return h;
}

Matrix build_hamiltonian(const SearchInstance& inst) {
  if (!inst.graph) throw std::invalid_argument("instance has no dense graph");
  return build_hamiltonian(*inst.graph, inst.marked, inst.gamma);
}

double pole_guard(const SearchInstance& inst) {
  return 1e-10 * std::max(1.0, inst.gamma * inst.data.phis[0]);
}

SecularMatrix build_secular_matrix(const SearchInstance& inst, double lambda) {
  const auto& d = inst.data;
  const int m = d.marked_count();
  SecularMatrix out;
  out.lambda = lambda;
  out.entries = Matrix::Identity(m, m);
  const double guard = pole_guard(inst);
  for (int l = 0; l < d.bands(); ++l) {
    const double pd = lambda + inst.gamma * d.phis[l];
    if (std::abs(pd) < guard)
      throw NumericalError("secular matrix undefined: lambda within the pole guard of -gamma*phi_" +
                           std::to_string(l));
    out.pole_distances.push_back(pd);
    out.entries += d.blocks[l] / pd;
  }
  return out;
}

namespace {

Vector secular_branches(const SearchInstance& inst, double lambda) {
  const auto& d = inst.data;
  const int m = d.marked_count();
  Matrix mm = Matrix::Identity(m, m);
  for (int l = 0; l < d.bands(); ++l) mm += d.blocks[l] / (lambda + inst.gamma * d.phis[l]);
  Vector evals;
  sym_eig(mm, evals, nullptr);
  return evals;
}

struct BranchZero {
  double lambda;
  int branch;
};

// Zeros of every sorted eigenvalue branch of M over the given sample points
// (ascending, within one pole-free interval): bracket on consecutive samples,
// bisect to 1e-12 relative.  Strict monotonicity gives at most one zero per
// branch per interval.
void scan_points(const SearchInstance& inst, const std::vector<double>& pts, std::vector<BranchZero>& zeros) {
  if (pts.size() < 2) return;
  const int m = inst.data.marked_count();
  std::vector<Vector> mu(pts.size());
  for (std::size_t j = 0; j < pts.size(); ++j) mu[j] = secular_branches(inst, pts[j]);
  for (int i = 0; i < m; ++i) {
    for (std::size_t j = 1; j < pts.size(); ++j) {
      if (!(mu[j - 1](i) > 0 && mu[j](i) <= 0)) continue;
      double lo = pts[j - 1];
      double hi = pts[j];
      const double tol = 1e-12 * std::max(1.0, std::max(std::abs(lo), std::abs(hi)));
      while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (secular_branches(inst, mid)(i) > 0)
          lo = mid;
        else
          hi = mid;
      }
      zeros.push_back({0.5 * (lo + hi), i});
      break;
    }
  }
}

// One scan pass over every pole-free interval.  The uniform grid keeps a
// margin from the poles where eigensolver noise on M (norm ~ 1/distance)
// stays below the branch values; when near_pole_pass is set, log-spaced
// points chase roots crowding into those margins (weakly coupled
// eigenvalues sit arbitrarily close to sigma(-gamma A) at small gamma).
std::vector<BranchZero> scan_for_zeros(const SearchInstance& inst, int samples, bool near_pole_pass) {
  const auto& d = inst.data;
  const int bands = d.bands();
  const double guard = pole_guard(inst);
  std::vector<double> poles(bands);
  for (int l = 0; l < bands; ++l) poles[l] = -inst.gamma * d.phis[l];  // ascending

  const auto sample_margin = [&](double pole, double width) {
    return std::min(width / 4, std::max(2 * guard, 1e-7 * std::max(1.0, std::abs(pole))));
  };
  const auto interval_ends = [&](int iv, double& a, double& b) {
    if (iv == 0) {
      // ||sum_w |w><w||| = 1, so every eigenvalue of H is >= -gamma*phi0 - 1
      a = poles[0] - 1.0 - 1e-3 * std::max(1.0, std::abs(poles[0]));
      b = poles[0] - sample_margin(poles[0], 1.0);
    } else {
      const double width = poles[iv] - poles[iv - 1];
      if (width <= 8 * guard) {
        b = a = poles[iv];
        return;
      }
      a = poles[iv - 1] + sample_margin(poles[iv - 1], width);
      b = poles[iv] - sample_margin(poles[iv], width);
    }
  };

  std::vector<BranchZero> zeros;
  for (int iv = 0; iv <= bands - 1; ++iv) {
    double a = 0, b = 0;
    interval_ends(iv, a, b);
    if (!(b > a)) continue;
    std::vector<double> pts(samples);
    for (int j = 0; j < samples; ++j) pts[j] = a + (b - a) * j / (samples - 1);
    scan_points(inst, pts, zeros);

    if (near_pole_pass) {
      // left window of the upper pole and right window of the lower pole
      for (int side : {+1, -1}) {
        if (side < 0 && iv == 0) continue;  // leftmost interval has no lower pole
        const double pole = side > 0 ? poles[iv] : poles[iv - 1];
        const double outer = side > 0 ? pole - b : a - pole;
        const double inner = 4 * guard;
        if (outer <= inner) continue;
        std::vector<double> win;
        for (double dist = outer; dist > inner; dist /= 2) win.push_back(pole - side * dist);
        win.push_back(pole - side * inner);
        std::sort(win.begin(), win.end());
        scan_points(inst, win, zeros);
      }
    }
  }
  std::sort(zeros.begin(), zeros.end(), [](const BranchZero& x, const BranchZero& y) { return x.lambda < y.lambda; });
  return zeros;
}

std::vector<SecularRoot> zeros_to_roots(const SearchInstance& inst, const std::vector<BranchZero>& zeros) {
  std::vector<SecularRoot> roots;
  std::size_t i = 0;
  while (i < zeros.size()) {
    std::size_t j = i;
    const double tol = 1e-9 * std::max(1.0, std::abs(zeros[i].lambda));
    while (j + 1 < zeros.size() && zeros[j + 1].lambda - zeros[i].lambda < tol) ++j;
    SecularRoot root;
    root.nullity = static_cast<int>(j - i + 1);
    double acc = 0;
    for (std::size_t t = i; t <= j; ++t) acc += zeros[t].lambda;
    root.lambda = acc / root.nullity;

    const Matrix mm = build_secular_matrix(inst, root.lambda).entries;
    Vector evals;
    Matrix evecs;
    sym_eig(mm, evals, &evecs);
    std::vector<int> order(evals.size());
    for (std::size_t t = 0; t < order.size(); ++t) order[t] = static_cast<int>(t);
    std::sort(order.begin(), order.end(), [&](int x, int y) { return std::abs(evals(x)) < std::abs(evals(y)); });
    root.kernel.resize(mm.rows(), root.nullity);
    for (int c = 0; c < root.nullity; ++c) root.kernel.col(c) = evecs.col(order[c]);
    roots.push_back(std::move(root));
    i = j + 1;
  }
  return roots;
}

}  // namespace

std::vector<SecularRoot> find_secular_roots(const SearchInstance& inst) {
  const int expected = [&] {
    int e = 0;
    for (int r : inst.data.block_ranks) e += r;
    return e;
  }();
  std::vector<BranchZero> zeros;
  for (auto [samples, near_pole] :
       {std::pair<int, bool>{kScanSamples, false}, {kScanSamples, true}, {kScanSamplesRefined, true}}) {
    zeros = scan_for_zeros(inst, samples, near_pole);
    if (static_cast<int>(zeros.size()) == expected) return zeros_to_roots(inst, zeros);
  }
  std::ostringstream os;
  os << "secular root scan found " << zeros.size() << " roots, expected " << expected
     << " (gamma=" << inst.gamma << "; intervals between poles";
  for (double p : inst.data.phis) os << ' ' << -inst.gamma * p;
  os << ")";
  throw NumericalError(os.str());
}

std::vector<HEigenvalue> assemble_h_spectrum(const SearchInstance& inst, const std::vector<SecularRoot>& roots) {
  std::vector<HEigenvalue> out;
  for (const auto& r : roots) out.push_back({r.lambda, r.nullity, false, r.kernel});
  const auto& d = inst.data;
  for (int l = 0; l < d.bands(); ++l) {
    const std::int64_t mult = d.multiplicities[l] - d.block_ranks[l];
    if (mult > 0) out.push_back({-inst.gamma * d.phis[l], mult, true, Matrix()});
  }
  std::sort(out.begin(), out.end(), [](const HEigenvalue& x, const HEigenvalue& y) { return x.lambda < y.lambda; });
  std::int64_t total = 0;
  for (const auto& e : out) total += e.multiplicity;
  if (total != d.num_vertices)
    throw NumericalError("assembled H spectrum has " + std::to_string(total) + " eigenvalues, expected " +
                         std::to_string(d.num_vertices));
  return out;
}

namespace {

double kernel_psi0_functional(const Matrix& kernel, const Vector& psi0_marked) {
  double best = 0;
  for (int c = 0; c < kernel.cols(); ++c) best = std::max(best, std::abs(kernel.col(c).dot(psi0_marked)));
  return best;
}

}  // namespace

Classification classify(const SearchInstance& inst, const std::vector<HEigenvalue>& spectrum) {
  if (spectrum.size() < 2) throw InapplicableError("fewer than two distinct eigenvalues");
  if (spectrum[0].from_adjacency || spectrum[0].multiplicity != 1)
    throw NumericalError("ground state of H is not a simple marked-coupled eigenvalue");

  Classification cls;
  cls.lambda_minus = spectrum[0].lambda;
  cls.kernel_minus = spectrum[0].kernel.col(0);
  cls.lambda_circ = spectrum[1].lambda;

  const double overlap_tol = 1e-8 * inst.data.psi0_marked.norm();
  const auto record_skip = [&cls](const HEigenvalue& e, SkipReason why) {
    for (const auto& s : cls.skipped)
      if (s.lambda == e.lambda) return;
    cls.skipped.push_back({e.lambda, e.multiplicity, why});
  };
  std::vector<HEigenvalue> work(spectrum.begin(), spectrum.end());
  std::int64_t target = inst.data.marked_count() + 1;
  const HEigenvalue* chosen = nullptr;
  bool restart = true;
  while (restart && !chosen) {
    restart = false;
    std::int64_t cum = 0;
    for (std::size_t j = 0; j < work.size(); ++j) {
      cum += work[j].multiplicity;
      if (cum < target || j == 0) continue;
      if (work[j].from_adjacency) {
        record_skip(work[j], SkipReason::in_adjacency_spectrum);
        target = cum + 1;
        continue;
      }
      if (kernel_psi0_functional(work[j].kernel, inst.data.psi0_marked) < overlap_tol) {
        // Invisible to the dynamics; its multiplicity is returned to the
        // rank budget so an eigenvalue below it can still qualify.
        record_skip(work[j], SkipReason::zero_overlap);
        target -= work[j].multiplicity;
        work.erase(work.begin() + static_cast<std::ptrdiff_t>(j));
        restart = true;
        break;
      }
      chosen = &work[j];
      break;
    }
  }
  if (!chosen) throw InapplicableError("no eigenvalue above lambda- passes the spectrum and overlap conditions");

  cls.lambda_plus = chosen->lambda;
  cls.kernel_plus = chosen->kernel;
  cls.lambda_plus_multiplicity = chosen->multiplicity;

  std::int64_t index = 1;
  for (const auto& e : spectrum) {
    if (!(e.lambda < cls.lambda_plus)) continue;
    const bool was_skipped = std::any_of(cls.skipped.begin(), cls.skipped.end(),
                                         [&](const SkippedCandidate& s) { return s.lambda == e.lambda; });
    index += was_skipped ? 1 : e.multiplicity;
  }
  cls.lambda_plus_index = index;

  if (inst.data.bands() > 1) {
    const double band_edge = -inst.gamma * inst.data.phis[1];
    const double slack = 0.1 * inst.gamma * (inst.data.phis[0] - inst.data.phis[1]);
    if (cls.lambda_plus > band_edge + slack)
      cls.warnings.push_back("lambda+ lies above -gamma*phi_1; the small-gap regime does not apply");
  }
  return cls;
}

Classification classify(const SearchInstance& inst) {
  return classify(inst, assemble_h_spectrum(inst, find_secular_roots(inst)));
}

Vector reconstruct_eigenvector(const SearchInstance& inst, double lambda, const Vector& kernel, double* residual) {
  if (!inst.spectrum) throw std::invalid_argument("reconstruction needs the numerical spectrum");
  const SecularMatrix sm = build_secular_matrix(inst, lambda);
  const double kernel_resid = (sm.entries * kernel).norm();
  if (kernel_resid > 1e-6 * std::max(1.0, sm.entries.cwiseAbs().maxCoeff()))
    throw std::invalid_argument("vector is not in the kernel of M^lambda (residual " + std::to_string(kernel_resid) +
                                ")");
  const int n = inst.graph->num_vertices();
  Vector marked_vec = Vector::Zero(n);
  for (std::size_t i = 0; i < inst.marked.size(); ++i) marked_vec(inst.marked[i]) += kernel(static_cast<int>(i));
  Vector v = Vector::Zero(n);
  for (int l = 0; l < inst.spectrum->bands(); ++l)
    v -= (inst.spectrum->projectors[l] * marked_vec) / sm.pole_distances[l];
  v.normalize();
  double sign = 0;
  for (std::size_t i = 0; i < inst.marked.size(); ++i) sign += kernel(static_cast<int>(i)) * v(inst.marked[i]);
  if (sign < 0) v = -v;
  if (residual) {
    const Matrix h = build_hamiltonian(inst);
    *residual = (h * v - lambda * v).norm();
  }
  return v;
}

namespace {

// Gram matrix of the reconstructed eigenvectors for a kernel basis U:
// G_ij = sum_l (u_i^T B_l u_j) / (lambda + gamma*phi_l)^2.
Matrix reconstruction_gram(const SearchInstance& inst, double lambda, const Matrix& u) {
  const auto& d = inst.data;
  Matrix g = Matrix::Zero(u.cols(), u.cols());
  for (int l = 0; l < d.bands(); ++l) {
    const double pd = lambda + inst.gamma * d.phis[l];
    g += (u.transpose() * d.blocks[l] * u) / (pd * pd);
  }
  return ((g + g.transpose()) / 2).eval();
}

void fix_branch_sign(EigBranch& b, const Vector& psi0_marked) {
  double s = b.overlaps_w.dot(psi0_marked);
  if (std::abs(s) < 1e-12 * psi0_marked.norm() * b.overlaps_w.norm()) {
    int imax = 0;
    b.overlaps_w.cwiseAbs().maxCoeff(&imax);
    s = b.overlaps_w(imax);
  }
  if (s < 0) {
    b.overlaps_w = -b.overlaps_w;
    b.kernel = -b.kernel;
    b.overlap_psi0 = -b.overlap_psi0;
  }
}

std::vector<EigBranch> make_branches(const SearchInstance& inst, double lambda, const Matrix& u) {
  const auto& d = inst.data;
  const int m = static_cast<int>(u.cols());
  const Matrix g = reconstruction_gram(inst, lambda, u);

  // Pivoted Gram-Schmidt in the G inner product; rows of t are the
  // coefficient vectors of an orthonormal eigenspace basis.
  Matrix resid = Matrix::Identity(m, m);
  Matrix t(m, m);
  std::vector<int> remaining(m);
  for (int i = 0; i < m; ++i) remaining[i] = i;
  for (int a = 0; a < m; ++a) {
    int best = 0;
    double best_norm = -1;
    for (std::size_t r = 0; r < remaining.size(); ++r) {
      const double nr = resid.col(remaining[r]).dot(g * resid.col(remaining[r]));
      if (nr > best_norm) {
        best_norm = nr;
        best = static_cast<int>(r);
      }
    }
    const int p = remaining[best];
    remaining.erase(remaining.begin() + best);
    if (!(best_norm > 0)) throw NumericalError("degenerate kernel basis in overlap computation");
    t.row(a) = resid.col(p).transpose() / std::sqrt(best_norm);
    for (int q : remaining) {
      const double proj = t.row(a) * (g * resid.col(q));
      resid.col(q) -= proj * t.row(a).transpose();
    }
  }

  std::vector<EigBranch> out;
  for (int a = 0; a < m; ++a) {
    EigBranch b;
    b.lambda = lambda;
    b.overlaps_w = u * t.row(a).transpose();  // <w|lam> of the unit eigenvector
    b.c = b.overlaps_w.norm();
    b.kernel = b.c > 0 ? Vector(b.overlaps_w / b.c) : Vector(b.overlaps_w);
    b.overlap_psi0 = -d.psi0_marked.dot(b.overlaps_w) / (lambda + inst.gamma * d.phis[0]);
    fix_branch_sign(b, d.psi0_marked);
    out.push_back(std::move(b));
  }
  return out;
}

}  // namespace

SpectralPair compute_overlaps(const SearchInstance& inst, const Classification& cls, bool midpoint_epsilon) {
  SpectralPair pair;
  pair.minus = make_branches(inst, cls.lambda_minus, cls.kernel_minus).front();
  pair.plus = make_branches(inst, cls.lambda_plus, cls.kernel_plus);
  pair.lambda_plus_multiplicity = cls.lambda_plus_multiplicity;
  pair.lambda_plus_index = cls.lambda_plus_index;
  pair.skipped = cls.skipped;
  pair.lambda_circ = cls.lambda_circ;
  pair.gamma = inst.gamma;
  pair.gamma_phi0 = inst.gamma * inst.data.phis[0];
  pair.warnings = cls.warnings;
  pair.epsilon = midpoint_epsilon ? (cls.lambda_plus - cls.lambda_minus) / 2
                                  : std::abs(cls.lambda_minus + inst.gamma * inst.data.phis[0]);
  return pair;
}

AsymptoticSums asymptotic_sums(const SearchInstance& inst) {
  const auto& d = inst.data;
  const int m = d.marked_count();
  AsymptoticSums sums;
  sums.s1 = Matrix::Zero(m, m);
  sums.s2 = Matrix::Zero(m, m);
  sums.p0 = d.blocks[0];
  for (int l = 1; l < d.bands(); ++l) {
    const double gap = d.phis[0] - d.phis[l];
    sums.s1 += d.blocks[l] / gap;
    sums.s2 += d.blocks[l] / (gap * gap);
  }
  return sums;
}

AsymptoticGamma gamma_asymptotic(const SearchInstance& inst) {
  const auto sums = asymptotic_sums(inst);
  const auto& d = inst.data;
  AsymptoticGamma out;
  out.kernel_direction = d.psi0_marked.normalized();
  const Vector& u = out.kernel_direction;
  out.gamma = u.dot(sums.s1 * u);
  if (!(out.gamma > 0)) throw InapplicableError("asymptotic gamma is non-positive");
  const double q0 = u.dot(sums.p0 * u);
  const double q2 = u.dot(sums.s2 * u) / (out.gamma * out.gamma);
  if (!(q0 > 0) || !(q2 > 0)) throw InapplicableError("epsilon^2 = b(gamma) is non-positive");
  out.epsilon = std::sqrt(q0 / q2);
  if (d.marked_count() == 2) {
    bool symmetric = std::abs(d.psi0_marked(0) - d.psi0_marked(1)) < 1e-10 * d.psi0_marked.norm();
    for (const Matrix& b : d.blocks)
      symmetric = symmetric && std::abs(b(0, 0) - b(1, 1)) < 1e-10 * std::max(1.0, b.cwiseAbs().maxCoeff());
    out.two_symmetric = symmetric;
  }
  return out;
}

MidpointResult gamma_midpoint(const SearchInstance& inst) {
  const double phi0 = inst.data.phis[0];
  const auto eval = [&](double gamma) {
    // An H eigenvalue can land exactly on a pole for special gamma values
    // (e.g. gamma = 1/n on K_{n,n}); nudge off the degeneracy and retry once.
    for (double factor : {1.0, 1.0 + 3e-7}) {
      try {
        const Classification cls = classify(inst.with_gamma(gamma * factor));
        return std::pair<double, double>(cls.lambda_minus + cls.lambda_plus + 2 * gamma * factor * phi0,
                                         cls.lambda_minus);
      } catch (const NumericalError&) {
        if (factor != 1.0) throw;
      }
    }
    throw NumericalError("unreachable");
  };

  double lo = 1.0 / (std::max(inst.data.max_degree, 1.0) * static_cast<double>(inst.data.num_vertices));
  auto [glo, lm_lo] = eval(lo);
  int shrink = 0;
  while (glo > 0 && shrink++ < 64) {
    lo /= 2;
    std::tie(glo, lm_lo) = eval(lo);
  }
  if (glo > 0) throw NumericalError("midpoint bracket: no sign change while shrinking gamma");
  double hi = lo;
  double ghi = glo;
  int grow = 0;
  while (ghi < 0) {
    if (grow++ >= 64) throw NumericalError("midpoint bracket: no sign change within 64 doublings");
    hi *= 2;
    std::tie(ghi, std::ignore) = eval(hi);
  }

  MidpointResult out;
  for (int it = 0; it < 300; ++it) {
    const double mid = 0.5 * (lo + hi);
    auto [g, lm] = eval(mid);
    out.gamma = mid;
    out.residual = std::abs(g);
    out.iterations = it + 1;
    if (out.residual < 1e-8 * std::abs(lm)) return out;
    if (g < 0)
      lo = mid;
    else
      hi = mid;
  }
  throw NumericalError("midpoint bisection did not reach the residual target");
}

double leakage_bound(const SearchInstance& inst, double lambda_circ) {
  const double offset = lambda_circ + inst.gamma * inst.data.phis[0];
  if (std::abs(offset) < pole_guard(inst))
    throw NumericalError("leakage bound undefined: lambda_circ at -gamma*phi0");
  const double w = inst.data.marked_count();
  return (w + 2) / (offset * offset) * inst.data.p0_total;
}

}  // namespace ctqw
