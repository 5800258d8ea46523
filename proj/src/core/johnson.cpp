#include "core/johnson.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <tuple>

namespace ctqw {

JohnsonParams validated_johnson_params(int n, int k, int delta) {
  if (k < 1 || k >= n) throw std::invalid_argument("johnson requires 1 <= k < n");
  if (delta < 1 || delta > k) throw std::invalid_argument("delta must lie in [1, k]");
  if (delta > n - k)
    throw std::invalid_argument("delta " + std::to_string(delta) + " exceeds the J(n,k) diameter " +
                                std::to_string(std::min(k, n - k)));
  return {n, k, delta};
}

std::optional<BigRational> hyp3f2_reduced_exact(int n, int k, int l, int delta) {
  if (l < 0 || l > k || delta < 0 || delta > k || k >= n) throw std::invalid_argument("hyp3f2: parameter range");
  BigRational sum = 0;
  BigRational term = 1;
  for (int nu = 0;; ++nu) {
    sum += term;
    const std::int64_t a1 = -l + nu, a2 = -delta + nu, a3 = l - n - 1 + nu;
    const std::int64_t b1 = k - n + nu, b2 = -k + nu;
    if (a1 == 0 || a2 == 0) break;  // series terminates
    if (b1 == 0 || b2 == 0) return std::nullopt;  // zero denominator before termination
    term *= make_ratio(a1 * a2, b1 * b2);
    term *= make_ratio(a3, nu + 1);
  }
  return sum;
}

namespace {

// Right-hand form of the transform: 3F2(l-k, -delta, n-k-l+1; 1, -k; 1).
// Always terminates before its denominator zero.
BigRational hyp3f2_flipped_exact(int n, int k, int l, int delta) {
  BigRational sum = 0;
  BigRational term = 1;
  for (int nu = 0;; ++nu) {
    sum += term;
    const std::int64_t a1 = l - k + nu, a2 = -delta + nu, a3 = n - k - l + 1 + nu;
    const std::int64_t b1 = 1 + nu, b2 = -k + nu;
    if (a1 == 0 || a2 == 0) break;
    term *= make_ratio(a1 * a2, b1 * b2);
    term *= make_ratio(a3, nu + 1);
  }
  return sum;
}

double hyp3f2_compensated(int n, int k, int l, int delta) {
  // Neumaier summation of the terminating series in long double.
  long double sum = 0, comp = 0, term = 1;
  for (int nu = 0;; ++nu) {
    const long double t = sum + term;
    if (std::abs(sum) >= std::abs(term))
      comp += (sum - t) + term;
    else
      comp += (term - t) + sum;
    sum = t;
    const long double a1 = -l + nu, a2 = -delta + nu, a3 = l - n - 1 + nu;
    const long double b1 = k - n + nu, b2 = -k + nu;
    if (a1 == 0 || a2 == 0) break;
    if (b1 == 0 || b2 == 0) throw std::invalid_argument("hyp3f2 undefined for these parameters");
    term *= a1 * a2 * a3 / (b1 * b2 * (nu + 1));
  }
  return static_cast<double>(sum + comp);
}

}  // namespace

double hyp3f2_series(int n, int k, int l, int delta) {
  if (n <= 64) {
    const auto exact = hyp3f2_reduced_exact(n, k, l, delta);
    if (!exact) throw std::invalid_argument("hyp3f2 undefined for these parameters");
    return to_double(*exact);
  }
  return hyp3f2_compensated(n, k, l, delta);
}

BigRational projector_diagonal_exact(int n, int k, int l) {
  return BigRational(big_binomial(n, l) - big_binomial(n, l - 1), big_binomial(n, k));
}

double hyp3f2_cross(int n, int k, int l, int delta) {
  return to_double(projector_diagonal_exact(n, k, l)) * hyp3f2_series(n, k, l, delta);
}

DualHahnArray dual_hahn_array(int n, int k, double phi_0, double phi_star_0, double h, double s_star) {
  if (k < 1 || k >= n) throw std::invalid_argument("dual Hahn array requires 1 <= k < n");
  if (h == 0 || s_star == 0) throw std::invalid_argument("dual Hahn array requires h != 0 and s* != 0");
  DualHahnArray a;
  a.n = n;
  a.k = k;
  a.phi_0 = phi_0;
  a.phi_star_0 = phi_star_0;
  a.h = h;
  a.s_star = s_star;
  return a;
}

TransformCheck hyp_transform_check(int n, int k, int l, int delta) {
  TransformCheck out;
  const auto lhs = hyp3f2_reduced_exact(n, k, l, delta);
  // Prefactor delta! / (k-n)_delta, zero denominator when delta > n-k.
  BigInt pref_den = 1;
  BigInt pref_num = 1;
  for (int i = 0; i < delta; ++i) {
    pref_num *= i + 1;
    pref_den *= k - n + i;
  }
  if (!lhs || pref_den == 0) return out;  // defined stays false
  const BigRational rhs = make_ratio(pref_num, pref_den) * hyp3f2_flipped_exact(n, k, l, delta);
  out.defined = true;
  out.lhs = to_double(*lhs);
  out.rhs = to_double(rhs);
  out.exact_equal = (*lhs == rhs);
  out.abs_diff = out.exact_equal ? 0.0 : std::abs(to_double(*lhs - rhs));
  return out;
}

SumPackExact sum_pack_exact(int n, int k, int delta) {
  validated_johnson_params(n, k, delta);
  SumPackExact out;
  out.s1 = out.s1p = out.s2 = out.s2p = 0;
  const std::int64_t phi0 = static_cast<std::int64_t>(k) * (n - k);
  const int bands = std::min(k, n - k);
  for (int l = 1; l <= bands; ++l) {
    const std::int64_t phi = static_cast<std::int64_t>(k - l) * (n - k - l) - l;
    const BigInt gap = phi0 - phi;
    const BigRational diag = projector_diagonal_exact(n, k, l);
    const auto series = hyp3f2_reduced_exact(n, k, l, delta);
    if (!series) throw std::invalid_argument("sum_pack: cross term undefined (n too small for this k, delta)");
    const BigRational cross = diag * (*series);
    out.s1 += diag / BigRational(gap);
    out.s1p += cross / BigRational(gap);
    out.s2 += diag / BigRational(gap * gap);
    out.s2p += cross / BigRational(gap * gap);
  }
  return out;
}

SumPack sum_pack(int n, int k, int delta) {
  if (n <= 64) {
    const SumPackExact e = sum_pack_exact(n, k, delta);
    return {to_double(e.s1), to_double(e.s1p), to_double(e.s2), to_double(e.s2p)};
  }
  validated_johnson_params(n, k, delta);
  SumPack out;
  const double phi0 = static_cast<double>(k) * (n - k);
  const int bands = std::min(k, n - k);
  for (int l = 1; l <= bands; ++l) {
    const double gap = phi0 - (static_cast<double>(k - l) * (n - k - l) - l);
    const double diag = to_double(projector_diagonal_exact(n, k, l));
    const double cross = diag * hyp3f2_compensated(n, k, l, delta);
    out.s1 += diag / gap;
    out.s1p += cross / gap;
    out.s2 += diag / (gap * gap);
    out.s2p += cross / (gap * gap);
  }
  return out;
}

JohnsonPredictions johnson_predictions(int n, int k, int delta) {
  validated_johnson_params(n, k, delta);
  const SumPack s = sum_pack(n, k, delta);
  JohnsonPredictions out;
  out.num_vertices = binomial_i64(n, k);
  out.gamma = s.s1 + s.s1p;
  const double nd = static_cast<double>(out.num_vertices);
  out.epsilon = std::sqrt(2 * out.gamma * out.gamma / (nd * (s.s2 + s.s2p)));
  out.bad_lambda_epsilon = 2 * s.s1p * out.gamma / (s.s2 - s.s2p);
  out.psi0_overlap_asymptotic = 1.0 / std::sqrt(2.0);
  out.t_run = M_PI / (2 * out.epsilon);
  out.t_run_asymptotic = M_PI * std::sqrt(nd) / (2 * std::sqrt(2.0));
  return out;
}

std::pair<int, int> canonical_marked_pair(int n, int k, int delta) {
  validated_johnson_params(n, k, delta);
  std::vector<int> w1, w2;
  for (int i = 1; i <= k; ++i) w1.push_back(i);
  for (int i = 1; i <= k - delta; ++i) w2.push_back(i);
  for (int i = k + 1; i <= k + delta; ++i) w2.push_back(i);
  if (k + delta > n) throw std::invalid_argument("canonical pair needs n >= k + delta");
  // Colex ranks, same formula as Graph::subset_index.
  const auto rank = [](const std::vector<int>& s) {
    std::int64_t r = 0;
    for (std::size_t i = 0; i < s.size(); ++i) r += binomial_i64(s[i] - 1, static_cast<std::int64_t>(i) + 1);
    return static_cast<int>(r);
  };
  return {rank(w1), rank(w2)};
}

MarkedBlockData johnson_marked_block_data(int n, int k, int delta) {
  validated_johnson_params(n, k, delta);
  const JohnsonClosedSpectrum cs = johnson_closed_spectrum(n, k);
  MarkedBlockData data;
  data.phis = cs.phis;
  data.multiplicities = cs.multiplicities;
  data.num_vertices = cs.num_vertices;
  data.max_degree = static_cast<double>(k) * (n - k);
  const int bands = static_cast<int>(cs.phis.size()) - 1;
  for (int l = 0; l <= bands; ++l) {
    const double diag = cs.projector_diagonal[l];
    const double cross = diag * hyp3f2_series(n, k, l, delta);
    Matrix block(2, 2);
    block << diag, cross, cross, diag;
    // eigenvalues of [[d,x],[x,d]] are d +- x
    const double tol = 1e-10 * std::max(1.0, std::abs(diag) + std::abs(cross));
    data.block_ranks.push_back((diag + cross > tol ? 1 : 0) + (diag - cross > tol ? 1 : 0));
    data.blocks.push_back(std::move(block));
  }
  const double u = 1.0 / std::sqrt(static_cast<double>(cs.num_vertices));
  data.psi0_marked = Vector::Constant(2, u);
  data.p0_total = data.blocks[0].sum();
  return data;
}

SearchInstance make_johnson_instance(int n, int k, int delta, double gamma) {
  if (!(gamma > 0)) throw std::invalid_argument("gamma must be positive");
  auto [w1, w2] = canonical_marked_pair(n, k, delta);
  SearchInstance inst;
  inst.graph = std::make_shared<const Graph>(Graph::johnson(n, k));
  inst.marked = {w1, w2};
  inst.gamma = gamma;
  inst.data = johnson_marked_block_data(n, k, delta);
  return inst;
}

SearchInstance make_johnson_instance(std::shared_ptr<const Graph> g, int w1, int w2, double gamma) {
  if (!g || g->family() != GraphFamily::johnson) throw std::invalid_argument("expected a johnson graph");
  if (!(gamma > 0)) throw std::invalid_argument("gamma must be positive");
  if (w1 == w2) throw std::invalid_argument("marked vertices must be distinct");
  const int n = g->family_params()[0];
  const int k = g->family_params()[1];
  const auto& s1 = g->subset_of(w1);
  const auto& s2 = g->subset_of(w2);
  std::vector<int> inter;
  std::set_intersection(s1.begin(), s1.end(), s2.begin(), s2.end(), std::back_inserter(inter));
  const int delta = k - static_cast<int>(inter.size());
  SearchInstance inst;
  inst.graph = std::move(g);
  inst.marked = {w1, w2};
  inst.gamma = gamma;
  inst.data = johnson_marked_block_data(n, k, delta);
  return inst;
}

Matrix InvariantBasis::basis_matrix(int num_vertices) const {
  Matrix b = Matrix::Zero(num_vertices, dimension());
  for (int o = 0; o < dimension(); ++o) {
    const double w = 1.0 / std::sqrt(static_cast<double>(orbits[o].vertices.size()));
    for (int v : orbits[o].vertices) b(v, o) = w;
  }
  return b;
}

InvariantBasis invariant_basis(int n, int k, int delta) {
  const JohnsonParams params = validated_johnson_params(n, k, delta);
  if (k + delta > n) throw std::invalid_argument("canonical pair needs n >= k + delta");
  InvariantBasis out;
  out.params = params;
  std::tie(out.w1_index, out.w2_index) = canonical_marked_pair(n, k, delta);

  std::set<int> w1, w2;
  for (int i = 1; i <= k; ++i) w1.insert(i);
  for (int i = 1; i <= k - delta; ++i) w2.insert(i);
  for (int i = k + 1; i <= k + delta; ++i) w2.insert(i);

  const Graph g = Graph::johnson(n, k);
  std::map<std::tuple<int, int, int>, std::vector<int>> classes;
  for (int v = 0; v < g.num_vertices(); ++v) {
    const auto& subset = g.subset_of(v);
    int in1 = 0, in2 = 0, in12 = 0;
    for (int x : subset) {
      const bool a = w1.count(x) > 0, b = w2.count(x) > 0;
      in1 += a;
      in2 += b;
      in12 += a && b;
    }
    classes[{in12, std::min(in1, in2), std::max(in1, in2)}].push_back(v);
  }
  for (auto& [key, verts] : classes) {
    Orbit o;
    std::tie(o.a, o.b, o.c) = key;
    o.vertices = std::move(verts);
    out.orbits.push_back(std::move(o));
  }
  for (int i = 0; i < out.dimension(); ++i) {
    const Orbit& o = out.orbits[i];
    if (o.a == k - delta && o.b == k - delta && o.c == k) out.marked_orbit = i;
  }
  return out;
}

ReducedHamiltonian reduced_hamiltonian(const InvariantBasis& basis, const SearchInstance& inst) {
  if (!inst.graph) throw std::invalid_argument("instance has no dense graph");
  std::vector<int> sorted = inst.marked;
  std::sort(sorted.begin(), sorted.end());
  std::vector<int> expected = {basis.w1_index, basis.w2_index};
  std::sort(expected.begin(), expected.end());
  if (sorted != expected) throw std::invalid_argument("marked set does not match the basis's canonical pair");

  const Matrix b = basis.basis_matrix(inst.graph->num_vertices());
  const Matrix h = build_hamiltonian(inst);
  ReducedHamiltonian out;
  out.h = b.transpose() * h * b;
  out.h = ((out.h + out.h.transpose()) / 2).eval();
  out.closure_residual = (h * b - b * out.h).cwiseAbs().maxCoeff();
  const int n = inst.graph->num_vertices();
  out.psi0 = b.transpose() * Vector::Constant(n, 1.0 / std::sqrt(static_cast<double>(n)));
  out.marked_row = basis.marked_orbit;
  return out;
}

}  // namespace ctqw
