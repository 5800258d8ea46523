#include "doctest.h"

#include "core/johnson.hpp"
#include "core/secular.hpp"
#include "checks.hpp"
#include "oracles.hpp"

#include <cmath>

using namespace ctqw;
using namespace ctqw::testing;

namespace {

SearchInstance numeric_instance(Graph&& g, std::vector<int> marked, double gamma) {
  auto gp = std::make_shared<const Graph>(std::move(g));
  auto sp = std::make_shared<const Spectrum>(spectral_decomposition(*gp));
  return make_search_instance(gp, sp, std::move(marked), gamma);
}

}  // namespace

TEST_CASE("hamiltonian: gamma=0 single mark has eigenvalues -1 and 0^(N-1)") {
  const Graph g = Graph::complete(7);
  const Matrix h = build_hamiltonian(g, {3}, 0.0);
  const Eigh e = eigh(h);
  CHECK(e.evals(0) == doctest::Approx(-1.0).epsilon(1e-14));
  for (int i = 1; i < 7; ++i) CHECK(std::abs(e.evals(i)) < 1e-14);
}

TEST_CASE("hamiltonian: K_2 fully marked at gamma=1") {
  const Graph g = Graph::complete(2);
  const Matrix h = build_hamiltonian(g, {0, 1}, 1.0);
  CHECK(h(0, 0) == -1.0);
  CHECK(h(0, 1) == -1.0);
  CHECK(h(1, 0) == -1.0);
  CHECK(h(1, 1) == -1.0);
  const Eigh e = eigh(h);
  CHECK(e.evals(0) == doctest::Approx(-2.0));
  CHECK(e.evals(1) == doctest::Approx(0.0));
}

TEST_CASE("hamiltonian: K_{n,n} one part marked projects to [[-1,-1/2],[-1/2,0]]") {
  const int n = 5;
  const Graph g = Graph::complete_bipartite(n, n);
  std::vector<int> marked(n);
  for (int i = 0; i < n; ++i) marked[i] = i;
  const Matrix h = build_hamiltonian(g, marked, 1.0 / (2 * n));
  Vector a = Vector::Zero(2 * n), b = Vector::Zero(2 * n);
  for (int i = 0; i < n; ++i) a(i) = 1 / std::sqrt(static_cast<double>(n));
  for (int i = n; i < 2 * n; ++i) b(i) = 1 / std::sqrt(static_cast<double>(n));
  CHECK(a.dot(h * a) == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(a.dot(h * b) == doctest::Approx(-0.5).epsilon(1e-14));
  CHECK(b.dot(h * b) == doctest::Approx(0.0));
}

TEST_CASE("secular matrix: single marked vertex sums the projector diagonals") {
  SearchInstance inst = numeric_instance(Graph::johnson(6, 2), {4}, 0.07);
  const double lambda = -1.3;
  const SecularMatrix m = build_secular_matrix(inst, lambda);
  REQUIRE(m.entries.rows() == 1);
  double expect = 1.0;
  for (int l = 0; l < inst.data.bands(); ++l)
    expect += inst.spectrum->projectors[l](4, 4) / (lambda + inst.gamma * inst.data.phis[l]);
  CHECK(m.entries(0, 0) == doctest::Approx(expect).epsilon(1e-14));
}

TEST_CASE("secular matrix: johnson two-marked has m1 = m2, far left it tends to I") {
  auto gp = std::make_shared<const Graph>(Graph::johnson(7, 2));
  SearchInstance inst = make_johnson_instance(gp, 0, 5, 0.05);
  const SecularMatrix m = build_secular_matrix(inst, -2.1);
  CHECK(m.entries(0, 0) == doctest::Approx(m.entries(1, 1)).epsilon(1e-14));
  CHECK(m.entries(0, 1) == doctest::Approx(m.entries(1, 0)).epsilon(1e-14));

  const SecularMatrix far = build_secular_matrix(inst, -1e9);
  CHECK((far.entries - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("secular matrix: pole guard rejects lambda in sigma(-gamma A)") {
  SearchInstance inst = numeric_instance(Graph::johnson(6, 2), {0, 3}, 0.1);
  const double pole = -inst.gamma * inst.data.phis[1];
  CHECK_THROWS_AS(build_secular_matrix(inst, pole), NumericalError);
  CHECK_NOTHROW(build_secular_matrix(inst, pole + 1e-6));
}

TEST_CASE("K_{n,n} one part marked: roots, nullities and classification") {
  for (int n : {3, 6}) {
    std::vector<int> marked(n);
    for (int i = 0; i < n; ++i) marked[i] = i;
    SearchInstance inst = numeric_instance(Graph::complete_bipartite(n, n), marked, 1.0 / (2 * n));
    const auto roots = find_secular_roots(inst);

    const double lm = (-1 - std::sqrt(2.0)) / 2;
    const double lp = (-1 + std::sqrt(2.0)) / 2;
    bool saw_minus = false, saw_plus = false, saw_minus_one = false;
    for (const auto& r : roots) {
      if (std::abs(r.lambda - lm) < 1e-9) saw_minus = true;
      if (std::abs(r.lambda - lp) < 1e-9) saw_plus = true;
      if (std::abs(r.lambda + 1.0) < 1e-9) {
        saw_minus_one = true;
        CHECK(r.nullity == n - 1);
      }
    }
    CHECK(saw_minus);
    CHECK(saw_plus);
    CHECK(saw_minus_one);

    const Classification cls = classify(inst);
    CHECK(cls.lambda_minus == doctest::Approx(lm).epsilon(1e-10));
    CHECK(cls.lambda_plus == doctest::Approx(lp).epsilon(1e-10));
    CHECK(cls.lambda_plus_index == n + 2);
    CHECK(cls.lambda_plus_multiplicity == 1);
    REQUIRE(cls.skipped.size() == 1);
    CHECK(std::abs(cls.skipped[0].lambda) < 1e-9);  // 0 in sigma(-gamma A)
    CHECK(cls.skipped[0].reason == SkipReason::in_adjacency_spectrum);
    CHECK(cls.skipped[0].multiplicity == n - 1);
  }
}

TEST_CASE("johnson(6,2) two-marked: all roots match dense eigenvalues to 1e-9") {
  auto gp = std::make_shared<const Graph>(Graph::johnson(6, 2));
  const auto [w1, w2] = canonical_marked_pair(6, 2, 1);
  const SumPack s = sum_pack(6, 2, 1);
  SearchInstance inst = make_johnson_instance(gp, w1, w2, s.s1 + s.s1p);
  const auto roots = find_secular_roots(inst);
  CHECK(roots.size() >= 3);
  const Eigh dense = eigh(dense_hamiltonian(*gp, inst.marked, inst.gamma));
  for (const auto& r : roots) {
    double best = 1e300;
    for (int j = 0; j < dense.evals.size(); ++j) best = std::min(best, std::abs(dense.evals(j) - r.lambda));
    CHECK(best < 1e-9);
  }
}

TEST_CASE("johnson two-marked: lambda+ unique in (-gamma phi0, -gamma phi1)") {
  for (int n : {8, 12}) {
    SearchInstance inst = make_johnson_instance(n, 2, 1, johnson_predictions(n, 2, 1).gamma);
    const Classification cls = classify(inst);
    const double p0 = -inst.gamma * inst.data.phis[0];
    const double p1 = -inst.gamma * inst.data.phis[1];
    CHECK(cls.lambda_plus > p0);
    CHECK(cls.lambda_plus < p1);
    CHECK(cls.lambda_minus < p0);
    // unique symmetric-kernel eigenvalue in the window: the only other root
    // there has the antisymmetric kernel
    for (const auto& r : find_secular_roots(inst)) {
      if (r.lambda <= p0 || r.lambda >= p1 || std::abs(r.lambda - cls.lambda_plus) < 1e-12) continue;
      CHECK(std::abs(r.kernel(0, 0) + r.kernel(1, 0)) < 1e-8);
    }
  }
}

TEST_CASE("classification rank rollback: johnson(14,3) delta=1 keeps the coupled lambda+") {
  // Here the antisymmetric zero-overlap root lies above the physical lambda+;
  // a pure rank walk would land beyond it.
  SearchInstance inst = make_johnson_instance(14, 3, 1, johnson_predictions(14, 3, 1).gamma);
  const Classification cls = classify(inst);
  const double p1 = -inst.gamma * inst.data.phis[1];
  CHECK(cls.lambda_plus < p1);
  CHECK(cls.lambda_plus > -inst.gamma * inst.data.phis[0]);
  REQUIRE(!cls.skipped.empty());
  CHECK(cls.skipped[0].reason == SkipReason::zero_overlap);
  CHECK(cls.skipped[0].lambda > cls.lambda_plus);
  // the chosen eigenvector couples to psi0
  const double overlap = std::abs(cls.kernel_plus.col(0).dot(inst.data.psi0_marked));
  CHECK(overlap > 1e-6);
}

TEST_CASE("single marked vertex: lambda+ is the second eigenvalue passing the filter") {
  SearchInstance inst = numeric_instance(Graph::complete(9), {2}, 0.1);
  const Classification cls = classify(inst);
  const Eigh dense = eigh(dense_hamiltonian(*inst.graph, inst.marked, inst.gamma));
  CHECK(cls.lambda_minus == doctest::Approx(dense.evals(0)).epsilon(1e-10));
  CHECK(cls.lambda_plus == doctest::Approx(dense.evals(1)).epsilon(1e-10));
  CHECK(cls.lambda_plus_index == 2);
}

TEST_CASE("reconstructed ground state of K_N single-marked has entries of one sign") {
  SearchInstance inst = numeric_instance(Graph::complete(11), {4}, 0.08);
  const Classification cls = classify(inst);
  double residual = 0;
  const Vector v = reconstruct_eigenvector(inst, cls.lambda_minus, cls.kernel_minus, &residual);
  CHECK(residual < 1e-8);
  CHECK(std::abs(v.norm() - 1) < 1e-12);
  CHECK(v(4) > 0);
  CHECK(v.minCoeff() > 0);
}

TEST_CASE("reconstruction: johnson two-marked ground state has equal marked entries") {
  auto gp = std::make_shared<const Graph>(Graph::johnson(6, 2));
  auto sp = std::make_shared<const Spectrum>(spectral_decomposition(*gp));
  const auto [w1, w2] = canonical_marked_pair(6, 2, 1);
  SearchInstance inst = make_search_instance(gp, sp, {w1, w2}, 0.08);
  const Classification cls = classify(inst);
  double residual = 0;
  const Vector v = reconstruct_eigenvector(inst, cls.lambda_minus, cls.kernel_minus, &residual);
  CHECK(residual < 1e-8);
  CHECK(v(w1) == doctest::Approx(v(w2)).epsilon(1e-10));
}

TEST_CASE("reconstruction rejects vectors outside the kernel") {
  SearchInstance inst = numeric_instance(Graph::johnson(6, 2), {0, 7}, 0.1);
  const Classification cls = classify(inst);
  Vector bogus(2);
  bogus << 1, 0;
  if (std::abs((build_secular_matrix(inst, cls.lambda_minus).entries * bogus).norm()) > 1e-4)
    CHECK_THROWS_AS(reconstruct_eigenvector(inst, cls.lambda_minus, bogus), std::invalid_argument);
}

TEST_CASE("overlaps: c*u matches the reconstructed eigenvector entrywise") {
  for (auto [graph, marked] : std::vector<std::pair<Graph, std::vector<int>>>{
           {Graph::johnson(6, 2), {0, 7}}, {Graph::hypercube(4), {1, 6, 11}}, {Graph::complete(10), {3}}}) {
    SearchInstance inst = numeric_instance(std::move(graph), marked, 0.12);
    const Classification cls = classify(inst);
    const SpectralPair pair = compute_overlaps(inst, cls, false);

    // reconstruct from the branch's own (sign-fixed) kernel direction
    const Vector vm = reconstruct_eigenvector(inst, cls.lambda_minus, pair.minus.kernel);
    for (std::size_t i = 0; i < marked.size(); ++i)
      CHECK(std::abs(pair.minus.overlaps_w(static_cast<int>(i)) - vm(marked[i])) < 1e-8);

    const Vector psi0 = initial_state(*inst.graph, *inst.spectrum);
    CHECK(std::abs(pair.minus.overlap_psi0 - psi0.dot(vm)) < 1e-8);
    if (pair.lambda_plus_multiplicity == 1) {
      const Vector vp = reconstruct_eigenvector(inst, cls.lambda_plus, cls.kernel_plus.col(0));
      const double sign = pair.plus[0].overlaps_w(0) * vp(marked[0]) < 0 ? -1.0 : 1.0;
      for (std::size_t i = 0; i < marked.size(); ++i)
        CHECK(std::abs(pair.plus[0].overlaps_w(static_cast<int>(i)) - sign * vp(marked[i])) < 1e-8);
    }
  }
}

TEST_CASE("asymptotic gamma on johnson two-marked reduces to S1 + S1'") {
  for (int n : {8, 12, 20}) {
    for (int delta : {1, 2}) {
      SearchInstance inst = make_johnson_instance(n, 2, delta, 1.0);
      const AsymptoticGamma ag = gamma_asymptotic(inst);
      const SumPack s = sum_pack(n, 2, delta);
      CHECK(ag.two_symmetric);
      CHECK(ag.gamma == doctest::Approx(s.s1 + s.s1p).epsilon(1e-13));
      const double nd = static_cast<double>(inst.data.num_vertices);
      const double eps_formula = std::sqrt(2 * ag.gamma * ag.gamma / (nd * (s.s2 + s.s2p)));
      CHECK(ag.epsilon == doctest::Approx(eps_formula).epsilon(1e-12));
    }
  }
}

TEST_CASE("midpoint gamma: K_{n,n} with one part marked lands on 1/(2n)") {
  for (int n : {4, 8}) {
    std::vector<int> marked(n);
    for (int i = 0; i < n; ++i) marked[i] = i;
    SearchInstance inst = numeric_instance(Graph::complete_bipartite(n, n), marked, 1.0);
    const MidpointResult mid = gamma_midpoint(inst);
    CHECK(mid.gamma == doctest::Approx(1.0 / (2 * n)).epsilon(1e-6));
    CHECK(check_midpoint(inst).ok);
  }
}

TEST_CASE("midpoint gamma within 20% of S1+S1' on johnson(8,2)") {
  SearchInstance inst = make_johnson_instance(8, 2, 1, 1.0);
  const MidpointResult mid = gamma_midpoint(inst);
  const SumPack s = sum_pack(8, 2, 1);
  CHECK(std::abs(mid.gamma - (s.s1 + s.s1p)) < 0.2 * (s.s1 + s.s1p));
}

TEST_CASE("leakage: regular-graph projector sum is |W|^2/N exactly") {
  SearchInstance inst = numeric_instance(Graph::hypercube(5), {0, 3, 17}, 0.2);
  CHECK(inst.data.p0_total == doctest::Approx(9.0 / 32).epsilon(1e-12));
  const Classification cls = classify(inst);
  CHECK(leakage_bound(inst, cls.lambda_circ) ==
        doctest::Approx(5.0 / std::pow(cls.lambda_circ + inst.gamma * inst.data.phis[0], 2) * 9.0 / 32)
            .epsilon(1e-12));
}

TEST_CASE("leakage bound holds on johnson(8,2) at the midpoint gamma") {
  auto gp = std::make_shared<const Graph>(Graph::johnson(8, 2));
  auto sp = std::make_shared<const Spectrum>(spectral_decomposition(*gp));
  const auto [w1, w2] = canonical_marked_pair(8, 2, 1);
  SearchInstance inst = make_search_instance(gp, sp, {w1, w2}, 1.0);
  const MidpointResult mid = gamma_midpoint(inst);
  const SearchInstance at = inst.with_gamma(mid.gamma);
  const Eigh dense = eigh(dense_hamiltonian(*gp, at.marked, at.gamma));
  const Vector psi0 = initial_state(*gp, *sp);
  CHECK(check_leakage(at, dense, psi0).ok);
}

TEST_CASE("randomized framework ensemble: roots, orthogonality, overlap identity") {
  const auto ensemble = framework_ensemble();
  REQUIRE(ensemble.size() >= 17);
  int instances = 0;
  for (const auto& ti : ensemble) {
    for (double f : {0.5, 1.0, 2.0}) {
      const double gamma = f * ti.gamma_hat;
      SearchInstance inst = make_search_instance(ti.graph, ti.spectrum, ti.marked, gamma);
      const Eigh dense = eigh(dense_hamiltonian(*ti.graph, ti.marked, gamma));
      const Vector psi0 = initial_state(*ti.graph, *ti.spectrum);
      const CheckResult r1 = check_root_equivalence(inst, dense, psi0);
      INFO(ti.name << " gamma=" << gamma << ": " << r1.detail);
      CHECK(r1.ok);
      const CheckResult r2 = check_orthogonal_eigenvectors(inst, dense);
      INFO(ti.name << ": " << r2.detail);
      CHECK(r2.ok);
      const CheckResult r3 = check_overlap_identity(inst, psi0);
      INFO(ti.name << ": " << r3.detail);
      CHECK(r3.ok);
      ++instances;
    }
  }
  CHECK(instances >= 50);
}

TEST_CASE("ground state: below -gamma phi0 and simple, across the gamma grid") {
  const auto ensemble = framework_ensemble();
  for (const auto& ti : ensemble) {
    for (double gamma : {1e-3, 1e-2, 1e-1, 1.0, 10.0}) {
      const Eigh dense = eigh(dense_hamiltonian(*ti.graph, ti.marked, gamma));
      const double gp0 = gamma * ti.spectrum->phis[0];
      CHECK(dense.evals(0) < -gp0 + 1e-12);
      // Near-degenerate marked splits sit below eigensolver resolution for
      // tiny gamma; the dimension check needs resolvable gaps.
      if (gamma >= 0.1) {
        const double scale = std::max(1.0, std::abs(dense.evals(0)));
        CHECK(dense.evals(1) - dense.evals(0) > 1e-7 * scale);
      }
    }
  }
}
