#include "doctest.h"

#include "core/graph.hpp"
#include "core/spectrum.hpp"
#include "oracles.hpp"

#include <algorithm>
#include <sstream>

using namespace ctqw;

TEST_CASE("johnson(5,2): 10 vertices, regular of degree k(n-k)=6") {
  const Graph g = Graph::johnson(5, 2);
  CHECK(g.num_vertices() == 10);
  for (int v = 0; v < g.num_vertices(); ++v) CHECK(g.degree(v) == 6);  // row-sum check
  CHECK(g.is_regular());
}

TEST_CASE("complete_bipartite(3,3): 9 edges, all across the parts") {
  const Graph g = Graph::complete_bipartite(3, 3);
  CHECK(g.num_vertices() == 6);
  CHECK(g.adjacency().sum() == doctest::Approx(18.0));  // 9 edges
  for (int i = 0; i < 3; ++i)
    for (int j = 3; j < 6; ++j) CHECK(g.adjacency()(i, j) == 1.0);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(g.adjacency()(i, j) == 0.0);
}

TEST_CASE("johnson(n,1) is the complete graph K_n") {
  for (int n : {3, 5, 8}) {
    const Graph j = Graph::johnson(n, 1);
    const Graph k = Graph::complete(n);
    CHECK((j.adjacency() - k.adjacency()).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("johnson parameter validation") {
  CHECK_THROWS_AS(Graph::johnson(3, 3), std::invalid_argument);
  CHECK_THROWS_AS(Graph::johnson(3, 0), std::invalid_argument);
}

TEST_CASE("colexicographic vertex enumeration is reproducible") {
  const Graph g = Graph::johnson(5, 2);
  CHECK(g.subset_of(0) == std::vector<int>{1, 2});
  CHECK(g.subset_of(1) == std::vector<int>{1, 3});
  CHECK(g.subset_of(2) == std::vector<int>{2, 3});
  CHECK(g.subset_of(9) == std::vector<int>{4, 5});
  for (int v = 0; v < g.num_vertices(); ++v) CHECK(g.subset_index(g.subset_of(v)) == v);
}

TEST_CASE("edge list: triangle") {
  std::istringstream in("0 1\n# comment\n\n1 2\n2 0\n");
  const Graph g = Graph::from_edge_list(in);
  CHECK(g.num_vertices() == 3);
  CHECK((g.adjacency() - (Matrix::Ones(3, 3) - Matrix::Identity(3, 3))).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("edge list errors: self-loop, bad token, disconnected") {
  {
    std::istringstream in("0 0\n");
    CHECK_THROWS_AS(Graph::from_edge_list(in), ParseError);
  }
  {
    std::istringstream in("0 x\n");
    CHECK_THROWS_AS(Graph::from_edge_list(in), ParseError);
  }
  {
    std::istringstream in("0 -2\n");
    CHECK_THROWS_AS(Graph::from_edge_list(in), ParseError);
  }
  {
    // two disjoint edges
    std::istringstream in("0 1\n2 3\n");
    CHECK_THROWS_AS(Graph::from_edge_list(in), std::invalid_argument);
  }
}

TEST_CASE("edge list of K_{2,2} equals the family constructor") {
  std::istringstream in("0 2\n0 3\n1 2\n1 3\n");
  const Graph g = Graph::from_edge_list(in);
  const Graph k = Graph::complete_bipartite(2, 2);
  CHECK((g.adjacency() - k.adjacency()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("duplicate edges collapse") {
  std::istringstream in("0 1\n1 0\n0 1\n1 2\n2 0\n");
  const Graph g = Graph::from_edge_list(in);
  CHECK(g.adjacency()(0, 1) == 1.0);
  CHECK(g.adjacency().sum() == doctest::Approx(6.0));
}

TEST_CASE("graph distance: BFS against the Johnson intersection formula") {
  CHECK(Graph::johnson(5, 2).distance(3, 3) == 0);
  {
    const Graph g = Graph::johnson(5, 2);
    CHECK(g.distance(g.subset_index({1, 2}), g.subset_index({1, 3})) == 1);
  }
  {
    const Graph g = Graph::johnson(6, 3);
    CHECK(g.distance(g.subset_index({1, 2, 3}), g.subset_index({4, 5, 6})) == 3);
  }
  for (int n = 3; n <= 9; ++n) {
    for (int k = 1; k < n; ++k) {
      const Graph g = Graph::johnson(n, k);
      for (int v1 = 0; v1 < g.num_vertices(); ++v1) {
        const auto& s1 = g.subset_of(v1);
        for (int v2 = v1; v2 < g.num_vertices(); ++v2) {
          const auto& s2 = g.subset_of(v2);
          int common = 0;
          for (int x : s1) common += static_cast<int>(std::count(s2.begin(), s2.end(), x));
          REQUIRE(g.distance(v1, v2) == k - common);
        }
      }
    }
  }
}

namespace {

void check_resolution(const Graph& g, const Spectrum& s) {
  const int n = g.num_vertices();
  Matrix sum = Matrix::Zero(n, n);
  Matrix recon = Matrix::Zero(n, n);
  int mult_total = 0;
  for (int l = 0; l < s.bands(); ++l) {
    sum += s.projectors[l];
    recon += s.phis[l] * s.projectors[l];
    mult_total += s.multiplicities[l];
    CHECK(std::abs(s.projectors[l].trace() - s.multiplicities[l]) < 1e-9);
    if (l > 0) CHECK(s.phis[l] < s.phis[l - 1]);
    for (int m = 0; m <= l; ++m) {
      const Matrix prod = s.projectors[l] * s.projectors[m];
      const Matrix expect = (l == m) ? s.projectors[l] : Matrix::Zero(n, n);
      CHECK((prod - expect).cwiseAbs().maxCoeff() < 1e-10);
    }
  }
  CHECK(mult_total == n);
  CHECK((sum - Matrix::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-10);
  CHECK((recon - g.adjacency()).cwiseAbs().maxCoeff() < 1e-9);
}

}  // namespace

TEST_CASE("spectral resolution identities on assorted graphs") {
  std::mt19937 rng(7);
  std::vector<Graph> graphs;
  graphs.push_back(Graph::johnson(5, 2));
  graphs.push_back(Graph::johnson(7, 3));
  graphs.push_back(Graph::complete(9));
  graphs.push_back(Graph::complete_bipartite(6, 6));
  graphs.push_back(Graph::hypercube(4));
  graphs.push_back(Graph::from_adjacency(testing::random_connected_adjacency(rng, 40)));
  graphs.push_back(Graph::from_adjacency(testing::random_connected_adjacency(rng, 57)));
  for (const Graph& g : graphs) {
    const Spectrum s = spectral_decomposition(g);
    check_resolution(g, s);
    if (g.is_regular()) {
      const Vector ones = Vector::Ones(g.num_vertices());
      CHECK((s.projectors[0] * ones - ones).cwiseAbs().maxCoeff() < 1e-10);
      CHECK((s.projectors[0] - Matrix::Ones(g.num_vertices(), g.num_vertices()) / g.num_vertices())
                .cwiseAbs()
                .maxCoeff() < 1e-10);
    }
    const Vector psi0 = initial_state(g, s);
    CHECK(psi0.minCoeff() > -1e-12);  // Perron sign convention
    CHECK(std::abs(psi0.norm() - 1.0) < 1e-12);
    CHECK((g.adjacency() * psi0 - s.phis[0] * psi0).norm() < 1e-9);
  }
}

TEST_CASE("K_{n,n} spectrum: n, 0, -n with multiplicities 1, 2n-2, 1") {
  for (int n : {3, 6, 10}) {
    const Spectrum s = spectral_decomposition(Graph::complete_bipartite(n, n));
    REQUIRE(s.bands() == 3);
    CHECK(s.phis[0] == doctest::Approx(n).epsilon(1e-12));
    CHECK(std::abs(s.phis[1]) < 1e-10);
    CHECK(s.phis[2] == doctest::Approx(-n).epsilon(1e-12));
    CHECK(s.multiplicities == std::vector<int>{1, 2 * n - 2, 1});
  }
}

TEST_CASE("johnson(5,2) spectrum: {6, 1, -2} with multiplicities {1, 4, 5}") {
  const Spectrum s = spectral_decomposition(Graph::johnson(5, 2));
  REQUIRE(s.bands() == 3);
  CHECK(s.phis[0] == doctest::Approx(6).epsilon(1e-12));
  CHECK(s.phis[1] == doctest::Approx(1).epsilon(1e-12));
  CHECK(s.phis[2] == doctest::Approx(-2).epsilon(1e-12));
  CHECK(s.multiplicities == std::vector<int>{1, 4, 5});
}

TEST_CASE("johnson closed spectrum: spot values and small-n agreement") {
  // (n,k,l) = (5,2,1): phi_1 = 1, diagonal 4/10; l = 0: phi_0 = k(n-k), 1/N
  const JohnsonClosedSpectrum probe = johnson_closed_spectrum(5, 2);
  CHECK(probe.phis[1] == doctest::Approx(1.0));
  CHECK(probe.projector_diagonal[1] == doctest::Approx(0.4).epsilon(1e-14));
  CHECK(probe.phis[0] == doctest::Approx(6.0));
  CHECK(probe.projector_diagonal[0] == doctest::Approx(0.1).epsilon(1e-14));

  for (int n = 3; n <= 9; ++n) {
    for (int k = 1; k < n; ++k) {
      const JohnsonClosedSpectrum cs = johnson_closed_spectrum(n, k);
      std::int64_t mult_sum = 0;
      for (auto m : cs.multiplicities) mult_sum += m;
      REQUIRE(mult_sum == cs.num_vertices);  // telescoping C(n,l) - C(n,l-1)

      const Graph g = Graph::johnson(n, k);
      const Spectrum s = spectral_decomposition(g);
      REQUIRE(s.bands() == std::min(k, n - k) + 1);
      REQUIRE(s.bands() == static_cast<int>(cs.phis.size()));
      for (int l = 0; l < s.bands(); ++l) {
        REQUIRE(std::abs(s.phis[l] - cs.phis[l]) < 1e-9);
        REQUIRE(s.multiplicities[l] == cs.multiplicities[l]);
        for (int v = 0; v < g.num_vertices(); ++v)
          REQUIRE(std::abs(s.projectors[l](v, v) - cs.projector_diagonal[l]) < 1e-9);
      }
    }
  }
}

TEST_CASE("vertex cap is enforced") {
  CHECK(max_vertex_cap() == 2000);
  CHECK_THROWS_AS(Graph::johnson(30, 4), std::invalid_argument);  // C(30,4) = 27405
}
