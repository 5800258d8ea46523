#pragma once

#include "core/common.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace ctqw {

enum class GraphFamily { johnson, complete, complete_bipartite, hypercube, custom };

// Dense vertex cap; CTQW_MAX_N overrides the default of 2000.
int max_vertex_cap();

// Finite connected simple graph with dense 0/1 adjacency.
// Construction validates symmetry, zero diagonal and connectivity.
class Graph {
public:
  // Vertices are the k-subsets of {1..n} in colexicographic order,
  // adjacent when the intersection has size k-1.
  static Graph johnson(int n, int k);
  static Graph complete(int n);
  // Left part = vertices 0..a-1, right part = a..a+b-1.
  static Graph complete_bipartite(int a, int b);
  static Graph hypercube(int d);
  static Graph from_adjacency(Matrix adjacency);
  // Whitespace-separated 0-based vertex pairs, one edge per line; lines
  // starting with '#' and blank lines ignored; duplicate edges collapsed.
  static Graph from_edge_list(std::istream& in);
  static Graph from_edge_list_file(const std::string& path);

  int num_vertices() const { return static_cast<int>(adjacency_.rows()); }
  const Matrix& adjacency() const { return adjacency_; }
  GraphFamily family() const { return family_; }
  const std::vector<int>& family_params() const { return params_; }
  std::string description() const;

  int degree(int v) const;
  int max_degree() const;
  bool is_regular() const;

  // BFS shortest-path distance.
  int distance(int v1, int v2) const;

  // Johnson graphs only.
  const std::vector<int>& subset_of(int v) const;
  int subset_index(std::vector<int> subset) const;

private:
  Graph(Matrix a, GraphFamily fam, std::vector<int> params);

  Matrix adjacency_;
  GraphFamily family_ = GraphFamily::custom;
  std::vector<int> params_;
  std::vector<std::vector<int>> subsets_;
};

struct JohnsonClosedSpectrum {
  std::vector<double> phis;                  // (k-l)(n-k-l)-l, strictly decreasing
  std::vector<std::int64_t> multiplicities;  // C(n,l) - C(n,l-1)
  std::vector<double> projector_diagonal;    // multiplicity / C(n,k) = ||P_l|w>||^2
  std::int64_t num_vertices = 0;
};

// Closed-form adjacency spectrum of J(n,k); valid for 1 <= k < n.
JohnsonClosedSpectrum johnson_closed_spectrum(int n, int k);

}  // namespace ctqw
