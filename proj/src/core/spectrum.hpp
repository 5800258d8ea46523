#pragma once

#include "core/common.hpp"
#include "core/graph.hpp"

#include <vector>

namespace ctqw {

// Spectral resolution of an adjacency matrix: distinct eigenvalues in
// strictly decreasing order with the orthogonal projectors onto their
// eigenspaces, so that A = sum_l phis[l] * projectors[l].
struct Spectrum {
  std::vector<double> phis;
  std::vector<Matrix> projectors;
  std::vector<int> multiplicities;

  int bands() const { return static_cast<int>(phis.size()); }
};

// Eigenvalues closer than 1e-8 * max(1, ||A||_2) are merged into one band.
Spectrum spectral_decomposition(const Graph& g);

// Unit Perron eigenvector of the adjacency matrix (entries all nonnegative);
// the uniform superposition when the graph is regular.
Vector initial_state(const Graph& g, const Spectrum& s);

}  // namespace ctqw
