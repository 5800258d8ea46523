#include "core/spectrum.hpp"

#include <algorithm>
#include <cmath>

namespace ctqw {

Spectrum spectral_decomposition(const Graph& g) {
  const Matrix& a = g.adjacency();
  Eigen::SelfAdjointEigenSolver<Matrix> solver(a);
  if (solver.info() != Eigen::Success) throw NumericalError("adjacency eigensolver did not converge");
  const Vector& evals = solver.eigenvalues();  // ascending
  const Matrix& evecs = solver.eigenvectors();
  const int n = g.num_vertices();

  const double scale = std::max(std::abs(evals(0)), std::abs(evals(n - 1)));
  const double tol = 1e-8 * std::max(1.0, scale);

  Spectrum s;
  int i = 0;
  while (i < n) {
    int j = i;
    while (j + 1 < n && evals(j + 1) - evals(i) < tol) ++j;
    const int mult = j - i + 1;
    Matrix block = evecs.middleCols(i, mult);
    s.phis.push_back(evals.segment(i, mult).mean());
    s.projectors.push_back(block * block.transpose());
    s.multiplicities.push_back(mult);
    i = j + 1;
  }
  std::reverse(s.phis.begin(), s.phis.end());
  std::reverse(s.projectors.begin(), s.projectors.end());
  std::reverse(s.multiplicities.begin(), s.multiplicities.end());
  return s;
}

Vector initial_state(const Graph& g, const Spectrum& s) {
  if (s.multiplicities.empty() || s.multiplicities[0] != 1)
    throw NumericalError("top adjacency eigenvalue is not simple; graph connected?");
  // P0 * ones is proportional to the Perron vector and fixes its sign.
  Vector v = s.projectors[0] * Vector::Ones(g.num_vertices());
  const double norm = v.norm();
  if (norm <= 0) throw NumericalError("degenerate initial state");
  return v / norm;
}

}  // namespace ctqw
