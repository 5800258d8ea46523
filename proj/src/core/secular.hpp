#pragma once

#include "core/common.hpp"
#include "core/graph.hpp"
#include "core/spectrum.hpp"

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace ctqw {

// Everything the |W|-dimensional secular machinery needs from a graph:
// distinct adjacency eigenvalues with multiplicities, the |W|x|W| projector
// blocks <w|P_l|w'>, and the initial-state overlaps <psi0|w>.
struct MarkedBlockData {
  std::vector<double> phis;                  // strictly decreasing
  std::vector<std::int64_t> multiplicities;  // as adjacency eigenvalues
  std::vector<Matrix> blocks;                // one PSD |W|x|W| block per band
  std::vector<int> block_ranks;              // dim span{P_l|w>}
  Vector psi0_marked;                        // <psi0|w>
  double p0_total = 0;                       // sum_{w,w'} <w|P0|w'>
  std::int64_t num_vertices = 0;
  double max_degree = 0;

  int bands() const { return static_cast<int>(phis.size()); }
  int marked_count() const { return static_cast<int>(psi0_marked.size()); }
};

MarkedBlockData marked_block_data(const Graph& g, const Spectrum& s, const std::vector<int>& marked);

// Closed-form block data for a Johnson instance with two marked vertices at
// distance delta; no eigensolve involved.
MarkedBlockData johnson_marked_block_data(int n, int k, int delta);

// A graph with a marked set and a hopping rate.  The spectrum pointer is
// null when the block data came from closed forms.
struct SearchInstance {
  std::shared_ptr<const Graph> graph;
  std::shared_ptr<const Spectrum> spectrum;
  std::vector<int> marked;
  double gamma = 0;
  MarkedBlockData data;

  SearchInstance with_gamma(double g) const {
    SearchInstance r = *this;
    r.gamma = g;
    return r;
  }
  double phi0() const { return data.phis[0]; }
};

SearchInstance make_search_instance(std::shared_ptr<const Graph> g, std::shared_ptr<const Spectrum> s,
                                    std::vector<int> marked, double gamma);

// H = -gamma*A - sum_{w in W} |w><w| as a dense matrix.  gamma = 0 is
// allowed here (H is then minus the oracle projector).
Matrix build_hamiltonian(const Graph& g, const std::vector<int>& marked, double gamma);
Matrix build_hamiltonian(const SearchInstance& inst);

// Values of lambda within this distance of any -gamma*phi_l count as lying
// in sigma(-gamma A).
double pole_guard(const SearchInstance& inst);

struct SecularMatrix {
  double lambda = 0;
  Matrix entries;                      // symmetric |W|x|W|
  std::vector<double> pole_distances;  // lambda + gamma*phi_l per band
};

// M_{ww'} = delta_{ww'} + sum_l <w|P_l|w'> / (lambda + gamma*phi_l).
// Throws if lambda is within the pole guard of sigma(-gamma A).
SecularMatrix build_secular_matrix(const SearchInstance& inst, double lambda);

struct SecularRoot {
  double lambda = 0;
  int nullity = 0;
  Matrix kernel;  // |W| x nullity, orthonormal 0-eigenvectors of M^lambda
};

// All roots of det(M^lambda) = 0 outside sigma(-gamma A), with nullities and
// kernel bases.  The eigenvalues of M^lambda are strictly decreasing in
// lambda between consecutive poles -gamma*phi_l, so each sorted eigenvalue
// branch is scanned on a per-interval grid and bisected independently; this
// also recovers roots of even nullity, where det itself does not change sign.
std::vector<SecularRoot> find_secular_roots(const SearchInstance& inst);

// One eigenvalue of H.  from_adjacency means the eigenspace is orthogonal to
// every marked vertex and the eigenvalue lies in sigma(-gamma A).
struct HEigenvalue {
  double lambda = 0;
  std::int64_t multiplicity = 0;
  bool from_adjacency = false;
  Matrix kernel;  // secular roots only
};

// Full spectrum of H: secular roots plus the sigma(-gamma A) eigenvalues
// whose eigenspaces are orthogonal to W (multiplicity m_l - rank of the
// marked block).  Multiplicities sum to N.
std::vector<HEigenvalue> assemble_h_spectrum(const SearchInstance& inst, const std::vector<SecularRoot>& roots);

enum class SkipReason { in_adjacency_spectrum, zero_overlap };

struct SkippedCandidate {
  double lambda = 0;
  std::int64_t multiplicity = 0;
  SkipReason reason = SkipReason::in_adjacency_spectrum;
};

struct Classification {
  double lambda_minus = 0;
  Vector kernel_minus;
  double lambda_plus = 0;
  Matrix kernel_plus;  // |W| x multiplicity
  std::int64_t lambda_plus_multiplicity = 1;
  std::int64_t lambda_plus_index = 0;  // 1-based position in the candidate walk
  std::vector<SkippedCandidate> skipped;
  double lambda_circ = 0;  // eigenvalue immediately following lambda-
  std::vector<std::string> warnings;
};

// lambda- is the smallest eigenvalue; lambda+ starts from the
// (|W|+1)-smallest counting multiplicity and advances past candidates in
// sigma(-gamma A) or with eigenspaces orthogonal to |psi(0)>.  A candidate
// skipped for zero overlap returns its multiplicity to the rank budget
// (rollback): such eigenvalues are invisible to the dynamics and may lie
// above the physical lambda+ at finite size.
Classification classify(const SearchInstance& inst, const std::vector<HEigenvalue>& spectrum);
Classification classify(const SearchInstance& inst);

// Eigenvector of H rebuilt from a kernel vector of M^lambda; needs the full
// projectors.  Unit norm; sign fixed so that sum_w kernel(w) <w|result> >= 0.
// residual receives ||H|v> - lambda|v>|| when non-null.
Vector reconstruct_eigenvector(const SearchInstance& inst, double lambda, const Vector& kernel,
                               double* residual = nullptr);

struct EigBranch {
  double lambda = 0;
  Vector kernel;       // overlap direction, unit norm
  double c = 0;        // positive normalization: <w|lam> = c * kernel(w)
  Vector overlaps_w;   // c * kernel
  double overlap_psi0 = 0;
};

struct SpectralPair {
  EigBranch minus;
  std::vector<EigBranch> plus;  // orthonormal basis of the lambda+ eigenspace
  double epsilon = 0;           // (lam+ - lam-)/2 after midpoint gamma, else |lam- + gamma*phi0|
  std::int64_t lambda_plus_multiplicity = 1;
  std::int64_t lambda_plus_index = 0;
  std::vector<SkippedCandidate> skipped;
  double lambda_circ = 0;
  double gamma = 0;
  double gamma_phi0 = 0;
  std::vector<std::string> warnings;

  double lambda_minus() const { return minus.lambda; }
  double lambda_plus() const { return plus.front().lambda; }
};

// Exact overlaps: 1/c^2 = sum_l ||sum_w u(w) P_l|w>||^2 / (lambda+gamma*phi_l)^2,
// <w|lam> = c u(w), and <psi0|lam> from the l=0 relation with the exact
// lambda + gamma*phi0.  Degenerate lambda+ eigenspaces are orthonormalized by
// pivoted Gram-Schmidt in the reconstructed-vector inner product.
SpectralPair compute_overlaps(const SearchInstance& inst, const Classification& cls, bool midpoint_epsilon);

struct AsymptoticSums {
  Matrix s1;  // sum_{l>=1} <w|P_l|w'> / (phi0 - phi_l)
  Matrix s2;  // same with squared denominators
  Matrix p0;  // <w|P0|w'>
};

AsymptoticSums asymptotic_sums(const SearchInstance& inst);

struct AsymptoticGamma {
  double gamma = 0;
  double epsilon = 0;
  Vector kernel_direction;
  bool two_symmetric = false;  // |W| = 2 with equal-diagonal symmetric data
};

// Solves a(gamma) = 0 along the Perron direction of the P0 block and returns
// epsilon = sqrt(b(gamma)).  For two symmetric marked vertices this reduces
// to gamma = S1 + S1'.
AsymptoticGamma gamma_asymptotic(const SearchInstance& inst);

struct MidpointResult {
  double gamma = 0;
  double residual = 0;  // |lambda- + lambda+ + 2 gamma phi0|
  int iterations = 0;
};

// Bisection on g(gamma) = lambda-(gamma) + lambda+(gamma) + 2 gamma phi0 over
// a bracket grown geometrically from 1/(degree*N).
MidpointResult gamma_midpoint(const SearchInstance& inst);

// (|W|+2) / (lambda_circ + gamma*phi0)^2 * sum_{w,w'} <w|P0|w'>.
double leakage_bound(const SearchInstance& inst, double lambda_circ);

}  // namespace ctqw
