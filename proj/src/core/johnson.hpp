#pragma once

#include "core/common.hpp"
#include "core/graph.hpp"
#include "core/rational.hpp"
#include "core/secular.hpp"

#include <optional>
#include <vector>

namespace ctqw {

struct JohnsonParams {
  int n = 0;
  int k = 0;
  int delta = 0;  // distance between the two marked vertices, in [1, k]
};

JohnsonParams validated_johnson_params(int n, int k, int delta);

// Terminating 3F2(-l, -delta, l-n-1; k-n, -k; 1) in exact rationals.
// nullopt when a denominator Pochhammer hits zero before the series
// terminates (possible only when min(l, delta) > n-k).
std::optional<BigRational> hyp3f2_reduced_exact(int n, int k, int l, int delta);

// Same series as a double: exact rational evaluation for n <= 64,
// compensated floating summation beyond.
double hyp3f2_series(int n, int k, int l, int delta);

// <w1|P_l|w2> = ||P_l|w1>||^2 * 3F2(...), for marked vertices at distance delta.
double hyp3f2_cross(int n, int k, int l, int delta);

BigRational projector_diagonal_exact(int n, int k, int l);

// Dual Hahn parameter array behind the series transform: with
// phi_0 = k(n-k) and h = 1 the phi sequence reproduces the J(n,k) spectrum.
struct DualHahnArray {
  int n = 0, k = 0;
  double phi_0 = 0, phi_star_0 = 0, h = 1, s_star = 1;

  double s() const { return -static_cast<double>(n) - 2; }
  double r() const { return static_cast<double>(k) - n - 1; }
  double phi(int l) const { return phi_0 + h * l * (l + 1 + s()); }
  double phi_star(int l) const { return phi_star_0 + s_star * l; }
  double alpha(int l) const { return h * s_star * l * (l - k - 1) * (l + r()); }
  double beta(int l) const { return h * s_star * l * (l - k - 1) * (l + r() - s() - k - 1); }
};

DualHahnArray dual_hahn_array(int n, int k, double phi_0, double phi_star_0, double h, double s_star);

struct TransformCheck {
  bool defined = false;  // both sides evaluable (delta <= n-k)
  double lhs = 0;
  double rhs = 0;
  double abs_diff = 0;
  bool exact_equal = false;  // compared in rational arithmetic
};

// Verifies 3F2(-l,-delta,l-n-1; k-n,-k; 1) = delta!/(k-n)_delta *
// 3F2(l-k,-delta,n-k-l+1; 1,-k; 1), both sides evaluated independently.
TransformCheck hyp_transform_check(int n, int k, int l, int delta);

struct SumPack {
  double s1 = 0;   // S^(1)_{w1 w1}
  double s1p = 0;  // S^(1)_{w1 w2}
  double s2 = 0;   // S^(2)_{w1 w1}
  double s2p = 0;  // S^(2)_{w1 w2}
};

struct SumPackExact {
  BigRational s1, s1p, s2, s2p;
};

SumPackExact sum_pack_exact(int n, int k, int delta);
SumPack sum_pack(int n, int k, int delta);

struct JohnsonPredictions {
  double gamma = 0;               // S1 + S1'
  double epsilon = 0;             // sqrt(2 gamma^2 / (N (S2 + S2')))
  double bad_lambda_epsilon = 0;  // 2 S1' gamma / (S2 - S2'); offset of the
                                  // zero-overlap antisymmetric eigenvalue
  double alpha_asymptotic = 0.5;  // <w|lambda+-> -> 1/2
  double psi0_overlap_asymptotic = 0;  // |<psi0|lambda+->| -> 1/sqrt(2)
  double t_run = 0;               // pi / (2 epsilon), finite-n
  double t_run_asymptotic = 0;    // pi sqrt(N) / (2 sqrt(2))
  double p_succ_asymptotic = 1.0;
  std::int64_t num_vertices = 0;
};

JohnsonPredictions johnson_predictions(int n, int k, int delta);

// Canonical marked pair at distance delta: w1 = {1..k},
// w2 = {1..k-delta} + {k+1..k+delta}; returns colex vertex indices.
std::pair<int, int> canonical_marked_pair(int n, int k, int delta);

// Closed-form block data for two marked vertices at distance delta
// (declared in secular.hpp): no eigensolve involved.

SearchInstance make_johnson_instance(int n, int k, int delta, double gamma);
SearchInstance make_johnson_instance(std::shared_ptr<const Graph> g, int w1, int w2, double gamma);

struct Orbit {
  int a = 0, b = 0, c = 0;  // |v ∩ w1 ∩ w2| and the sorted pair {|v ∩ w1|, |v ∩ w2|}
  std::vector<int> vertices;
};

struct InvariantBasis {
  JohnsonParams params;
  int w1_index = 0, w2_index = 0;
  std::vector<Orbit> orbits;  // partition V
  int marked_orbit = 0;       // index of (k-delta, k-delta, k)

  int dimension() const { return static_cast<int>(orbits.size()); }
  // N x m matrix of orthonormal indicator columns (1/sqrt(orbit size)).
  Matrix basis_matrix(int num_vertices) const;
};

InvariantBasis invariant_basis(int n, int k, int delta);

struct ReducedHamiltonian {
  Matrix h;      // m x m projection of H onto the invariant subspace
  Vector psi0;   // initial state in the reduced basis
  int marked_row = 0;
  double closure_residual = 0;  // max |(H B - B h)| entry
};

// Projects the instance Hamiltonian onto the invariant subspace.  The marked
// set must be the basis's canonical pair.
ReducedHamiltonian reduced_hamiltonian(const InvariantBasis& basis, const SearchInstance& inst);

}  // namespace ctqw
