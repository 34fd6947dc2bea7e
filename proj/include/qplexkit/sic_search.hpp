#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "qplexkit/reference.hpp"

namespace qplexkit {

struct SearchConfig {
  int d = 2;
  int restarts = 32;
  int max_iters = 20000;
  Real grad_tol = 1e-12;
  std::uint64_t seed = 0;
  int threads = 1;  // restarts run concurrently; merge is deterministic
};

struct SearchReport {
  Real best_potential = 0.0;
  Real theoretical_minimum = 0.0;  // (d^2-1)/(d+1)^2, reported not assumed
  Real achieved_equiangularity_deviation = 0.0;
  int iterations_used = 0;
  int restart_index = -1;
  bool converged = false;
};

/// Weyl-Heisenberg frame potential sum_{(p,q) != (0,0)} |<psi|X^p Z^q|psi>|^4.
/// Defined for any vector (a smooth polynomial in the real and imaginary
/// parts); its minimum over unit vectors is (d^2-1)/(d+1)^2, attained
/// exactly at SIC fiducials.
Real frame_potential(const CVector& psi, int d);
Real frame_potential(const PureState& fiducial, int d);

/// Euclidean gradient of frame_potential in ambient coordinates, packed as
/// grad_k = dF/d(Re psi_k) + i dF/d(Im psi_k).
CVector frame_potential_gradient(const CVector& psi, int d);

struct EquiangularityReport {
  Real max_deviation = 0.0;
  int worst_m = -1;
  int worst_n = -1;
  bool within_tolerance = false;
};

/// Max over m != n of | |<psi_m|psi_n>|^2 - 1/(d+1) |, compared against
/// the given acceptance tolerance.
EquiangularityReport verify_equiangular(const std::vector<CVector>& states,
                                        int d, Real tolerance = tol::sic);
/// Same check on a candidate POVM of d^2 rank-1 effects (principal
/// eigenvectors are extracted first).
EquiangularityReport verify_equiangular(const Povm& candidate,
                                        Real tolerance = tol::sic);

/// Runs `restarts` independent seeded projected-gradient descents (step,
/// renormalize, backtracking line search) on the frame potential and returns
/// the lowest-potential fiducial whose orbit passes verify_equiangular
/// within tol::sic, merging ties by lowest restart index. Deterministic for
/// a fixed config, including under concurrent restarts. Throws
/// NotConvergedError when no restart yields a SIC.
std::pair<SicPovm, SearchReport> find_sic_fiducial(const SearchConfig& config);

}  // namespace qplexkit
