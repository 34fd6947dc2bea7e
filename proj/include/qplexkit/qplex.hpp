#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "qplexkit/prob_rep.hpp"

namespace qplexkit {

/// Finite sample of the state space inside the probability simplex.
/// Points are packed as rows of a dense matrix for blocked pair sweeps.
class PointSet {
 public:
  PointSet(int ambient, UrgleichungParams params);
  static PointSet from_prob_vectors(const std::vector<ProbVector>& pts,
                                    UrgleichungParams params);

  void add(const ProbVector& p);
  int ambient() const { return ambient_; }
  Eigen::Index size() const { return count_; }
  const UrgleichungParams& params() const { return params_; }
  /// Rows 0..size()-1 hold the points.
  Eigen::Block<const RMatrix> points() const {
    return rows_.topRows(count_);
  }
  RVector point(Eigen::Index i) const { return rows_.row(i).transpose(); }

 private:
  int ambient_;
  UrgleichungParams params_;
  RMatrix rows_;
  Eigen::Index count_ = 0;
};

struct SphereRadii {
  Real r_in = 0.0;
  Real r_mid = 0.0;
  Real r_out = 0.0;
};

struct PairViolation {
  Eigen::Index i;
  Eigen::Index j;
  Real product;
  bool lower;  // true: below the lower bound; false: above the upper
};

struct PairBoundsReport {
  std::vector<PairViolation> violations;  // capped at 100 entries
  std::size_t violation_count = 0;
  Real min_product = 0.0;  // over distinct pairs
  Real max_product = 0.0;  // including self-pairs
  std::size_t pairs_checked = 0;
};

/// Checks every pair (self-pairs for the upper bound only) against
/// 1/(d(d+1)) <= P.P' <= 2/(d(d+1)). Violations are data, not errors.
PairBoundsReport pair_bounds_check(const PointSet& set, int d,
                                   Real tolerance = 1e-9);

/// u is in the polar of the sampled set iff u.v >= beta/alpha for every
/// sample point, within the given slack on the inequality.
bool polar_membership(const RVector& u, const PointSet& set,
                      Real tolerance = 1e-12);

struct SelfPolarReport {
  bool contained_in_polar = false;  // A subset of A*, the certified direction
  RVector slack;        // per point: min over partners of u.v - beta/alpha
  std::vector<std::pair<Eigen::Index, Eigen::Index>> equality_pairs;  // capped
  std::size_t equality_count = 0;
  // Informational only: probe directions found inside the sampled polar but
  // far from the sampled hull. A* subset of A is not decidable from samples.
  int probes_tested = 0;
  int probes_uncovered = 0;
  Real max_probe_hull_distance = 0.0;
};

SelfPolarReport self_polar_consistency(const PointSet& set,
                                       Real tolerance = 1e-9, int probes = 0,
                                       std::uint64_t seed = 0,
                                       Real coverage_threshold = 1e-2);

/// Euclidean distance from u to the convex hull of the rows of `points`,
/// via Frank-Wolfe with exact line search (informational accuracy).
Real distance_to_hull(const RVector& u, const RMatrix& points,
                      int max_iters = 256);

struct MmdResult {
  int size = 0;
  std::vector<Eigen::Index> witnesses;
};

/// Restricts to points within tol of the circumscribing sphere, connects
/// pairs saturating P.P' = beta/alpha within tol, and returns an exact
/// maximum clique. Vertices with no saturating partner only ever form
/// singleton cliques, so the exact-search budget applies to the connected
/// vertices; exceeding it raises TooManyCandidatesError.
MmdResult mmd_max_set(const PointSet& set, Real tol = 1e-7,
                      int clique_budget = 64);

/// r_out measured from the samples, r_mid = 1/sqrt(N alpha) from the
/// params, r_in = 1/sqrt(N(N-1)); d_estimate = 1 + r_out^2 / r_mid^2.
/// All distances are from the simplex barycenter.
std::pair<SphereRadii, Real> radii_and_dimension(const PointSet& set);

struct BitBallReport {
  bool all_inside = false;
  Real max_distance = 0.0;
  Eigen::Index boundary_count = 0;                // within tol of 1/sqrt(12)
  std::vector<Eigen::Index> outside;              // capped at 100 entries
  std::size_t outside_count = 0;
};

/// Verifies the qubit state space is the inscribed ball of the simplex in
/// R^4: every point within 1/sqrt(12) of the barycenter. Requires N = 4 and
/// qubit params (3, 1/2).
BitBallReport bit_ball_check(const PointSet& set, Real tolerance = 1e-9);

}  // namespace qplexkit
