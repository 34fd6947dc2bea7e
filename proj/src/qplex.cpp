#include "qplexkit/qplex.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

#include "qplexkit/random.hpp"

namespace qplexkit {

namespace {

constexpr Eigen::Index kReportCap = 100;
constexpr Eigen::Index kPairBlock = 512;

// Exact maximum clique over <= 64 vertices, adjacency as bitmasks.
// Plain branch and bound: expand R with candidates from P, prune when even
// taking all of P cannot beat the incumbent.
void expand_clique(const std::vector<std::uint64_t>& adj, std::uint64_t p,
                   int r_size, std::uint64_t r_mask, int& best,
                   std::uint64_t& best_mask) {
  if (p == 0) {
    if (r_size > best) {
      best = r_size;
      best_mask = r_mask;
    }
    return;
  }
  while (p != 0) {
    if (r_size + std::popcount(p) <= best) return;
    const int v = std::countr_zero(p);
    p &= p - 1;  // drop v from the candidate pool
    expand_clique(adj, p & adj[static_cast<size_t>(v)], r_size + 1,
                  r_mask | (1ULL << v), best, best_mask);
  }
}

}  // namespace

PointSet::PointSet(int ambient, UrgleichungParams params)
    : ambient_(ambient), params_(params), rows_(0, ambient) {
  if (ambient < 1) throw DimensionMismatchError("ambient dimension >= 1");
  if (params.n_outcomes != ambient) {
    throw DimensionMismatchError("params N != ambient dimension");
  }
}

PointSet PointSet::from_prob_vectors(const std::vector<ProbVector>& pts,
                                     UrgleichungParams params) {
  PointSet set(params.n_outcomes, params);
  set.rows_.resize(static_cast<Eigen::Index>(pts.size()), set.ambient_);
  for (size_t i = 0; i < pts.size(); ++i) {
    if (pts[i].size() != set.ambient_) {
      throw DimensionMismatchError("point " + std::to_string(i) +
                                   " has wrong length");
    }
    set.rows_.row(static_cast<Eigen::Index>(i)) = pts[i].values().transpose();
  }
  set.count_ = static_cast<Eigen::Index>(pts.size());
  return set;
}

void PointSet::add(const ProbVector& p) {
  if (p.size() != ambient_) {
    throw DimensionMismatchError("point has wrong length");
  }
  if (count_ == rows_.rows()) {
    RMatrix grown(std::max<Eigen::Index>(16, rows_.rows() * 2), ambient_);
    grown.topRows(count_) = rows_.topRows(count_);
    rows_.swap(grown);
  }
  rows_.row(count_++) = p.values().transpose();
}

PairBoundsReport pair_bounds_check(const PointSet& set, int d,
                                   Real tolerance) {
  if (set.ambient() != d * d) {
    throw DimensionMismatchError("pair bounds need N = d^2");
  }
  const Real lower = 1.0 / (static_cast<Real>(d) * (d + 1.0));
  const Real upper = 2.0 / (static_cast<Real>(d) * (d + 1.0));
  const auto pts = set.points();
  const Eigen::Index n = set.size();

  PairBoundsReport report;
  report.min_product = std::numeric_limits<Real>::infinity();
  report.max_product = -std::numeric_limits<Real>::infinity();
  if (n == 0) {
    report.min_product = report.max_product = 0.0;
    return report;
  }

  auto record = [&](Eigen::Index i, Eigen::Index j, Real prod, bool low) {
    if (static_cast<Eigen::Index>(report.violations.size()) < kReportCap) {
      report.violations.push_back({i, j, prod, low});
    }
    ++report.violation_count;
  };

  for (Eigen::Index start = 0; start < n; start += kPairBlock) {
    const Eigen::Index rows = std::min(kPairBlock, n - start);
    const RMatrix block = pts.middleRows(start, rows) * pts.transpose();
    for (Eigen::Index bi = 0; bi < rows; ++bi) {
      const Eigen::Index i = start + bi;
      for (Eigen::Index j = i; j < n; ++j) {
        const Real prod = block(bi, j);
        if (prod > report.max_product) report.max_product = prod;
        if (prod > upper + tolerance) record(i, j, prod, false);
        if (j > i) {
          if (prod < report.min_product) report.min_product = prod;
          if (prod < lower - tolerance) record(i, j, prod, true);
          ++report.pairs_checked;
        } else {
          ++report.pairs_checked;  // self-pair, upper bound only
        }
      }
    }
  }
  if (n == 1) report.min_product = report.max_product;
  return report;
}

bool polar_membership(const RVector& u, const PointSet& set, Real tolerance) {
  if (u.size() != set.ambient()) {
    throw DimensionMismatchError("direction has wrong length");
  }
  if (set.size() == 0) return true;
  const Real threshold = set.params().beta / set.params().alpha - tolerance;
  const RVector products = set.points() * u;
  return products.minCoeff() >= threshold;
}

Real distance_to_hull(const RVector& u, const RMatrix& points,
                      int max_iters) {
  if (points.rows() == 0) return std::numeric_limits<Real>::infinity();
  // Frank-Wolfe on min_x ||x - u||^2 over the hull, exact line search.
  RVector x = points.row(0).transpose();
  for (int it = 0; it < max_iters; ++it) {
    const RVector grad = x - u;
    Eigen::Index best = 0;
    (points * grad).minCoeff(&best);
    const RVector s = points.row(best).transpose();
    const RVector dir = s - x;
    const Real denom = dir.squaredNorm();
    if (denom == 0.0) break;
    const Real gamma = std::clamp((u - x).dot(dir) / denom, 0.0, 1.0);
    if (gamma == 0.0) break;
    x += gamma * dir;
  }
  return (x - u).norm();
}

SelfPolarReport self_polar_consistency(const PointSet& set, Real tolerance,
                                       int probes, std::uint64_t seed,
                                       Real coverage_threshold) {
  const Eigen::Index n = set.size();
  const Real floor = set.params().beta / set.params().alpha;
  const auto pts = set.points();

  SelfPolarReport report;
  report.slack = RVector::Constant(n, std::numeric_limits<Real>::infinity());
  report.contained_in_polar = true;
  for (Eigen::Index start = 0; start < n; start += kPairBlock) {
    const Eigen::Index rows = std::min(kPairBlock, n - start);
    const RMatrix block = pts.middleRows(start, rows) * pts.transpose();
    for (Eigen::Index bi = 0; bi < rows; ++bi) {
      const Eigen::Index i = start + bi;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (j == i) continue;
        const Real slack = block(bi, j) - floor;
        if (slack < report.slack(i)) report.slack(i) = slack;
        if (j > i && std::abs(slack) <= tolerance) {
          if (static_cast<Eigen::Index>(report.equality_pairs.size()) <
              kReportCap) {
            report.equality_pairs.emplace_back(i, j);
          }
          ++report.equality_count;
        }
      }
      if (report.slack(i) < -tolerance) report.contained_in_polar = false;
    }
  }

  if (probes > 0 && n > 0) {
    const int ambient = set.ambient();
    const RVector barycenter =
        RVector::Constant(ambient, 1.0 / static_cast<Real>(ambient));
    Real r_out = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      r_out = std::max(r_out,
                       (pts.row(i).transpose() - barycenter).norm());
    }
    auto rng = make_rng(seed, 0);
    std::normal_distribution<Real> gauss(0.0, 1.0);
    for (int t = 0; t < probes; ++t) {
      RVector z(ambient);
      for (int k = 0; k < ambient; ++k) z(k) = gauss(rng);
      z.array() -= z.mean();  // sum-zero direction
      const Real zn = z.norm();
      if (zn == 0.0) continue;
      const RVector u = barycenter + (r_out / zn) * z;
      if (!polar_membership(u, set, tolerance)) continue;
      ++report.probes_tested;
      const Real dist = distance_to_hull(u, pts);
      report.max_probe_hull_distance =
          std::max(report.max_probe_hull_distance, dist);
      if (dist > coverage_threshold) ++report.probes_uncovered;
    }
  }
  return report;
}

MmdResult mmd_max_set(const PointSet& set, Real tol, int clique_budget) {
  MmdResult result;
  const Eigen::Index n = set.size();
  if (n == 0) return result;
  if (clique_budget < 1 || clique_budget > 64) {
    throw Error("clique budget must be in [1, 64]");
  }

  const int ambient = set.ambient();
  const RVector barycenter =
      RVector::Constant(ambient, 1.0 / static_cast<Real>(ambient));
  const auto pts = set.points();
  RVector dist(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    dist(i) = (pts.row(i).transpose() - barycenter).norm();
  }
  const Real r_out = dist.maxCoeff();

  std::vector<Eigen::Index> on_sphere;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (std::abs(dist(i) - r_out) <= tol) on_sphere.push_back(i);
  }
  if (on_sphere.empty()) return result;

  const Real floor = set.params().beta / set.params().alpha;
  const Eigen::Index m = static_cast<Eigen::Index>(on_sphere.size());
  std::vector<std::vector<Eigen::Index>> neighbors(
      static_cast<size_t>(m));
  for (Eigen::Index a = 0; a < m; ++a) {
    for (Eigen::Index b = a + 1; b < m; ++b) {
      const Real prod = pts.row(on_sphere[static_cast<size_t>(a)])
                            .dot(pts.row(on_sphere[static_cast<size_t>(b)]));
      if (std::abs(prod - floor) <= tol) {
        neighbors[static_cast<size_t>(a)].push_back(b);
        neighbors[static_cast<size_t>(b)].push_back(a);
      }
    }
  }

  // Isolated sphere points only form singleton cliques; the exact search
  // runs on the connected vertices.
  std::vector<Eigen::Index> connected;
  for (Eigen::Index a = 0; a < m; ++a) {
    if (!neighbors[static_cast<size_t>(a)].empty()) connected.push_back(a);
  }
  if (connected.empty()) {
    result.size = 1;
    result.witnesses.push_back(on_sphere.front());
    return result;
  }
  if (static_cast<int>(connected.size()) > clique_budget) {
    throw TooManyCandidatesError(static_cast<int>(connected.size()),
                                 clique_budget);
  }

  std::vector<int> bit_of(static_cast<size_t>(m), -1);
  for (size_t b = 0; b < connected.size(); ++b) {
    bit_of[static_cast<size_t>(connected[b])] = static_cast<int>(b);
  }
  std::vector<std::uint64_t> adj(connected.size(), 0);
  for (size_t b = 0; b < connected.size(); ++b) {
    for (Eigen::Index nb : neighbors[static_cast<size_t>(connected[b])]) {
      const int other = bit_of[static_cast<size_t>(nb)];
      if (other >= 0) adj[b] |= 1ULL << other;
    }
  }

  int best = 1;
  std::uint64_t best_mask = 1ULL;
  const std::uint64_t all =
      connected.size() == 64 ? ~0ULL : (1ULL << connected.size()) - 1;
  expand_clique(adj, all, 0, 0, best, best_mask);

  result.size = best;
  for (size_t b = 0; b < connected.size(); ++b) {
    if (best_mask & (1ULL << b)) {
      result.witnesses.push_back(
          on_sphere[static_cast<size_t>(connected[b])]);
    }
  }
  if (result.witnesses.empty() && best == 1) {
    result.witnesses.push_back(on_sphere.front());
  }
  return result;
}

std::pair<SphereRadii, Real> radii_and_dimension(const PointSet& set) {
  const int n = set.ambient();
  SphereRadii radii;
  radii.r_mid = 1.0 / std::sqrt(static_cast<Real>(n) * set.params().alpha);
  radii.r_in =
      n > 1 ? 1.0 / std::sqrt(static_cast<Real>(n) * (n - 1.0)) : 0.0;
  const RVector barycenter =
      RVector::Constant(n, 1.0 / static_cast<Real>(n));
  Real r_out = 0.0;
  const auto pts = set.points();
  for (Eigen::Index i = 0; i < set.size(); ++i) {
    r_out = std::max(r_out, (pts.row(i).transpose() - barycenter).norm());
  }
  radii.r_out = r_out;
  const Real d_estimate =
      1.0 + (r_out * r_out) / (radii.r_mid * radii.r_mid);
  return {radii, d_estimate};
}

BitBallReport bit_ball_check(const PointSet& set, Real tolerance) {
  if (set.ambient() != 4) {
    throw DimensionMismatchError("bit ball lives in the N = 4 simplex");
  }
  if (std::abs(set.params().alpha - 3.0) > 1e-12 ||
      std::abs(set.params().beta - 0.5) > 1e-12) {
    throw Error("bit ball check requires qubit params (3, 1/2)");
  }
  const Real radius = 1.0 / std::sqrt(12.0);
  const RVector barycenter = RVector::Constant(4, 0.25);
  BitBallReport report;
  report.all_inside = true;
  const auto pts = set.points();
  for (Eigen::Index i = 0; i < set.size(); ++i) {
    const Real dist = (pts.row(i).transpose() - barycenter).norm();
    report.max_distance = std::max(report.max_distance, dist);
    if (dist > radius + tolerance) {
      report.all_inside = false;
      if (static_cast<Eigen::Index>(report.outside.size()) < kReportCap) {
        report.outside.push_back(i);
      }
      ++report.outside_count;
    }
    if (std::abs(dist - radius) <= tolerance) ++report.boundary_count;
  }
  return report;
}

}  // namespace qplexkit
