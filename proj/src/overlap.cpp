#include "qplexkit/overlap.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/SVD>

namespace qplexkit {

namespace {

constexpr Real kWeightCutoff = 1e-14;
constexpr Real kPureThreshold = 1e-9;
constexpr Real kParallelTol = 1e-12;

}  // namespace

EigenMixture decompose(const DensityMatrix& rho) {
  const RVector& vals = rho.op().eigenvalues();
  const CMatrix& vecs = rho.op().eigenvectors();
  std::vector<std::pair<Real, int>> order;
  for (int i = 0; i < rho.dim(); ++i) {
    if (vals(i) > kWeightCutoff) order.emplace_back(vals(i), i);
  }
  std::sort(order.begin(), order.end(),
            [](const auto& a, const auto& b) { return a.first > b.first; });
  EigenMixture mix;
  mix.weights.resize(static_cast<Eigen::Index>(order.size()));
  mix.components.reserve(order.size());
  for (size_t k = 0; k < order.size(); ++k) {
    mix.weights(static_cast<Eigen::Index>(k)) = order[k].first;
    mix.components.push_back(vecs.col(order[k].second));
  }
  return mix;
}

Real b_inner_product(const ProbVector& s, const ProbVector& s2,
                     const ReferenceMeasurement& ref) {
  if (s.size() != ref.outcomes() || s2.size() != ref.outcomes()) {
    throw DimensionMismatchError("prob vector length != reference outcomes");
  }
  return s.values().dot(ref.b_matrix() * s2.values());
}

std::vector<CMatrix> project_effects_to_subspace(
    const ReferenceMeasurement& ref, const PureState& psi,
    const PureState& psi2) {
  if (psi.dim() != ref.dim() || psi2.dim() != ref.dim()) {
    throw DimensionMismatchError("state dimension != reference dimension");
  }
  const CVector& a = psi.amplitudes();
  const CVector& b = psi2.amplitudes();
  const Cplx overlap = a.dot(b);
  if (std::abs(overlap) > 1.0 - kParallelTol) {
    throw DegenerateSubspaceError(std::abs(overlap));
  }
  CVector e2 = b - overlap * a;
  e2.normalize();
  CMatrix isometry(ref.dim(), 2);
  isometry.col(0) = a;
  isometry.col(1) = e2;

  std::vector<CMatrix> projected;
  projected.reserve(static_cast<size_t>(ref.outcomes()));
  for (const Effect& e : ref.povm().effects()) {
    projected.push_back(isometry.adjoint() * e.matrix() * isometry);
  }

  // In-subspace states keep their Born probabilities under compression.
  const Eigen::Vector2cd a_sub = isometry.adjoint() * a;
  const Eigen::Vector2cd b_sub = isometry.adjoint() * b;
  for (int k = 0; k < ref.outcomes(); ++k) {
    const CMatrix& h = ref.povm().effect(k).matrix();
    const Real full_a = std::real(a.dot(h * a));
    const Real sub_a = std::real(a_sub.dot(projected[k] * a_sub));
    const Real full_b = std::real(b.dot(h * b));
    const Real sub_b = std::real(b_sub.dot(projected[k] * b_sub));
    if (std::abs(full_a - sub_a) > 1e-12 ||
        std::abs(full_b - sub_b) > 1e-12) {
      throw Error("subspace compression failed to preserve probabilities");
    }
  }
  return projected;
}

int hermitian_span_rank(const std::vector<CMatrix>& ops, Real rel_tol) {
  if (ops.empty()) return 0;
  const Eigen::Index d = ops.front().rows();
  RMatrix coords(static_cast<Eigen::Index>(ops.size()), d * d);
  for (size_t k = 0; k < ops.size(); ++k) {
    Eigen::Index c = 0;
    for (Eigen::Index i = 0; i < d; ++i) {
      coords(static_cast<Eigen::Index>(k), c++) = ops[k](i, i).real();
    }
    for (Eigen::Index i = 0; i < d; ++i) {
      for (Eigen::Index j = i + 1; j < d; ++j) {
        coords(static_cast<Eigen::Index>(k), c++) = ops[k](i, j).real();
        coords(static_cast<Eigen::Index>(k), c++) = ops[k](i, j).imag();
      }
    }
  }
  Eigen::JacobiSVD<RMatrix> svd(coords);
  const RVector& sing = svd.singularValues();
  if (sing.size() == 0 || sing(0) == 0.0) return 0;
  int rank = 0;
  for (Eigen::Index i = 0; i < sing.size(); ++i) {
    if (sing(i) > rel_tol * sing(0)) ++rank;
  }
  return rank;
}

OverlapReport verify_overlap(const DensityMatrix& rho,
                             const DensityMatrix& rho2,
                             const ReferenceMeasurement& ref) {
  const ProbVector s = state_to_prob(rho, ref);
  const ProbVector s2 = state_to_prob(rho2, ref);
  OverlapReport report;
  report.dot = s.values().dot(s2.values());
  report.b_inner = b_inner_product(s, s2, ref);

  const auto principal = [](const DensityMatrix& r) {
    return PureState::normalized(
        r.op().eigenvectors().col(r.dim() - 1));
  };
  const bool both_pure =
      rho.op().eigenvalues().maxCoeff() > 1.0 - kPureThreshold &&
      rho2.op().eigenvalues().maxCoeff() > 1.0 - kPureThreshold;
  const PureState psi = principal(rho);
  const PureState psi2 = principal(rho2);
  const bool parallel =
      std::abs(psi.amplitudes().dot(psi2.amplitudes())) > 1.0 - kParallelTol;

  if (both_pure && !parallel) {
    report.ic_rank_on_subspace =
        hermitian_span_rank(project_effects_to_subspace(ref, psi, psi2));
  }

  if (report.dot <= 0.0) {
    int diag_rank = -1;
    if (report.ic_rank_on_subspace) {
      diag_rank = *report.ic_rank_on_subspace;
    } else if (!parallel) {
      diag_rank =
          hermitian_span_rank(project_effects_to_subspace(ref, psi, psi2));
    }
    throw OverlapViolationError(report.dot, diag_rank);
  }
  return report;
}

}  // namespace qplexkit
