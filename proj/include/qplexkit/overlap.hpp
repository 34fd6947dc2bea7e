#pragma once

#include <optional>
#include <vector>

#include "qplexkit/prob_rep.hpp"

namespace qplexkit {

/// Convex combination of rank-1 projectors: rho = sum_i c_i |psi_i><psi_i|.
struct EigenMixture {
  RVector weights;                 // descending, nonnegative, sum 1
  std::vector<CVector> components;  // unit vectors, one per weight
};

/// Eigendecomposition of a state with eigenvalues as convex weights;
/// weights below 1e-14 are dropped. Reconstruction error < 1e-12.
EigenMixture decompose(const DensityMatrix& rho);

/// s^T B s' — equals tr(rho rho') when s, s' are the reference images of
/// rho, rho'.
Real b_inner_product(const ProbVector& s, const ProbVector& s2,
                     const ReferenceMeasurement& ref);

/// Compresses every reference effect onto the two-dimensional subspace
/// spanned by psi and psi2 (as 2x2 Hermitian matrices V^dag H_k V for the
/// orthonormalizing isometry V). Probabilities of states inside the
/// subspace are preserved; this is checked to 1e-12. Throws
/// DegenerateSubspaceError for parallel inputs.
std::vector<CMatrix> project_effects_to_subspace(
    const ReferenceMeasurement& ref, const PureState& psi,
    const PureState& psi2);

/// Dimension of the real span of a set of Hermitian matrices.
int hermitian_span_rank(const std::vector<CMatrix>& ops, Real rel_tol = 1e-9);

struct OverlapReport {
  Real dot = 0.0;      // Euclidean s . s'
  Real b_inner = 0.0;  // s^T B s' = tr(rho rho')
  /// Rank of the projected effect set on the 2-dim subspace of the two
  /// states; present only when both inputs are pure (within 1e-9) and
  /// nonparallel. 4 certifies informational completeness there.
  std::optional<int> ic_rank_on_subspace;
};

/// Computes both inner products and asserts the strict-overlap theorem
/// s . s' > 0; a nonpositive dot raises OverlapViolationError carrying the
/// subspace rank as diagnosis of a broken reference.
OverlapReport verify_overlap(const DensityMatrix& rho,
                             const DensityMatrix& rho2,
                             const ReferenceMeasurement& ref);

}  // namespace qplexkit
