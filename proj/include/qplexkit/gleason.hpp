#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "qplexkit/prob_rep.hpp"

namespace qplexkit {

/// Assignment of a real value to unit vectors, evaluated pointwise.
using FrameFunction = std::function<Real(const CVector&)>;

/// Collection of orthonormal bases of C^d.
class BasisSet {
 public:
  static BasisSet validate(int d, std::vector<std::vector<CVector>> bases);
  /// Haar-random bases via QR of seeded Gaussian matrices, phases fixed for
  /// determinism.
  static BasisSet random(int d, int count, std::uint64_t seed);

  int dim() const { return d_; }
  int count() const { return static_cast<int>(bases_.size()); }
  const std::vector<std::vector<CVector>>& bases() const { return bases_; }

 private:
  BasisSet(int d, std::vector<std::vector<CVector>> bases)
      : d_(d), bases_(std::move(bases)) {}
  int d_;
  std::vector<std::vector<CVector>> bases_;
};

/// Sampled frame-function values; basis_groups lists index tuples of
/// entries known to form complete bases (their values must sum to the
/// weight within 1e-9, checked at construction).
class FrameFunctionSample {
 public:
  static FrameFunctionSample from_states(const FrameFunction& f,
                                         const std::vector<CVector>& states,
                                         Real weight);
  static FrameFunctionSample from_bases(const FrameFunction& f,
                                        const BasisSet& bases, Real weight);

  const std::vector<CVector>& states() const { return states_; }
  const RVector& values() const { return values_; }
  Real weight() const { return weight_; }
  const std::vector<std::vector<int>>& basis_groups() const {
    return groups_;
  }
  int dim() const;

 private:
  FrameFunctionSample(std::vector<CVector> states, RVector values,
                      Real weight, std::vector<std::vector<int>> groups);
  std::vector<CVector> states_;
  RVector values_;
  Real weight_;
  std::vector<std::vector<int>> groups_;
};

/// Max over bases of | sum_i f(x_i) - W |.
Real check_frame_property(const FrameFunction& f, const BasisSet& bases,
                          Real weight);

struct RegularFit {
  HermitianOperator op;
  Real residual;  // root-mean-square error of <x|T|x> against the samples
};

/// Least-squares Hermitian T minimizing sum (<x|T|x> - f(x))^2. Requires
/// the samples to span the d^2-dimensional Hermitian space
/// (InsufficientSpanError otherwise).
RegularFit fit_regular_operator(const FrameFunctionSample& samples);

/// The d = 2 Gleason counterexample: 1 on the open hemisphere around the
/// pole, 0 on the opposite one. On the equator (|b.n| <= 1e-12) the member
/// of the antipodal pair whose Bloch vector is lexicographically positive
/// in (x, y, z) gets the 1, so antipodal pairs sum to 1 exactly.
FrameFunction hemisphere_function(const Eigen::Vector3d& direction);

/// Bloch vector (<sx>, <sy>, <sz>) of a qubit state vector.
Eigen::Vector3d bloch_vector(const CVector& psi);

struct FeasibilityResult {
  bool feasible = false;
  CMatrix best_op;       // Hermitian, unit trace
  Real residual = 0.0;   // RMS over all effect equations
  Real min_eigenvalue = 0.0;
};

/// POVM-extended Gleason check: least squares for a Hermitian unit-trace T
/// with tr(T E) matching every assignment, then a positivity test.
/// Feasible iff residual < 1e-8 and min eigenvalue >= -1e-8. Infeasibility
/// is the finding, not a failure.
FeasibilityResult povm_gleason_feasibility(
    const std::vector<std::pair<Povm, ProbVector>>& assignments);

}  // namespace qplexkit
