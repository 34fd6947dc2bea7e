#pragma once

#include <cstdint>
#include <vector>

#include "qplexkit/errors.hpp"
#include "qplexkit/types.hpp"

namespace qplexkit {

/// A d x d complex matrix validated to be Hermitian within tol::herm.
/// The eigensystem of the symmetrized matrix is computed once at
/// construction; instances are immutable afterwards and safe to share.
class HermitianOperator {
 public:
  static HermitianOperator validate(const CMatrix& raw);

  int dim() const { return static_cast<int>(mat_.rows()); }
  const CMatrix& matrix() const { return mat_; }
  /// Eigenvalues in ascending order.
  const RVector& eigenvalues() const { return eigenvalues_; }
  /// Unit eigenvectors, column k pairing with eigenvalues()[k].
  const CMatrix& eigenvectors() const { return eigenvectors_; }
  Real trace() const { return eigenvalues_.sum(); }

 private:
  HermitianOperator(CMatrix mat, RVector vals, CMatrix vecs)
      : mat_(std::move(mat)),
        eigenvalues_(std::move(vals)),
        eigenvectors_(std::move(vecs)) {}

  CMatrix mat_;
  RVector eigenvalues_;
  CMatrix eigenvectors_;
};

/// Unit-trace positive semidefinite operator: a quantum state.
class DensityMatrix {
 public:
  static DensityMatrix validate(const CMatrix& raw);

  const HermitianOperator& op() const { return op_; }
  const CMatrix& matrix() const { return op_.matrix(); }
  int dim() const { return op_.dim(); }

 private:
  explicit DensityMatrix(HermitianOperator op) : op_(std::move(op)) {}
  HermitianOperator op_;
};

/// POVM element: Hermitian with spectrum in [0, 1] (within tol::psd).
class Effect {
 public:
  static Effect validate(const CMatrix& raw);

  const HermitianOperator& op() const { return op_; }
  const CMatrix& matrix() const { return op_.matrix(); }
  int dim() const { return op_.dim(); }
  Real trace() const { return op_.trace(); }

 private:
  explicit Effect(HermitianOperator op) : op_(std::move(op)) {}
  HermitianOperator op_;
};

/// Ordered list of effects summing to the identity within tol::povm.
class Povm {
 public:
  static Povm validate(const std::vector<CMatrix>& raws);
  static Povm from_effects(std::vector<Effect> effects);

  const std::vector<Effect>& effects() const { return effects_; }
  const Effect& effect(int k) const { return effects_[static_cast<size_t>(k)]; }
  int dim() const { return dim_; }
  int outcomes() const { return static_cast<int>(effects_.size()); }

 private:
  Povm(std::vector<Effect> effects, int dim)
      : effects_(std::move(effects)), dim_(dim) {}
  std::vector<Effect> effects_;
  int dim_;
};

/// Unit vector in C^d.
class PureState {
 public:
  static PureState validate(const CVector& amplitudes);
  /// Scales the input to unit norm, then validates. Zero vectors are
  /// rejected.
  static PureState normalized(const CVector& amplitudes);

  const CVector& amplitudes() const { return amps_; }
  int dim() const { return static_cast<int>(amps_.size()); }
  CMatrix projector() const { return amps_ * amps_.adjoint(); }
  DensityMatrix density() const;

 private:
  explicit PureState(CVector amps) : amps_(std::move(amps)) {}
  CVector amps_;
};

DensityMatrix validate_density(const CMatrix& raw);
Povm validate_povm(const std::vector<CMatrix>& raws);

/// Re tr(rho E), the Born probability. Values within tol::prob of the
/// boundary are clamped onto [0, 1]; values further out raise
/// ProbabilityOutOfRangeError since they indicate invalid inputs.
Real born_probability(const DensityMatrix& rho, const Effect& e);

/// rho = A A^dag / tr(A A^dag) for a seeded complex Gaussian A.
DensityMatrix random_density(int d, std::uint64_t seed);
/// Normalized seeded complex Gaussian vector.
PureState random_pure(int d, std::uint64_t seed);
/// Effects E_i = S^{-1/2} A_i A_i^dag S^{-1/2} with S the sum over the
/// seeded Gaussian Wisharts A_i A_i^dag.
Povm random_povm(int d, int n_outcomes, std::uint64_t seed);

}  // namespace qplexkit
