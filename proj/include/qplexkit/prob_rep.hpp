#pragma once

#include "qplexkit/reference.hpp"

namespace qplexkit {

/// Point of the probability simplex: entries >= -neg_tol, sum 1 within 1e-9.
/// The default negativity tolerance 1e-12 absorbs roundoff; urgleichung
/// outputs are validated with its documented looser tolerance 1e-9.
class ProbVector {
 public:
  static ProbVector validate(RVector values, Real neg_tol = 1e-12);

  const RVector& values() const { return values_; }
  Eigen::Index size() const { return values_.size(); }
  Real operator[](Eigen::Index i) const { return values_(i); }

 private:
  explicit ProbVector(RVector v) : values_(std::move(v)) {}
  RVector values_;
};

/// M x N matrix with entry (j, i) = P(D_j | H_i); every column is a
/// probability distribution over j.
class CondProbMatrix {
 public:
  static CondProbMatrix validate(RMatrix entries, Real neg_tol = 1e-12);

  const RMatrix& matrix() const { return entries_; }
  Eigen::Index rows() const { return entries_.rows(); }
  Eigen::Index cols() const { return entries_.cols(); }

 private:
  explicit CondProbMatrix(RMatrix m) : entries_(std::move(m)) {}
  RMatrix entries_;
};

/// The (alpha, beta, N) triple of the urgleichung, constrained by
/// normalization to 1 = alpha - N beta. The classical Law of Total
/// Probability is (1, 0, N).
struct UrgleichungParams {
  Real alpha;
  Real beta;
  int n_outcomes;

  static UrgleichungParams validated(Real alpha, Real beta, int n_outcomes);
};

/// alpha = d+1, beta = 1/d, N = d^2: the SIC parameters, for which the
/// normalization constraint holds identically.
UrgleichungParams sic_params(int d);

/// P(k) = tr(rho H_k) over the reference effects.
ProbVector state_to_prob(const DensityMatrix& rho,
                         const ReferenceMeasurement& ref);

/// Inverse of state_to_prob: reconstructs the unique operator in the span
/// of the effects with the given reference probabilities (via the B-matrix;
/// for a SIC this is rho = sum_k [(d+1) P(k) - 1/d] Pi_k) and validates it
/// as a state. Throws NotAStateError, carrying the minimum eigenvalue, when
/// P lies in the simplex but outside the state space.
DensityMatrix prob_to_state(const ProbVector& p,
                            const ReferenceMeasurement& ref);

/// P(D_j | H_i) = tr(D_j H_i) / tr(H_i), the probability of D_j given the
/// posterior state H_i / tr(H_i); equals d tr(D_j H_i) for SIC references.
/// Only the SIC case feeds the affine urgleichung; arbitrary references go
/// through general_mu.
CondProbMatrix measurement_to_cond_matrix(const Povm& d_povm,
                                          const ReferenceMeasurement& ref);

/// Q(D_j) = sum_i [alpha P(H_i) - beta] P(D_j | H_i), accumulated in index
/// order so the classical (1, 0) case reproduces the Law of Total
/// Probability bit for bit. Entries below -1e-9 raise
/// InconsistentPairError; smaller negatives pass through unclamped.
ProbVector urgleichung(const ProbVector& p, const CondProbMatrix& cond,
                       const UrgleichungParams& params);

/// The measurement-agnostic form of the quantum marginalization: recovers
/// the operator coefficients B P and applies the Born rule to the D
/// effects. Agrees with urgleichung under sic_params on SIC references.
ProbVector general_mu(const ProbVector& p, const Povm& d_povm,
                      const ReferenceMeasurement& ref);

}  // namespace qplexkit
