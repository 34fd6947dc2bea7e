#include "qplexkit/prob_rep.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

namespace qplexkit {

namespace {
constexpr Real kSumTol = 1e-9;
constexpr Real kParamTol = 1e-12;
constexpr Real kUrgleichungNegTol = 1e-9;
}  // namespace

ProbVector ProbVector::validate(RVector values, Real neg_tol) {
  if (values.size() == 0) throw DimensionMismatchError("empty prob vector");
  const Real mn = values.minCoeff();
  if (mn < -neg_tol) {
    throw Error("probability entry below zero: " + detail::sci(mn));
  }
  const Real sum_dev = std::abs(values.sum() - 1.0);
  if (sum_dev > kSumTol) {
    throw Error("probabilities sum to 1 + " + detail::sci(values.sum() - 1.0));
  }
  return ProbVector(std::move(values));
}

CondProbMatrix CondProbMatrix::validate(RMatrix entries, Real neg_tol) {
  if (entries.size() == 0) throw DimensionMismatchError("empty matrix");
  const Real mn = entries.minCoeff();
  if (mn < -neg_tol) {
    throw Error("conditional probability below zero: " + detail::sci(mn));
  }
  for (Eigen::Index i = 0; i < entries.cols(); ++i) {
    const Real dev = std::abs(entries.col(i).sum() - 1.0);
    if (dev > kSumTol) {
      throw Error("column " + std::to_string(i) +
                  " is not a distribution: sum deviates by " +
                  detail::sci(dev));
    }
  }
  return CondProbMatrix(std::move(entries));
}

UrgleichungParams UrgleichungParams::validated(Real alpha, Real beta,
                                               int n_outcomes) {
  if (alpha <= 0.0 || beta < 0.0 || n_outcomes < 1) {
    throw Error("urgleichung params require alpha > 0, beta >= 0, N >= 1");
  }
  const Real dev = std::abs(alpha - n_outcomes * beta - 1.0);
  if (dev > kParamTol) {
    throw Error("normalization 1 = alpha - N beta violated by " +
                detail::sci(dev));
  }
  return {alpha, beta, n_outcomes};
}

UrgleichungParams sic_params(int d) {
  if (d < 2) throw DimensionMismatchError("dimension must be >= 2");
  return UrgleichungParams::validated(static_cast<Real>(d) + 1.0,
                                      1.0 / static_cast<Real>(d), d * d);
}

ProbVector state_to_prob(const DensityMatrix& rho,
                         const ReferenceMeasurement& ref) {
  if (rho.dim() != ref.dim()) {
    throw DimensionMismatchError("state and reference dimensions differ");
  }
  RVector p(ref.outcomes());
  for (int k = 0; k < ref.outcomes(); ++k) {
    p(k) = born_probability(rho, ref.povm().effect(k));
  }
  return ProbVector::validate(std::move(p));
}

DensityMatrix prob_to_state(const ProbVector& p,
                            const ReferenceMeasurement& ref) {
  if (p.size() != ref.outcomes()) {
    throw DimensionMismatchError("prob vector length != reference outcomes");
  }
  const RVector coeffs = ref.b_matrix() * p.values();
  const int d = ref.dim();
  CMatrix op = CMatrix::Zero(d, d);
  for (int k = 0; k < ref.outcomes(); ++k) {
    op += coeffs(k) * ref.povm().effect(k).matrix();
  }
  // Hermitian by construction; symmetrize away roundoff before the
  // eigenvalue test.
  op = 0.5 * (op + op.adjoint().eval());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(op);
  const Real min_eig = es.eigenvalues().minCoeff();
  if (min_eig < -tol::psd) throw NotAStateError(min_eig);
  return DensityMatrix::validate(op);
}

CondProbMatrix measurement_to_cond_matrix(const Povm& d_povm,
                                          const ReferenceMeasurement& ref) {
  if (d_povm.dim() != ref.dim()) {
    throw DimensionMismatchError("measurement and reference dimensions "
                                 "differ");
  }
  const int m = d_povm.outcomes();
  const int n = ref.outcomes();
  RMatrix cond(m, n);
  for (int i = 0; i < n; ++i) {
    const Effect& h = ref.povm().effect(i);
    const Real h_trace = h.trace();
    if (h_trace <= 0.0) {
      throw Error("reference effect " + std::to_string(i) +
                  " has nonpositive trace");
    }
    for (int j = 0; j < m; ++j) {
      cond(j, i) =
          trace_product_re(d_povm.effect(j).matrix(), h.matrix()) / h_trace;
    }
  }
  return CondProbMatrix::validate(std::move(cond));
}

ProbVector urgleichung(const ProbVector& p, const CondProbMatrix& cond,
                       const UrgleichungParams& params) {
  UrgleichungParams::validated(params.alpha, params.beta, params.n_outcomes);
  const Eigen::Index n = p.size();
  if (cond.cols() != n || params.n_outcomes != n) {
    throw DimensionMismatchError("prob vector, conditional matrix and "
                                 "params disagree on N");
  }
  const RMatrix& c = cond.matrix();
  RVector q(cond.rows());
  for (Eigen::Index j = 0; j < cond.rows(); ++j) {
    Real acc = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      acc += (params.alpha * p[i] - params.beta) * c(j, i);
    }
    q(j) = acc;
  }
  const Real mn = q.minCoeff();
  if (mn < -kUrgleichungNegTol) throw InconsistentPairError(mn);
  return ProbVector::validate(std::move(q), kUrgleichungNegTol);
}

ProbVector general_mu(const ProbVector& p, const Povm& d_povm,
                      const ReferenceMeasurement& ref) {
  if (p.size() != ref.outcomes()) {
    throw DimensionMismatchError("prob vector length != reference outcomes");
  }
  if (d_povm.dim() != ref.dim()) {
    throw DimensionMismatchError("measurement and reference dimensions "
                                 "differ");
  }
  const RVector coeffs = ref.b_matrix() * p.values();
  const int d = ref.dim();
  CMatrix op = CMatrix::Zero(d, d);
  for (int k = 0; k < ref.outcomes(); ++k) {
    op += coeffs(k) * ref.povm().effect(k).matrix();
  }
  RVector q(d_povm.outcomes());
  for (int j = 0; j < d_povm.outcomes(); ++j) {
    q(j) = trace_product_re(d_povm.effect(j).matrix(), op);
  }
  const Real mn = q.minCoeff();
  if (mn < -kUrgleichungNegTol) throw InconsistentPairError(mn);
  return ProbVector::validate(std::move(q), kUrgleichungNegTol);
}

}  // namespace qplexkit
