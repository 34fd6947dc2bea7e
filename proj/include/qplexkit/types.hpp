#pragma once

#include <complex>

#include <Eigen/Dense>

namespace qplexkit {

using Real = double;
using Cplx = std::complex<Real>;

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

/// Validation tolerances. Double precision at d <= 8 leaves ~5 digits of
/// headroom over the tightest of these.
namespace tol {
inline constexpr Real herm = 1e-10;   // max-abs deviation from A = A^dag
inline constexpr Real povm = 1e-10;   // max-abs deviation of effect sum from I
inline constexpr Real psd = 1e-9;     // eigenvalue floor for positivity
inline constexpr Real trace = 1e-10;  // |tr rho - 1|
inline constexpr Real norm = 1e-10;   // | ||psi|| - 1 |
inline constexpr Real prob = 1e-9;    // clamp window around [0, 1]
inline constexpr Real sic = 1e-8;     // equiangularity acceptance
}  // namespace tol

/// Largest absolute entry of any dense expression; 0 for empty.
template <typename Derived>
Real max_abs(const Eigen::MatrixBase<Derived>& m) {
  if (m.size() == 0) return 0.0;
  return m.derived().cwiseAbs().maxCoeff();
}

/// tr(A B) without forming the product: sum_ij A_ij B_ji.
template <typename DA, typename DB>
typename DA::Scalar trace_product(const Eigen::MatrixBase<DA>& a,
                                  const Eigen::MatrixBase<DB>& b) {
  return a.derived().cwiseProduct(b.derived().transpose()).sum();
}

/// Re tr(A B), the Hilbert-Schmidt pairing of Hermitian operators.
template <typename DA, typename DB>
Real trace_product_re(const Eigen::MatrixBase<DA>& a,
                      const Eigen::MatrixBase<DB>& b) {
  return std::real(trace_product(a, b));
}

}  // namespace qplexkit
