#include "qplexkit/operators.hpp"

#include <Eigen/Eigenvalues>

#include "qplexkit/random.hpp"

namespace qplexkit {

namespace {

void require_square(const CMatrix& m) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw DimensionMismatchError("expected a nonempty square matrix, got " +
                                 std::to_string(m.rows()) + "x" +
                                 std::to_string(m.cols()));
  }
}

}  // namespace

HermitianOperator HermitianOperator::validate(const CMatrix& raw) {
  require_square(raw);
  const Real asym = max_abs(raw - raw.adjoint().eval());
  if (asym > tol::herm) throw NotHermitianError(asym);
  // Reject asymmetry first, then symmetrize for the eigensolver.
  const CMatrix sym = 0.5 * (raw + raw.adjoint().eval());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(sym);
  if (es.info() != Eigen::Success) {
    throw Error("eigendecomposition failed");
  }
  return HermitianOperator(raw, es.eigenvalues(), es.eigenvectors());
}

DensityMatrix DensityMatrix::validate(const CMatrix& raw) {
  HermitianOperator op = HermitianOperator::validate(raw);
  const Real min_eig = op.eigenvalues().minCoeff();
  if (min_eig < -tol::psd) throw NotPositiveError(min_eig);
  const Real trace_dev = std::abs(op.trace() - 1.0);
  if (trace_dev > tol::trace) throw TraceNotOneError(trace_dev);
  return DensityMatrix(std::move(op));
}

Effect Effect::validate(const CMatrix& raw) {
  HermitianOperator op = HermitianOperator::validate(raw);
  const Real min_eig = op.eigenvalues().minCoeff();
  if (min_eig < -tol::psd) throw EffectNotPositiveError(0, min_eig);
  const Real max_eig = op.eigenvalues().maxCoeff();
  if (max_eig > 1.0 + tol::psd) throw EffectNotPositiveError(0, max_eig);
  return Effect(std::move(op));
}

Povm Povm::validate(const std::vector<CMatrix>& raws) {
  if (raws.empty()) throw DimensionMismatchError("POVM needs >= 1 effect");
  const Eigen::Index d = raws.front().rows();
  std::vector<Effect> effects;
  effects.reserve(raws.size());
  for (size_t k = 0; k < raws.size(); ++k) {
    if (raws[k].rows() != d || raws[k].cols() != d) {
      throw DimensionMismatchError("effect " + std::to_string(k) +
                                   " has mismatched dimension");
    }
    try {
      effects.push_back(Effect::validate(raws[k]));
    } catch (const EffectNotPositiveError& e) {
      throw EffectNotPositiveError(static_cast<int>(k),
                                   e.offending_eigenvalue);
    }
  }
  return from_effects(std::move(effects));
}

Povm Povm::from_effects(std::vector<Effect> effects) {
  if (effects.empty()) throw DimensionMismatchError("POVM needs >= 1 effect");
  const int d = effects.front().dim();
  CMatrix sum = CMatrix::Zero(d, d);
  for (const Effect& e : effects) {
    if (e.dim() != d) {
      throw DimensionMismatchError("effects have mismatched dimensions");
    }
    sum += e.matrix();
  }
  const Real dev = max_abs(sum - CMatrix::Identity(d, d));
  if (dev > tol::povm) throw SumNotIdentityError(dev);
  return Povm(std::move(effects), d);
}

PureState PureState::validate(const CVector& amplitudes) {
  if (amplitudes.size() == 0) {
    throw DimensionMismatchError("empty amplitude vector");
  }
  const Real dev = std::abs(amplitudes.norm() - 1.0);
  if (dev > tol::norm) throw NormNotOneError(dev);
  return PureState(amplitudes);
}

PureState PureState::normalized(const CVector& amplitudes) {
  const Real n = amplitudes.norm();
  if (n < 1e-150) throw NormNotOneError(1.0);  // rescaling would overflow
  return validate(amplitudes / n);
}

DensityMatrix PureState::density() const {
  return DensityMatrix::validate(projector());
}

DensityMatrix validate_density(const CMatrix& raw) {
  return DensityMatrix::validate(raw);
}

Povm validate_povm(const std::vector<CMatrix>& raws) {
  return Povm::validate(raws);
}

Real born_probability(const DensityMatrix& rho, const Effect& e) {
  if (rho.dim() != e.dim()) {
    throw DimensionMismatchError("state dimension " +
                                 std::to_string(rho.dim()) +
                                 " != effect dimension " +
                                 std::to_string(e.dim()));
  }
  const Real p = trace_product_re(rho.matrix(), e.matrix());
  if (p < 0.0) {
    if (p < -tol::prob) throw ProbabilityOutOfRangeError(p);
    return 0.0;
  }
  if (p > 1.0) {
    if (p > 1.0 + tol::prob) throw ProbabilityOutOfRangeError(p);
    return 1.0;
  }
  return p;
}

DensityMatrix random_density(int d, std::uint64_t seed) {
  if (d < 2) throw DimensionMismatchError("dimension must be >= 2");
  auto rng = make_rng(seed);
  const CMatrix a = gaussian_complex_matrix(d, d, rng);
  CMatrix rho = a * a.adjoint();
  rho /= rho.trace();
  return DensityMatrix::validate(rho);
}

PureState random_pure(int d, std::uint64_t seed) {
  if (d < 2) throw DimensionMismatchError("dimension must be >= 2");
  auto rng = make_rng(seed);
  return PureState::normalized(gaussian_complex_vector(d, rng));
}

Povm random_povm(int d, int n_outcomes, std::uint64_t seed) {
  if (d < 2) throw DimensionMismatchError("dimension must be >= 2");
  if (n_outcomes < 1) throw DimensionMismatchError("need >= 1 outcome");
  auto rng = make_rng(seed);
  std::vector<CMatrix> wisharts;
  wisharts.reserve(static_cast<size_t>(n_outcomes));
  CMatrix sum = CMatrix::Zero(d, d);
  for (int i = 0; i < n_outcomes; ++i) {
    const CMatrix a = gaussian_complex_matrix(d, d, rng);
    wisharts.push_back(a * a.adjoint());
    sum += wisharts.back();
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> es(sum);
  const CMatrix inv_sqrt =
      es.eigenvectors() *
      es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
      es.eigenvectors().adjoint();
  std::vector<CMatrix> raws;
  raws.reserve(wisharts.size());
  for (const CMatrix& w : wisharts) raws.push_back(inv_sqrt * w * inv_sqrt);
  return Povm::validate(raws);
}

}  // namespace qplexkit
