#include "qplexkit/gleason.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

#include "qplexkit/random.hpp"

namespace qplexkit {

namespace {

constexpr Real kOrthoTol = 1e-10;
constexpr Real kBasisSumTol = 1e-9;
constexpr Real kEquatorTol = 1e-12;
constexpr Real kFeasibilityResidual = 1e-8;
constexpr Real kFeasibilityEigFloor = -1e-8;

// First Bloch component larger than the equator tolerance decides; an
// antipodal pair always splits because exactly one member is positive.
bool lexicographically_positive(const Eigen::Vector3d& b) {
  for (int i = 0; i < 3; ++i) {
    if (std::abs(b(i)) > kEquatorTol) return b(i) > 0.0;
  }
  return false;
}

// Row of the design matrix for <x|T|x> over the Hermitian parametrization
// (diagonal entries, then Re/Im of each upper off-diagonal).
RVector quadratic_form_row(const CVector& x) {
  const Eigen::Index d = x.size();
  RVector row(d * d);
  Eigen::Index c = 0;
  for (Eigen::Index i = 0; i < d; ++i) row(c++) = std::norm(x(i));
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = i + 1; j < d; ++j) {
      const Cplx z = std::conj(x(i)) * x(j);
      row(c++) = 2.0 * z.real();
      row(c++) = -2.0 * z.imag();
    }
  }
  return row;
}

CMatrix hermitian_from_params(const RVector& theta, Eigen::Index d) {
  CMatrix t = CMatrix::Zero(d, d);
  Eigen::Index c = 0;
  for (Eigen::Index i = 0; i < d; ++i) t(i, i) = theta(c++);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = i + 1; j < d; ++j) {
      const Cplx v(theta(c), theta(c + 1));
      c += 2;
      t(i, j) = v;
      t(j, i) = std::conj(v);
    }
  }
  return t;
}

// Traceless Hermitian basis: d-1 diagonal differences, then the S/A pairs
// per off-diagonal slot.
std::vector<CMatrix> traceless_basis(Eigen::Index d) {
  std::vector<CMatrix> basis;
  basis.reserve(static_cast<size_t>(d * d - 1));
  for (Eigen::Index k = 0; k + 1 < d; ++k) {
    CMatrix m = CMatrix::Zero(d, d);
    m(k, k) = 1.0;
    m(k + 1, k + 1) = -1.0;
    basis.push_back(m);
  }
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = i + 1; j < d; ++j) {
      CMatrix s = CMatrix::Zero(d, d);
      s(i, j) = 1.0;
      s(j, i) = 1.0;
      basis.push_back(s);
      CMatrix a = CMatrix::Zero(d, d);
      a(i, j) = Cplx(0.0, 1.0);
      a(j, i) = Cplx(0.0, -1.0);
      basis.push_back(a);
    }
  }
  return basis;
}

}  // namespace

BasisSet BasisSet::validate(int d, std::vector<std::vector<CVector>> bases) {
  if (d < 2) throw DimensionMismatchError("dimension must be >= 2");
  for (size_t b = 0; b < bases.size(); ++b) {
    if (static_cast<int>(bases[b].size()) != d) {
      throw DimensionMismatchError("basis " + std::to_string(b) +
                                   " has wrong vector count");
    }
    for (int i = 0; i < d; ++i) {
      if (bases[b][static_cast<size_t>(i)].size() != d) {
        throw DimensionMismatchError("basis vector has wrong length");
      }
      for (int j = i; j < d; ++j) {
        const Cplx ip = bases[b][static_cast<size_t>(i)].dot(
            bases[b][static_cast<size_t>(j)]);
        const Real expect = i == j ? 1.0 : 0.0;
        if (std::abs(ip - expect) > kOrthoTol) {
          throw Error("basis " + std::to_string(b) +
                      " is not orthonormal: |<x_" + std::to_string(i) +
                      "|x_" + std::to_string(j) + "> - " +
                      std::to_string(static_cast<int>(expect)) + "| = " +
                      detail::sci(std::abs(ip - expect)));
        }
      }
    }
  }
  return BasisSet(d, std::move(bases));
}

BasisSet BasisSet::random(int d, int count, std::uint64_t seed) {
  std::vector<std::vector<CVector>> bases;
  bases.reserve(static_cast<size_t>(count));
  for (int b = 0; b < count; ++b) {
    auto rng = make_rng(seed, static_cast<std::uint64_t>(b));
    const CMatrix g = gaussian_complex_matrix(d, d, rng);
    Eigen::HouseholderQR<CMatrix> qr(g);
    CMatrix q = qr.householderQ();
    const CVector diag = qr.matrixQR().diagonal();
    for (int j = 0; j < d; ++j) {
      const Real mag = std::abs(diag(j));
      if (mag > 0.0) q.col(j) *= diag(j) / mag;  // Haar phase fix
    }
    std::vector<CVector> basis;
    basis.reserve(static_cast<size_t>(d));
    for (int j = 0; j < d; ++j) basis.push_back(q.col(j));
    bases.push_back(std::move(basis));
  }
  return validate(d, std::move(bases));
}

FrameFunctionSample::FrameFunctionSample(std::vector<CVector> states,
                                         RVector values, Real weight,
                                         std::vector<std::vector<int>> groups)
    : states_(std::move(states)),
      values_(std::move(values)),
      weight_(weight),
      groups_(std::move(groups)) {
  for (const auto& group : groups_) {
    Real sum = 0.0;
    for (int idx : group) sum += values_(idx);
    if (std::abs(sum - weight_) > kBasisSumTol) {
      throw Error("recorded basis violates the frame equation by " +
                  detail::sci(std::abs(sum - weight_)));
    }
  }
}

FrameFunctionSample FrameFunctionSample::from_states(
    const FrameFunction& f, const std::vector<CVector>& states, Real weight) {
  RVector values(static_cast<Eigen::Index>(states.size()));
  for (size_t i = 0; i < states.size(); ++i) {
    values(static_cast<Eigen::Index>(i)) = f(states[i]);
  }
  return FrameFunctionSample(states, std::move(values), weight, {});
}

FrameFunctionSample FrameFunctionSample::from_bases(const FrameFunction& f,
                                                    const BasisSet& bases,
                                                    Real weight) {
  std::vector<CVector> states;
  std::vector<std::vector<int>> groups;
  states.reserve(static_cast<size_t>(bases.count() * bases.dim()));
  int next = 0;
  for (const auto& basis : bases.bases()) {
    std::vector<int> group;
    for (const CVector& x : basis) {
      states.push_back(x);
      group.push_back(next++);
    }
    groups.push_back(std::move(group));
  }
  RVector values(static_cast<Eigen::Index>(states.size()));
  for (size_t i = 0; i < states.size(); ++i) {
    values(static_cast<Eigen::Index>(i)) = f(states[i]);
  }
  return FrameFunctionSample(std::move(states), std::move(values), weight,
                             std::move(groups));
}

int FrameFunctionSample::dim() const {
  return states_.empty() ? 0 : static_cast<int>(states_.front().size());
}

Real check_frame_property(const FrameFunction& f, const BasisSet& bases,
                          Real weight) {
  Real worst = 0.0;
  for (const auto& basis : bases.bases()) {
    Real sum = 0.0;
    for (const CVector& x : basis) sum += f(x);
    worst = std::max(worst, std::abs(sum - weight));
  }
  return worst;
}

RegularFit fit_regular_operator(const FrameFunctionSample& samples) {
  const int d = samples.dim();
  if (d == 0) throw InsufficientSpanError(0, 0);
  const Eigen::Index m = samples.values().size();
  const Eigen::Index params = static_cast<Eigen::Index>(d) * d;

  RMatrix design(m, params);
  for (Eigen::Index i = 0; i < m; ++i) {
    design.row(i) = quadratic_form_row(samples.states()[static_cast<size_t>(
        i)]);
  }

  Eigen::JacobiSVD<RMatrix> svd(design,
                                Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RVector& sing = svd.singularValues();
  int rank = 0;
  for (Eigen::Index i = 0; i < sing.size(); ++i) {
    if (sing(i) > 1e-10 * sing(0)) ++rank;
  }
  if (rank < params) {
    throw InsufficientSpanError(rank, static_cast<int>(params));
  }

  const RVector theta = svd.solve(samples.values());
  const Real rms =
      std::sqrt((design * theta - samples.values()).squaredNorm() /
                static_cast<Real>(m));
  return {HermitianOperator::validate(hermitian_from_params(theta, d)), rms};
}

Eigen::Vector3d bloch_vector(const CVector& psi) {
  if (psi.size() != 2) {
    throw DimensionMismatchError("Bloch vector needs a qubit state");
  }
  const Cplx z = std::conj(psi(0)) * psi(1);
  return {2.0 * z.real(), 2.0 * z.imag(),
          std::norm(psi(0)) - std::norm(psi(1))};
}

FrameFunction hemisphere_function(const Eigen::Vector3d& direction) {
  if (std::abs(direction.norm() - 1.0) > 1e-10) {
    throw Error("pole direction must be a unit vector");
  }
  const Eigen::Vector3d pole = direction;
  return [pole](const CVector& psi) -> Real {
    const Eigen::Vector3d b = bloch_vector(psi);
    const Real s = b.dot(pole);
    if (s > kEquatorTol) return 1.0;
    if (s < -kEquatorTol) return 0.0;
    return lexicographically_positive(b) ? 1.0 : 0.0;
  };
}

FeasibilityResult povm_gleason_feasibility(
    const std::vector<std::pair<Povm, ProbVector>>& assignments) {
  if (assignments.empty()) {
    throw DimensionMismatchError("need >= 1 assignment");
  }
  const int d = assignments.front().first.dim();
  Eigen::Index rows = 0;
  for (const auto& [povm, q] : assignments) {
    if (povm.dim() != d) {
      throw DimensionMismatchError("assignments mix dimensions");
    }
    if (q.size() != povm.outcomes()) {
      throw DimensionMismatchError("assignment length != POVM outcomes");
    }
    rows += q.size();
  }

  const std::vector<CMatrix> basis = traceless_basis(d);
  const Eigen::Index params = static_cast<Eigen::Index>(basis.size());
  RMatrix design(rows, params);
  RVector rhs(rows);
  Eigen::Index r = 0;
  for (const auto& [povm, q] : assignments) {
    for (int k = 0; k < povm.outcomes(); ++k) {
      const CMatrix& e = povm.effect(k).matrix();
      for (Eigen::Index p = 0; p < params; ++p) {
        design(r, p) = trace_product_re(e, basis[static_cast<size_t>(p)]);
      }
      rhs(r) = q[k] - e.trace().real() / static_cast<Real>(d);
      ++r;
    }
  }

  Eigen::BDCSVD<RMatrix> svd(design,
                             Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RVector theta = svd.solve(rhs);
  const Real rms = std::sqrt((design * theta - rhs).squaredNorm() /
                             static_cast<Real>(rows));

  CMatrix t = CMatrix::Identity(d, d) / static_cast<Real>(d);
  for (Eigen::Index p = 0; p < params; ++p) {
    t += theta(p) * basis[static_cast<size_t>(p)];
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> es(t);
  const Real min_eig = es.eigenvalues().minCoeff();

  FeasibilityResult result;
  result.best_op = std::move(t);
  result.residual = rms;
  result.min_eigenvalue = min_eig;
  result.feasible =
      rms < kFeasibilityResidual && min_eig >= kFeasibilityEigFloor;
  return result;
}

}  // namespace qplexkit
