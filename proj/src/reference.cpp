#include "qplexkit/reference.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

namespace qplexkit {

namespace {

// Eigenvalues of G below this fraction of the largest are treated as zero
// when ranking informational completeness.
constexpr Real kRankCutoff = 1e-12;

// Consistency bound on the cached (G, B) pair.
constexpr Real kGramInverseTol = 1e-9;

RMatrix gram_of(const Povm& povm) {
  const int n = povm.outcomes();
  RMatrix g(n, n);
  for (int m = 0; m < n; ++m) {
    for (int k = m; k < n; ++k) {
      const Real v =
          trace_product_re(povm.effect(m).matrix(), povm.effect(k).matrix());
      g(m, k) = v;
      g(k, m) = v;
    }
  }
  return g;
}

struct GramInverse {
  RMatrix b;
  int rank;
};

GramInverse invert_gram(const RMatrix& g) {
  Eigen::SelfAdjointEigenSolver<RMatrix> es(g);
  const RVector& vals = es.eigenvalues();
  const Real cutoff = vals.cwiseAbs().maxCoeff() * kRankCutoff;
  RVector inv = RVector::Zero(vals.size());
  int rank = 0;
  for (Eigen::Index i = 0; i < vals.size(); ++i) {
    if (vals(i) > cutoff) {
      inv(i) = 1.0 / vals(i);
      ++rank;
    }
  }
  return {es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().transpose(),
          rank};
}

Real max_pairwise_overlap_deviation(const std::vector<CVector>& states,
                                    int d) {
  const Real target = 1.0 / (d + 1.0);
  Real worst = 0.0;
  for (size_t m = 0; m < states.size(); ++m) {
    for (size_t n = m + 1; n < states.size(); ++n) {
      const Real ov = std::norm(states[m].dot(states[n]));
      worst = std::max(worst, std::abs(ov - target));
    }
  }
  return worst;
}

}  // namespace

CMatrix shift_matrix(int d) {
  CMatrix x = CMatrix::Zero(d, d);
  for (int j = 0; j < d; ++j) x((j + 1) % d, j) = 1.0;
  return x;
}

CMatrix clock_matrix(int d) {
  CMatrix z = CMatrix::Zero(d, d);
  for (int j = 0; j < d; ++j) {
    const Real angle = 2.0 * std::numbers::pi * j / d;
    z(j, j) = Cplx(std::cos(angle), std::sin(angle));
  }
  return z;
}

CMatrix displacement(int d, int p, int q) {
  CMatrix result = CMatrix::Identity(d, d);
  const CMatrix x = shift_matrix(d);
  const CMatrix z = clock_matrix(d);
  for (int i = 0; i < ((p % d) + d) % d; ++i) result = x * result;
  for (int i = 0; i < ((q % d) + d) % d; ++i) result = result * z;
  return result;
}

std::pair<RMatrix, RMatrix> gram_and_b(const Povm& povm) {
  const int d2 = povm.dim() * povm.dim();
  RMatrix g = gram_of(povm);
  GramInverse gi = invert_gram(g);
  if (gi.rank < d2) throw NotInformationallyCompleteError(gi.rank, d2);
  return {std::move(g), std::move(gi.b)};
}

IcReport is_informationally_complete(const Povm& povm) {
  const GramInverse gi = invert_gram(gram_of(povm));
  return {gi.rank == povm.dim() * povm.dim(), gi.rank};
}

ReferenceMeasurement ReferenceMeasurement::from_povm(Povm povm) {
  auto [g, b] = gram_and_b(povm);
  const Real residual = max_abs(g * b * g - g);
  if (residual > kGramInverseTol) {
    throw Error("Gram inversion unstable: |G B G - G| = " +
                detail::sci(residual));
  }
  if (povm.outcomes() == povm.dim() * povm.dim()) {
    const int n = povm.outcomes();
    const Real id_residual = max_abs(b * g - RMatrix::Identity(n, n));
    if (id_residual > kGramInverseTol) {
      throw Error("Gram inversion unstable: |B G - I| = " +
                  detail::sci(id_residual));
    }
  }
  return ReferenceMeasurement(std::move(povm), std::move(g), std::move(b));
}

SicPovm SicPovm::from_states(std::vector<CVector> states, int d) {
  const size_t n = static_cast<size_t>(d) * static_cast<size_t>(d);
  if (states.size() != n) {
    throw DimensionMismatchError("SIC in dimension " + std::to_string(d) +
                                 " needs " + std::to_string(n) + " states, " +
                                 "got " + std::to_string(states.size()));
  }
  for (const CVector& s : states) {
    if (s.size() != d) throw DimensionMismatchError("state dimension != d");
    const Real dev = std::abs(s.norm() - 1.0);
    if (dev > tol::norm) throw NormNotOneError(dev);
  }
  const Real deviation = max_pairwise_overlap_deviation(states, d);
  if (deviation > tol::sic) throw NotEquiangularError(deviation);

  std::vector<CMatrix> raws;
  raws.reserve(n);
  for (const CVector& s : states) {
    raws.push_back((s * s.adjoint()) / static_cast<Real>(d));
  }
  ReferenceMeasurement ref =
      ReferenceMeasurement::from_povm(Povm::validate(raws));
  return SicPovm(std::move(ref), std::move(states), deviation);
}

SicPovm SicPovm::from_reference(ReferenceMeasurement ref) {
  const int d = ref.dim();
  if (ref.outcomes() != d * d) {
    throw DimensionMismatchError("SIC reference needs exactly d^2 outcomes");
  }
  std::vector<CVector> states;
  states.reserve(static_cast<size_t>(ref.outcomes()));
  for (const Effect& e : ref.povm().effects()) {
    const RVector& vals = e.op().eigenvalues();
    const int top = static_cast<int>(vals.size()) - 1;
    const Real second = top > 0 ? std::abs(vals(top - 1)) : 0.0;
    if (second > 1e-9) {
      throw NotEquiangularError(second);  // not rank-1 within tolerance
    }
    const Real trace_dev = std::abs(e.trace() - 1.0 / d);
    if (trace_dev > tol::sic) throw NotEquiangularError(trace_dev);
    states.push_back(e.op().eigenvectors().col(top));
  }
  const Real deviation = max_pairwise_overlap_deviation(states, d);
  if (deviation > tol::sic) throw NotEquiangularError(deviation);
  return SicPovm(std::move(ref), std::move(states), deviation);
}

SicPovm qubit_tetrahedron() {
  const Real s = 1.0 / std::sqrt(3.0);
  CMatrix sx(2, 2), sy(2, 2), sz(2, 2);
  sx << 0, 1, 1, 0;
  sy << Cplx(0, 0), Cplx(0, -1), Cplx(0, 1), Cplx(0, 0);
  sz << 1, 0, 0, -1;
  std::vector<CMatrix> raws;
  for (const auto& [a, b] : {std::pair{1, 1}, std::pair{1, -1},
                            std::pair{-1, 1}, std::pair{-1, -1}}) {
    raws.push_back(0.25 * (CMatrix::Identity(2, 2) +
                           s * (Real(a) * sx + Real(b) * sy +
                                Real(a) * Real(b) * sz)));
  }
  return SicPovm::from_reference(
      ReferenceMeasurement::from_povm(Povm::validate(raws)));
}

std::vector<CVector> wh_orbit(const PureState& fiducial, int d) {
  if (fiducial.dim() != d) {
    throw DimensionMismatchError("fiducial dimension != d");
  }
  const CVector& psi = fiducial.amplitudes();
  const CMatrix x = shift_matrix(d);
  const CMatrix z = clock_matrix(d);
  std::vector<CVector> clocked(static_cast<size_t>(d));
  clocked[0] = psi;
  for (int q = 1; q < d; ++q) clocked[q] = z * clocked[q - 1];
  std::vector<CVector> states;
  states.reserve(static_cast<size_t>(d) * static_cast<size_t>(d));
  CMatrix xp = CMatrix::Identity(d, d);
  for (int p = 0; p < d; ++p) {
    for (int q = 0; q < d; ++q) states.push_back(xp * clocked[q]);
    xp = (x * xp).eval();
  }
  return states;
}

SicPovm wh_sic_from_fiducial(const PureState& fiducial, int d) {
  return SicPovm::from_states(wh_orbit(fiducial, d), d);
}

}  // namespace qplexkit
