#pragma once

#include <utility>
#include <vector>

#include "qplexkit/operators.hpp"

namespace qplexkit {

/// Cyclic shift X|j> = |j+1 mod d>.
CMatrix shift_matrix(int d);
/// Clock Z|j> = w^j |j> with w = exp(2 pi i / d).
CMatrix clock_matrix(int d);
/// Weyl-Heisenberg displacement X^p Z^q (global phase convention: none
/// applied — effects are phase-insensitive).
CMatrix displacement(int d, int p, int q);

struct IcReport {
  bool complete;
  int rank;
};

/// Gram matrix G[m][n] = tr(H_m H_n) of a POVM's effects, and B: the inverse
/// when N = d^2, the Moore-Penrose pseudoinverse when N > d^2. Throws
/// NotInformationallyCompleteError when rank(G) < d^2.
std::pair<RMatrix, RMatrix> gram_and_b(const Povm& povm);

/// True iff the effects span the d^2-dimensional real space of Hermitian
/// operators, i.e. rank(G) = d^2. Never throws.
IcReport is_informationally_complete(const Povm& povm);

/// An informationally complete POVM with its Gramian G and B-matrix cached
/// eagerly at construction. G B G = G holds within 1e-9 (and B G = I when
/// N = d^2).
class ReferenceMeasurement {
 public:
  static ReferenceMeasurement from_povm(Povm povm);

  const Povm& povm() const { return povm_; }
  const RMatrix& gram() const { return gram_; }
  const RMatrix& b_matrix() const { return b_; }
  int dim() const { return povm_.dim(); }
  int outcomes() const { return povm_.outcomes(); }
  bool minimal() const { return outcomes() == dim() * dim(); }

 private:
  ReferenceMeasurement(Povm povm, RMatrix gram, RMatrix b)
      : povm_(std::move(povm)), gram_(std::move(gram)), b_(std::move(b)) {}

  Povm povm_;
  RMatrix gram_;
  RMatrix b_;
};

/// Symmetric informationally complete reference measurement: d^2 effects
/// Pi_k / d for rank-1 projectors with pairwise |<m|n>|^2 = 1/(d+1) within
/// tol::sic.
class SicPovm {
 public:
  /// Builds effects |s_k><s_k| / d from unit states and validates every
  /// invariant (count d^2, POVM sum, equiangularity, completeness).
  static SicPovm from_states(std::vector<CVector> states, int d);
  /// Accepts an existing reference whose effects are rank-1 within
  /// tolerance (second eigenvalue < 1e-9), trace 1/d, and equiangular.
  static SicPovm from_reference(ReferenceMeasurement ref);

  const ReferenceMeasurement& ref() const { return ref_; }
  const Povm& povm() const { return ref_.povm(); }
  /// Unit vectors spanning the effects, ordered like the effects.
  const std::vector<CVector>& states() const { return states_; }
  int dim() const { return ref_.dim(); }
  int outcomes() const { return ref_.outcomes(); }
  Real equiangularity_deviation() const { return deviation_; }

 private:
  SicPovm(ReferenceMeasurement ref, std::vector<CVector> states, Real dev)
      : ref_(std::move(ref)), states_(std::move(states)), deviation_(dev) {}

  ReferenceMeasurement ref_;
  std::vector<CVector> states_;
  Real deviation_;
};

/// The four effects H_ab = (1/4)(I + (a sx + b sy + ab sz)/sqrt(3)) in the
/// fixed order (+,+), (+,-), (-,+), (-,-): a regular tetrahedron inscribed
/// in the Bloch sphere.
SicPovm qubit_tetrahedron();

/// The d^2 states X^p Z^q |psi> in lexicographic (p, q) order, with no
/// equiangularity requirement.
std::vector<CVector> wh_orbit(const PureState& fiducial, int d);

/// Weyl-Heisenberg orbit of a fiducial: states X^p Z^q |psi> in
/// lexicographic (p, q) order, effects (1/d)|psi_pq><psi_pq|. Throws
/// NotEquiangularError when the orbit misses |<m|n>|^2 = 1/(d+1) by more
/// than tol::sic.
SicPovm wh_sic_from_fiducial(const PureState& fiducial, int d);

}  // namespace qplexkit
