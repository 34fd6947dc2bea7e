#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qplexkit/gleason.hpp"
#include "qplexkit/random.hpp"
#include "qplexkit/reference.hpp"

using namespace qplexkit;

namespace {

const Eigen::Vector3d kZPole(0.0, 0.0, 1.0);

FrameFunction born_function(const DensityMatrix& rho) {
  const CMatrix m = rho.matrix();
  return [m](const CVector& x) { return std::real(x.dot(m * x)); };
}

std::vector<CVector> random_directions(int d, int count,
                                       std::uint64_t seed) {
  std::vector<CVector> dirs;
  dirs.reserve(static_cast<size_t>(count));
  for (int i = 0; i < count; ++i) {
    dirs.push_back(
        random_pure(d, mix_seed(seed, static_cast<std::uint64_t>(i)))
            .amplitudes());
  }
  return dirs;
}

std::vector<std::pair<Povm, ProbVector>> hemisphere_assignments(
    int n_bases, std::uint64_t seed) {
  const FrameFunction f = hemisphere_function(kZPole);
  std::vector<std::pair<Povm, ProbVector>> assignments;
  for (int b = 0; b < n_bases; ++b) {
    const BasisSet one =
        BasisSet::random(2, 1, mix_seed(seed, static_cast<std::uint64_t>(b)));
    const auto& basis = one.bases().front();
    std::vector<CMatrix> raws = {basis[0] * basis[0].adjoint(),
                                 basis[1] * basis[1].adjoint()};
    RVector q(2);
    q << f(basis[0]), f(basis[1]);
    assignments.emplace_back(Povm::validate(raws), ProbVector::validate(q));
  }
  const SicPovm tetra = qubit_tetrahedron();
  RVector tq(4);
  for (int k = 0; k < 4; ++k) {
    tq(k) = f(tetra.states()[static_cast<size_t>(k)]) *
            tetra.povm().effect(k).trace();
  }
  assignments.emplace_back(tetra.povm(), ProbVector::validate(tq));
  return assignments;
}

}  // namespace

TEST_CASE("Born rules are frame functions of weight one") {
  const BasisSet bases = BasisSet::random(3, 200, 1);
  const DensityMatrix rho = random_density(3, 2);
  CHECK(check_frame_property(born_function(rho), bases, 1.0) < 1e-12);
}

TEST_CASE("the constant function 1/d is a frame function") {
  const BasisSet bases = BasisSet::random(2, 100, 3);
  const FrameFunction constant = [](const CVector&) { return 0.5; };
  CHECK(check_frame_property(constant, bases, 1.0) == 0.0);
}

TEST_CASE("the hemisphere function satisfies the frame equation exactly") {
  const BasisSet bases = BasisSet::random(2, 2000, 4);
  const FrameFunction f = hemisphere_function(kZPole);
  CHECK(check_frame_property(f, bases, 1.0) < 1e-12);
}

TEST_CASE("hemisphere values at the poles and on the equator") {
  const FrameFunction f = hemisphere_function(kZPole);
  CVector e0 = CVector::Zero(2);
  e0(0) = 1.0;
  CVector e1 = CVector::Zero(2);
  e1(1) = 1.0;
  CHECK(f(e0) == 1.0);
  CHECK(f(e1) == 0.0);
  // |+> and |-> sit on the equator; the lexicographic tie-break gives the
  // + x member the 1.
  CVector plus(2), minus(2);
  plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  minus << 1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0);
  CHECK(f(plus) == 1.0);
  CHECK(f(minus) == 0.0);
}

TEST_CASE("antipodal pairs sum to one exactly") {
  auto rng = make_rng(5);
  std::normal_distribution<Real> gauss(0.0, 1.0);
  for (int t = 0; t < 20; ++t) {
    Eigen::Vector3d pole(gauss(rng), gauss(rng), gauss(rng));
    pole.normalize();
    const FrameFunction f = hemisphere_function(pole);
    const BasisSet bases =
        BasisSet::random(2, 200, mix_seed(6, static_cast<std::uint64_t>(t)));
    for (const auto& basis : bases.bases()) {
      CHECK(f(basis[0]) + f(basis[1]) == 1.0);
    }
  }
}

TEST_CASE("regular fit recovers a planted state") {
  const DensityMatrix rho = random_density(2, 8);
  const FrameFunctionSample sample = FrameFunctionSample::from_states(
      born_function(rho), random_directions(2, 200, 9), 1.0);
  const RegularFit fit = fit_regular_operator(sample);
  CHECK(fit.residual < 1e-10);
  CHECK(max_abs(fit.op.matrix() - rho.matrix()) < 1e-10);
}

TEST_CASE("regular fit of the constant recovers I/d") {
  const FrameFunction constant = [](const CVector&) { return 0.5; };
  const FrameFunctionSample sample = FrameFunctionSample::from_states(
      constant, random_directions(2, 100, 10), 1.0);
  const RegularFit fit = fit_regular_operator(sample);
  CHECK(max_abs(fit.op.matrix() - 0.5 * CMatrix::Identity(2, 2)) < 1e-10);
}

TEST_CASE("the hemisphere function admits no regular fit") {
  auto rng = make_rng(11);
  std::normal_distribution<Real> gauss(0.0, 1.0);
  for (int t = 0; t < 20; ++t) {
    Eigen::Vector3d pole(gauss(rng), gauss(rng), gauss(rng));
    pole.normalize();
    const FrameFunctionSample sample = FrameFunctionSample::from_states(
        hemisphere_function(pole),
        random_directions(2, 500, mix_seed(12, static_cast<std::uint64_t>(t))),
        1.0);
    CHECK(fit_regular_operator(sample).residual > 0.1);
  }
}

TEST_CASE("too few samples raise InsufficientSpan") {
  const DensityMatrix rho = random_density(2, 13);
  const FrameFunctionSample sample = FrameFunctionSample::from_states(
      born_function(rho), random_directions(2, 3, 14), 1.0);
  try {
    fit_regular_operator(sample);
    FAIL("expected InsufficientSpanError");
  } catch (const InsufficientSpanError& e) {
    CHECK(e.rank < 4);
    CHECK(e.required == 4);
  }
}

TEST_CASE("frame samples validate recorded bases") {
  const BasisSet bases = BasisSet::random(2, 50, 15);
  const DensityMatrix rho = random_density(2, 16);
  const FrameFunctionSample sample =
      FrameFunctionSample::from_bases(born_function(rho), bases, 1.0);
  CHECK(sample.basis_groups().size() == 50);
  // A non-frame-function cannot be packaged with basis groups.
  const FrameFunction bogus = [](const CVector& x) {
    return std::abs(x(0));
  };
  CHECK_THROWS_AS(FrameFunctionSample::from_bases(bogus, bases, 1.0), Error);
}

TEST_CASE("basis sets validate orthonormality") {
  CVector e0 = CVector::Zero(2);
  e0(0) = 1.0;
  CHECK_THROWS_AS(BasisSet::validate(2, {{e0, e0}}), Error);
  const BasisSet ok = BasisSet::random(4, 5, 17);
  CHECK(ok.count() == 5);
  CHECK(ok.dim() == 4);
}

TEST_CASE("feasibility recovers planted states from random POVMs") {
  for (std::uint64_t inst = 0; inst < 10; ++inst) {
    const DensityMatrix hidden = random_density(2, mix_seed(18, inst));
    std::vector<std::pair<Povm, ProbVector>> assignments;
    for (int p = 0; p < 20; ++p) {
      const Povm povm = random_povm(
          2, 3 + p % 3, mix_seed(19, inst * 100 + static_cast<std::uint64_t>(p)));
      RVector q(povm.outcomes());
      for (int k = 0; k < povm.outcomes(); ++k) {
        q(k) = born_probability(hidden, povm.effect(k));
      }
      assignments.emplace_back(povm, ProbVector::validate(q));
    }
    const FeasibilityResult result = povm_gleason_feasibility(assignments);
    CHECK(result.feasible);
    CHECK(max_abs(result.best_op - hidden.matrix()) < 1e-8);
  }
}

TEST_CASE("the hemisphere extension to POVMs is infeasible") {
  const FeasibilityResult result =
      povm_gleason_feasibility(hemisphere_assignments(50, 20));
  CHECK_FALSE(result.feasible);
  CHECK(result.residual > 1e-8);
}

TEST_CASE("a single trivial POVM is feasible and underdetermined") {
  const Povm trivial = Povm::validate({CMatrix::Identity(2, 2)});
  RVector one(1);
  one << 1.0;
  const FeasibilityResult result = povm_gleason_feasibility(
      {{trivial, ProbVector::validate(one)}});
  CHECK(result.feasible);
  CHECK(result.residual < 1e-12);
  // Minimum-norm solution: the maximally mixed state.
  CHECK(max_abs(result.best_op - 0.5 * CMatrix::Identity(2, 2)) < 1e-12);
}

TEST_CASE("adding assignments never turns infeasible into feasible") {
  const auto few = hemisphere_assignments(10, 21);
  const FeasibilityResult small = povm_gleason_feasibility(few);
  CHECK_FALSE(small.feasible);
  auto more = hemisphere_assignments(10, 21);
  const auto extra = hemisphere_assignments(40, 22);
  more.insert(more.end(), extra.begin(), extra.end());
  const FeasibilityResult grown = povm_gleason_feasibility(more);
  CHECK_FALSE(grown.feasible);
}

TEST_CASE("Born frame functions are always feasible") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const DensityMatrix rho = random_density(2, mix_seed(23, seed));
    const FrameFunctionSample sample = FrameFunctionSample::from_states(
        born_function(rho), random_directions(2, 50, mix_seed(24, seed)),
        1.0);
    CHECK(fit_regular_operator(sample).residual < 1e-10);
    // As POVM assignments (basis measurements), the same data is feasible.
    std::vector<std::pair<Povm, ProbVector>> assignments;
    const BasisSet bases = BasisSet::random(2, 10, mix_seed(25, seed));
    for (const auto& basis : bases.bases()) {
      std::vector<CMatrix> raws = {basis[0] * basis[0].adjoint(),
                                   basis[1] * basis[1].adjoint()};
      const Povm povm = Povm::validate(raws);
      RVector q(2);
      for (int k = 0; k < 2; ++k) {
        q(k) = born_probability(rho, povm.effect(k));
      }
      assignments.emplace_back(povm, ProbVector::validate(q));
    }
    CHECK(povm_gleason_feasibility(assignments).feasible);
  }
}

TEST_CASE("bloch vectors and pole validation") {
  CVector e0 = CVector::Zero(2);
  e0(0) = 1.0;
  const Eigen::Vector3d b = bloch_vector(e0);
  CHECK(b(2) == doctest::Approx(1.0));
  CHECK_THROWS_AS(hemisphere_function(Eigen::Vector3d(0, 0, 2)), Error);
  CHECK_THROWS_AS(bloch_vector(CVector::Zero(3)), DimensionMismatchError);
}
