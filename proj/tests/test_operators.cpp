#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qplexkit/operators.hpp"
#include "qplexkit/random.hpp"

using namespace qplexkit;

namespace {

CMatrix diag2(Real a, Real b) {
  CMatrix m = CMatrix::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

// Tetrahedron effect for signs (a, b), written out entrywise from the
// Pauli combination: the oracle the reference module is tested against.
CMatrix tetrahedron_effect(int a, int b) {
  const Real s = 1.0 / std::sqrt(3.0);
  CMatrix m(2, 2);
  m(0, 0) = 0.25 * (1.0 + a * b * s);
  m(0, 1) = 0.25 * s * Cplx(a, -b);
  m(1, 0) = 0.25 * s * Cplx(a, b);
  m(1, 1) = 0.25 * (1.0 - a * b * s);
  return m;
}

}  // namespace

TEST_CASE("maximally mixed qubit state validates") {
  const DensityMatrix rho = validate_density(0.5 * CMatrix::Identity(2, 2));
  CHECK(rho.op().eigenvalues()(0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(rho.op().eigenvalues()(1) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("pure projector validates") {
  CHECK_NOTHROW(validate_density(diag2(1.0, 0.0)));
}

TEST_CASE("negative eigenvalue is rejected with the measured deviation") {
  try {
    validate_density(diag2(1.5, -0.5));
    FAIL("expected NotPositiveError");
  } catch (const NotPositiveError& e) {
    CHECK(e.min_eigenvalue == doctest::Approx(-0.5).epsilon(1e-12));
  }
}

TEST_CASE("non-Hermitian and wrong-trace inputs are rejected") {
  CMatrix skew = CMatrix::Zero(2, 2);
  skew(0, 1) = 1.0;  // A != A^dag
  CHECK_THROWS_AS(validate_density(skew), NotHermitianError);
  CHECK_THROWS_AS(validate_density(diag2(0.7, 0.5)), TraceNotOneError);
  CHECK_THROWS_AS(validate_density(CMatrix::Zero(2, 3)),
                  DimensionMismatchError);
}

TEST_CASE("projective measurement validates as a POVM") {
  CHECK_NOTHROW(validate_povm({diag2(1, 0), diag2(0, 1)}));
}

TEST_CASE("tetrahedron effects sum to the identity") {
  std::vector<CMatrix> raws;
  for (const auto& [a, b] : {std::pair{1, 1}, std::pair{1, -1},
                            std::pair{-1, 1}, std::pair{-1, -1}}) {
    raws.push_back(tetrahedron_effect(a, b));
  }
  CHECK_NOTHROW(validate_povm(raws));
}

TEST_CASE("duplicate projector fails the identity-sum check") {
  try {
    validate_povm({diag2(1, 0), diag2(1, 0)});
    FAIL("expected SumNotIdentityError");
  } catch (const SumNotIdentityError& e) {
    CHECK(e.deviation == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("non-positive effect reports its index") {
  try {
    validate_povm({diag2(1.5, 0.0), diag2(-0.5, 1.0)});
    FAIL("expected EffectNotPositiveError");
  } catch (const EffectNotPositiveError& e) {
    CHECK(e.index == 0);  // eigenvalue 1.5 > 1
  }
}

TEST_CASE("Born probabilities against the tetrahedron") {
  const DensityMatrix mixed = validate_density(0.5 * CMatrix::Identity(2, 2));
  const DensityMatrix ground = validate_density(diag2(1, 0));
  for (const auto& [a, b] : {std::pair{1, 1}, std::pair{1, -1},
                            std::pair{-1, 1}, std::pair{-1, -1}}) {
    const Effect e = Effect::validate(tetrahedron_effect(a, b));
    CHECK(born_probability(mixed, e) == doctest::Approx(0.25).epsilon(1e-12));
  }
  const Effect identity = Effect::validate(CMatrix::Identity(2, 2));
  CHECK(born_probability(ground, identity) == 1.0);
  const Effect hpp = Effect::validate(tetrahedron_effect(1, 1));
  CHECK(born_probability(ground, hpp) ==
        doctest::Approx(0.25 * (1.0 + 1.0 / std::sqrt(3.0)))
            .epsilon(1e-12));
}

TEST_CASE("Born probability clamps roundoff but respects dimensions") {
  const DensityMatrix rho = validate_density(diag2(1, 0));
  CHECK_THROWS_AS(
      born_probability(rho, Effect::validate(CMatrix::Identity(3, 3))),
      DimensionMismatchError);
  // A validated state may carry an eigenvalue at -tol::psd; the matching
  // projector probability clamps to exactly 0.
  const Effect excited = Effect::validate(diag2(0, 1));
  const DensityMatrix barely =
      validate_density(diag2(1.0 + 0.5e-9, -0.5e-9));
  CHECK(born_probability(barely, excited) == 0.0);
}

TEST_CASE("random generation is deterministic for a fixed seed") {
  const DensityMatrix a = random_density(2, 7);
  const DensityMatrix b = random_density(2, 7);
  CHECK(max_abs(a.matrix() - b.matrix()) == 0.0);
  const PureState p = random_pure(3, 1);
  CHECK(std::abs(p.amplitudes().norm() - 1.0) <= tol::norm);
  const DensityMatrix big = random_density(4, 2);
  CHECK(big.op().eigenvalues().minCoeff() >= 0.0);
  CHECK(std::abs(big.op().trace() - 1.0) <= tol::trace);
}

TEST_CASE("Born probabilities over a POVM form a distribution") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const int d = 2 + static_cast<int>(seed % 3);
    const DensityMatrix rho = random_density(d, mix_seed(11, seed));
    const Povm povm =
        random_povm(d, 2 + static_cast<int>(seed % 4), mix_seed(13, seed));
    Real sum = 0.0;
    for (const Effect& e : povm.effects()) {
      const Real p = born_probability(rho, e);
      CHECK(p >= 0.0);
      sum += p;
    }
    CHECK(std::abs(sum - 1.0) <= povm.outcomes() * tol::prob);
  }
}

TEST_CASE("validation is idempotent") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const DensityMatrix rho = random_density(3, seed);
    const DensityMatrix again = validate_density(rho.matrix());
    CHECK(max_abs(again.matrix() - rho.matrix()) == 0.0);
  }
}

TEST_CASE("Born probability is linear in the state") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const int d = 2 + static_cast<int>(seed % 3);
    const DensityMatrix r1 = random_density(d, mix_seed(21, seed));
    const DensityMatrix r2 = random_density(d, mix_seed(22, seed));
    const Povm povm = random_povm(d, 3, mix_seed(23, seed));
    auto rng = make_rng(24, seed);
    std::uniform_real_distribution<Real> unif(0.0, 1.0);
    const Real w = unif(rng);
    const DensityMatrix blend =
        validate_density(w * r1.matrix() + (1.0 - w) * r2.matrix());
    for (const Effect& e : povm.effects()) {
      const Real lhs = born_probability(blend, e);
      const Real rhs = w * born_probability(r1, e) +
                       (1.0 - w) * born_probability(r2, e);
      CHECK(std::abs(lhs - rhs) <= tol::prob);
    }
  }
}

TEST_CASE("pure states validate norm and reject zero vectors") {
  CVector v(2);
  v << 1.0, 1.0;
  CHECK_THROWS_AS(PureState::validate(v), NormNotOneError);
  CHECK_NOTHROW(PureState::normalized(v));
  CHECK_THROWS_AS(PureState::normalized(CVector::Zero(2)), NormNotOneError);
}
