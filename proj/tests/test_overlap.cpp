#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qplexkit/overlap.hpp"
#include "qplexkit/random.hpp"
#include "qplexkit/sic_search.hpp"

using namespace qplexkit;

namespace {

DensityMatrix basis_density(int d, int k) {
  CMatrix p = CMatrix::Zero(d, d);
  p(k, k) = 1.0;
  return DensityMatrix::validate(p);
}

PureState orthogonal_partner(const PureState& psi, std::mt19937_64& rng) {
  const CVector& a = psi.amplitudes();
  CVector v = gaussian_complex_vector(psi.dim(), rng);
  v -= a.dot(v) * a;
  return PureState::normalized(v);
}

}  // namespace

TEST_CASE("B-inner products of distinguished pairs") {
  const SicPovm tetra = qubit_tetrahedron();
  const ProbVector s0 = state_to_prob(basis_density(2, 0), tetra.ref());
  const ProbVector s1 = state_to_prob(basis_density(2, 1), tetra.ref());
  CHECK(std::abs(b_inner_product(s0, s1, tetra.ref())) < 1e-12);
  CHECK(b_inner_product(s0, s0, tetra.ref()) ==
        doctest::Approx(1.0).epsilon(1e-12));
  const ProbVector mixed = state_to_prob(
      DensityMatrix::validate(0.5 * CMatrix::Identity(2, 2)), tetra.ref());
  CHECK(b_inner_product(mixed, mixed, tetra.ref()) ==
        doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("subspace projection in d = 2 is the identity map") {
  const SicPovm tetra = qubit_tetrahedron();
  auto rng = make_rng(5);
  const PureState a = random_pure(2, 101);
  const PureState b = orthogonal_partner(a, rng);
  const std::vector<CMatrix> projected =
      project_effects_to_subspace(tetra.ref(), a, b);
  REQUIRE(projected.size() == 4);
  // Unitary change of basis preserves traces and pairwise products.
  for (int k = 0; k < 4; ++k) {
    CHECK(projected[static_cast<size_t>(k)].trace().real() ==
          doctest::Approx(0.5).epsilon(1e-12));
  }
  CHECK(hermitian_span_rank(projected) == 4);
}

TEST_CASE("d = 3 SIC compresses onto a basis-pair subspace at rank four") {
  SearchConfig cfg;
  cfg.d = 3;
  cfg.seed = 0;
  const auto [sic, report] = find_sic_fiducial(cfg);
  CVector e0 = CVector::Zero(3);
  e0(0) = 1.0;
  CVector e1 = CVector::Zero(3);
  e1(1) = 1.0;
  const std::vector<CMatrix> projected = project_effects_to_subspace(
      sic.ref(), PureState::validate(e0), PureState::validate(e1));
  REQUIRE(projected.size() == 9);
  CHECK(hermitian_span_rank(projected) == 4);
  for (const CMatrix& h : projected) {
    CHECK(h.rows() == 2);
    CHECK(max_abs(h - h.adjoint().eval()) < 1e-12);
  }
}

TEST_CASE("nearly parallel states have no joint subspace") {
  const SicPovm tetra = qubit_tetrahedron();
  const PureState a = random_pure(2, 55);
  CHECK_THROWS_AS(project_effects_to_subspace(tetra.ref(), a, a),
                  DegenerateSubspaceError);
}

TEST_CASE("verify_overlap on the computational pair") {
  const SicPovm tetra = qubit_tetrahedron();
  const OverlapReport report = verify_overlap(
      basis_density(2, 0), basis_density(2, 1), tetra.ref());
  CHECK(report.dot == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
  CHECK(std::abs(report.b_inner) < 1e-12);
  REQUIRE(report.ic_rank_on_subspace.has_value());
  CHECK(*report.ic_rank_on_subspace == 4);
}

TEST_CASE("orthogonal pairs in d = 3 reach the qplex floor") {
  SearchConfig cfg;
  cfg.d = 3;
  cfg.seed = 0;
  const auto [sic, report] = find_sic_fiducial(cfg);
  const OverlapReport overlap = verify_overlap(
      basis_density(3, 0), basis_density(3, 1), sic.ref());
  CHECK(overlap.dot == doctest::Approx(1.0 / 12.0).epsilon(1e-9));
}

TEST_CASE("identical maximally mixed states: dot 1/d^2") {
  for (int d = 2; d <= 3; ++d) {
    SearchConfig cfg;
    cfg.d = d;
    cfg.seed = 0;
    const auto [sic, rep] = find_sic_fiducial(cfg);
    const DensityMatrix mixed = DensityMatrix::validate(
        CMatrix::Identity(d, d) / static_cast<Real>(d));
    const OverlapReport overlap = verify_overlap(mixed, mixed, sic.ref());
    CHECK(overlap.dot ==
          doctest::Approx(1.0 / (d * d)).epsilon(1e-10));
    CHECK_FALSE(overlap.ic_rank_on_subspace.has_value());  // not pure
  }
}

TEST_CASE("decompose orders weights descending and drops zeros") {
  CMatrix diag = CMatrix::Zero(2, 2);
  diag(0, 0) = 0.7;
  diag(1, 1) = 0.3;
  const EigenMixture mix = decompose(DensityMatrix::validate(diag));
  REQUIRE(mix.weights.size() == 2);
  CHECK(mix.weights(0) == doctest::Approx(0.7).epsilon(1e-12));
  CHECK(mix.weights(1) == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(std::norm(mix.components[0](0)) ==
        doctest::Approx(1.0).epsilon(1e-12));

  const EigenMixture pure = decompose(basis_density(3, 1));
  REQUIRE(pure.weights.size() == 1);
  CHECK(pure.weights(0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("decompose reconstructs random states") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const DensityMatrix rho = random_density(4, mix_seed(77, seed));
    const EigenMixture mix = decompose(rho);
    CMatrix rebuilt = CMatrix::Zero(4, 4);
    for (Eigen::Index k = 0; k < mix.weights.size(); ++k) {
      rebuilt += mix.weights(k) * mix.components[static_cast<size_t>(k)] *
                 mix.components[static_cast<size_t>(k)].adjoint();
    }
    CHECK(max_abs(rebuilt - rho.matrix()) < 1e-12);
    CHECK(std::abs(mix.weights.sum() - 1.0) < 1e-10);
  }
}

TEST_CASE("mixing identity: tr(rho rho') as a weighted B-inner sum") {
  const SicPovm tetra = qubit_tetrahedron();
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const DensityMatrix rho = random_density(2, mix_seed(91, seed));
    const DensityMatrix rho2 = random_density(2, mix_seed(92, seed));
    const EigenMixture mix = decompose(rho);
    const EigenMixture mix2 = decompose(rho2);
    Real double_sum = 0.0;
    for (Eigen::Index i = 0; i < mix.weights.size(); ++i) {
      const ProbVector si = state_to_prob(
          PureState::normalized(mix.components[static_cast<size_t>(i)])
              .density(),
          tetra.ref());
      for (Eigen::Index j = 0; j < mix2.weights.size(); ++j) {
        const ProbVector sj = state_to_prob(
            PureState::normalized(mix2.components[static_cast<size_t>(j)])
                .density(),
            tetra.ref());
        double_sum += mix.weights(i) * mix2.weights(j) *
                      b_inner_product(si, sj, tetra.ref());
      }
    }
    const Real direct = trace_product_re(rho.matrix(), rho2.matrix());
    CHECK(std::abs(double_sum - direct) < 1e-10);
  }
}

TEST_CASE("strict overlap across references at desk scale") {
  SearchConfig cfg;
  cfg.d = 3;
  cfg.seed = 0;
  const auto [sic3, rep3] = find_sic_fiducial(cfg);
  const SicPovm tetra = qubit_tetrahedron();

  struct Case {
    int d;
    const ReferenceMeasurement* ref;
  };
  const std::vector<Case> cases = {{2, &tetra.ref()}, {3, &sic3.ref()}};
  for (const Case& c : cases) {
    Real min_dot = 1.0;
    auto rng = make_rng(400 + static_cast<std::uint64_t>(c.d));
    for (int i = 0; i < 200; ++i) {
      const PureState a =
          random_pure(c.d, mix_seed(401, static_cast<std::uint64_t>(i)));
      const PureState b = orthogonal_partner(a, rng);
      const OverlapReport rep =
          verify_overlap(a.density(), b.density(), *c.ref);
      CHECK(rep.dot > 0.0);
      REQUIRE(rep.ic_rank_on_subspace.has_value());
      CHECK(*rep.ic_rank_on_subspace == 4);
      min_dot = std::min(min_dot, rep.dot);
    }
    // Orthogonal pairs pin the SIC floor 1/(d(d+1)).
    CHECK(min_dot ==
          doctest::Approx(1.0 / (c.d * (c.d + 1.0))).epsilon(1e-8));
  }
}
