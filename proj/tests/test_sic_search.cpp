#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qplexkit/random.hpp"
#include "qplexkit/sic_search.hpp"

using namespace qplexkit;

namespace {

Real theoretical_minimum(int d) {
  return (static_cast<Real>(d) * d - 1.0) / ((d + 1.0) * (d + 1.0));
}

// Central finite differences of the frame potential in ambient
// coordinates: the independent oracle for the analytic gradient.
CVector finite_difference_gradient(const CVector& psi, int d, Real h) {
  CVector grad(psi.size());
  for (Eigen::Index k = 0; k < psi.size(); ++k) {
    CVector plus = psi, minus = psi;
    plus(k) += h;
    minus(k) -= h;
    const Real d_re =
        (frame_potential(plus, d) - frame_potential(minus, d)) / (2.0 * h);
    plus = psi;
    minus = psi;
    plus(k) += Cplx(0, h);
    minus(k) -= Cplx(0, h);
    const Real d_im =
        (frame_potential(plus, d) - frame_potential(minus, d)) / (2.0 * h);
    grad(k) = Cplx(d_re, d_im);
  }
  return grad;
}

}  // namespace

TEST_CASE("frame potential of the tetrahedron fiducial is 1/3") {
  const SicPovm tetra = qubit_tetrahedron();
  const CVector fiducial =
      tetra.povm().effect(0).op().eigenvectors().col(1);
  CHECK(frame_potential(fiducial, 2) ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("frame potential of a basis vector is 1") {
  CVector e0 = CVector::Zero(2);
  e0(0) = 1.0;
  // Z gives overlap 1; X and XZ give 0.
  CHECK(frame_potential(e0, 2) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("converged fiducials sit at the Welch bound in every dimension") {
  for (int d = 2; d <= 6; ++d) {
    SearchConfig cfg;
    cfg.d = d;
    cfg.seed = 3;
    const auto [sic, report] = find_sic_fiducial(cfg);
    CHECK(std::abs(frame_potential(sic.states().front(), d) -
                   theoretical_minimum(d)) < 1e-10);
    CHECK(report.best_potential >= theoretical_minimum(d) - 1e-12);
  }
}

TEST_CASE("gradient matches central finite differences") {
  for (int d = 2; d <= 4; ++d) {
    for (std::uint64_t trial = 0; trial < 100; ++trial) {
      const CVector psi =
          random_pure(d, mix_seed(600 + d, trial)).amplitudes();
      const CVector analytic = frame_potential_gradient(psi, d);
      const CVector fd = finite_difference_gradient(psi, d, 1e-6);
      const Real rel = (analytic - fd).norm() / analytic.norm();
      CHECK(rel < 1e-5);
    }
  }
}

TEST_CASE("search succeeds with modest budgets") {
  SearchConfig cfg;
  cfg.d = 2;
  cfg.restarts = 8;
  cfg.seed = 0;
  const auto [sic2, report2] = find_sic_fiducial(cfg);
  CHECK(report2.converged);
  CHECK(report2.achieved_equiangularity_deviation < 1e-8);

  cfg.d = 3;
  cfg.restarts = 32;
  const auto [sic3, report3] = find_sic_fiducial(cfg);
  CHECK(report3.converged);
  CHECK(report3.achieved_equiangularity_deviation < 1e-8);
}

TEST_CASE("an insufficient budget reports NotConverged with diagnostics") {
  SearchConfig cfg;
  cfg.d = 3;
  cfg.restarts = 1;
  cfg.max_iters = 1;
  try {
    find_sic_fiducial(cfg);
    FAIL("expected NotConvergedError");
  } catch (const NotConvergedError& e) {
    CHECK(e.best_deviation > tol::sic);
    CHECK(e.best_potential > theoretical_minimum(3));
  }
}

TEST_CASE("verify_equiangular measures the tetrahedron and its spoilage") {
  const SicPovm tetra = qubit_tetrahedron();
  CHECK(verify_equiangular(tetra.states(), 2).max_deviation < 1e-14);
  CHECK(verify_equiangular(tetra.povm()).max_deviation < 1e-14);

  // Rotate one state by 0.01 rad around the Bloch y axis.
  std::vector<CVector> spoiled = tetra.states();
  const Real half = 0.005;
  CMatrix rot(2, 2);
  rot << Cplx(std::cos(half), 0), Cplx(-std::sin(half), 0),
      Cplx(std::sin(half), 0), Cplx(std::cos(half), 0);
  spoiled[0] = rot * spoiled[0];
  const EquiangularityReport spoiled_report = verify_equiangular(spoiled, 2);
  CHECK(spoiled_report.max_deviation > 1e-4);
  CHECK(spoiled_report.worst_m == 0);  // the rotated state is implicated

  // An orthonormal-basis orbit has zero overlaps, a full 1/(d+1) off.
  CVector e0 = CVector::Zero(2);
  e0(0) = 1.0;
  CVector e1 = CVector::Zero(2);
  e1(1) = 1.0;
  const EquiangularityReport basis_report =
      verify_equiangular({e0, e1, e0, e1}, 2);
  CHECK(basis_report.max_deviation >= 1.0 / 3.0 - 1e-15);
}

TEST_CASE("identical configs give bit-identical reports") {
  SearchConfig cfg;
  cfg.d = 4;
  cfg.seed = 11;
  const auto [sic_a, a] = find_sic_fiducial(cfg);
  const auto [sic_b, b] = find_sic_fiducial(cfg);
  CHECK(a.best_potential == b.best_potential);
  CHECK(a.achieved_equiangularity_deviation ==
        b.achieved_equiangularity_deviation);
  CHECK(a.iterations_used == b.iterations_used);
  CHECK(a.restart_index == b.restart_index);
  CHECK(max_abs(CMatrix(sic_a.states().front() - sic_b.states().front())) ==
        0.0);
}

TEST_CASE("concurrent restarts merge to the single-thread result") {
  SearchConfig cfg;
  cfg.d = 3;
  cfg.seed = 2;
  cfg.restarts = 8;
  const auto [sic_serial, serial] = find_sic_fiducial(cfg);
  cfg.threads = 4;
  const auto [sic_parallel, parallel] = find_sic_fiducial(cfg);
  CHECK(serial.best_potential == parallel.best_potential);
  CHECK(serial.restart_index == parallel.restart_index);
  CHECK(max_abs(CMatrix(sic_serial.states().front() -
                        sic_parallel.states().front())) == 0.0);
}

TEST_CASE("search output always satisfies the SIC invariants") {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    SearchConfig cfg;
    cfg.d = 3;
    cfg.seed = seed;
    const auto [sic, report] = find_sic_fiducial(cfg);
    CHECK(sic.equiangularity_deviation() <= tol::sic);
    for (const Effect& e : sic.povm().effects()) {
      CHECK(std::abs(e.trace() - 1.0 / 3.0) < 1e-12);
    }
    CHECK(report.converged);
  }
}

TEST_CASE("config validation") {
  SearchConfig cfg;
  cfg.d = 1;
  CHECK_THROWS_AS(find_sic_fiducial(cfg), DimensionMismatchError);
  cfg.d = 2;
  cfg.grad_tol = 0.0;
  CHECK_THROWS_AS(find_sic_fiducial(cfg), Error);
}
