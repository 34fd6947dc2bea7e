#include "qplexkit/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <ostream>

#include "qplexkit/gleason.hpp"
#include "qplexkit/overlap.hpp"
#include "qplexkit/qplex.hpp"
#include "qplexkit/random.hpp"

namespace qplexkit {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0,
                double d = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), pattern, a, b, c, d);
  return buf;
}

PureState random_orthogonal_partner(const PureState& psi,
                                    std::mt19937_64& rng) {
  const CVector& a = psi.amplitudes();
  for (int attempt = 0; attempt < 16; ++attempt) {
    CVector v = gaussian_complex_vector(psi.dim(), rng);
    v -= a.dot(v) * a;
    const Real n = v.norm();
    if (n > 1e-6) return PureState::normalized(v);
  }
  throw Error("failed to draw an orthogonal partner");
}

/// Tetrahedron plus half-weighted computational projectors, rescaled to a
/// 6-outcome POVM: the non-minimal IC qubit reference.
ReferenceMeasurement six_outcome_reference() {
  const SicPovm tetra = qubit_tetrahedron();
  std::vector<CMatrix> raws;
  for (const Effect& e : tetra.povm().effects()) {
    raws.push_back((2.0 / 3.0) * e.matrix());
  }
  CMatrix p0 = CMatrix::Zero(2, 2);
  p0(0, 0) = 1.0;
  CMatrix p1 = CMatrix::Zero(2, 2);
  p1(1, 1) = 1.0;
  raws.push_back(p0 / 3.0);
  raws.push_back(p1 / 3.0);
  return ReferenceMeasurement::from_povm(Povm::validate(raws));
}

struct Context {
  AcceptanceOptions opts;
  std::map<int, SicPovm> sics;
  double search_seconds = 0.0;
  double worst_search_deviation = 0.0;
  double worst_potential_gap = 0.0;
  bool search_ok = true;
  std::string search_detail;
};

void run_searches(Context& ctx) {
  const auto start = Clock::now();
  std::string detail;
  for (int d = 2; d <= 5; ++d) {
    SearchConfig cfg;
    cfg.d = d;
    cfg.seed = ctx.opts.seed;
    cfg.threads = ctx.opts.threads;
    try {
      auto [sic, report] = find_sic_fiducial(cfg);
      const double gap =
          std::abs(report.best_potential - report.theoretical_minimum);
      ctx.worst_search_deviation =
          std::max(ctx.worst_search_deviation,
                   report.achieved_equiangularity_deviation);
      ctx.worst_potential_gap = std::max(ctx.worst_potential_gap, gap);
      detail += fmt("d=%.0f dev=%.3e gap=%.3e; ", double(d),
                    report.achieved_equiangularity_deviation, gap);
      ctx.sics.emplace(d, std::move(sic));
    } catch (const NotConvergedError& e) {
      ctx.search_ok = false;
      detail += fmt("d=%.0f NOT CONVERGED (best dev %.3e); ", double(d),
                    e.best_deviation);
    }
  }
  ctx.search_seconds = elapsed(start);
  ctx.search_detail = std::move(detail);
}

CriterionResult criterion_1(Context& ctx) {
  const auto start = Clock::now();
  CriterionResult r{1, "urgleichung equals Born rule", false, 0.0, ""};
  Real max_err = 0.0;
  std::uint64_t stream = 1000;
  for (int d = 2; d <= 5; ++d) {
    const SicPovm& sic = ctx.sics.at(d);
    const UrgleichungParams params = sic_params(d);
    for (int trial = 0; trial < 1000; ++trial) {
      const std::uint64_t s = mix_seed(ctx.opts.seed, stream++);
      const DensityMatrix rho = random_density(d, s);
      const Povm d_povm = random_povm(d, 2 + trial % 4, mix_seed(s, 1));
      const ProbVector p = state_to_prob(rho, sic.ref());
      const CondProbMatrix cond =
          measurement_to_cond_matrix(d_povm, sic.ref());
      const ProbVector q = urgleichung(p, cond, params);
      for (int j = 0; j < d_povm.outcomes(); ++j) {
        const Real direct = born_probability(rho, d_povm.effect(j));
        max_err = std::max(max_err, std::abs(q[j] - direct));
      }
    }
  }
  r.seconds = elapsed(start);
  r.passed = max_err < 1e-10 && r.seconds < 60.0;
  r.detail = fmt("max|Q - tr(rho D)| = %.3e (budget 1e-10)", max_err);
  return r;
}

CriterionResult criterion_2(Context& ctx) {
  const auto start = Clock::now();
  CriterionResult r{2, "state <-> probability round trip", false, 0.0, ""};
  Real max_err = 0.0;
  std::uint64_t stream = 20000;
  for (int d = 2; d <= 5; ++d) {
    const SicPovm& sic = ctx.sics.at(d);
    for (int trial = 0; trial < 1000; ++trial) {
      const DensityMatrix rho =
          random_density(d, mix_seed(ctx.opts.seed, stream++));
      const DensityMatrix back =
          prob_to_state(state_to_prob(rho, sic.ref()), sic.ref());
      max_err = std::max(max_err, max_abs(back.matrix() - rho.matrix()));
    }
  }
  r.seconds = elapsed(start);
  r.passed = max_err < 1e-10 && r.seconds < 30.0;
  r.detail = fmt("max entrywise error = %.3e (budget 1e-10)", max_err);
  return r;
}

CriterionResult criterion_3(Context& ctx) {
  const auto start = Clock::now();
  CriterionResult r{3, "qubit state space is the Bloch ball", false, 0.0,
                    ""};
  const SicPovm tetra = qubit_tetrahedron();
  const UrgleichungParams params = sic_params(2);

  std::vector<ProbVector> pts;
  pts.reserve(10000);
  std::uint64_t stream = 30000;
  for (int i = 0; i < 10000; ++i) {
    pts.push_back(state_to_prob(
        random_density(2, mix_seed(ctx.opts.seed, stream++)), tetra.ref()));
  }
  const PointSet set = PointSet::from_prob_vectors(pts, params);
  const PairBoundsReport bounds = pair_bounds_check(set, 2, 1e-9);

  Real pure_norm_err = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const PureState psi = random_pure(2, mix_seed(ctx.opts.seed, stream++));
    const ProbVector p = state_to_prob(psi.density(), tetra.ref());
    pure_norm_err = std::max(
        pure_norm_err, std::abs(p.values().squaredNorm() - 1.0 / 3.0));
  }

  CMatrix zero_proj = CMatrix::Zero(2, 2);
  zero_proj(0, 0) = 1.0;
  CMatrix one_proj = CMatrix::Zero(2, 2);
  one_proj(1, 1) = 1.0;
  const ProbVector p0 =
      state_to_prob(DensityMatrix::validate(zero_proj), tetra.ref());
  const ProbVector p1 =
      state_to_prob(DensityMatrix::validate(one_proj), tetra.ref());
  const Real ortho_err =
      std::abs(p0.values().dot(p1.values()) - 1.0 / 6.0);

  r.seconds = elapsed(start);
  r.passed = bounds.violation_count == 0 && pure_norm_err < 1e-10 &&
             ortho_err < 1e-12;
  r.detail = fmt("violations=%.0f  | |P_pure|^2 - 1/3 | = %.3e  "
                 "|P0.P1 - 1/6| = %.3e",
                 double(bounds.violation_count), pure_norm_err, ortho_err);
  return r;
}

CriterionResult criterion_4(Context& ctx) {
  const auto start = Clock::now();
  CriterionResult r{4, "qplex inner-product bounds (d = 3, 4)", false, 0.0,
                    ""};
  bool ok = true;
  std::string detail;
  std::uint64_t stream = 40000;
  for (int d = 3; d <= 4; ++d) {
    const SicPovm& sic = ctx.sics.at(d);
    const Real lower = 1.0 / (Real(d) * (d + 1.0));
    const Real upper = 2.0 / (Real(d) * (d + 1.0));
    Real min_prod = 1.0, max_prod = 0.0, ortho_gap = 0.0;
    for (int i = 0; i < 10000; ++i) {
      const PureState a = random_pure(d, mix_seed(ctx.opts.seed, stream++));
      const PureState b = random_pure(d, mix_seed(ctx.opts.seed, stream++));
      const Real prod =
          state_to_prob(a.density(), sic.ref())
              .values()
              .dot(state_to_prob(b.density(), sic.ref()).values());
      min_prod = std::min(min_prod, prod);
      max_prod = std::max(max_prod, prod);
    }
    auto rng = make_rng(ctx.opts.seed, stream++);
    for (int i = 0; i < 100; ++i) {
      const PureState a = random_pure(d, mix_seed(ctx.opts.seed, stream++));
      const PureState b = random_orthogonal_partner(a, rng);
      const Real prod =
          state_to_prob(a.density(), sic.ref())
              .values()
              .dot(state_to_prob(b.density(), sic.ref()).values());
      ortho_gap = std::max(ortho_gap, std::abs(prod - lower));
    }
    const bool d_ok = min_prod >= lower - 1e-8 && max_prod <= upper + 1e-8 &&
                      ortho_gap < 1e-8;
    ok = ok && d_ok;
    detail += fmt("d=%.0f range=[%.6f, %.6f] ", double(d), min_prod,
                  max_prod);
    detail += fmt("ortho gap=%.3e; ", ortho_gap);
  }
  r.seconds = elapsed(start);
  r.passed = ok;
  r.detail = detail;
  return r;
}

CriterionResult criterion_5(Context& ctx) {
  const auto start = Clock::now();
  CriterionResult r{5, "dimension formula and bit ball", false, 0.0, ""};
  bool ok = true;
  std::string detail;
  std::uint64_t stream = 50000;
  for (int d = 2; d <= 5; ++d) {
    const SicPovm& sic = ctx.sics.at(d);
    std::vector<ProbVector> pts;
    for (int i = 0; i < 200; ++i) {
      pts.push_back(state_to_prob(
          random_pure(d, mix_seed(ctx.opts.seed, stream++)).density(),
          sic.ref()));
    }
    const PointSet set = PointSet::from_prob_vectors(pts, sic_params(d));
    const auto [radii, d_estimate] = radii_and_dimension(set);
    ok = ok && std::abs(d_estimate - d) < 1e-6;
    detail += fmt("d=%.0f est=%.8f; ", double(d), d_estimate);
  }

  // Bit ball: tetrahedron images of random qubit states fill the inscribed
  // ball of the N = 4 simplex, pure ones on its boundary 1/sqrt(12).
  const SicPovm tetra = qubit_tetrahedron();
  std::vector<ProbVector> pts;
  for (int i = 0; i < 2000; ++i) {
    pts.push_back(state_to_prob(
        random_density(2, mix_seed(ctx.opts.seed, stream++)), tetra.ref()));
  }
  for (int i = 0; i < 2000; ++i) {
    pts.push_back(state_to_prob(
        random_pure(2, mix_seed(ctx.opts.seed, stream++)).density(),
        tetra.ref()));
  }
  const PointSet set = PointSet::from_prob_vectors(pts, sic_params(2));
  const BitBallReport ball = bit_ball_check(set, 1e-9);
  const Real radius_err = std::abs(ball.max_distance - 1.0 / std::sqrt(12.0));
  ok = ok && ball.all_inside && radius_err < 1e-9;
  detail += fmt("ball max dist err=%.3e inside=%.0f", radius_err,
                double(ball.all_inside));
  r.seconds = elapsed(start);
  r.passed = ok;
  r.detail = detail;
  return r;
}

CriterionResult criterion_6(Context& ctx) {
  const auto start = Clock::now();
  CriterionResult r{6, "MMD set size equals the dimension", false, 0.0, ""};
  bool ok = true;
  std::string detail;
  std::uint64_t stream = 60000;
  for (int d = 2; d <= 3; ++d) {
    const SicPovm& sic = ctx.sics.at(d);
    std::vector<ProbVector> pts;
    for (int k = 0; k < d; ++k) {
      CVector e = CVector::Zero(d);
      e(k) = 1.0;
      pts.push_back(
          state_to_prob(PureState::validate(e).density(), sic.ref()));
    }
    for (int i = 0; i < 100; ++i) {
      pts.push_back(state_to_prob(
          random_pure(d, mix_seed(ctx.opts.seed, stream++)).density(),
          sic.ref()));
    }
    const PointSet set = PointSet::from_prob_vectors(pts, sic_params(d));
    const MmdResult mmd = mmd_max_set(set, 1e-7);
    ok = ok && mmd.size == d;
    detail += fmt("d=%.0f mmd=%.0f; ", double(d), double(mmd.size));
  }
  r.seconds = elapsed(start);
  r.passed = ok;
  r.detail = detail;
  return r;
}

CriterionResult criterion_7(Context& ctx) {
  const auto start = Clock::now();
  CriterionResult r{7, "orthogonal states overlap strictly", false, 0.0, ""};
  bool ok = true;
  std::string detail;
  std::uint64_t stream = 70000;

  struct Case {
    int d;
    const ReferenceMeasurement* ref;
    const char* label;
    bool sic;
  };
  const ReferenceMeasurement six = six_outcome_reference();
  std::vector<Case> cases;
  for (int d = 2; d <= 4; ++d) {
    cases.push_back({d, &ctx.sics.at(d).ref(), "sic", true});
  }
  cases.push_back({2, &six, "ic6", false});

  for (const Case& c : cases) {
    Real min_dot = std::numeric_limits<Real>::infinity();
    Real max_b_err = 0.0;
    int min_rank = 4;
    auto rng = make_rng(ctx.opts.seed, stream++);
    for (int i = 0; i < 10000; ++i) {
      const PureState a =
          random_pure(c.d, mix_seed(ctx.opts.seed, stream++));
      const PureState b = random_orthogonal_partner(a, rng);
      const DensityMatrix ra = a.density();
      const DensityMatrix rb = b.density();
      const OverlapReport rep = verify_overlap(ra, rb, *c.ref);
      min_dot = std::min(min_dot, rep.dot);
      const Real tr_prod =
          trace_product_re(ra.matrix(), rb.matrix());
      max_b_err = std::max(max_b_err, std::abs(rep.b_inner - tr_prod));
      if (rep.ic_rank_on_subspace) {
        min_rank = std::min(min_rank, *rep.ic_rank_on_subspace);
      } else {
        min_rank = 0;
      }
    }
    bool case_ok = min_dot > 0.0 && max_b_err < 1e-10 && min_rank == 4;
    if (c.sic) {
      // Orthogonal pairs pin the qplex floor for SIC references.
      const Real floor = 1.0 / (Real(c.d) * (c.d + 1.0));
      case_ok = case_ok && std::abs(min_dot - floor) < 1e-8;
    }
    ok = ok && case_ok;
    detail += c.label;
    detail += fmt("(d=%.0f): min dot=%.4e B err=%.2e rank>=%.0f; ",
                  double(c.d), min_dot, max_b_err, double(min_rank));
  }
  r.seconds = elapsed(start);
  r.passed = ok;
  r.detail = detail;
  return r;
}

CriterionResult criterion_8(Context& ctx) {
  CriterionResult r{8, "SIC search converges for d = 2..5", false, 0.0, ""};
  r.seconds = ctx.search_seconds;
  r.passed = ctx.search_ok && ctx.worst_search_deviation < 1e-8 &&
             ctx.worst_potential_gap < 1e-8 && ctx.search_seconds < 300.0;
  r.detail = ctx.search_detail +
             fmt("worst dev=%.3e worst potential gap=%.3e",
                 ctx.worst_search_deviation, ctx.worst_potential_gap);
  return r;
}

CriterionResult criterion_9(Context& ctx) {
  const auto start = Clock::now();
  CriterionResult r{9, "Gleason lab: hemisphere and POVM feasibility", false,
                    0.0, ""};
  std::uint64_t stream = 90000;

  const Eigen::Vector3d z_pole(0.0, 0.0, 1.0);
  const FrameFunction hemi_z = hemisphere_function(z_pole);
  const BasisSet big =
      BasisSet::random(2, 10000, mix_seed(ctx.opts.seed, stream++));
  const Real frame_dev = check_frame_property(hemi_z, big, 1.0);

  // 20 seeded pole directions, the z axis first.
  Real min_residual = std::numeric_limits<Real>::infinity();
  auto rng = make_rng(ctx.opts.seed, stream++);
  std::normal_distribution<Real> gauss(0.0, 1.0);
  for (int t = 0; t < 20; ++t) {
    Eigen::Vector3d pole;
    if (t == 0) {
      pole = z_pole;
    } else {
      do {
        pole = Eigen::Vector3d(gauss(rng), gauss(rng), gauss(rng));
      } while (pole.norm() < 1e-3);
      pole.normalize();
    }
    std::vector<CVector> dirs;
    dirs.reserve(500);
    for (int i = 0; i < 500; ++i) {
      dirs.push_back(
          random_pure(2, mix_seed(ctx.opts.seed, stream++)).amplitudes());
    }
    const FrameFunctionSample sample = FrameFunctionSample::from_states(
        hemisphere_function(pole), dirs, 1.0);
    min_residual = std::min(min_residual,
                            fit_regular_operator(sample).residual);
  }

  // Hemisphere assignments extended to the tetrahedron POVM (pole z):
  // effect value = f(Bloch direction of the rank-1 part) * tr(effect).
  const SicPovm tetra = qubit_tetrahedron();
  std::vector<std::pair<Povm, ProbVector>> hemi_assignments;
  for (int b = 0; b < 50; ++b) {
    const BasisSet one =
        BasisSet::random(2, 1, mix_seed(ctx.opts.seed, stream++));
    const auto& basis = one.bases().front();
    std::vector<CMatrix> raws = {basis[0] * basis[0].adjoint(),
                                 basis[1] * basis[1].adjoint()};
    RVector q(2);
    q << hemi_z(basis[0]), hemi_z(basis[1]);
    hemi_assignments.emplace_back(Povm::validate(raws),
                                  ProbVector::validate(q));
  }
  RVector tetra_q(4);
  for (int k = 0; k < 4; ++k) {
    tetra_q(k) = hemi_z(tetra.states()[static_cast<size_t>(k)]) *
                 tetra.povm().effect(k).trace();
  }
  hemi_assignments.emplace_back(tetra.povm(),
                                ProbVector::validate(tetra_q));
  const FeasibilityResult hemi_feas =
      povm_gleason_feasibility(hemi_assignments);

  // Plant-and-recover over random POVMs.
  bool planted_ok = true;
  Real worst_recovery = 0.0;
  for (int inst = 0; inst < 50; ++inst) {
    const DensityMatrix hidden =
        random_density(2, mix_seed(ctx.opts.seed, stream++));
    std::vector<std::pair<Povm, ProbVector>> assignments;
    for (int p = 0; p < 20; ++p) {
      const Povm povm =
          random_povm(2, 3 + p % 3, mix_seed(ctx.opts.seed, stream++));
      RVector q(povm.outcomes());
      for (int k = 0; k < povm.outcomes(); ++k) {
        q(k) = born_probability(hidden, povm.effect(k));
      }
      assignments.emplace_back(povm, ProbVector::validate(q));
    }
    const FeasibilityResult feas = povm_gleason_feasibility(assignments);
    const Real recovery = max_abs(feas.best_op - hidden.matrix());
    worst_recovery = std::max(worst_recovery, recovery);
    planted_ok = planted_ok && feas.feasible && recovery < 1e-8;
  }

  r.seconds = elapsed(start);
  r.passed = frame_dev < 1e-12 && min_residual > 0.1 &&
             !hemi_feas.feasible && planted_ok;
  r.detail = fmt("frame dev=%.3e min fit residual=%.4f ", frame_dev,
                 min_residual) +
             fmt("hemisphere feasible=%.0f planted worst recovery=%.3e",
                 double(hemi_feas.feasible), worst_recovery);
  return r;
}

CriterionResult criterion_10(Context& ctx) {
  const auto start = Clock::now();
  CriterionResult r{10, "classical limit is the Law of Total Probability",
                    false, 0.0, ""};
  bool bitwise = true;
  std::uint64_t stream = 100000;
  for (int inst = 0; inst < 1000; ++inst) {
    auto rng = make_rng(ctx.opts.seed, stream++);
    std::uniform_int_distribution<int> n_dist(2, 6);
    std::uniform_int_distribution<int> m_dist(2, 5);
    std::uniform_real_distribution<Real> unif(0.01, 1.0);
    const int n = n_dist(rng);
    const int m = m_dist(rng);
    RVector p(n);
    for (int i = 0; i < n; ++i) p(i) = unif(rng);
    p /= p.sum();
    RMatrix c(m, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < m; ++j) c(j, i) = unif(rng);
      c.col(i) /= c.col(i).sum();
    }
    const ProbVector pv = ProbVector::validate(p);
    const CondProbMatrix cm = CondProbMatrix::validate(c);
    const ProbVector q =
        urgleichung(pv, cm, UrgleichungParams::validated(1.0, 0.0, n));
    // Independent Law of Total Probability oracle, same summation order.
    for (int j = 0; j < m; ++j) {
      Real acc = 0.0;
      for (int i = 0; i < n; ++i) acc += p(i) * c(j, i);
      if (acc != q[j]) bitwise = false;
    }
  }
  r.seconds = elapsed(start);
  r.passed = bitwise;
  r.detail = bitwise ? "bitwise equal on 1000 instances"
                     : "bitwise mismatch found";
  return r;
}

void emit(std::ostream* progress, const CriterionResult& r) {
  if (!progress) return;
  (*progress) << (r.passed ? "[PASS] " : "[FAIL] ") << r.index << ". "
              << r.name << " — " << r.detail << "\n";
  progress->flush();
}

}  // namespace

bool all_passed(const std::vector<CriterionResult>& results) {
  for (const auto& r : results) {
    if (!r.passed) return false;
  }
  return true;
}

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options,
                                            std::ostream* progress) {
  Context ctx;
  ctx.opts = options;
  run_searches(ctx);

  std::vector<CriterionResult> results;
  results.push_back(criterion_1(ctx));
  emit(progress, results.back());
  results.push_back(criterion_2(ctx));
  emit(progress, results.back());
  results.push_back(criterion_3(ctx));
  emit(progress, results.back());
  results.push_back(criterion_4(ctx));
  emit(progress, results.back());
  results.push_back(criterion_5(ctx));
  emit(progress, results.back());
  results.push_back(criterion_6(ctx));
  emit(progress, results.back());
  results.push_back(criterion_7(ctx));
  emit(progress, results.back());
  results.push_back(criterion_8(ctx));
  emit(progress, results.back());
  results.push_back(criterion_9(ctx));
  emit(progress, results.back());
  results.push_back(criterion_10(ctx));
  emit(progress, results.back());
  return results;
}

}  // namespace qplexkit
