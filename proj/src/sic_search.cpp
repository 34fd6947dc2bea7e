#include "qplexkit/sic_search.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <thread>

#include <Eigen/SVD>

#include "qplexkit/random.hpp"

namespace qplexkit {

namespace {

// Applies X^p Z^q in O(d): (D psi)_j = w^{q ((j-p) mod d)} psi_{(j-p) mod d}.
// Phases w^{qk} are looked up in a precomputed root table.
struct Displacement {
  int p;
  int q;
};

struct WhContext {
  int d;
  std::vector<Displacement> nonidentity;
  std::vector<Cplx> roots;  // roots[k] = exp(2 pi i k / d)

  explicit WhContext(int d) : d(d) {
    for (int p = 0; p < d; ++p) {
      for (int q = 0; q < d; ++q) {
        if (p != 0 || q != 0) nonidentity.push_back({p, q});
      }
    }
    roots.resize(static_cast<size_t>(d));
    for (int k = 0; k < d; ++k) {
      const Real angle = 2.0 * std::numbers::pi * k / d;
      roots[static_cast<size_t>(k)] = Cplx(std::cos(angle), std::sin(angle));
    }
  }

  void apply(const Displacement& dis, const CVector& psi, CVector& out) const {
    for (int j = 0; j < d; ++j) {
      const int src = (j - dis.p % d + d) % d;
      out(j) = roots[static_cast<size_t>((dis.q * src) % d)] * psi(src);
    }
  }

  void apply_adjoint(const Displacement& dis, const CVector& psi,
                     CVector& out) const {
    for (int m = 0; m < d; ++m) {
      const int src = (m + dis.p) % d;
      out(m) = std::conj(roots[static_cast<size_t>((dis.q * m) % d)]) *
               psi(src);
    }
  }

  Real potential(const CVector& psi, CVector& scratch) const {
    Real f = 0.0;
    for (const Displacement& dis : nonidentity) {
      apply(dis, psi, scratch);
      const Real ov = std::norm(psi.dot(scratch));
      f += ov * ov;
    }
    return f;
  }

  // grad_k = dF/d(Re psi_k) + i dF/d(Im psi_k)
  //        = sum_D 4 |c_D|^2 (conj(c_D) D psi + c_D D^dag psi)_k.
  void gradient(const CVector& psi, CVector& grad, CVector& fwd,
                CVector& bwd) const {
    grad.setZero();
    for (const Displacement& dis : nonidentity) {
      apply(dis, psi, fwd);
      apply_adjoint(dis, psi, bwd);
      const Cplx c = psi.dot(fwd);
      const Real mag2 = std::norm(c);
      grad += 4.0 * mag2 * (std::conj(c) * fwd + c * bwd);
    }
  }

  // Centered objective sum_D (|c_D|^2 - 1/(d+1))^2. On the unit sphere
  // sum_D |c_D|^2 is the constant d - 1, so this equals the frame
  // potential minus its minimum — but it reaches zero at a SIC instead of
  // (d^2-1)/(d+1)^2, which keeps full floating-point resolution available
  // to the line search all the way down.
  Real residual(const CVector& psi, CVector& scratch) const {
    const Real target = 1.0 / (d + 1.0);
    Real g = 0.0;
    for (const Displacement& dis : nonidentity) {
      apply(dis, psi, scratch);
      const Real dev = std::norm(psi.dot(scratch)) - target;
      g += dev * dev;
    }
    return g;
  }

  void residual_gradient(const CVector& psi, CVector& grad, CVector& fwd,
                         CVector& bwd) const {
    const Real target = 1.0 / (d + 1.0);
    grad.setZero();
    for (const Displacement& dis : nonidentity) {
      apply(dis, psi, fwd);
      apply_adjoint(dis, psi, bwd);
      const Cplx c = psi.dot(fwd);
      const Real dev = std::norm(c) - target;
      grad += 4.0 * dev * (std::conj(c) * fwd + c * bwd);
    }
  }
};

struct RestartOutcome {
  CVector fiducial;
  Real potential = 0.0;
  Real deviation = 0.0;  // orbit equiangularity deviation
  int iterations = 0;
  bool grad_converged = false;
  bool sic = false;
};

// Gauss-Newton polish of the overlap residual system. Gradient descent
// alone stalls near 1e-9 in d = 3, where the SIC solutions form a
// continuous family and the potential valley is degenerate; a few
// min-norm Gauss-Newton steps recover the remaining six orders of
// magnitude. Runs only once a restart has already descended into a basin.
void gauss_newton_polish(const WhContext& ctx, CVector& psi,
                         CVector& scratch) {
  const int d = ctx.d;
  const int m = static_cast<int>(ctx.nonidentity.size());
  const Real target = 1.0 / (d + 1.0);
  RVector r(m + 1);
  RMatrix jac(m + 1, 2 * d);
  CVector fwd(d), bwd(d);
  Real best_g = ctx.residual(psi, scratch);
  CVector best_psi = psi;
  for (int it = 0; it < 30; ++it) {
    for (int k = 0; k < m; ++k) {
      ctx.apply(ctx.nonidentity[static_cast<size_t>(k)], psi, fwd);
      ctx.apply_adjoint(ctx.nonidentity[static_cast<size_t>(k)], psi, bwd);
      const Cplx c = psi.dot(fwd);
      r(k) = std::norm(c) - target;
      for (int i = 0; i < d; ++i) {
        const Cplx ghat = 2.0 * (std::conj(c) * fwd(i) + c * bwd(i));
        jac(k, i) = ghat.real();
        jac(k, d + i) = ghat.imag();
      }
    }
    r(m) = psi.squaredNorm() - 1.0;
    for (int i = 0; i < d; ++i) {
      jac(m, i) = 2.0 * psi(i).real();
      jac(m, d + i) = 2.0 * psi(i).imag();
    }
    Eigen::JacobiSVD<RMatrix> svd(jac,
                                  Eigen::ComputeThinU | Eigen::ComputeThinV);
    svd.setThreshold(1e-8);
    const RVector dx = svd.solve(-r);
    for (int i = 0; i < d; ++i) psi(i) += Cplx(dx(i), dx(d + i));
    psi.normalize();
    const Real g = ctx.residual(psi, scratch);
    if (g < best_g) {
      best_g = g;
      best_psi = psi;
    } else {
      break;  // no further progress; keep the best iterate
    }
    if (g < 1e-28) break;
  }
  psi = best_psi;
}

RestartOutcome run_restart(const WhContext& ctx, const SearchConfig& cfg,
                           int restart_index) {
  const int d = ctx.d;
  auto rng = make_rng(cfg.seed, static_cast<std::uint64_t>(restart_index));
  CVector psi = gaussian_complex_vector(d, rng);
  psi.normalize();

  CVector scratch(d), fwd(d), bwd(d), grad(d), tangent(d), prev_tangent(d),
      candidate(d), step_diff(d);
  Real g = ctx.residual(psi, scratch);
  ctx.residual_gradient(psi, grad, fwd, bwd);
  tangent = grad - psi.dot(grad).real() * psi;

  // Barzilai-Borwein steps under a nonmonotone (Grippo window)
  // backtracking line search; monotone Armijo defeats BB on the
  // ill-conditioned d = 3 landscape, where the SIC solution set is a
  // continuous family.
  constexpr int kWindow = 10;
  std::array<Real, kWindow> recent;
  recent.fill(g);
  Real bb_step = 1.0;
  int iter = 0;
  bool grad_converged = false;
  for (; iter < cfg.max_iters; ++iter) {
    const Real gnorm = tangent.norm();
    if (gnorm < cfg.grad_tol) {
      grad_converged = true;
      break;
    }
    if (g < 1e-12) break;  // deep inside a basin; the polish takes over
    const Real g_ref = *std::max_element(recent.begin(), recent.end());
    Real t = bb_step;
    Real g_new = g;
    bool accepted = false;
    for (int ls = 0; ls < 60; ++ls) {
      candidate = psi - t * tangent;
      candidate.normalize();
      g_new = ctx.residual(candidate, scratch);
      if (g_new <= g_ref - 1e-4 * t * gnorm * gnorm) {
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) break;  // stagnated at line-search resolution

    step_diff = candidate - psi;
    psi.swap(candidate);
    g = g_new;
    recent[static_cast<size_t>(iter % kWindow)] = g;
    prev_tangent = tangent;
    ctx.residual_gradient(psi, grad, fwd, bwd);
    tangent = grad - psi.dot(grad).real() * psi;

    const CVector y = tangent - prev_tangent;
    const Real ss = step_diff.squaredNorm();
    const Real sy = std::abs(step_diff.dot(y).real());
    const Real yy = y.squaredNorm();
    // Alternate the two BB step estimates.
    const Real candidate_step =
        (iter % 2 == 0) ? (sy > 0.0 ? ss / sy : t) : (yy > 0.0 ? sy / yy : t);
    bb_step = std::isfinite(candidate_step)
                  ? std::clamp(candidate_step, 1e-9, 1e3)
                  : t;
  }

  if (g < 1e-6) gauss_newton_polish(ctx, psi, scratch);

  RestartOutcome out;
  out.fiducial = psi;
  out.potential = ctx.potential(psi, scratch);
  out.iterations = iter;
  out.grad_converged = grad_converged;
  try {
    const SicPovm sic = wh_sic_from_fiducial(PureState::normalized(psi), d);
    out.deviation = sic.equiangularity_deviation();
    out.sic = true;
  } catch (const NotEquiangularError& e) {
    out.deviation = e.max_deviation;
    out.sic = false;
  }
  return out;
}

}  // namespace

Real frame_potential(const CVector& psi, int d) {
  if (psi.size() != d) throw DimensionMismatchError("fiducial size != d");
  const WhContext ctx(d);
  CVector scratch(d);
  return ctx.potential(psi, scratch);
}

Real frame_potential(const PureState& fiducial, int d) {
  return frame_potential(fiducial.amplitudes(), d);
}

CVector frame_potential_gradient(const CVector& psi, int d) {
  if (psi.size() != d) throw DimensionMismatchError("fiducial size != d");
  const WhContext ctx(d);
  CVector grad(d), fwd(d), bwd(d);
  ctx.gradient(psi, grad, fwd, bwd);
  return grad;
}

EquiangularityReport verify_equiangular(const std::vector<CVector>& states,
                                        int d, Real tolerance) {
  const Real target = 1.0 / (d + 1.0);
  EquiangularityReport report;
  for (size_t m = 0; m < states.size(); ++m) {
    for (size_t n = m + 1; n < states.size(); ++n) {
      const Real dev = std::abs(std::norm(states[m].dot(states[n])) - target);
      if (dev > report.max_deviation) {
        report.max_deviation = dev;
        report.worst_m = static_cast<int>(m);
        report.worst_n = static_cast<int>(n);
      }
    }
  }
  report.within_tolerance = report.max_deviation <= tolerance;
  return report;
}

EquiangularityReport verify_equiangular(const Povm& candidate,
                                        Real tolerance) {
  std::vector<CVector> states;
  states.reserve(static_cast<size_t>(candidate.outcomes()));
  for (const Effect& e : candidate.effects()) {
    const int top = e.dim() - 1;
    states.push_back(e.op().eigenvectors().col(top));
  }
  return verify_equiangular(states, candidate.dim(), tolerance);
}

std::pair<SicPovm, SearchReport> find_sic_fiducial(const SearchConfig& cfg) {
  if (cfg.d < 2) throw DimensionMismatchError("dimension must be >= 2");
  if (cfg.restarts < 1 || cfg.max_iters < 1 || cfg.grad_tol <= 0.0) {
    throw Error("search config requires restarts >= 1, max_iters >= 1, "
                "grad_tol > 0");
  }
  const WhContext ctx(cfg.d);

  std::vector<RestartOutcome> outcomes(static_cast<size_t>(cfg.restarts));
  const int workers =
      std::max(1, std::min(cfg.threads, cfg.restarts));
  if (workers == 1) {
    for (int r = 0; r < cfg.restarts; ++r) {
      outcomes[static_cast<size_t>(r)] = run_restart(ctx, cfg, r);
    }
  } else {
    std::atomic<int> next{0};
    auto worker = [&] {
      for (int r = next.fetch_add(1); r < cfg.restarts;
           r = next.fetch_add(1)) {
        outcomes[static_cast<size_t>(r)] = run_restart(ctx, cfg, r);
      }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  // Merge: lowest potential wins, ties by lowest restart index.
  int winner = -1;
  for (int r = 0; r < cfg.restarts; ++r) {
    const RestartOutcome& o = outcomes[static_cast<size_t>(r)];
    if (!o.sic) continue;
    if (winner < 0 ||
        o.potential < outcomes[static_cast<size_t>(winner)].potential) {
      winner = r;
    }
  }

  const Real theoretical =
      (static_cast<Real>(cfg.d) * cfg.d - 1.0) /
      ((cfg.d + 1.0) * (cfg.d + 1.0));

  if (winner < 0) {
    Real best_dev = std::numeric_limits<Real>::infinity();
    Real best_pot = std::numeric_limits<Real>::infinity();
    for (const RestartOutcome& o : outcomes) {
      best_dev = std::min(best_dev, o.deviation);
      best_pot = std::min(best_pot, o.potential);
    }
    throw NotConvergedError(best_dev, best_pot);
  }

  const RestartOutcome& best = outcomes[static_cast<size_t>(winner)];
  SicPovm sic = wh_sic_from_fiducial(PureState::normalized(best.fiducial),
                                     cfg.d);
  SearchReport report;
  report.best_potential = best.potential;
  report.theoretical_minimum = theoretical;
  report.achieved_equiangularity_deviation = best.deviation;
  report.iterations_used = best.iterations;
  report.restart_index = winner;
  report.converged = true;
  return {std::move(sic), report};
}

}  // namespace qplexkit
