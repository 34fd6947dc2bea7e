// qplexkit — probabilistic representations of finite-dimensional quantum
// theory: SIC reference measurements, the urgleichung, qplex geometry,
// frame-function checks, and the orthogonal-states overlap theorem.
//
// Exit codes: 0 success, 1 finding of violation, 2 usage error,
// 3 numerical failure.

#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qplexkit/acceptance.hpp"
#include "qplexkit/gleason.hpp"
#include "qplexkit/io.hpp"
#include "qplexkit/overlap.hpp"
#include "qplexkit/qplex.hpp"
#include "qplexkit/random.hpp"

namespace {

using namespace qplexkit;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitViolation = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

int thread_cap() {
  if (const char* env = std::getenv("QPLEXKIT_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  return 1;
}

void write_or_print(const std::string& out_path, const std::string& content) {
  if (out_path.empty()) {
    std::cout << content;
  } else {
    io::save_text_file(out_path, content);
  }
}

ReferenceMeasurement load_reference(const std::string& path) {
  const json j = io::load_json_file(path);
  if (j.contains("fiducial")) {
    return io::sic_fixture_from_json(j).ref();
  }
  return ReferenceMeasurement::from_povm(io::povm_from_json(j));
}

Eigen::Vector3d parse_pole(const std::string& text) {
  std::stringstream ss(text);
  std::string cell;
  std::vector<double> vals;
  while (std::getline(ss, cell, ',')) vals.push_back(std::stod(cell));
  if (vals.size() != 3) {
    throw CLI::ValidationError("--pole", "expected three comma-separated "
                                         "components");
  }
  Eigen::Vector3d pole(vals[0], vals[1], vals[2]);
  if (pole.norm() == 0.0) {
    throw CLI::ValidationError("--pole", "pole must be nonzero");
  }
  return pole.normalized();
}

struct SicFindArgs {
  int d = 2;
  int restarts = 32;
  int max_iters = 20000;
  std::uint64_t seed = 0;
  std::string out;
};

int run_sic_find(const SicFindArgs& args) {
  SearchConfig cfg;
  cfg.d = args.d;
  cfg.restarts = args.restarts;
  cfg.max_iters = args.max_iters;
  cfg.seed = args.seed;
  cfg.threads = thread_cap();
  auto [sic, report] = find_sic_fiducial(cfg);

  // The fiducial of the orbit is its (p, q) = (0, 0) state.
  json fixture = io::sic_fixture_to_json(sic.states().front(), cfg.d);
  fixture["seed"] = args.seed;
  fixture["report"] = {
      {"best_potential", report.best_potential},
      {"theoretical_minimum", report.theoretical_minimum},
      {"equiangularity_deviation", report.achieved_equiangularity_deviation},
      {"iterations_used", report.iterations_used},
      {"restart_index", report.restart_index},
      {"converged", report.converged}};
  write_or_print(args.out, fixture.dump(2) + "\n");
  return kExitOk;
}

int run_sic_verify(const std::string& path) {
  // Assess the fixture as a candidate: build the orbit without the SIC
  // validation so an out-of-tolerance fiducial is reported, not rejected.
  const auto [fiducial, d] =
      io::sic_fixture_fiducial(io::load_json_file(path));
  const std::vector<CVector> orbit =
      wh_orbit(PureState::validate(fiducial), d);
  const EquiangularityReport report = verify_equiangular(orbit, d);
  const json out = {{"d", d},
                    {"max_deviation", report.max_deviation},
                    {"worst_pair", {report.worst_m, report.worst_n}},
                    {"within_tolerance", report.within_tolerance}};
  std::cout << out.dump(2) << "\n";
  return report.within_tolerance ? kExitOk : kExitViolation;
}

int run_rep_to_prob(const std::string& state_path, const std::string& ref_path,
                    const std::string& out) {
  const DensityMatrix rho =
      validate_density(io::operator_from_json(io::load_json_file(state_path)));
  const ReferenceMeasurement ref = load_reference(ref_path);
  write_or_print(out, io::prob_to_csv(state_to_prob(rho, ref)));
  return kExitOk;
}

int run_rep_to_state(const std::string& prob_path, const std::string& ref_path,
                     const std::string& out) {
  const ProbVector p = io::prob_from_csv(io::load_text_file(prob_path));
  const ReferenceMeasurement ref = load_reference(ref_path);
  const DensityMatrix rho = prob_to_state(p, ref);
  write_or_print(out, io::operator_to_json(rho.matrix()).dump(2) + "\n");
  return kExitOk;
}

int run_rep_cond(const std::string& povm_path, const std::string& ref_path,
                 const std::string& out) {
  const Povm d_povm = io::povm_from_json(io::load_json_file(povm_path));
  const ReferenceMeasurement ref = load_reference(ref_path);
  write_or_print(out, io::cond_to_csv(measurement_to_cond_matrix(d_povm, ref)));
  return kExitOk;
}

int run_born_urgleichung(const std::string& prob_path,
                         const std::string& ref_path,
                         const std::string& povm_path,
                         const std::string& out) {
  const ProbVector p = io::prob_from_csv(io::load_text_file(prob_path));
  const ReferenceMeasurement ref = load_reference(ref_path);
  const Povm d_povm = io::povm_from_json(io::load_json_file(povm_path));
  const CondProbMatrix cond = measurement_to_cond_matrix(d_povm, ref);
  const ProbVector q = urgleichung(p, cond, sic_params(ref.dim()));
  write_or_print(out, io::prob_to_csv(q));
  return kExitOk;
}

int run_born_mu(const std::string& prob_path, const std::string& ref_path,
                const std::string& povm_path, const std::string& out) {
  const ProbVector p = io::prob_from_csv(io::load_text_file(prob_path));
  const ReferenceMeasurement ref = load_reference(ref_path);
  const Povm d_povm = io::povm_from_json(io::load_json_file(povm_path));
  write_or_print(out, io::prob_to_csv(general_mu(p, d_povm, ref)));
  return kExitOk;
}

struct QplexCheckArgs {
  std::string points_path;
  int d = 2;
  double alpha = 3.0;
  double beta = 0.5;
  double tolerance = 1e-9;
  std::uint64_t seed = 0;
  std::string out;
};

int run_qplex_check(const QplexCheckArgs& args) {
  const std::string text = io::load_text_file(args.points_path);
  std::vector<ProbVector> pts;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    if (line.empty()) continue;
    pts.push_back(io::prob_from_csv(line));
  }
  const UrgleichungParams params = UrgleichungParams::validated(
      args.alpha, args.beta, args.d * args.d);
  const PointSet set = PointSet::from_prob_vectors(pts, params);

  const PairBoundsReport bounds = pair_bounds_check(set, args.d,
                                                    args.tolerance);
  const auto [radii, d_estimate] = radii_and_dimension(set);
  json mmd_json;
  try {
    const MmdResult mmd = mmd_max_set(set);
    mmd_json = mmd.size;
  } catch (const TooManyCandidatesError& e) {
    mmd_json = json{{"error", e.what()}};
  }

  json violations = json::array();
  for (const PairViolation& v : bounds.violations) {
    violations.push_back({{"i", v.i},
                          {"j", v.j},
                          {"product", v.product},
                          {"bound", v.lower ? "lower" : "upper"}});
  }
  const json out = {
      {"seed", args.seed},
      {"points", set.size()},
      {"violations", violations},
      {"violation_count", bounds.violation_count},
      {"min_product", bounds.min_product},
      {"max_product", bounds.max_product},
      {"radii",
       {{"r_in", radii.r_in}, {"r_mid", radii.r_mid}, {"r_out", radii.r_out}}},
      {"d_estimate", d_estimate},
      {"mmd_size", mmd_json}};
  write_or_print(args.out, out.dump(2) + "\n");
  return bounds.violation_count == 0 ? kExitOk : kExitViolation;
}

int run_overlap_check(const std::string& a_path, const std::string& b_path,
                      const std::string& ref_path, const std::string& out) {
  const DensityMatrix a =
      validate_density(io::operator_from_json(io::load_json_file(a_path)));
  const DensityMatrix b =
      validate_density(io::operator_from_json(io::load_json_file(b_path)));
  const ReferenceMeasurement ref = load_reference(ref_path);
  const OverlapReport report = verify_overlap(a, b, ref);
  json j = {{"dot", report.dot}, {"b_inner", report.b_inner}};
  if (report.ic_rank_on_subspace) {
    j["ic_rank_on_subspace"] = *report.ic_rank_on_subspace;
  }
  write_or_print(out, j.dump(2) + "\n");
  return kExitOk;
}

struct GleasonHemisphereArgs {
  std::string pole = "0,0,1";
  int bases = 10000;
  int fit_samples = 500;
  std::uint64_t seed = 0;
  std::string out;
};

int run_gleason_hemisphere(const GleasonHemisphereArgs& args) {
  const Eigen::Vector3d pole = parse_pole(args.pole);
  const FrameFunction f = hemisphere_function(pole);

  const BasisSet basis_set = BasisSet::random(2, args.bases, args.seed);
  const Real frame_deviation = check_frame_property(f, basis_set, 1.0);

  std::vector<CVector> dirs;
  dirs.reserve(static_cast<size_t>(args.fit_samples));
  for (int i = 0; i < args.fit_samples; ++i) {
    dirs.push_back(random_pure(2, mix_seed(args.seed, 7000 + i)).amplitudes());
  }
  const Real fit_residual =
      fit_regular_operator(FrameFunctionSample::from_states(f, dirs, 1.0))
          .residual;

  // POVM extension: hemisphere values on von Neumann bases plus the
  // tetrahedron with effect value f(direction) * tr(effect). A
  // non-normalized extension is unrealizable outright.
  std::vector<std::pair<Povm, ProbVector>> assignments;
  bool extension_normalized = true;
  for (int b = 0; b < 50; ++b) {
    const BasisSet one = BasisSet::random(2, 1, mix_seed(args.seed, 8000 + b));
    const auto& basis = one.bases().front();
    std::vector<CMatrix> raws = {basis[0] * basis[0].adjoint(),
                                 basis[1] * basis[1].adjoint()};
    RVector q(2);
    q << f(basis[0]), f(basis[1]);
    assignments.emplace_back(Povm::validate(raws), ProbVector::validate(q));
  }
  const SicPovm tetra = qubit_tetrahedron();
  RVector tetra_q(4);
  for (int k = 0; k < 4; ++k) {
    tetra_q(k) = f(tetra.states()[static_cast<size_t>(k)]) *
                 tetra.povm().effect(k).trace();
  }
  bool povm_feasible = false;
  if (std::abs(tetra_q.sum() - 1.0) <= 1e-9) {
    assignments.emplace_back(tetra.povm(), ProbVector::validate(tetra_q));
    povm_feasible = povm_gleason_feasibility(assignments).feasible;
  } else {
    extension_normalized = false;  // violates normalization: no state fits
  }

  const json out = {{"seed", args.seed},
                    {"pole", {pole(0), pole(1), pole(2)}},
                    {"frame_deviation", frame_deviation},
                    {"fit_residual", fit_residual},
                    {"povm_feasible", povm_feasible},
                    {"povm_extension_normalized", extension_normalized}};
  write_or_print(args.out, out.dump(2) + "\n");
  return kExitOk;
}

struct GleasonFitArgs {
  std::string state_path;
  int samples = 500;
  std::uint64_t seed = 0;
  std::string out;
};

int run_gleason_fit(const GleasonFitArgs& args) {
  const DensityMatrix rho = validate_density(
      io::operator_from_json(io::load_json_file(args.state_path)));
  const int d = rho.dim();
  const FrameFunction born = [&rho](const CVector& x) {
    return std::real(x.dot(rho.matrix() * x));
  };
  std::vector<CVector> dirs;
  dirs.reserve(static_cast<size_t>(args.samples));
  for (int i = 0; i < args.samples; ++i) {
    dirs.push_back(random_pure(d, mix_seed(args.seed, 7500 + i)).amplitudes());
  }
  const RegularFit fit =
      fit_regular_operator(FrameFunctionSample::from_states(born, dirs, 1.0));
  const json out = {{"seed", args.seed},
                    {"residual", fit.residual},
                    {"recovered", io::operator_to_json(fit.op.matrix())},
                    {"recovery_error", max_abs(fit.op.matrix() -
                                               rho.matrix())}};
  write_or_print(args.out, out.dump(2) + "\n");
  return kExitOk;
}

int run_report_acceptance(std::uint64_t seed, const std::string& out) {
  AcceptanceOptions opts;
  opts.seed = seed;
  opts.threads = thread_cap();
  const std::vector<CriterionResult> results =
      run_acceptance(opts, &std::cerr);
  json criteria = json::array();
  for (const CriterionResult& r : results) {
    criteria.push_back({{"index", r.index},
                        {"name", r.name},
                        {"passed", r.passed},
                        {"detail", r.detail}});
  }
  const json summary = {{"seed", seed},
                        {"criteria", criteria},
                        {"all_passed", all_passed(results)}};
  write_or_print(out, summary.dump(2) + "\n");
  return all_passed(results) ? kExitOk : kExitViolation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qplexkit — quantum theory as probability: SIC references, "
               "the urgleichung, qplex geometry, Gleason checks"};
  app.require_subcommand(1);

  // sic
  auto* sic = app.add_subcommand("sic", "SIC fiducial search and checks");
  sic->require_subcommand(1);
  SicFindArgs sic_find_args;
  auto* sic_find = sic->add_subcommand("find", "minimize the frame potential");
  sic_find->add_option("--d", sic_find_args.d, "Hilbert space dimension")
      ->check(CLI::Range(2, 8));
  sic_find->add_option("--restarts", sic_find_args.restarts)
      ->check(CLI::PositiveNumber);
  sic_find->add_option("--max-iters", sic_find_args.max_iters)
      ->check(CLI::PositiveNumber);
  sic_find->add_option("--seed", sic_find_args.seed);
  sic_find->add_option("--out", sic_find_args.out, "fixture JSON path");

  std::string sic_verify_path;
  auto* sic_verify =
      sic->add_subcommand("verify", "equiangularity deviation of a fixture");
  sic_verify->add_option("fixture", sic_verify_path)
      ->required()
      ->check(CLI::ExistingFile);

  // rep
  auto* rep = app.add_subcommand("rep", "state <-> probability maps");
  rep->require_subcommand(1);
  std::string rep_state, rep_prob, rep_ref, rep_povm, rep_out;
  auto* to_prob = rep->add_subcommand("to-prob", "P(k) = tr(rho H_k)");
  to_prob->add_option("--state", rep_state)->required()
      ->check(CLI::ExistingFile);
  to_prob->add_option("--ref", rep_ref)->required()->check(CLI::ExistingFile);
  to_prob->add_option("--out", rep_out);
  auto* to_state = rep->add_subcommand("to-state", "reconstruct the state");
  to_state->add_option("--prob", rep_prob)->required()
      ->check(CLI::ExistingFile);
  to_state->add_option("--ref", rep_ref)->required()->check(CLI::ExistingFile);
  to_state->add_option("--out", rep_out);
  auto* cond = rep->add_subcommand("cond", "conditional matrix P(D|H)");
  cond->add_option("--povm", rep_povm)->required()->check(CLI::ExistingFile);
  cond->add_option("--ref", rep_ref)->required()->check(CLI::ExistingFile);
  cond->add_option("--out", rep_out);

  // born
  auto* born = app.add_subcommand("born", "quantum marginalization");
  born->require_subcommand(1);
  std::string born_prob, born_ref, born_povm, born_out;
  auto* born_urg = born->add_subcommand(
      "urgleichung", "Q(D_j) = sum_i [alpha P_i - beta] P(D_j|H_i)");
  born_urg->add_option("--prob", born_prob)->required()
      ->check(CLI::ExistingFile);
  born_urg->add_option("--ref", born_ref)->required()
      ->check(CLI::ExistingFile);
  born_urg->add_option("--povm", born_povm)->required()
      ->check(CLI::ExistingFile);
  born_urg->add_option("--out", born_out);
  auto* born_mu =
      born->add_subcommand("mu", "B-matrix form for any IC reference");
  born_mu->add_option("--prob", born_prob)->required()
      ->check(CLI::ExistingFile);
  born_mu->add_option("--ref", born_ref)->required()
      ->check(CLI::ExistingFile);
  born_mu->add_option("--povm", born_povm)->required()
      ->check(CLI::ExistingFile);
  born_mu->add_option("--out", born_out);

  // qplex
  auto* qplex = app.add_subcommand("qplex", "state-space geometry checks");
  qplex->require_subcommand(1);
  QplexCheckArgs qplex_args;
  auto* qplex_check = qplex->add_subcommand("check", "inner-product bounds, "
                                                     "radii, MMD size");
  qplex_check->add_option("--points", qplex_args.points_path)
      ->required()
      ->check(CLI::ExistingFile);
  qplex_check->add_option("--d", qplex_args.d)->check(CLI::Range(2, 8));
  qplex_check->add_option("--alpha", qplex_args.alpha);
  qplex_check->add_option("--beta", qplex_args.beta);
  qplex_check->add_option("--tol", qplex_args.tolerance);
  qplex_check->add_option("--seed", qplex_args.seed);
  qplex_check->add_option("--out", qplex_args.out);

  // overlap
  auto* overlap = app.add_subcommand("overlap", "orthogonal-states overlap");
  overlap->require_subcommand(1);
  std::string overlap_a, overlap_b, overlap_ref, overlap_out;
  auto* overlap_check = overlap->add_subcommand("check", "dot and B-inner "
                                                         "products");
  overlap_check->add_option("--state-a", overlap_a)->required()
      ->check(CLI::ExistingFile);
  overlap_check->add_option("--state-b", overlap_b)->required()
      ->check(CLI::ExistingFile);
  overlap_check->add_option("--ref", overlap_ref)->required()
      ->check(CLI::ExistingFile);
  overlap_check->add_option("--out", overlap_out);

  // gleason
  auto* gleason = app.add_subcommand("gleason", "frame-function lab");
  gleason->require_subcommand(1);
  GleasonHemisphereArgs hemi_args;
  auto* hemisphere = gleason->add_subcommand(
      "hemisphere", "the d = 2 counterexample, quantitatively");
  hemisphere->add_option("--pole", hemi_args.pole, "unit 3-vector x,y,z");
  hemisphere->add_option("--bases", hemi_args.bases)
      ->check(CLI::PositiveNumber);
  hemisphere->add_option("--samples", hemi_args.fit_samples)
      ->check(CLI::PositiveNumber);
  hemisphere->add_option("--seed", hemi_args.seed);
  hemisphere->add_option("--out", hemi_args.out);
  GleasonFitArgs fit_args;
  auto* gfit = gleason->add_subcommand("fit", "regular-operator fit of a "
                                              "Born frame function");
  gfit->add_option("--state", fit_args.state_path)->required()
      ->check(CLI::ExistingFile);
  gfit->add_option("--samples", fit_args.samples)->check(CLI::PositiveNumber);
  gfit->add_option("--seed", fit_args.seed);
  gfit->add_option("--out", fit_args.out);

  // report
  auto* report = app.add_subcommand("report", "aggregate reports");
  report->require_subcommand(1);
  std::uint64_t report_seed = 0;
  std::string report_out;
  auto* report_acceptance =
      report->add_subcommand("acceptance", "run every acceptance criterion");
  report_acceptance->add_option("--seed", report_seed);
  report_acceptance->add_option("--out", report_out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return kExitOk;  // --help
    std::cerr << "usage error: " << e.what() << "\n";
    std::cerr << app.help() << "\n";
    return kExitUsage;
  }

  try {
    if (sic_find->parsed()) return run_sic_find(sic_find_args);
    if (sic_verify->parsed()) return run_sic_verify(sic_verify_path);
    if (to_prob->parsed()) return run_rep_to_prob(rep_state, rep_ref, rep_out);
    if (to_state->parsed()) {
      return run_rep_to_state(rep_prob, rep_ref, rep_out);
    }
    if (cond->parsed()) return run_rep_cond(rep_povm, rep_ref, rep_out);
    if (born_urg->parsed()) {
      return run_born_urgleichung(born_prob, born_ref, born_povm, born_out);
    }
    if (born_mu->parsed()) {
      return run_born_mu(born_prob, born_ref, born_povm, born_out);
    }
    if (qplex_check->parsed()) return run_qplex_check(qplex_args);
    if (overlap_check->parsed()) {
      return run_overlap_check(overlap_a, overlap_b, overlap_ref,
                               overlap_out);
    }
    if (hemisphere->parsed()) return run_gleason_hemisphere(hemi_args);
    if (gfit->parsed()) return run_gleason_fit(fit_args);
    if (report_acceptance->parsed()) {
      return run_report_acceptance(report_seed, report_out);
    }
  } catch (const CLI::ParseError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const OverlapViolationError& e) {
    std::cerr << "violation: " << e.what() << "\n";
    return kExitViolation;
  } catch (const Error& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitUsage;
}
