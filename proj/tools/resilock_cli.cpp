// resilock command-line interface.
//
//   resilock analyze  FILE [--p P | --degree] [--tol EPS] [--cap N]
//   resilock reach    FILE --loss J[,J...] (--at T | --by T | --min-time)
//   resilock simulate [FILE --loss J[,J...]] [--scenario NAME] [--controller C] [--seed S] [--out CSV]
//   resilock generate --family F [--n N] [--p P] [--m M] [--fixture NAME] [--out FILE]
//   resilock robust   FILE --loss J [--T T] [--out CSV]
//
// Actuator indices are 1-based on the command line. Exit codes: 0 success
// (including indeterminate verdicts), 2 input error, 3 combinatorial budget,
// 4 unsupported, 5 numerical failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "resilock/admire.hpp"
#include "resilock/error.hpp"
#include "resilock/generators.hpp"
#include "resilock/reachability.hpp"
#include "resilock/resilience.hpp"
#include "resilock/robust.hpp"
#include "resilock/simulator.hpp"
#include "resilock/synthesis.hpp"
#include "resilock/system_file.hpp"

namespace {

using nlohmann::json;
using namespace resilock;

constexpr int kExitInput = 2;
constexpr int kExitBudget = 3;
constexpr int kExitUnsupported = 4;
constexpr int kExitNumerical = 5;

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidInput:
    case ErrorCode::kParseError:
    case ErrorCode::kIndexOutOfRange:
    case ErrorCode::kDuplicateIndex:
    case ErrorCode::kNotUnitVector:
    case ErrorCode::kZeroDistance:
    case ErrorCode::kDegenerateRange:
    case ErrorCode::kUnknownFixture:
      return kExitInput;
    case ErrorCode::kCombinatorialBudgetExceeded:
      return kExitBudget;
    case ErrorCode::kUnsupportedOrder:
      return kExitUnsupported;
    default:
      return kExitNumerical;
  }
}

json to_json(const Vector& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

json one_based(const std::vector<int>& idx) {
  json out = json::array();
  for (int j : idx) out.push_back(j + 1);
  return out;
}

// Parses "1,3" into sorted 0-based indices.
LossScenario parse_loss(const std::string& text, Eigen::Index m) {
  std::vector<int> idx;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const int j = std::stoi(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      idx.push_back(j - 1);
    } catch (const std::exception&) {
      throw Error(ErrorCode::kInvalidInput, "bad actuator index '" + item + "' in --loss");
    }
  }
  return LossScenario(std::move(idx), m);
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kInvalidInput, "cannot write '" + path + "'");
  out << text;
}

std::string label_list(const ControlMatrix& bbar, const std::vector<int>& idx) {
  std::string out;
  for (int j : idx) out += (out.empty() ? "" : "+") + bbar.labels()[j];
  return out;
}

// ---------------------------------------------------------------- analyze

struct AnalyzeArgs {
  std::string file;
  int p = 1;
  bool degree = false;
  double tol = Tolerance{}.pd_eps;
  std::uint64_t cap = EnumerationOptions{}.combination_cap;
};

int run_analyze(const AnalyzeArgs& args) {
  const SystemFile file = load_system_file(args.file);
  Tolerance tol;
  tol.pd_eps = args.tol;
  tol.validate();
  EnumerationOptions opts;
  opts.combination_cap = args.cap;

  ResilienceReport report = check_p_resilience(file.bbar, args.p, tol, opts);
  if (args.degree) report.degree = degree_of_resilience(file.bbar, tol, opts);

  json out;
  out["p"] = report.p;
  out["overall"] = report.overall;
  out["combinations"] = report.verdicts.size();
  out["indeterminate"] = report.indeterminate;
  if (report.degree) out["degree"] = *report.degree;
  json verdicts = json::array();
  for (const auto& v : report.verdicts) {
    verdicts.push_back({{"loss", one_based(v.indices)},
                        {"labels", label_list(file.bbar, v.indices)},
                        {"min_eigenvalue", v.min_eigenvalue},
                        {"verdict", to_string(v.verdict)}});
  }
  out["verdicts"] = std::move(verdicts);
  std::cout << out.dump(2) << '\n';

  std::fprintf(stderr, "%-40s %14s  %s\n", "loss", "min eig(F)", "verdict");
  for (const auto& v : report.verdicts) {
    std::fprintf(stderr, "%-40s %14.6g  %s\n", label_list(file.bbar, v.indices).c_str(), v.min_eigenvalue,
                 to_string(v.verdict).c_str());
  }
  std::fprintf(stderr, "%d-resilient: %s\n", report.p, report.overall ? "yes" : "no");
  if (report.degree) std::fprintf(stderr, "degree of resilience: %d\n", *report.degree);
  return 0;
}

// ------------------------------------------------------------------ reach

struct ReachArgs {
  std::string file;
  std::string loss;
  std::optional<double> at;
  std::optional<double> by;
  bool min_time = false;
};

int run_reach(const ReachArgs& args) {
  const SystemFile file = load_system_file(args.file);
  const SplitSystem sys = split(file.bbar, parse_loss(args.loss, file.bbar.m()));
  const Eigen::Index n = file.bbar.n();
  const Vector x0 = file.x0.value_or(Vector::Zero(n));
  const TargetBall target{file.x_goal.value_or(Vector::Zero(n)), file.epsilon.value_or(0.0)};

  json out;
  out["loss"] = one_based(sys.scenario.indices());
  const Asymptotic asym = classify_asymptotic(sys);
  out["asymptotic"] = to_string(asym);

  auto emit_verdict = [&](const ReachVerdict& v) {
    out["status"] = to_string(v.status);
    out["value"] = v.value;
    out["epsilon"] = target.radius;
    out["band"] = v.band;
    out["t"] = v.best_t;
    out["h"] = to_json(v.h);
    out["certified"] = v.certified;
  };

  if (args.min_time) {
    out["mode"] = "min_time";
    if (asym == Asymptotic::kReachableEventually) {
      out["status"] = "reachable";
      out["min_time"] = min_reach_time(sys, x0, target);
    } else {
      out["status"] = asym == Asymptotic::kIndeterminate ? "indeterminate" : "unreachable";
      out["min_time"] = nullptr;
    }
  } else {
    const std::optional<double> horizon = args.at ? args.at : args.by ? args.by : file.horizon;
    if (!horizon) throw Error(ErrorCode::kInvalidInput, "no horizon: pass --at/--by or set 'horizon'");
    const ReachQuery q{sys, x0, target, *horizon};
    out["mode"] = args.by ? "by" : "at";
    out["T"] = *horizon;
    emit_verdict(args.by ? reachable_by_time(q) : reachable_at_time(q));
  }
  std::cout << out.dump(2) << '\n';
  return 0;
}

// --------------------------------------------------------------- simulate

struct SimulateArgs {
  std::optional<std::string> file;
  std::optional<std::string> loss;
  std::string scenario = "canard";
  std::string controller = "resilient";
  std::uint64_t seed = 1;
  double dt = 1e-3;
  std::optional<double> T;
  double dwell = 0.1;
  bool no_saturation = false;
  std::optional<double> alpha;
  std::optional<std::string> out;
};

json summary_json(const RunSummary& s) {
  return {{"final_distance", s.final_distance},
          {"u_l2", s.u_l2},
          {"w_l2", s.w_l2},
          {"saturation_fraction", s.saturation_fraction}};
}

json gains_json(const SynthesisGains& g) {
  json out{{"lambda_M", g.lambda_M}, {"alpha", g.alpha}, {"d", to_json(g.d)}};
  out["alpha_star"] = std::isfinite(g.alpha_star) ? json(g.alpha_star) : json(nullptr);
  return out;
}

int run_simulate_admire(const SimulateArgs& args, json& out) {
  AdmireRunConfig cfg;
  cfg.loss = parse_admire_loss(args.scenario);
  if (args.controller == "resilient") {
    cfg.controller = AdmireController::kResilient;
  } else if (args.controller == "lqr") {
    cfg.controller = AdmireController::kLqr;
  } else if (args.controller == "lqr-printed") {
    cfg.controller = AdmireController::kLqrPrinted;
  } else if (args.controller == "none") {
    cfg.controller = AdmireController::kNone;
  } else {
    throw Error(ErrorCode::kInvalidInput, "unknown controller '" + args.controller + "'");
  }
  cfg.seed = args.seed;
  cfg.dt = args.dt;
  cfg.T = args.T.value_or(25.0);
  cfg.dwell = args.dwell;
  cfg.saturate = !args.no_saturation;
  cfg.alpha = args.alpha;
  const AdmireRun run = run_admire(cfg);
  out["scenario"] = to_string(cfg.loss);
  out["summary"] = summary_json(run.summary);
  if (run.gains) out["gains"] = gains_json(*run.gains);
  out["target_radius"] = 0.1;
  out["reached"] = run.summary.final_distance <= 0.1;
  if (args.out) write_file(*args.out, trajectory_csv(run.trajectory));
  return 0;
}

int run_simulate_file(const SimulateArgs& args, json& out) {
  const SystemFile file = load_system_file(*args.file);
  if (!args.loss) throw Error(ErrorCode::kInvalidInput, "--loss is required with a system file");
  if (!file.bbar.ranges()) throw Error(ErrorCode::kInvalidInput, "simulation needs actuator 'ranges'");
  const Eigen::Index n = file.bbar.n();
  const SystemModel model{file.A.value_or(Matrix::Zero(n, n)), file.bbar, !file.A.has_value()};
  const LossScenario loss = parse_loss(*args.loss, file.bbar.m());
  const SplitSystem sys = split(file.bbar, loss);
  const Vector x0 = file.x0.value_or(Vector::Zero(n));
  const Vector x_goal = file.x_goal.value_or(Vector::Zero(n));
  const double T = args.T ? *args.T : file.horizon.value_or(25.0);
  const auto& ranges = *file.bbar.ranges();

  std::optional<std::vector<ActuatorRange>> saturation;
  if (!args.no_saturation) {
    saturation.emplace();
    for (int j : sys.controlled) saturation->push_back(ranges[j]);
  }
  Controller controller = NoControl{};
  if (args.controller == "resilient") {
    SynthesisGains gains = synthesize(sys, x0, x_goal, args.alpha);
    out["gains"] = gains_json(gains);
    controller = ResilientController(sys, std::move(gains), x_goal, saturation);
  } else if (args.controller == "lqr") {
    controller = LqrControl{care_lqr_gain(model.drift(), sys.B, Matrix::Identity(n, n),
                                          Matrix::Identity(sys.B.cols(), sys.B.cols())),
                            saturation};
  } else if (args.controller != "none") {
    throw Error(ErrorCode::kInvalidInput, "unknown controller '" + args.controller + "'");
  }
  std::vector<ActuatorRange> lost;
  for (int j : loss.indices()) lost.push_back(ranges[j]);
  const InputSignal w = generate_w(lost, args.seed, T, args.dwell);
  const Trajectory traj = integrate(model, loss, controller, w, x0, x_goal, T, args.dt);
  const RunSummary summary = summarize(traj);
  out["loss"] = one_based(loss.indices());
  out["summary"] = summary_json(summary);
  if (file.epsilon) {
    out["target_radius"] = *file.epsilon;
    out["reached"] = summary.final_distance <= *file.epsilon;
  }
  if (args.out) write_file(*args.out, trajectory_csv(traj));
  return 0;
}

int run_simulate(const SimulateArgs& args) {
  json out;
  out["controller"] = args.controller;
  out["seed"] = args.seed;
  out["dt"] = args.dt;
  const int rc = args.file ? run_simulate_file(args, out) : run_simulate_admire(args, out);
  std::cout << out.dump(2) << '\n';
  return rc;
}

// --------------------------------------------------------------- generate

struct GenerateArgs {
  std::string family;
  int n = 1;
  int p = 1;
  int m = 0;
  std::string fixture;
  std::optional<std::string> out;
};

int run_generate(const GenerateArgs& args) {
  GeneratorSpec spec;
  spec.n = args.n;
  spec.p = args.p;
  spec.m = args.m;
  if (args.family == "identity-stack") {
    spec.family = GeneratorFamily::kIdentityStack;
  } else if (args.family == "sign-orthogonal") {
    spec.family = GeneratorFamily::kSignOrthogonal;
    if (args.m > 0 && sign_orthogonal_order(args.n, args.m) != args.m) {
      throw Error(ErrorCode::kUnsupportedOrder,
                  "m = " + std::to_string(args.m) + " is not a power of two >= 2n+1 (next supported: " +
                      std::to_string(sign_orthogonal_order(args.n, args.m)) + ")");
    }
  } else if (args.family == "fixture") {
    spec.family = GeneratorFamily::kFixture;
    spec.fixture_name = args.fixture;
  } else {
    throw Error(ErrorCode::kInvalidInput, "unknown family '" + args.family + "'");
  }
  const std::string text = control_matrix_json(generate(spec)) + "\n";
  if (args.out) {
    write_file(*args.out, text);
  } else {
    std::cout << text;
  }
  return 0;
}

// ----------------------------------------------------------------- robust

struct RobustArgs {
  std::string file;
  std::string loss;
  double T = 25.0;
  double dt = 1e-3;
  std::optional<std::string> out;
};

int run_robust(const RobustArgs& args) {
  const SystemFile file = load_system_file(args.file);
  const Eigen::Index n = file.bbar.n();
  const SystemModel model{file.A.value_or(Matrix::Zero(n, n)), file.bbar, !file.A.has_value()};
  const LossScenario loss = parse_loss(args.loss, file.bbar.m());
  const Vector x0 = file.x0.value_or(Vector::Zero(n));
  RobustSetup setup = make_robust_setup(model, loss, x0, args.T);
  setup.dt = args.dt;
  const RadiusResult result = min_guaranteed_radius(setup, default_l_candidates(x0));

  json out;
  out["loss"] = one_based(loss.indices());
  out["T"] = args.T;
  out["mu"] = result.mu;
  out["l"] = to_json(result.l);
  json cands = json::array();
  for (const auto& c : result.candidates) {
    cands.push_back({{"l", to_json(c.l)}, {"mu", std::isfinite(c.mu) ? json(c.mu) : json(nullptr)}});
  }
  out["candidates"] = std::move(cands);
  out["x0_norm"] = x0.norm();
  out["robust_contains_x0"] = result.mu > x0.norm();
  if (file.epsilon) out["resilient_radius"] = *file.epsilon;
  const RobustRun best = integrate_internal_approx(setup, result.l, result.mu);
  out["pi_regularized"] = best.pi_regularized;
  if (args.out) write_file(*args.out, robust_csv(best));
  std::cout << out.dump(2) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Resilient reachability under loss of control authority"};
  app.require_subcommand(1);

  AnalyzeArgs analyze;
  auto* cmd_analyze = app.add_subcommand("analyze", "p-resilience report for a control matrix");
  cmd_analyze->add_option("file", analyze.file, "system JSON")->required();
  cmd_analyze->add_option("--p", analyze.p, "number of lost actuators")->check(CLI::PositiveNumber);
  cmd_analyze->add_flag("--degree", analyze.degree, "also compute the degree of resilience");
  cmd_analyze->add_option("--tol", analyze.tol, "relative positive-definiteness margin");
  cmd_analyze->add_option("--cap", analyze.cap, "maximum number of combinations");

  ReachArgs reach;
  auto* cmd_reach = app.add_subcommand("reach", "resilient reachability of the target ball");
  cmd_reach->add_option("file", reach.file, "system JSON")->required();
  cmd_reach->add_option("--loss", reach.loss, "lost actuators, 1-based, comma separated")->required();
  auto* opt_at = cmd_reach->add_option("--at", reach.at, "reachable at time T");
  auto* opt_by = cmd_reach->add_option("--by", reach.by, "reachable by time T");
  auto* opt_min = cmd_reach->add_flag("--min-time", reach.min_time, "minimum reach time");
  opt_at->excludes(opt_by)->excludes(opt_min);
  opt_by->excludes(opt_min);

  SimulateArgs sim;
  auto* cmd_sim = app.add_subcommand("simulate", "closed-loop simulation");
  cmd_sim->add_option("file", sim.file, "system JSON (omit for the built-in ADMIRE model)");
  cmd_sim->add_option("--loss", sim.loss, "lost actuators, 1-based (with a system file)");
  cmd_sim->add_option("--scenario", sim.scenario, "ADMIRE loss: canard, right_elevon, left_elevon, rudder");
  cmd_sim->add_option("--controller", sim.controller, "resilient, lqr, lqr-printed or none");
  cmd_sim->add_option("--seed", sim.seed, "seed of the undesirable input");
  cmd_sim->add_option("--dt", sim.dt, "integration step [s]")->check(CLI::PositiveNumber);
  cmd_sim->add_option("--T", sim.T, "horizon [s]")->check(CLI::PositiveNumber);
  cmd_sim->add_option("--dwell", sim.dwell, "hold time of each w sample [s]")->check(CLI::PositiveNumber);
  cmd_sim->add_flag("--no-saturation", sim.no_saturation, "do not clamp the controlled inputs");
  cmd_sim->add_option("--alpha", sim.alpha, "resilient gain (default alpha*)");
  cmd_sim->add_option("--out", sim.out, "trajectory CSV");

  GenerateArgs gen;
  auto* cmd_gen = app.add_subcommand("generate", "resilient control matrices");
  cmd_gen->add_option("--family", gen.family, "identity-stack, sign-orthogonal or fixture")->required();
  cmd_gen->add_option("--n", gen.n, "state dimension");
  cmd_gen->add_option("--p", gen.p, "resilience degree (identity-stack)");
  cmd_gen->add_option("--m", gen.m, "column count (sign-orthogonal)");
  cmd_gen->add_option("--fixture", gen.fixture, "6x24, 8x32 or 12x46");
  cmd_gen->add_option("--out", gen.out, "output JSON");

  RobustArgs robust;
  auto* cmd_robust = app.add_subcommand("robust", "ellipsoidal robust-control baseline");
  cmd_robust->add_option("file", robust.file, "system JSON with ranges")->required();
  cmd_robust->add_option("--loss", robust.loss, "lost actuator, 1-based")->required();
  cmd_robust->add_option("--T", robust.T, "horizon [s]")->check(CLI::PositiveNumber);
  cmd_robust->add_option("--dt", robust.dt, "integration step [s]")->check(CLI::PositiveNumber);
  cmd_robust->add_option("--out", robust.out, "CSV of t, eigmin(X)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitInput;
  }

  try {
    if (*cmd_analyze) return run_analyze(analyze);
    if (*cmd_reach) return run_reach(reach);
    if (*cmd_sim) return run_simulate(sim);
    if (*cmd_gen) return run_generate(gen);
    if (*cmd_robust) return run_robust(robust);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
  return 0;
}
