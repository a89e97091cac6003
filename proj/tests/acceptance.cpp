// Acceptance checks: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "resilock/admire.hpp"
#include "resilock/generators.hpp"
#include "resilock/reachability.hpp"
#include "resilock/resilience.hpp"
#include "resilock/robust.hpp"
#include "resilock/simulator.hpp"
#include "resilock/synthesis.hpp"
#include "test_util.hpp"

namespace {

using namespace resilock;
using testing::random_matrix;

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Accumulates failed checks and a short summary line.
class Checker {
 public:
  void check(bool ok, const std::string& what) {
    if (!ok) {
      pass_ = false;
      failures_ << (failures_.tellp() > 0 ? "; " : "") << what;
    }
  }
  void note(const std::string& s) { notes_ << (notes_.tellp() > 0 ? ", " : "") << s; }
  Outcome outcome() const {
    std::string d = notes_.str();
    if (!pass_) d += (d.empty() ? "" : " | ") + std::string("failed: ") + failures_.str();
    return {pass_, d};
  }

 private:
  bool pass_ = true;
  std::ostringstream failures_;
  std::ostringstream notes_;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

SplitSystem admire_split(int lost) { return split(admire_model().bbar, LossScenario({lost}, 4)); }

Outcome table_of_min_eigenvalues(double& budget) {
  Checker c;
  const double expected[] = {0.51, -8.5, -8.5, -1.0};
  const double tol[] = {0.05, 0.3, 0.3, 0.1};
  for (int j = 0; j < 4; ++j) {
    const LossVerdict v = is_loss_tolerable(admire_split(j));
    c.note(fmt("%.4f", v.min_eigenvalue));
    c.check(std::abs(v.min_eigenvalue - expected[j]) <= tol[j], "actuator " + std::to_string(j + 1));
  }
  budget = 1.0;
  return c.outcome();
}

Outcome synthesis_constants(double& budget) {
  Checker c;
  const SplitSystem sys = admire_split(0);
  const SynthesisGains g = synthesize(sys, Vector::Ones(3), Vector::Zero(3));
  const double abscissa = spectral_abscissa(admire_model().A);
  c.note("lambda_M " + fmt("%.5f", g.lambda_M));
  c.note("alpha* " + fmt("%.5f", g.alpha_star));
  c.note("max Re eig(A) " + fmt("%.5f", abscissa));
  c.check(std::abs(g.lambda_M - 0.8426) <= 1e-3, "lambda_M");
  c.check(std::abs(g.alpha_star - 0.0343) <= 1e-3, "alpha*");
  c.check(std::abs(abscissa + 0.259) <= 1e-3, "max Re eig(A) vs -0.259");
  budget = 0.0;
  return c.outcome();
}

Outcome closed_loop_convergence(double& budget) {
  Checker c;
  int resilient_ok = 0, lqr_ok = 0;
  double worst_resilient = 0.0, best_lqr = INFINITY;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    AdmireRunConfig cfg;
    cfg.seed = seed;
    const double r = run_admire(cfg).summary.final_distance;
    cfg.controller = AdmireController::kLqr;
    const double l = run_admire(cfg).summary.final_distance;
    resilient_ok += r <= 0.1;
    lqr_ok += l > 0.1;
    worst_resilient = std::max(worst_resilient, r);
    best_lqr = std::min(best_lqr, l);
  }
  c.note("resilient " + std::to_string(resilient_ok) + "/20 within 0.1 (max " + fmt("%.4f", worst_resilient) + ")");
  c.note("LQR " + std::to_string(lqr_ok) + "/20 beyond 0.1 (min " + fmt("%.4f", best_lqr) + ")");
  c.check(resilient_ok == 20, "resilient runs");
  c.check(lqr_ok == 20, "LQR runs");
  budget = 30.0;
  return c.outcome();
}

Trajectory unsaturated(const SystemModel& model, std::uint64_t seed, double& alpha) {
  const LossScenario loss({0}, 4);
  const SplitSystem sys = split(model.bbar, loss);
  const SynthesisGains g = synthesize(sys, Vector::Ones(3), Vector::Zero(3));
  alpha = g.alpha;
  const InputSignal w = generate_w({(*model.bbar.ranges())[0]}, seed, 25.0);
  return integrate(model, loss, ResilientController(sys, g, Vector::Zero(3)), w, Vector::Ones(3),
                   Vector::Zero(3), 25.0);
}

Outcome admissibility(double& budget) {
  Checker c;
  SystemModel model = admire_model();
  model.driftless = true;
  double worst = 0.0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    double alpha = 0.0;
    const RunSummary s = summarize(unsaturated(model, seed, alpha));
    worst = std::max(worst, s.u_l2);
    c.check(s.w_l2 <= 1.0 + 1e-12, "w not admissible for seed " + std::to_string(seed));
  }
  c.note("max |u|_L2 " + fmt("%.5f", worst));
  c.check(worst <= 1.0 + 1e-3, "control left the unit ball");
  budget = 0.0;
  return c.outcome();
}

Outcome exponential_law(double& budget) {
  Checker c;
  SystemModel model = admire_model();
  model.driftless = true;
  double alpha = 0.0;
  const Trajectory free = unsaturated(model, 1, alpha);
  double worst = 0.0;
  for (std::size_t k = 0; k < free.size(); ++k) {
    const double expected = std::exp(-alpha * free.times[k]) * std::sqrt(3.0);
    worst = std::max(worst, std::abs(free.distances[k] - expected) / expected);
  }
  c.note("driftless rel err " + fmt("%.2e", worst));
  c.check(worst <= 1e-5, "driftless law");

  model.driftless = false;
  const Trajectory drifted = unsaturated(model, 2, alpha);
  const Matrix closed = model.A - alpha * Matrix::Identity(3, 3);
  const Matrix step = expm(closed * (drifted.times[1] - drifted.times[0]));
  Vector exact = Vector::Ones(3);
  double worst_drift = 0.0;
  for (std::size_t k = 0; k < drifted.size(); ++k) {
    if (k % 1000 == 0) exact = expm(closed * drifted.times[k]) * Vector::Ones(3);
    const Vector x = drifted.states.col(static_cast<Eigen::Index>(k));
    worst_drift = std::max(worst_drift, (x - exact).norm() / exact.norm());
    exact = step * exact;
  }
  c.note("drifted rel err " + fmt("%.2e", worst_drift));
  c.check(worst_drift <= 1e-5, "drifted law");
  budget = 0.0;
  return c.outcome();
}

Outcome constructions(double& budget) {
  Checker c;
  for (int n = 1; n <= 5; ++n) {
    for (int p = 1; p <= 3; ++p) {
      c.check(check_p_resilience(gen_identity_stack(n, p), p).overall,
              "identity stack n=" + std::to_string(n) + " p=" + std::to_string(p));
    }
    c.check(check_p_resilience(gen_sign_orthogonal(n), 1).overall, "sign orthogonal n=" + std::to_string(n));
  }
  std::size_t total = 0;
  for (const auto& name : appendix_fixture_names()) {
    const ResilienceReport r = check_p_resilience(appendix_fixture(name), 2);
    total += r.verdicts.size();
    c.check(r.overall, "fixture " + name);
  }
  c.note(std::to_string(total) + " fixture combinations");
  c.check(total == 1807, "fixture combination count");
  budget = 10.0;
  return c.outcome();
}

Outcome necessity(double& budget) {
  Checker c;
  std::mt19937_64 rng(101);
  int resilient = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const int n = 1 + trial % 6;
    const int m = 2 + static_cast<int>(rng() % (2 * n - 1));
    resilient += check_p_resilience(ControlMatrix(random_matrix(rng, n, m)), 1).overall;
  }
  c.note(std::to_string(resilient) + " of 500 small matrices 1-resilient");
  c.check(resilient == 0, "m <= 2n");

  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + trial % 5;
    const int m = std::max(2, n + static_cast<int>(rng() % (3 * n + 1)));
    worst = std::max(worst, verify_size_identity(ControlMatrix(random_matrix(rng, n, m))));
  }
  c.note("identity residual " + fmt("%.2e", worst));
  c.check(worst <= 1e-6, "size identity");

  double worst_square = 0.0;
  for (int n = 1; n <= 5; ++n) {
    worst_square = std::max(worst_square, verify_size_identity(ControlMatrix(random_matrix(rng, n, 2 * n))));
  }
  c.note("m = 2n residual " + fmt("%.2e", worst_square));
  c.check(worst_square <= 1e-9, "m = 2n sum");
  budget = 0.0;
  return c.outcome();
}

Outcome equivalences(double& budget) {
  Checker c;
  std::mt19937_64 rng(202);
  int agree = 0, compared = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + trial % 4;
    const int p = 1 + trial % 3;
    const int m = std::max(p + 1, std::min(14, 2 * n + 1 + static_cast<int>(rng() % 8)));
    const Matrix v = testing::random_orthonormal_rows(rng, n, m);
    const ResilienceReport r = check_p_resilience(ControlMatrix(v), p);
    if (r.indeterminate) continue;
    ++compared;
    agree += sigma_criterion(v, p) == r.overall;
  }
  c.note("sigma " + std::to_string(agree) + "/" + std::to_string(compared));
  c.check(agree == compared, "sigma criterion");

  int sign_agree = 0, sign_compared = 0, uncertified = 0;
  SphereSearchConfig cfg;
  for (int trial = 0; trial < 500; ++trial) {
    const int n = 1 + trial % 4;
    const int m = 2 * n + 1 + static_cast<int>(rng() % 4);
    const SplitSystem sys = split(ControlMatrix(random_matrix(rng, n, m)), LossScenario({0}, m));
    const LossVerdict v = is_loss_tolerable(sys);
    const SphereMaxResult g = max_g(sys, cfg);
    if (v.verdict == Verdict::kIndeterminate || std::abs(g.value) <= 1e-6) continue;
    ++sign_compared;
    sign_agree += v.tolerable() == (g.value < 0.0);
    if (n <= 3) {
      const double oracle = testing::sampled_sphere_max(sys.B, sys.C, Vector::Zero(n), 1.0, 20000, trial);
      uncertified += !g.certified || g.value < oracle - 1e-12;
    }
  }
  c.note("sign " + std::to_string(sign_agree) + "/" + std::to_string(sign_compared));
  c.check(sign_agree == sign_compared, "sign(max g)");
  c.check(uncertified == 0, std::to_string(uncertified) + " sphere maxima below the sampling oracle");
  budget = 0.0;
  return c.outcome();
}

Outcome thrust_vectoring(double& budget) {
  Checker c;
  const ResilienceReport nominal = run_admire_driftless(DriftlessConfig::kNominal);
  for (int j = 0; j < 12; ++j) {
    c.check(nominal.verdicts[j].tolerable() == (j < 10), "nominal actuator " + std::to_string(j + 1));
  }
  double first = -1.0;
  for (int k = 0; k <= 20 && first < 0.0; ++k) {
    const double f = 0.010 + 5e-4 * k;
    if (run_admire_driftless(DriftlessConfig::kThrustScaled, f).overall) first = f;
  }
  c.note(first > 0.0 ? "resilient from factor " + fmt("%.4f", first) : std::string("no resilient factor"));
  c.check(first > 0.0, "scaled 1-resilience in [0.010, 0.020]");
  c.check(run_admire_driftless(DriftlessConfig::kThrustScaled, 0.014).overall, "factor 0.014");
  budget = 0.0;
  return c.outcome();
}

Outcome robust_radius(double& budget) {
  Checker c;
  const RobustSetup s = make_robust_setup(admire_model(), LossScenario({0}, 4), Vector::Ones(3));
  const RadiusResult r = min_guaranteed_radius(s, default_l_candidates(s.x0));
  c.note("mu " + fmt("%.4g", r.mu));
  c.check(r.mu >= 4.5 && r.mu <= 7.5, "mu outside [4.5, 7.5]");
  c.check(r.mu > std::sqrt(3.0), "mu <= |x0|");
  budget = 60.0;
  return c.outcome();
}

Outcome degree_examples(double& budget) {
  Checker c;
  Matrix v(2, 10);
  v.row(0).setOnes();
  v.row(1) << 1, 1, 1, 1, 1, -1, -1, -1, -1, -1;
  const std::pair<Matrix, int> cases[] = {
      {Matrix::Ones(1, 5), 2}, {gen_identity_stack(2, 1).entries(), 1}, {v, 2}};
  for (const auto& [m, expected] : cases) {
    const int d = degree_of_resilience(ControlMatrix(m));
    c.note(std::to_string(d));
    c.check(d == expected && testing::brute_force_degree(m) == expected,
            std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
  budget = 0.0;
  return c.outcome();
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Outcome(double&)>> criteria[] = {
      {"min eigenvalues of F for the four single losses", table_of_min_eigenvalues},
      {"synthesis constants for the canard loss", synthesis_constants},
      {"closed-loop convergence over 20 seeds", closed_loop_convergence},
      {"admissibility of the unsaturated controller", admissibility},
      {"exponential convergence laws", exponential_law},
      {"resilient constructions", constructions},
      {"necessary conditions and the size identity", necessity},
      {"criterion equivalences", equivalences},
      {"thrust-vectoring scenario", thrust_vectoring},
      {"robust baseline radius", robust_radius},
      {"degree examples", degree_examples},
  };
  int failed = 0;
  int index = 0;
  for (const auto& [name, fn] : criteria) {
    ++index;
    double budget = 0.0;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn(budget);
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (budget > 0.0 && secs > budget) {
      o.pass = false;
      o.detail += " | over the " + fmt("%.0f", budget) + " s budget";
    }
    failed += !o.pass;
    std::printf("%s criterion %d: %s (%.2f s) %s\n", o.pass ? "PASS" : "FAIL", index, name, secs,
                o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %d criteria passed\n", index - failed, index);
  return failed == 0 ? 0 : 1;
}
