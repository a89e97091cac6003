#pragma once

#include <optional>
#include <vector>

#include "resilock/linalg.hpp"
#include "resilock/resilience.hpp"

namespace resilock {

/// Gains of the resilient feedback u = B^T P (-C w + alpha (x_goal - x)).
struct SynthesisGains {
  SymMatrix P;               ///< (B B^T)^{-1}
  double lambda_M = 0.0;     ///< max eig of C^T P C
  double alpha_star = 0.0;   ///< max admissible gain; +inf when d = 0, NaN when lambda_M >= 1
  double alpha = 0.0;        ///< gain used by the law
  Vector d;                  ///< x0 - x_goal
};

/// max eig(C^T (B B^T)^{-1} C). Throws SingularGram if B B^T is singular.
double compute_lambda_M(const SplitSystem& sys, const Tolerance& tol = {});

/// 2 (sqrt(b^2 + (1 - lambda_M) a) - b)^2 / a^2 with a = d'Pd, b = |C'Pd|.
double compute_alpha_star(const SymMatrix& p, const Matrix& c, const Vector& d, double lambda_M);

/// (1 - lambda_M) - (alpha/2 a + sqrt(2 alpha) b); nonnegative iff alpha is
/// admissible.
double admissibility_slack(const SymMatrix& p, const Matrix& c, const Vector& d, double lambda_M,
                           double alpha);

/// Gains for steering x0 to x_goal. alpha defaults to alpha_star, or to 1
/// when x0 = x_goal. An explicit alpha skips the lambda_M < 1 requirement.
SynthesisGains synthesize(const SplitSystem& sys, const Vector& x0, const Vector& x_goal,
                          std::optional<double> alpha = std::nullopt, const Tolerance& tol = {});

class ResilientController {
 public:
  /// saturation, when given, holds one range per controlled actuator.
  ResilientController(SplitSystem sys, SynthesisGains gains, Vector x_goal,
                      std::optional<std::vector<ActuatorRange>> saturation = std::nullopt);

  /// Unsaturated law, then componentwise clamping if saturation is set.
  Vector control_input(const Vector& x, const Vector& w) const;

  const SplitSystem& sys() const { return sys_; }
  const SynthesisGains& gains() const { return gains_; }
  const Vector& x_goal() const { return x_goal_; }
  const std::optional<std::vector<ActuatorRange>>& saturation() const { return saturation_; }

 private:
  SplitSystem sys_;
  SynthesisGains gains_;
  Vector x_goal_;
  std::optional<std::vector<ActuatorRange>> saturation_;
  Matrix bt_p_;  // B^T P
};

/// spectral_abscissa(A) < alpha_star - margin.
bool check_drift_condition(const Matrix& a, const SynthesisGains& gains, double margin = 0.0);

enum class DriftResilience { kYes, kUnknown };

/// Yes when A is Hurwitz and Bbar is p-resilient. The condition is only
/// sufficient, so every other case is Unknown.
DriftResilience is_resilient_with_drift(const Matrix& a, const ControlMatrix& bbar, int p,
                                        const Tolerance& tol = {});

}  // namespace resilock
