#include "resilock/synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "resilock/error.hpp"

namespace resilock {

namespace {

SymMatrix inverse_gram(const Matrix& b, const Tolerance& tol) {
  const SymMatrix gram = SymMatrix::gram(b);
  if (!is_positive_definite(gram, tol)) {
    throw Error(ErrorCode::kSingularGram, "B B^T is not invertible");
  }
  const Matrix inv = solve_spd(gram, Matrix(Matrix::Identity(gram.dim(), gram.dim())), tol);
  return SymMatrix(0.5 * (inv + inv.transpose()));
}

}  // namespace

double compute_lambda_M(const SplitSystem& sys, const Tolerance& tol) {
  if (sys.C.cols() == 0) return 0.0;
  const SymMatrix p = inverse_gram(sys.B, tol);
  const Matrix ctpc = sys.C.transpose() * p.matrix() * sys.C;
  return sym_eigenvalues(SymMatrix(0.5 * (ctpc + ctpc.transpose()))).maxCoeff();
}

double compute_alpha_star(const SymMatrix& p, const Matrix& c, const Vector& d, double lambda_M) {
  if (d.norm() == 0.0) {
    throw Error(ErrorCode::kZeroDistance, "d = 0: any positive gain keeps the state at the goal");
  }
  if (!(lambda_M < 1.0)) {
    throw Error(ErrorCode::kLambdaAtLeastOne,
                "lambda_M = " + std::to_string(lambda_M) + " leaves no admissible gain");
  }
  const Vector pd = p.matrix() * d;
  const double a = d.dot(pd);
  const double b = (c.transpose() * pd).norm();
  const double root = std::sqrt(b * b + (1.0 - lambda_M) * a) - b;
  return 2.0 * root * root / (a * a);
}

double admissibility_slack(const SymMatrix& p, const Matrix& c, const Vector& d, double lambda_M,
                           double alpha) {
  const Vector pd = p.matrix() * d;
  const double a = d.dot(pd);
  const double b = (c.transpose() * pd).norm();
  return (1.0 - lambda_M) - (0.5 * alpha * a + std::sqrt(2.0 * alpha) * b);
}

SynthesisGains synthesize(const SplitSystem& sys, const Vector& x0, const Vector& x_goal,
                          std::optional<double> alpha, const Tolerance& tol) {
  const Eigen::Index n = sys.B.rows();
  if (x0.size() != n || x_goal.size() != n) {
    throw Error(ErrorCode::kInvalidInput, "x0 and x_goal must have dimension n");
  }
  if (alpha && !(*alpha > 0.0 && std::isfinite(*alpha))) {
    throw Error(ErrorCode::kInvalidInput, "alpha must be positive and finite");
  }
  SynthesisGains g{inverse_gram(sys.B, tol), 0.0, 0.0, 0.0, x0 - x_goal};
  g.lambda_M = compute_lambda_M(sys, tol);
  if (g.d.norm() == 0.0) {
    g.alpha_star = std::numeric_limits<double>::infinity();
    g.alpha = alpha.value_or(1.0);
  } else if (alpha) {
    g.alpha_star = g.lambda_M < 1.0 ? compute_alpha_star(g.P, sys.C, g.d, g.lambda_M)
                                    : std::numeric_limits<double>::quiet_NaN();
    g.alpha = *alpha;
  } else {
    g.alpha_star = compute_alpha_star(g.P, sys.C, g.d, g.lambda_M);
    g.alpha = g.alpha_star;
  }
  return g;
}

ResilientController::ResilientController(SplitSystem sys, SynthesisGains gains, Vector x_goal,
                                         std::optional<std::vector<ActuatorRange>> saturation)
    : sys_(std::move(sys)),
      gains_(std::move(gains)),
      x_goal_(std::move(x_goal)),
      saturation_(std::move(saturation)),
      bt_p_(sys_.B.transpose() * gains_.P.matrix()) {
  if (saturation_ && static_cast<Eigen::Index>(saturation_->size()) != sys_.B.cols()) {
    throw Error(ErrorCode::kInvalidInput, "saturation needs one range per controlled actuator");
  }
  if (x_goal_.size() != sys_.B.rows()) {
    throw Error(ErrorCode::kInvalidInput, "x_goal must have dimension n");
  }
}

Vector ResilientController::control_input(const Vector& x, const Vector& w) const {
  Vector u = bt_p_ * (-sys_.C * w + gains_.alpha * (x_goal_ - x));
  if (saturation_) {
    for (Eigen::Index i = 0; i < u.size(); ++i) {
      u(i) = std::clamp(u(i), (*saturation_)[i].min, (*saturation_)[i].max);
    }
  }
  return u;
}

bool check_drift_condition(const Matrix& a, const SynthesisGains& gains, double margin) {
  return spectral_abscissa(a) < gains.alpha_star - margin;
}

DriftResilience is_resilient_with_drift(const Matrix& a, const ControlMatrix& bbar, int p,
                                        const Tolerance& tol) {
  if (a.rows() != bbar.n() || a.cols() != bbar.n()) {
    throw Error(ErrorCode::kInvalidInput, "A must be n x n");
  }
  if (!is_hurwitz(a, tol.pd_eps)) return DriftResilience::kUnknown;
  return check_p_resilience(bbar, p, tol).overall ? DriftResilience::kYes : DriftResilience::kUnknown;
}

}  // namespace resilock
