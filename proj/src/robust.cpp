#include "resilock/robust.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "resilock/error.hpp"

namespace resilock {

Ellipsoid build_disturbance_ellipsoid(const ActuatorRange& range) {
  if (!(range.min < range.max)) {
    throw Error(ErrorCode::kDegenerateRange, "disturbance range needs min < max");
  }
  const double span = range.span();
  return {Vector::Constant(1, range.center()), SymMatrix(Matrix::Constant(1, 1, 4.0 / (span * span)))};
}

Ellipsoid build_control_ellipsoid(const std::vector<ActuatorRange>& ranges, double q) {
  const auto k = static_cast<Eigen::Index>(ranges.size());
  Vector center(k);
  Matrix shape = Matrix::Zero(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    const auto& r = ranges[i];
    if (!(r.min < r.max)) {
      throw Error(ErrorCode::kDegenerateRange, "control range needs min < max");
    }
    center(i) = r.center();
    shape(i, i) = std::min(4.0 / (r.span() * r.span()), q);
  }
  return {center, SymMatrix(shape)};
}

RobustSetup make_robust_setup(const SystemModel& model, const LossScenario& loss, const Vector& x0, double T) {
  if (!model.bbar.ranges()) {
    throw Error(ErrorCode::kInvalidInput, "robust comparison needs actuator ranges");
  }
  if (loss.p() != 1) {
    throw Error(ErrorCode::kInvalidInput, "robust comparison supports a single lost actuator");
  }
  const auto& ranges = *model.bbar.ranges();
  const SplitSystem sys = split(model.bbar, loss);
  const Ellipsoid dist = build_disturbance_ellipsoid(ranges[loss.indices()[0]]);
  std::vector<ActuatorRange> controlled;
  for (int j : sys.controlled) controlled.push_back(ranges[j]);
  RobustSetup s{model.drift(), sys.B, sys.C,
                build_control_ellipsoid(controlled, dist.shape(0, 0)), dist, x0};
  s.T = T;
  return s;
}

namespace {

struct ShapeRhs {
  const RobustSetup& s;
  Matrix bpbt;
  Matrix cqct;
  double mu;
  bool* regularized;

  // Returns false when l^T X l <= 0, i.e. the shape has collapsed along l.
  bool operator()(const Matrix& x, const Vector& l, Matrix& out) const {
    const double lxl = l.dot(x * l);
    if (!(lxl > 0.0) || !x.allFinite()) return false;
    double pi = std::sqrt(std::max(0.0, l.dot(cqct * l)));
    if (pi < s.pi_floor) {
      if (!s.regularize_pi) {
        throw Error(ErrorCode::kPiSingular, "pi(t) = " + std::to_string(pi) + " below the floor");
      }
      pi = s.pi_floor;
      *regularized = true;
    }
    const double c1 = std::sqrt(std::max(0.0, l.dot(bpbt * l)) / lxl);
    const double c2 = l.norm() / std::sqrt(lxl);
    out = s.A * x + x * s.A.transpose() + (2.0 * c1 + 2.0 * mu * c2 - pi) * x - cqct / std::sqrt(pi);
    return true;
  }
};

}  // namespace

RobustRun integrate_internal_approx(const RobustSetup& s, const Vector& l, double mu) {
  const Eigen::Index n = s.A.rows();
  if (l.size() != n || std::abs(l.norm() - 1.0) > 1e-8) {
    throw Error(ErrorCode::kNotUnitVector, "l must be a unit n-vector");
  }
  if (!(mu >= 0.0)) {
    throw Error(ErrorCode::kInvalidInput, "mu must be nonnegative");
  }
  const auto steps = static_cast<Eigen::Index>(std::llround(s.T / s.dt));
  const double dt = s.dt;

  RobustRun run;
  run.l = l;
  run.mu = mu;
  run.x_minus.resize(n, steps + 1);
  const ShapeRhs rhs{s, s.B * s.control.shape.matrix() * s.B.transpose(),
                     s.C * s.disturbance.shape.matrix() * s.C.transpose(), mu, &run.pi_regularized};
  const Vector drive = s.B * s.control.center + s.C * s.disturbance.center;
  const Matrix step_full = expm(s.A.transpose() * dt);
  const Matrix step_half = expm(s.A.transpose() * (0.5 * dt));

  Vector xc = s.x0;
  Matrix x = s.x0_scale * Matrix::Identity(n, n);
  Vector lt = l;  // l(t) = e^{A^T t} l
  Matrix k1, k2, k3, k4;
  for (Eigen::Index k = 0; k <= steps; ++k) {
    const double t = k * dt;
    const Vector eig = sym_eigenvalues(SymMatrix(x));
    // X becomes badly conditioned for large mu, so definiteness is judged
    // against the eigenvalue roundoff level rather than a fixed margin.
    const double resolution = n * std::numeric_limits<double>::epsilon() * eig.cwiseAbs().maxCoeff();
    run.times.push_back(t);
    run.eigmin.push_back(eig(0));
    run.x_minus.col(k) = xc;
    if (eig(0) < -std::max(resolution, 1e-10)) break;
    if (k == steps) {
      run.feasible = eig(0) > resolution;
      break;
    }
    const Vector lh = step_half * lt;
    const Vector l1 = step_full * lt;
    if (!rhs(x, lt, k1) || !rhs(x + 0.5 * dt * k1, lh, k2) || !rhs(x + 0.5 * dt * k2, lh, k3) ||
        !rhs(x + dt * k3, l1, k4)) {
      break;
    }
    x += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    x = 0.5 * (x + x.transpose());
    lt = l1;

    // The center ODE is linear with constant forcing.
    auto fc = [&](const Vector& c) { return Vector(s.A * c + drive); };
    const Vector c1 = fc(xc);
    const Vector c2 = fc(xc + 0.5 * dt * c1);
    const Vector c3 = fc(xc + 0.5 * dt * c2);
    const Vector c4 = fc(xc + dt * c3);
    xc += dt / 6.0 * (c1 + 2.0 * c2 + 2.0 * c3 + c4);
  }
  run.x_minus.conservativeResize(n, static_cast<Eigen::Index>(run.times.size()));
  run.X_final = x;
  return run;
}

RadiusResult min_guaranteed_radius(const RobustSetup& setup, const std::vector<Vector>& l_candidates,
                                   double mu_max) {
  RadiusResult result;
  for (const Vector& l : l_candidates) {
    RadiusCandidate cand{l};
    auto feasible = [&](double mu) { return integrate_internal_approx(setup, l, mu).feasible; };
    if (feasible(0.0)) {
      cand.mu = 0.0;
    } else {
      double lo = 0.0, hi = 1.0;
      while (hi <= mu_max && !feasible(hi)) {
        lo = hi;
        hi *= 2.0;
      }
      if (hi <= mu_max) {
        while (hi - lo > 1e-2 * hi) {
          const double mid = 0.5 * (lo + hi);
          (feasible(mid) ? hi : lo) = mid;
        }
        cand.mu = hi;
      }
    }
    if (cand.mu < result.mu) {
      result.mu = cand.mu;
      result.l = l;
    }
    result.candidates.push_back(std::move(cand));
  }
  if (!std::isfinite(result.mu)) {
    throw Error(ErrorCode::kNoFeasibleMu, "no candidate direction is feasible up to mu = " + std::to_string(mu_max));
  }
  return result;
}

std::vector<Vector> default_l_candidates(const Vector& x0) {
  std::vector<Vector> out;
  for (Eigen::Index i = 0; i < x0.size(); ++i) out.push_back(Vector::Unit(x0.size(), i));
  if (x0.norm() > 0.0) out.push_back(x0.normalized());
  return out;
}

std::string robust_csv(const RobustRun& run) {
  std::ostringstream out;
  out.precision(17);
  out << "t,eigmin\n";
  for (std::size_t k = 0; k < run.times.size(); ++k) out << run.times[k] << ',' << run.eigmin[k] << '\n';
  return out.str();
}

}  // namespace resilock
