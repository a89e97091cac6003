#include "resilock/reachability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "resilock/error.hpp"

namespace resilock {

namespace {

// phi(h) = <h, c> + s (|C^T h| - |B^T h|), the common objective of every
// sphere maximization in this module.
class SphereObjective {
 public:
  SphereObjective(const SplitSystem& sys, const Vector& c, double s)
      : b_(sys.B), c_mat_(sys.C), c_(c), s_(s) {}

  double value(const Vector& h) const {
    return h.dot(c_) + s_ * (norm_or_zero(c_mat_, h) - norm_or_zero(b_, h));
  }

  Vector gradient(const Vector& h) const {
    Vector grad = c_;
    grad += s_ * unit_gradient(c_mat_, h);
    grad -= s_ * unit_gradient(b_, h);
    return grad;
  }

  // Values at every column of hs.
  Vector values(const Matrix& hs) const {
    Vector out = hs.transpose() * c_;
    if (c_mat_.cols() > 0) out += s_ * (c_mat_.transpose() * hs).colwise().norm().transpose();
    if (b_.cols() > 0) out -= s_ * (b_.transpose() * hs).colwise().norm().transpose();
    return out;
  }

 private:
  static double norm_or_zero(const Matrix& m, const Vector& h) {
    return m.cols() == 0 ? 0.0 : (m.transpose() * h).norm();
  }

  // Gradient of |M^T h|; the subgradient 0 is used where M^T h = 0.
  static Vector unit_gradient(const Matrix& m, const Vector& h) {
    if (m.cols() == 0) return Vector::Zero(h.size());
    const Vector mth = m.transpose() * h;
    const double nrm = mth.norm();
    if (nrm == 0.0) return Vector::Zero(h.size());
    return m * mth / nrm;
  }

  const Matrix& b_;
  const Matrix& c_mat_;
  Vector c_;
  double s_;
};

struct Ascent {
  double value;
  Vector h;
};

Ascent ascend(const SphereObjective& obj, Vector h, int max_iterations) {
  h.normalize();
  double f = obj.value(h);
  double eta = 1.0;
  for (int it = 0; it < max_iterations; ++it) {
    const Vector grad = obj.gradient(h);
    const Vector tangent = grad - grad.dot(h) * h;
    if (tangent.norm() < 1e-13 * (1.0 + grad.norm())) break;
    bool moved = false;
    while (eta > 1e-14) {
      Vector cand = (h + eta * tangent).normalized();
      const double fc = obj.value(cand);
      if (fc > f) {
        h = std::move(cand);
        f = fc;
        eta = std::min(2.0 * eta, 1e3);
        moved = true;
        break;
      }
      eta *= 0.5;
    }
    if (!moved) break;
  }
  return {f, h};
}

// Deterministic near-uniform point sets on S^{n-1}, n in {2, 3}.
Matrix sphere_samples(Eigen::Index n, int count) {
  Matrix pts(n, count);
  if (n == 2) {
    for (int i = 0; i < count; ++i) {
      const double theta = 2.0 * M_PI * i / count;
      pts.col(i) << std::cos(theta), std::sin(theta);
    }
  } else {
    const double golden = M_PI * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < count; ++i) {
      const double z = 1.0 - 2.0 * (i + 0.5) / count;
      const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      pts.col(i) << r * std::cos(golden * i), r * std::sin(golden * i), z;
    }
  }
  return pts;
}

std::vector<Vector> structured_starts(const SplitSystem& sys, const Vector& c) {
  std::vector<Vector> starts;
  auto add_eigvecs = [&](const SymMatrix& m) {
    const SymEigen eig = sym_eigen(m);
    for (Eigen::Index k = 0; k < eig.vectors.cols(); ++k) {
      starts.push_back(eig.vectors.col(k));
      starts.push_back(-eig.vectors.col(k));
    }
  };
  add_eigvecs(compute_F(sys));
  add_eigvecs(SymMatrix::gram(sys.C));
  add_eigvecs(SymMatrix::gram(sys.B));
  if (c.norm() > 0.0) {
    starts.push_back(c.normalized());
    starts.push_back(-c.normalized());
  }
  return starts;
}

}  // namespace

double g_eval(const SplitSystem& sys, const Vector& h) {
  if (h.size() != sys.B.rows()) {
    throw Error(ErrorCode::kInvalidInput, "direction has wrong dimension");
  }
  if (std::abs(h.norm() - 1.0) > 1e-8) {
    throw Error(ErrorCode::kNotUnitVector, "|h| = " + std::to_string(h.norm()));
  }
  return (sys.C.transpose() * h).norm() - (sys.B.transpose() * h).norm();
}

SphereMaxResult sphere_max(const SplitSystem& sys, const Vector& c, double s,
                           const SphereSearchConfig& cfg) {
  const Eigen::Index n = sys.B.rows();
  if (c.size() != n) {
    throw Error(ErrorCode::kInvalidInput, "offset vector has wrong dimension");
  }
  const SphereObjective obj(sys, c, s);
  SphereMaxResult best;
  best.value = -std::numeric_limits<double>::infinity();
  auto consider = [&](const Ascent& a) {
    if (a.value > best.value) {
      best.value = a.value;
      best.h = a.h;
    }
  };

  if (n == 1) {
    // The sphere is {-1, +1}.
    for (double sign : {1.0, -1.0}) consider({obj.value(Vector::Constant(1, sign)), Vector::Constant(1, sign)});
    best.starts_used = 2;
    best.certified = true;
    return best;
  }

  for (const Vector& h0 : structured_starts(sys, c)) {
    consider(ascend(obj, h0, cfg.max_iterations));
    ++best.starts_used;
  }
  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> normal;
  for (int k = 0; k < cfg.random_starts; ++k) {
    Vector h0(n);
    for (Eigen::Index i = 0; i < n; ++i) h0(i) = normal(rng);
    if (h0.norm() == 0.0) continue;
    consider(ascend(obj, h0, cfg.max_iterations));
    ++best.starts_used;
  }

  if (n <= 3 && cfg.certify_samples > 0) {
    const Matrix pts = sphere_samples(n, cfg.certify_samples);
    const Vector vals = obj.values(pts);
    Eigen::Index arg = 0;
    const double sampled = vals.maxCoeff(&arg);
    best.certified = sampled <= best.value + cfg.certify_tol;
    if (sampled > best.value) {
      consider(ascend(obj, pts.col(arg), cfg.max_iterations));
      ++best.starts_used;
    }
  }
  return best;
}

SphereMaxResult max_g(const SplitSystem& sys, const SphereSearchConfig& cfg) {
  return sphere_max(sys, Vector::Zero(sys.B.rows()), 1.0, cfg);
}

std::string to_string(ReachStatus s) {
  switch (s) {
    case ReachStatus::kReachable: return "reachable";
    case ReachStatus::kUnreachable: return "unreachable";
    case ReachStatus::kIndeterminate: return "indeterminate";
  }
  return "unknown";
}

std::string to_string(Asymptotic a) {
  switch (a) {
    case Asymptotic::kReachableEventually: return "reachable_eventually";
    case Asymptotic::kUnreachableEventually: return "unreachable_eventually";
    case Asymptotic::kIndeterminate: return "indeterminate";
  }
  return "unknown";
}

double indeterminate_band(const Vector& d) { return 1e-6 * (1.0 + d.norm()); }

namespace {

void validate_query(const ReachQuery& q) {
  const Eigen::Index n = q.sys.B.rows();
  if (q.x0.size() != n || q.target.center.size() != n) {
    throw Error(ErrorCode::kInvalidInput, "x0 and x_goal must have dimension n");
  }
  if (!(q.target.radius >= 0.0)) {
    throw Error(ErrorCode::kInvalidInput, "target radius must be nonnegative");
  }
  if (!(q.horizon > 0.0) || !std::isfinite(q.horizon)) {
    throw Error(ErrorCode::kInvalidInput, "horizon must be positive and finite");
  }
}

ReachVerdict classify(const SphereMaxResult& r, const ReachQuery& q, double t) {
  ReachVerdict v;
  v.value = r.value;
  v.band = indeterminate_band(q.d());
  v.best_t = t;
  v.h = r.h;
  v.certified = r.certified;
  const double eps = q.target.radius;
  if (r.value <= eps - v.band) {
    v.status = ReachStatus::kReachable;
  } else if (r.value > eps + v.band) {
    v.status = ReachStatus::kUnreachable;
  } else {
    v.status = ReachStatus::kIndeterminate;
  }
  return v;
}

}  // namespace

ReachVerdict reachable_at_time(const ReachQuery& q, const SphereSearchConfig& cfg) {
  validate_query(q);
  const Vector offset = q.x0 - q.target.center;
  return classify(sphere_max(q.sys, offset, std::sqrt(q.horizon), cfg), q, q.horizon);
}

ReachVerdict reachable_by_time(const ReachQuery& q, const SphereSearchConfig& cfg) {
  validate_query(q);
  const Vector offset = q.x0 - q.target.center;
  SphereSearchConfig probe_cfg = cfg;
  probe_cfg.certify_samples = 0;
  auto objective = [&](double s) { return sphere_max(q.sys, offset, s, probe_cfg).value; };
  if (offset.norm() <= q.target.radius - indeterminate_band(q.d())) {
    return classify(sphere_max(q.sys, offset, 0.0, cfg), q, 0.0);
  }

  double lo = 0.0, hi = std::sqrt(q.horizon);
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - inv_phi * (hi - lo), x2 = lo + inv_phi * (hi - lo);
  double f1 = objective(x1), f2 = objective(x2);
  for (int it = 0; it < 80 && hi - lo > 1e-9 * (1.0 + hi); ++it) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = objective(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = objective(x2);
    }
  }
  // The interior search never probes the endpoints themselves.
  double best_s = f1 <= f2 ? x1 : x2;
  double best_f = std::min(f1, f2);
  for (double s : {0.0, std::sqrt(q.horizon)}) {
    const double f = objective(s);
    if (f < best_f) {
      best_f = f;
      best_s = s;
    }
  }
  return classify(sphere_max(q.sys, offset, best_s, cfg), q, std::min(best_s * best_s, q.horizon));
}

Asymptotic classify_asymptotic(const SplitSystem& sys, const Tolerance& tol) {
  switch (is_loss_tolerable(sys, tol).verdict) {
    case Verdict::kTolerable: return Asymptotic::kReachableEventually;
    case Verdict::kNotTolerable: return Asymptotic::kUnreachableEventually;
    case Verdict::kIndeterminate: return Asymptotic::kIndeterminate;
  }
  return Asymptotic::kIndeterminate;
}

double min_reach_time(const SplitSystem& sys, const Vector& x0, const TargetBall& target,
                      const Tolerance& tol, const SphereSearchConfig& cfg) {
  if (classify_asymptotic(sys, tol) != Asymptotic::kReachableEventually) {
    throw Error(ErrorCode::kNotEventuallyReachable, "F is not positive definite for this loss");
  }
  ReachQuery q{sys, x0, target, 1.0};
  validate_query(q);
  const Vector offset = x0 - target.center;
  const double dist = offset.norm();
  if (dist <= target.radius) return 0.0;

  SphereSearchConfig probe_cfg = cfg;
  probe_cfg.certify_samples = 0;
  auto holds = [&](double s) { return sphere_max(sys, offset, s, probe_cfg).value <= target.radius; };

  // The sphere maximum is at most |d| + s max g, so this s is a first guess
  // for the upper bracket.
  const double gmax = max_g(sys, probe_cfg).value;
  double hi = (dist - target.radius) / std::max(-gmax, 1e-300);
  for (int k = 0; k < 200 && !holds(hi); ++k) hi *= 2.0;
  if (!holds(hi)) {
    throw Error(ErrorCode::kNumericalFailure, "could not bracket the minimum reach time");
  }
  double lo = 0.0;
  while (hi - lo > 5e-5 * hi) {
    const double mid = 0.5 * (lo + hi);
    (holds(mid) ? hi : lo) = mid;
  }
  return hi * hi;
}

}  // namespace resilock
