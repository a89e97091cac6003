#include "resilock/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "resilock/error.hpp"

namespace resilock {

Vector InputSignal::at(double t) const {
  if (samples.cols() == 0) return Vector::Zero(samples.rows());
  const auto k = static_cast<Eigen::Index>(std::floor(t / dt));
  return samples.col(std::clamp<Eigen::Index>(k, 0, samples.cols() - 1));
}

double InputSignal::l2_norm() const { return std::sqrt(samples.squaredNorm() * dt); }

InputSignal generate_w(const std::vector<ActuatorRange>& ranges, std::uint64_t seed, double T,
                       double dwell) {
  if (!(T > 0.0) || !(dwell > 0.0)) {
    throw Error(ErrorCode::kInvalidInput, "T and dwell must be positive");
  }
  const auto count = static_cast<Eigen::Index>(std::ceil(T / dwell - 1e-9));
  InputSignal sig{Matrix(ranges.size(), count), dwell, ranges};
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (Eigen::Index k = 0; k < count; ++k) {
    for (std::size_t i = 0; i < ranges.size(); ++i) {
      sig.samples(i, k) = ranges[i].min + unit(rng) * (ranges[i].max - ranges[i].min);
    }
  }
  sig.samples /= std::max(1.0, sig.l2_norm());
  return sig;
}

namespace {

std::pair<Vector, bool> clamp_to(Vector u, const std::optional<std::vector<ActuatorRange>>& sat) {
  bool hit = false;
  if (sat) {
    for (Eigen::Index i = 0; i < u.size(); ++i) {
      const double c = std::clamp(u(i), (*sat)[i].min, (*sat)[i].max);
      hit = hit || c == (*sat)[i].min || c == (*sat)[i].max;
      u(i) = c;
    }
  }
  return {u, hit};
}

struct ControlEval {
  const Controller& controller;
  const Vector& x_goal;
  Eigen::Index channels;

  std::pair<Vector, bool> operator()(const Vector& x, const Vector& w) const {
    if (std::holds_alternative<NoControl>(controller)) {
      return {Vector::Zero(channels), false};
    }
    if (const auto* lqr = std::get_if<LqrControl>(&controller)) {
      return clamp_to(-lqr->K * (x - x_goal), lqr->saturation);
    }
    const auto& rc = std::get<ResilientController>(controller);
    const Vector u = rc.control_input(x, w);
    bool hit = false;
    if (rc.saturation()) {
      for (Eigen::Index i = 0; i < u.size(); ++i) {
        hit = hit || u(i) == (*rc.saturation())[i].min || u(i) == (*rc.saturation())[i].max;
      }
    }
    return {u, hit};
  }
};

}  // namespace

Trajectory integrate(const SystemModel& model, const LossScenario& loss, const Controller& controller,
                     const InputSignal& w, const Vector& x0, const Vector& x_goal, double T, double dt) {
  const SplitSystem sys = split(model.bbar, loss);
  const Eigen::Index n = model.bbar.n();
  const Matrix a = model.drift();
  if (x0.size() != n || x_goal.size() != n || a.rows() != n || a.cols() != n) {
    throw Error(ErrorCode::kInvalidInput, "state dimensions are inconsistent");
  }
  if (w.samples.rows() != sys.C.cols()) {
    throw Error(ErrorCode::kInvalidInput, "w must have one channel per lost actuator");
  }
  if (!(T > 0.0) || !(dt > 0.0)) {
    throw Error(ErrorCode::kInvalidInput, "T and dt must be positive");
  }
  if (const auto* lqr = std::get_if<LqrControl>(&controller)) {
    if (lqr->K.rows() != sys.B.cols() || lqr->K.cols() != n) {
      throw Error(ErrorCode::kInvalidInput, "LQR gain must be (m-p) x n");
    }
  }
  const auto steps = static_cast<Eigen::Index>(std::llround(T / dt));
  const ControlEval control{controller, x_goal, sys.B.cols()};

  Trajectory traj;
  traj.times.resize(steps + 1);
  traj.states.resize(n, steps + 1);
  traj.controls.resize(sys.B.cols(), steps + 1);
  traj.disturbances.resize(sys.C.cols(), steps + 1);
  traj.distances.resize(steps + 1);
  traj.saturated.resize(steps + 1);

  auto f = [&](const Vector& x, const Vector& wk) {
    return Vector(a * x + sys.B * control(x, wk).first + sys.C * wk);
  };
  Vector x = x0;
  for (Eigen::Index k = 0; k <= steps; ++k) {
    const double t = k * dt;
    // Mid-step sampling keeps w constant on the step even when a dwell
    // boundary coincides with a grid point.
    const Vector wk = w.at(k < steps ? t + 0.5 * dt : t);
    const auto [u, hit] = control(x, wk);
    traj.times[k] = t;
    traj.states.col(k) = x;
    traj.controls.col(k) = u;
    traj.disturbances.col(k) = wk;
    traj.distances[k] = (x - x_goal).norm();
    traj.saturated[k] = hit;
    if (k == steps) break;

    const Vector k1 = f(x, wk);
    const Vector k2 = f(x + 0.5 * dt * k1, wk);
    const Vector k3 = f(x + 0.5 * dt * k2, wk);
    const Vector k4 = f(x + dt * k3, wk);
    x += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!x.allFinite()) {
      throw Error(ErrorCode::kNonFiniteState, "state diverged at t = " + std::to_string(t + dt));
    }
  }
  return traj;
}

RunSummary summarize(const Trajectory& traj) {
  RunSummary s;
  const std::size_t n = traj.size();
  if (n == 0) return s;
  s.final_distance = traj.distances.back();
  if (n < 2) return s;
  const double dt = traj.times[1] - traj.times[0];
  const auto steps = static_cast<Eigen::Index>(n - 1);
  s.u_l2 = std::sqrt(traj.controls.leftCols(steps).squaredNorm() * dt);
  s.w_l2 = std::sqrt(traj.disturbances.leftCols(steps).squaredNorm() * dt);
  s.saturation_fraction =
      static_cast<double>(std::count(traj.saturated.begin(), traj.saturated.end(), true)) / n;
  return s;
}

std::string trajectory_csv(const Trajectory& traj) {
  std::ostringstream out;
  out.precision(17);
  out << "t";
  for (Eigen::Index i = 0; i < traj.states.rows(); ++i) out << ",x" << i + 1;
  for (Eigen::Index i = 0; i < traj.controls.rows(); ++i) out << ",u" << i + 1;
  for (Eigen::Index i = 0; i < traj.disturbances.rows(); ++i) out << ",w" << i + 1;
  out << ",distance\n";
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const auto col = static_cast<Eigen::Index>(k);
    out << traj.times[k];
    for (Eigen::Index i = 0; i < traj.states.rows(); ++i) out << ',' << traj.states(i, col);
    for (Eigen::Index i = 0; i < traj.controls.rows(); ++i) out << ',' << traj.controls(i, col);
    for (Eigen::Index i = 0; i < traj.disturbances.rows(); ++i) out << ',' << traj.disturbances(i, col);
    out << ',' << traj.distances[k] << '\n';
  }
  return out.str();
}

}  // namespace resilock
