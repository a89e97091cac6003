#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "resilock/linalg.hpp"
#include "resilock/resilience.hpp"
#include "resilock/synthesis.hpp"

namespace resilock {

struct SystemModel {
  Matrix A;
  ControlMatrix bbar;
  bool driftless = false;  ///< A treated as zero

  Matrix drift() const { return driftless ? Matrix::Zero(bbar.n(), bbar.n()) : A; }
};

/// Piecewise-constant signal: column k of samples holds on [k dt, (k+1) dt).
struct InputSignal {
  Matrix samples;  ///< channels x N
  double dt = 0.1;
  std::vector<ActuatorRange> ranges;

  /// Sample active at time t; times past the end hold the last sample.
  Vector at(double t) const;
  /// sqrt(sum_k |samples_k|^2 dt).
  double l2_norm() const;
};

/// Uniform draws from each channel range every dwell seconds over [0, T],
/// then scaled by 1 / max(1, |w|_L2). Deterministic in seed.
InputSignal generate_w(const std::vector<ActuatorRange>& ranges, std::uint64_t seed, double T,
                       double dwell = 0.1);

struct NoControl {};

/// u = -K (x - x_goal), clamped when saturation is set.
struct LqrControl {
  Matrix K;
  std::optional<std::vector<ActuatorRange>> saturation;
};

using Controller = std::variant<NoControl, LqrControl, ResilientController>;

struct Trajectory {
  std::vector<double> times;
  Matrix states;     ///< n x (N+1)
  Matrix controls;   ///< (m-p) x (N+1)
  Matrix disturbances;  ///< p x (N+1)
  std::vector<double> distances;
  /// Grid points where at least one controlled channel sits on a bound.
  std::vector<bool> saturated;

  std::size_t size() const { return times.size(); }
};

/// Fixed-step RK4 of x' = A x + B u + C w. w is held constant over each step
/// and u is re-evaluated at every stage. Throws NonFiniteState on blow-up.
Trajectory integrate(const SystemModel& model, const LossScenario& loss, const Controller& controller,
                     const InputSignal& w, const Vector& x0, const Vector& x_goal, double T,
                     double dt = 1e-3);

struct RunSummary {
  double final_distance = 0.0;
  double u_l2 = 0.0;  ///< rectangle rule over the first N grid points
  double w_l2 = 0.0;
  double saturation_fraction = 0.0;
};

RunSummary summarize(const Trajectory& traj);

/// CSV with header t,x1..xn,u1..,w1..,distance.
std::string trajectory_csv(const Trajectory& traj);

}  // namespace resilock
