#pragma once

#include <cstdint>

#include "resilock/linalg.hpp"
#include "resilock/resilience.hpp"

namespace resilock {

/// Ball {x : |x - center| <= radius}.
struct TargetBall {
  Vector center;
  double radius = 0.0;
};

struct ReachQuery {
  SplitSystem sys;
  Vector x0;
  TargetBall target;
  double horizon = 1.0;  ///< T [s]

  /// d = x_goal - x0.
  Vector d() const { return target.center - x0; }
};

struct SphereSearchConfig {
  int random_starts = 64;
  std::uint64_t seed = 0x5eedULL;
  int max_iterations = 400;
  /// Dense-sampling check for n <= 3; 0 disables it.
  int certify_samples = 100000;
  double certify_tol = 1e-4;
};

struct SphereMaxResult {
  double value = 0.0;
  Vector h;  ///< unit argmax
  int starts_used = 0;
  /// Dense sampling found nothing above value + certify_tol.
  bool certified = false;
};

/// g(h) = |C^T h| - |B^T h| for unit h.
double g_eval(const SplitSystem& sys, const Vector& h);

/// Maximizes <h, c> + s g(h) over the unit sphere by multi-start projected
/// gradient ascent. Starts: eigenvectors of F, C C^T and B B^T (both signs),
/// +-c/|c|, then random directions.
SphereMaxResult sphere_max(const SplitSystem& sys, const Vector& c, double s,
                           const SphereSearchConfig& cfg = {});

/// max over the unit sphere of g.
SphereMaxResult max_g(const SplitSystem& sys, const SphereSearchConfig& cfg = {});

enum class ReachStatus { kReachable, kUnreachable, kIndeterminate };

std::string to_string(ReachStatus s);

struct ReachVerdict {
  ReachStatus status = ReachStatus::kIndeterminate;
  double value = 0.0;  ///< sphere maximum compared against epsilon
  double band = 0.0;   ///< half-width of the indeterminate band
  double best_t = 0.0;
  Vector h;
  bool certified = false;

  bool reachable() const { return status == ReachStatus::kReachable; }
};

/// Half-width 1e-6 (1 + |d|) of the band around epsilon.
double indeterminate_band(const Vector& d);

/// max_h <h, x0 - x_goal> + sqrt(T) g(h) <= epsilon.
ReachVerdict reachable_at_time(const ReachQuery& q, const SphereSearchConfig& cfg = {});

/// Minimizes the at-time sphere maximum over t in [0, T]. The objective is
/// convex in s = sqrt(t), so a golden-section search on s is exact up to the
/// sphere-max accuracy.
ReachVerdict reachable_by_time(const ReachQuery& q, const SphereSearchConfig& cfg = {});

enum class Asymptotic { kReachableEventually, kUnreachableEventually, kIndeterminate };

std::string to_string(Asymptotic a);

Asymptotic classify_asymptotic(const SplitSystem& sys, const Tolerance& tol = {});

/// Smallest T with reachable_at_time true, to relative 1e-4. Throws
/// NotEventuallyReachable unless F is positive definite.
double min_reach_time(const SplitSystem& sys, const Vector& x0, const TargetBall& target,
                      const Tolerance& tol = {}, const SphereSearchConfig& cfg = {});

}  // namespace resilock
