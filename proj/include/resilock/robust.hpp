#pragma once

#include <limits>
#include <string>
#include <vector>

#include "resilock/linalg.hpp"
#include "resilock/resilience.hpp"
#include "resilock/simulator.hpp"

namespace resilock {

/// {x : (x - center)^T shape (x - center) <= 1}.
struct Ellipsoid {
  Vector center;
  SymMatrix shape;
};

/// Scalar disturbance set: center (min+max)/2, shape 4/(max-min)^2.
Ellipsoid build_disturbance_ellipsoid(const ActuatorRange& range);

/// Diagonal control set with P_ii = min(4/span_i^2, q).
Ellipsoid build_control_ellipsoid(const std::vector<ActuatorRange>& ranges, double q);

struct RobustSetup {
  Matrix A;
  Matrix B;
  Matrix C;
  Ellipsoid control;
  Ellipsoid disturbance;
  Vector x0;
  double T = 25.0;
  double dt = 1e-3;
  double x0_scale = 1e-6;  ///< X(0) = x0_scale I
  bool regularize_pi = true;
  double pi_floor = 1e-8;
};

/// Setup for a single-actuator loss; ellipsoids come from the actuator
/// ranges, which must be present.
RobustSetup make_robust_setup(const SystemModel& model, const LossScenario& loss, const Vector& x0,
                              double T = 25.0);

struct RobustRun {
  Vector l;
  double mu = 0.0;
  std::vector<double> times;
  Matrix x_minus;               ///< n x (N+1) centers
  std::vector<double> eigmin;   ///< min eig of X at each grid time reached
  Matrix X_final;
  bool feasible = false;
  bool pi_regularized = false;  ///< the floor on pi was active at some step
};

/// RK4 integration of the center and shape ODEs for direction l (unit) and
/// radius mu. Stops at the first grid time where X is not PSD.
RobustRun integrate_internal_approx(const RobustSetup& setup, const Vector& l, double mu);

struct RadiusCandidate {
  Vector l;
  double mu = std::numeric_limits<double>::infinity();
};

struct RadiusResult {
  double mu = std::numeric_limits<double>::infinity();
  Vector l;
  std::vector<RadiusCandidate> candidates;
};

/// Smallest feasible mu per direction (doubling, then bisection to relative
/// 1e-2), minimized over the candidates. Throws NoFeasibleMu if none is
/// feasible up to mu_max.
RadiusResult min_guaranteed_radius(const RobustSetup& setup, const std::vector<Vector>& l_candidates,
                                   double mu_max = 1e7);

/// e_1 ... e_n followed by x0/|x0| when x0 != 0.
std::vector<Vector> default_l_candidates(const Vector& x0);

/// CSV with header t,eigmin.
std::string robust_csv(const RobustRun& run);

}  // namespace resilock
