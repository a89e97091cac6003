#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "resilock/resilience.hpp"
#include "resilock/simulator.hpp"

namespace resilock {

/// Roll/pitch/yaw rate model with canard, right elevon, left elevon and
/// rudder. Ranges in radians.
SystemModel admire_model();

/// Published LQR gain for the canard-loss case (Q = I, R = I).
Matrix admire_printed_lqr_gain();

/// Driftless (V_t, q, r) model with twelve actuators; the afterburner
/// column already carries its 20% thrust share.
ControlMatrix admire_driftless_bbar();

enum class AdmireLoss { kCanard, kRightElevon, kLeftElevon, kRudder };
enum class AdmireController { kResilient, kLqr, kLqrPrinted, kNone };

std::string to_string(AdmireLoss loss);
AdmireLoss parse_admire_loss(const std::string& name);
int admire_loss_index(AdmireLoss loss);

struct AdmireRunConfig {
  AdmireLoss loss = AdmireLoss::kCanard;
  AdmireController controller = AdmireController::kResilient;
  std::uint64_t seed = 1;
  double T = 25.0;
  double dt = 1e-3;
  double dwell = 0.1;
  bool saturate = true;
  /// Resilient gain; defaults to alpha_star.
  std::optional<double> alpha;
};

struct AdmireRun {
  Trajectory trajectory;
  RunSummary summary;
  std::optional<SynthesisGains> gains;
};

/// x0 = (1, 1, 1), target ball of radius 0.1 at the origin. Throws
/// NotWellDefined when the remaining actuators leave B B^T singular.
AdmireRun run_admire(const AdmireRunConfig& cfg);

enum class DriftlessConfig { kNominal, kThrustScaled };

/// Single-loss report on the twelve-actuator model. kThrustScaled multiplies
/// both thrust-vectoring columns by factor first.
ResilienceReport run_admire_driftless(DriftlessConfig config, double factor = 0.014);

}  // namespace resilock
