#include "resilock/admire.hpp"

#include <cmath>

#include "resilock/error.hpp"

namespace resilock {

namespace {

constexpr double kDeg = M_PI / 180.0;

}  // namespace

SystemModel admire_model() {
  Matrix a(3, 3);
  a << -0.997, 0.0, 0.618,
       0.0, -0.506, 0.0,
       -0.094, 0.0, -0.213;
  Matrix b(3, 4);
  b << 0.0, -4.242, 4.242, 1.487,
       1.653, -1.274, -1.274, 0.002,
       0.0, -0.281, 0.281, -0.882;
  std::vector<ActuatorRange> ranges{{-25 * kDeg, 55 * kDeg},
                                    {-30 * kDeg, 30 * kDeg},
                                    {-30 * kDeg, 30 * kDeg},
                                    {-30 * kDeg, 30 * kDeg}};
  return {a, ControlMatrix(b, {"canard", "right_elevon", "left_elevon", "rudder"}, ranges), false};
}

Matrix admire_printed_lqr_gain() {
  Matrix k(3, 3);
  k << -0.5825, -0.5358, -0.1659,
       0.5826, -0.5360, 0.1653,
       0.2198, 0.0007, -0.7564;
  return k;
}

ControlMatrix admire_driftless_bbar() {
  Matrix bt(12, 3);
  bt << -2.7, 7.1, -1.9,
        -2.7, 7.1, 1.9,
        -1.0, -7.7, -1.1,
        -1.8, -13, -3.0,
        -1.8, -13, 3.0,
        -1.0, -7.7, 1.1,
        -1.9, 0.0, -11,
        -0.8, -0.5, 0,
        -4.3, -0.7, 0,
        1.2, 0, 0,
        -71, 1.2, -710,
        -113, -882, 0;
  return ControlMatrix(bt.transpose(),
                       {"right_canard", "left_canard", "right_outboard_elevon", "right_inboard_elevon",
                        "left_inboard_elevon", "left_outboard_elevon", "rudder", "leading_edge_flaps",
                        "landing_gear", "afterburner", "yaw_thrust_vectoring", "pitch_thrust_vectoring"});
}

std::string to_string(AdmireLoss loss) {
  switch (loss) {
    case AdmireLoss::kCanard: return "canard";
    case AdmireLoss::kRightElevon: return "right_elevon";
    case AdmireLoss::kLeftElevon: return "left_elevon";
    case AdmireLoss::kRudder: return "rudder";
  }
  return "unknown";
}

AdmireLoss parse_admire_loss(const std::string& name) {
  for (auto loss : {AdmireLoss::kCanard, AdmireLoss::kRightElevon, AdmireLoss::kLeftElevon, AdmireLoss::kRudder}) {
    if (name == to_string(loss)) return loss;
  }
  if (name == "elevon") return AdmireLoss::kRightElevon;
  throw Error(ErrorCode::kInvalidInput, "unknown ADMIRE scenario '" + name + "'");
}

int admire_loss_index(AdmireLoss loss) { return static_cast<int>(loss); }

AdmireRun run_admire(const AdmireRunConfig& cfg) {
  const SystemModel model = admire_model();
  const LossScenario loss({admire_loss_index(cfg.loss)}, model.bbar.m());
  const SplitSystem sys = split(model.bbar, loss);
  const Vector x0 = Vector::Ones(3);
  const Vector x_goal = Vector::Zero(3);

  std::optional<std::vector<ActuatorRange>> saturation;
  if (cfg.saturate) {
    saturation.emplace();
    for (int j : sys.controlled) saturation->push_back((*model.bbar.ranges())[j]);
  }

  AdmireRun run;
  Controller controller = NoControl{};
  switch (cfg.controller) {
    case AdmireController::kResilient:
      try {
        run.gains = synthesize(sys, x0, x_goal, cfg.alpha);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kSingularGram) throw;
        throw Error(ErrorCode::kNotWellDefined,
                    "B B^T is not invertible after losing the " + to_string(cfg.loss));
      }
      controller = ResilientController(sys, *run.gains, x_goal, saturation);
      break;
    case AdmireController::kLqr:
      controller = LqrControl{care_lqr_gain(model.A, sys.B, Matrix::Identity(3, 3),
                                            Matrix::Identity(sys.B.cols(), sys.B.cols())),
                              saturation};
      break;
    case AdmireController::kLqrPrinted:
      if (cfg.loss != AdmireLoss::kCanard) {
        throw Error(ErrorCode::kInvalidInput, "the published gain is for the canard loss only");
      }
      controller = LqrControl{admire_printed_lqr_gain(), saturation};
      break;
    case AdmireController::kNone:
      break;
  }

  const InputSignal w = generate_w({(*model.bbar.ranges())[admire_loss_index(cfg.loss)]}, cfg.seed, cfg.T, cfg.dwell);
  run.trajectory = integrate(model, loss, controller, w, x0, x_goal, cfg.T, cfg.dt);
  run.summary = summarize(run.trajectory);
  return run;
}

ResilienceReport run_admire_driftless(DriftlessConfig config, double factor) {
  ControlMatrix bbar = admire_driftless_bbar();
  if (config == DriftlessConfig::kThrustScaled) {
    bbar = bbar.with_scaled_column(10, factor).with_scaled_column(11, factor);
  }
  return check_p_resilience(bbar, 1);
}

}  // namespace resilock
