#include "netarm/presets.hpp"

namespace netarm::io {

namespace {

using sim::ControllerMode;
using sim::ScenarioConfig;

// Six distinct nonsingular start configurations spreading the initial
// end-effector positions over roughly [1.6, 2.7] x [0.25, 0.95] m.
constexpr double kQ0[6][2] = {
    {-1.2430497271, 2.4894605446}, {-1.6684888857, 2.5117581524},
    {-1.1715696085, 2.2858063697}, {-1.3754397953, 2.2553039988},
    {-1.1048494209, 2.1125332623}, {-1.1759871695, 2.0476187262}};

constexpr double kThetaHat0[6][2] = {{1.5, 2.5}, {3.2, 3.2}, {2.6, 2.8},
                                     {3.2, 2.7}, {3.5, 2.9}, {1.3, 2.8}};

ScenarioConfig six_ring_base() {
  ScenarioConfig cfg;
  cfg.graph = graph::DirectedGraph::ring(6, 0.5, 0.5);
  cfg.robots.assign(6, {{Vec2(2.0, 3.0)}, {Vec3(4.0, 1.0, 1.5)}});
  cfg.q0.resize(6);
  cfg.qdot0.assign(6, Vec2::Zero());
  cfg.theta_hat0.resize(6);
  cfg.vartheta_hat0.assign(6, Vec3::Zero());
  for (int i = 0; i < 6; ++i) {
    cfg.q0[i] = Vec2(kQ0[i][0], kQ0[i][1]);
    cfg.theta_hat0[i] = Vec2(kThetaHat0[i][0], kThetaHat0[i][1]);
  }
  // Gains, projection box, dt and the observer offset keep their defaults
  // (K = 30 I, Gamma = 10 I, Lambda = 10 I, alpha = beta = 10, lambda = 25).
  cfg.dt = 0.005;
  cfg.t_end = 60.0;
  cfg.seed = 12345;
  return cfg;
}

void add_stimulus(ScenarioConfig& cfg) {
  cfg.stimulus.enabled = true;
  cfg.stimulus.agent = 0;
  cfg.stimulus.params = {};  // t_on 10 s, kd 15, kp 30, x_h (2.6, 0.9)
}

ScenarioConfig teleop_base() {
  ScenarioConfig cfg;
  cfg.graph.weights = Eigen::MatrixXd::Zero(2, 2);
  cfg.graph.delays = Eigen::MatrixXd::Zero(2, 2);
  cfg.graph.weights(0, 1) = cfg.graph.weights(1, 0) = 1.0;
  cfg.mode = ControllerMode::kTeleopPd;
  cfg.robots.assign(2, {{Vec2(2.0, 3.0)}, {Vec3(4.0, 1.0, 1.5)}});
  cfg.q0.assign(2, Vec2(0.6, 1.2));
  cfg.qdot0.assign(2, Vec2::Zero());
  cfg.theta_hat0.assign(2, Vec2(2.0, 3.0));
  cfg.vartheta_hat0.assign(2, Vec3::Zero());
  cfg.teleop.kd = 2.0 * Mat2::Identity();
  cfg.teleop.kp = 10.0 * Mat2::Identity();
  cfg.teleop.tau_h = Vec2(0.05, 0.03);
  cfg.dt = 0.005;
  cfg.t_end = 10.0;
  cfg.seed = 12345;
  return cfg;
}

Preset build(std::string_view name) {
  Preset p;
  p.name = std::string(name);
  if (name == "sec5a-consensus") {
    p.config = six_ring_base();
  } else if (name == "sec5b-alpha10") {
    p.config = six_ring_base();
    add_stimulus(p.config);
  } else if (name == "sec5b-alpha005") {
    p.config = six_ring_base();
    add_stimulus(p.config);
    p.config.gains.alpha = 0.05;
  } else if (name == "sec5b-alpha0") {
    p.config = six_ring_base();
    add_stimulus(p.config);
    p.config.gains.alpha = 0.0;
  } else if (name == "sec5c-pi") {
    p.config = six_ring_base();
    add_stimulus(p.config);
    p.config.mode = ControllerMode::kKinematicPi;
    p.config.gains.alpha = 0.0;
  } else if (name == "sec5c-p-only") {
    p.config = six_ring_base();
    add_stimulus(p.config);
    p.config.mode = ControllerMode::kKinematicPi;
    p.config.gains.alpha = 0.0;
    p.config.pi.ki = Mat2::Zero();
  } else if (name == "sec5c-noise") {
    p.config = six_ring_base();
    add_stimulus(p.config);
    p.config.mode = ControllerMode::kKinematicPi;
    p.config.gains.alpha = 0.0;
    p.config.pi.ki = Mat2::Zero();
    p.config.noise = {0.002, 0.005, 0.01};
  } else if (name == "teleop-damping") {
    p.kind = PresetKind::kTeleopSweep;
    p.config = teleop_base();
  }
  return p;
}

}  // namespace

std::vector<std::string> preset_names() {
  return {"sec5a-consensus", "sec5b-alpha10", "sec5b-alpha005",
          "sec5b-alpha0",    "sec5c-pi",      "sec5c-p-only",
          "sec5c-noise",     "teleop-damping"};
}

std::optional<Preset> find_preset(std::string_view name) {
  for (const std::string& known : preset_names())
    if (known == name) return build(name);
  return std::nullopt;
}

}  // namespace netarm::io
