#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "netarm/controller.hpp"
#include "netarm/graph.hpp"
#include "netarm/robot.hpp"
#include "netarm/types.hpp"

namespace netarm::sim {

enum class ControllerMode { kDynamic, kKinematicPi, kTeleopPd };
enum class Integrator { kRk4, kEuler };

/// Gaussian measurement noise standard deviations seen by the controller;
/// the plant always integrates the true state.
struct NoiseSpec {
  double sigma_q = 0.0;     // rad
  double sigma_qdot = 0.0;  // rad/s
  double sigma_x = 0.0;     // m
};

struct StimulusSpec {
  bool enabled = false;
  int agent = 0;
  control::StimulusParams params;
};

/// Two-arm PD teleoperator parameters; tau_h is a constant operator torque
/// applied to the first arm from t = 0.
struct TeleopSpec {
  Mat2 kd = 2.0 * Mat2::Identity();
  Mat2 kp = 10.0 * Mat2::Identity();
  Vec2 tau_h = Vec2::Zero();
};

struct ScenarioConfig {
  graph::DirectedGraph graph;
  std::vector<robot::RobotParams> robots;
  std::vector<Vec2> q0;
  std::vector<Vec2> qdot0;
  std::vector<Vec2> theta_hat0;
  std::vector<Vec3> vartheta_hat0;
  control::Gains gains;
  control::PiGains pi;
  ControllerMode mode = ControllerMode::kDynamic;
  StimulusSpec stimulus;
  TeleopSpec teleop;
  NoiseSpec noise;
  double observer_init_offset = 0.02;  // x_o(0) = x(0) + offset per axis
  double dt = 0.005;
  double t_end = 60.0;
  Integrator integrator = Integrator::kRk4;
  std::uint64_t seed = 12345;

  int n() const { return graph.size(); }
};

/// One sampled row of an agent's trajectory: states plus derived signals.
struct AgentSample {
  Vec2 q, qdot, x, xdot, x_o, dx_o;
  Vec2 theta_hat;
  Vec3 vartheta_hat;
  Vec2 tau, s, s_star, I_s, I_x, I_v;
  double I_sjj = 0.0;
  double V = 0.0;
  double Vstar = 0.0;
};

/// Uniform-grid time series of a full scenario run.
struct Trace {
  double dt = 0.0;
  int n = 0;
  std::vector<double> t;
  std::vector<std::vector<AgentSample>> steps;  // [step][agent]

  std::size_t size() const { return t.size(); }
  const std::vector<AgentSample>& last() const { return steps.back(); }
};

}  // namespace netarm::sim
