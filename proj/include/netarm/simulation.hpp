#pragma once

#include <optional>
#include <random>
#include <vector>

#include "netarm/delay_channel.hpp"
#include "netarm/scenario.hpp"

namespace netarm::sim {

/// Per-step measurement noise offsets, one triple per agent. All zero (and
/// skipped entirely) when the corresponding standard deviation is zero, so
/// noise-free views equal the truth bit for bit.
struct StepNoise {
  std::vector<Vec2> dq, dqdot, dx;
  bool any = false;
};

StepNoise draw_measurement_noise(const NoiseSpec& spec, int n,
                                 std::mt19937_64& rng);

using AgentStates = std::vector<control::AgentState>;

/// Everything the controller computed at one evaluation instant.
struct AgentEval {
  Vec2 x, xdot;           // true task-space position and velocity
  Vec2 u, qdot_r, qddot_r;
  Vec2 xdot_o, xddot_o;   // observer rate and its derivative (for channels)
  Vec2 s_star, s;
  Vec2 tau, tau_h;
  Vec2 theta_hat_dot;
  Vec3 vartheta_hat_dot;
  Vec2 qddot;
  double sjj_rate = 0.0;
  double V = 0.0;
  double Vstar_shifted = 0.0;
};

struct Derivatives {
  AgentStates dot;
  std::vector<AgentEval> eval;
};

/// One scenario instance: owns the delay channels and the noise stream.
/// Evaluation and stepping are deterministic functions of (time, states,
/// per-step noise); channels advance only through push_channels.
class World {
 public:
  explicit World(ScenarioConfig cfg);

  const ScenarioConfig& config() const { return cfg_; }
  int n() const { return cfg_.n(); }

  AgentStates initial_states() const;

  /// Closed-loop derivative of all agents at time t. side selects the
  /// one-sided limit used when t lands exactly on a breakpoint of the
  /// delayed signals (Left for stage evaluations at a step's right
  /// endpoint).
  Derivatives closed_loop_rhs(double t, const AgentStates& states,
                              const StepNoise& noise,
                              network::Side side = network::Side::Right) const;

  /// Advances one integration step (RK4 by default, explicit Euler
  /// otherwise). k1, when given, must be closed_loop_rhs(t, states, noise).
  AgentStates step(double t, const AgentStates& states, const StepNoise& noise,
                   const Derivatives* k1 = nullptr) const;

  /// Records the agents' observer samples into their outgoing channels.
  /// At a prefill boundary of an incoming edge the push is doubled with the
  /// left-limit rates so interpolation never blends across the rate jump.
  void push_channels(double t, const AgentStates& states,
                     const Derivatives& d);

  /// Runs the configured scenario from t = 0 to t_end and captures a Trace.
  Trace run();

 private:
  void check_sane(double t, const AgentStates& states) const;

  ScenarioConfig cfg_;
  std::vector<std::vector<std::optional<network::DelayChannel>>> channels_;
  std::vector<std::vector<double>> prefill_boundaries_;  // per source agent
  std::mt19937_64 rng_;
};

/// Convenience wrapper: World(config).run().
Trace run_scenario(const ScenarioConfig& cfg);

}  // namespace netarm::sim
