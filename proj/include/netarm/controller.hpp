#pragma once

#include <span>
#include <utility>

#include "netarm/delay_channel.hpp"
#include "netarm/robot.hpp"
#include "netarm/types.hpp"

namespace netarm::control {

/// Gains of the observer-based adaptive consensus controller.
struct Gains {
  double alpha = 10.0;   // consensus integral gain; 1/alpha indexes how far
                         // an external torque can shift the equilibrium
  double beta = 10.0;    // observer proportional gain
  double lambda = 25.0;  // observer integral gain
  Mat2 K = 30.0 * Mat2::Identity();        // sliding-vector torque gain
  Mat3 Gamma = 10.0 * Mat3::Identity();    // dynamic adaptation gain
  Mat2 Lambda = 10.0 * Mat2::Identity();   // kinematic adaptation gain
  Vec2 theta_lo = Vec2::Constant(0.5);     // projection box, keeps the
  Vec2 theta_hi = Vec2::Constant(5.0);     // estimated Jacobian away from
                                           // singular length estimates
  double det_floor = 1e-3;                 // minimum |det Jhat| accepted
};

/// Inner-loop PI velocity servo gains (the industrial-robot abstraction).
struct PiGains {
  Mat2 kp = 60.0 * Mat2::Identity();
  Mat2 ki = 10.0 * Mat2::Identity();
};

/// Task-space PD input applied by an operator from t_on onward.
struct StimulusParams {
  double t_on = 10.0;
  double kd = 15.0;
  double kp = 30.0;
  Vec2 x_h = {2.6, 0.9};
};

/// Continuous state of one agent: plant, observer, running integrals and
/// parameter estimates. I_sjj accumulates s'J'Js for the energy diagnostics
/// and feeds nothing back into the control loop.
struct AgentState {
  Vec2 q = Vec2::Zero();
  Vec2 qdot = Vec2::Zero();
  Vec2 x_o = Vec2::Zero();          // observed task-space position
  Vec2 I_s = Vec2::Zero();          // integral of s_star
  Vec2 I_x = Vec2::Zero();          // integral of the observation error
  Vec2 theta_hat = Vec2::Zero();    // kinematic parameter estimate
  Vec3 vartheta_hat = Vec3::Zero(); // dynamic parameter estimate
  Vec2 I_v = Vec2::Zero();          // velocity-servo error integral (PI mode)
  double I_sjj = 0.0;

  static constexpr int kDim = 18;
  void to_flat(double* dst) const;
  static AgentState from_flat(const double* src);
};

/// Weighted delayed sample from one in-neighbor.
struct NeighborTerm {
  double weight = 0.0;
  network::NeighborSample sample;
};
using NeighborSpan = std::span<const NeighborTerm>;

/// Observed-position consensus sliding vector in its algebraic form
/// -alpha*I_s - beta*(x_o - x) - lambda*I_x; x is the measured task-space
/// position.
Vec2 s_star(const AgentState& st, const Vec2& x, const Gains& g);

/// Consensus feedback -sum_j w_ij (x_o - x_oj(t - T_ij)) - alpha*I_s.
/// Invalid neighbor samples contribute their zero payload (pre-delay phase).
Vec2 consensus_input(const AgentState& st, NeighborSpan neighbors,
                     const Gains& g);

Mat2 estimated_jacobian(const AgentState& st);

struct ReferenceVelocity {
  Vec2 qdot_r;
  Vec2 u;       // task-space consensus feedback
  Mat2 jhat;
  double det;
};

/// Joint reference velocity Jhat^-1 * u.
/// Throws SingularEstimatedJacobian when |det Jhat| < det_floor.
ReferenceVelocity reference_velocity(const AgentState& st,
                                     NeighborSpan neighbors, const Gains& g);

/// Observer rate: u - beta*(x_o - x) - lambda*I_x. Reads neither qdot nor
/// any task-space velocity; that independence is the point of the design.
Vec2 observer_rhs(const AgentState& st, const Vec2& x, NeighborSpan neighbors,
                  const Gains& g);

/// Kinematic adaptation -Lambda * Z(q, qdot_r)' * (x_o - x), with each
/// component's rate zeroed when it would push theta_hat out of the box.
Vec2 adaptation_kinematics(const AgentState& st, const Vec2& x,
                           const Vec2& qdot_r, const Gains& g);

/// Joint reference acceleration, the exact time derivative of the
/// reference velocity along the closed loop: Jhat^-1 (udot - Jhatdot qdot_r)
/// with udot = -sum_j w_ij (xdot_o - xdot_oj(t - T_ij)) - alpha s_star.
/// Needs the neighbors' delayed observer rates, carried by the same samples.
Vec2 reference_acceleration(const AgentState& st, const Vec2& x,
                            NeighborSpan neighbors, const Gains& g);

/// Torque law -K (qdot - qdot_r) + Y(q, qdot, qdot_r, qddot_r) vartheta_hat.
Vec2 torque_dynamic(const AgentState& st, const Vec2& qdot_r,
                    const Vec2& qddot_r, const Gains& g);

/// Dynamic adaptation -Gamma * Y' * (qdot - qdot_r).
Vec3 adaptation_dynamics(const AgentState& st, const Vec2& qdot_r,
                         const Vec2& qddot_r, const Gains& g);

/// Inner-loop servo torque Kp (qdot_r - qdot) + Ki * I_v.
Vec2 torque_pi_servo(const AgentState& st, const Vec2& qdot_r,
                     const PiGains& pi);

/// Operator torque J(q)' [-kd*xdot - kp*(x - x_h)] from t_on onward, zero
/// before; true kinematics throughout. At t == t_on exactly, the side picks
/// the one-sided limit (Right => active).
Vec2 external_stimulus_pd(double t, const Vec2& q, const Vec2& qdot,
                          const robot::KinematicParams& kin,
                          const StimulusParams& stim,
                          network::Side side = network::Side::Right);

/// Joint-space PD coupling of a two-arm teleoperator, operator torque on
/// the first arm. Gravity terms vanish in the horizontal plane.
std::pair<Vec2, Vec2> teleop_pd_torques(const Vec2& q1, const Vec2& qd1,
                                        const Vec2& q2, const Vec2& qd2,
                                        const Mat2& kd, const Mat2& kp,
                                        const Vec2& tau_h);

/// Sliding-vector energy 0.5 s'M s + 0.5 dvartheta' Gamma^-1 dvartheta,
/// non-increasing along stimulus-free runs of the torque controller.
double lyapunov_value(const AgentState& st, const Vec2& qdot_r,
                      const robot::RobotParams& truth, const Gains& g);

/// Observer-loop energy up to an additive constant: 0.5|dx_o|^2 +
/// (lambda/2)|I_x|^2 - I_sjj/(2 beta) + 0.5 dtheta' Lambda^-1 dtheta.
/// The omitted constant is fixed per run (the final accumulated I_sjj over
/// 2 beta), so monotonicity checks are unaffected.
double lyapunov_observer_value(const AgentState& st, const Vec2& x,
                               const robot::KinematicParams& truth_kin,
                               const Gains& g);

}  // namespace netarm::control
