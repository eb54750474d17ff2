#include "netarm/controller.hpp"

#include <cmath>

namespace netarm::control {

void AgentState::to_flat(double* dst) const {
  dst[0] = q(0);
  dst[1] = q(1);
  dst[2] = qdot(0);
  dst[3] = qdot(1);
  dst[4] = x_o(0);
  dst[5] = x_o(1);
  dst[6] = I_s(0);
  dst[7] = I_s(1);
  dst[8] = I_x(0);
  dst[9] = I_x(1);
  dst[10] = theta_hat(0);
  dst[11] = theta_hat(1);
  dst[12] = vartheta_hat(0);
  dst[13] = vartheta_hat(1);
  dst[14] = vartheta_hat(2);
  dst[15] = I_v(0);
  dst[16] = I_v(1);
  dst[17] = I_sjj;
}

AgentState AgentState::from_flat(const double* src) {
  AgentState st;
  st.q << src[0], src[1];
  st.qdot << src[2], src[3];
  st.x_o << src[4], src[5];
  st.I_s << src[6], src[7];
  st.I_x << src[8], src[9];
  st.theta_hat << src[10], src[11];
  st.vartheta_hat << src[12], src[13], src[14];
  st.I_v << src[15], src[16];
  st.I_sjj = src[17];
  return st;
}

Vec2 s_star(const AgentState& st, const Vec2& x, const Gains& g) {
  return -g.alpha * st.I_s - g.beta * (st.x_o - x) - g.lambda * st.I_x;
}

Vec2 consensus_input(const AgentState& st, NeighborSpan neighbors,
                     const Gains& g) {
  Vec2 u = -g.alpha * st.I_s;
  for (const NeighborTerm& nb : neighbors)
    u -= nb.weight * (st.x_o - nb.sample.x_o);
  return u;
}

Mat2 estimated_jacobian(const AgentState& st) {
  return robot::jacobian({st.theta_hat}, st.q);
}

ReferenceVelocity reference_velocity(const AgentState& st,
                                     NeighborSpan neighbors, const Gains& g) {
  ReferenceVelocity out;
  out.jhat = estimated_jacobian(st);
  out.det = out.jhat.determinant();
  if (std::abs(out.det) < g.det_floor) throw SingularEstimatedJacobian(out.det);
  out.u = consensus_input(st, neighbors, g);
  out.qdot_r = out.jhat.inverse() * out.u;
  return out;
}

Vec2 observer_rhs(const AgentState& st, const Vec2& x, NeighborSpan neighbors,
                  const Gains& g) {
  return consensus_input(st, neighbors, g) - g.beta * (st.x_o - x) -
         g.lambda * st.I_x;
}

Vec2 adaptation_kinematics(const AgentState& st, const Vec2& x,
                           const Vec2& qdot_r, const Gains& g) {
  const Vec2 dx_o = st.x_o - x;
  Vec2 rate = -g.Lambda * (robot::kinematic_regressor(st.q, qdot_r).transpose() * dx_o);
  for (int c = 0; c < 2; ++c) {
    if ((st.theta_hat(c) >= g.theta_hi(c) && rate(c) > 0.0) ||
        (st.theta_hat(c) <= g.theta_lo(c) && rate(c) < 0.0))
      rate(c) = 0.0;
  }
  return rate;
}

Vec2 reference_acceleration(const AgentState& st, const Vec2& x,
                            NeighborSpan neighbors, const Gains& g) {
  const ReferenceVelocity rv = reference_velocity(st, neighbors, g);
  const Vec2 xdot_o = observer_rhs(st, x, neighbors, g);
  Vec2 udot = -g.alpha * s_star(st, x, g);
  for (const NeighborTerm& nb : neighbors)
    udot -= nb.weight * (xdot_o - nb.sample.xdot_o);
  const Vec2 theta_hat_dot = adaptation_kinematics(st, x, rv.qdot_r, g);
  const Mat2 jhat_dot =
      robot::jacobian_rate({st.theta_hat}, st.q, st.qdot, theta_hat_dot);
  return rv.jhat.inverse() * (udot - jhat_dot * rv.qdot_r);
}

Vec2 torque_dynamic(const AgentState& st, const Vec2& qdot_r,
                    const Vec2& qddot_r, const Gains& g) {
  const Vec2 s = st.qdot - qdot_r;
  return -g.K * s +
         robot::dynamic_regressor(st.q, st.qdot, qdot_r, qddot_r) *
             st.vartheta_hat;
}

Vec3 adaptation_dynamics(const AgentState& st, const Vec2& qdot_r,
                         const Vec2& qddot_r, const Gains& g) {
  const Vec2 s = st.qdot - qdot_r;
  return -g.Gamma *
         (robot::dynamic_regressor(st.q, st.qdot, qdot_r, qddot_r).transpose() *
          s);
}

Vec2 torque_pi_servo(const AgentState& st, const Vec2& qdot_r,
                     const PiGains& pi) {
  return pi.kp * (qdot_r - st.qdot) + pi.ki * st.I_v;
}

Vec2 external_stimulus_pd(double t, const Vec2& q, const Vec2& qdot,
                          const robot::KinematicParams& kin,
                          const StimulusParams& stim, network::Side side) {
  const bool active =
      t > stim.t_on || (t == stim.t_on && side == network::Side::Right);
  if (!active) return Vec2::Zero();
  const Mat2 j = robot::jacobian(kin, q);
  const Vec2 x = robot::forward_kinematics(kin, q);
  const Vec2 xdot = j * qdot;
  return j.transpose() * (-stim.kd * xdot - stim.kp * (x - stim.x_h));
}

std::pair<Vec2, Vec2> teleop_pd_torques(const Vec2& q1, const Vec2& qd1,
                                        const Vec2& q2, const Vec2& qd2,
                                        const Mat2& kd, const Mat2& kp,
                                        const Vec2& tau_h) {
  const Vec2 tau1 = -kd * qd1 - kp * (q1 - q2) + tau_h;
  const Vec2 tau2 = -kd * qd2 - kp * (q2 - q1);
  return {tau1, tau2};
}

double lyapunov_value(const AgentState& st, const Vec2& qdot_r,
                      const robot::RobotParams& truth, const Gains& g) {
  const Vec2 s = st.qdot - qdot_r;
  const Vec3 dvt = st.vartheta_hat - truth.dyn.lumped;
  const Mat2 m = robot::inertia(truth.dyn, st.q);
  return 0.5 * s.dot(m * s) + 0.5 * dvt.dot(g.Gamma.inverse() * dvt);
}

double lyapunov_observer_value(const AgentState& st, const Vec2& x,
                               const robot::KinematicParams& truth_kin,
                               const Gains& g) {
  const Vec2 dx_o = st.x_o - x;
  const Vec2 dth = st.theta_hat - truth_kin.link_lengths;
  return 0.5 * dx_o.squaredNorm() + 0.5 * g.lambda * st.I_x.squaredNorm() -
         st.I_sjj / (2.0 * g.beta) +
         0.5 * dth.dot(g.Lambda.inverse() * dth);
}

}  // namespace netarm::control
