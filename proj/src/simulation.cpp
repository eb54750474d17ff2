#include "netarm/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace netarm::sim {

using control::AgentState;
using network::Side;

StepNoise draw_measurement_noise(const NoiseSpec& spec, int n,
                                 std::mt19937_64& rng) {
  StepNoise out;
  out.any = spec.sigma_q > 0.0 || spec.sigma_qdot > 0.0 || spec.sigma_x > 0.0;
  if (!out.any) return out;
  out.dq.assign(n, Vec2::Zero());
  out.dqdot.assign(n, Vec2::Zero());
  out.dx.assign(n, Vec2::Zero());
  std::normal_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < n; ++i) {
    if (spec.sigma_q > 0.0)
      out.dq[i] = {spec.sigma_q * unit(rng), spec.sigma_q * unit(rng)};
    if (spec.sigma_qdot > 0.0)
      out.dqdot[i] = {spec.sigma_qdot * unit(rng), spec.sigma_qdot * unit(rng)};
    if (spec.sigma_x > 0.0)
      out.dx[i] = {spec.sigma_x * unit(rng), spec.sigma_x * unit(rng)};
  }
  return out;
}

namespace {

AgentState add_scaled(const AgentState& a, double c, const AgentState& b) {
  AgentState r;
  r.q = a.q + c * b.q;
  r.qdot = a.qdot + c * b.qdot;
  r.x_o = a.x_o + c * b.x_o;
  r.I_s = a.I_s + c * b.I_s;
  r.I_x = a.I_x + c * b.I_x;
  r.theta_hat = a.theta_hat + c * b.theta_hat;
  r.vartheta_hat = a.vartheta_hat + c * b.vartheta_hat;
  r.I_v = a.I_v + c * b.I_v;
  r.I_sjj = a.I_sjj + c * b.I_sjj;
  return r;
}

AgentStates add_scaled(const AgentStates& a, double c, const AgentStates& b) {
  AgentStates r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = add_scaled(a[i], c, b[i]);
  return r;
}

const char* kStateFieldNames[AgentState::kDim] = {
    "q[0]",        "q[1]",        "qdot[0]",         "qdot[1]",
    "x_o[0]",      "x_o[1]",      "I_s[0]",          "I_s[1]",
    "I_x[0]",      "I_x[1]",      "theta_hat[0]",    "theta_hat[1]",
    "vartheta_hat[0]", "vartheta_hat[1]", "vartheta_hat[2]", "I_v[0]",
    "I_v[1]",      "I_sjj"};

}  // namespace

World::World(ScenarioConfig cfg) : cfg_(std::move(cfg)), rng_(cfg_.seed) {
  graph::check_valid(cfg_.graph);
  const int n = cfg_.n();
  auto need = [&](std::size_t got, const char* what) {
    if (got != static_cast<std::size_t>(n))
      throw ConfigError(std::string(what) + ": expected one entry per agent");
  };
  need(cfg_.robots.size(), "robots");
  need(cfg_.q0.size(), "q0");
  need(cfg_.qdot0.size(), "qdot0");
  need(cfg_.theta_hat0.size(), "theta_hat0");
  need(cfg_.vartheta_hat0.size(), "vartheta_hat0");
  if (!(cfg_.dt > 0.0)) throw ConfigError("dt: must be positive");
  if (!(cfg_.t_end >= cfg_.dt)) throw ConfigError("t_end: must be at least dt");
  if (cfg_.noise.sigma_q < 0 || cfg_.noise.sigma_qdot < 0 ||
      cfg_.noise.sigma_x < 0)
    throw ConfigError("noise: standard deviations must be nonnegative");
  if (cfg_.mode == ControllerMode::kTeleopPd && n != 2)
    throw ConfigError("teleop mode requires exactly two agents");

  channels_.resize(n);
  prefill_boundaries_.resize(n);
  for (int i = 0; i < n; ++i) {
    channels_[i].resize(n);
    for (int j = 0; j < n; ++j) {
      if (cfg_.graph.weights(i, j) > 0.0 && cfg_.graph.delays(i, j) > 0.0)
        channels_[i][j].emplace(cfg_.graph.delays(i, j));
    }
  }
  // An agent's observer rate jumps when one of its own incoming delayed
  // terms leaves the zero-prefill phase.
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      if (cfg_.graph.weights(j, k) > 0.0 && cfg_.graph.delays(j, k) > 0.0) {
        const double boundary = cfg_.graph.delays(j, k);
        auto& list = prefill_boundaries_[j];
        if (std::find(list.begin(), list.end(), boundary) == list.end())
          list.push_back(boundary);
      }
    }
  }
}

AgentStates World::initial_states() const {
  const int n = cfg_.n();
  AgentStates states(n);
  for (int i = 0; i < n; ++i) {
    AgentState& st = states[i];
    st.q = cfg_.q0[i];
    st.qdot = cfg_.qdot0[i];
    st.x_o = robot::forward_kinematics(cfg_.robots[i].kin, st.q) +
             Vec2::Constant(cfg_.observer_init_offset);
    st.theta_hat = cfg_.theta_hat0[i];
    st.vartheta_hat = cfg_.vartheta_hat0[i];
  }
  return states;
}

Derivatives World::closed_loop_rhs(double t, const AgentStates& states,
                                   const StepNoise& noise, Side side) const {
  const int n = cfg_.n();
  Derivatives d;
  d.dot.resize(n);
  d.eval.resize(n);

  if (cfg_.mode == ControllerMode::kTeleopPd) {
    AgentState v0 = states[0], v1 = states[1];
    if (noise.any) {
      v0.q += noise.dq[0];
      v0.qdot += noise.dqdot[0];
      v1.q += noise.dq[1];
      v1.qdot += noise.dqdot[1];
    }
    const auto [tau1, tau2] = control::teleop_pd_torques(
        v0.q, v0.qdot, v1.q, v1.qdot, cfg_.teleop.kd, cfg_.teleop.kp,
        cfg_.teleop.tau_h);
    const Vec2 taus[2] = {tau1, tau2};
    const double coupling =
        0.25 * (states[0].q - states[1].q)
                   .dot(cfg_.teleop.kp * (states[0].q - states[1].q));
    for (int i = 0; i < 2; ++i) {
      const AgentState& st = states[i];
      const robot::RobotParams& rp = cfg_.robots[i];
      AgentEval& ev = d.eval[i];
      ev = AgentEval{};
      ev.tau = taus[i];
      ev.x = robot::forward_kinematics(rp.kin, st.q);
      ev.xdot = robot::jacobian(rp.kin, st.q) * st.qdot;
      if (i == 0) ev.tau_h = cfg_.teleop.tau_h;
      ev.qddot = robot::inertia(rp.dyn, st.q)
                     .ldlt()
                     .solve(ev.tau - robot::coriolis(rp.dyn, st.q, st.qdot) *
                                         st.qdot);
      ev.V = 0.5 * st.qdot.dot(robot::inertia(rp.dyn, st.q) * st.qdot) +
             coupling;
      AgentState& dot = d.dot[i];
      dot = AgentState{};
      dot.q = st.qdot;
      dot.qdot = ev.qddot;
    }
    return d;
  }

  // Controller-visible views and measured task positions.
  std::vector<AgentState> views(states.begin(), states.end());
  std::vector<Vec2> x_meas(n), x_true(n);
  for (int i = 0; i < n; ++i) {
    x_true[i] = robot::forward_kinematics(cfg_.robots[i].kin, states[i].q);
    x_meas[i] = x_true[i];
    if (noise.any) {
      views[i].q += noise.dq[i];
      views[i].qdot += noise.dqdot[i];
      x_meas[i] += noise.dx[i];
    }
  }

  // Pass A: delayed neighbor data and all observer rates. Observer rates
  // depend only on states and delayed positions, never on joint velocity,
  // so zero-delay edges can take the neighbor rate from this same pass.
  std::vector<std::vector<control::NeighborTerm>> neighbors(n);
  std::vector<std::vector<std::pair<int, int>>> local_edges(n);  // (slot, j)
  std::vector<Vec2> xdot_o(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double w = cfg_.graph.weights(i, j);
      if (w <= 0.0) continue;
      control::NeighborTerm term;
      term.weight = w;
      if (channels_[i][j]) {
        term.sample = channels_[i][j]->sample(t, side);
      } else {
        term.sample.x_o = states[j].x_o;
        term.sample.valid = true;
        local_edges[i].emplace_back(static_cast<int>(neighbors[i].size()), j);
      }
      neighbors[i].push_back(term);
    }
  }
  for (int i = 0; i < n; ++i)
    xdot_o[i] = control::observer_rhs(views[i], x_meas[i], neighbors[i],
                                      cfg_.gains);
  for (int i = 0; i < n; ++i)
    for (const auto& [slot, j] : local_edges[i])
      neighbors[i][slot].sample.xdot_o = xdot_o[j];

  // Pass B: full controller evaluation per agent.
  for (int i = 0; i < n; ++i) {
    const AgentState& truth = states[i];
    const AgentState& view = views[i];
    const robot::RobotParams& rp = cfg_.robots[i];
    AgentEval& ev = d.eval[i];
    ev = AgentEval{};
    ev.x = x_true[i];
    ev.xdot_o = xdot_o[i];

    try {
      const control::ReferenceVelocity rv =
          control::reference_velocity(view, neighbors[i], cfg_.gains);
      ev.u = rv.u;
      ev.qdot_r = rv.qdot_r;
      ev.s_star = control::s_star(view, x_meas[i], cfg_.gains);
      ev.theta_hat_dot =
          control::adaptation_kinematics(view, x_meas[i], rv.qdot_r, cfg_.gains);

      Vec2 udot = -cfg_.gains.alpha * ev.s_star;
      for (const control::NeighborTerm& nb : neighbors[i])
        udot -= nb.weight * (xdot_o[i] - nb.sample.xdot_o);

      if (cfg_.mode == ControllerMode::kDynamic) {
        ev.qddot_r =
            control::reference_acceleration(view, x_meas[i], neighbors[i],
                                            cfg_.gains);
        ev.tau = control::torque_dynamic(view, rv.qdot_r, ev.qddot_r,
                                         cfg_.gains);
        ev.vartheta_hat_dot = control::adaptation_dynamics(
            view, rv.qdot_r, ev.qddot_r, cfg_.gains);
      } else {
        ev.tau = control::torque_pi_servo(view, rv.qdot_r, cfg_.pi);
      }

      const Mat2 j_true = robot::jacobian(rp.kin, truth.q);
      ev.xdot = j_true * truth.qdot;
      ev.xddot_o = udot - cfg_.gains.beta * (xdot_o[i] - ev.xdot) -
                   cfg_.gains.lambda * (truth.x_o - x_meas[i]);
      if (cfg_.stimulus.enabled && cfg_.stimulus.agent == i)
        ev.tau_h = control::external_stimulus_pd(
            t, truth.q, truth.qdot, rp.kin, cfg_.stimulus.params, side);

      ev.s = truth.qdot - rv.qdot_r;
      const Vec2 js = j_true * ev.s;
      ev.sjj_rate = js.squaredNorm();
      ev.qddot = robot::inertia(rp.dyn, truth.q)
                     .ldlt()
                     .solve(ev.tau + ev.tau_h -
                            robot::coriolis(rp.dyn, truth.q, truth.qdot) *
                                truth.qdot);
      ev.V = control::lyapunov_value(truth, rv.qdot_r, rp, cfg_.gains);
      ev.Vstar_shifted =
          control::lyapunov_observer_value(truth, x_true[i], rp.kin, cfg_.gains);
    } catch (const SingularEstimatedJacobian& e) {
      char buf[128];
      std::snprintf(buf, sizeof(buf),
                    "agent %d at t = %.6f: estimated Jacobian determinant "
                    "%.3e below floor",
                    i, t, e.det());
      throw SingularEstimatedJacobian(e.det(), buf);
    }

    AgentState& dot = d.dot[i];
    dot = AgentState{};
    dot.q = truth.qdot;
    dot.qdot = ev.qddot;
    dot.x_o = ev.xdot_o;
    dot.I_s = ev.s_star;
    dot.I_x = truth.x_o - x_meas[i];
    dot.theta_hat = ev.theta_hat_dot;
    dot.vartheta_hat = ev.vartheta_hat_dot;
    if (cfg_.mode == ControllerMode::kKinematicPi)
      dot.I_v = ev.qdot_r - view.qdot;
    dot.I_sjj = ev.sjj_rate;
  }
  return d;
}

AgentStates World::step(double t, const AgentStates& states,
                        const StepNoise& noise, const Derivatives* k1) const {
  const double dt = cfg_.dt;
  Derivatives k1_local;
  if (!k1) {
    k1_local = closed_loop_rhs(t, states, noise, Side::Right);
    k1 = &k1_local;
  }
  if (cfg_.integrator == Integrator::kEuler)
    return add_scaled(states, dt, k1->dot);

  const Derivatives k2 = closed_loop_rhs(
      t + dt / 2, add_scaled(states, dt / 2, k1->dot), noise, Side::Right);
  const Derivatives k3 = closed_loop_rhs(
      t + dt / 2, add_scaled(states, dt / 2, k2.dot), noise, Side::Right);
  // The final stage sits on the right endpoint: take left limits there so
  // the step never mixes two smooth pieces of the delayed signals.
  const Derivatives k4 = closed_loop_rhs(
      t + dt, add_scaled(states, dt, k3.dot), noise, Side::Left);

  AgentStates out = add_scaled(states, dt / 6, k1->dot);
  out = add_scaled(out, dt / 3, k2.dot);
  out = add_scaled(out, dt / 3, k3.dot);
  out = add_scaled(out, dt / 6, k4.dot);
  return out;
}

void World::push_channels(double t, const AgentStates& states,
                          const Derivatives& d) {
  const int n = cfg_.n();
  // Which source agents have an observer-rate jump exactly now?
  std::vector<char> kinked(n, 0);
  bool any_kink = false;
  for (int j = 0; j < n; ++j) {
    for (double boundary : prefill_boundaries_[j]) {
      if (std::abs(t - boundary) < 0.25 * cfg_.dt) {
        kinked[j] = 1;
        any_kink = true;
      }
    }
  }
  Derivatives left;
  if (any_kink) {
    StepNoise no_noise;  // kink handling is only exercised by exact runs
    left = closed_loop_rhs(t, states, no_noise, Side::Left);
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (!channels_[i][j]) continue;
      network::DelayChannel& ch = *channels_[i][j];
      if (kinked[j])
        ch.push(t, states[j].x_o, left.eval[j].xdot_o, left.eval[j].xddot_o);
      ch.push(t, states[j].x_o, d.eval[j].xdot_o, d.eval[j].xddot_o);
      ch.drop_samples_before(t - ch.delay() - 2.0 * cfg_.dt);
    }
  }
}

void World::check_sane(double t, const AgentStates& states) const {
  double flat[AgentState::kDim];
  for (std::size_t i = 0; i < states.size(); ++i) {
    states[i].to_flat(flat);
    for (int f = 0; f < AgentState::kDim; ++f) {
      if (!std::isfinite(flat[f]) || std::abs(flat[f]) > 1e6) {
        char buf[128];
        std::snprintf(buf, sizeof(buf),
                      "agent %zu %s = %g at t = %.6f", i,
                      kStateFieldNames[f], flat[f], t);
        throw NumericalBlowup(buf);
      }
    }
  }
}

Trace World::run() {
  const int n = cfg_.n();
  const long steps = static_cast<long>(std::floor(cfg_.t_end / cfg_.dt + 1e-9));
  Trace trace;
  trace.dt = cfg_.dt;
  trace.n = n;
  trace.t.reserve(steps + 1);
  trace.steps.reserve(steps + 1);

  AgentStates states = initial_states();
  for (long k = 0; k <= steps; ++k) {
    const double t = k * cfg_.dt;
    const StepNoise noise = draw_measurement_noise(cfg_.noise, n, rng_);
    const Derivatives d = closed_loop_rhs(t, states, noise, Side::Right);

    trace.t.push_back(t);
    std::vector<AgentSample> row(n);
    for (int i = 0; i < n; ++i) {
      const control::AgentState& st = states[i];
      const AgentEval& ev = d.eval[i];
      AgentSample& smp = row[i];
      smp.q = st.q;
      smp.qdot = st.qdot;
      smp.x = ev.x;
      smp.xdot = ev.xdot;
      smp.x_o = st.x_o;
      smp.dx_o = st.x_o - ev.x;
      smp.theta_hat = st.theta_hat;
      smp.vartheta_hat = st.vartheta_hat;
      smp.tau = ev.tau;
      smp.s = ev.s;
      smp.s_star = ev.s_star;
      smp.I_s = st.I_s;
      smp.I_x = st.I_x;
      smp.I_v = st.I_v;
      smp.I_sjj = st.I_sjj;
      smp.V = ev.V;
      smp.Vstar = ev.Vstar_shifted;  // constant added after the run
    }
    trace.steps.push_back(std::move(row));
    push_channels(t, states, d);
    if (k == steps) break;

    states = step(t, states, noise, &d);
    for (int i = 0; i < n; ++i)
      states[i].theta_hat = states[i]
                                .theta_hat.cwiseMax(cfg_.gains.theta_lo)
                                .cwiseMin(cfg_.gains.theta_hi);
    check_sane((k + 1) * cfg_.dt, states);
  }

  if (cfg_.mode != ControllerMode::kTeleopPd) {
    // Fix the additive constant of the observer energy: the run's final
    // accumulated interaction integral over 2 beta.
    for (int i = 0; i < n; ++i) {
      const double shift =
          trace.steps.back()[i].I_sjj / (2.0 * cfg_.gains.beta);
      for (auto& row : trace.steps) row[i].Vstar += shift;
    }
  }
  return trace;
}

Trace run_scenario(const ScenarioConfig& cfg) { return World(cfg).run(); }

}  // namespace netarm::sim
