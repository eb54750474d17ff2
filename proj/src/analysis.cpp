#include "netarm/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <future>

#include "netarm/simulation.hpp"

namespace netarm::analysis {

ConsensusReport consensus_report(const sim::Trace& trace,
                                 const graph::DirectedGraph& g, double tol) {
  ConsensusReport rep;
  const int n = trace.n;
  const std::size_t rows = trace.size();
  rep.t = trace.t;
  rep.max_pairwise_error.resize(rows);
  rep.weighted_mean.resize(rows);
  rep.plain_mean.resize(rows);

  Eigen::VectorXd gamma;
  try {
    gamma = graph::left_eigenvector_gamma(g);
  } catch (const SimulationError&) {
    gamma = Eigen::VectorXd::Constant(n, 1.0 / n);  // fallback: plain mean
  }

  for (std::size_t k = 0; k < rows; ++k) {
    const auto& row = trace.steps[k];
    double worst = 0.0;
    Vec2 wmean = Vec2::Zero(), pmean = Vec2::Zero();
    for (int i = 0; i < n; ++i) {
      wmean += gamma(i) * row[i].x;
      pmean += row[i].x / n;
      for (int j = i + 1; j < n; ++j)
        worst = std::max(worst, (row[i].x - row[j].x).norm());
    }
    rep.max_pairwise_error[k] = worst;
    rep.weighted_mean[k] = wmean;
    rep.plain_mean[k] = pmean;
  }

  const std::size_t tail = std::max<std::size_t>(1, rows / 20);
  for (std::size_t k = rows - tail; k < rows; ++k) {
    rep.final_weighted += rep.weighted_mean[k] / tail;
    rep.final_plain += rep.plain_mean[k] / tail;
  }

  Eigen::MatrixXd x_o0(n, 2);
  for (int i = 0; i < n; ++i) x_o0.row(i) = trace.steps.front()[i].x_o;
  try {
    rep.predicted = graph::predicted_consensus_value(g, x_o0);
  } catch (const SimulationError&) {
    rep.predicted = Vec2::Constant(std::nan(""));
  }

  const auto& last = trace.last();
  rep.final_max_pairwise = rep.max_pairwise_error.back();
  for (int i = 0; i < n; ++i) {
    rep.final_obs_error = std::max(rep.final_obs_error, last[i].dx_o.norm());
    rep.final_task_speed = std::max(rep.final_task_speed, last[i].xdot.norm());
  }

  rep.settling_time = settling_time(rep.t, rep.max_pairwise_error, 0.0, tol,
                                    &rep.settled);
  return rep;
}

double settling_time(std::span<const double> t, std::span<const double> signal,
                     double target, double tol, bool* settled) {
  std::size_t idx = 0;  // first index from which the band holds to the end
  for (std::size_t k = t.size(); k-- > 0;) {
    if (std::abs(signal[k] - target) >= tol) {
      idx = k + 1;
      break;
    }
  }
  const bool ok = idx < t.size();
  if (settled) *settled = ok;
  return ok ? t[idx] : t.back();
}

namespace {

template <typename Row, typename Fn>
std::vector<Row> run_rows(std::size_t count, int jobs, Fn&& body) {
  std::vector<Row> rows(count);
  if (jobs <= 1) {
    for (std::size_t k = 0; k < count; ++k) rows[k] = body(k);
    return rows;
  }
  std::size_t next = 0;
  while (next < count) {
    const std::size_t batch = std::min<std::size_t>(jobs, count - next);
    std::vector<std::future<Row>> pending;
    pending.reserve(batch);
    for (std::size_t b = 0; b < batch; ++b)
      pending.push_back(std::async(std::launch::async,
                                   [&body, k = next + b] { return body(k); }));
    for (std::size_t b = 0; b < batch; ++b) rows[next + b] = pending[b].get();
    next += batch;
  }
  return rows;
}

SweepRow finish_row(double parameter, const sim::ScenarioConfig& cfg) {
  SweepRow row;
  row.parameter = parameter;
  try {
    const sim::Trace trace = sim::run_scenario(cfg);
    const ConsensusReport rep = consensus_report(trace, cfg.graph, 1e-3);
    row.final_weighted = rep.final_weighted;
    row.final_plain = rep.final_plain;
    row.offset_x =
        std::abs(rep.final_plain(0) - cfg.stimulus.params.x_h(0));
    std::vector<double> mean_x(rep.plain_mean.size());
    for (std::size_t k = 0; k < mean_x.size(); ++k)
      mean_x[k] = rep.plain_mean[k](0);
    bool settled = false;
    row.response_settling = settling_time(rep.t, mean_x, rep.final_plain(0),
                                          0.01, &settled);
    row.ok = true;
  } catch (const std::exception& e) {
    row.error = e.what();
  }
  return row;
}

}  // namespace

std::vector<SweepRow> manipulability_sweep(const sim::ScenarioConfig& base,
                                           std::span<const double> alphas,
                                           const sim::StimulusSpec& stimulus,
                                           int jobs) {
  return run_rows<SweepRow>(alphas.size(), jobs, [&](std::size_t k) {
    sim::ScenarioConfig cfg = base;
    cfg.gains.alpha = alphas[k];
    cfg.stimulus = stimulus;
    return finish_row(alphas[k], cfg);
  });
}

std::vector<SweepRow> pi_integral_sweep(const sim::ScenarioConfig& base,
                                        std::span<const double> ki_values,
                                        int jobs) {
  return run_rows<SweepRow>(ki_values.size(), jobs, [&](std::size_t k) {
    sim::ScenarioConfig cfg = base;
    cfg.mode = sim::ControllerMode::kKinematicPi;
    cfg.pi.ki = ki_values[k] * Mat2::Identity();
    return finish_row(ki_values[k], cfg);
  });
}

std::vector<TeleopRow> damping_sweep_teleop(const sim::ScenarioConfig& base,
                                            std::span<const double> kd_scales,
                                            const Vec2& tau_h, double t_probe,
                                            int jobs) {
  return run_rows<TeleopRow>(kd_scales.size(), jobs, [&](std::size_t k) {
    TeleopRow row;
    row.kd_scale = kd_scales[k];
    try {
      sim::ScenarioConfig cfg = base;
      cfg.mode = sim::ControllerMode::kTeleopPd;
      cfg.teleop.kd = kd_scales[k] * base.teleop.kd;
      cfg.teleop.tau_h = tau_h;
      cfg.t_end = t_probe;
      const sim::Trace trace = sim::run_scenario(cfg);
      const Vec2 qc0 =
          0.5 * (trace.steps.front()[0].q + trace.steps.front()[1].q);
      const Vec2 qc1 = 0.5 * (trace.last()[0].q + trace.last()[1].q);
      row.displacement = (qc1 - qc0).norm();
      row.ok = true;
    } catch (const std::exception& e) {
      row.error = e.what();
    }
    return row;
  });
}

}  // namespace netarm::analysis
