#pragma once

#include <span>
#include <string>
#include <vector>

#include "netarm/graph.hpp"
#include "netarm/scenario.hpp"

namespace netarm::analysis {

/// Consensus quality metrics extracted from one trace.
struct ConsensusReport {
  std::vector<double> t;
  std::vector<double> max_pairwise_error;  // max_ij |x_i - x_j| per sample
  std::vector<Vec2> weighted_mean;         // gamma-weighted task positions
  std::vector<Vec2> plain_mean;

  Vec2 final_weighted = Vec2::Zero();  // mean over the trailing 5% of samples
  Vec2 final_plain = Vec2::Zero();
  Vec2 predicted = Vec2::Zero();       // delay-scaled weighted average of x_o(0)
  double final_max_pairwise = 0.0;
  double final_obs_error = 0.0;        // max_i |x_o,i - x_i| at t_end
  double final_task_speed = 0.0;       // max_i |xdot_i| at t_end
  double settling_time = 0.0;          // first t after which the pairwise
  bool settled = false;                // error stays below the tolerance
};

ConsensusReport consensus_report(const sim::Trace& trace,
                                 const graph::DirectedGraph& g, double tol);

/// First time after which |signal - target| stays below tol through the end
/// of the series; sets *settled accordingly (returns the last time when the
/// series never settles).
double settling_time(std::span<const double> t, std::span<const double> signal,
                     double target, double tol, bool* settled);

struct SweepRow {
  double parameter = 0.0;
  Vec2 final_weighted = Vec2::Zero();
  Vec2 final_plain = Vec2::Zero();
  double offset_x = 0.0;  // |final plain X - stimulus target X|
  double response_settling = 0.0;  // settling of mean X to its own final
  bool ok = false;
  std::string error;
};

/// One run per consensus-integral gain value, stimulus applied; reports how
/// far the equilibrium moved toward the operator target.
std::vector<SweepRow> manipulability_sweep(const sim::ScenarioConfig& base,
                                           std::span<const double> alphas,
                                           const sim::StimulusSpec& stimulus,
                                           int jobs = 1);

/// Inner-loop integral gain sweep in kinematic mode (base must carry the
/// stimulus); parameter is the scalar multiplying the identity Ki.
std::vector<SweepRow> pi_integral_sweep(const sim::ScenarioConfig& base,
                                        std::span<const double> ki_values,
                                        int jobs = 1);

struct TeleopRow {
  double kd_scale = 0.0;
  double displacement = 0.0;  // |q_c(t_probe) - q_c(0)|, q_c = (q1+q2)/2
  bool ok = false;
  std::string error;
};

/// Teleoperator damping sweep under a constant operator torque from t = 0.
std::vector<TeleopRow> damping_sweep_teleop(const sim::ScenarioConfig& base,
                                            std::span<const double> kd_scales,
                                            const Vec2& tau_h, double t_probe,
                                            int jobs = 1);

}  // namespace netarm::analysis
