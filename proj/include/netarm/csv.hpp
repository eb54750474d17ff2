#pragma once

#include <string>
#include <vector>

#include "netarm/analysis.hpp"
#include "netarm/scenario.hpp"

namespace netarm::io {

/// One row per time step: t, then per agent
/// q_1 q_2 qd_1 qd_2 x_1 x_2 xo_1 xo_2 dxo_1 dxo_2 th_1 th_2
/// vth_1 vth_2 vth_3 tau_1 tau_2 V Vstar (19 columns per agent).
void write_trace_csv(const std::string& path, const sim::Trace& trace);

/// key,value pairs of the report scalars.
void write_report_csv(const std::string& path,
                      const analysis::ConsensusReport& rep);

void write_sweep_csv(const std::string& path,
                     const std::vector<analysis::SweepRow>& rows);

void write_teleop_sweep_csv(const std::string& path,
                            const std::vector<analysis::TeleopRow>& rows);

}  // namespace netarm::io
