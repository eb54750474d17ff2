#include "netarm/csv.hpp"

#include <cinttypes>
#include <cstdio>
#include <memory>
#include <stdexcept>

namespace netarm::io {

namespace {

using FilePtr = std::unique_ptr<std::FILE, int (*)(std::FILE*)>;

FilePtr open_or_throw(const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw std::runtime_error("cannot write file: " + path);
  return {f, &std::fclose};
}

void put(std::FILE* f, double v) { std::fprintf(f, ",%.17g", v); }

}  // namespace

void write_trace_csv(const std::string& path, const sim::Trace& trace) {
  FilePtr f = open_or_throw(path);
  std::fprintf(f.get(), "t");
  for (int i = 1; i <= trace.n; ++i)
    std::fprintf(f.get(),
                 ",q%d_1,q%d_2,qd%d_1,qd%d_2,x%d_1,x%d_2,xo%d_1,xo%d_2,"
                 "dxo%d_1,dxo%d_2,th%d_1,th%d_2,vth%d_1,vth%d_2,vth%d_3,"
                 "tau%d_1,tau%d_2,V%d,Vstar%d",
                 i, i, i, i, i, i, i, i, i, i, i, i, i, i, i, i, i, i, i);
  std::fprintf(f.get(), "\n");
  for (std::size_t k = 0; k < trace.size(); ++k) {
    std::fprintf(f.get(), "%.17g", trace.t[k]);
    for (int i = 0; i < trace.n; ++i) {
      const sim::AgentSample& s = trace.steps[k][i];
      for (int c = 0; c < 2; ++c) put(f.get(), s.q(c));
      for (int c = 0; c < 2; ++c) put(f.get(), s.qdot(c));
      for (int c = 0; c < 2; ++c) put(f.get(), s.x(c));
      for (int c = 0; c < 2; ++c) put(f.get(), s.x_o(c));
      for (int c = 0; c < 2; ++c) put(f.get(), s.dx_o(c));
      for (int c = 0; c < 2; ++c) put(f.get(), s.theta_hat(c));
      for (int c = 0; c < 3; ++c) put(f.get(), s.vartheta_hat(c));
      for (int c = 0; c < 2; ++c) put(f.get(), s.tau(c));
      put(f.get(), s.V);
      put(f.get(), s.Vstar);
    }
    std::fprintf(f.get(), "\n");
  }
}

void write_report_csv(const std::string& path,
                      const analysis::ConsensusReport& rep) {
  FilePtr f = open_or_throw(path);
  std::fprintf(f.get(), "key,value\n");
  std::fprintf(f.get(), "settled,%d\n", rep.settled ? 1 : 0);
  std::fprintf(f.get(), "settling_time,%.17g\n", rep.settling_time);
  std::fprintf(f.get(), "final_weighted_x,%.17g\n", rep.final_weighted(0));
  std::fprintf(f.get(), "final_weighted_y,%.17g\n", rep.final_weighted(1));
  std::fprintf(f.get(), "final_plain_x,%.17g\n", rep.final_plain(0));
  std::fprintf(f.get(), "final_plain_y,%.17g\n", rep.final_plain(1));
  std::fprintf(f.get(), "predicted_x,%.17g\n", rep.predicted(0));
  std::fprintf(f.get(), "predicted_y,%.17g\n", rep.predicted(1));
  std::fprintf(f.get(), "final_max_pairwise,%.17g\n", rep.final_max_pairwise);
  std::fprintf(f.get(), "final_obs_error,%.17g\n", rep.final_obs_error);
  std::fprintf(f.get(), "final_task_speed,%.17g\n", rep.final_task_speed);
}

void write_sweep_csv(const std::string& path,
                     const std::vector<analysis::SweepRow>& rows) {
  FilePtr f = open_or_throw(path);
  std::fprintf(f.get(),
               "parameter,final_plain_x,final_plain_y,final_weighted_x,"
               "final_weighted_y,offset_x,response_settling,ok,error\n");
  for (const analysis::SweepRow& r : rows)
    std::fprintf(f.get(), "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%d,%s\n",
                 r.parameter, r.final_plain(0), r.final_plain(1),
                 r.final_weighted(0), r.final_weighted(1), r.offset_x,
                 r.response_settling, r.ok ? 1 : 0, r.error.c_str());
}

void write_teleop_sweep_csv(const std::string& path,
                            const std::vector<analysis::TeleopRow>& rows) {
  FilePtr f = open_or_throw(path);
  std::fprintf(f.get(), "kd_scale,displacement,ok,error\n");
  for (const analysis::TeleopRow& r : rows)
    std::fprintf(f.get(), "%.17g,%.17g,%d,%s\n", r.kd_scale, r.displacement,
                 r.ok ? 1 : 0, r.error.c_str());
}

}  // namespace netarm::io
