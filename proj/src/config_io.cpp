#include "netarm/config_io.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <sstream>

#include "netarm/robot.hpp"

namespace netarm::io {

using nlohmann::json;
using sim::ScenarioConfig;

namespace {

[[noreturn]] void fail(const std::string& msg) { throw ConfigError(msg); }

const json& require(const json& j, const std::string& path,
                    const char* field) {
  auto it = j.find(field);
  if (it == j.end()) fail("missing field: " + path + field);
  return *it;
}

double num(const json& j, const std::string& path, const char* field) {
  const json& v = require(j, path, field);
  if (!v.is_number()) fail("field " + path + field + ": expected a number");
  return v.get<double>();
}

double num_or(const json& j, const std::string& path, const char* field,
              double fallback) {
  if (!j.contains(field)) return fallback;
  return num(j, path, field);
}

Vec2 vec2(const json& v, const std::string& where) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() ||
      !v[1].is_number())
    fail("field " + where + ": expected an array of 2 numbers");
  return {v[0].get<double>(), v[1].get<double>()};
}

Vec3 vec3(const json& v, const std::string& where) {
  if (!v.is_array() || v.size() != 3)
    fail("field " + where + ": expected an array of 3 numbers");
  for (const auto& e : v)
    if (!e.is_number()) fail("field " + where + ": expected numbers");
  return {v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
}

// A gain matrix may be written as a scalar (times identity) or in full.
template <typename Mat>
Mat square_matrix(const json& v, const std::string& where) {
  constexpr int dim = Mat::RowsAtCompileTime;
  if (v.is_number()) return v.get<double>() * Mat::Identity();
  if (!v.is_array() || v.size() != dim)
    fail("field " + where + ": expected a scalar or a " + std::to_string(dim) +
         "x" + std::to_string(dim) + " array");
  Mat m;
  for (int r = 0; r < dim; ++r) {
    const json& rowv = v[r];
    if (!rowv.is_array() || rowv.size() != dim)
      fail("field " + where + ": expected a scalar or a " +
           std::to_string(dim) + "x" + std::to_string(dim) + " array");
    for (int c = 0; c < dim; ++c) {
      if (!rowv[c].is_number()) fail("field " + where + ": expected numbers");
      m(r, c) = rowv[c].get<double>();
    }
  }
  return m;
}

Eigen::MatrixXd nxn_matrix(const json& v, const std::string& where, int n) {
  if (!v.is_array() || static_cast<int>(v.size()) != n)
    fail("field " + where + ": expected an " + std::to_string(n) + "x" +
         std::to_string(n) + " array");
  Eigen::MatrixXd m(n, n);
  for (int r = 0; r < n; ++r) {
    const json& rowv = v[r];
    if (!rowv.is_array() || static_cast<int>(rowv.size()) != n)
      fail("field " + where + ": row " + std::to_string(r) + " has wrong size");
    for (int c = 0; c < n; ++c) {
      if (!rowv[c].is_number()) fail("field " + where + ": expected numbers");
      m(r, c) = rowv[c].get<double>();
    }
  }
  return m;
}

std::vector<Vec2> vec2_list(const json& v, const std::string& where, int n) {
  if (!v.is_array() || static_cast<int>(v.size()) != n)
    fail("field " + where + ": expected " + std::to_string(n) + " entries");
  std::vector<Vec2> out(n);
  for (int i = 0; i < n; ++i)
    out[i] = vec2(v[i], where + "[" + std::to_string(i) + "]");
  return out;
}

json dump_matrix(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (int r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (int c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(row);
  }
  return rows;
}

json dump_vec(const Eigen::VectorXd& v) {
  json out = json::array();
  for (int i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

}  // namespace

ScenarioConfig parse_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    fail(std::string("config is not valid JSON: ") + e.what());
  }
  ScenarioConfig cfg;

  const json& graph = require(root, "", "graph");
  const json& weights = require(graph, "graph.", "weights");
  if (!weights.is_array() || weights.empty())
    fail("field graph.weights: expected a nonempty square array");
  const int n = static_cast<int>(weights.size());
  cfg.graph.weights = nxn_matrix(weights, "graph.weights", n);
  if (graph.contains("delays"))
    cfg.graph.delays = nxn_matrix(graph["delays"], "graph.delays", n);
  else
    cfg.graph.delays = Eigen::MatrixXd::Zero(n, n);

  const json& robots = require(root, "", "robots");
  if (!robots.is_array() || static_cast<int>(robots.size()) != n)
    fail("field robots: expected one entry per agent");
  cfg.robots.resize(n);
  for (int i = 0; i < n; ++i) {
    const std::string where = "robots[" + std::to_string(i) + "].";
    cfg.robots[i].kin.link_lengths =
        vec2(require(robots[i], where, "link_lengths"), where + "link_lengths");
    cfg.robots[i].dyn.lumped =
        vec3(require(robots[i], where, "inertia"), where + "inertia");
  }

  cfg.q0 = vec2_list(require(root, "", "q0"), "q0", n);
  if (root.contains("qdot0"))
    cfg.qdot0 = vec2_list(root["qdot0"], "qdot0", n);
  else
    cfg.qdot0.assign(n, Vec2::Zero());
  if (root.contains("theta_hat0"))
    cfg.theta_hat0 = vec2_list(root["theta_hat0"], "theta_hat0", n);
  else {
    cfg.theta_hat0.resize(n);
    for (int i = 0; i < n; ++i)
      cfg.theta_hat0[i] = cfg.robots[i].kin.link_lengths;
  }
  if (root.contains("vartheta_hat0")) {
    const json& v = root["vartheta_hat0"];
    if (!v.is_array() || static_cast<int>(v.size()) != n)
      fail("field vartheta_hat0: expected one entry per agent");
    cfg.vartheta_hat0.resize(n);
    for (int i = 0; i < n; ++i)
      cfg.vartheta_hat0[i] =
          vec3(v[i], "vartheta_hat0[" + std::to_string(i) + "]");
  } else {
    cfg.vartheta_hat0.assign(n, Vec3::Zero());
  }

  if (root.contains("gains")) {
    const json& g = root["gains"];
    cfg.gains.alpha = num_or(g, "gains.", "alpha", cfg.gains.alpha);
    cfg.gains.beta = num_or(g, "gains.", "beta", cfg.gains.beta);
    cfg.gains.lambda = num_or(g, "gains.", "lambda", cfg.gains.lambda);
    if (g.contains("K")) cfg.gains.K = square_matrix<Mat2>(g["K"], "gains.K");
    if (g.contains("Gamma"))
      cfg.gains.Gamma = square_matrix<Mat3>(g["Gamma"], "gains.Gamma");
    if (g.contains("Lambda"))
      cfg.gains.Lambda = square_matrix<Mat2>(g["Lambda"], "gains.Lambda");
    if (g.contains("theta_lo"))
      cfg.gains.theta_lo =
          g["theta_lo"].is_number()
              ? Vec2::Constant(g["theta_lo"].get<double>()).eval()
              : vec2(g["theta_lo"], "gains.theta_lo");
    if (g.contains("theta_hi"))
      cfg.gains.theta_hi =
          g["theta_hi"].is_number()
              ? Vec2::Constant(g["theta_hi"].get<double>()).eval()
              : vec2(g["theta_hi"], "gains.theta_hi");
    cfg.gains.det_floor = num_or(g, "gains.", "det_floor", cfg.gains.det_floor);
  }

  if (root.contains("pi")) {
    const json& p = root["pi"];
    if (p.contains("kp")) cfg.pi.kp = square_matrix<Mat2>(p["kp"], "pi.kp");
    if (p.contains("ki")) cfg.pi.ki = square_matrix<Mat2>(p["ki"], "pi.ki");
  }

  const std::string mode =
      root.contains("mode") ? root["mode"].get<std::string>() : "dynamic";
  if (mode == "dynamic")
    cfg.mode = sim::ControllerMode::kDynamic;
  else if (mode == "kinematic-pi")
    cfg.mode = sim::ControllerMode::kKinematicPi;
  else if (mode == "teleop-pd")
    cfg.mode = sim::ControllerMode::kTeleopPd;
  else
    fail("field mode: expected dynamic, kinematic-pi or teleop-pd");

  if (root.contains("stimulus")) {
    const json& s = root["stimulus"];
    cfg.stimulus.enabled =
        s.contains("enabled") ? s["enabled"].get<bool>() : true;
    cfg.stimulus.agent =
        static_cast<int>(num_or(s, "stimulus.", "agent", 0.0));
    if (cfg.stimulus.agent < 0 || cfg.stimulus.agent >= n)
      fail("field stimulus.agent: out of range");
    cfg.stimulus.params.t_on = num_or(s, "stimulus.", "t_on", 10.0);
    cfg.stimulus.params.kd = num_or(s, "stimulus.", "kd", 15.0);
    cfg.stimulus.params.kp = num_or(s, "stimulus.", "kp", 30.0);
    if (s.contains("x_h"))
      cfg.stimulus.params.x_h = vec2(s["x_h"], "stimulus.x_h");
  }

  if (root.contains("teleop")) {
    const json& tp = root["teleop"];
    if (tp.contains("kd")) cfg.teleop.kd = square_matrix<Mat2>(tp["kd"], "teleop.kd");
    if (tp.contains("kp")) cfg.teleop.kp = square_matrix<Mat2>(tp["kp"], "teleop.kp");
    if (tp.contains("tau_h")) cfg.teleop.tau_h = vec2(tp["tau_h"], "teleop.tau_h");
  }

  if (root.contains("noise")) {
    const json& ns = root["noise"];
    cfg.noise.sigma_q = num_or(ns, "noise.", "sigma_q", 0.0);
    cfg.noise.sigma_qdot = num_or(ns, "noise.", "sigma_qdot", 0.0);
    cfg.noise.sigma_x = num_or(ns, "noise.", "sigma_x", 0.0);
  }

  cfg.observer_init_offset =
      num_or(root, "", "observer_init_offset", cfg.observer_init_offset);
  cfg.dt = num(root, "", "dt");
  cfg.t_end = num(root, "", "t_end");
  const std::string integ =
      root.contains("integrator") ? root["integrator"].get<std::string>()
                                  : "rk4";
  if (integ == "rk4")
    cfg.integrator = sim::Integrator::kRk4;
  else if (integ == "euler")
    cfg.integrator = sim::Integrator::kEuler;
  else
    fail("field integrator: expected rk4 or euler");
  cfg.seed = root.contains("seed")
                 ? root["seed"].get<std::uint64_t>()
                 : cfg.seed;
  return cfg;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open config file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string emit_config(const ScenarioConfig& cfg) {
  const int n = cfg.n();
  json root;
  root["graph"]["weights"] = dump_matrix(cfg.graph.weights);
  root["graph"]["delays"] = dump_matrix(cfg.graph.delays);
  root["robots"] = json::array();
  for (int i = 0; i < n; ++i)
    root["robots"].push_back(
        {{"link_lengths", dump_vec(cfg.robots[i].kin.link_lengths)},
         {"inertia", dump_vec(cfg.robots[i].dyn.lumped)}});
  auto vlist = [](const std::vector<Vec2>& vs) {
    json out = json::array();
    for (const Vec2& v : vs) out.push_back(dump_vec(v));
    return out;
  };
  root["q0"] = vlist(cfg.q0);
  root["qdot0"] = vlist(cfg.qdot0);
  root["theta_hat0"] = vlist(cfg.theta_hat0);
  root["vartheta_hat0"] = json::array();
  for (const Vec3& v : cfg.vartheta_hat0)
    root["vartheta_hat0"].push_back(dump_vec(v));
  root["gains"] = {{"alpha", cfg.gains.alpha},
                   {"beta", cfg.gains.beta},
                   {"lambda", cfg.gains.lambda},
                   {"K", dump_matrix(cfg.gains.K)},
                   {"Gamma", dump_matrix(cfg.gains.Gamma)},
                   {"Lambda", dump_matrix(cfg.gains.Lambda)},
                   {"theta_lo", dump_vec(cfg.gains.theta_lo)},
                   {"theta_hi", dump_vec(cfg.gains.theta_hi)},
                   {"det_floor", cfg.gains.det_floor}};
  root["pi"] = {{"kp", dump_matrix(cfg.pi.kp)}, {"ki", dump_matrix(cfg.pi.ki)}};
  switch (cfg.mode) {
    case sim::ControllerMode::kDynamic: root["mode"] = "dynamic"; break;
    case sim::ControllerMode::kKinematicPi: root["mode"] = "kinematic-pi"; break;
    case sim::ControllerMode::kTeleopPd: root["mode"] = "teleop-pd"; break;
  }
  root["stimulus"] = {{"enabled", cfg.stimulus.enabled},
                      {"agent", cfg.stimulus.agent},
                      {"t_on", cfg.stimulus.params.t_on},
                      {"kd", cfg.stimulus.params.kd},
                      {"kp", cfg.stimulus.params.kp},
                      {"x_h", dump_vec(cfg.stimulus.params.x_h)}};
  root["teleop"] = {{"kd", dump_matrix(cfg.teleop.kd)},
                    {"kp", dump_matrix(cfg.teleop.kp)},
                    {"tau_h", dump_vec(cfg.teleop.tau_h)}};
  root["noise"] = {{"sigma_q", cfg.noise.sigma_q},
                   {"sigma_qdot", cfg.noise.sigma_qdot},
                   {"sigma_x", cfg.noise.sigma_x}};
  root["observer_init_offset"] = cfg.observer_init_offset;
  root["dt"] = cfg.dt;
  root["t_end"] = cfg.t_end;
  root["integrator"] =
      cfg.integrator == sim::Integrator::kRk4 ? "rk4" : "euler";
  root["seed"] = cfg.seed;
  return root.dump(2) + "\n";
}

namespace {

bool spd(const Eigen::MatrixXd& m, bool allow_semidefinite = false) {
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12) return false;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  const double lo = es.eigenvalues().minCoeff();
  return allow_semidefinite ? lo >= -1e-12 : lo > 0.0;
}

}  // namespace

std::vector<std::string> validate_config(const ScenarioConfig& cfg) {
  std::vector<std::string> bad;
  const int n = cfg.n();
  try {
    graph::check_valid(cfg.graph);
    if (cfg.mode != sim::ControllerMode::kTeleopPd &&
        !graph::has_spanning_tree(cfg.graph))
      bad.push_back("graph: no directed spanning tree, consensus not ensured");
  } catch (const ConfigError& e) {
    bad.push_back(e.what());
  }

  auto check_count = [&](std::size_t got, const char* what) {
    if (got != static_cast<std::size_t>(n))
      bad.push_back(std::string(what) + ": expected one entry per agent");
  };
  check_count(cfg.robots.size(), "robots");
  check_count(cfg.q0.size(), "q0");
  check_count(cfg.qdot0.size(), "qdot0");
  check_count(cfg.theta_hat0.size(), "theta_hat0");
  check_count(cfg.vartheta_hat0.size(), "vartheta_hat0");

  for (std::size_t i = 0; i < cfg.robots.size(); ++i) {
    if (!(cfg.robots[i].kin.link_lengths.minCoeff() > 0.0))
      bad.push_back("robots[" + std::to_string(i) +
                    "].link_lengths: must be positive");
    if (!robot::inertia_uniformly_positive_definite(cfg.robots[i].dyn))
      bad.push_back("robots[" + std::to_string(i) +
                    "].inertia: inertia matrix not uniformly positive "
                    "definite over the elbow range");
  }

  if (!(cfg.gains.alpha >= 0.0)) bad.push_back("gains.alpha: must be >= 0");
  if (!(cfg.gains.beta > 0.0)) bad.push_back("gains.beta: must be > 0");
  if (!(cfg.gains.lambda >= 0.0)) bad.push_back("gains.lambda: must be >= 0");
  if (!spd(cfg.gains.K)) bad.push_back("gains.K: must be symmetric positive definite");
  if (!spd(cfg.gains.Gamma))
    bad.push_back("gains.Gamma: must be symmetric positive definite");
  if (!spd(cfg.gains.Lambda))
    bad.push_back("gains.Lambda: must be symmetric positive definite");
  if (!(cfg.gains.theta_lo.minCoeff() > 0.0))
    bad.push_back("gains.theta_lo: must be positive");
  if (!((cfg.gains.theta_hi - cfg.gains.theta_lo).minCoeff() > 0.0))
    bad.push_back("gains.theta_lo/theta_hi: lower bound must be below upper");
  if (!(cfg.gains.det_floor > 0.0)) bad.push_back("gains.det_floor: must be > 0");

  if (cfg.mode == sim::ControllerMode::kKinematicPi) {
    if (!spd(cfg.pi.kp)) bad.push_back("pi.kp: must be symmetric positive definite");
    if (!spd(cfg.pi.ki, /*allow_semidefinite=*/true))
      bad.push_back("pi.ki: must be symmetric positive semidefinite");
  }
  if (cfg.mode == sim::ControllerMode::kTeleopPd) {
    if (n != 2) bad.push_back("teleop mode requires exactly two agents");
    if (!spd(cfg.teleop.kd)) bad.push_back("teleop.kd: must be symmetric positive definite");
    if (!spd(cfg.teleop.kp)) bad.push_back("teleop.kp: must be symmetric positive definite");
  }

  if (!(cfg.dt > 0.0)) bad.push_back("dt: must be positive");
  if (!(cfg.t_end >= cfg.dt)) bad.push_back("t_end: must be at least dt");
  if (cfg.noise.sigma_q < 0 || cfg.noise.sigma_qdot < 0 || cfg.noise.sigma_x < 0)
    bad.push_back("noise: standard deviations must be nonnegative");

  if (cfg.theta_hat0.size() == static_cast<std::size_t>(n) &&
      cfg.q0.size() == static_cast<std::size_t>(n)) {
    for (int i = 0; i < n; ++i) {
      if ((cfg.theta_hat0[i] - cfg.gains.theta_lo).minCoeff() < 0.0 ||
          (cfg.gains.theta_hi - cfg.theta_hat0[i]).minCoeff() < 0.0)
        bad.push_back("theta_hat0[" + std::to_string(i) +
                      "]: outside the projection box");
      const double det =
          robot::jacobian({cfg.theta_hat0[i]}, cfg.q0[i]).determinant();
      if (std::abs(det) < cfg.gains.det_floor)
        bad.push_back("q0[" + std::to_string(i) +
                      "]: estimated Jacobian starts below the determinant floor");
    }
  }
  return bad;
}

}  // namespace netarm::io
