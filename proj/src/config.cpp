#include "grw/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "grw/errors.hpp"

namespace grw {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

struct Parser {
  std::vector<std::string> errors;

  double num(const std::string& key, const std::string& val, bool ok_default,
             double fallback) {
    try {
      std::size_t used = 0;
      const double x = std::stod(val, &used);
      if (used != val.size()) throw std::invalid_argument(val);
      return x;
    } catch (const std::exception&) {
      errors.push_back(key + ": expected a number, got '" + val + "'");
      return ok_default ? fallback : 0.0;
    }
  }

  long integer(const std::string& key, const std::string& val, long fallback) {
    try {
      std::size_t used = 0;
      const long x = std::stol(val, &used);
      if (used != val.size()) throw std::invalid_argument(val);
      return x;
    } catch (const std::exception&) {
      errors.push_back(key + ": expected an integer, got '" + val + "'");
      return fallback;
    }
  }
};

}  // namespace

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  cfg.text = text;
  Parser p;
  std::string warp_kind = "constant";
  double warp_a = 1.0, warp_b = 0.0, warp_omega = 1.0;

  std::istringstream in(text);
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      p.errors.push_back("line " + std::to_string(line_no) + ": expected key = value");
      continue;
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key.empty() || val.empty()) {
      p.errors.push_back("line " + std::to_string(line_no) + ": empty key or value");
      continue;
    }

    if (key == "mesh.m") {
      cfg.mesh_m = static_cast<int>(p.integer(key, val, cfg.mesh_m));
    } else if (key == "mesh.topology") {
      if (val == "periodic") cfg.topology = Topology::periodic;
      else if (val == "rectangle") cfg.topology = Topology::rectangle;
      else p.errors.push_back("mesh.topology: '" + val + "' (periodic | rectangle)");
    } else if (key == "mesh.n") {
      cfg.n = p.integer(key, val, cfg.n);
    } else if (key == "mesh.L") {
      cfg.L = p.num(key, val, true, cfg.L);
    } else if (key == "mesh.metric") {
      if (val == "flat") cfg.metric = MetricKind::flat;
      else if (val == "conformal") cfg.metric = MetricKind::conformal;
      else p.errors.push_back("mesh.metric: '" + val + "' (flat | conformal)");
    } else if (key == "mesh.phi_amplitude") {
      cfg.phi_amplitude = p.num(key, val, true, cfg.phi_amplitude);
    } else if (key == "warp.kind") {
      warp_kind = val;
    } else if (key == "warp.a") {
      warp_a = p.num(key, val, true, warp_a);
    } else if (key == "warp.b") {
      warp_b = p.num(key, val, true, warp_b);
    } else if (key == "warp.omega") {
      warp_omega = p.num(key, val, true, warp_omega);
    } else if (key == "prescribed.kind") {
      if (val == "constant" || val == "slice_matching" || val == "file")
        cfg.prescribed_kind = val;
      else
        p.errors.push_back("prescribed.kind: '" + val +
                           "' (constant | slice_matching | file)");
    } else if (key == "prescribed.value") {
      cfg.prescribed_value = p.num(key, val, true, cfg.prescribed_value);
    } else if (key == "prescribed.file") {
      cfg.prescribed_file = val;
    } else if (key == "init.kind") {
      if (val == "constant" || val == "sine" || val == "bump") cfg.init_kind = val;
      else p.errors.push_back("init.kind: '" + val + "' (constant | sine | bump)");
    } else if (key == "init.amplitude") {
      cfg.init_amplitude = p.num(key, val, true, cfg.init_amplitude);
    } else if (key == "init.center") {
      cfg.init_center = p.num(key, val, true, cfg.init_center);
    } else if (key == "flow.integrator") {
      if (val == "euler") cfg.integrator = Integrator::euler;
      else if (val == "rk4") cfg.integrator = Integrator::rk4;
      else p.errors.push_back("flow.integrator: '" + val + "' (euler | rk4)");
    } else if (key == "flow.cfl") {
      cfg.cfl = p.num(key, val, true, cfg.cfl);
    } else if (key == "flow.s_end") {
      cfg.s_end = p.num(key, val, true, cfg.s_end);
    } else if (key == "flow.eps_sl") {
      cfg.eps_sl = p.num(key, val, true, cfg.eps_sl);
    } else if (key == "flow.checkpoint_every") {
      cfg.checkpoint_every = p.integer(key, val, cfg.checkpoint_every);
    } else if (key == "flow.max_steps") {
      cfg.max_steps = p.integer(key, val, cfg.max_steps);
    } else if (key == "checks.upper_barrier_delta") {
      if (val == "off") {
        cfg.upper_barrier_on = false;
      } else {
        cfg.upper_barrier_on = true;
        cfg.upper_barrier_delta = p.num(key, val, true, 0.0);
      }
    } else if (key == "checks.timelike_mode") {
      if (val == "off") cfg.timelike = TimelikeMode::off;
      else if (val == "strict") cfg.timelike = TimelikeMode::strict;
      else if (val == "nonneg") cfg.timelike = TimelikeMode::nonneg;
      else p.errors.push_back("checks.timelike_mode: '" + val + "' (off | strict | nonneg)");
    } else if (key == "checks.ricci_sigma") {
      const long s = p.integer(key, val, -1);
      if (s != -1 && s != 1) p.errors.push_back("checks.ricci_sigma: expected -1 or 1");
      else cfg.ricci_sigma = static_cast<int>(s);
    } else if (key == "checks.identities") {
      cfg.identities.clear();
      std::string item;
      std::istringstream list(val);
      while (std::getline(list, item, ',')) {
        item = trim(item);
        if (!item.empty()) cfg.identities.push_back(item);
      }
    } else if (key == "out.dir") {
      cfg.out_dir = val;
    } else if (key == "out.series_every") {
      cfg.series_every = p.integer(key, val, cfg.series_every);
    } else if (key == "out.fields_every") {
      cfg.fields_every = p.integer(key, val, cfg.fields_every);
    } else {
      p.errors.push_back("unknown key '" + key + "'");
    }
  }

  if (cfg.mesh_m != 1 && cfg.mesh_m != 2) p.errors.push_back("mesh.m: must be 1 or 2");
  if (cfg.n < 8) p.errors.push_back("mesh.n: must be at least 8");
  if (!(cfg.L > 0.0)) p.errors.push_back("mesh.L: must be positive");
  if (!(cfg.cfl > 0.0 && cfg.cfl <= 1.0)) p.errors.push_back("flow.cfl: must lie in (0, 1]");
  if (!(cfg.s_end > 0.0)) p.errors.push_back("flow.s_end: must be positive");
  if (!(cfg.eps_sl > 0.0 && cfg.eps_sl < 0.5))
    p.errors.push_back("flow.eps_sl: must lie in (0, 0.5)");
  if (cfg.series_every < 1) p.errors.push_back("out.series_every: must be at least 1");
  if (cfg.fields_every < 0) p.errors.push_back("out.fields_every: must be nonnegative");
  if (cfg.checkpoint_every < 0)
    p.errors.push_back("flow.checkpoint_every: must be nonnegative");
  if (cfg.max_steps < 0) p.errors.push_back("flow.max_steps: must be nonnegative");
  if (cfg.upper_barrier_on && cfg.upper_barrier_delta < 0.0)
    p.errors.push_back("checks.upper_barrier_delta: must be nonnegative or off");
  if (cfg.prescribed_kind == "file" && cfg.prescribed_file.empty())
    p.errors.push_back("prescribed.file: required when prescribed.kind = file");

  try {
    cfg.warp = make_warp(warp_kind_from_string(warp_kind), warp_a, warp_b, warp_omega);
  } catch (const ConfigError& e) {
    for (const auto& msg : e.messages) p.errors.push_back("warp: " + msg);
  }

  if (!p.errors.empty()) throw ConfigError(p.errors);
  return cfg;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

RunConfig load_config_file(const std::string& path) {
  return parse_config(read_text_file(path));
}

BaseMesh build_mesh(const RunConfig& cfg) {
  return make_mesh(cfg.mesh_m, cfg.topology, cfg.n, cfg.L, cfg.metric,
                   cfg.phi_amplitude);
}

ScalarField build_initial_state(const RunConfig& cfg, const BaseMesh& mesh) {
  ScalarField u(mesh.nodes, cfg.init_amplitude);
  if (cfg.init_kind == "constant") return u;
  const double two_pi = 6.283185307179586;
  for (std::size_t p = 0; p < mesh.nodes; ++p) {
    double val = cfg.init_amplitude;
    for (int d = 0; d < mesh.m; ++d) {
      const double x = mesh.coord(mesh.axis_index(p, d)) - cfg.init_center;
      if (cfg.init_kind == "sine") {
        val *= std::sin(two_pi * x / mesh.L);
      } else {
        const double s = std::sin(0.5 * two_pi * x / mesh.L);
        val *= s * s;
      }
    }
    u[p] = val;
  }
  return u;
}

ScalarField build_prescribed(const RunConfig& cfg, const BaseMesh& mesh) {
  if (cfg.prescribed_kind == "constant")
    return ScalarField(mesh.nodes, cfg.prescribed_value);
  if (cfg.prescribed_kind == "slice_matching") {
    // Mean curvature of the constant slice u = init.amplitude; a flow started
    // there is stationary when the prescription matches it.
    const WarpEval e = warp_eval(cfg.warp, cfg.init_amplitude);
    return ScalarField(mesh.nodes,
                       -static_cast<double>(mesh.m) * e.fp / e.f);
  }
  // grid file, whitespace-separated, one value per node in node order
  std::istringstream in(read_text_file(cfg.prescribed_file));
  ScalarField H;
  H.reserve(mesh.nodes);
  double x = 0.0;
  while (in >> x) H.push_back(x);
  if (H.size() != mesh.nodes)
    throw ConfigError("prescribed.file: expected " + std::to_string(mesh.nodes) +
                      " values, found " + std::to_string(H.size()));
  return H;
}

FlowConfig build_flow_config(const RunConfig& cfg) {
  FlowConfig fc;
  fc.integrator = cfg.integrator;
  fc.cfl = cfg.cfl;
  fc.s_end = cfg.s_end;
  fc.eps_sl = cfg.eps_sl;
  fc.series_every = cfg.series_every;
  fc.fields_every = cfg.fields_every;
  fc.checkpoint_every = cfg.checkpoint_every;
  fc.max_steps = cfg.max_steps;
  fc.upper_barrier_on = cfg.upper_barrier_on;
  fc.upper_barrier_delta = cfg.upper_barrier_delta;
  fc.timelike = cfg.timelike;
  return fc;
}

}  // namespace grw
