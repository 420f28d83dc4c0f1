#pragma once

#include <string>
#include <vector>

#include "grw/flow.hpp"
#include "grw/mesh.hpp"
#include "grw/warp.hpp"

namespace grw {

// Flat key = value run description.  parse_config validates everything it
// can in one pass and throws ConfigError carrying the full message list.
struct RunConfig {
  int mesh_m = 1;
  Topology topology = Topology::periodic;
  long n = 64;
  double L = 6.283185307179586;
  MetricKind metric = MetricKind::flat;
  double phi_amplitude = 0.1;

  WarpingFunction warp;

  std::string prescribed_kind = "constant";  // constant | slice_matching | file
  double prescribed_value = 0.0;
  std::string prescribed_file;

  std::string init_kind = "constant";  // constant | sine | bump
  double init_amplitude = 0.0;
  double init_center = 0.0;

  Integrator integrator = Integrator::euler;
  double cfl = 0.2;
  double s_end = 1.0;
  double eps_sl = 1e-6;
  long checkpoint_every = 0;
  long max_steps = 0;

  bool upper_barrier_on = false;
  double upper_barrier_delta = 0.0;
  TimelikeMode timelike = TimelikeMode::off;
  int ricci_sigma = -1;
  std::vector<std::string> identities;  // empty runs the full list

  std::string out_dir = "out";
  long series_every = 1;
  long fields_every = 0;

  std::string text;  // raw document, embedded into checkpoints
};

RunConfig parse_config(const std::string& text);
RunConfig load_config_file(const std::string& path);
std::string read_text_file(const std::string& path);

BaseMesh build_mesh(const RunConfig& cfg);
ScalarField build_initial_state(const RunConfig& cfg, const BaseMesh& mesh);
ScalarField build_prescribed(const RunConfig& cfg, const BaseMesh& mesh);
FlowConfig build_flow_config(const RunConfig& cfg);

}  // namespace grw
