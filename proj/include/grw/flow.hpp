#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "grw/fields.hpp"
#include "grw/graph.hpp"
#include "grw/mesh.hpp"
#include "grw/warp.hpp"

namespace grw {

enum class Integrator { euler, rk4 };

struct GraphState {
  ScalarField u;
  double s = 0.0;
};

struct FlowConfig {
  Integrator integrator = Integrator::euler;
  double cfl = 0.2;
  double s_end = 1.0;
  double eps_sl = 1e-6;
  long series_every = 1;
  long fields_every = 0;      // 0 disables field dumps
  long checkpoint_every = 0;  // 0 disables checkpoints
  long max_steps = 0;         // 0 means no step cap
  bool upper_barrier_on = true;
  double upper_barrier_delta = 0.0;
  TimelikeMode timelike = TimelikeMode::off;
};

struct MonitorRow {
  long step = 0;
  double s = 0.0;
  double u_sup = 0.0, u_inf = 0.0, v_sup = 0.0;
  double sup_H_err = 0.0, min_H_err = 0.0;
  double dt = 0.0, lambda_max = 0.0;
};

struct FlowEvent {
  long step = 0;
  std::string kind;
  std::string message;
};

struct FlowRecord {
  std::vector<MonitorRow> series;
  std::vector<FlowEvent> events;
};

struct FlowHooks {
  std::function<void(const MonitorRow&)> on_row;
  std::function<void(const ScalarField&, double, long)> on_fields;
  std::function<void(const ScalarField&, double, long)> on_checkpoint;
};

// -(H - Hcal) v per node; on rectangles the boundary entries are zeroed so
// the Dirichlet trace stays frozen.
ScalarField rhs_compact(const BaseMesh& mesh, const GeometrySnapshot& snap,
                        const ScalarField& Hcal);

// Right-hand side of the graphical flow equation assembled from the induced
// Laplacian and the warp terms; agrees with rhs_compact to stencil accuracy.
ScalarField rhs_graphical(const BaseMesh& mesh, const GeometrySnapshot& snap,
                          const ScalarField& Hcal);

// cfl h^2 / (2 m Lambda_max); recomputed from the current state every step.
double stability_dt(const BaseMesh& mesh, const GeometrySnapshot& snap, double cfl,
                    double* lambda_out = nullptr);

// One explicit step of the given size.  RK4 rebuilds the graph geometry at
// every stage; dt is frozen across stages.
ScalarField step_once(const BaseMesh& mesh, const WarpingFunction& w,
                      const ScalarField& Hcal, const ScalarField& u, double dt,
                      Integrator integrator, double eps_sl = 1e-6);

// Integrates from (u0, start_s) until s_end (or max_steps), recording
// monitors.  start_step > 0 resumes a run: the pre-flight assumption checks
// and the initial monitor row are skipped because the original run emitted
// them.  Monitor sup/min of H - Hcal ignore frozen boundary nodes.
GraphState run_flow(const BaseMesh& mesh, const WarpingFunction& w,
                    const ScalarField& Hcal, const ScalarField& u0,
                    const FlowConfig& cfg, FlowRecord& record,
                    const FlowHooks& hooks = {}, double start_s = 0.0,
                    long start_step = 0);

// Binary checkpoint: magic "GRWF", format version, mesh descriptor (with the
// originating configuration text), flow time, completed step count, the state
// as little-endian doubles, and a trailing byte-sum checksum.
struct Checkpoint {
  int m = 1;
  Topology topology = Topology::periodic;
  long n = 0;
  double L = 0.0;
  MetricKind metric = MetricKind::flat;
  double phi_amplitude = 0.0;
  std::string config_text;
  double s = 0.0;
  std::uint64_t steps = 0;
  ScalarField u;
};

void write_checkpoint(const std::string& path, const Checkpoint& cp);
Checkpoint read_checkpoint(const std::string& path);

}  // namespace grw
