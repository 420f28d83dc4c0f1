#include "grw/flow.hpp"

#include <cmath>
#include <cstring>
#include <fstream>

#include "grw/errors.hpp"
#include "grw/kernels.hpp"

namespace grw {
namespace {

void mask_boundary(const BaseMesh& mesh, ScalarField& k) {
  if (mesh.topology != Topology::rectangle) return;
  const long n = mesh.n;
  if (mesh.m == 1) {
    k[0] = 0.0;
    k[static_cast<std::size_t>(n - 1)] = 0.0;
    return;
  }
  for (long i = 0; i < n; ++i) {
    k[mesh.idx(i, 0)] = 0.0;
    k[mesh.idx(i, n - 1)] = 0.0;
    k[mesh.idx(0, i)] = 0.0;
    k[mesh.idx(n - 1, i)] = 0.0;
  }
}

struct HErrExtrema {
  double sup_abs = 0.0;
  double min_signed = 0.0;
};

// Frozen boundary nodes are not driven toward the prescribed curvature, so
// the convergence monitors read the updated nodes only.
HErrExtrema h_err_extrema(const BaseMesh& mesh, const GeometrySnapshot& snap,
                          const ScalarField& Hcal) {
  HErrExtrema r;
  bool first = true;
  for (std::size_t p = 0; p < mesh.nodes; ++p) {
    if (mesh.is_boundary(p)) continue;
    const double e = snap.H[p] - Hcal[p];
    if (first) {
      r.sup_abs = std::fabs(e);
      r.min_signed = e;
      first = false;
    } else {
      r.sup_abs = std::max(r.sup_abs, std::fabs(e));
      r.min_signed = std::min(r.min_signed, e);
    }
  }
  return r;
}

MonitorRow make_row(const BaseMesh& mesh, const GeometrySnapshot& snap,
                    const ScalarField& Hcal, const ScalarField& u, double s, long step,
                    double cfl) {
  MonitorRow row;
  row.step = step;
  row.s = s;
  row.u_sup = kernels().reduce_max(u.data(), u.size());
  row.u_inf = kernels().reduce_min(u.data(), u.size());
  row.v_sup = kernels().reduce_max(snap.v.data(), snap.v.size());
  const HErrExtrema he = h_err_extrema(mesh, snap, Hcal);
  row.sup_H_err = he.sup_abs;
  row.min_H_err = he.min_signed;
  row.dt = stability_dt(mesh, snap, cfl, &row.lambda_max);
  return row;
}

}  // namespace

ScalarField rhs_compact(const BaseMesh& mesh, const GeometrySnapshot& snap,
                        const ScalarField& Hcal) {
  ScalarField out(mesh.nodes);
  kernels().compact_rhs(snap.H.data(), Hcal.data(), snap.v.data(), out.data(),
                        mesh.nodes);
  mask_boundary(mesh, out);
  return out;
}

ScalarField rhs_graphical(const BaseMesh& mesh, const GeometrySnapshot& snap,
                          const ScalarField& Hcal) {
  ScalarField out(mesh.nodes);
  for (std::size_t p = 0; p < mesh.nodes; ++p) {
    const double f = snap.f[p], fp = snap.fp[p];
    const double D = snap.radicand[p];
    // Laplacian of the state itself: principal part plus the first-order
    // warp terms that survive when the operator acts on u.
    const double lap_full =
        snap.lap_u[p] / D +
        snap.grad2[p] / D * (f * fp / D - static_cast<double>(snap.m - 1) * fp / f);
    out[p] = -lap_full + fp / f * (static_cast<double>(snap.m) + snap.grad2[p] / D) +
             Hcal[p] * snap.v[p];
  }
  mask_boundary(mesh, out);
  return out;
}

double stability_dt(const BaseMesh& mesh, const GeometrySnapshot& snap, double cfl,
                    double* lambda_out) {
  const double lam = stability_lambda_max(snap);
  if (lambda_out != nullptr) *lambda_out = lam;
  return cfl * mesh.h * mesh.h / (2.0 * static_cast<double>(mesh.m) * lam);
}

ScalarField step_once(const BaseMesh& mesh, const WarpingFunction& w,
                      const ScalarField& Hcal, const ScalarField& u, double dt,
                      Integrator integrator, double eps_sl) {
  const KernelSet& ks = kernels();
  if (integrator == Integrator::euler) {
    const GeometrySnapshot snap = build_snapshot(mesh, w, u, eps_sl);
    const ScalarField k1 = rhs_compact(mesh, snap, Hcal);
    ScalarField out = u;
    ks.axpy(out.data(), k1.data(), dt, out.size());
    return out;
  }

  const GeometrySnapshot s1 = build_snapshot(mesh, w, u, eps_sl);
  const ScalarField k1 = rhs_compact(mesh, s1, Hcal);

  ScalarField u2 = u;
  ks.axpy(u2.data(), k1.data(), 0.5 * dt, u2.size());
  const GeometrySnapshot s2 = build_snapshot(mesh, w, u2, eps_sl);
  const ScalarField k2 = rhs_compact(mesh, s2, Hcal);

  ScalarField u3 = u;
  ks.axpy(u3.data(), k2.data(), 0.5 * dt, u3.size());
  const GeometrySnapshot s3 = build_snapshot(mesh, w, u3, eps_sl);
  const ScalarField k3 = rhs_compact(mesh, s3, Hcal);

  ScalarField u4 = u;
  ks.axpy(u4.data(), k3.data(), dt, u4.size());
  const GeometrySnapshot s4 = build_snapshot(mesh, w, u4, eps_sl);
  const ScalarField k4 = rhs_compact(mesh, s4, Hcal);

  ScalarField out = u;
  ks.rk4_combine(out.data(), k1.data(), k2.data(), k3.data(), k4.data(), dt / 6.0,
                 out.size());
  return out;
}

GraphState run_flow(const BaseMesh& mesh, const WarpingFunction& w,
                    const ScalarField& Hcal, const ScalarField& u0,
                    const FlowConfig& cfg, FlowRecord& record, const FlowHooks& hooks,
                    double start_s, long start_step) {
  GraphState state{u0, start_s};
  long step = start_step;

  GeometrySnapshot snap = build_snapshot(mesh, w, state.u, cfg.eps_sl);

  const auto emit_row = [&](const MonitorRow& row) {
    record.series.push_back(row);
    if (hooks.on_row) hooks.on_row(row);
  };

  if (step == 0) {
    if (cfg.upper_barrier_on) {
      const HErrExtrema he = h_err_extrema(mesh, snap, Hcal);
      if (!(he.min_signed >= cfg.upper_barrier_delta)) {
        throw AssumptionError(
            "upper barrier check failed: min(H - Hcal) = " +
            std::to_string(he.min_signed) + " below delta = " +
            std::to_string(cfg.upper_barrier_delta));
      }
      record.events.push_back({0, "assumption", "upper barrier holds"});
    }
    if (cfg.timelike != TimelikeMode::off) {
      const double lo = kernels().reduce_min(state.u.data(), state.u.size()) - 1.0;
      const double hi = kernels().reduce_max(state.u.data(), state.u.size()) + 1.0;
      const TimelikeReport rep =
          check_timelike_convergence(w, mesh, lo, hi, 512, cfg.timelike);
      if (!rep.pass)
        throw AssumptionError("timelike convergence check failed: min Ric(X,X) = " +
                              std::to_string(rep.min_value));
      record.events.push_back({0, "assumption", "timelike convergence holds"});
    }
    emit_row(make_row(mesh, snap, Hcal, state.u, state.s, step, cfg.cfl));
  }

  const double s_tiny = 1e-14 * std::max(1.0, std::fabs(cfg.s_end));
  while (state.s < cfg.s_end - s_tiny) {
    if (cfg.max_steps > 0 && step >= start_step + cfg.max_steps) break;

    double dt = stability_dt(mesh, snap, cfg.cfl);
    if (state.s + dt > cfg.s_end) dt = cfg.s_end - state.s;

    state.u = step_once(mesh, w, Hcal, state.u, dt, cfg.integrator, cfg.eps_sl);
    state.s += dt;
    ++step;

    snap = build_snapshot(mesh, w, state.u, cfg.eps_sl);

    const bool last = state.s >= cfg.s_end - s_tiny;
    if (cfg.series_every > 0 && (step % cfg.series_every == 0 || last))
      emit_row(make_row(mesh, snap, Hcal, state.u, state.s, step, cfg.cfl));
    if (hooks.on_fields && cfg.fields_every > 0 && step % cfg.fields_every == 0)
      hooks.on_fields(state.u, state.s, step);
    if (hooks.on_checkpoint && cfg.checkpoint_every > 0 &&
        step % cfg.checkpoint_every == 0)
      hooks.on_checkpoint(state.u, state.s, step);
  }

  record.events.push_back({step, "complete", "reached s = " + std::to_string(state.s)});
  return state;
}

namespace {

void put_bytes(std::string& buf, const void* src, std::size_t len) {
  buf.append(static_cast<const char*>(src), len);
}

template <typename T>
void put_pod(std::string& buf, T value) {
  put_bytes(buf, &value, sizeof value);
}

template <typename T>
T get_pod(const std::string& buf, std::size_t& off) {
  if (off + sizeof(T) > buf.size())
    throw CorruptCheckpointError("checkpoint truncated");
  T value;
  std::memcpy(&value, buf.data() + off, sizeof value);
  off += sizeof value;
  return value;
}

std::uint64_t byte_sum(const std::string& buf) {
  std::uint64_t sum = 0;
  for (const char c : buf) sum += static_cast<unsigned char>(c);
  return sum;
}

}  // namespace

void write_checkpoint(const std::string& path, const Checkpoint& cp) {
  std::string buf;
  buf.reserve(64 + cp.config_text.size() + cp.u.size() * 8);
  buf.append("GRWF");
  put_pod<std::uint32_t>(buf, 1);  // format version

  put_pod<std::uint32_t>(buf, static_cast<std::uint32_t>(cp.m));
  put_pod<std::uint32_t>(buf, cp.topology == Topology::periodic ? 0u : 1u);
  put_pod<std::uint64_t>(buf, static_cast<std::uint64_t>(cp.n));
  put_pod<double>(buf, cp.L);
  put_pod<std::uint32_t>(buf, cp.metric == MetricKind::flat ? 0u : 1u);
  put_pod<double>(buf, cp.phi_amplitude);
  put_pod<std::uint32_t>(buf, static_cast<std::uint32_t>(cp.config_text.size()));
  buf.append(cp.config_text);

  put_pod<double>(buf, cp.s);
  put_pod<std::uint64_t>(buf, cp.steps);
  put_pod<std::uint64_t>(buf, static_cast<std::uint64_t>(cp.u.size()));
  for (const double x : cp.u) put_pod<double>(buf, x);

  put_pod<std::uint64_t>(buf, byte_sum(buf));

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write checkpoint file " + path);
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
}

Checkpoint read_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CorruptCheckpointError("cannot open checkpoint file " + path);
  std::string buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

  if (buf.size() < 16 || buf.compare(0, 4, "GRWF") != 0)
    throw CorruptCheckpointError("bad checkpoint magic");
  const std::string body = buf.substr(0, buf.size() - 8);
  std::size_t tail = buf.size() - 8;
  const std::uint64_t stored = get_pod<std::uint64_t>(buf, tail);
  if (stored != byte_sum(body)) throw CorruptCheckpointError("checkpoint checksum mismatch");

  std::size_t off = 4;
  Checkpoint cp;
  const std::uint32_t version = get_pod<std::uint32_t>(body, off);
  if (version != 1) throw CorruptCheckpointError("unsupported checkpoint version");

  cp.m = static_cast<int>(get_pod<std::uint32_t>(body, off));
  cp.topology = get_pod<std::uint32_t>(body, off) == 0 ? Topology::periodic
                                                       : Topology::rectangle;
  cp.n = static_cast<long>(get_pod<std::uint64_t>(body, off));
  cp.L = get_pod<double>(body, off);
  cp.metric = get_pod<std::uint32_t>(body, off) == 0 ? MetricKind::flat
                                                     : MetricKind::conformal;
  cp.phi_amplitude = get_pod<double>(body, off);
  const std::uint32_t cfg_len = get_pod<std::uint32_t>(body, off);
  if (off + cfg_len > body.size()) throw CorruptCheckpointError("checkpoint truncated");
  cp.config_text = body.substr(off, cfg_len);
  off += cfg_len;

  cp.s = get_pod<double>(body, off);
  cp.steps = get_pod<std::uint64_t>(body, off);
  const std::uint64_t count = get_pod<std::uint64_t>(body, off);
  cp.u.resize(count);
  for (std::uint64_t i = 0; i < count; ++i) cp.u[i] = get_pod<double>(body, off);
  return cp;
}

}  // namespace grw
