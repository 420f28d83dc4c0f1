#include "grw/commands.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <sstream>

#include "grw/config.hpp"
#include "grw/errors.hpp"
#include "grw/flow.hpp"
#include "grw/graph.hpp"
#include "grw/identities.hpp"

namespace grw {

std::string format_g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

int guarded(const std::function<int()>& body) {
  try {
    return body();
  } catch (const NotSpacelikeError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const BlowupError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const ConfigError& e) {
    for (const auto& msg : e.messages) std::cerr << "config error: " << msg << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

Checkpoint make_checkpoint(const RunConfig& cfg, const ScalarField& u, double s,
                           long steps) {
  Checkpoint cp;
  cp.m = cfg.mesh_m;
  cp.topology = cfg.topology;
  cp.n = cfg.n;
  cp.L = cfg.L;
  cp.metric = cfg.metric;
  cp.phi_amplitude = cfg.phi_amplitude;
  cp.config_text = cfg.text;
  cp.s = s;
  cp.steps = static_cast<std::uint64_t>(steps);
  cp.u = u;
  return cp;
}

void write_series_row(std::ofstream& out, const MonitorRow& row) {
  out << format_g17(row.s) << ',' << format_g17(row.u_sup) << ','
      << format_g17(row.u_inf) << ',' << format_g17(row.v_sup) << ','
      << format_g17(row.sup_H_err) << ',' << format_g17(row.min_H_err) << ','
      << format_g17(row.dt) << ',' << format_g17(row.lambda_max) << '\n';
  out.flush();
}

int run_driver(const RunConfig& cfg, const ScalarField& u0, double start_s,
               long start_step, bool append_series) {
  const BaseMesh mesh = build_mesh(cfg);
  const ScalarField Hcal = build_prescribed(cfg, mesh);
  std::filesystem::create_directories(cfg.out_dir);

  const std::string series_path = cfg.out_dir + "/series.csv";
  const bool have_series =
      append_series && std::filesystem::exists(series_path) &&
      std::filesystem::file_size(series_path) > 0;
  std::ofstream series(series_path,
                       have_series ? std::ios::app : std::ios::trunc);
  if (!series) throw ConfigError("cannot write " + series_path);
  if (!have_series)
    series << "s,u_sup,u_inf,v_sup,sup_H_err,min_H_err,dt,Lambda_max\n";

  FlowHooks hooks;
  hooks.on_row = [&](const MonitorRow& row) { write_series_row(series, row); };
  hooks.on_fields = [&](const ScalarField& u, double s, long step) {
    write_field_dump(cfg.out_dir + "/fields_step" + std::to_string(step) + ".csv",
                     mesh, u, s);
  };
  hooks.on_checkpoint = [&](const ScalarField& u, double s, long step) {
    write_checkpoint(cfg.out_dir + "/checkpoint_step" + std::to_string(step) + ".ckpt",
                     make_checkpoint(cfg, u, s, step));
  };

  FlowRecord record;
  const GraphState final_state = run_flow(mesh, cfg.warp, Hcal, u0,
                                          build_flow_config(cfg), record, hooks,
                                          start_s, start_step);

  const long final_step = record.series.empty() ? start_step : record.series.back().step;
  write_checkpoint(cfg.out_dir + "/checkpoint_final.ckpt",
                   make_checkpoint(cfg, final_state.u, final_state.s, final_step));

  if (!record.series.empty()) {
    const MonitorRow& last = record.series.back();
    std::cout << "steps=" << last.step << " s=" << format_g17(last.s)
              << " sup_H_err=" << format_g17(last.sup_H_err)
              << " v_sup=" << format_g17(last.v_sup) << "\n";
  }
  return 0;
}

struct IdentityLevel {
  long n = 0;
  double h = 0.0;
  double sup = 0.0;
};

bool is_order_identity(const std::string& name) {
  return name == "laplacian" || name == "h-cross" || name == "h-gradu" ||
         name == "covector";
}

const std::vector<std::string>& all_identities() {
  static const std::vector<std::string> names = {
      "laplacian", "laplacian-assembly", "h-cross", "h-gradu", "covector",
      "volume",    "metric-norms",       "rhs",     "ricci"};
  return names;
}

}  // namespace

void write_field_dump(const std::string& path, const BaseMesh& mesh,
                      const ScalarField& u, double s) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw ConfigError("cannot write " + path);
  const long ny = mesh.m == 2 ? mesh.n : 1;
  out << "# s=" << format_g17(s) << " nx=" << mesh.n << " ny=" << ny
      << " m=" << mesh.m << "\n";
  for (long j = 0; j < ny; ++j) {
    for (long i = 0; i < mesh.n; ++i) {
      if (i > 0) out << ',';
      out << format_g17(u[mesh.idx(i, j)]);
    }
    out << '\n';
  }
}

FieldDump read_field_dump(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  FieldDump dump;
  std::string header;
  std::getline(in, header);
  if (header.rfind("# ", 0) != 0) throw ConfigError("bad field dump header in " + path);
  std::istringstream hs(header.substr(2));
  std::string item;
  while (hs >> item) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) continue;
    const std::string key = item.substr(0, eq);
    const std::string val = item.substr(eq + 1);
    if (key == "s") dump.s = std::stod(val);
    else if (key == "nx") dump.nx = std::stol(val);
    else if (key == "ny") dump.ny = std::stol(val);
    else if (key == "m") dump.m = std::stoi(val);
  }
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) dump.u.push_back(std::stod(cell));
  }
  if (dump.u.size() != static_cast<std::size_t>(dump.nx * dump.ny))
    throw ConfigError("field dump size mismatch in " + path);
  return dump;
}

int cmd_run(const std::string& config_path) {
  return guarded([&] {
    const RunConfig cfg = load_config_file(config_path);
    const BaseMesh mesh = build_mesh(cfg);
    return run_driver(cfg, build_initial_state(cfg, mesh), 0.0, 0, false);
  });
}

int cmd_restart(const std::string& checkpoint_path) {
  return guarded([&] {
    const Checkpoint cp = read_checkpoint(checkpoint_path);
    const RunConfig cfg = parse_config(cp.config_text);
    if (cp.m != cfg.mesh_m || cp.topology != cfg.topology || cp.n != cfg.n ||
        cp.L != cfg.L || cp.metric != cfg.metric)
      throw CorruptCheckpointError(
          "checkpoint descriptor does not match its embedded configuration");
    const BaseMesh mesh = build_mesh(cfg);
    if (cp.u.size() != mesh.nodes)
      throw CorruptCheckpointError("checkpoint state size does not match the mesh");
    return run_driver(cfg, cp.u, cp.s, static_cast<long>(cp.steps), true);
  });
}

int cmd_check_identities(const std::string& config_path,
                         const std::vector<long>& ladder) {
  return guarded([&] {
    const RunConfig cfg = load_config_file(config_path);
    std::vector<std::string> selected =
        cfg.identities.empty() ? all_identities() : cfg.identities;
    for (const auto& name : selected) {
      bool known = false;
      for (const auto& k : all_identities()) known = known || k == name;
      if (!known) throw ConfigError("unknown identity '" + name + "'");
    }
    if (ladder.empty()) throw ConfigError("ladder must name at least one grid size");
    bool needs_fit = false;
    for (const auto& name : selected) needs_fit = needs_fit || is_order_identity(name);
    if (needs_fit && ladder.size() < 2)
      throw ConfigError("order fits need at least two ladder levels");

    std::filesystem::create_directories(cfg.out_dir);
    std::ofstream csv(cfg.out_dir + "/identities.csv", std::ios::trunc);
    csv << "identity,n,h,sup_residual\n";

    std::vector<std::vector<IdentityLevel>> table(selected.size());
    for (const long n : ladder) {
      const BaseMesh mesh = make_mesh(cfg.mesh_m, cfg.topology, n, cfg.L, cfg.metric,
                                      cfg.phi_amplitude);
      const ScalarField u = build_initial_state(cfg, mesh);
      const ScalarField Hcal = build_prescribed(cfg, mesh);
      for (std::size_t k = 0; k < selected.size(); ++k) {
        const std::string& name = selected[k];
        double sup = 0.0;
        if (name == "laplacian") sup = residual_laplacian_identity(mesh, cfg.warp, u);
        else if (name == "laplacian-assembly")
          sup = residual_laplacian_assembly(mesh, cfg.warp, u);
        else if (name == "h-cross") sup = residual_h_cross(mesh, cfg.warp, u);
        else if (name == "h-gradu") sup = residual_h_gradu(mesh, cfg.warp, u);
        else if (name == "covector") sup = residual_gradient_covector(mesh, cfg.warp, u);
        else if (name == "volume") sup = residual_volume_form(mesh, cfg.warp, u);
        else if (name == "metric-norms") sup = residual_metric_norms(mesh, cfg.warp, u);
        else if (name == "rhs") sup = residual_rhs_equivalence(mesh, cfg.warp, u, Hcal);
        else sup = residual_ricci_modes(mesh, cfg.warp, u, cfg.ricci_sigma);
        table[k].push_back({n, mesh.h, sup});
        csv << name << ',' << n << ',' << format_g17(mesh.h) << ','
            << format_g17(sup) << '\n';
      }
    }

    bool all_pass = true;
    for (std::size_t k = 0; k < selected.size(); ++k) {
      const std::string& name = selected[k];
      std::vector<double> hs, sups;
      for (const auto& lev : table[k]) {
        hs.push_back(lev.h);
        sups.push_back(lev.sup);
      }
      bool pass = false;
      std::string verdict;
      if (is_order_identity(name)) {
        const OrderFit fit = fit_order(hs, sups);
        pass = fit.exact || fit.order >= 1.8;
        verdict = fit.exact ? "exact(<=1e-12)" : "order=" + format_g17(fit.order);
      } else if (name == "ricci") {
        double worst = 0.0;
        for (double s : sups) worst = std::max(worst, s);
        pass = worst <= 1e-10;
        verdict = "sup=" + format_g17(worst) + " sigma=" + std::to_string(cfg.ricci_sigma);
      } else {
        double worst = 0.0;
        for (double s : sups) worst = std::max(worst, s);
        pass = worst <= 1e-12;
        verdict = "sup=" + format_g17(worst);
      }
      all_pass = all_pass && pass;
      std::cout << "identity=" << name << " " << verdict << " pass=" << (pass ? 1 : 0)
                << "\n";
    }
    return all_pass ? 0 : 5;
  });
}

int cmd_check_geometry(const std::string& config_path) {
  return guarded([&] {
    const RunConfig cfg = load_config_file(config_path);
    const BaseMesh mesh = build_mesh(cfg);
    const ScalarField u = build_initial_state(cfg, mesh);
    const ScalarField Hcal = build_prescribed(cfg, mesh);
    const GeometrySnapshot snap = build_snapshot(mesh, cfg.warp, u, cfg.eps_sl);

    bool all_pass = true;
    auto report = [&](const std::string& name, double worst, bool pass) {
      all_pass = all_pass && pass;
      std::cout << "check=" << name << " worst=" << format_g17(worst)
                << " pass=" << (pass ? 1 : 0) << "\n";
    };

    double worst_v = 0.0, worst_inv = 0.0;
    for (std::size_t p = 0; p < mesh.nodes; ++p) {
      worst_v = std::max(worst_v, 1.0 - snap.v[p]);
      for (int i = 0; i < mesh.m; ++i) {
        for (int j = 0; j < mesh.m; ++j) {
          double s = 0.0;
          for (int k = 0; k < mesh.m; ++k)
            s += snap.g[p].at(i, k) * snap.g_inv[p].at(k, j);
          worst_inv = std::max(worst_inv, std::abs(s - (i == j ? 1.0 : 0.0)));
        }
      }
    }
    report("tilt-lower-bound", worst_v, worst_v <= 1e-12);
    report("metric-inverse", worst_inv, worst_inv <= 1e-9);

    double worst_vol = 0.0;
    const ScalarField det_route = volume_density_det_route(mesh, snap);
    for (std::size_t p = 0; p < mesh.nodes; ++p)
      worst_vol = std::max(worst_vol, std::abs(snap.vol_ratio[p] - det_route[p]));
    report("volume-density", worst_vol, worst_vol <= 1e-12);

    for (const PropertyResult& r : property_suite(mesh, cfg.warp, snap, Hcal))
      report(r.name, r.worst, r.pass);

    if (cfg.timelike != TimelikeMode::off) {
      double lo = u[0], hi = u[0];
      for (double x : u) {
        lo = std::min(lo, x);
        hi = std::max(hi, x);
      }
      const TimelikeReport rep = check_timelike_convergence(cfg.warp, mesh, lo - 1.0,
                                                            hi + 1.0, 512, cfg.timelike);
      report("timelike-convergence", -rep.min_value, rep.pass);
    }
    return all_pass ? 0 : 5;
  });
}

int cmd_report(const std::string& dir) {
  return guarded([&] {
    const std::string path = dir + "/series.csv";
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path);
    std::string line;
    std::getline(in, line);  // header
    std::vector<double> s, sup;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      std::istringstream ls(line);
      std::string cell;
      std::vector<double> cols;
      while (std::getline(ls, cell, ',')) cols.push_back(std::stod(cell));
      if (cols.size() < 8) throw ConfigError("malformed series row in " + path);
      s.push_back(cols[0]);
      sup.push_back(cols[4]);
    }
    if (s.size() < 4) throw ConfigError("series too short for a decay fit");

    std::ostringstream rep;
    rep << "rows=" << s.size() << "\n";
    rep << "s_end=" << format_g17(s.back()) << "\n";
    rep << "final_sup_H_err=" << format_g17(sup.back()) << "\n";

    double peak = 0.0;
    for (double x : sup) peak = std::max(peak, x);
    if (peak <= 1e-13) {
      rep << "decay=converged at s=0 (residual at rounding level)\n";
      rep << "decay_slope=0\ndecay_r2=1\n";
    } else {
      std::vector<double> xs, ys;
      for (std::size_t i = s.size() / 2; i < s.size(); ++i) {
        xs.push_back(s[i]);
        ys.push_back(std::log(std::max(sup[i], 1e-300)));
      }
      const LinFit fit = linear_fit(xs, ys);
      rep << "decay_slope=" << format_g17(fit.slope) << "\n";
      rep << "decay_r2=" << format_g17(fit.r2) << "\n";
    }
    std::cout << rep.str();
    std::ofstream out(dir + "/report.txt", std::ios::trunc);
    out << rep.str();
    return 0;
  });
}

}  // namespace grw
