#include "grw/identities.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "grw/flow.hpp"

namespace grw {

LinFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
  LinFit fit;
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n) return fit;
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / static_cast<double>(n);
  const double my = sy / static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) return fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  if (syy == 0.0) {
    fit.r2 = 1.0;
  } else {
    double ss_res = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double e = y[i] - (fit.intercept + fit.slope * x[i]);
      ss_res += e * e;
    }
    fit.r2 = 1.0 - ss_res / syy;
  }
  return fit;
}

OrderFit fit_order(const std::vector<double>& hs, const std::vector<double>& sups,
                   double exact_tol) {
  OrderFit out;
  for (double s : sups) out.max_sup = std::max(out.max_sup, s);
  if (out.max_sup <= exact_tol) {
    out.exact = true;
    out.order = std::numeric_limits<double>::infinity();
    return out;
  }
  std::vector<double> lx(hs.size()), ly(sups.size());
  for (std::size_t i = 0; i < hs.size(); ++i) {
    lx[i] = std::log(hs[i]);
    ly[i] = std::log(std::max(sups[i], 1e-300));
  }
  out.order = linear_fit(lx, ly).slope;
  return out;
}

std::vector<std::array<SymMat2, 2>> induced_christoffels_fd(const BaseMesh& mesh,
                                                            const GeometrySnapshot& snap) {
  const int m = mesh.m;
  // Partial of every metric component along every axis.
  std::array<std::array<ScalarField, 3>, 2> dg;  // dg[axis][component]
  const int comps = m == 1 ? 1 : 3;
  auto comp_index = [](int i, int j) { return i == 0 && j == 0 ? 0 : (i == 1 && j == 1 ? 2 : 1); };
  for (int c = 0; c < comps; ++c) {
    ScalarField comp(mesh.nodes);
    const int i = c == 2 ? 1 : 0;
    const int j = c == 0 ? 0 : 1;
    for (std::size_t p = 0; p < mesh.nodes; ++p) comp[p] = snap.g[p].at(i, j);
    for (int d = 0; d < m; ++d) dg[d][c] = axis_derivative(mesh, comp, d);
  }
  std::vector<std::array<SymMat2, 2>> gamma(mesh.nodes);
  for (std::size_t p = 0; p < mesh.nodes; ++p) {
    for (int k = 0; k < m; ++k) {
      for (int i = 0; i < m; ++i) {
        for (int j = i; j < m; ++j) {
          double s = 0.0;
          for (int l = 0; l < m; ++l) {
            const double dgi = dg[i][comp_index(j, l)][p];
            const double dgj = dg[j][comp_index(i, l)][p];
            const double dgl = dg[l][comp_index(i, j)][p];
            s += snap.g_inv[p].at(k, l) * (dgi + dgj - dgl);
          }
          gamma[p][k].set(i, j, 0.5 * s);
        }
      }
    }
  }
  return gamma;
}

namespace {

// Laplacian closed form vH + (f'/f)(m + v^2 - 1); v^2 - 1 equals the induced
// gradient square, so every factor comes out of the snapshot.
double laplacian_closed(const GeometrySnapshot& snap, std::size_t p) {
  return snap.v[p] * snap.H[p] +
         snap.fp[p] / snap.f[p] * (static_cast<double>(snap.m) + snap.grad_u_g2[p]);
}

}  // namespace

double residual_laplacian_identity(const BaseMesh& mesh, const WarpingFunction& warp,
                                   const ScalarField& u) {
  const GeometrySnapshot snap = build_snapshot(mesh, warp, u);
  const VectorField du = tilde_gradient(mesh, u);
  const MatrixField chess = coordinate_hessian(mesh, u);
  const auto gamma = induced_christoffels_fd(mesh, snap);
  double sup = 0.0;
  for (std::size_t p = 0; p < mesh.nodes; ++p) {
    double lap = 0.0;
    for (int i = 0; i < mesh.m; ++i) {
      for (int j = 0; j < mesh.m; ++j) {
        double cov = chess[p].at(i, j);
        for (int k = 0; k < mesh.m; ++k) cov -= gamma[p][k].at(i, j) * du[p][k];
        lap -= snap.g_inv[p].at(i, j) * cov;
      }
    }
    sup = std::max(sup, std::abs(lap - laplacian_closed(snap, p)));
  }
  return sup;
}

double residual_laplacian_assembly(const BaseMesh& mesh, const WarpingFunction& warp,
                                   const ScalarField& u) {
  const GeometrySnapshot snap = build_snapshot(mesh, warp, u);
  double sup = 0.0;
  for (std::size_t p = 0; p < mesh.nodes; ++p) {
    const double f = snap.f[p], fp = snap.fp[p], D = snap.radicand[p];
    const double lap =
        snap.lap_u[p] / D +
        snap.grad2[p] / D * (f * fp / D - static_cast<double>(mesh.m - 1) * fp / f);
    sup = std::max(sup, std::abs(lap - laplacian_closed(snap, p)));
  }
  return sup;
}

double residual_h_cross(const BaseMesh& mesh, const WarpingFunction& warp,
                        const ScalarField& u) {
  const GeometrySnapshot snap = build_snapshot(mesh, warp, u);
  const VectorField du = tilde_gradient(mesh, u);
  const MatrixField chess = coordinate_hessian(mesh, u);
  const auto gamma = induced_christoffels_fd(mesh, snap);
  double sup = 0.0;
  for (std::size_t p = 0; p < mesh.nodes; ++p) {
    for (int i = 0; i < mesh.m; ++i) {
      for (int j = i; j < mesh.m; ++j) {
        double cov = chess[p].at(i, j);
        for (int k = 0; k < mesh.m; ++k) cov -= gamma[p][k].at(i, j) * du[p][k];
        const double r = snap.v[p] * snap.h[p].at(i, j) + cov +
                         snap.f[p] * snap.fp[p] * mesh.gt[p].at(i, j);
        sup = std::max(sup, std::abs(r));
      }
    }
  }
  return sup;
}

double residual_h_gradu(const BaseMesh& mesh, const WarpingFunction& warp,
                        const ScalarField& u) {
  const GeometrySnapshot snap = build_snapshot(mesh, warp, u);
  const VectorField dv = tilde_gradient(mesh, snap.v);
  const VectorField du = tilde_gradient(mesh, u);
  double sup = 0.0;
  for (std::size_t p = 0; p < mesh.nodes; ++p) {
    const double lhs = quad_form(snap.h[p], snap.grad_u_up[p], snap.grad_u_up[p], mesh.m);
    const double pairing = quad_form(snap.g_inv[p], du[p], dv[p], mesh.m);
    const double r = lhs + pairing +
                     snap.fp[p] / snap.f[p] * snap.grad_u_g2[p] * snap.v[p];
    sup = std::max(sup, std::abs(r));
  }
  return sup;
}

double residual_gradient_covector(const BaseMesh& mesh, const WarpingFunction& warp,
                                  const ScalarField& u) {
  const GeometrySnapshot snap = build_snapshot(mesh, warp, u);
  const VectorField dv = tilde_gradient(mesh, snap.v);
  const VectorField du = tilde_gradient(mesh, u);
  double sup = 0.0;
  for (std::size_t p = 0; p < mesh.nodes; ++p) {
    for (int i = 0; i < mesh.m; ++i) {
      double hu = 0.0;
      for (int k = 0; k < mesh.m; ++k) hu += snap.grad_u_up[p][k] * snap.h[p].at(k, i);
      const double r = dv[p][i] + hu + snap.fp[p] / snap.f[p] * snap.v[p] * du[p][i];
      sup = std::max(sup, std::abs(r));
    }
  }
  return sup;
}

double residual_volume_form(const BaseMesh& mesh, const WarpingFunction& warp,
                            const ScalarField& u) {
  const GeometrySnapshot snap = build_snapshot(mesh, warp, u);
  const ScalarField det_route = volume_density_det_route(mesh, snap);
  double sup = 0.0;
  for (std::size_t p = 0; p < mesh.nodes; ++p)
    sup = std::max(sup, std::abs(snap.vol_ratio[p] - det_route[p]));
  return sup;
}

double residual_metric_norms(const BaseMesh& mesh, const WarpingFunction& warp,
                             const ScalarField& u) {
  const GeometrySnapshot snap = build_snapshot(mesh, warp, u);
  double sup = 0.0;
  for (std::size_t p = 0; p < mesh.nodes; ++p) {
    const MetricNorms closed = metric_equivalence_closed(snap, p);
    const double direct_g = tensor_norm2(snap.g[p], mesh.gt_inv[p], mesh.m);
    const double direct_gt = tensor_norm2(mesh.gt[p], snap.g_inv[p], mesh.m);
    sup = std::max(sup, std::abs(direct_g - closed.g_in_gt));
    sup = std::max(sup, std::abs(direct_gt - closed.gt_in_g));
  }
  return sup;
}

double residual_rhs_equivalence(const BaseMesh& mesh, const WarpingFunction& warp,
                                const ScalarField& u, const ScalarField& Hcal) {
  const GeometrySnapshot snap = build_snapshot(mesh, warp, u);
  const ScalarField a = rhs_graphical(mesh, snap, Hcal);
  const ScalarField b = rhs_compact(mesh, snap, Hcal);
  double sup = 0.0;
  for (std::size_t p = 0; p < mesh.nodes; ++p)
    sup = std::max(sup, std::abs(a[p] - b[p]));
  return sup;
}

double residual_ricci_modes(const BaseMesh& mesh, const WarpingFunction& warp,
                            const ScalarField& u, double sigma) {
  const GeometrySnapshot snap = build_snapshot(mesh, warp, u);
  const ScalarField direct = ricci_normal(mesh, snap, RicciMode::direct_contraction);
  const ScalarField closed =
      ricci_normal(mesh, snap, RicciMode::closed_form, static_cast<int>(sigma));
  double sup = 0.0;
  for (std::size_t p = 0; p < mesh.nodes; ++p)
    sup = std::max(sup, std::abs(direct[p] - closed[p]));
  return sup;
}

FlowTriple make_flow_triple(const BaseMesh& mesh, const WarpingFunction& warp,
                            ScalarField u0, const ScalarField& Hcal, double ds,
                            int steps_to_center, double eps_sl) {
  FlowTriple tr;
  tr.ds = ds;
  tr.s_center = ds * static_cast<double>(steps_to_center);
  if (steps_to_center < 1) steps_to_center = 1;
  if (steps_to_center == 1) tr.u_minus = u0;
  for (int k = 1; k <= steps_to_center + 1; ++k) {
    u0 = step_once(mesh, warp, Hcal, u0, ds, Integrator::rk4, eps_sl);
    if (k == steps_to_center - 1) tr.u_minus = u0;
    if (k == steps_to_center) tr.u_center = u0;
    if (k == steps_to_center + 1) tr.u_plus = u0;
  }
  return tr;
}

EvolutionResiduals evolution_residuals(const BaseMesh& mesh, const WarpingFunction& warp,
                                       const FlowTriple& triple, const ScalarField& Hcal) {
  const GeometrySnapshot sm = build_snapshot(mesh, warp, triple.u_minus);
  const GeometrySnapshot sc = build_snapshot(mesh, warp, triple.u_center);
  const GeometrySnapshot sp = build_snapshot(mesh, warp, triple.u_plus);
  const double inv2ds = 1.0 / (2.0 * triple.ds);
  const int m = mesh.m;

  // Vertical node motion = normal speed -X v^2 plus drift along xi = X v grad u.
  ScalarField X(mesh.nodes), X2(mesh.nodes), Xv2(mesh.nodes);
  for (std::size_t p = 0; p < mesh.nodes; ++p) {
    X[p] = sc.H[p] - Hcal[p];
    X2[p] = X[p] * X[p];
    Xv2[p] = X[p] * sc.v[p] * sc.v[p];
  }
  const ScalarField lap_v = apply_induced_laplacian(mesh, sc, sc.v);
  const ScalarField lap_X = apply_induced_laplacian(mesh, sc, X);
  const ScalarField lap_X2 = apply_induced_laplacian(mesh, sc, X2);
  const ScalarField lap_Xv2 = apply_induced_laplacian(mesh, sc, Xv2);
  const ScalarField ric = ricci_normal(mesh, sc, RicciMode::direct_contraction);
  const VectorField du = tilde_gradient(mesh, triple.u_center);
  const VectorField dv = tilde_gradient(mesh, sc.v);
  const VectorField dX = tilde_gradient(mesh, X);
  const VectorField dH = tilde_gradient(mesh, sc.H);

  // Drift components, their coordinate partials, and partials of the induced
  // metric; the Lie derivative term uses raw partials only.
  std::array<ScalarField, 2> xi;
  std::array<std::array<ScalarField, 2>, 2> dxi;  // dxi[k][i] = d_k xi^i
  for (int i = 0; i < m; ++i) {
    xi[i].resize(mesh.nodes);
    for (std::size_t p = 0; p < mesh.nodes; ++p)
      xi[i][p] = X[p] * sc.v[p] * sc.grad_u_up[p][i];
  }
  for (int k = 0; k < m; ++k)
    for (int i = 0; i < m; ++i) dxi[k][i] = axis_derivative(mesh, xi[i], k);

  const int ncomp = m == 2 ? 3 : 1;
  const auto comp = [](int i, int j) { return i + j; };  // (0,0) (0,1) (1,1)
  std::array<ScalarField, 3> gcomp;
  std::array<std::array<ScalarField, 3>, 2> dg;  // dg[k][comp]
  for (int c = 0; c < ncomp; ++c) gcomp[c].resize(mesh.nodes);
  for (std::size_t p = 0; p < mesh.nodes; ++p) {
    gcomp[0][p] = sc.g[p].at(0, 0);
    if (m == 2) {
      gcomp[1][p] = sc.g[p].at(0, 1);
      gcomp[2][p] = sc.g[p].at(1, 1);
    }
  }
  for (int k = 0; k < m; ++k)
    for (int c = 0; c < ncomp; ++c) dg[k][c] = axis_derivative(mesh, gcomp[c], k);

  EvolutionResiduals out;
  for (std::size_t p = 0; p < mesh.nodes; ++p) {
    if (mesh.is_boundary(p)) continue;
    const double f = sc.f[p], fp = sc.fp[p], fpp = sc.fpp[p];
    const double v = sc.v[p];
    const double x = X[p];
    const double gu2 = sc.grad_u_g2[p];

    const double ds_u = (triple.u_plus[p] - triple.u_minus[p]) * inv2ds;
    out.u_ds = std::max(out.u_ds, std::abs(ds_u + x * v));

    const double VX = -quad_form(sc.g_inv[p], du[p], dX[p], m);
    const double pair_uv = quad_form(sc.g_inv[p], du[p], dv[p], m);
    const double pair_uH = quad_form(sc.g_inv[p], du[p], dH[p], m);

    const double ds_v = (sp.v[p] - sm.v[p]) * inv2ds;
    const double transport =
        v * v * VX + x * (fp / f) * v * v * (v * v - 1.0) - x * v * pair_uv;
    out.v_transport = std::max(out.v_transport, std::abs(ds_v - transport));

    const double lapv_exp =
        pair_uH - (fp / f) * sc.H[p] * (1.0 + v * v) + 2.0 * (fp / f) * pair_uv -
        sc.h_norm2[p] * v - ric[p] * v - static_cast<double>(m) * (fpp / f) * v +
        (fpp / f) * gu2 * v - (fp / f) * (fp / f) * gu2 * v -
        static_cast<double>(m) * (fp / f) * (fp / f) * v;
    out.v_heat = std::max(out.v_heat, std::abs(ds_v + lap_v[p] - transport - lapv_exp));

    for (int i = 0; i < m; ++i) {
      for (int j = i; j < m; ++j) {
        double lie = 0.0;
        for (int k = 0; k < m; ++k)
          lie += xi[k][p] * dg[k][comp(i, j)][p] + sc.g[p].at(k, j) * dxi[i][k][p] +
                 sc.g[p].at(i, k) * dxi[j][k][p];
        const double ds_g = (sp.g[p].at(i, j) - sm.g[p].at(i, j)) * inv2ds;
        out.metric = std::max(out.metric,
                              std::abs(ds_g - 2.0 * x * v * v * sc.h[p].at(i, j) - lie));

        const double ds_gi = (sp.g_inv[p].at(i, j) - sm.g_inv[p].at(i, j)) * inv2ds;
        double ghg = 0.0, glieg = 0.0;
        for (int k = 0; k < m; ++k)
          for (int l = 0; l < m; ++l) {
            ghg += sc.g_inv[p].at(i, k) * sc.h[p].at(k, l) * sc.g_inv[p].at(l, j);
            double liekl = 0.0;
            for (int q = 0; q < m; ++q)
              liekl += xi[q][p] * dg[q][comp(k, l)][p] + sc.g[p].at(q, l) * dxi[k][q][p] +
                       sc.g[p].at(k, q) * dxi[l][q][p];
            glieg += sc.g_inv[p].at(i, k) * liekl * sc.g_inv[p].at(l, j);
          }
        out.inverse =
            std::max(out.inverse, std::abs(ds_gi + 2.0 * x * v * v * ghg + glieg));
      }
    }

    const double decay = sc.h_norm2[p] + ric[p];
    const double ds_X = (sp.H[p] - sm.H[p]) * inv2ds;
    const double mc_rhs = -lap_Xv2[p] - x * v * v * decay + x * v * pair_uH;
    out.mc = std::max(out.mc, std::abs(ds_X - mc_rhs));

    const double xp = sp.H[p] - Hcal[p], xm = sm.H[p] - Hcal[p];
    const double ds_X2 = (xp * xp - xm * xm) * inv2ds;
    const double grad_X2 = quad_form(sc.g_inv[p], dX[p], dX[p], m);
    out.mc_squared = std::max(
        out.mc_squared,
        std::abs(ds_X2 + lap_X2[p] - 2.0 * x * (mc_rhs + lap_X[p]) + 2.0 * grad_X2));
    const double book = (ds_X2 + lap_X2[p]) - (2.0 * x * (ds_X + lap_X[p]) - 2.0 * grad_X2);
    out.mc_bookkeeping = std::max(out.mc_bookkeeping, std::abs(book));
  }
  return out;
}

std::vector<PropertyResult> property_suite(const BaseMesh& mesh, const WarpingFunction& warp,
                                           const GeometrySnapshot& snap,
                                           const ScalarField& Hcal) {
  const WarpBounds wb = warp_bounds(warp);
  const int m = mesh.m;
  double c4 = 0.0, sup_gtinv = 0.0;
  for (std::size_t p = 0; p < mesh.nodes; ++p) {
    c4 = std::max(c4, std::sqrt(tensor_norm2(mesh.ric[p], mesh.gt_inv[p], m)));
    sup_gtinv = std::max(sup_gtinv, sym_eig_max(mesh.gt_inv[p], m));
  }
  const ScalarField ric = ricci_normal(mesh, snap, RicciMode::direct_contraction);
  const VectorField& du = snap.du;
  std::array<ScalarField, 2> dHc;
  for (int dax = 0; dax < m; ++dax) dHc[dax] = axis_derivative(mesh, Hcal, dax);
  double hc1 = 0.0, sup_dh = 0.0;
  for (std::size_t p = 0; p < mesh.nodes; ++p) {
    hc1 = std::max(hc1, std::abs(Hcal[p]));
    double e2 = 0.0;
    for (int dax = 0; dax < m; ++dax) e2 += dHc[dax][p] * dHc[dax][p];
    sup_dh = std::max(sup_dh, std::sqrt(e2));
  }
  hc1 += sup_dh;

  std::vector<PropertyResult> results;
  auto push = [&](const std::string& name, double worst, double constant) {
    results.push_back({name, worst, constant, worst <= 1e-9});
  };

  // (a) pairing of the induced gradients of u and v, with the v-covector
  // taken from its exact expression in h and du so the bound is tested at
  // the advertised constant rather than at stencil accuracy.
  double worst_a = -std::numeric_limits<double>::infinity();
  for (std::size_t p = 0; p < mesh.nodes; ++p) {
    Vec2 dv_id;
    for (int i = 0; i < m; ++i) {
      double hu = 0.0;
      for (int k = 0; k < m; ++k) hu += snap.grad_u_up[p][k] * snap.h[p].at(k, i);
      dv_id[i] = -(hu + snap.fp[p] / snap.f[p] * snap.v[p] * du[p][i]);
    }
    const double lhs = std::abs(quad_form(snap.g_inv[p], du[p], dv_id, m));
    const double rhs = std::sqrt(snap.h_norm2[p]) * snap.grad_u_g2[p] +
                       wb.c2 * snap.grad_u_g2[p] * snap.v[p];
    worst_a = std::max(worst_a, lhs - rhs);
  }
  push("gradient-pairing", worst_a, wb.c2);

  const double cb = static_cast<double>(m) * wb.c3 + c4 / (wb.c1 * wb.c1 * wb.c1 * wb.c1) +
                    wb.c3 + static_cast<double>(m - 1) * wb.c2 * wb.c2;
  double worst_b = -std::numeric_limits<double>::infinity();
  for (std::size_t p = 0; p < mesh.nodes; ++p)
    worst_b = std::max(worst_b, std::abs(ric[p]) - cb * snap.v[p] * snap.v[p]);
  push("ricci-normal-bound", worst_b, cb);

  for (double eps : {0.1, 1.0, 10.0})
    push("structure eps=" + std::to_string(eps).substr(0, 4),
         structure_margin_quadratic(mesh, snap, eps), eps);

  const double cd = 1.0 / wb.c1 * std::max(1.0, sup_gtinv);
  double worst_d = -std::numeric_limits<double>::infinity();
  for (std::size_t p = 0; p < mesh.nodes; ++p) {
    double VH = 0.0;
    for (int i = 0; i < m; ++i) VH -= snap.b[p][i] * dHc[i][p];
    worst_d = std::max(worst_d,
                       std::abs(VH) - cd * std::sqrt(snap.grad_u_g2[p]) * hc1);
  }
  push("prescribed-transport", worst_d, cd);

  double worst_tilt = -std::numeric_limits<double>::infinity();
  double worst_grad = -std::numeric_limits<double>::infinity();
  for (std::size_t p = 0; p < mesh.nodes; ++p) {
    worst_tilt = std::max(worst_tilt, 1.0 - snap.v[p]);
    worst_grad = std::max(worst_grad, snap.grad_u_g2[p] - snap.v[p] * snap.v[p]);
  }
  push("tilt-geq-one", worst_tilt, 1.0);
  push("gradient-below-tilt", worst_grad, 1.0);
  return results;
}

double structure_margin_quadratic(const BaseMesh& mesh, const GeometrySnapshot& snap,
                                  double eps) {
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t p = 0; p < mesh.nodes; ++p) {
    const double lhs = std::abs(
        snap.H[p] + quad_form(snap.h[p], snap.grad_u_up[p], snap.grad_u_up[p], mesh.m));
    const double v = snap.v[p];
    const double rhs = eps * v * snap.h_norm2[p] +
                       static_cast<double>(mesh.m + 2) / eps * v * v * v;
    worst = std::max(worst, lhs - rhs);
  }
  return worst;
}

double structure_margin_linear(const BaseMesh& mesh, const GeometrySnapshot& snap,
                               double eps) {
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t p = 0; p < mesh.nodes; ++p) {
    const double lhs = std::abs(
        snap.H[p] + quad_form(snap.h[p], snap.grad_u_up[p], snap.grad_u_up[p], mesh.m));
    const double v = snap.v[p];
    const double rhs = eps * v * std::sqrt(snap.h_norm2[p]) +
                       static_cast<double>(mesh.m + 2) / eps * v * v * v;
    worst = std::max(worst, lhs - rhs);
  }
  return worst;
}

ScalarField random_spacelike_state(const BaseMesh& mesh, const WarpingFunction& warp,
                                   std::uint64_t seed, double offset,
                                   double target_tilt) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> amp(-1.0, 1.0);
  std::uniform_real_distribution<double> phase(0.0, 6.283185307179586);
  const double two_pi_L = 6.283185307179586 / mesh.L;

  ScalarField w(mesh.nodes, 0.0);
  for (int k = 1; k <= 3; ++k) {
    const double ax = amp(rng) / static_cast<double>(k * k);
    const double px = phase(rng);
    const double ay = mesh.m == 2 ? amp(rng) / static_cast<double>(k * k) : 0.0;
    const double py = mesh.m == 2 ? phase(rng) : 0.0;
    for (std::size_t p = 0; p < mesh.nodes; ++p) {
      const double x = mesh.coord(mesh.axis_index(p, 0));
      double val = ax * std::sin(two_pi_L * k * x + px);
      if (mesh.m == 2) {
        const double y = mesh.coord(mesh.axis_index(p, 1));
        val += ay * std::sin(two_pi_L * k * y + py);
      }
      w[p] += val;
    }
  }
  const VectorField dw = tilde_gradient(mesh, w);
  double G = 0.0;
  for (std::size_t p = 0; p < mesh.nodes; ++p)
    G = std::max(G, std::sqrt(quad_form(mesh.gt_inv[p], dw[p], dw[p], mesh.m)));
  ScalarField u(mesh.nodes, offset);
  if (G == 0.0) return u;

  double alpha = target_tilt * warp_eval(warp, offset).f / G;
  for (int pass = 0; pass < 50; ++pass) {
    double wmin = w[0], wmax = w[0];
    for (double x : w) {
      wmin = std::min(wmin, x);
      wmax = std::max(wmax, x);
    }
    double fmin = std::numeric_limits<double>::infinity();
    for (int k = 0; k <= 64; ++k) {
      const double t = offset + alpha * (wmin + (wmax - wmin) * k / 64.0);
      fmin = std::min(fmin, warp_eval(warp, t).f);
    }
    const double next = target_tilt * fmin / G;
    if (std::abs(next - alpha) <= 1e-12 * std::abs(alpha)) {
      alpha = next;
      break;
    }
    alpha = next;
  }
  for (int guard = 0; guard < 50; ++guard) {
    for (std::size_t p = 0; p < mesh.nodes; ++p) u[p] = offset + alpha * w[p];
    const VectorField du = tilde_gradient(mesh, u);
    double worst = 0.0;
    for (std::size_t p = 0; p < mesh.nodes; ++p) {
      const double g2 = quad_form(mesh.gt_inv[p], du[p], du[p], mesh.m);
      const double f = warp_eval(warp, u[p]).f;
      worst = std::max(worst, std::sqrt(g2) / f);
    }
    if (worst < 0.995) break;
    alpha *= 0.9;
  }
  return u;
}

}  // namespace grw
