#include "grw/graph.hpp"

#include <cmath>
#include <string>

#include "grw/errors.hpp"
#include "grw/kernels.hpp"
#include "grw/parallel.hpp"

namespace grw {

GeometrySnapshot build_snapshot(const BaseMesh& mesh, const WarpingFunction& w,
                                const ScalarField& u, double eps_sl) {
  if (u.size() != mesh.nodes) throw ConfigError("state has wrong node count");

  // diagnose blow-up before any stencil can smear a NaN into a neighbor
  for (std::size_t p = 0; p < mesh.nodes; ++p)
    if (!std::isfinite(u[p]))
      throw BlowupError("non-finite state at node " + std::to_string(p));

  GeometrySnapshot s;
  s.m = mesh.m;
  s.nodes = mesh.nodes;
  s.eps_sl = eps_sl;

  s.du = tilde_gradient(mesh, u);
  s.hess_cov = covariant_hessian(mesh, u);

  const int m = mesh.m;
  const std::size_t nodes = mesh.nodes;
  s.f.resize(nodes);
  s.fp.resize(nodes);
  s.fpp.resize(nodes);
  s.grad2.resize(nodes);
  s.radicand.resize(nodes);
  s.v.resize(nodes);

  for (std::size_t p = 0; p < nodes; ++p) {
    const WarpEval e = warp_eval(w, u[p]);
    s.f[p] = e.f;
    s.fp[p] = e.fp;
    s.fpp[p] = e.fpp;
    const double g2 = quad_form(mesh.gt_inv[p], s.du[p], s.du[p], m);
    const double rad = e.f * e.f - g2;
    if (!(rad > eps_sl * e.f * e.f))
      throw NotSpacelikeError("graph not space-like at node " + std::to_string(p) +
                              ": |grad u|^2 = " + std::to_string(g2) +
                              " against f^2 = " + std::to_string(e.f * e.f));
    s.grad2[p] = g2;
    s.radicand[p] = rad;
  }

  kernels().gradient_function(s.f.data(), s.grad2.data(), s.v.data(), nodes);

  s.g.resize(nodes);
  s.g_inv.resize(nodes);
  s.b.resize(nodes);
  s.grad_u_up.resize(nodes);
  s.grad_u_g2.resize(nodes);
  s.h.resize(nodes);
  s.H.resize(nodes);
  s.h_norm2.resize(nodes);
  s.vol_ratio.resize(nodes);
  s.lap_u.resize(nodes);
  s.Wmat.resize(nodes);

  parallel_for(nodes, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t p = lo; p < hi; ++p) {
      const double f = s.f[p], fp = s.fp[p];
      const double f2 = f * f;
      const double D = s.radicand[p];
      const double v = s.v[p];
      const SymMat2& gt = mesh.gt[p];
      const SymMat2& gt_inv = mesh.gt_inv[p];
      const Vec2& du = s.du[p];

      const Vec2 gtu = mat_vec(gt_inv, du, m);  // (gt du)^i

      SymMat2 g, ginv, W;
      for (int i = 0; i < m; ++i)
        for (int j = i; j < m; ++j) {
          g.set(i, j, -du[i] * du[j] + f2 * gt.at(i, j));
          const double wij = gt_inv.at(i, j) + gtu[i] * gtu[j] / D;
          W.set(i, j, wij);
          ginv.set(i, j, wij / f2);
        }
      s.g[p] = g;
      s.g_inv[p] = ginv;
      s.Wmat[p] = W;

      Vec2 b, gup;
      for (int i = 0; i < m; ++i) {
        b[i] = gtu[i] / f2;
        gup[i] = gtu[i] / D;
      }
      s.b[p] = b;
      s.grad_u_up[p] = gup;
      s.grad_u_g2[p] = s.grad2[p] / D;

      const double two_fp_over_f = 2.0 * fp / f;
      const double ffp = f * fp;
      SymMat2 h;
      for (int i = 0; i < m; ++i)
        for (int j = i; j < m; ++j)
          h.set(i, j, -v * (s.hess_cov[p].at(i, j) - two_fp_over_f * du[i] * du[j] +
                            ffp * gt.at(i, j)));
      s.h[p] = h;

      double H = 0.0, hn2 = 0.0, lap = 0.0;
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
          H += ginv.at(i, j) * h.at(i, j);
          lap -= W.at(i, j) * s.hess_cov[p].at(i, j);
          for (int k = 0; k < m; ++k)
            for (int l = 0; l < m; ++l)
              hn2 += ginv.at(i, k) * ginv.at(j, l) * h.at(i, j) * h.at(k, l);
        }
      s.H[p] = H;
      s.h_norm2[p] = hn2;
      s.lap_u[p] = lap;
      s.vol_ratio[p] = (m == 2 ? f2 : f) / v;
    }
  });

  return s;
}

ScalarField apply_induced_laplacian(const BaseMesh& mesh, const GeometrySnapshot& snap,
                                    const ScalarField& field) {
  const int m = mesh.m;
  const VectorField dh = tilde_gradient(mesh, field);
  const MatrixField hh = covariant_hessian(mesh, field);

  ScalarField out(mesh.nodes);
  parallel_for(mesh.nodes, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t p = lo; p < hi; ++p) {
      const double f = snap.f[p], fp = snap.fp[p];
      const double f2 = f * f;
      const double D = snap.radicand[p];

      double lap_th = 0.0;
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) lap_th -= snap.Wmat[p].at(i, j) * hh[p].at(i, j);

      const double gh = quad_form(mesh.gt_inv[p], snap.du[p], dh[p], m);
      out[p] = lap_th / f2 +
               gh * (snap.lap_u[p] / (f2 * D) -
                     static_cast<double>(m - 1) * fp / (f * D) + f * fp / (D * D));
    }
  });
  return out;
}

double stability_lambda_max(const GeometrySnapshot& snap) {
  double lam = 0.0;
  for (std::size_t p = 0; p < snap.nodes; ++p) {
    SymMat2 A;
    for (int i = 0; i < snap.m; ++i)
      for (int j = i; j < snap.m; ++j)
        A.set(i, j, snap.Wmat[p].at(i, j) / snap.radicand[p]);
    lam = std::max(lam, sym_eig_max(A, snap.m));
  }
  return lam;
}

ScalarField ricci_normal(const BaseMesh& mesh, const GeometrySnapshot& snap,
                         RicciMode mode, int sigma) {
  const int m = mesh.m;
  ScalarField out(snap.nodes);
  for (std::size_t p = 0; p < snap.nodes; ++p) {
    const double f = snap.f[p], fp = snap.fp[p], fpp = snap.fpp[p];
    const double v2 = snap.v[p] * snap.v[p];
    if (mode == RicciMode::direct_contraction) {
      const double rtt = -static_cast<double>(m) * fpp / f;
      const double coef = f * fpp + static_cast<double>(m - 1) * fp * fp;
      SymMat2 rij;
      for (int i = 0; i < m; ++i)
        for (int j = i; j < m; ++j)
          rij.set(i, j, mesh.ric[p].at(i, j) + coef * mesh.gt[p].at(i, j));
      // mu = v (d_t + b); the mixed Ricci components of the product vanish.
      out[p] = v2 * (rtt + quad_form(rij, snap.b[p], snap.b[p], m));
    } else {
      const Vec2 gtu = mat_vec(mesh.gt_inv[p], snap.du[p], m);
      const double ric_gg = quad_form(mesh.ric[p], gtu, gtu, m);
      const double f2 = f * f;
      out[p] = static_cast<double>(sigma) * static_cast<double>(m) * v2 * fpp / f +
               v2 / (f2 * f2) * ric_gg + (fpp / f) * snap.grad_u_g2[p] +
               static_cast<double>(m - 1) * (fp / f) * (fp / f) * snap.grad_u_g2[p];
    }
  }
  return out;
}

ScalarField volume_density_det_route(const BaseMesh& mesh, const GeometrySnapshot& snap) {
  ScalarField out(snap.nodes);
  for (std::size_t p = 0; p < snap.nodes; ++p)
    out[p] = std::sqrt(sym_det(snap.g[p], snap.m) / sym_det(mesh.gt[p], snap.m));
  return out;
}

MetricNorms metric_equivalence_closed(const GeometrySnapshot& snap, std::size_t p) {
  MetricNorms r;
  const double f2 = snap.f[p] * snap.f[p];
  const double v2 = snap.v[p] * snap.v[p];
  const double f4 = f2 * f2;
  const double md = static_cast<double>(snap.m);
  r.g_in_gt = (f2 / v2) * (f2 / v2) + f4 * (md - 1.0);
  r.gt_in_g = (md - 1.0 + v2 * v2) / f4;
  return r;
}

double tensor_pairing_max_violation(const MatrixField& A, const VectorField& Y,
                                    const VectorField& Z, const MatrixField& gx,
                                    const MatrixField& gx_inv, int m) {
  double worst = -1e300;
  for (std::size_t p = 0; p < A.size(); ++p) {
    const double ayz = quad_form(A[p], Y[p], Z[p], m);
    const double na = std::sqrt(tensor_norm2(A[p], gx_inv[p], m));
    const double ny = std::sqrt(quad_form(gx[p], Y[p], Y[p], m));
    const double nz = std::sqrt(quad_form(gx[p], Z[p], Z[p], m));
    worst = std::max(worst, std::fabs(ayz) - na * ny * nz);
  }
  return worst;
}

}  // namespace grw
