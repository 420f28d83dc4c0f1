#include "grw/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "grw/errors.hpp"
#include "grw/kernels.hpp"

namespace grw {
namespace {

void flat_geometry(BaseMesh& mesh) {
  SymMat2 id;
  id.xx = 1.0;
  id.yy = mesh.m == 2 ? 1.0 : 0.0;
  mesh.gt.assign(mesh.nodes, id);
  mesh.gt_inv.assign(mesh.nodes, id);
  mesh.gamma.assign(mesh.nodes, {SymMat2{}, SymMat2{}});
  mesh.ric.assign(mesh.nodes, SymMat2{});
}

}  // namespace

BaseMesh make_mesh(int m, Topology topology, long n, double L, MetricKind metric,
                   double phi_amplitude) {
  if (m != 1 && m != 2) throw ConfigError("mesh dimension must be 1 or 2");
  if (n < 8) throw ConfigError("mesh needs at least 8 nodes per axis");
  if (!(L > 0.0)) throw ConfigError("mesh axis length must be positive");

  BaseMesh mesh;
  mesh.m = m;
  mesh.topology = topology;
  mesh.n = n;
  mesh.L = L;
  mesh.metric = metric;
  mesh.h = topology == Topology::periodic ? L / static_cast<double>(n)
                                          : L / static_cast<double>(n - 1);
  mesh.nodes = static_cast<std::size_t>(n);
  if (m == 2) mesh.nodes *= static_cast<std::size_t>(n);

  if (topology == Topology::rectangle) {
    mesh.x_bdy.resize(mesh.nodes);
    for (std::size_t p = 0; p < mesh.nodes; ++p) {
      double d = L;
      for (int dax = 0; dax < m; ++dax) {
        const double x = mesh.coord(mesh.axis_index(p, dax));
        d = std::min(d, std::min(x, L - x));
      }
      mesh.x_bdy[p] = d;
    }
  }

  if (metric == MetricKind::flat) {
    flat_geometry(mesh);
  } else {
    ScalarField phi(mesh.nodes);
    const double w = 2.0 * std::numbers::pi / L;
    for (std::size_t p = 0; p < mesh.nodes; ++p) {
      const double x = mesh.coord(mesh.axis_index(p, 0));
      double val = phi_amplitude * std::sin(w * x);
      if (m == 2) val *= std::sin(w * mesh.coord(mesh.axis_index(p, 1)));
      phi[p] = val;
    }
    conformal_geometry(mesh, phi);
  }
  return mesh;
}

void conformal_geometry(BaseMesh& mesh, const ScalarField& new_phi) {
  if (new_phi.size() != mesh.nodes)
    throw ConfigError("conformal exponent field has wrong node count");
  mesh.metric = MetricKind::conformal;
  mesh.phi = new_phi;

  const int m = mesh.m;
  const VectorField dphi = tilde_gradient(mesh, mesh.phi);
  const MatrixField hphi = coordinate_hessian(mesh, mesh.phi);

  mesh.gt.assign(mesh.nodes, SymMat2{});
  mesh.gt_inv.assign(mesh.nodes, SymMat2{});
  mesh.gamma.assign(mesh.nodes, {SymMat2{}, SymMat2{}});
  mesh.ric.assign(mesh.nodes, SymMat2{});

  for (std::size_t p = 0; p < mesh.nodes; ++p) {
    const double e2 = std::exp(2.0 * mesh.phi[p]);
    for (int i = 0; i < m; ++i) {
      mesh.gt[p].set(i, i, e2);
      mesh.gt_inv[p].set(i, i, 1.0 / e2);
    }

    // Gamma^k_{ij} = delta^k_i phi_j + delta^k_j phi_i - delta_ij phi^k
    for (int k = 0; k < m; ++k)
      for (int i = 0; i < m; ++i)
        for (int j = i; j < m; ++j) {
          double val = 0.0;
          if (k == i) val += dphi[p][j];
          if (k == j) val += dphi[p][i];
          if (i == j) val -= dphi[p][k];
          mesh.gamma[p][k].set(i, j, val);
        }

    // Conformal change from the flat background:
    // ric_ij = -(m-2)(phi_ij - phi_i phi_j) - delta_ij (lap phi + (m-2)|dphi|^2)
    double lap = 0.0, grad2 = 0.0;
    for (int d = 0; d < m; ++d) {
      lap += hphi[p].at(d, d);
      grad2 += dphi[p][d] * dphi[p][d];
    }
    for (int i = 0; i < m; ++i)
      for (int j = i; j < m; ++j) {
        double val = -(m - 2) * (hphi[p].at(i, j) - dphi[p][i] * dphi[p][j]);
        if (i == j) val -= lap + (m - 2) * grad2;
        mesh.ric[p].set(i, j, val);
      }
  }
}

ScalarField axis_derivative(const BaseMesh& mesh, const ScalarField& u, int d) {
  const long n = mesh.n;
  const double inv2h = 1.0 / (2.0 * mesh.h);
  ScalarField out(mesh.nodes);
  const bool periodic = mesh.topology == Topology::periodic;

  if (d == 0) {
    const long rows = mesh.m == 2 ? n : 1;
    for (long r = 0; r < rows; ++r) {
      const double* src = u.data() + static_cast<std::size_t>(r) * n;
      double* dst = out.data() + static_cast<std::size_t>(r) * n;
      kernels().central_diff1(src, dst, static_cast<std::size_t>(n), inv2h);
      if (periodic) {
        dst[0] = (src[1] - src[n - 1]) * inv2h;
        dst[n - 1] = (src[0] - src[n - 2]) * inv2h;
      } else {
        dst[0] = (-3.0 * src[0] + 4.0 * src[1] - src[2]) * inv2h;
        dst[n - 1] = (3.0 * src[n - 1] - 4.0 * src[n - 2] + src[n - 3]) * inv2h;
      }
    }
    return out;
  }

  // d == 1: neighbours sit a full row apart; sweep row-contiguous.
  const auto row = [&](long j) { return u.data() + static_cast<std::size_t>(j) * n; };
  for (long j = 0; j < n; ++j) {
    double* dst = out.data() + static_cast<std::size_t>(j) * n;
    if (periodic || (j > 0 && j < n - 1)) {
      const long jp = periodic ? (j + 1) % n : j + 1;
      const long jm = periodic ? (j + n - 1) % n : j - 1;
      const double* up = row(jp);
      const double* um = row(jm);
      for (long i = 0; i < n; ++i) dst[i] = (up[i] - um[i]) * inv2h;
    } else if (j == 0) {
      const double *r0 = row(0), *r1 = row(1), *r2 = row(2);
      for (long i = 0; i < n; ++i)
        dst[i] = (-3.0 * r0[i] + 4.0 * r1[i] - r2[i]) * inv2h;
    } else {
      const double *r0 = row(n - 1), *r1 = row(n - 2), *r2 = row(n - 3);
      for (long i = 0; i < n; ++i)
        dst[i] = (3.0 * r0[i] - 4.0 * r1[i] + r2[i]) * inv2h;
    }
  }
  return out;
}

ScalarField axis_second_derivative(const BaseMesh& mesh, const ScalarField& u, int d) {
  const long n = mesh.n;
  const double invh2 = 1.0 / (mesh.h * mesh.h);
  ScalarField out(mesh.nodes);
  const bool periodic = mesh.topology == Topology::periodic;

  if (d == 0) {
    const long rows = mesh.m == 2 ? n : 1;
    for (long r = 0; r < rows; ++r) {
      const double* src = u.data() + static_cast<std::size_t>(r) * n;
      double* dst = out.data() + static_cast<std::size_t>(r) * n;
      kernels().central_diff2(src, dst, static_cast<std::size_t>(n), invh2);
      if (periodic) {
        dst[0] = ((src[1] - 2.0 * src[0]) + src[n - 1]) * invh2;
        dst[n - 1] = ((src[0] - 2.0 * src[n - 1]) + src[n - 2]) * invh2;
      } else {
        dst[0] = (2.0 * src[0] - 5.0 * src[1] + 4.0 * src[2] - src[3]) * invh2;
        dst[n - 1] =
            (2.0 * src[n - 1] - 5.0 * src[n - 2] + 4.0 * src[n - 3] - src[n - 4]) * invh2;
      }
    }
    return out;
  }

  const auto row = [&](long j) { return u.data() + static_cast<std::size_t>(j) * n; };
  for (long j = 0; j < n; ++j) {
    double* dst = out.data() + static_cast<std::size_t>(j) * n;
    if (periodic || (j > 0 && j < n - 1)) {
      const long jp = periodic ? (j + 1) % n : j + 1;
      const long jm = periodic ? (j + n - 1) % n : j - 1;
      const double *up = row(jp), *uc = row(j), *um = row(jm);
      for (long i = 0; i < n; ++i) dst[i] = ((up[i] - 2.0 * uc[i]) + um[i]) * invh2;
    } else if (j == 0) {
      const double *r0 = row(0), *r1 = row(1), *r2 = row(2), *r3 = row(3);
      for (long i = 0; i < n; ++i)
        dst[i] = (2.0 * r0[i] - 5.0 * r1[i] + 4.0 * r2[i] - r3[i]) * invh2;
    } else {
      const double *r0 = row(n - 1), *r1 = row(n - 2), *r2 = row(n - 3), *r3 = row(n - 4);
      for (long i = 0; i < n; ++i)
        dst[i] = (2.0 * r0[i] - 5.0 * r1[i] + 4.0 * r2[i] - r3[i]) * invh2;
    }
  }
  return out;
}

VectorField tilde_gradient(const BaseMesh& mesh, const ScalarField& u) {
  VectorField out(mesh.nodes);
  for (int d = 0; d < mesh.m; ++d) {
    const ScalarField dd = axis_derivative(mesh, u, d);
    for (std::size_t p = 0; p < mesh.nodes; ++p) out[p][d] = dd[p];
  }
  return out;
}

MatrixField coordinate_hessian(const BaseMesh& mesh, const ScalarField& u) {
  MatrixField out(mesh.nodes);
  for (int d = 0; d < mesh.m; ++d) {
    const ScalarField dd = axis_second_derivative(mesh, u, d);
    for (std::size_t p = 0; p < mesh.nodes; ++p) out[p].set(d, d, dd[p]);
  }
  if (mesh.m == 2) {
    const ScalarField uy = axis_derivative(mesh, u, 1);
    const ScalarField uxy = axis_derivative(mesh, uy, 0);
    for (std::size_t p = 0; p < mesh.nodes; ++p) out[p].xy = uxy[p];
  }
  return out;
}

MatrixField covariant_hessian(const BaseMesh& mesh, const MatrixField& coord_hess,
                              const VectorField& du) {
  MatrixField out(mesh.nodes);
  const int m = mesh.m;
  for (std::size_t p = 0; p < mesh.nodes; ++p)
    for (int i = 0; i < m; ++i)
      for (int j = i; j < m; ++j) {
        double corr = 0.0;
        for (int k = 0; k < m; ++k) corr += mesh.gamma[p][k].at(i, j) * du[p][k];
        out[p].set(i, j, coord_hess[p].at(i, j) - corr);
      }
  return out;
}

MatrixField covariant_hessian(const BaseMesh& mesh, const ScalarField& u) {
  return covariant_hessian(mesh, coordinate_hessian(mesh, u), tilde_gradient(mesh, u));
}

double holder_seminorm(const BaseMesh& mesh, const ScalarField& u, double alpha,
                       double delta_loc) {
  if (!(delta_loc > 0.0)) return 0.0;
  double lam_min = sym_eig_min(mesh.gt[0], mesh.m);
  for (std::size_t p = 1; p < mesh.nodes; ++p)
    lam_min = std::min(lam_min, sym_eig_min(mesh.gt[p], mesh.m));
  long r = static_cast<long>(std::ceil(delta_loc / (mesh.h * std::sqrt(lam_min))));
  const long r_cap = mesh.topology == Topology::periodic ? mesh.n / 2 : mesh.n - 1;
  r = std::min(r, r_cap);

  const bool periodic = mesh.topology == Topology::periodic;
  double best = 0.0;
  for (std::size_t p = 0; p < mesh.nodes; ++p) {
    const long pi = mesh.axis_index(p, 0);
    const long pj = mesh.m == 2 ? mesh.axis_index(p, 1) : 0;
    const long rj = mesh.m == 2 ? r : 0;
    for (long dj = 0; dj <= rj; ++dj)
      for (long di = (dj == 0 ? 1 : -r); di <= r; ++di) {
        long qi = pi + di, qj = pj + dj;
        if (periodic) {
          qi = (qi % mesh.n + mesh.n) % mesh.n;
          qj = (qj % mesh.n + mesh.n) % mesh.n;
        } else if (qi < 0 || qi >= mesh.n || qj < 0 || qj >= mesh.n) {
          continue;
        }
        const std::size_t q = mesh.idx(qi, qj);
        Vec2 dx;
        dx[0] = mesh.h * static_cast<double>(di);
        dx[1] = mesh.h * static_cast<double>(dj);
        SymMat2 avg;
        for (int i = 0; i < mesh.m; ++i)
          for (int j = i; j < mesh.m; ++j)
            avg.set(i, j, 0.5 * (mesh.gt[p].at(i, j) + mesh.gt[q].at(i, j)));
        const double dist = std::sqrt(quad_form(avg, dx, dx, mesh.m));
        if (dist <= 0.0 || dist > delta_loc) continue;
        const double ratio = std::fabs(u[p] - u[q]) / std::pow(dist, alpha);
        best = std::max(best, ratio);
      }
  }
  return best;
}

double weighted_sup_norm(const BaseMesh& mesh, const ScalarField& u, double eps) {
  if (mesh.topology != Topology::rectangle)
    throw WrongTopologyError("weighted sup norm needs a boundary defining function");
  double best = 0.0;
  for (std::size_t p = 0; p < mesh.nodes; ++p)
    best = std::max(best, std::pow(mesh.x_bdy[p], eps) * std::fabs(u[p]));
  return best;
}

}  // namespace grw
