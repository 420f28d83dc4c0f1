#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "grw/fields.hpp"

namespace grw {

enum class Topology { periodic, rectangle };
enum class MetricKind { flat, conformal };

// Uniform structured grid on an m-torus or an m-rectangle carrying a
// Riemannian metric (flat or conformally flat), its Christoffel symbols and
// Ricci tensor, all sampled per node.
struct BaseMesh {
  int m = 1;
  Topology topology = Topology::periodic;
  long n = 0;        // nodes per axis
  double L = 0.0;    // axis length
  MetricKind metric = MetricKind::flat;
  double h = 0.0;    // node spacing
  std::size_t nodes = 0;

  ScalarField phi;  // conformal exponent; empty for flat metric
  MatrixField gt;      // metric per node
  MatrixField gt_inv;  // inverse metric per node
  // gamma[node][k].at(i,j) = Gamma^k_{ij}
  std::vector<std::array<SymMat2, 2>> gamma;
  MatrixField ric;  // Ricci tensor per node
  ScalarField x_bdy;  // coordinate distance to the boundary; rectangle only

  std::size_t idx(long i, long j = 0) const {
    return static_cast<std::size_t>(j) * static_cast<std::size_t>(n) +
           static_cast<std::size_t>(i);
  }
  double coord(long i) const { return h * static_cast<double>(i); }
  long axis_index(std::size_t node, int d) const {
    return d == 0 ? static_cast<long>(node % static_cast<std::size_t>(n))
                  : static_cast<long>(node / static_cast<std::size_t>(n));
  }
  bool is_boundary(std::size_t node) const {
    if (topology == Topology::periodic) return false;
    for (int d = 0; d < m; ++d) {
      const long i = axis_index(node, d);
      if (i == 0 || i == n - 1) return true;
    }
    return false;
  }
};

BaseMesh make_mesh(int m, Topology topology, long n, double L,
                   MetricKind metric = MetricKind::flat,
                   double phi_amplitude = 0.1);

// Installs gt/gt_inv/gamma/ric for the conformally flat metric e^{2 phi} delta.
// phi must have one entry per node; flat data corresponds to phi == 0.
void conformal_geometry(BaseMesh& mesh, const ScalarField& new_phi);

// Coordinate partial along axis d, second order everywhere (central in the
// interior / periodic wrap; one-sided 3-point at rectangle edges).
ScalarField axis_derivative(const BaseMesh& mesh, const ScalarField& u, int d);

// Coordinate second partial along axis d (one-sided 4-point at edges).
ScalarField axis_second_derivative(const BaseMesh& mesh, const ScalarField& u, int d);

// Covector of coordinate partials u_i per node.
VectorField tilde_gradient(const BaseMesh& mesh, const ScalarField& u);

// Coordinate Hessian u_ij per node; the mixed entry is the composition of
// the two axis derivatives (the 4-point cross stencil in the interior).
MatrixField coordinate_hessian(const BaseMesh& mesh, const ScalarField& u);

// Covariant Hessian u_ij - Gamma^k_{ij} u_k.
MatrixField covariant_hessian(const BaseMesh& mesh, const ScalarField& u);
MatrixField covariant_hessian(const BaseMesh& mesh, const MatrixField& coord_hess,
                              const VectorField& du);

// Local Hoelder seminorm: max |u(p)-u(p')| / d(p,p')^alpha over node pairs
// with 0 < d <= delta_loc, where d is the metric-scaled coordinate distance.
double holder_seminorm(const BaseMesh& mesh, const ScalarField& u, double alpha,
                       double delta_loc);

// sup over nodes of x_bdy^eps * |u|; rectangle topology only.
double weighted_sup_norm(const BaseMesh& mesh, const ScalarField& u, double eps);

}  // namespace grw
