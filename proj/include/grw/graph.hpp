#pragma once

#include "grw/fields.hpp"
#include "grw/mesh.hpp"
#include "grw/warp.hpp"

namespace grw {

// Per-node geometry of the space-like graph t = u(x) inside the warped
// product.  All quantities are evaluated from the discrete derivatives of u,
// so algebraic identities between the fields hold to rounding, while
// identities involving further derivatives hold to stencil accuracy.
struct GeometrySnapshot {
  int m = 1;
  std::size_t nodes = 0;
  double eps_sl = 1e-6;

  ScalarField f, fp, fpp;  // warp and derivatives at u
  VectorField du;          // u_i
  MatrixField hess_cov;    // covariant base Hessian of u
  ScalarField grad2;       // |grad u|^2 in the base metric
  ScalarField radicand;    // f^2 - |grad u|^2, positive by the guard
  ScalarField v;           // gradient function f / sqrt(radicand)

  MatrixField g;       // induced metric  -u_i u_j + f^2 gt_ij
  MatrixField g_inv;   // closed-form inverse
  VectorField b;       // spatial tilt of the future normal mu = v (d_t + b^i d_i)
  VectorField grad_u_up;  // contravariant induced gradient of u
  ScalarField grad_u_g2;  // |grad u|^2 in the induced metric
  MatrixField h;          // second fundamental form
  ScalarField H;          // mean curvature  g^ij h_ij
  ScalarField h_norm2;    // |h|^2 = g^ik g^jl h_ij h_kl
  ScalarField vol_ratio;  // induced/base volume density  f^m / v

  ScalarField lap_u;  // (base + gradient-direction) Laplacian of u, positive sign
  MatrixField Wmat;   // W^ij = gt^ij + (gt du)^i (gt du)^j / radicand
};

// Throws NotSpacelikeError when f^2 - |grad u|^2 <= eps_sl f^2 at any node,
// BlowupError when u is not finite.
GeometrySnapshot build_snapshot(const BaseMesh& mesh, const WarpingFunction& w,
                                const ScalarField& u, double eps_sl = 1e-6);

// Laplacian of the induced metric applied to a node field, positive
// convention (lap of a coordinate-constant field is exactly zero).
ScalarField apply_induced_laplacian(const BaseMesh& mesh, const GeometrySnapshot& snap,
                                    const ScalarField& field);

// Largest eigenvalue over nodes of the second-order coefficient matrix
// W^ij / radicand of the induced Laplacian.
double stability_lambda_max(const GeometrySnapshot& snap);

enum class RicciMode { direct_contraction, closed_form };

// Ambient Ricci curvature evaluated on the unit normal, Ric(mu, mu).
// direct_contraction expands mu in the product frame and contracts the
// component-wise ambient Ricci tensor; closed_form evaluates
//   sigma m v^2 f''/f + (v^2/f^4) ric(grad u, grad u)
//   + (f''/f) |grad u|^2 + (m-1)(f'/f)^2 |grad u|^2
// with selectable sigma in {-1, +1}.
ScalarField ricci_normal(const BaseMesh& mesh, const GeometrySnapshot& snap,
                         RicciMode mode, int sigma = -1);

// sqrt(det g / det gt) per node; cross-check route for vol_ratio.
ScalarField volume_density_det_route(const BaseMesh& mesh, const GeometrySnapshot& snap);

// Closed-form squared tensor norms of one metric measured in the other:
// |g|^2 in gt and |gt|^2 in g.
struct MetricNorms {
  double g_in_gt = 0.0;
  double gt_in_g = 0.0;
};
MetricNorms metric_equivalence_closed(const GeometrySnapshot& snap, std::size_t p);

// max over nodes of |A(Y,Z)| - |A| |Y| |Z| measured in gx (norm bound
// violation; nonpositive up to rounding for any symmetric A).
double tensor_pairing_max_violation(const MatrixField& A, const VectorField& Y,
                                    const VectorField& Z, const MatrixField& gx,
                                    const MatrixField& gx_inv, int m);

}  // namespace grw
