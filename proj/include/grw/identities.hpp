#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "grw/graph.hpp"
#include "grw/mesh.hpp"
#include "grw/warp.hpp"

namespace grw {

// Least-squares line through (x, y); r2 is the coefficient of determination.
struct LinFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

LinFit linear_fit(const std::vector<double>& x, const std::vector<double>& y);

// Convergence order fitted from sup-residuals over a mesh ladder.  When every
// level is already at rounding level the order is meaningless; `exact` is set
// and `order` holds +inf.
struct OrderFit {
  double order = 0.0;
  bool exact = false;
  double max_sup = 0.0;
};

OrderFit fit_order(const std::vector<double>& hs, const std::vector<double>& sups,
                   double exact_tol = 1e-12);

// Christoffel symbols of the induced metric, built from finite differences of
// the metric components.  Independent of the closed-form route used by the
// geometry snapshot, so comparisons against it carry discretization error.
std::vector<std::array<SymMat2, 2>> induced_christoffels_fd(const BaseMesh& mesh,
                                                            const GeometrySnapshot& snap);

// Spatial identity residuals (sup over nodes).  Each compares two
// independently assembled routes to the same geometric quantity.
double residual_laplacian_identity(const BaseMesh& mesh, const WarpingFunction& warp,
                                   const ScalarField& u);
double residual_laplacian_assembly(const BaseMesh& mesh, const WarpingFunction& warp,
                                   const ScalarField& u);
double residual_h_cross(const BaseMesh& mesh, const WarpingFunction& warp,
                        const ScalarField& u);
double residual_h_gradu(const BaseMesh& mesh, const WarpingFunction& warp,
                        const ScalarField& u);
double residual_gradient_covector(const BaseMesh& mesh, const WarpingFunction& warp,
                                  const ScalarField& u);
double residual_volume_form(const BaseMesh& mesh, const WarpingFunction& warp,
                            const ScalarField& u);
double residual_metric_norms(const BaseMesh& mesh, const WarpingFunction& warp,
                             const ScalarField& u);
double residual_rhs_equivalence(const BaseMesh& mesh, const WarpingFunction& warp,
                                const ScalarField& u, const ScalarField& Hcal);
double residual_ricci_modes(const BaseMesh& mesh, const WarpingFunction& warp,
                            const ScalarField& u, double sigma);

// Three consecutive flow states, used to form central time differences.
struct FlowTriple {
  ScalarField u_minus;
  ScalarField u_center;
  ScalarField u_plus;
  double s_center = 0.0;
  double ds = 0.0;
};

FlowTriple make_flow_triple(const BaseMesh& mesh, const WarpingFunction& warp,
                            ScalarField u0, const ScalarField& Hcal, double ds,
                            int steps_to_center, double eps_sl = 1e-6);

// Evolution-equation residuals evaluated at the center of a flow triple.
// Time derivatives are central differences at fixed grid nodes.  The flow
// moves each node vertically, which splits into a normal speed
// -(H - Hcal) v^2 plus a tangential drift along xi = (H - Hcal) v grad u;
// every right side below is that fixed-node form.  Sups skip Dirichlet nodes.
struct EvolutionResiduals {
  double u_ds = 0.0;           // ds u + (H - Hcal) v
  double v_transport = 0.0;    // ds v against the first-order transport form
  double v_heat = 0.0;         // (ds + Lap) v against transport + Lap v expansion
  double metric = 0.0;         // ds g_ij - 2 (H - Hcal) v^2 h_ij - (Lie_xi g)_ij
  double inverse = 0.0;        // same for g^ij with both correction terms raised
  double mc = 0.0;             // ds (H - Hcal) against -Lap((H - Hcal) v^2) - decay + drift
  double mc_squared = 0.0;     // squared variant with the -2 |grad (H - Hcal)|^2 term
  double mc_bookkeeping = 0.0; // squared variant against 2 (H - Hcal) * linear variant
};

EvolutionResiduals evolution_residuals(const BaseMesh& mesh, const WarpingFunction& warp,
                                       const FlowTriple& triple, const ScalarField& Hcal);

// Pointwise inequality checks with computed constants.  worst is the largest
// value of (left side - right side) over the nodes; negative means the bound
// holds strictly.
struct PropertyResult {
  std::string name;
  double worst = 0.0;
  double constant = 0.0;
  bool pass = false;
};

std::vector<PropertyResult> property_suite(const BaseMesh& mesh, const WarpingFunction& warp,
                                           const GeometrySnapshot& snap,
                                           const ScalarField& Hcal);

// Margin of the curvature structure condition in its two forms; the quadratic
// form is the one that holds, the linear form fails on oscillatory states.
double structure_margin_quadratic(const BaseMesh& mesh, const GeometrySnapshot& snap,
                                  double eps);
double structure_margin_linear(const BaseMesh& mesh, const GeometrySnapshot& snap,
                               double eps);

// Random space-like graph over the mesh.  target_tilt in (0,1) controls how
// close the state sits to the light cone; offset shifts the u-range.
ScalarField random_spacelike_state(const BaseMesh& mesh, const WarpingFunction& warp,
                                   std::uint64_t seed, double offset,
                                   double target_tilt);

}  // namespace grw
