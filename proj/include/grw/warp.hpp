#pragma once

#include <cstdint>
#include <string>

#include "grw/fields.hpp"
#include "grw/mesh.hpp"

namespace grw {

enum class WarpKind { constant, sinusoidal, tanh_profile };

// Warping function of the product line element -dt^2 + f(t)^2 g.  The
// catalog is closed: every kind has strictly positive f and closed-form
// bound constants.
struct WarpingFunction {
  WarpKind kind = WarpKind::constant;
  double a = 1.0;
  double b = 0.0;
  double omega = 1.0;
};

struct WarpEval {
  double f = 1.0;
  double fp = 0.0;
  double fpp = 0.0;
};

// f >= c1 > 0,  |f'/f| <= c2,  |f''/f| <= c3 on the whole line.
struct WarpBounds {
  double c1 = 0.0;
  double c2 = 0.0;
  double c3 = 0.0;
};

WarpingFunction make_warp(WarpKind kind, double a, double b = 0.0, double omega = 1.0);
WarpKind warp_kind_from_string(const std::string& name);

WarpEval warp_eval(const WarpingFunction& w, double t);
WarpBounds warp_bounds(const WarpingFunction& w);

// Christoffel symbols of the product metric at one event; index 0 is time,
// 1..m spatial.  Symmetric in the lower pair.
struct AmbientChristoffels {
  int dim = 2;  // m + 1
  double G[3][3][3] = {};
  double at(int a, int b, int c) const { return G[a][b][c]; }
};

AmbientChristoffels ambient_christoffels(const WarpingFunction& w, double t,
                                         const SymMat2& gt,
                                         const std::array<SymMat2, 2>& gamma_base,
                                         int m);

// Ricci tensor of the product metric at one event (mixed time-space
// components vanish identically).
struct AmbientRicci {
  double tt = 0.0;
  SymMat2 ij;
};

AmbientRicci ambient_ricci(const WarpingFunction& w, double t, const SymMat2& ric_base,
                           const SymMat2& gt, int m);

enum class TimelikeMode { off, strict, nonneg };

struct TimelikeReport {
  double min_value = 0.0;
  bool pass = true;
  std::size_t samples = 0;
};

// Samples deterministic timelike vectors X (normalized to
// bar g(X,X) = -0.5 f(t)^2) over [t_lo, t_hi] x mesh nodes and evaluates
// Ric(X,X).  The first sample is always the pure time direction.
TimelikeReport check_timelike_convergence(const WarpingFunction& w, const BaseMesh& mesh,
                                          double t_lo, double t_hi,
                                          std::size_t n_samples, TimelikeMode mode,
                                          std::uint64_t seed = 20240901ULL);

}  // namespace grw
