#include "grw/warp.hpp"

#include <cmath>
#include <random>

#include "grw/errors.hpp"

namespace grw {

WarpingFunction make_warp(WarpKind kind, double a, double b, double omega) {
  std::vector<std::string> errs;
  switch (kind) {
    case WarpKind::constant:
      if (!(a > 0.0)) errs.push_back("constant warp needs a > 0");
      b = 0.0;
      omega = 1.0;
      break;
    case WarpKind::sinusoidal:
      if (!(a > std::fabs(b)))
        errs.push_back("sinusoidal warp needs a > |b| to stay positive");
      if (!(omega > 0.0)) errs.push_back("sinusoidal warp needs omega > 0");
      break;
    case WarpKind::tanh_profile:
      if (!(a > std::fabs(b)))
        errs.push_back("tanh warp needs a > |b| to stay positive");
      omega = 1.0;
      break;
  }
  if (!errs.empty()) throw ConfigError(errs);
  return WarpingFunction{kind, a, b, omega};
}

WarpKind warp_kind_from_string(const std::string& name) {
  if (name == "constant") return WarpKind::constant;
  if (name == "sinusoidal") return WarpKind::sinusoidal;
  if (name == "tanh") return WarpKind::tanh_profile;
  throw ConfigError("unknown warp kind '" + name + "' (constant | sinusoidal | tanh)");
}

WarpEval warp_eval(const WarpingFunction& w, double t) {
  WarpEval e;
  switch (w.kind) {
    case WarpKind::constant:
      e.f = w.a;
      break;
    case WarpKind::sinusoidal: {
      const double s = std::sin(w.omega * t);
      const double c = std::cos(w.omega * t);
      e.f = w.a + w.b * s;
      e.fp = w.b * w.omega * c;
      e.fpp = -w.b * w.omega * w.omega * s;
      break;
    }
    case WarpKind::tanh_profile: {
      const double th = std::tanh(t);
      const double sech2 = 1.0 - th * th;
      e.f = w.a + w.b * th;
      e.fp = w.b * sech2;
      e.fpp = -2.0 * w.b * th * sech2;
      break;
    }
  }
  return e;
}

WarpBounds warp_bounds(const WarpingFunction& w) {
  WarpBounds b;
  switch (w.kind) {
    case WarpKind::constant:
      b.c1 = w.a;
      break;
    case WarpKind::sinusoidal:
      b.c1 = w.a - std::fabs(w.b);
      b.c2 = std::fabs(w.b) * w.omega / b.c1;
      b.c3 = std::fabs(w.b) * w.omega * w.omega / b.c1;
      break;
    case WarpKind::tanh_profile:
      b.c1 = w.a - std::fabs(w.b);
      b.c2 = std::fabs(w.b) / b.c1;
      // max of tanh(t) sech^2(t) over the line is 2 / (3 sqrt 3)
      b.c3 = std::fabs(w.b) * (4.0 / (3.0 * std::sqrt(3.0))) / b.c1;
      break;
  }
  return b;
}

AmbientChristoffels ambient_christoffels(const WarpingFunction& w, double t,
                                         const SymMat2& gt,
                                         const std::array<SymMat2, 2>& gamma_base,
                                         int m) {
  const WarpEval e = warp_eval(w, t);
  AmbientChristoffels G;
  G.dim = m + 1;
  const double ffp = e.f * e.fp;
  const double fp_over_f = e.fp / e.f;
  for (int i = 1; i <= m; ++i) {
    G.G[i][0][i] = fp_over_f;
    G.G[i][i][0] = fp_over_f;
    for (int j = 1; j <= m; ++j) {
      G.G[0][i][j] = ffp * gt.at(i - 1, j - 1);
      for (int k = 1; k <= m; ++k)
        G.G[k][i][j] = gamma_base[k - 1].at(i - 1, j - 1);
    }
  }
  return G;
}

AmbientRicci ambient_ricci(const WarpingFunction& w, double t, const SymMat2& ric_base,
                           const SymMat2& gt, int m) {
  const WarpEval e = warp_eval(w, t);
  AmbientRicci r;
  r.tt = -static_cast<double>(m) * e.fpp / e.f;
  const double coef = e.f * e.fpp + static_cast<double>(m - 1) * e.fp * e.fp;
  for (int i = 0; i < m; ++i)
    for (int j = i; j < m; ++j)
      r.ij.set(i, j, ric_base.at(i, j) + coef * gt.at(i, j));
  return r;
}

TimelikeReport check_timelike_convergence(const WarpingFunction& w, const BaseMesh& mesh,
                                          double t_lo, double t_hi,
                                          std::size_t n_samples, TimelikeMode mode,
                                          std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> sym(-1.0, 1.0);

  TimelikeReport rep;
  rep.samples = n_samples;
  double min_val = 0.0;
  bool first = true;

  for (std::size_t k = 0; k < n_samples; ++k) {
    const double t = k == 0 ? 0.5 * (t_lo + t_hi) : t_lo + (t_hi - t_lo) * unit(rng);
    const std::size_t node =
        k == 0 ? 0 : static_cast<std::size_t>(unit(rng) * static_cast<double>(mesh.nodes)) %
                         mesh.nodes;
    const WarpEval e = warp_eval(w, t);
    const AmbientRicci ric = ambient_ricci(w, t, mesh.ric[node], mesh.gt[node], mesh.m);

    // Spatial part a with |a|_gt = theta / f, then the whole vector scaled to
    // bar g(X,X) = -(1 - theta^2) c^2 = -0.5 f^2.
    double theta = 0.0;
    Vec2 a;
    if (k > 0) {
      theta = 0.98 * unit(rng);
      Vec2 dir;
      double norm2 = 0.0;
      do {
        for (int d = 0; d < mesh.m; ++d) dir[d] = sym(rng);
        norm2 = quad_form(mesh.gt[node], dir, dir, mesh.m);
      } while (norm2 < 1e-12);
      const double scale = theta / (e.f * std::sqrt(norm2));
      for (int d = 0; d < mesh.m; ++d) a[d] = scale * dir[d];
    }
    const double c2 = e.f * e.f * 0.5 / (1.0 - theta * theta);
    const double ric_xx = c2 * (ric.tt + quad_form(ric.ij, a, a, mesh.m));
    if (first || ric_xx < min_val) {
      min_val = ric_xx;
      first = false;
    }
  }

  rep.min_value = min_val;
  switch (mode) {
    case TimelikeMode::off:
      rep.pass = true;
      break;
    case TimelikeMode::strict:
      rep.pass = min_val > 0.0;
      break;
    case TimelikeMode::nonneg:
      rep.pass = min_val >= -1e-12;
      break;
  }
  return rep;
}

}  // namespace grw
