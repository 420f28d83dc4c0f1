#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace grw {

using ScalarField = std::vector<double>;

// Fixed-capacity value types for spatial dimension m <= 2.  Only the first
// m components (resp. the upper-left m x m block) are meaningful.
struct Vec2 {
  double c[2] = {0.0, 0.0};
  double& operator[](int i) { return c[i]; }
  double operator[](int i) const { return c[i]; }
};

// Symmetric 2x2 matrix stored as (xx, xy, yy).
struct SymMat2 {
  double xx = 0.0, xy = 0.0, yy = 0.0;

  double at(int i, int j) const {
    if (i == 0 && j == 0) return xx;
    if (i == 1 && j == 1) return yy;
    return xy;
  }
  void set(int i, int j, double val) {
    if (i == 0 && j == 0) xx = val;
    else if (i == 1 && j == 1) yy = val;
    else xy = val;
  }
  void add(int i, int j, double val) { set(i, j, at(i, j) + val); }
};

using VectorField = std::vector<Vec2>;
using MatrixField = std::vector<SymMat2>;

inline double sym_det(const SymMat2& a, int m) {
  return m == 1 ? a.xx : a.xx * a.yy - a.xy * a.xy;
}

inline SymMat2 sym_inverse(const SymMat2& a, int m) {
  SymMat2 r;
  if (m == 1) {
    if (a.xx == 0.0) throw std::runtime_error("singular 1x1 matrix");
    r.xx = 1.0 / a.xx;
    return r;
  }
  const double d = sym_det(a, 2);
  if (d == 0.0) throw std::runtime_error("singular 2x2 matrix");
  r.xx = a.yy / d;
  r.yy = a.xx / d;
  r.xy = -a.xy / d;
  return r;
}

// Largest eigenvalue of a symmetric m x m matrix.
inline double sym_eig_max(const SymMat2& a, int m) {
  if (m == 1) return a.xx;
  const double tr = a.xx + a.yy;
  const double gap = a.xx - a.yy;
  const double disc = std::sqrt(gap * gap + 4.0 * a.xy * a.xy);
  return 0.5 * (tr + disc);
}

inline double sym_eig_min(const SymMat2& a, int m) {
  if (m == 1) return a.xx;
  const double tr = a.xx + a.yy;
  const double gap = a.xx - a.yy;
  const double disc = std::sqrt(gap * gap + 4.0 * a.xy * a.xy);
  return 0.5 * (tr - disc);
}

// a_ij x^i y^j
inline double quad_form(const SymMat2& a, const Vec2& x, const Vec2& y, int m) {
  double s = 0.0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) s += a.at(i, j) * x[i] * y[j];
  return s;
}

// (a x)^i = a^ij x_j, raising with a symmetric matrix.
inline Vec2 mat_vec(const SymMat2& a, const Vec2& x, int m) {
  Vec2 r;
  for (int i = 0; i < m; ++i) {
    double s = 0.0;
    for (int j = 0; j < m; ++j) s += a.at(i, j) * x[j];
    r[i] = s;
  }
  return r;
}

// Tensor norm squared of a (0,2) tensor: gx^il gx^jq A_ij A_lq.
inline double tensor_norm2(const SymMat2& a, const SymMat2& gx_inv, int m) {
  double s = 0.0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int l = 0; l < m; ++l)
        for (int q = 0; q < m; ++q)
          s += gx_inv.at(i, l) * gx_inv.at(j, q) * a.at(i, j) * a.at(l, q);
  return s;
}

}  // namespace grw
