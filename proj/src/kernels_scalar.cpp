#include "grw/kernels.hpp"

#include <cmath>

namespace grw {
namespace {

void central_diff1_scalar(const double* u, double* y, std::size_t n, double inv2h) {
  for (std::size_t i = 1; i + 1 < n; ++i) y[i] = (u[i + 1] - u[i - 1]) * inv2h;
}

void central_diff2_scalar(const double* u, double* y, std::size_t n, double invh2) {
  for (std::size_t i = 1; i + 1 < n; ++i)
    y[i] = ((u[i + 1] - 2.0 * u[i]) + u[i - 1]) * invh2;
}

void gradient_function_scalar(const double* f, const double* g2, double* v, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) v[i] = f[i] / std::sqrt(f[i] * f[i] - g2[i]);
}

void compact_rhs_scalar(const double* H, const double* Hcal, const double* v,
                        double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = -((H[i] - Hcal[i]) * v[i]);
}

void axpy_scalar(double* y, const double* x, double a, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = y[i] + a * x[i];
}

void rk4_combine_scalar(double* u, const double* k1, const double* k2,
                        const double* k3, const double* k4, double dt6, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    double t = k1[i] + 2.0 * k2[i];
    t = t + 2.0 * k3[i];
    t = t + k4[i];
    u[i] = u[i] + dt6 * t;
  }
}

double reduce_max_scalar(const double* x, std::size_t n) {
  double r = x[0];
  for (std::size_t i = 1; i < n; ++i) r = std::max(r, x[i]);
  return r;
}

double reduce_min_scalar(const double* x, std::size_t n) {
  double r = x[0];
  for (std::size_t i = 1; i < n; ++i) r = std::min(r, x[i]);
  return r;
}

double reduce_max_abs_scalar(const double* x, std::size_t n) {
  double r = std::fabs(x[0]);
  for (std::size_t i = 1; i < n; ++i) r = std::max(r, std::fabs(x[i]));
  return r;
}

const KernelSet scalar_set = {
    "scalar",
    central_diff1_scalar,
    central_diff2_scalar,
    gradient_function_scalar,
    compact_rhs_scalar,
    axpy_scalar,
    rk4_combine_scalar,
    reduce_max_scalar,
    reduce_min_scalar,
    reduce_max_abs_scalar,
};

}  // namespace

const KernelSet& kernels_scalar() { return scalar_set; }

}  // namespace grw
