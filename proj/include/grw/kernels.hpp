#pragma once

#include <cstddef>

namespace grw {

// Hot inner loops of the lab: stencil sweeps, pointwise gradient-function
// evaluation, time-step updates and monitor reductions.  Each operation has
// a scalar reference implementation and an AVX2 variant; the active set is
// chosen at runtime.  Both variants use the same operation order and avoid
// FMA contraction, so their results are bitwise identical (equivalence is
// asserted in tests, see test_kernels.cpp).
struct KernelSet {
  const char* name;

  // y[i] = (u[i+1] - u[i-1]) * inv2h for i in [1, n-1). Boundary/wrap nodes
  // are the caller's responsibility.
  void (*central_diff1)(const double* u, double* y, std::size_t n, double inv2h);

  // y[i] = (u[i+1] - 2 u[i] + u[i-1]) * invh2 for i in [1, n-1).
  void (*central_diff2)(const double* u, double* y, std::size_t n, double invh2);

  // v[i] = f[i] / sqrt(f[i]*f[i] - g2[i]); the radicand is assumed positive
  // (the space-like guard runs before this kernel).
  void (*gradient_function)(const double* f, const double* g2, double* v, std::size_t n);

  // out[i] = -(H[i] - Hcal[i]) * v[i]
  void (*compact_rhs)(const double* H, const double* Hcal, const double* v,
                      double* out, std::size_t n);

  // y[i] += a * x[i]
  void (*axpy)(double* y, const double* x, double a, std::size_t n);

  // u[i] += dt6 * (k1[i] + 2 k2[i] + 2 k3[i] + k4[i])
  void (*rk4_combine)(double* u, const double* k1, const double* k2,
                      const double* k3, const double* k4, double dt6, std::size_t n);

  double (*reduce_max)(const double* x, std::size_t n);
  double (*reduce_min)(const double* x, std::size_t n);
  double (*reduce_max_abs)(const double* x, std::size_t n);
};

const KernelSet& kernels_scalar();

// Null when this build or CPU lacks AVX2.
const KernelSet* kernels_avx2();

// Runtime-selected set: AVX2 when the CPU supports it, scalar otherwise.
// GRWFLOW_SIMD=scalar|avx2|auto overrides (read once).
const KernelSet& kernels();

}  // namespace grw
