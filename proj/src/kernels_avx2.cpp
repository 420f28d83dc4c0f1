#include "grw/kernels.hpp"

#ifdef GRW_HAVE_AVX2_TU

#include <immintrin.h>

#include <cmath>

namespace grw {
namespace {

// Vector bodies stick to mul/add/sub/div/sqrt/max/min so every lane computes
// exactly what the scalar reference computes.

void central_diff1_avx2(const double* u, double* y, std::size_t n, double inv2h) {
  if (n < 2) return;
  const __m256d c = _mm256_set1_pd(inv2h);
  std::size_t i = 1;
  for (; i + 4 < n; i += 4) {
    const __m256d hi = _mm256_loadu_pd(u + i + 1);
    const __m256d lo = _mm256_loadu_pd(u + i - 1);
    _mm256_storeu_pd(y + i, _mm256_mul_pd(_mm256_sub_pd(hi, lo), c));
  }
  for (; i + 1 < n; ++i) y[i] = (u[i + 1] - u[i - 1]) * inv2h;
}

void central_diff2_avx2(const double* u, double* y, std::size_t n, double invh2) {
  if (n < 2) return;
  const __m256d c = _mm256_set1_pd(invh2);
  const __m256d two = _mm256_set1_pd(2.0);
  std::size_t i = 1;
  for (; i + 4 < n; i += 4) {
    const __m256d hi = _mm256_loadu_pd(u + i + 1);
    const __m256d mid = _mm256_loadu_pd(u + i);
    const __m256d lo = _mm256_loadu_pd(u + i - 1);
    const __m256d t = _mm256_add_pd(_mm256_sub_pd(hi, _mm256_mul_pd(two, mid)), lo);
    _mm256_storeu_pd(y + i, _mm256_mul_pd(t, c));
  }
  for (; i + 1 < n; ++i) y[i] = ((u[i + 1] - 2.0 * u[i]) + u[i - 1]) * invh2;
}

void gradient_function_avx2(const double* f, const double* g2, double* v, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d fv = _mm256_loadu_pd(f + i);
    const __m256d gv = _mm256_loadu_pd(g2 + i);
    const __m256d rad = _mm256_sub_pd(_mm256_mul_pd(fv, fv), gv);
    _mm256_storeu_pd(v + i, _mm256_div_pd(fv, _mm256_sqrt_pd(rad)));
  }
  for (; i < n; ++i) v[i] = f[i] / std::sqrt(f[i] * f[i] - g2[i]);
}

void compact_rhs_avx2(const double* H, const double* Hcal, const double* v,
                      double* out, std::size_t n) {
  const __m256d neg = _mm256_set1_pd(-0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(H + i), _mm256_loadu_pd(Hcal + i));
    const __m256d p = _mm256_mul_pd(d, _mm256_loadu_pd(v + i));
    _mm256_storeu_pd(out + i, _mm256_xor_pd(p, neg));
  }
  for (; i < n; ++i) out[i] = -((H[i] - Hcal[i]) * v[i]);
}

void axpy_avx2(double* y, const double* x, double a, std::size_t n) {
  const __m256d av = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d yi = _mm256_loadu_pd(y + i);
    const __m256d xi = _mm256_loadu_pd(x + i);
    _mm256_storeu_pd(y + i, _mm256_add_pd(yi, _mm256_mul_pd(av, xi)));
  }
  for (; i < n; ++i) y[i] = y[i] + a * x[i];
}

void rk4_combine_avx2(double* u, const double* k1, const double* k2,
                      const double* k3, const double* k4, double dt6, std::size_t n) {
  const __m256d c = _mm256_set1_pd(dt6);
  const __m256d two = _mm256_set1_pd(2.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d t = _mm256_add_pd(_mm256_loadu_pd(k1 + i),
                              _mm256_mul_pd(two, _mm256_loadu_pd(k2 + i)));
    t = _mm256_add_pd(t, _mm256_mul_pd(two, _mm256_loadu_pd(k3 + i)));
    t = _mm256_add_pd(t, _mm256_loadu_pd(k4 + i));
    _mm256_storeu_pd(u + i, _mm256_add_pd(_mm256_loadu_pd(u + i), _mm256_mul_pd(c, t)));
  }
  for (; i < n; ++i) {
    double t = k1[i] + 2.0 * k2[i];
    t = t + 2.0 * k3[i];
    t = t + k4[i];
    u[i] = u[i] + dt6 * t;
  }
}

// fp max/min are associative, so blockwise reduction matches the sequential
// scalar result bitwise on finite data.
double reduce_max_avx2(const double* x, std::size_t n) {
  std::size_t i = 0;
  double r;
  if (n >= 4) {
    __m256d acc = _mm256_loadu_pd(x);
    for (i = 4; i + 4 <= n; i += 4) acc = _mm256_max_pd(acc, _mm256_loadu_pd(x + i));
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, acc);
    r = std::max(std::max(lanes[0], lanes[1]), std::max(lanes[2], lanes[3]));
  } else {
    r = x[0];
    i = 1;
  }
  for (; i < n; ++i) r = std::max(r, x[i]);
  return r;
}

double reduce_min_avx2(const double* x, std::size_t n) {
  std::size_t i = 0;
  double r;
  if (n >= 4) {
    __m256d acc = _mm256_loadu_pd(x);
    for (i = 4; i + 4 <= n; i += 4) acc = _mm256_min_pd(acc, _mm256_loadu_pd(x + i));
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, acc);
    r = std::min(std::min(lanes[0], lanes[1]), std::min(lanes[2], lanes[3]));
  } else {
    r = x[0];
    i = 1;
  }
  for (; i < n; ++i) r = std::min(r, x[i]);
  return r;
}

double reduce_max_abs_avx2(const double* x, std::size_t n) {
  const __m256d mask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));
  std::size_t i = 0;
  double r;
  if (n >= 4) {
    __m256d acc = _mm256_and_pd(_mm256_loadu_pd(x), mask);
    for (i = 4; i + 4 <= n; i += 4)
      acc = _mm256_max_pd(acc, _mm256_and_pd(_mm256_loadu_pd(x + i), mask));
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, acc);
    r = std::max(std::max(lanes[0], lanes[1]), std::max(lanes[2], lanes[3]));
  } else {
    r = std::fabs(x[0]);
    i = 1;
  }
  for (; i < n; ++i) r = std::max(r, std::fabs(x[i]));
  return r;
}

const KernelSet avx2_set = {
    "avx2",
    central_diff1_avx2,
    central_diff2_avx2,
    gradient_function_avx2,
    compact_rhs_avx2,
    axpy_avx2,
    rk4_combine_avx2,
    reduce_max_avx2,
    reduce_min_avx2,
    reduce_max_abs_avx2,
};

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

}  // namespace

const KernelSet* kernels_avx2() { return cpu_has_avx2() ? &avx2_set : nullptr; }

}  // namespace grw

#else  // GRW_HAVE_AVX2_TU

namespace grw {
const KernelSet* kernels_avx2() { return nullptr; }
}  // namespace grw

#endif
