#pragma once

// O(N) source sums behind the O(N^2) interaction loops. Each has a scalar reference
// and an AVX2+FMA variant; the variant is picked at runtime.

#include <cstddef>
#include <string>

#include "gsqg/vec2.hpp"

namespace gsqg::simd {

struct KernelParams {
  double alpha;
  double c_alpha;
  double epsilon;
  double chi_floor;
};

// Structure-of-arrays view of quadrature sources: positions and weighted vectors.
struct SourceView {
  const double* x;
  const double* y;
  const double* vx;
  const double* vy;
  std::size_t n;
};

struct Nearest {
  double d2;
  std::size_t index;
};

enum class Backend { Scalar, Avx2 };

bool avx2_available();
Backend active_backend();
// Forcing Avx2 on a machine without it falls back to Scalar.
void set_backend(Backend b);
std::string backend_name(Backend b);

// sum_j K_eps(t - y_j) v_j; sources at zero distance contribute nothing.
Vec2 velocity_sum(Backend b, const KernelParams& k, Vec2 t, const SourceView& s);
// sum_j DK_eps(t - y_j)[dir] v_j
Vec2 gradient_sum(Backend b, const KernelParams& k, Vec2 t, Vec2 dir, const SourceView& s);
// min_j |t - (x_j, y_j)|^2 with the first index on ties.
Nearest nearest(Backend b, Vec2 t, const double* x, const double* y, std::size_t n);

inline Vec2 velocity_sum(const KernelParams& k, Vec2 t, const SourceView& s) {
  return velocity_sum(active_backend(), k, t, s);
}
inline Vec2 gradient_sum(const KernelParams& k, Vec2 t, Vec2 dir, const SourceView& s) {
  return gradient_sum(active_backend(), k, t, dir, s);
}
inline Nearest nearest(Vec2 t, const double* x, const double* y, std::size_t n) {
  return nearest(active_backend(), t, x, y, n);
}

namespace detail {
Vec2 velocity_sum_scalar(const KernelParams& k, Vec2 t, const SourceView& s);
Vec2 gradient_sum_scalar(const KernelParams& k, Vec2 t, Vec2 dir, const SourceView& s);
Nearest nearest_scalar(Vec2 t, const double* x, const double* y, std::size_t n);
Vec2 velocity_sum_avx2(const KernelParams& k, Vec2 t, const SourceView& s);
Vec2 gradient_sum_avx2(const KernelParams& k, Vec2 t, Vec2 dir, const SourceView& s);
Nearest nearest_avx2(Vec2 t, const double* x, const double* y, std::size_t n);
}  // namespace detail

}  // namespace gsqg::simd
