#include <cmath>

#include "gsqg/kernel.hpp"
#include "gsqg/simd/kernels.hpp"

namespace gsqg::simd::detail {

Vec2 velocity_sum_scalar(const KernelParams& k, Vec2 t, const SourceView& s) {
  const double pref = k.c_alpha / (2.0 * k.alpha);
  const double cut2 = k.epsilon > 0.0 ? (k.chi_floor * k.epsilon) * (k.chi_floor * k.epsilon) : 0.0;
  const double eps2 = k.epsilon * k.epsilon;
  double ax = 0.0, ay = 0.0;
  for (std::size_t j = 0; j < s.n; ++j) {
    const double dx = t.x - s.x[j], dy = t.y - s.y[j];
    const double r2 = dx * dx + dy * dy;
    if (r2 == 0.0 || r2 <= cut2) continue;
    double w = pref * std::pow(r2, -k.alpha);
    if (k.epsilon > 0.0 && r2 < eps2) w *= chi(std::sqrt(r2) / k.epsilon, k.chi_floor);
    ax += w * s.vx[j];
    ay += w * s.vy[j];
  }
  return {ax, ay};
}

Vec2 gradient_sum_scalar(const KernelParams& k, Vec2 t, Vec2 dir, const SourceView& s) {
  const double pref = k.c_alpha / (2.0 * k.alpha);
  const double cut2 = k.epsilon > 0.0 ? (k.chi_floor * k.epsilon) * (k.chi_floor * k.epsilon) : 0.0;
  const double eps2 = k.epsilon * k.epsilon;
  double ax = 0.0, ay = 0.0;
  for (std::size_t j = 0; j < s.n; ++j) {
    const double dx = t.x - s.x[j], dy = t.y - s.y[j];
    const double r2 = dx * dx + dy * dy;
    if (r2 == 0.0 || r2 <= cut2) continue;
    const double r = std::sqrt(r2);
    const double p = std::pow(r2, -k.alpha);
    double kp = -k.c_alpha * p / r;
    if (k.epsilon > 0.0 && r2 < eps2) {
      const double tt = r / k.epsilon;
      kp = chi_prime(tt, k.chi_floor) / k.epsilon * pref * p + chi(tt, k.chi_floor) * kp;
    }
    const double coef = kp * (dx * dir.x + dy * dir.y) / r;
    ax += coef * s.vx[j];
    ay += coef * s.vy[j];
  }
  return {ax, ay};
}

Nearest nearest_scalar(Vec2 t, const double* x, const double* y, std::size_t n) {
  Nearest best{INFINITY, 0};
  for (std::size_t j = 0; j < n; ++j) {
    const double dx = t.x - x[j], dy = t.y - y[j];
    const double d2 = dx * dx + dy * dy;
    if (d2 < best.d2) best = {d2, j};
  }
  return best;
}

}  // namespace gsqg::simd::detail
