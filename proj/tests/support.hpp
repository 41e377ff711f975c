#pragma once

// Test-side curve builders and brute-force oracles. Nothing here calls into the library's
// geometry routines, so they can serve as independent references.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

#include "gsqg/curve.hpp"
#include "gsqg/family.hpp"
#include "gsqg/scenarios.hpp"

namespace testing {

using gsqg::ClosedCurve;
using gsqg::Vec2;
inline constexpr double pi = std::numbers::pi;

inline std::vector<Vec2> circle_nodes(double R, std::size_t n, Vec2 c = {}, double phase = 0.0, bool cw = false) {
  std::vector<Vec2> p(n);
  for (std::size_t j = 0; j < n; ++j) {
    double th = 2.0 * pi * (static_cast<double>(j) / n + phase);
    if (cw) th = -th;
    p[j] = c + R * Vec2{std::cos(th), std::sin(th)};
  }
  return p;
}

inline ClosedCurve circle(double R, std::size_t n, Vec2 c = {}, double phase = 0.0) {
  return gsqg::geometry_fields(ClosedCurve(circle_nodes(R, n, c, phase), gsqg::ParamKind::ConstantSpeed));
}

inline ClosedCurve shape(gsqg::ShapeKind k, gsqg::ShapeParams p, std::size_t n) { return gsqg::make_shape(k, p, n); }

inline ClosedCurve ellipse(double a, double b, std::size_t n, Vec2 c = {}) {
  gsqg::ShapeParams p;
  p.a = a;
  p.b = b;
  p.center = c;
  return gsqg::make_shape(gsqg::ShapeKind::Ellipse, p, n);
}

inline ClosedCurve polar(std::function<double(double)> r, std::size_t n, std::size_t dense = 4096) {
  std::vector<Vec2> p(dense);
  for (std::size_t j = 0; j < dense; ++j) {
    const double th = 2.0 * pi * j / dense;
    p[j] = r(th) * Vec2{std::cos(th), std::sin(th)};
  }
  return gsqg::prepare(ClosedCurve(std::move(p)), n);
}

inline ClosedCurve random_curve(std::mt19937_64& rng, std::size_t n, double scale = 1.0, Vec2 c = {}) {
  auto p = gsqg::random_polar_params(rng);
  p.r0 = scale;
  for (auto& a : p.cos_coef) a *= scale;
  for (auto& b : p.sin_coef) b *= scale;
  p.center = c;
  return gsqg::make_shape(gsqg::ShapeKind::Fourier, p, n);
}

inline gsqg::PatchFamily family(std::vector<gsqg::Patch> ps) { return gsqg::PatchFamily(std::move(ps)); }

// Arclength of the ellipse (a cos t, b sin t) from 0 to t, composite Simpson.
inline double ellipse_arc(double a, double b, double t, int m = 4000) {
  auto f = [&](double u) { return std::hypot(a * std::sin(u), b * std::cos(u)); };
  const double h = t / m;
  double s = f(0.0) + f(t);
  for (int i = 1; i < m; ++i) s += (i % 2 ? 4.0 : 2.0) * f(i * h);
  return s * h / 3.0;
}

// Parameter t at which the ellipse arclength equals s, by bisection.
inline double ellipse_param_at(double a, double b, double s) {
  double lo = 0.0, hi = 2.0 * pi;
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    (ellipse_arc(a, b, mid, 400) < s ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

inline double ellipse_curvature(double a, double b, double t) {
  const double q = a * a * std::sin(t) * std::sin(t) + b * b * std::cos(t) * std::cos(t);
  return a * b / std::pow(q, 1.5);
}

// Min chord over node pairs with cyclic arclength separation in [h, l/2], for equispaced nodes.
inline double brute_self_distance(const std::vector<Vec2>& p, double l, double h) {
  const std::size_t n = p.size();
  const double ds = l / n;
  double best = INFINITY;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const std::size_t k = std::min(j - i, n - (j - i));
      const double sep = k * ds;
      if (sep < h - 1e-12 * l || sep > 0.5 * l + 1e-12 * l) continue;
      best = std::min(best, gsqg::dist(p[i], p[j]));
    }
  return best;
}

inline double seg_dist(Vec2 x, Vec2 a, Vec2 b) {
  const Vec2 d = b - a;
  const double t = std::clamp(gsqg::dot(x - a, d) / gsqg::dot(d, d), 0.0, 1.0);
  return gsqg::dist(x, a + t * d);
}

inline double point_polyline(Vec2 x, const std::vector<Vec2>& p) {
  double best = INFINITY;
  for (std::size_t j = 0; j < p.size(); ++j) best = std::min(best, seg_dist(x, p[j], p[(j + 1) % p.size()]));
  return best;
}

inline std::vector<Vec2> nodes_of(const ClosedCurve& c) { return {c.nodes().begin(), c.nodes().end()}; }

inline double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace testing
