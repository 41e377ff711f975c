#include <doctest.h>

#include "gsqg/errors.hpp"
#include "gsqg/kernel.hpp"
#include "gsqg/spectral.hpp"
#include "gsqg/velocity.hpp"
#include "support.hpp"

using namespace gsqg;
using namespace testing;

namespace {

KernelSpec spec(double eps, double alpha = 1.0 / 6.0) {
  KernelSpec k;
  k.alpha = alpha;
  k.epsilon = eps;
  return k;
}

PatchFamily scaled(const PatchFamily& f, double s) {
  std::vector<Patch> ps = f.patches();
  for (auto& p : ps) p.strength *= s;
  return PatchFamily(ps);
}

PatchFamily random_pair(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> th(-1.5, 1.5);
  return family({{random_curve(rng, n, 0.6, {-0.9, 0.0}), th(rng)}, {random_curve(rng, n, 0.6, {0.9, 0.1}), th(rng)}});
}

}  // namespace

TEST_CASE("kernel values") {
  CHECK(kernel_eval(spec(0.0), {1.0, 0.0}) == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(kernel_eval(spec(0.0), {0.0, 8.0}) == doctest::Approx(1.5).epsilon(1e-14));
  CHECK_THROWS_AS(kernel_eval(spec(0.0), {0.0, 0.0}), SingularEvaluation);
  for (double r : {0.1, 0.2, 1.0, 5.0})
    CHECK(kernel_eval(spec(0.1), {r, 0.0}) == kernel_eval(spec(0.0), {r, 0.0}));
  for (double r : {0.0, 0.01, 0.049, 0.05}) CHECK(kernel_eval(spec(0.1), {0.0, r}) == 0.0);
  CHECK(chi(0.75, 0.5) > 0.0);
  CHECK(chi(0.75, 0.5) < 1.0);
}

TEST_CASE("circle patch: centre and exterior point") {
  const auto f = family({{circle(1.0, 256), 1.0}});
  const Vec2 u0 = contour_velocity(f, spec(0.0), {0.0, 0.0});
  CHECK(norm(u0) <= 1e-12);
  CHECK(norm(area_velocity(f, spec(0.0), {0.0, 0.0}, 64)) <= 1e-10);
  const Vec2 u = contour_velocity(f, spec(0.0), {2.0, 0.0});
  CHECK(std::abs(u.x) <= 1e-10);
  const Vec2 ua = area_velocity(f, spec(0.0), {2.0, 0.0}, 256);
  CHECK(rel(u.y, ua.y) <= 1e-6);
}

TEST_CASE("doubly odd data: velocity on the axis is parallel to it") {
  const auto base = circle(0.8, 256, {1.2, 1.0});
  const auto f = doubly_odd_config({{base, 1.0}});
  for (double x : {-1.0, 0.0, 0.7, 1.2, 3.0}) {
    const Vec2 u = contour_velocity(f, spec(0.0), {x, 0.0});
    CHECK(std::abs(u.y) <= 1e-10);
    CHECK(std::abs(u.x) > 1e-3);
  }
}

TEST_CASE("contour and area quadrature agree off the curves") {
  std::mt19937_64 rng(1);
  const auto f = random_pair(rng, 512);
  std::uniform_real_distribution<double> u(-2.5, 2.5);
  int done = 0;
  while (done < 10) {
    const Vec2 x{u(rng), u(rng)};
    bool near = false;
    for (const auto& p : f.patches()) near = near || point_polyline(x, nodes_of(p.curve)) < 0.05;
    if (near) continue;
    for (double eps : {0.0, 0.1}) {
      const Vec2 c = contour_velocity(f, spec(eps), x);
      const Vec2 a = area_velocity(f, spec(eps), x, 512);
      CHECK(norm(c - a) <= 1e-4 * norm(a));
    }
    ++done;
  }
}

TEST_CASE("linearity in the strengths") {
  std::mt19937_64 rng(2);
  const auto f = random_pair(rng, 128);
  const auto f2 = scaled(f, 2.0);
  const Vec2 x{0.1, 1.7};
  CHECK(contour_velocity(f2, spec(0.1), x) == 2.0 * contour_velocity(f, spec(0.1), x));
  CHECK(area_velocity(f2, spec(0.0), x, 64) == 2.0 * area_velocity(f, spec(0.0), x, 64));
  const auto b1 = velocity_on_boundary(f, spec(0.0), 0), b2 = velocity_on_boundary(f2, spec(0.0), 0);
  for (std::size_t j = 0; j < b1.size(); ++j) CHECK(b2[j] == 2.0 * b1[j]);
  const auto d1 = tangential_derivative(f, spec(0.1), 1), d2 = tangential_derivative(f2, spec(0.1), 1);
  for (std::size_t j = 0; j < d1.values.size(); ++j) CHECK(d2.values[j] == 2.0 * d1.values[j]);
}

TEST_CASE("circle patch: self-induced motion is a rigid rotation") {
  const auto c = circle(1.0, 256);
  const auto f = family({{c, 1.0}});
  for (double eps : {0.0, 0.1, 0.3}) {
    const auto u = velocity_on_boundary(f, spec(eps), 0);
    const auto& g = c.geometry();
    double tmin = INFINITY, tmax = 0.0, nmax = 0.0;
    for (std::size_t j = 0; j < u.size(); ++j) {
      const double ut = std::abs(dot(u[j], g.tangent[j]));
      tmin = std::min(tmin, ut);
      tmax = std::max(tmax, ut);
      nmax = std::max(nmax, std::abs(dot(u[j], g.normal[j])) / ut);
    }
    CHECK(nmax <= 1e-4);
    CHECK((tmax - tmin) / tmax <= 1e-3);
    const auto d = tangential_derivative(f, spec(eps), 0);
    for (double v : d.tangential) CHECK(std::abs(v) <= 1e-3);
  }
}

TEST_CASE("tangential derivative matches the derivative of the samples") {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 3; ++t) {
    const auto f = random_pair(rng, 256);
    for (std::size_t lam = 0; lam < 2; ++lam) {
      const auto u = velocity_on_boundary(f, spec(0.1), lam);
      auto du = spectral::derivative(std::span<const Vec2>(u), 1);
      const double l = f[lam].curve.length();
      const auto d = tangential_derivative(f, spec(0.1), lam);
      double err = 0.0, scale = 0.0;
      for (std::size_t j = 0; j < u.size(); ++j) {
        err = std::max(err, norm(d.values[j] - du[j] / l));
        scale = std::max(scale, norm(du[j] / l));
      }
      CHECK(err <= 1e-3 * scale);
    }
  }
}

TEST_CASE("sup bound through the rearrangement inequality") {
  std::mt19937_64 rng(4);
  for (double alpha : {1.0 / 12.0, 1.0 / 6.0, 0.3}) {
    const double C = 2.0 * std::pow(pi, 0.5 + alpha) / (1.0 - 2.0 * alpha);
    for (int t = 0; t < 50; ++t) {
      const auto f = random_pair(rng, 128);
      double W = 0.0;
      for (const auto& p : f.patches()) W = std::max(W, enclosed_area(p.curve));
      double sup = 0.0;
      for (const auto& u : velocity_on_boundaries(f, spec(0.0, alpha)))
        for (auto v : u) sup = std::max(sup, norm(v));
      CHECK(sup <= C * f.abs_strength_sum() * std::pow(W, 0.5 - alpha));
    }
  }
}

TEST_CASE("mollified velocity converges to the singular one on the curve") {
  std::mt19937_64 rng(5);
  const auto f = random_pair(rng, 512);
  const auto u0 = velocity_on_boundary(f, spec(0.0), 0);
  std::vector<double> le, lerr;
  for (double eps : {0.2, 0.1, 0.05, 0.025}) {
    const auto ue = velocity_on_boundary(f, spec(eps), 0);
    double e = 0.0;
    for (std::size_t j = 0; j < ue.size(); ++j) e = std::max(e, norm(ue[j] - u0[j]));
    le.push_back(std::log(eps));
    lerr.push_back(std::log(e));
  }
  const double slope = (lerr.back() - lerr.front()) / (le.back() - le.front());
  CHECK(slope >= 0.9 * (1.0 - 2.0 / 6.0));
}

TEST_CASE("flux through a small circle vanishes") {
  std::mt19937_64 rng(6);
  const auto f = random_pair(rng, 256);
  for (Vec2 c : {Vec2{0.0, 1.6}, Vec2{0.0, -0.05}, Vec2{2.2, 0.0}}) {
    const double r = 0.04;
    const int m = 256;
    std::vector<Vec2> xs(m);
    for (int i = 0; i < m; ++i) xs[i] = c + r * Vec2{std::cos(2.0 * pi * i / m), std::sin(2.0 * pi * i / m)};
    const auto u = contour_velocity(f, spec(0.0), xs);
    double flux = 0.0, mag = 0.0;
    for (int i = 0; i < m; ++i) {
      flux += dot(u[i], (xs[i] - c) / r);
      mag += norm(u[i]);
    }
    CHECK(std::abs(flux) <= 1e-6 * mag);
  }
}

TEST_CASE("boundary velocity error estimate and the Hoelder modulus") {
  std::mt19937_64 rng(7);
  const auto f = random_pair(rng, 256);
  const auto est = velocity_on_boundary_with_error(f, spec(0.1), 0);
  CHECK(est.error >= 0.0);
  CHECK(est.error <= 1e-6);
  // sampled Hoelder quotient of the singular field stays finite and moderate
  std::uniform_real_distribution<double> u(-2.0, 2.0), h(1e-4, 0.2), a(0.0, 2.0 * pi);
  double worst = 0.0;
  int done = 0;
  while (done < 200) {
    const Vec2 x{u(rng), u(rng)};
    const Vec2 y = x + h(rng) * Vec2{std::cos(a(rng)), std::sin(a(rng))};
    bool near = false;
    for (const auto& p : f.patches())
      near = near || point_polyline(x, nodes_of(p.curve)) < 0.02 || point_polyline(y, nodes_of(p.curve)) < 0.02;
    if (near) continue;
    const double q = norm(contour_velocity(f, spec(0.0), x) - contour_velocity(f, spec(0.0), y)) /
                     std::pow(dist(x, y), 1.0 - 2.0 / 6.0);
    worst = std::max(worst, q);
    ++done;
  }
  MESSAGE("sampled Hoelder quotient " << worst);
  CHECK(std::isfinite(worst));
}
