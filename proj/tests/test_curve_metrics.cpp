#include <doctest.h>

#include "gsqg/errors.hpp"
#include "gsqg/metrics.hpp"
#include "support.hpp"

using namespace gsqg;
using namespace testing;

TEST_CASE("pair distance") {
  // polyline oracle: the inner and outer chord midpoints sit at cos(pi/N) and 2 cos(pi/N)
  CHECK(pair_distance(circle(1.0, 256), circle(2.0, 256)) == doctest::Approx(std::cos(pi / 256)).epsilon(1e-12));
  CHECK(std::abs(pair_distance(circle(1.0, 4096), circle(2.0, 4096)) - 1.0) <= 1e-6);
  CHECK(pair_distance(circle(1.0, 256), circle(1.0, 256)) == 0.0);
  CHECK(pair_distance(circle(1.0, 256), circle(1.0, 256, {3.0, 0.0})) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("self distance on the unit circle") {
  const auto c = circle(1.0, 256);
  CHECK(self_distance(c, pi / 2.0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-4));
  CHECK(self_distance(c, pi) == doctest::Approx(2.0).epsilon(1e-9));
  CHECK_THROWS_AS(self_distance(c, 0.0), InvalidWindow);
  CHECK_THROWS_AS(self_distance(c, 3.5), InvalidWindow);
}

TEST_CASE("self distance on a thin ellipse against the brute-force scan") {
  // constant-speed nodes; the tips (radius 0.02) are not resolved well enough for geometry at 2048
  std::vector<Vec2> p(8192);
  for (std::size_t j = 0; j < p.size(); ++j) {
    const double t = 2.0 * pi * j / p.size();
    p[j] = {2.0 * std::cos(t), 0.2 * std::sin(t)};
  }
  const auto c = resample_constant_speed(ClosedCurve(p), 2048);
  const double l = c.length(), h = l / 4.0;
  const double oracle = brute_self_distance(nodes_of(c), l, h);
  CHECK(self_distance(c, h) == doctest::Approx(oracle).epsilon(1e-12));
}

TEST_CASE("self distance never exceeds the window plus grid") {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 20; ++t) {
    const auto c = random_curve(rng, 128);
    const double l = c.length(), chord = max_chord(c);
    for (double f : {0.01, 0.1, 0.3, 0.5}) CHECK(self_distance(c, f * l) <= f * l + 2.0 * chord);
  }
}

TEST_CASE("self distance separates simple from crossing curves") {
  std::mt19937_64 rng(4);
  const auto c = random_curve(rng, 256);
  CHECK(self_distance(c, 0.05 * c.length()) > 0.1);
  // limacon r = 0.5 + cos(theta) passes through its own inner loop
  double prev = INFINITY;
  for (std::size_t n : {64, 256, 1024}) {
    std::vector<Vec2> p(n);
    for (std::size_t j = 0; j < n; ++j) {
      const double t = 2.0 * pi * j / n;
      const double r = 0.5 + std::cos(t);
      p[j] = r * Vec2{std::cos(t), std::sin(t)};
    }
    const auto lim = resample_constant_speed(ClosedCurve(p), n);
    const double d = self_distance(lim, 0.05 * lim.length());
    CHECK(d < prev);
    prev = d;
  }
  CHECK(prev < 0.02);
}

TEST_CASE("Frechet distance examples") {
  const auto a = circle(1.0, 256);
  CHECK(frechet_distance(a, a) == 0.0);
  CHECK(frechet_distance(a, circle(1.0, 256, {0.3, 0.0})) == doctest::Approx(0.3).epsilon(1e-3));
  CHECK(frechet_distance(a, circle(2.0, 256)) == doctest::Approx(1.0).epsilon(1e-3));
  // phase offsets are absorbed by the cyclic shift
  CHECK(frechet_distance(a, circle(1.0, 256, {}, 0.25)) <= 1e-12);
}

TEST_CASE("Frechet is a pseudometric and dominates Hausdorff") {
  std::mt19937_64 rng(9);
  std::vector<ClosedCurve> cs;
  for (int i = 0; i < 6; ++i) cs.push_back(random_curve(rng, 64, 1.0, {0.05 * i, 0.0}));
  for (std::size_t i = 0; i < cs.size(); ++i)
    for (std::size_t j = 0; j < cs.size(); ++j) {
      const double dij = frechet_distance(cs[i], cs[j]);
      CHECK(dij == frechet_distance(cs[j], cs[i]));
      CHECK(hausdorff_distance(cs[i], cs[j]) <= dij + 1e-9);
      for (std::size_t k = 0; k < cs.size(); ++k)
        CHECK(frechet_distance(cs[i], cs[k]) <= dij + frechet_distance(cs[j], cs[k]) + 1e-12);
    }
}

TEST_CASE("Frechet refinement tightens the bound") {
  const auto a = circle(1.0, 64), b = circle(1.0, 64, {}, 0.5 / 64);
  const double coarse = frechet_distance(a, b), fine = frechet_distance(a, b, 8);
  CHECK(fine < coarse);
  CHECK(fine <= 2.0 * pi / 64 / 16 + 1e-9);
}

TEST_CASE("Hausdorff distance examples") {
  const auto a = circle(1.0, 256);
  CHECK(hausdorff_distance(a, a) == 0.0);
  CHECK(hausdorff_distance(a, circle(1.0, 256, {0.3, 0.0})) == doctest::Approx(0.3).epsilon(1e-3));
  CHECK(hausdorff_distance(a, circle(2.0, 256)) == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("closest point on the polyline against brute force") {
  std::mt19937_64 rng(13);
  const auto c = random_curve(rng, 128);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int t = 0; t < 200; ++t) {
    const Vec2 x{u(rng), u(rng)};
    const auto q = closest_on_polyline(x, c);
    CHECK(q.distance == doctest::Approx(point_polyline(x, nodes_of(c))).epsilon(1e-12));
    const Vec2 a = c[q.segment], b = c[(q.segment + 1) % c.size()];
    CHECK(dist(x, a + q.t * (b - a)) == doctest::Approx(q.distance).epsilon(1e-12));
  }
}

TEST_CASE("L2 deviation") {
  const auto inner = circle(1.0, 256);
  const double d = l2_deviation(inner, circle(1.1, 256));
  CHECK(std::abs(d - 2.0 * pi * 0.01) <= 1e-4);
  CHECK(l2_deviation(inner, inner) == 0.0);
  // oracle: 4096 nodes of the unit circle against a 4096-node polyline of the perturbed one
  auto r = [](double th) { return 1.0 + 0.05 * std::cos(3.0 * th); };
  const auto fine = nodes_of(polar(r, 4096, 16384));
  const auto ref = circle_nodes(1.0, 4096);
  double oracle = 0.0;
  for (auto x : ref) {
    const double e = point_polyline(x, fine);
    oracle += e * e;
  }
  oracle *= 2.0 * pi / 4096;
  const double got = l2_deviation(circle(1.0, 512), polar(r, 2048));
  CHECK(rel(got, oracle) <= 1e-3);
  // D <= l d_F^2
  const auto p = polar(r, 512);
  CHECK(l2_deviation(inner, p) <= inner.length() * std::pow(frechet_distance(inner, p), 2) + 1e-9);
}

TEST_CASE("simplicity and crossings") {
  CHECK(is_simple(circle(1.0, 64)));
  CHECK_FALSE(polylines_cross(circle(1.0, 64), circle(1.0, 64, {3.0, 0.0})));
  CHECK(polylines_cross(circle(1.0, 64), circle(1.0, 64, {1.0, 0.0})));
  std::vector<Vec2> eight(64);
  for (std::size_t j = 0; j < 64; ++j) {
    const double t = 2.0 * pi * j / 64;
    eight[j] = {std::sin(t), std::sin(2.0 * t)};
  }
  CHECK_FALSE(is_simple(ClosedCurve(eight)));
}

TEST_CASE("relations and Sigma sets") {
  const auto small = circle(1.0, 128), big = circle(2.0, 128), far = circle(1.0, 128, {3.0, 0.0});
  CHECK(classify_relation(small, big).kind == RelationKind::Nested1In2);
  CHECK(classify_relation(big, small).kind == RelationKind::Nested2In1);
  CHECK(classify_relation(small, far).kind == RelationKind::Disjoint);
  CHECK(classify_relation(small, circle(1.0, 128, {1.0, 0.0})).kind == RelationKind::Overlapping);

  auto has = [](const SigmaSet& s, std::size_t k) {
    return std::find(s.members.begin(), s.members.end(), k) != s.members.end();
  };
  // nested same sign: first clause
  auto f1 = family({{small, 1.0}, {big, 1.0}});
  CHECK(has(sigma_set(f1, 0), 1));
  CHECK(has(sigma_set(f1, 0), 0));
  // nested opposite sign: neither clause
  CHECK_FALSE(has(sigma_set(family({{small, 1.0}, {big, -1.0}}), 0), 1));
  // disjoint opposite sign: second clause
  CHECK(has(sigma_set(family({{small, 1.0}, {far, -1.0}}), 0), 1));
  // disjoint same sign: neither
  CHECK_FALSE(has(sigma_set(family({{small, 1.0}, {far, 1.0}}), 0), 1));
  // crossing pair is excluded and flagged
  const auto s = sigma_set(family({{small, 1.0}, {circle(1.0, 128, {1.0, 0.0}), 1.0}}), 0);
  CHECK_FALSE(has(s, 1));
  CHECK(s.overlapping.size() == 1);
}

TEST_CASE("length bounded by area over the self distance") {
  std::mt19937_64 rng(17);
  for (int t = 0; t < 30; ++t) {
    const auto c = random_curve(rng, 256);
    const double l = c.length();
    const double s = c1beta_seminorm(c, 0.5);
    const double h = std::min(1.0 / (s * s), 0.5 * l);
    CHECK(l <= 30.0 * enclosed_area(c) / self_distance(c, h) * 1.01);
  }
}
