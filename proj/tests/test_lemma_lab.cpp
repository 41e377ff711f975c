#include <doctest.h>

#include <cmath>
#include <random>

#include "gsqg/lemma_lab.hpp"

using namespace gsqg;

namespace {

// straight from the definition, no prefix sums
std::vector<double> maximal_brute(const std::vector<double>& f) {
  const std::size_t n = f.size();
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 1; k <= std::max<std::size_t>(n / 2, 1); ++k) {
      double fwd = 0.0, bwd = 0.0;
      for (std::size_t m = 0; m < k; ++m) {
        fwd += std::abs(f[(i + m) % n]);
        bwd += std::abs(f[(i + n - m) % n]);
      }
      out[i] = std::max(out[i], std::max(fwd, bwd) / k);
    }
  return out;
}

double l2(const std::vector<double>& f) {
  double s = 0.0;
  for (double v : f) s += v * v;
  return std::sqrt(s);
}

}  // namespace

TEST_CASE("maximal operator on simple inputs") {
  for (double v : maximal_operator(std::vector<double>(20, -2.5))) CHECK(v == doctest::Approx(2.5).epsilon(1e-14));
  std::vector<double> spike(32, 0.0);
  spike[0] = 1.0;
  const auto m = maximal_operator(spike);
  for (std::size_t d = 0; d < 16; ++d) CHECK(m[d] == doctest::Approx(1.0 / (d + 1)).epsilon(1e-14));
  for (std::size_t d = 0; d < 15; ++d) CHECK(m[32 - 1 - d] == doctest::Approx(1.0 / (d + 2)).epsilon(1e-14));
  // windows hold at most n/2 nodes, so node 16 never sees the spike
  CHECK(m[16] == 0.0);
  CHECK(maximal_operator({}).empty());
  CHECK(maximal_operator({-3.0}) == std::vector<double>{3.0});
}

TEST_CASE("maximal operator matches brute force and is bounded on L2") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g;
  std::uniform_int_distribution<int> len(2, 150);
  for (int t = 0; t < 200; ++t) {
    std::vector<double> f(len(rng));
    for (auto& v : f) v = g(rng) * (t % 3 == 0 ? std::exp(3.0 * g(rng)) : 1.0);
    const auto m = maximal_operator(f);
    const auto b = maximal_brute(f);
    // window sums come from differences of prefix sums
    double total = 0.0;
    for (double v : f) total += std::abs(v);
    const double tol = 1e-13 * total;
    for (std::size_t i = 0; i < f.size(); ++i) {
      CHECK(std::abs(m[i] - b[i]) <= tol);
      CHECK(m[i] >= std::abs(f[i]) - tol);
    }
    CHECK(l2(m) <= 4.0 * l2(f));
  }
}

TEST_CASE("check suite passes with the default trial count") {
  const auto rep = check_suite(0, 100);
  CHECK(rep.passed());
  CHECK(rep.circle_saturation == doctest::Approx(1.0).epsilon(1e-3));
  std::size_t checked = 0, unchecked = 0;
  for (const auto& e : rep.entries) {
    if (e.checked) {
      ++checked;
      CHECK(e.evaluations > 0);
      INFO(e.name << " worst " << e.worst_ratio);
      CHECK(e.passed());
      CHECK(e.worst_ratio <= 1.0 + kCheckSlack);
    } else {
      ++unchecked;
      CHECK(e.evaluations == 0);
    }
  }
  CHECK(checked == 11);
  CHECK(unchecked >= 1);
  const auto j = rep.to_json();
  CHECK(j.contains("checks"));
  CHECK(rep.table().find("circle saturation") != std::string::npos);
}

TEST_CASE("check suite is reproducible from the seed") {
  const auto a = check_suite(5, 10, 128), b = check_suite(5, 10, 128);
  CHECK(a.to_json().dump() == b.to_json().dump());
  const auto c = check_suite(6, 10, 128);
  CHECK(a.to_json().dump() != c.to_json().dump());
}
