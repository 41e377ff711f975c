#include <doctest.h>

#include "gsqg/simd/kernels.hpp"
#include "gsqg/velocity.hpp"
#include "support.hpp"

using namespace gsqg;
using namespace testing;

namespace {

struct Sources {
  std::vector<double> x, y, vx, vy;
  simd::SourceView view() const { return {x.data(), y.data(), vx.data(), vy.data(), x.size()}; }
};

Sources random_sources(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Sources s;
  for (std::size_t i = 0; i < n; ++i) {
    s.x.push_back(u(rng));
    s.y.push_back(u(rng));
    s.vx.push_back(u(rng));
    s.vy.push_back(u(rng));
  }
  return s;
}

// restores the dispatch choice after a test switches it
struct BackendGuard {
  simd::Backend saved = simd::active_backend();
  ~BackendGuard() { simd::set_backend(saved); }
};

}  // namespace

TEST_CASE("backend selection") {
  BackendGuard g;
  simd::set_backend(simd::Backend::Scalar);
  CHECK(simd::active_backend() == simd::Backend::Scalar);
  simd::set_backend(simd::Backend::Avx2);
  CHECK(simd::active_backend() == (simd::avx2_available() ? simd::Backend::Avx2 : simd::Backend::Scalar));
  CHECK(simd::backend_name(simd::Backend::Scalar) == "scalar");
}

TEST_CASE("AVX2 kernels agree with the scalar reference") {
  if (!simd::avx2_available()) {
    MESSAGE("no AVX2 on this machine; only the scalar path is exercised");
    return;
  }
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(-1.2, 1.2);
  for (double alpha : {0.02, 1.0 / 12.0, 1.0 / 6.0, 0.45})
    for (double eps : {0.0, 0.05, 0.3})
      for (std::size_t n : {1, 3, 4, 7, 16, 129, 1000}) {
        const auto s = random_sources(rng, n);
        const simd::KernelParams k{alpha, 1.3, eps, 0.5};
        for (int t = 0; t < 5; ++t) {
          const Vec2 x{u(rng), u(rng)};
          const Vec2 dir{std::cos(u(rng)), std::sin(u(rng))};
          const Vec2 a = simd::detail::velocity_sum_scalar(k, x, s.view());
          const Vec2 b = simd::detail::velocity_sum_avx2(k, x, s.view());
          double scale = 0.0;
          for (std::size_t i = 0; i < n; ++i) scale += std::hypot(s.vx[i], s.vy[i]);
          CHECK(norm(a - b) <= 1e-12 * (norm(a) + scale));
          const Vec2 ga = simd::detail::gradient_sum_scalar(k, x, dir, s.view());
          const Vec2 gb = simd::detail::gradient_sum_avx2(k, x, dir, s.view());
          CHECK(norm(ga - gb) <= 1e-11 * (norm(ga) + scale));
          const auto na = simd::detail::nearest_scalar(x, s.x.data(), s.y.data(), n);
          const auto nb = simd::detail::nearest_avx2(x, s.x.data(), s.y.data(), n);
          CHECK(na.index == nb.index);
          CHECK(na.d2 == doctest::Approx(nb.d2).epsilon(1e-14));
        }
      }
}

TEST_CASE("sources on top of the target contribute nothing in both paths") {
  Sources s;
  s.x = {0.5, 0.5, 0.2, 0.5, -0.1};
  s.y = {0.5, 0.5, 0.1, 0.5, 0.3};
  s.vx = {1.0, 2.0, 0.5, -1.0, 0.3};
  s.vy = {0.0, 1.0, 0.5, 2.0, -0.2};
  const simd::KernelParams k{1.0 / 6.0, 1.0, 0.0, 0.5};
  const Vec2 a = simd::detail::velocity_sum_scalar(k, {0.5, 0.5}, s.view());
  CHECK(std::isfinite(a.x));
  CHECK(std::isfinite(a.y));
  if (simd::avx2_available()) {
    const Vec2 b = simd::detail::velocity_sum_avx2(k, {0.5, 0.5}, s.view());
    CHECK(norm(a - b) <= 1e-13 * norm(a));
  }
}

TEST_CASE("nearest: first index wins ties in both paths") {
  std::vector<double> x = {1.0, 0.0, -1.0, 0.0, 1.0, 0.0, -1.0, 0.0, 1.0};
  std::vector<double> y = {0.0, 1.0, 0.0, -1.0, 0.0, 1.0, 0.0, -1.0, 0.0};
  CHECK(simd::detail::nearest_scalar({0.0, 0.0}, x.data(), y.data(), x.size()).index == 0);
  CHECK(simd::detail::nearest_scalar({0.0, 0.9}, x.data(), y.data(), x.size()).index == 1);
  if (simd::avx2_available()) {
    CHECK(simd::detail::nearest_avx2({0.0, 0.0}, x.data(), y.data(), x.size()).index == 0);
    CHECK(simd::detail::nearest_avx2({0.0, 0.9}, x.data(), y.data(), x.size()).index == 1);
  }
}

TEST_CASE("boundary velocity is backend independent") {
  BackendGuard g;
  std::mt19937_64 rng(8);
  const auto f = family({{random_curve(rng, 256, 0.6, {-0.8, 0.0}), 1.0}, {random_curve(rng, 256, 0.5, {0.8, 0.0}), -0.7}});
  for (double eps : {0.0, 0.1}) {
    KernelSpec k;
    k.epsilon = eps;
    simd::set_backend(simd::Backend::Scalar);
    const auto a = velocity_on_boundaries(f, k);
    const auto da = tangential_derivative(f, k, 0);
    simd::set_backend(simd::Backend::Avx2);
    const auto b = velocity_on_boundaries(f, k);
    const auto db = tangential_derivative(f, k, 0);
    for (std::size_t l = 0; l < a.size(); ++l)
      for (std::size_t j = 0; j < a[l].size(); ++j) CHECK(norm(a[l][j] - b[l][j]) <= 1e-12 * (1.0 + norm(a[l][j])));
    for (std::size_t j = 0; j < da.values.size(); ++j)
      CHECK(norm(da.values[j] - db.values[j]) <= 1e-10 * (1.0 + norm(da.values[j])));
  }
}
