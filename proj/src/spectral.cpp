#include "gsqg/spectral.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_fft_complex.h>

#include <cmath>
#include <map>
#include <memory>
#include <numbers>

namespace gsqg::spectral {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct FftPlan {
  gsl_fft_complex_wavetable* table = nullptr;
  gsl_fft_complex_workspace* work = nullptr;
  explicit FftPlan(std::size_t n)
      : table(gsl_fft_complex_wavetable_alloc(n)), work(gsl_fft_complex_workspace_alloc(n)) {}
  ~FftPlan() {
    gsl_fft_complex_wavetable_free(table);
    gsl_fft_complex_workspace_free(work);
  }
  FftPlan(const FftPlan&) = delete;
  FftPlan& operator=(const FftPlan&) = delete;
};

FftPlan& plan_for(std::size_t n) {
  thread_local std::map<std::size_t, std::unique_ptr<FftPlan>> plans;
  auto& slot = plans[n];
  if (!slot) slot = std::make_unique<FftPlan>(n);
  return *slot;
}

void transform(std::vector<cplx>& data, gsl_fft_direction dir) {
  const std::size_t n = data.size();
  if (n < 2) return;
  FftPlan& p = plan_for(n);
  auto* raw = reinterpret_cast<double*>(data.data());
  gsl_fft_complex_transform(raw, 1, n, p.table, p.work, dir);
}

// Pad or truncate FFT-ordered coefficients, splitting the Nyquist mode symmetrically.
std::vector<cplx> resize_coeffs(std::span<const cplx> c, std::size_t m) {
  const std::size_t n = c.size();
  std::vector<cplx> out(m, cplx{});
  const std::size_t half = n / 2;
  for (std::size_t j = 0; j < half; ++j) out[j] = c[j];
  for (std::size_t j = 1; j < half; ++j) out[m - j] = c[n - j];
  if (m > n) {
    out[half] += 0.5 * c[half];
    out[m - half] += 0.5 * c[half];
  } else {
    out[half] = c[half];
  }
  return out;
}

}  // namespace

std::vector<cplx> forward(std::span<const cplx> f) {
  std::vector<cplx> c(f.begin(), f.end());
  transform(c, gsl_fft_forward);
  const double inv = 1.0 / static_cast<double>(c.size());
  for (auto& v : c) v *= inv;
  return c;
}

std::vector<cplx> inverse(std::span<const cplx> c) {
  std::vector<cplx> f(c.begin(), c.end());
  transform(f, gsl_fft_backward);
  return f;
}

std::vector<cplx> to_complex(std::span<const Vec2> p) {
  std::vector<cplx> z(p.size());
  for (std::size_t j = 0; j < p.size(); ++j) z[j] = {p[j].x, p[j].y};
  return z;
}

std::vector<Vec2> to_vec2(std::span<const cplx> z) {
  std::vector<Vec2> p(z.size());
  for (std::size_t j = 0; j < z.size(); ++j) p[j] = {z[j].real(), z[j].imag()};
  return p;
}

namespace {

std::vector<cplx> derivative_complex(std::span<const cplx> f, int order) {
  auto c = forward(f);
  const std::size_t n = c.size();
  for (std::size_t j = 0; j < n; ++j) {
    const long k = wavenumber(j, n);
    if (j == n / 2 && order % 2 == 1) {
      c[j] = 0.0;
      continue;
    }
    cplx factor = std::pow(cplx(0.0, kTwoPi * static_cast<double>(k)), order);
    c[j] *= factor;
  }
  return inverse(c);
}

}  // namespace

std::vector<Vec2> derivative(std::span<const Vec2> p, int order) {
  auto z = to_complex(p);
  return to_vec2(derivative_complex(z, order));
}

std::vector<double> derivative(std::span<const double> f, int order) {
  std::vector<cplx> z(f.begin(), f.end());
  auto d = derivative_complex(z, order);
  std::vector<double> out(f.size());
  for (std::size_t j = 0; j < f.size(); ++j) out[j] = d[j].real();
  return out;
}

std::vector<Vec2> upsample(std::span<const Vec2> p, std::size_t m) {
  if (m == p.size()) return {p.begin(), p.end()};
  auto c = forward(to_complex(p));
  return to_vec2(inverse(resize_coeffs(c, m)));
}

std::vector<double> upsample(std::span<const double> f, std::size_t m) {
  std::vector<cplx> z(f.begin(), f.end());
  auto up = inverse(resize_coeffs(forward(z), m));
  std::vector<double> out(m);
  for (std::size_t j = 0; j < m; ++j) out[j] = up[j].real();
  return out;
}

std::vector<Vec2> shifted(std::span<const Vec2> p, double tau) {
  auto c = forward(to_complex(p));
  const std::size_t n = c.size();
  for (std::size_t j = 0; j < n; ++j) {
    if (j == n / 2) {
      c[j] *= std::cos(std::numbers::pi * tau);
      continue;
    }
    const double k = static_cast<double>(wavenumber(j, n));
    c[j] *= std::polar(1.0, kTwoPi * k * tau / static_cast<double>(n));
  }
  return to_vec2(inverse(c));
}

double spectral_tail(std::span<const Vec2> p) {
  auto c = forward(to_complex(p));
  const std::size_t n = c.size();
  double total = 0.0, tail = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const long k = wavenumber(j, n);
    if (k == 0) continue;
    const double a = std::abs(c[j]);
    total += a;
    if (3 * std::abs(k) > static_cast<long>(n)) tail += a;
  }
  return total > 0.0 ? tail / total : 0.0;
}

Interpolant::Interpolant(std::span<const Vec2> p) : n_(p.size()) {
  auto c = forward(to_complex(p));
  const std::size_t n = c.size();
  for (std::size_t j = 0; j < n; ++j) {
    const long k = wavenumber(j, n);
    if (j == n / 2) {
      k_.push_back(k);
      c_.push_back(0.5 * c[j]);
      k_.push_back(-k);
      c_.push_back(0.5 * c[j]);
    } else {
      k_.push_back(k);
      c_.push_back(c[j]);
    }
  }
}

cplx Interpolant::eval(double xi, int order) const {
  cplx acc = 0.0;
  for (std::size_t j = 0; j < k_.size(); ++j) {
    const double w = kTwoPi * static_cast<double>(k_[j]);
    cplx term = c_[j] * std::polar(1.0, w * xi);
    if (order > 0) term *= std::pow(cplx(0.0, w), order);
    acc += term;
  }
  return acc;
}

RealSeries::RealSeries(std::span<const double> f) {
  std::vector<cplx> z(f.begin(), f.end());
  auto c = forward(z);
  const std::size_t n = c.size();
  mean_ = c[0].real();
  for (std::size_t j = 1; j < n; ++j) {
    const long k = wavenumber(j, n);
    if (j == n / 2) {
      k_.push_back(k);
      c_.push_back(0.5 * c[j]);
      k_.push_back(-k);
      c_.push_back(0.5 * c[j]);
    } else {
      k_.push_back(k);
      c_.push_back(c[j]);
    }
  }
}

double RealSeries::eval(double xi) const {
  double acc = mean_;
  for (std::size_t j = 0; j < k_.size(); ++j)
    acc += (c_[j] * std::polar(1.0, kTwoPi * static_cast<double>(k_[j]) * xi)).real();
  return acc;
}

double RealSeries::integral(double xi) const {
  double acc = mean_ * xi;
  for (std::size_t j = 0; j < k_.size(); ++j) {
    const double w = kTwoPi * static_cast<double>(k_[j]);
    acc += (c_[j] * (std::polar(1.0, w * xi) - 1.0) / cplx(0.0, w)).real();
  }
  return acc;
}

}  // namespace gsqg::spectral
