#pragma once

// Trigonometric interpolation on uniform periodic grids. Parameter xi has period 1.

#include <complex>
#include <span>
#include <vector>

#include "gsqg/vec2.hpp"

namespace gsqg::spectral {

using cplx = std::complex<double>;

// Coefficients c_k = (1/N) sum_j f_j exp(-2 pi i j k / N), FFT order.
std::vector<cplx> forward(std::span<const cplx> f);
std::vector<cplx> inverse(std::span<const cplx> c);

std::vector<cplx> to_complex(std::span<const Vec2> p);
std::vector<Vec2> to_vec2(std::span<const cplx> z);

// Signed wavenumber of FFT slot j for an N-point grid; the Nyquist slot maps to +N/2.
inline long wavenumber(std::size_t j, std::size_t n) {
  return j <= n / 2 ? static_cast<long>(j) : static_cast<long>(j) - static_cast<long>(n);
}

// d^order/dxi^order of the interpolant, sampled at the nodes.
std::vector<Vec2> derivative(std::span<const Vec2> p, int order);
std::vector<double> derivative(std::span<const double> f, int order);

// Interpolant resampled on an M-point grid (M even, M >= N), sharing node 0.
std::vector<Vec2> upsample(std::span<const Vec2> p, std::size_t m);
std::vector<double> upsample(std::span<const double> f, std::size_t m);

// Interpolant sampled at xi_j + tau / N.
std::vector<Vec2> shifted(std::span<const Vec2> p, double tau);

// Fraction of coefficient magnitude carried by the top third of wavenumbers.
double spectral_tail(std::span<const Vec2> p);

// Direct-sum evaluation of the interpolant at arbitrary xi; O(N) per point.
class Interpolant {
 public:
  Interpolant() = default;
  explicit Interpolant(std::span<const Vec2> p);

  std::size_t size() const { return n_; }
  cplx eval(double xi, int order = 0) const;
  Vec2 point(double xi, int order = 0) const {
    cplx z = eval(xi, order);
    return {z.real(), z.imag()};
  }

 private:
  std::size_t n_ = 0;
  std::vector<long> k_;
  std::vector<cplx> c_;
};

// Real periodic function with antiderivative support (used for arclength).
class RealSeries {
 public:
  RealSeries() = default;
  explicit RealSeries(std::span<const double> f);

  double mean() const { return mean_; }
  double eval(double xi) const;
  // integral from 0 to xi (not reduced modulo the period)
  double integral(double xi) const;

 private:
  double mean_ = 0.0;
  std::vector<long> k_;
  std::vector<cplx> c_;
};

}  // namespace gsqg::spectral
