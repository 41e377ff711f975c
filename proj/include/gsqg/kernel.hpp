#pragma once

// g-SQG interaction kernel K(x) = c_alpha / (2 alpha |x|^{2 alpha}) and its mollification
// K_eps(x) = chi(|x| / eps) K(x) with a smooth ramp chi: 0 on [0, floor], 1 on [1, inf).

#include "gsqg/simd/kernels.hpp"

namespace gsqg {

struct KernelSpec {
  double alpha = 1.0 / 6.0;
  double c_alpha = 1.0;
  double epsilon = 0.0;  // 0 means unmollified
  double chi_floor = 0.5;

  // Throws InvalidExponent / InvalidArgument.
  void validate() const;
  simd::KernelParams params() const { return {alpha, c_alpha, epsilon, chi_floor}; }
};

double chi(double t, double floor);
double chi_prime(double t, double floor);
double kernel_value(const KernelSpec& k, double r);
// d/dr of the radial profile of K_eps.
double kernel_radial_derivative(const KernelSpec& k, double r);

}  // namespace gsqg
