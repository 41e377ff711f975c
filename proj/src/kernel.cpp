#include "gsqg/kernel.hpp"

#include <algorithm>
#include <cmath>

#include "gsqg/errors.hpp"

namespace gsqg {

namespace {
// Ramp argument is clamped away from the ends; the neglected mass is below exp(-900).
constexpr double kRampClamp = 1e-3;

double ramp(double x) {
  const double a = 1.0 / x - 1.0 / (1.0 - x);
  return 1.0 / (1.0 + std::exp(a));
}
}  // namespace

void KernelSpec::validate() const {
  if (!(alpha > 0.0 && alpha < 0.5)) throw InvalidExponent("alpha must lie in (0, 1/2)");
  if (!(c_alpha > 0.0) || !std::isfinite(c_alpha)) throw InvalidArgument("c_alpha must be positive");
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) throw InvalidArgument("epsilon must be >= 0");
  if (!(chi_floor > 0.0 && chi_floor < 1.0)) throw InvalidArgument("chi_floor must lie in (0, 1)");
}

double chi(double t, double floor) {
  const double x = (t - floor) / (1.0 - floor);
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  return ramp(std::clamp(x, kRampClamp, 1.0 - kRampClamp));
}

double chi_prime(double t, double floor) {
  const double x = (t - floor) / (1.0 - floor);
  if (x <= 0.0 || x >= 1.0) return 0.0;
  const double xc = std::clamp(x, kRampClamp, 1.0 - kRampClamp);
  const double a = 1.0 / xc - 1.0 / (1.0 - xc);
  const double s = 1.0 / (1.0 + std::exp(a));
  const double sc = 1.0 / (1.0 + std::exp(-a));
  return s * sc * (1.0 / (xc * xc) + 1.0 / ((1.0 - xc) * (1.0 - xc))) / (1.0 - floor);
}

double kernel_value(const KernelSpec& k, double r) {
  if (r <= 0.0) return k.epsilon > 0.0 ? 0.0 : INFINITY;
  const double base = k.c_alpha / (2.0 * k.alpha) * std::pow(r, -2.0 * k.alpha);
  if (k.epsilon <= 0.0) return base;
  return chi(r / k.epsilon, k.chi_floor) * base;
}

double kernel_radial_derivative(const KernelSpec& k, double r) {
  if (r <= 0.0) return k.epsilon > 0.0 ? 0.0 : -INFINITY;
  const double d = -k.c_alpha * std::pow(r, -2.0 * k.alpha - 1.0);
  if (k.epsilon <= 0.0) return d;
  const double t = r / k.epsilon;
  const double base = k.c_alpha / (2.0 * k.alpha) * std::pow(r, -2.0 * k.alpha);
  return chi_prime(t, k.chi_floor) / k.epsilon * base + chi(t, k.chi_floor) * d;
}

}  // namespace gsqg
