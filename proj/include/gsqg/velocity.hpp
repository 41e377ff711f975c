#pragma once

#include <span>
#include <vector>

#include "gsqg/family.hpp"
#include "gsqg/kernel.hpp"

namespace gsqg {

struct VelocityOptions {
  // Sources are spectrally upsampled until the grid resolves the local integrand scale:
  // the target distance for analytic integrands, the cutoff ramp width for mollified ones.
  double cells_per_distance = 5.0;
  double cells_per_ramp = 12.0;
  std::size_t max_refine = 64;
  // Leading-order zeta correction of the staggered rule (eps = 0, on-curve).
  bool zeta_correction = true;
};

// Throws SingularEvaluation at x = 0 when unmollified.
double kernel_eval(const KernelSpec& spec, Vec2 x);

// u(x) = -sum_l theta_l oint K_eps(x - z_l) dz_l by trapezoid quadrature.
Vec2 contour_velocity(const PatchFamily& family, const KernelSpec& spec, Vec2 x,
                      const VelocityOptions& opt = {});
std::vector<Vec2> contour_velocity(const PatchFamily& family, const KernelSpec& spec,
                                   std::span<const Vec2> xs, const VelocityOptions& opt = {});

// Independent oracle: sum_l theta_l int_{Omega_l} grad^perp K_eps(x - y) dy by adaptive
// quadrature over a star-shaped map of each patch. resolution is the initial angular
// sample count. Throws NotStarShaped or TooCloseToBoundary.
Vec2 area_velocity(const PatchFamily& family, const KernelSpec& spec, Vec2 x, std::size_t resolution);

std::vector<Vec2> velocity_on_boundary(const PatchFamily& family, const KernelSpec& spec, std::size_t lambda,
                                       const VelocityOptions& opt = {});
std::vector<std::vector<Vec2>> velocity_on_boundaries(const PatchFamily& family, const KernelSpec& spec,
                                                      const VelocityOptions& opt = {});

struct BoundaryVelocityEstimate {
  std::vector<Vec2> values;
  double error;  // max node difference against the half-resolution family
};
BoundaryVelocityEstimate velocity_on_boundary_with_error(const PatchFamily& family, const KernelSpec& spec,
                                                         std::size_t lambda, const VelocityOptions& opt = {});

struct TangentialDerivative {
  std::vector<Vec2> values;        // d/ds (u o z_lambda)
  std::vector<double> tangential;  // . T
  std::vector<double> normal;      // . N
};
TangentialDerivative tangential_derivative(const PatchFamily& family, const KernelSpec& spec, std::size_t lambda,
                                           const VelocityOptions& opt = {});

}  // namespace gsqg
