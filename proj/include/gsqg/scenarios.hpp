#pragma once

// Initial data: analytic shapes, random polar curves, the inward perturbation used to
// separate touching boundaries, and reflected (doubly odd) families.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "gsqg/family.hpp"

namespace gsqg {

enum class ShapeKind { Circle, Ellipse, Fourier };
std::string to_string(ShapeKind k);
ShapeKind shape_kind_from_string(const std::string& s);

struct ShapeParams {
  double radius = 1.0;           // circle
  double a = 1.0, b = 1.0;       // ellipse semi-axes
  double rotation = 0.0;         // ellipse axis angle
  double r0 = 1.0;               // fourier mean radius
  std::vector<double> cos_coef;  // a_k, k = 1, 2, ...
  std::vector<double> sin_coef;  // b_k
  Vec2 center{};
  // Start of the constant-speed parametrization, as a fraction of the period.
  double phase = 0.0;
};

// Constant-speed, positively oriented, simple curve with geometry. Throws NotSimple for
// self-intersecting Fourier data, InvalidArgument for non-positive radii.
ClosedCurve make_shape(ShapeKind kind, const ShapeParams& p, std::size_t n);

// r(theta) = 1 + sum_{k <= kmax} a_k cos k theta + b_k sin k theta, |a_k|, |b_k| <= amp / k^2.
ShapeParams random_polar_params(std::mt19937_64& rng, int kmax = 6, double amp = 0.15);

struct PerturbationBound {
  double c1half;   // |gamma|_{C^{1,1/2}}
  double delta_h;  // Delta_h(gamma)
  double M;        // measured partition constant
  std::size_t pieces;
  double eps0;
};

// Admissible magnitude for perturb_inward. Throws InvalidWindow when h is outside
// (0, |gamma|_{C^{1,1/2}}^{-2}] and InvalidArgument for c outside (0, 1].
PerturbationBound perturbation_bound(const ClosedCurve& curve, double h, double c);

// gamma + eps sum_k phi_k(s) N(s_k) sampled at the input nodes (not resampled).
// Requires a constant-speed curve. Throws PerturbationTooLarge for eps > eps0.
ClosedCurve perturb_inward(const ClosedCurve& curve, double h, double c, double eps);

struct PerturbationCheck {
  double frechet;        // d_F(out, in)
  bool inside;           // every output node inside the input curve
  double separation;     // Delta(out, in)
  double h2_ratio;       // |out|_{H2} / |in|_{H2}
  double delta_ratio;    // Delta_{ch}(out) / Delta_h(in)
  double eps, c;

  bool frechet_ok() const { return frechet <= eps * (1.0 + 1e-9); }
  bool separation_ok(double grid_tol) const { return inside && separation >= eps / 4.0 - grid_tol; }
  bool h2_ok() const { return h2_ratio <= 4.0 * 1.01; }
  bool delta_ok() const { return delta_ratio >= 2.0 * c / 7.0 * 0.99; }
};

PerturbationCheck verify_perturbation(const ClosedCurve& in, const ClosedCurve& out, double h, double c,
                                      double eps);

// Containment order: a curve comes before every curve whose region contains it.
std::vector<std::size_t> containment_order(const PatchFamily& family);

// Largest eps for which separate_family applies the perturbation with eps, eps/5, ...
// within each curve's bound (halved for margin).
double separation_epsilon(const PatchFamily& family, double c = 1.0 / 16.0);

// Shrinks every boundary inward with eps, eps/5, eps/25, ... in containment order and
// returns constant-speed curves with n nodes.
PatchFamily separate_family(const PatchFamily& family, double eps, std::size_t n, double c = 1.0 / 16.0);

// Base patches plus their reflections across the x1-axis with negated strength and
// reversed node order. Throws OutOfHalfPlane when a base curve dips below the axis.
PatchFamily doubly_odd_config(const std::vector<Patch>& base);

struct CandidateParams {
  double radius = 1.0;
  double axis_gap = 0.0;  // distance to the x1-axis; 0 touches the mirror image
  double mid_gap = 0.1;   // distance to the x2-axis
  double strength = 1.0;
};

// Upper-half data of the four-patch candidate: two circles mirrored across the x2-axis
// with opposite strengths, close to both axes. Feed to doubly_odd_config. Only a
// candidate shape; nothing here is known blow-up data.
std::vector<Patch> candidate_base(const CandidateParams& p, std::size_t n);

enum class Axis { X1, X2 };

// Image of a boundary under reflection across the axis, node order reversed so that
// orientation is kept.
ClosedCurve reflect(const ClosedCurve& curve, Axis axis);

// Max node error between patch k and the reflection of patch partner[k], plus a check that
// partner strengths are negated (returns +inf otherwise).
double mirror_error(const PatchFamily& family, Axis axis, const std::vector<std::size_t>& partner);

}  // namespace gsqg
