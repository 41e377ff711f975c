#pragma once

// Mollification of closed curves and the gradient-flow alignment map between two nearby
// curves, plus the nearest-point projection.

#include <string>
#include <utility>
#include <vector>

#include "gsqg/curve.hpp"

namespace gsqg {

// Unit-mass even bump sigma(x) = b(x / w) / (w int b), b = 1 - chi(|u|, 0) on [-1, 1], with
// the width w chosen so that ||sigma||_{L2} = l^{-1/2}. Support is [-w, w], w <= l.
class Mollifier {
 public:
  explicit Mollifier(double l);
  double width() const { return width_; }
  double operator()(double x) const;
  // int sigma_r(y) cos(omega y) dy
  double transform(double r, double omega) const;
  double l2_norm() const;

 private:
  double width_, mass_;  // mass_ = int b
};

// Periodic convolution sigma_r * f in the arclength variable, applied to the trigonometric
// interpolant of the nodes (exact for it). A constant-speed input is required; others are
// resampled first. Throws ScaleTooLarge when the support 2 r w exceeds the length.
ClosedCurve mollify_curve(const ClosedCurve& curve, double r, const Mollifier& sigma);
// Same for a real periodic sample array on a period of length l.
std::vector<double> mollify_samples(const std::vector<double>& f, double l, double r, const Mollifier& sigma);

enum class AlignmentRegime { Theoretical, Practical, Unverified };
std::string to_string(AlignmentRegime r);

struct AlignmentProperties {
  double sup_dev = 0.0;      // ||g1 - g2 o phi||_inf
  double l2_dev = 0.0;       // ||g1 - g2 o phi||_{L2}
  double tangential = 0.0;   // ||(g1 - g2 o phi) . (d_s g2 o phi)||_{L2}
  double tangential_bound = 0.0;
  double locality_excess = 0.0;  // max over nodes of |psi - phi| - (3 d + 342 R2^2 dF^2)
  bool a = false, c = false, e = false, f = false;
};

struct AlignmentResult {
  std::vector<double> phi;  // at c1's node arclengths, unwrapped, phi[0] in [0, l2)
  double residual = 0.0;    // sup |(hat g1 - hat g2 o phi) . d_s hat g2 o phi| at nodes
  std::pair<double, double> phi_prime_range{0.0, 0.0};
  double r = 0.0;
  double frechet = 0.0;  // d_F estimate used for r and the properties
  double R1 = 0.0, R2 = 0.0;
  double delta_theoretical = 0.0, delta_practical = 0.0;
  AlignmentRegime regime = AlignmentRegime::Unverified;
  std::size_t steps = 0;
  double flow_time = 0.0;
  bool monotone_distance = true;  // node distances never increased between flow steps
  bool decay_bound = true;        // |d_t eta| <= e^{-t/2} |d_t eta^0| at every node and step
  AlignmentProperties properties;
};

struct AlignOptions {
  double tolerance = 1e-8;
  std::size_t max_steps = 10000;
  double step = 0.5;
  std::size_t frechet_refine = 4;
};

// Throws FlowStalled (best residual in the message) or MonotonicityLost.
AlignmentResult align(const ClosedCurve& c1, const ClosedCurve& c2, const AlignOptions& opt = {});

// Arclength position on c2 (node parametrization, linear within segments) of the closest
// polyline point to every node of c1; ties go to the smaller arclength.
std::vector<double> nearest_point_map(const ClosedCurve& c1, const ClosedCurve& c2);

}  // namespace gsqg
