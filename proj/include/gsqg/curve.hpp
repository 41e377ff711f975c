#pragma once

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "gsqg/vec2.hpp"

namespace gsqg {

enum class ParamKind { ConstantSpeed, General };

std::string to_string(ParamKind k);
ParamKind param_kind_from_string(const std::string& s);

// Fields filled by geometry_fields on a constant-speed curve.
struct CurveGeometry {
  double length = 0.0;
  std::vector<Vec2> tangent;
  std::vector<Vec2> normal;  // tangent^perp
  std::vector<double> curvature;
  std::vector<double> speed;  // |d/dxi|, equal to length for constant speed
};

class ClosedCurve {
 public:
  ClosedCurve() = default;
  // Throws DegenerateCurve for N < 16, odd N, or repeated consecutive nodes.
  explicit ClosedCurve(std::vector<Vec2> nodes, ParamKind kind = ParamKind::General);

  std::size_t size() const { return nodes_.size(); }
  std::span<const Vec2> nodes() const { return nodes_; }
  const Vec2& operator[](std::size_t i) const { return nodes_[i]; }
  ParamKind param_kind() const { return kind_; }

  bool has_geometry() const { return static_cast<bool>(geom_); }
  const CurveGeometry& geometry() const;
  // Spectral length; uses cached geometry when present.
  double length() const;
  double spacing() const { return length() / static_cast<double>(size()); }

 private:
  friend ClosedCurve geometry_fields(const ClosedCurve&);
  std::vector<Vec2> nodes_;
  ParamKind kind_ = ParamKind::General;
  std::shared_ptr<const CurveGeometry> geom_;
};

ClosedCurve resample_constant_speed(const ClosedCurve& curve, std::size_t n);
// Throws WrongParametrization when node speeds spread by more than 1e-6 relative.
ClosedCurve geometry_fields(const ClosedCurve& curve);
// Resample and fill geometry in one go.
ClosedCurve prepare(const ClosedCurve& curve, std::size_t n);

double h2_seminorm(const ClosedCurve& curve);
double c1beta_seminorm(const ClosedCurve& curve, double beta);
double enclosed_area(const ClosedCurve& curve);
double polygon_area(const ClosedCurve& curve);
int winding_number(const ClosedCurve& curve, Vec2 x);
bool is_positively_oriented(const ClosedCurve& curve);
ClosedCurve transport(const ClosedCurve& curve, const std::function<Vec2(Vec2)>& field, double h);

// Curvature for an arbitrary parametrization, (x'y'' - y'x'') / |z'|^3.
std::vector<double> curvature_general(const ClosedCurve& curve);
// (integral of kappa^2 ds)^{1/2} for an arbitrary parametrization.
double h2_seminorm_general(const ClosedCurve& curve);
// Sup-norm of the node positions.
double sup_norm(const ClosedCurve& curve);
double diameter(const ClosedCurve& curve);
ClosedCurve reversed(const ClosedCurve& curve);
// Node arclength positions along the polyline-free spectral parametrization.
std::vector<double> node_arclength(const ClosedCurve& curve);

}  // namespace gsqg
