#pragma once

// Curve files ({"nodes": [[x, y], ...], "param_kind": ..., "closed": true}) and SVG frames.

#include <nlohmann/json.hpp>
#include <string>

#include "gsqg/family.hpp"

namespace gsqg {

nlohmann::json curve_to_json(const ClosedCurve& curve);
// Throws InvalidArgument on malformed input. Constant-speed curves get geometry filled.
ClosedCurve curve_from_json(const nlohmann::json& j);

void write_curve(const std::string& path, const ClosedCurve& curve);
ClosedCurve read_curve(const std::string& path);

struct Viewport {
  double xmin = -1.0, ymin = -1.0, xmax = 1.0, ymax = 1.0;
};

// Bounding box of all nodes, scaled about its center.
Viewport viewport_for(const PatchFamily& family, double scale = 1.5);

// Closed stroke-only path, y axis pointing up.
std::string svg_path(const ClosedCurve& curve, const Viewport& vp, const std::string& stroke);
std::string svg_frame(const PatchFamily& family, const Viewport& vp, double t);

// Shortest round-trip decimal form of a double.
std::string format_double(double v);

}  // namespace gsqg
