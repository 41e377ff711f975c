#include "gsqg/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "gsqg/errors.hpp"

namespace gsqg {

nlohmann::json curve_to_json(const ClosedCurve& curve) {
  nlohmann::json nodes = nlohmann::json::array();
  for (const auto& p : curve.nodes()) nodes.push_back({p.x, p.y});
  return {{"nodes", nodes}, {"param_kind", to_string(curve.param_kind())}, {"closed", true}};
}

ClosedCurve curve_from_json(const nlohmann::json& j) {
  try {
    if (!j.is_object() || !j.contains("nodes")) throw InvalidArgument("curve object needs a 'nodes' array");
    if (j.contains("closed") && !j.at("closed").get<bool>()) throw InvalidArgument("only closed curves are supported");
    std::vector<Vec2> nodes;
    for (const auto& p : j.at("nodes")) {
      if (!p.is_array() || p.size() != 2) throw InvalidArgument("node entries must be [x, y]");
      nodes.push_back({p[0].get<double>(), p[1].get<double>()});
    }
    const auto kind = param_kind_from_string(j.value("param_kind", std::string("general")));
    ClosedCurve c(std::move(nodes), kind);
    return kind == ParamKind::ConstantSpeed ? geometry_fields(c) : c;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("malformed curve JSON: ") + e.what());
  }
}

void write_curve(const std::string& path, const ClosedCurve& curve) {
  std::ofstream f(path);
  if (!f) throw InvalidArgument("cannot write " + path);
  f << curve_to_json(curve).dump() << '\n';
}

ClosedCurve read_curve(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw InvalidArgument("cannot read " + path);
  nlohmann::json j;
  try {
    f >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(path + ": " + e.what());
  }
  return curve_from_json(j);
}

std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

Viewport viewport_for(const PatchFamily& family, double scale) {
  Viewport vp{1e300, 1e300, -1e300, -1e300};
  for (const auto& p : family.patches())
    for (const auto& q : p.curve.nodes()) {
      vp.xmin = std::min(vp.xmin, q.x);
      vp.xmax = std::max(vp.xmax, q.x);
      vp.ymin = std::min(vp.ymin, q.y);
      vp.ymax = std::max(vp.ymax, q.y);
    }
  const double cx = 0.5 * (vp.xmin + vp.xmax), cy = 0.5 * (vp.ymin + vp.ymax);
  const double hw = 0.5 * scale * (vp.xmax - vp.xmin), hh = 0.5 * scale * (vp.ymax - vp.ymin);
  return {cx - hw, cy - hh, cx + hw, cy + hh};
}

namespace {

std::string fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

}  // namespace

std::string svg_path(const ClosedCurve& curve, const Viewport& vp, const std::string& stroke) {
  std::ostringstream s;
  s << "<path fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\"" << fixed(0.003 * (vp.xmax - vp.xmin))
    << "\" d=\"";
  for (std::size_t i = 0; i < curve.size(); ++i) {
    const auto& p = curve[i];
    s << (i == 0 ? "M" : " L") << fixed(p.x) << ',' << fixed(vp.ymax + vp.ymin - p.y);
  }
  s << " Z\"/>";
  return s.str();
}

std::string svg_frame(const PatchFamily& family, const Viewport& vp, double t) {
  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << fixed(vp.xmin) << ' ' << fixed(vp.ymin) << ' '
    << fixed(vp.xmax - vp.xmin) << ' ' << fixed(vp.ymax - vp.ymin) << "\">\n";
  s << "<title>t = " << format_double(t) << "</title>\n";
  for (const auto& p : family.patches()) s << svg_path(p.curve, vp, p.strength > 0 ? "#b2182b" : "#2166ac") << '\n';
  s << "</svg>\n";
  return s.str();
}

}  // namespace gsqg
