#include "gsqg/config.hpp"

#include <yaml-cpp/yaml.h>

#include <fstream>
#include <set>
#include <sstream>

#include "gsqg/errors.hpp"

namespace gsqg {
namespace {

void check_keys(const YAML::Node& node, const std::set<std::string>& allowed, const std::string& where) {
  if (!node.IsMap()) throw ConfigError(where + " must be a mapping");
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    if (!allowed.count(key)) throw ConfigError("unknown key '" + key + "' in " + where);
  }
}

template <class T>
T get(const YAML::Node& node, const std::string& key, const std::string& where) {
  try {
    return node[key].as<T>();
  } catch (const YAML::Exception&) {
    throw ConfigError("bad value for '" + key + "' in " + where);
  }
}

template <class T>
void read(const YAML::Node& node, const std::string& key, T& out, const std::string& where) {
  if (node[key]) out = get<T>(node, key, where);
}

template <class T>
void read(const YAML::Node& node, const std::string& key, std::optional<T>& out, const std::string& where) {
  if (node[key]) out = get<T>(node, key, where);
}

PatchSpec read_patch(const YAML::Node& node, std::size_t idx) {
  const std::string where = "patches[" + std::to_string(idx) + "]";
  check_keys(node, {"kind", "params", "strength"}, where);
  if (!node["kind"]) throw ConfigError(where + " needs a kind");
  PatchSpec p;
  try {
    p.kind = shape_kind_from_string(get<std::string>(node, "kind", where));
  } catch (const InvalidArgument& e) {
    throw ConfigError(where + ": " + e.what());
  }
  read(node, "strength", p.strength, where);
  if (!node["params"]) return p;
  const auto params = node["params"];
  const std::string pw = where + ".params";
  switch (p.kind) {
    case ShapeKind::Circle: check_keys(params, {"radius", "center", "phase"}, pw); break;
    case ShapeKind::Ellipse: check_keys(params, {"a", "b", "rotation", "center", "phase"}, pw); break;
    case ShapeKind::Fourier: check_keys(params, {"r0", "cos", "sin", "center", "phase"}, pw); break;
  }
  auto& s = p.params;
  read(params, "radius", s.radius, pw);
  read(params, "a", s.a, pw);
  read(params, "b", s.b, pw);
  read(params, "rotation", s.rotation, pw);
  read(params, "r0", s.r0, pw);
  read(params, "cos", s.cos_coef, pw);
  read(params, "sin", s.sin_coef, pw);
  read(params, "phase", s.phase, pw);
  if (params["center"]) {
    const auto c = get<std::vector<double>>(params, "center", pw);
    if (c.size() != 2) throw ConfigError(pw + ".center must be [x, y]");
    s.center = {c[0], c[1]};
  }
  return p;
}

}  // namespace

SimConfig parse_config(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("malformed scenario file: ") + e.what());
  }
  SimConfig c;
  const std::string top = "scenario";
  check_keys(root, {"alpha", "c_alpha", "epsilon", "chi_floor", "allow_unmollified", "cfl", "N", "t_end",
                    "output_every", "ceiling_L", "dt", "separate_touching", "patches", "presets"},
             top);
  read(root, "alpha", c.alpha, top);
  read(root, "c_alpha", c.c_alpha, top);
  read(root, "epsilon", c.epsilon, top);
  read(root, "chi_floor", c.chi_floor, top);
  read(root, "allow_unmollified", c.allow_unmollified, top);
  read(root, "cfl", c.cfl, top);
  read(root, "N", c.N, top);
  read(root, "t_end", c.t_end, top);
  read(root, "output_every", c.output_every, top);
  read(root, "ceiling_L", c.ceiling_L, top);
  read(root, "dt", c.dt, top);
  read(root, "separate_touching", c.separate_touching, top);
  if (const auto patches = root["patches"]) {
    if (!patches.IsSequence()) throw ConfigError("patches must be a list");
    for (std::size_t i = 0; i < patches.size(); ++i) c.patches.push_back(read_patch(patches[i], i));
  }
  if (const auto presets = root["presets"]) {
    check_keys(presets, {"doubly_odd"}, "presets");
    if (const auto d = presets["doubly_odd"]) {
      const std::string w = "presets.doubly_odd";
      check_keys(d, {"enabled", "candidate", "radius", "axis_gap", "mid_gap", "strength"}, w);
      c.doubly_odd = true;
      read(d, "enabled", c.doubly_odd, w);
      read(d, "candidate", c.candidate, w);
      read(d, "radius", c.candidate_params.radius, w);
      read(d, "axis_gap", c.candidate_params.axis_gap, w);
      read(d, "mid_gap", c.candidate_params.mid_gap, w);
      read(d, "strength", c.candidate_params.strength, w);
    }
  }
  validate(c);
  return c;
}

SimConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot read " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

}  // namespace gsqg
