#include "gsqg/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>

#include "gsqg/errors.hpp"
#include "gsqg/io.hpp"
#include "gsqg/spectral.hpp"

namespace gsqg {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

void refresh_sigma(SimState& state) {
  state.sigma.assign(state.family.size(), {});
  for (std::size_t l = 0; l < state.family.size(); ++l) {
    const auto s = sigma_set(state.family, l);
    if (!s.overlapping.empty()) throw TopologyBreach("patch boundaries cross");
    state.sigma[l] = s.members;
  }
}

SimState make_state(PatchFamily family, const KernelSpec& spec, double t) {
  spec.validate();
  SimState s;
  s.t = t;
  s.family = std::move(family);
  s.spec = spec;
  refresh_sigma(s);
  return s;
}

FieldSamples rhs(const SimState& state, const VelocityOptions& opt) {
  return velocity_on_boundaries(state.family, state.spec, opt);
}

double sup_norm(const FieldSamples& u) {
  double m = 0.0;
  for (const auto& v : u)
    for (const auto& p : v) m = std::max(m, norm(p));
  return m;
}

double cfl_step(const SimState& state, const FieldSamples& u, double cfl) {
  const double umax = sup_norm(u);
  if (umax == 0.0) return kInf;
  return cfl * state.family.min_spacing() / umax;
}

namespace {

PatchFamily displaced(const PatchFamily& fam, const FieldSamples& k, double a) {
  std::vector<Patch> out;
  out.reserve(fam.size());
  for (std::size_t l = 0; l < fam.size(); ++l) {
    const auto& c = fam[l].curve;
    std::vector<Vec2> nodes(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) nodes[i] = c[i] + a * k[l][i];
    out.push_back({ClosedCurve(std::move(nodes)), fam[l].strength});
  }
  return PatchFamily(std::move(out));
}

}  // namespace

SimState step(const SimState& state, double dt, const StepOptions& opt, const FieldSamples* k1_in) {
  if (!(dt >= 0.0)) throw InvalidArgument("time step must be non-negative");
  if (dt == 0.0) return state;
  FieldSamples k1_own;
  if (!k1_in) k1_own = rhs(state, opt.velocity);
  const FieldSamples& k1 = k1_in ? *k1_in : k1_own;
  const double limit = cfl_step(state, k1, opt.cfl);
  if (dt > limit * (1.0 + 1e-12))
    throw StepRejected("dt = " + format_double(dt) + " exceeds the CFL limit " + format_double(limit));

  auto stage = [&](const FieldSamples& k, double a) {
    SimState s;
    s.family = displaced(state.family, k, a);
    s.spec = state.spec;
    return rhs(s, opt.velocity);
  };
  const auto k2 = stage(k1, 0.5 * dt);
  const auto k3 = stage(k2, 0.5 * dt);
  const auto k4 = stage(k3, dt);

  std::vector<Patch> next;
  next.reserve(state.family.size());
  for (std::size_t l = 0; l < state.family.size(); ++l) {
    const auto& c = state.family[l].curve;
    std::vector<Vec2> nodes(c.size());
    for (std::size_t i = 0; i < c.size(); ++i)
      nodes[i] = c[i] + (dt / 6.0) * (k1[l][i] + 2.0 * k2[l][i] + 2.0 * k3[l][i] + k4[l][i]);
    try {
      next.push_back({prepare(ClosedCurve(std::move(nodes)), c.size()), state.family[l].strength});
    } catch (const DegenerateCurve& e) {
      throw TopologyBreach(std::string("boundary lost resolution: ") + e.what());
    } catch (const WrongParametrization& e) {
      throw TopologyBreach(std::string("boundary lost resolution: ") + e.what());
    }
  }
  SimState out;
  out.t = state.t + dt;
  out.family = PatchFamily(std::move(next));
  out.spec = state.spec;
  out.sigma = state.sigma;
  if (opt.check_topology) {
    const auto& f = out.family;
    for (std::size_t l = 0; l < f.size(); ++l)
      if (!is_simple(f[l].curve)) throw TopologyBreach("boundary " + std::to_string(l) + " self-crosses");
    for (std::size_t l = 0; l < f.size(); ++l)
      for (std::size_t m = l + 1; m < f.size(); ++m)
        if (polylines_cross(f[l].curve, f[m].curve) &&
            classify_relation(f[l].curve, f[m].curve).kind == RelationKind::Overlapping)
          throw TopologyBreach("boundaries " + std::to_string(l) + " and " + std::to_string(m) + " cross");
  }
  return out;
}

DiagnosticsRecord functionals(const SimState& state) {
  const auto& f = state.family;
  const std::size_t n = f.size();
  DiagnosticsRecord r;
  r.t = state.t;
  r.areas.resize(n);
  r.h2.resize(n);
  double q = 0.0;
  for (std::size_t l = 0; l < n; ++l) {
    r.areas[l] = enclosed_area(f[l].curve);
    r.h2[l] = h2_seminorm(f[l].curve);
    q += std::abs(f[l].strength) * r.h2[l] * r.h2[l];
  }
  r.Q = q / f.min_abs_strength();
  r.W = *std::max_element(r.areas.begin(), r.areas.end());

  r.min_self_delta = kInf;
  const double h = 1.0 / r.Q;
  for (std::size_t l = 0; l < n; ++l) {
    // Delta_h of a curve shorter than 2h has no admissible pairs (max over the empty set)
    if (h <= 0.5 * f[l].curve.length()) r.min_self_delta = std::min(r.min_self_delta, self_distance(f[l].curve, h));
  }
  r.min_pair_delta = kInf;
  std::vector<double> cache(n * n, -1.0);
  for (std::size_t l = 0; l < n; ++l) {
    const auto& sig = state.sigma.empty() ? std::vector<std::size_t>{l} : state.sigma[l];
    for (std::size_t m = 0; m < n; ++m) {
      if (std::find(sig.begin(), sig.end(), m) != sig.end()) continue;
      double& d = cache[std::min(l, m) * n + std::max(l, m)];
      if (d < 0.0) d = pair_distance(f[l].curve, f[m].curve);
      r.min_pair_delta = std::min(r.min_pair_delta, d);
    }
  }
  r.L = std::max({2.0 * r.Q, 1.0 / r.min_self_delta, 1.0 / r.min_pair_delta});
  return r;
}

double ddt_h2(const SimState& state, std::size_t lambda, const VelocityOptions& opt) {
  const auto& c = state.family[lambda].curve;
  const auto& g = c.geometry();
  const auto u = velocity_on_boundary(state.family, state.spec, lambda, opt);
  const auto u1 = spectral::derivative(u, 1);
  const auto u2 = spectral::derivative(u, 2);
  const double len = g.length;
  double a = 0.0, b = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    const double k = g.curvature[i];
    a += k * dot(u2[i], g.normal[i]) / (len * len);
    b += k * k * dot(u1[i], g.tangent[i]) / len;
  }
  return (2.0 * a - 3.0 * b) * len / static_cast<double>(c.size());
}

double growth_ratio(double l0, double l1, double dt, double alpha) {
  if (!(dt > 0.0) || !std::isfinite(l0) || !std::isfinite(l1)) return 0.0;
  const double dl = l1 - l0;
  if (std::abs(dl) <= 1e-9 * std::max(std::abs(l0), std::abs(l1))) return 0.0;
  return dl / (dt * std::pow(l0, 3.0 + 2.0 * alpha));
}

// ---------------------------------------------------------------------------------------
// Driver.

void validate(const SimConfig& c) {
  auto fail = [](const std::string& m) { throw ConfigError(m); };
  if (!(c.alpha > 0.0 && c.alpha <= 0.5)) fail("alpha must lie in (0, 1/2]");
  if (!(c.c_alpha > 0.0)) fail("c_alpha must be positive");
  if (c.epsilon && !(*c.epsilon >= 0.0)) fail("epsilon must be non-negative");
  if (c.epsilon && *c.epsilon == 0.0 && !c.allow_unmollified) fail("epsilon = 0 needs allow_unmollified = true");
  if (!(c.chi_floor >= 0.0 && c.chi_floor < 1.0)) fail("chi_floor must lie in [0, 1)");
  if (!(c.cfl > 0.0 && c.cfl <= 1.0)) fail("cfl must lie in (0, 1]");
  if (c.N < 16 || c.N % 2 != 0) fail("N must be even and at least 16");
  if (!(c.t_end >= 0.0)) fail("t_end must be non-negative");
  if (c.output_every == 0) fail("output_every must be positive");
  if (c.ceiling_L && !(*c.ceiling_L > 0.0)) fail("ceiling_L must be positive");
  if (c.dt && !(*c.dt > 0.0)) fail("dt must be positive");
  if (c.patches.empty() && !c.candidate) fail("no patches given");
  for (const auto& p : c.patches)
    if (!(p.strength != 0.0 && std::isfinite(p.strength))) fail("patch strength must be finite and nonzero");
}

PatchFamily build_family(const SimConfig& cfg) {
  std::vector<Patch> patches;
  try {
    if (cfg.candidate && cfg.patches.empty()) {
      patches = candidate_base(cfg.candidate_params, cfg.N);
    } else {
      for (const auto& p : cfg.patches) patches.push_back({make_shape(p.kind, p.params, cfg.N), p.strength});
    }
    if (cfg.doubly_odd || cfg.candidate) return doubly_odd_config(patches);
    return PatchFamily(std::move(patches));
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(std::string("cannot build initial data: ") + e.what());
  }
}

KernelSpec kernel_spec(const SimConfig& cfg, const PatchFamily& family) {
  KernelSpec k;
  k.alpha = cfg.alpha;
  k.c_alpha = cfg.c_alpha;
  k.chi_floor = cfg.chi_floor;
  if (cfg.epsilon) {
    k.epsilon = *cfg.epsilon;
  } else {
    double dmin = kInf;
    for (const auto& p : family.patches()) dmin = std::min(dmin, diameter(p.curve));
    k.epsilon = 0.1 * dmin;
  }
  return k;
}

std::string to_string(RunStatus s) {
  switch (s) {
    case RunStatus::Ok: return "ok";
    case RunStatus::TopologyBreach: return "topology_breach";
    case RunStatus::CeilingHit: return "ceiling_hit";
  }
  return "?";
}

int exit_code(RunStatus s) {
  switch (s) {
    case RunStatus::Ok: return 0;
    case RunStatus::TopologyBreach: return 2;
    case RunStatus::CeilingHit: return 3;
  }
  return 1;
}

namespace {

bool touching_outside_sigma(const SimState& s) {
  const double tol = 10.0 * s.family.max_spacing();
  for (std::size_t l = 0; l < s.family.size(); ++l)
    for (std::size_t m = 0; m < s.family.size(); ++m) {
      if (std::find(s.sigma[l].begin(), s.sigma[l].end(), m) != s.sigma[l].end()) continue;
      if (pair_distance(s.family[l].curve, s.family[m].curve) < tol) return true;
    }
  return false;
}

class Writer {
 public:
  Writer(const RunOutput& out, const PatchFamily& fam) : out_(out) {
    if (out_.directory.empty()) return;
    namespace fs = std::filesystem;
    fs::create_directories(out_.directory);
    if (out_.snapshots) {
      fs::create_directories(fs::path(out_.directory) / "snapshots");
      fs::create_directories(fs::path(out_.directory) / "frames");
    }
    vp_ = viewport_for(fam, 1.5);
    csv_.open(fs::path(out_.directory) / "diagnostics.csv");
    if (!csv_) throw ConfigError("cannot write to " + out_.directory);
    csv_ << "t,Q,W,L,u_inf,min_pair_delta,min_self_delta,growth_ratio";
    for (std::size_t l = 0; l < fam.size(); ++l) csv_ << ",area_" << l << ",h2_" << l;
    csv_ << '\n';
  }

  void record(const DiagnosticsRecord& r, const SimState& s, std::size_t frame) {
    if (out_.directory.empty()) return;
    csv_ << format_double(r.t) << ',' << format_double(r.Q) << ',' << format_double(r.W) << ','
         << format_double(r.L) << ',' << format_double(r.u_inf) << ',' << format_double(r.min_pair_delta) << ','
         << format_double(r.min_self_delta) << ',' << format_double(r.growth_ratio);
    for (std::size_t l = 0; l < r.areas.size(); ++l)
      csv_ << ',' << format_double(r.areas[l]) << ',' << format_double(r.h2[l]);
    csv_ << '\n';
    csv_.flush();
    if (!out_.snapshots) return;
    namespace fs = std::filesystem;
    char name[64];
    for (std::size_t l = 0; l < s.family.size(); ++l) {
      std::snprintf(name, sizeof(name), "frame_%05zu_patch_%zu.json", frame, l);
      auto j = curve_to_json(s.family[l].curve);
      j["t"] = s.t;
      j["strength"] = s.family[l].strength;
      std::ofstream(fs::path(out_.directory) / "snapshots" / name) << j.dump() << '\n';
    }
    std::snprintf(name, sizeof(name), "frame_%05zu.svg", frame);
    std::ofstream(fs::path(out_.directory) / "frames" / name) << svg_frame(s.family, vp_, s.t);
  }

  void summary(const RunResult& r) {
    if (out_.directory.empty()) return;
    nlohmann::json j = {{"status", to_string(r.status)},
                        {"message", r.message},
                        {"steps", r.steps},
                        {"t_final", r.final_state.t},
                        {"separated_initial_data", r.separated},
                        {"experimental", r.experimental},
                        {"epsilon", r.final_state.spec.epsilon},
                        {"initial_L", r.initial_L},
                        {"ceiling_L", r.ceiling},
                        {"max_area_drift", r.max_area_drift},
                        {"fitted_C", r.fitted_C},
                        {"growth_bound_held", r.growth_bound_held}};
    std::ofstream(std::filesystem::path(out_.directory) / "summary.json") << j.dump(2) << '\n';
  }

 private:
  RunOutput out_;
  Viewport vp_;
  std::ofstream csv_;
};

}  // namespace

RunResult run(const SimConfig& cfg, const RunOutput& output, const StepObserver& observer) {
  validate(cfg);
  RunResult res;
  auto family = build_family(cfg);
  const auto spec = kernel_spec(cfg, family);
  res.experimental = spec.epsilon == 0.0;
  try {
    family.validate();
  } catch (const Error& e) {
    throw ConfigError(std::string("initial data rejected: ") + e.what());
  }
  SimState state = make_state(family, spec);
  if (cfg.separate_touching && touching_outside_sigma(state)) {
    const double eps = separation_epsilon(state.family);
    state = make_state(separate_family(state.family, eps, cfg.N), spec);
    res.separated = true;
  }

  StepOptions sopt;
  sopt.cfl = cfg.cfl;
  auto k1 = rhs(state, sopt.velocity);
  auto rec = functionals(state);
  rec.u_inf = sup_norm(k1);
  state.diagnostics = rec;
  res.trajectory.push_back(rec);
  res.initial_L = rec.L;
  res.ceiling = cfg.ceiling_L ? *cfg.ceiling_L : 1e3 * rec.L;
  const auto area0 = rec.areas;

  Writer writer(output, state.family);
  writer.record(rec, state, 0);
  std::size_t frame = 1;
  if (observer) observer(state);

  const double tiny = 1e-12 * std::max(1.0, cfg.t_end);
  while (state.t < cfg.t_end - tiny) {
    double dt = cfl_step(state, k1, cfg.cfl);
    if (cfg.dt) dt = std::min(dt, *cfg.dt);
    dt = std::min(dt, cfg.t_end - state.t);
    SimState next;
    try {
      next = step(state, dt, sopt, &k1);
    } catch (const TopologyBreach& e) {
      res.status = RunStatus::TopologyBreach;
      res.message = e.what();
      break;
    }
    state = std::move(next);
    ++res.steps;
    k1 = rhs(state, sopt.velocity);
    auto r = functionals(state);
    r.u_inf = sup_norm(k1);
    r.growth_ratio = growth_ratio(res.trajectory.back().L, r.L, dt, spec.alpha);
    state.diagnostics = r;
    res.trajectory.push_back(r);
    for (std::size_t l = 0; l < area0.size(); ++l)
      res.max_area_drift = std::max(res.max_area_drift, std::abs(r.areas[l] - area0[l]) / std::abs(area0[l]));
    if (observer) observer(state);
    const bool last = state.t >= cfg.t_end - tiny;
    if (r.L > res.ceiling) {
      res.status = RunStatus::CeilingHit;
      res.message = "L = " + format_double(r.L) + " exceeds the ceiling " + format_double(res.ceiling);
    }
    if (res.steps % cfg.output_every == 0 || last || res.status != RunStatus::Ok) writer.record(r, state, frame++);
    if (res.status != RunStatus::Ok) break;
  }

  // fitted constant over each half of the run; "held" means the second half needs at most
  // twice the first half's constant
  double c_first = 0.0, c_second = 0.0;
  const std::size_t half = res.trajectory.size() / 2;
  for (std::size_t k = 1; k < res.trajectory.size(); ++k) {
    const double g = std::max(0.0, res.trajectory[k].growth_ratio);
    (k <= half ? c_first : c_second) = std::max(k <= half ? c_first : c_second, g);
  }
  res.fitted_C = std::max(c_first, c_second);
  res.growth_bound_held = c_second <= 2.0 * c_first || c_second == 0.0;
  res.final_state = state;
  writer.summary(res);
  return res;
}

std::vector<EpsilonLevel> refine_epsilon(const SimConfig& cfg, std::size_t levels) {
  validate(cfg);
  const double base = kernel_spec(cfg, build_family(cfg)).epsilon;
  if (!(base > 0.0)) throw ConfigError("refine-epsilon needs a positive epsilon");
  std::vector<EpsilonLevel> out;
  std::vector<PatchFamily> finals;
  for (std::size_t i = 0; i < levels; ++i) {
    SimConfig c = cfg;
    c.epsilon = base / std::pow(2.0, static_cast<double>(i));
    const auto r = run(c);
    out.push_back({*c.epsilon, r.status, r.message, r.steps, std::nan("")});
    finals.push_back(r.final_state.family);
  }
  for (std::size_t i = 0; i + 1 < levels; ++i) {
    if (out[i].status != RunStatus::Ok || out[i + 1].status != RunStatus::Ok) continue;
    double d = 0.0;
    for (std::size_t l = 0; l < finals[i].size(); ++l)
      d = std::max(d, frechet_distance(finals[i][l].curve, finals[i + 1][l].curve, 2));
    out[i].frechet_to_next = d;
  }
  return out;
}

}  // namespace gsqg
