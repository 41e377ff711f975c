#include "gsqg/velocity.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>
#include <gsl/gsl_sf_zeta.h>

#include <algorithm>
#include <cmath>
#include <map>

#include "gsqg/errors.hpp"
#include "gsqg/metrics.hpp"
#include "gsqg/simd/kernels.hpp"
#include "gsqg/spectral.hpp"

namespace gsqg {
namespace {

struct Sources {
  std::vector<double> x, y, vx, vy;
  simd::SourceView view() const { return {x.data(), y.data(), vx.data(), vy.data(), x.size()}; }
};

Sources make_sources(const std::vector<Vec2>& pos, const std::vector<Vec2>& deriv, double weight) {
  Sources s;
  const std::size_t n = pos.size();
  s.x.resize(n);
  s.y.resize(n);
  s.vx.resize(n);
  s.vy.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    s.x[j] = pos[j].x;
    s.y[j] = pos[j].y;
    s.vx[j] = weight * deriv[j].x;
    s.vy[j] = weight * deriv[j].y;
  }
  return s;
}

// Quadrature sources of one boundary: oint f dz ~ sum_j f(z_j) z'(xi_j) / M, with the
// velocity prefactor -theta folded into the weights.
class CurveSources {
 public:
  CurveSources(const ClosedCurve& c, double strength) : curve_(&c), strength_(strength) {
    x_.resize(c.size());
    y_.resize(c.size());
    for (std::size_t j = 0; j < c.size(); ++j) {
      x_[j] = c[j].x;
      y_[j] = c[j].y;
    }
    reach_ = 0.5 * max_chord(c);
  }

  const ClosedCurve& curve() const { return *curve_; }
  double strength() const { return strength_; }
  double spacing() const { return curve_->spacing(); }

  const Sources& level(std::size_t m) {
    auto it = levels_.find(m);
    if (it != levels_.end()) return it->second;
    const std::size_t n = curve_->size() * m;
    auto pos = spectral::upsample(curve_->nodes(), n);
    auto d1 = spectral::derivative(pos, 1);
    return levels_.emplace(m, make_sources(pos, d1, -strength_ / static_cast<double>(n))).first->second;
  }

  const Sources& staggered() {
    if (!staggered_) {
      auto pos = spectral::shifted(curve_->nodes(), 0.5);
      auto d1 = spectral::derivative(pos, 1);
      staggered_ = std::make_unique<Sources>(make_sources(pos, d1, -strength_ / static_cast<double>(pos.size())));
    }
    return *staggered_;
  }

  const std::vector<Vec2>& derivative() {
    if (d1_.empty()) d1_ = spectral::derivative(curve_->nodes(), 1);
    return d1_;
  }

  // Lower estimate of the distance from x to the curve.
  double distance(Vec2 x) const {
    const auto r = simd::nearest(x, x_.data(), y_.data(), x_.size());
    return std::max(std::sqrt(r.d2) - reach_, 0.0);
  }

 private:
  const ClosedCurve* curve_;
  double strength_;
  std::vector<double> x_, y_;
  double reach_ = 0.0;
  std::map<std::size_t, Sources> levels_;
  std::unique_ptr<Sources> staggered_;
  std::vector<Vec2> d1_;
};

std::size_t pick_level(double h, double d, const KernelSpec& k, const VelocityOptions& o) {
  double scale, cells;
  if (k.epsilon > 0.0 && d < k.epsilon) {
    scale = (1.0 - k.chi_floor) * k.epsilon;
    cells = o.cells_per_ramp;
  } else {
    scale = d;
    cells = o.cells_per_distance;
  }
  std::size_t m = 1;
  while (m < o.max_refine && h / static_cast<double>(m) * cells > scale) m *= 2;
  return m;
}

enum class SumKind { Velocity, Gradient };

// Adds the contribution of one source boundary to every target, bucketing targets by the
// upsampling level they need. `self` marks targets that are this boundary's own nodes.
void accumulate(CurveSources& src, const KernelSpec& spec, const VelocityOptions& opt,
                std::span<const Vec2> targets, std::span<const Vec2> dirs, bool self, SumKind kind,
                std::vector<Vec2>& out) {
  const auto kp = spec.params();
  const std::size_t nt = targets.size();
  if (self && spec.epsilon == 0.0) {
    const Sources& s = src.staggered();
    const auto view = s.view();
#pragma omp parallel for schedule(static)
    for (std::size_t i = 0; i < nt; ++i) {
      out[i] += kind == SumKind::Velocity ? simd::velocity_sum(kp, targets[i], view)
                                          : simd::gradient_sum(kp, targets[i], dirs[i], view);
    }
    if (kind == SumKind::Velocity && opt.zeta_correction) {
      // midpoint sum = integral + 2 zeta(2a, 1/2) G(0) H^{1-2a} + O(H^{3-2a})
      const double a2 = 2.0 * spec.alpha;
      const double hz = (std::pow(2.0, a2) - 1.0) * gsl_sf_zeta(a2);
      const double H = 1.0 / static_cast<double>(src.curve().size());
      const double corr = src.strength() * 2.0 * hz * spec.c_alpha / a2 * std::pow(H, 1.0 - a2);
      // local speed in place of the length, so non-uniform RK stages are handled too
      const auto& d1 = src.derivative();
      for (std::size_t i = 0; i < nt; ++i) out[i] += (corr * std::pow(norm(d1[i]), -a2)) * d1[i];
    }
    return;
  }
  const double h = src.spacing();
  std::vector<std::size_t> level(nt);
  std::map<std::size_t, std::vector<std::size_t>> buckets;
  for (std::size_t i = 0; i < nt; ++i) {
    const double d = self ? 0.0 : src.distance(targets[i]);
    level[i] = pick_level(h, d, spec, opt);
    buckets[level[i]].push_back(i);
  }
  for (const auto& [m, idx] : buckets) {
    const auto view = src.level(m).view();
    const std::size_t nb = idx.size();
#pragma omp parallel for schedule(static)
    for (std::size_t b = 0; b < nb; ++b) {
      const std::size_t i = idx[b];
      out[i] += kind == SumKind::Velocity ? simd::velocity_sum(kp, targets[i], view)
                                          : simd::gradient_sum(kp, targets[i], dirs[i], view);
    }
  }
}

}  // namespace

double kernel_eval(const KernelSpec& spec, Vec2 x) {
  spec.validate();
  const double r = norm(x);
  if (r == 0.0 && spec.epsilon == 0.0) throw SingularEvaluation("unmollified kernel at the origin");
  return kernel_value(spec, r);
}

std::vector<Vec2> contour_velocity(const PatchFamily& family, const KernelSpec& spec, std::span<const Vec2> xs,
                                   const VelocityOptions& opt) {
  spec.validate();
  std::vector<Vec2> out(xs.size());
  for (const auto& p : family.patches()) {
    CurveSources src(p.curve, p.strength);
    if (spec.epsilon == 0.0) {
      for (const auto& x : xs) {
        if (src.distance(x) <= 2.0 * src.spacing() &&
            closest_on_polyline(x, p.curve).distance <= src.spacing())
          throw TooCloseToBoundary("target within one grid spacing of a boundary");
      }
    }
    accumulate(src, spec, opt, xs, {}, false, SumKind::Velocity, out);
  }
  return out;
}

Vec2 contour_velocity(const PatchFamily& family, const KernelSpec& spec, Vec2 x, const VelocityOptions& opt) {
  return contour_velocity(family, spec, std::span<const Vec2>(&x, 1), opt)[0];
}

std::vector<Vec2> velocity_on_boundary(const PatchFamily& family, const KernelSpec& spec, std::size_t lambda,
                                       const VelocityOptions& opt) {
  spec.validate();
  auto targets = family[lambda].curve.nodes();
  std::vector<Vec2> out(targets.size());
  for (std::size_t mu = 0; mu < family.size(); ++mu) {
    CurveSources src(family[mu].curve, family[mu].strength);
    accumulate(src, spec, opt, targets, {}, mu == lambda, SumKind::Velocity, out);
  }
  return out;
}

std::vector<std::vector<Vec2>> velocity_on_boundaries(const PatchFamily& family, const KernelSpec& spec,
                                                      const VelocityOptions& opt) {
  spec.validate();
  std::vector<std::vector<Vec2>> out(family.size());
  for (std::size_t l = 0; l < family.size(); ++l) out[l].assign(family[l].curve.size(), Vec2{});
  // source boundaries are prepared once and reused for every target boundary
  for (std::size_t mu = 0; mu < family.size(); ++mu) {
    CurveSources src(family[mu].curve, family[mu].strength);
    for (std::size_t l = 0; l < family.size(); ++l)
      accumulate(src, spec, opt, family[l].curve.nodes(), {}, mu == l, SumKind::Velocity, out[l]);
  }
  return out;
}

BoundaryVelocityEstimate velocity_on_boundary_with_error(const PatchFamily& family, const KernelSpec& spec,
                                                         std::size_t lambda, const VelocityOptions& opt) {
  BoundaryVelocityEstimate est;
  est.values = velocity_on_boundary(family, spec, lambda, opt);
  std::vector<Patch> coarse;
  for (const auto& p : family.patches()) {
    auto half = p.curve.size() / 2;
    if (half < 16 || half % 2 != 0) throw InvalidArgument("boundary too coarse for an error estimate");
    coarse.push_back({prepare(p.curve, half), p.strength});
  }
  auto low = velocity_on_boundary(PatchFamily(std::move(coarse)), spec, lambda, opt);
  est.error = 0.0;
  for (std::size_t k = 0; k < low.size(); ++k) est.error = std::max(est.error, norm(low[k] - est.values[2 * k]));
  return est;
}

TangentialDerivative tangential_derivative(const PatchFamily& family, const KernelSpec& spec, std::size_t lambda,
                                           const VelocityOptions& opt) {
  spec.validate();
  const auto& curve = family[lambda].curve;
  const auto& g = curve.geometry();
  auto targets = curve.nodes();
  TangentialDerivative out;
  out.values.assign(targets.size(), Vec2{});
  for (std::size_t mu = 0; mu < family.size(); ++mu) {
    CurveSources src(family[mu].curve, family[mu].strength);
    accumulate(src, spec, opt, targets, g.tangent, mu == lambda, SumKind::Gradient, out.values);
  }
  out.tangential.resize(targets.size());
  out.normal.resize(targets.size());
  for (std::size_t i = 0; i < targets.size(); ++i) {
    out.tangential[i] = dot(out.values[i], g.tangent[i]);
    out.normal[i] = dot(out.values[i], g.normal[i]);
  }
  return out;
}

// ---------------------------------------------------------------------------------------
// Area oracle.

namespace {

struct StarMap {
  Vec2 center;
  std::map<std::size_t, std::pair<std::vector<Vec2>, std::vector<Vec2>>> levels;  // points, d/dxi
  const ClosedCurve* curve;

  const std::pair<std::vector<Vec2>, std::vector<Vec2>>& level(std::size_t m) {
    auto it = levels.find(m);
    if (it != levels.end()) return it->second;
    auto pos = spectral::upsample(curve->nodes(), m);
    auto d1 = spectral::derivative(pos, 1);
    return levels.emplace(m, std::make_pair(std::move(pos), std::move(d1))).first->second;
  }
};

struct AreaIntegrand {
  StarMap* map;
  const KernelSpec* spec;
  Vec2 x;
  double exclusion;  // radius of the disk around x where the odd integrand is cut out
  std::size_t m0, mmax;
  int component;

  // Integrand grad^perp K_eps(x - y) times the smooth cut-out weight.
  Vec2 field(Vec2 y) const {
    const Vec2 d = x - y;
    const double r = norm(d);
    if (r == 0.0) return {};
    double w = 1.0;
    if (exclusion > 0.0) {
      w = chi(r / exclusion, 0.5);
      if (w == 0.0) return {};
    }
    return (w * kernel_radial_derivative(*spec, r) / r) * perp(d);
  }

  double slice(double rho) {
    double prev = NAN;
    for (std::size_t m = m0;; m *= 2) {
      const auto& [pos, d1] = map->level(m);
      double s = 0.0;
      for (std::size_t j = 0; j < m; ++j) {
        const Vec2 rel = pos[j] - map->center;
        const double jac = rho * cross(rel, d1[j]);
        const Vec2 f = field(map->center + rho * rel);
        s += (component == 0 ? f.x : f.y) * jac;
      }
      s /= static_cast<double>(m);
      if (!std::isnan(prev) && (std::abs(s - prev) <= 1e-13 * (1.0 + std::abs(s)) || m >= mmax)) return s;
      prev = s;
    }
  }
};

double slice_trampoline(double rho, void* p) { return static_cast<AreaIntegrand*>(p)->slice(rho); }

}  // namespace

Vec2 area_velocity(const PatchFamily& family, const KernelSpec& spec, Vec2 x, std::size_t resolution) {
  spec.validate();
  gsl_set_error_handler_off();
  Vec2 total{};
  gsl_integration_workspace* ws = gsl_integration_workspace_alloc(4000);
  for (const auto& p : family.patches()) {
    const auto& c = p.curve;
    const std::size_t n = c.size();
    StarMap map{{}, {}, &c};
    // area centroid
    auto d1 = spectral::derivative(c.nodes(), 1);
    double a = 0.0, cx = 0.0, cy = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const Vec2 z = c[j], dz = d1[j];
      a += 0.5 * cross(z, dz);
      cx += 0.5 * z.x * z.x * dz.y;
      cy -= 0.5 * z.y * z.y * dz.x;
    }
    map.center = {cx / a, cy / a};
    std::size_t m0 = n;
    while (m0 < resolution) m0 *= 2;
    {
      const auto& [pos, dd] = map.level(4 * m0);
      for (std::size_t j = 0; j < pos.size(); ++j)
        if (cross(pos[j] - map.center, dd[j]) <= 0.0) throw NotStarShaped("patch is not star-shaped about its centroid");
    }
    const double d = closest_on_polyline(x, c).distance;
    if (d < 1e-8) throw TooCloseToBoundary("area oracle target on a boundary");
    AreaIntegrand ig{&map, &spec, x, 0.9 * d, m0, n * 1024, 0};
    Vec2 part{};
    for (int comp = 0; comp < 2; ++comp) {
      ig.component = comp;
      gsl_function f{&slice_trampoline, &ig};
      double result = 0.0, err = 0.0;
      gsl_integration_qag(&f, 0.0, 1.0, 1e-13, 1e-11, 4000, GSL_INTEG_GAUSS21, ws, &result, &err);
      (comp == 0 ? part.x : part.y) = result;
    }
    total += p.strength * part;
  }
  gsl_integration_workspace_free(ws);
  return total;
}

}  // namespace gsqg
