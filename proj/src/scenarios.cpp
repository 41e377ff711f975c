#include "gsqg/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "gsqg/errors.hpp"
#include "gsqg/kernel.hpp"
#include "gsqg/metrics.hpp"
#include "gsqg/spectral.hpp"

namespace gsqg {

using std::numbers::pi;

std::string to_string(ShapeKind k) {
  switch (k) {
    case ShapeKind::Circle: return "circle";
    case ShapeKind::Ellipse: return "ellipse";
    case ShapeKind::Fourier: return "fourier";
  }
  return "?";
}

ShapeKind shape_kind_from_string(const std::string& s) {
  if (s == "circle") return ShapeKind::Circle;
  if (s == "ellipse") return ShapeKind::Ellipse;
  if (s == "fourier") return ShapeKind::Fourier;
  throw InvalidArgument("unknown shape kind '" + s + "'");
}

namespace {

double polar_radius(const ShapeParams& p, double th) {
  double r = p.r0;
  for (std::size_t k = 0; k < p.cos_coef.size(); ++k) r += p.cos_coef[k] * std::cos(static_cast<double>(k + 1) * th);
  for (std::size_t k = 0; k < p.sin_coef.size(); ++k) r += p.sin_coef[k] * std::sin(static_cast<double>(k + 1) * th);
  return r;
}

// Constant-speed curve whose node 0 sits at parameter fraction `phase` of the input.
ClosedCurve prepare_with_phase(const std::vector<Vec2>& dense, std::size_t n, double phase) {
  const double frac = phase - std::floor(phase);
  std::vector<Vec2> start = frac == 0.0 ? dense : spectral::shifted(dense, frac * static_cast<double>(dense.size()));
  return prepare(ClosedCurve(std::move(start)), n);
}

}  // namespace

ClosedCurve make_shape(ShapeKind kind, const ShapeParams& p, std::size_t n) {
  if (n < 16 || n % 2 != 0) throw DegenerateCurve("node count must be even and at least 16");
  const std::size_t m = std::max<std::size_t>(8 * n, 1024);
  std::vector<Vec2> dense(m);
  switch (kind) {
    case ShapeKind::Circle: {
      if (!(p.radius > 0.0)) throw InvalidArgument("circle radius must be positive");
      std::vector<Vec2> nodes(n);
      for (std::size_t j = 0; j < n; ++j) {
        const double th = 2.0 * pi * (static_cast<double>(j) / static_cast<double>(n) + p.phase);
        nodes[j] = p.center + p.radius * Vec2{std::cos(th), std::sin(th)};
      }
      return geometry_fields(ClosedCurve(std::move(nodes), ParamKind::ConstantSpeed));
    }
    case ShapeKind::Ellipse: {
      if (!(p.a > 0.0 && p.b > 0.0)) throw InvalidArgument("ellipse semi-axes must be positive");
      const double c = std::cos(p.rotation), s = std::sin(p.rotation);
      for (std::size_t j = 0; j < m; ++j) {
        const double th = 2.0 * pi * static_cast<double>(j) / static_cast<double>(m);
        const Vec2 q{p.a * std::cos(th), p.b * std::sin(th)};
        dense[j] = p.center + Vec2{c * q.x - s * q.y, s * q.x + c * q.y};
      }
      break;
    }
    case ShapeKind::Fourier: {
      for (std::size_t j = 0; j < m; ++j) {
        const double th = 2.0 * pi * static_cast<double>(j) / static_cast<double>(m);
        const double r = polar_radius(p, th);
        if (!(r > 0.0)) throw NotSimple("polar radius not positive at theta = " + std::to_string(th));
        dense[j] = p.center + r * Vec2{std::cos(th), std::sin(th)};
      }
      ClosedCurve probe(dense);
      if (!is_simple(probe)) throw NotSimple("fourier coefficients give a self-intersecting curve");
      break;
    }
  }
  auto out = prepare_with_phase(dense, n, p.phase);
  if (!is_positively_oriented(out)) throw NotSimple("constructed curve is not positively oriented");
  if (kind == ShapeKind::Fourier && !is_simple(out)) throw NotSimple("resampled curve self-intersects");
  return out;
}

ShapeParams random_polar_params(std::mt19937_64& rng, int kmax, double amp) {
  ShapeParams p;
  p.r0 = 1.0;
  for (int k = 1; k <= kmax; ++k) {
    const double bound = amp / static_cast<double>(k * k);
    std::uniform_real_distribution<double> u(-bound, bound);
    p.cos_coef.push_back(u(rng));
    p.sin_coef.push_back(u(rng));
  }
  return p;
}

// ---------------------------------------------------------------------------------------
// Inward perturbation.

namespace {

// Bump supported on [-1, 1], built from the cutoff ramp.
double bump(double u) {
  const double a = std::abs(u);
  return a >= 1.0 ? 0.0 : 1.0 - chi(a, 0.0);
}

// Partition function of equally spaced bumps, unit spacing: phi(u) for |u| < 1.
double partition(double u) {
  const double b = bump(u);
  if (b == 0.0) return 0.0;
  return b / (bump(u - 1.0) + b + bump(u + 1.0));
}

struct PartitionNorms {
  double d1_sup, d2_l2;  // sup |phi'|, ||phi''||_{L2} in the unit-spacing variable
};

const PartitionNorms& partition_norms() {
  static const PartitionNorms norms = [] {
    const int m = 40000;
    const double du = 2.0 / m, step = 1e-4;
    PartitionNorms r{0.0, 0.0};
    for (int i = 0; i <= m; ++i) {
      const double u = -1.0 + du * i;
      const double fp = partition(u + step), f0 = partition(u), fm = partition(u - step);
      r.d1_sup = std::max(r.d1_sup, std::abs(fp - fm) / (2.0 * step));
      const double d2 = (fp - 2.0 * f0 + fm) / (step * step);
      r.d2_l2 += d2 * d2 * du;
    }
    r.d2_l2 = std::sqrt(r.d2_l2);
    return r;
  }();
  return norms;
}

const ClosedCurve& require_geometry(const ClosedCurve& c, ClosedCurve& holder) {
  if (c.has_geometry()) return c;
  holder = geometry_fields(c);
  return holder;
}

}  // namespace

PerturbationBound perturbation_bound(const ClosedCurve& curve_in, double h, double c) {
  ClosedCurve holder;
  const ClosedCurve& curve = require_geometry(curve_in, holder);
  if (!(c > 0.0 && c <= 1.0)) throw InvalidArgument("factor c must lie in (0, 1]");
  PerturbationBound b{};
  b.c1half = c1beta_seminorm(curve, 0.5);
  const double hmax = 1.0 / (b.c1half * b.c1half);
  if (!(h > 0.0) || h > hmax * (1.0 + 1e-12)) throw InvalidWindow("window outside (0, |gamma|_{C^{1,1/2}}^{-2}]");
  const double len = curve.length();
  b.delta_h = self_distance(curve, std::min(h, 0.5 * len));
  const double c2 = b.c1half * b.c1half;
  b.pieces = static_cast<std::size_t>(std::ceil(16.0 * len * c2 - 1e-12));
  const double d = len / static_cast<double>(b.pieces);
  const auto& pn = partition_norms();
  b.M = std::max(pn.d1_sup / (d * c2), pn.d2_l2 * std::pow(d, -1.5) / (c2 * b.c1half));
  b.eps0 = std::min(c * b.delta_h / 10.0, 1.0 / (17.0 * b.M * len * c2 * c2));
  return b;
}

ClosedCurve perturb_inward(const ClosedCurve& curve_in, double h, double c, double eps) {
  ClosedCurve holder;
  const ClosedCurve& curve = require_geometry(curve_in, holder);
  const auto b = perturbation_bound(curve, h, c);
  if (!(eps > 0.0)) throw InvalidArgument("perturbation magnitude must be positive");
  if (eps > b.eps0 * (1.0 + 1e-12))
    throw PerturbationTooLarge("eps = " + std::to_string(eps) + " exceeds eps0 = " + std::to_string(b.eps0));
  const std::size_t n = curve.size(), k = b.pieces;
  const double len = curve.length(), d = len / static_cast<double>(k);
  spectral::Interpolant z(curve.nodes());
  std::vector<Vec2> normal(k);
  for (std::size_t i = 0; i < k; ++i) {
    const Vec2 t = z.point(static_cast<double>(i) / static_cast<double>(k), 1);
    normal[i] = perp(t / norm(t));
  }
  std::vector<Vec2> out(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double s = len * static_cast<double>(j) / static_cast<double>(n);
    const double u = s / d;
    const auto lo = static_cast<std::size_t>(std::floor(u));
    Vec2 shift{};
    for (std::size_t q = lo; q <= lo + 1; ++q) {
      const double w = partition(u - static_cast<double>(q));
      if (w > 0.0) shift += w * normal[q % k];
    }
    out[j] = curve[j] + eps * shift;
  }
  return ClosedCurve(std::move(out));
}

PerturbationCheck verify_perturbation(const ClosedCurve& in, const ClosedCurve& out, double h, double c,
                                      double eps) {
  PerturbationCheck r{};
  r.eps = eps;
  r.c = c;
  r.frechet = frechet_distance(out, in);
  r.inside = true;
  for (const auto& p : out.nodes())
    if (winding_number(in, p) != 1) r.inside = false;
  r.separation = pair_distance(out, in);
  r.h2_ratio = h2_seminorm_general(out) / h2_seminorm(in);
  // the output is not constant-speed; Delta_{ch} on its own arclength
  const double dout = self_distance(out, std::min(c * h, 0.5 * out.length()));
  r.delta_ratio = dout / self_distance(in, h);
  return r;
}

// ---------------------------------------------------------------------------------------
// Family separation.

std::vector<std::size_t> containment_order(const PatchFamily& family) {
  const std::size_t n = family.size();
  std::vector<std::size_t> inside_count(n, 0);  // how many curves each region contains
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const auto rel = classify_relation(family[i].curve, family[j].curve);
      if (rel.kind == RelationKind::Nested1In2) ++inside_count[j];
      if (rel.kind == RelationKind::Nested2In1) ++inside_count[i];
    }
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return inside_count[a] < inside_count[b]; });
  return order;
}

namespace {

double family_q(const PatchFamily& family) {
  double q = 0.0;
  for (const auto& p : family.patches()) {
    const double h2 = h2_seminorm(p.curve);
    q += std::abs(p.strength) * h2 * h2;
  }
  return q / family.min_abs_strength();
}

double recipe_window(const ClosedCurve& c, double q) {
  const double c1 = c1beta_seminorm(c, 0.5);
  return std::min(1.0 / q, 1.0 / (c1 * c1));
}

}  // namespace

double separation_epsilon(const PatchFamily& family, double c) {
  const double q = family_q(family);
  const auto order = containment_order(family);
  double eps = std::numeric_limits<double>::infinity();
  double scale = 1.0;
  for (std::size_t idx : order) {
    const auto& curve = family[idx].curve;
    const auto b = perturbation_bound(curve, recipe_window(curve, q), c);
    eps = std::min(eps, 0.5 * b.eps0 / scale);
    scale /= 5.0;
  }
  return eps;
}

PatchFamily separate_family(const PatchFamily& family, double eps, std::size_t n, double c) {
  const double q = family_q(family);
  const auto order = containment_order(family);
  std::vector<Patch> out(family.patches());
  double e = eps;
  for (std::size_t idx : order) {
    const auto& curve = family[idx].curve;
    out[idx].curve = prepare(perturb_inward(curve, recipe_window(curve, q), c, e), n);
    e /= 5.0;
  }
  return PatchFamily(std::move(out));
}

// ---------------------------------------------------------------------------------------
// Reflections.

ClosedCurve reflect(const ClosedCurve& curve, Axis axis) {
  const std::size_t n = curve.size();
  std::vector<Vec2> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 p = curve[(n - i) % n];
    out[i] = axis == Axis::X1 ? Vec2{p.x, -p.y} : Vec2{-p.x, p.y};
  }
  ClosedCurve r(std::move(out), curve.param_kind());
  return curve.has_geometry() ? geometry_fields(r) : r;
}

PatchFamily doubly_odd_config(const std::vector<Patch>& base) {
  std::vector<Patch> out(base);
  for (const auto& p : base) {
    for (const auto& q : p.curve.nodes())
      if (q.y < 0.0) throw OutOfHalfPlane("base curve dips below the x1-axis");
    out.push_back({reflect(p.curve, Axis::X1), -p.strength});
  }
  PatchFamily fam(std::move(out));
  std::vector<std::size_t> partner(fam.size());
  for (std::size_t k = 0; k < base.size(); ++k) {
    partner[k] = k + base.size();
    partner[k + base.size()] = k;
  }
  const double err = mirror_error(fam, Axis::X1, partner);
  if (!(err <= 1e-10)) throw InvalidArgument("reflected family fails the symmetry check");
  return fam;
}

std::vector<Patch> candidate_base(const CandidateParams& p, std::size_t n) {
  if (!(p.radius > 0.0 && p.axis_gap >= 0.0 && p.mid_gap >= 0.0))
    throw InvalidArgument("candidate needs radius > 0 and non-negative gaps");
  ShapeParams sp;
  sp.radius = p.radius;
  sp.center = {p.mid_gap + p.radius, p.axis_gap + p.radius};
  auto right = make_shape(ShapeKind::Circle, sp, n);
  return {{right, p.strength}, {reflect(right, Axis::X2), -p.strength}};
}

double mirror_error(const PatchFamily& family, Axis axis, const std::vector<std::size_t>& partner) {
  if (partner.size() != family.size()) throw InvalidArgument("partner table size mismatch");
  double err = 0.0;
  for (std::size_t k = 0; k < family.size(); ++k) {
    const auto& a = family[k];
    const auto& b = family[partner[k]];
    if (a.curve.size() != b.curve.size() || a.strength != -b.strength)
      return std::numeric_limits<double>::infinity();
    const auto img = reflect(b.curve, axis);
    for (std::size_t i = 0; i < a.curve.size(); ++i) err = std::max(err, dist(a.curve[i], img[i]));
  }
  return err;
}

}  // namespace gsqg
