#include "gsqg/curve.hpp"

#include <gsl/gsl_integration.h>
#include <gsl/gsl_spline.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "gsqg/errors.hpp"
#include "gsqg/spectral.hpp"

namespace gsqg {

std::string to_string(ParamKind k) {
  return k == ParamKind::ConstantSpeed ? "constant_speed" : "general";
}

ParamKind param_kind_from_string(const std::string& s) {
  if (s == "constant_speed") return ParamKind::ConstantSpeed;
  if (s == "general") return ParamKind::General;
  throw InvalidArgument("unknown param_kind '" + s + "'");
}

ClosedCurve::ClosedCurve(std::vector<Vec2> nodes, ParamKind kind) : nodes_(std::move(nodes)), kind_(kind) {
  const std::size_t n = nodes_.size();
  if (n < 16 || n % 2 != 0)
    throw DegenerateCurve("node count must be even and at least 16, got " + std::to_string(n));
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 a = nodes_[i], b = nodes_[(i + 1) % n];
    if (!std::isfinite(a.x) || !std::isfinite(a.y)) throw DegenerateCurve("non-finite node");
    if (a == b) throw DegenerateCurve("repeated consecutive node at index " + std::to_string(i));
  }
}

const CurveGeometry& ClosedCurve::geometry() const {
  if (!geom_) throw WrongParametrization("geometry fields not filled");
  return *geom_;
}

double ClosedCurve::length() const {
  if (geom_) return geom_->length;
  auto d1 = spectral::derivative(nodes_, 1);
  double s = 0.0;
  for (const auto& v : d1) s += norm(v);
  return s / static_cast<double>(size());
}

namespace {

double polyline_length(std::span<const Vec2> p) {
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) s += dist(p[i], p[(i + 1) % p.size()]);
  return s;
}

double node_diameter(std::span<const Vec2> p) {
  double d = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = i + 1; j < p.size(); ++j) d = std::max(d, dist(p[i], p[j]));
  return d;
}

// Coefficients in symmetric order k = -K..K, ready for recurrence evaluation.
struct SymmetricSeries {
  long kmax = 0;
  std::vector<spectral::cplx> c;  // index k + kmax

  explicit SymmetricSeries(std::span<const spectral::cplx> fft) {
    const std::size_t n = fft.size();
    kmax = static_cast<long>(n / 2);
    c.assign(2 * n + 1, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      const long k = spectral::wavenumber(j, n);
      if (j == n / 2) {
        c[static_cast<std::size_t>(k + kmax)] += 0.5 * fft[j];
        c[static_cast<std::size_t>(-k + kmax)] += 0.5 * fft[j];
      } else {
        c[static_cast<std::size_t>(k + kmax)] += fft[j];
      }
    }
  }

  spectral::cplx eval(double xi) const {
    const double w = 2.0 * std::numbers::pi * xi;
    const spectral::cplx step = std::polar(1.0, w);
    spectral::cplx e = std::polar(1.0, -w * static_cast<double>(kmax));
    spectral::cplx acc = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) {
      acc += c[i] * e;
      e *= step;
    }
    return acc;
  }
};

std::vector<Vec2> resample_spectral(std::span<const Vec2> p, std::size_t n) {
  const std::size_t m = p.size();
  const std::size_t fine = 2 * m;
  auto up = spectral::upsample(p, fine);
  auto d1 = spectral::derivative(up, 1);
  std::vector<double> speed(fine);
  for (std::size_t j = 0; j < fine; ++j) speed[j] = norm(d1[j]);
  auto sc = spectral::forward(std::vector<spectral::cplx>(speed.begin(), speed.end()));
  const double total = sc[0].real();

  // antiderivative of the periodic part, sampled on the fine grid for initial guesses
  std::vector<spectral::cplx> anti(fine, 0.0);
  for (std::size_t j = 1; j < fine; ++j) {
    if (j == fine / 2) continue;
    const double k = static_cast<double>(spectral::wavenumber(j, fine));
    anti[j] = sc[j] / spectral::cplx(0.0, 2.0 * std::numbers::pi * k);
  }
  SymmetricSeries speed_series(sc);
  SymmetricSeries anti_series(anti);
  const double anti0 = anti_series.eval(0.0).real();
  auto arclen = [&](double xi) { return total * xi + anti_series.eval(xi).real() - anti0; };

  auto grid = spectral::inverse(anti);
  std::vector<double> cum(fine + 1);
  for (std::size_t j = 0; j < fine; ++j)
    cum[j] = total * static_cast<double>(j) / static_cast<double>(fine) + grid[j].real() - anti0;
  cum[fine] = total;

  SymmetricSeries curve_series(spectral::forward(spectral::to_complex(p)));
  std::vector<Vec2> out(n);
  std::size_t seg = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double target = total * static_cast<double>(i) / static_cast<double>(n);
    while (seg + 1 < fine && cum[seg + 1] <= target) ++seg;
    double lo = static_cast<double>(seg) / static_cast<double>(fine);
    double hi = static_cast<double>(seg + 1) / static_cast<double>(fine);
    double xi = lo + (hi - lo) * (target - cum[seg]) / (cum[seg + 1] - cum[seg]);
    for (int it = 0; it < 30; ++it) {
      const double f = arclen(xi) - target;
      if (f == 0.0) break;
      const double fp = speed_series.eval(xi).real();
      double next = xi - f / fp;
      if (!(next >= lo && next <= hi)) next = 0.5 * (lo + hi);
      if (f > 0.0) hi = std::min(hi, xi); else lo = std::max(lo, xi);
      const bool done = std::abs(next - xi) < 1e-15;
      xi = next;
      if (done) break;
    }
    if (i == 0) xi = 0.0;
    const auto z = curve_series.eval(xi);
    out[i] = {z.real(), z.imag()};
  }
  return out;
}

std::vector<Vec2> resample_spline(std::span<const Vec2> p, std::size_t n) {
  const std::size_t m = p.size();
  std::vector<double> tau(m + 1), xs(m + 1), ys(m + 1);
  tau[0] = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    xs[j] = p[j].x;
    ys[j] = p[j].y;
    tau[j + 1] = tau[j] + dist(p[j], p[(j + 1) % m]);
  }
  xs[m] = p[0].x;
  ys[m] = p[0].y;

  gsl_interp_accel* acc = gsl_interp_accel_alloc();
  gsl_spline* sx = gsl_spline_alloc(gsl_interp_cspline_periodic, m + 1);
  gsl_spline* sy = gsl_spline_alloc(gsl_interp_cspline_periodic, m + 1);
  gsl_spline_init(sx, tau.data(), xs.data(), m + 1);
  gsl_spline_init(sy, tau.data(), ys.data(), m + 1);

  gsl_integration_glfixed_table* gl = gsl_integration_glfixed_table_alloc(8);
  auto speed = [&](double t) {
    return std::hypot(gsl_spline_eval_deriv(sx, t, acc), gsl_spline_eval_deriv(sy, t, acc));
  };
  auto seg_length = [&](double a, double b) {
    double s = 0.0;
    for (std::size_t q = 0; q < 8; ++q) {
      double xq, wq;
      gsl_integration_glfixed_point(a, b, q, &xq, &wq, gl);
      s += wq * speed(xq);
    }
    return s;
  };
  std::vector<double> cum(m + 1, 0.0);
  for (std::size_t j = 0; j < m; ++j) cum[j + 1] = cum[j] + seg_length(tau[j], tau[j + 1]);
  const double total = cum[m];

  std::vector<Vec2> out(n);
  std::size_t seg = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double target = total * static_cast<double>(i) / static_cast<double>(n);
    while (seg + 1 < m && cum[seg + 1] <= target) ++seg;
    double lo = tau[seg], hi = tau[seg + 1];
    double t = lo + (hi - lo) * (target - cum[seg]) / (cum[seg + 1] - cum[seg]);
    for (int it = 0; it < 40; ++it) {
      const double f = cum[seg] + seg_length(tau[seg], t) - target;
      double next = t - f / speed(t);
      if (!(next >= lo && next <= hi)) next = 0.5 * (lo + hi);
      if (f > 0.0) hi = t; else lo = t;
      const bool done = std::abs(next - t) < 1e-15 * (1.0 + std::abs(t));
      t = next;
      if (done) break;
    }
    out[i] = {gsl_spline_eval(sx, t, acc), gsl_spline_eval(sy, t, acc)};
  }
  gsl_integration_glfixed_table_free(gl);
  gsl_spline_free(sx);
  gsl_spline_free(sy);
  gsl_interp_accel_free(acc);
  return out;
}

constexpr double kResolvedTail = 1e-9;

double speed_spread(std::span<const Vec2> d1) {
  double lo = norm(d1[0]), hi = lo, mean = 0.0;
  for (const auto& v : d1) {
    const double s = norm(v);
    lo = std::min(lo, s);
    hi = std::max(hi, s);
    mean += s;
  }
  mean /= static_cast<double>(d1.size());
  return (hi - lo) / mean;
}

}  // namespace

ClosedCurve resample_constant_speed(const ClosedCurve& curve, std::size_t n) {
  if (n < 16 || n % 2 != 0) throw InvalidArgument("resample size must be even and at least 16");
  auto p = curve.nodes();
  if (polyline_length(p) < 1e-12 * node_diameter(p) || node_diameter(p) == 0.0)
    throw DegenerateCurve("polygonal length vanishes");
  std::vector<Vec2> out;
  // under-resolved input goes through the spline first
  out = spectral::spectral_tail(p) < kResolvedTail ? resample_spectral(p, n) : resample_spline(p, n);
  // aliasing leaves the new interpolant slightly off constant speed; a few passes settle it
  for (int pass = 0; pass < 4 && speed_spread(spectral::derivative(out, 1)) > 1e-7; ++pass)
    out = resample_spectral(out, n);
  return ClosedCurve(std::move(out), ParamKind::ConstantSpeed);
}

ClosedCurve geometry_fields(const ClosedCurve& curve) {
  auto p = curve.nodes();
  const std::size_t n = p.size();
  auto d1 = spectral::derivative(p, 1);
  if (speed_spread(d1) > 1e-6) throw WrongParametrization("node speeds are not constant");
  auto d2 = spectral::derivative(p, 2);
  auto g = std::make_shared<CurveGeometry>();
  g->tangent.resize(n);
  g->normal.resize(n);
  g->curvature.resize(n);
  g->speed.resize(n);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double s = norm(d1[i]);
    g->speed[i] = s;
    g->tangent[i] = d1[i] / s;
    g->normal[i] = perp(g->tangent[i]);
    g->curvature[i] = cross(d1[i], d2[i]) / (s * s * s);
    total += s;
  }
  g->length = total / static_cast<double>(n);
  ClosedCurve out = curve;
  out.kind_ = ParamKind::ConstantSpeed;
  out.geom_ = std::move(g);
  return out;
}

ClosedCurve prepare(const ClosedCurve& curve, std::size_t n) {
  return geometry_fields(resample_constant_speed(curve, n));
}

double h2_seminorm(const ClosedCurve& curve) {
  const auto& g = curve.geometry();
  double s = 0.0;
  for (double k : g.curvature) s += k * k;
  return std::sqrt(s * g.length / static_cast<double>(curve.size()));
}

double c1beta_seminorm(const ClosedCurve& curve, double beta) {
  if (!(beta > 0.0 && beta <= 1.0)) throw InvalidExponent("beta must lie in (0, 1]");
  const auto& g = curve.geometry();
  const std::size_t n = curve.size();
  const double ds = g.length / static_cast<double>(n);
  std::vector<double> denom(n / 2 + 1);
  for (std::size_t k = 1; k <= n / 2; ++k) denom[k] = std::pow(static_cast<double>(k) * ds, beta);
  double best = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const std::size_t k = std::min(j - i, n - (j - i));
      best = std::max(best, norm(g.tangent[i] - g.tangent[j]) / denom[k]);
    }
  }
  return best;
}

double enclosed_area(const ClosedCurve& curve) {
  auto p = curve.nodes();
  auto d1 = spectral::derivative(p, 1);
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) s += cross(p[i], d1[i]);
  return 0.5 * s / static_cast<double>(p.size());
}

double polygon_area(const ClosedCurve& curve) {
  auto p = curve.nodes();
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) s += cross(p[i], p[(i + 1) % p.size()]);
  return 0.5 * s;
}

namespace {
double point_segment_distance(Vec2 x, Vec2 a, Vec2 b) {
  const Vec2 ab = b - a;
  const double t = std::clamp(dot(x - a, ab) / norm2(ab), 0.0, 1.0);
  return dist(x, a + t * ab);
}
}  // namespace

int winding_number(const ClosedCurve& curve, Vec2 x) {
  auto p = curve.nodes();
  const std::size_t n = p.size();
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 a = p[i] - x, b = p[(i + 1) % n] - x;
    if (point_segment_distance(x, p[i], p[(i + 1) % n]) < 1e-10)
      throw PointOnCurve("point lies on the polyline");
    total += std::atan2(cross(a, b), dot(a, b));
  }
  return static_cast<int>(std::lround(total / (2.0 * std::numbers::pi)));
}

bool is_positively_oriented(const ClosedCurve& curve) {
  auto p = curve.nodes();
  const std::size_t n = p.size();
  double hmin = dist(p[0], p[1]);
  for (std::size_t i = 0; i < n; ++i) hmin = std::min(hmin, dist(p[i], p[(i + 1) % n]));
  const Vec2 chord = p[1] - p[n - 1];
  const Vec2 inward = perp(chord) / norm(chord);
  const Vec2 mid = 0.25 * (p[n - 1] + 2.0 * p[0] + p[1]);
  const double delta = 0.25 * hmin;
  for (double sgn : {1.0, -1.0}) {
    const int w = winding_number(curve, mid + sgn * delta * inward);
    if (w != 0) return w > 0;
  }
  return enclosed_area(curve) > 0.0;
}

ClosedCurve transport(const ClosedCurve& curve, const std::function<Vec2(Vec2)>& field, double h) {
  std::vector<Vec2> out(curve.nodes().begin(), curve.nodes().end());
  for (auto& x : out) x += h * field(x);
  return ClosedCurve(std::move(out), ParamKind::General);
}

std::vector<double> curvature_general(const ClosedCurve& curve) {
  auto d1 = spectral::derivative(curve.nodes(), 1);
  auto d2 = spectral::derivative(curve.nodes(), 2);
  std::vector<double> k(curve.size());
  for (std::size_t i = 0; i < k.size(); ++i) {
    const double s = norm(d1[i]);
    k[i] = cross(d1[i], d2[i]) / (s * s * s);
  }
  return k;
}

double h2_seminorm_general(const ClosedCurve& curve) {
  auto d1 = spectral::derivative(curve.nodes(), 1);
  auto k = curvature_general(curve);
  double s = 0.0;
  for (std::size_t i = 0; i < k.size(); ++i) s += k[i] * k[i] * norm(d1[i]);
  return std::sqrt(s / static_cast<double>(k.size()));
}

double sup_norm(const ClosedCurve& curve) {
  double m = 0.0;
  for (const auto& x : curve.nodes()) m = std::max(m, norm(x));
  return m;
}

double diameter(const ClosedCurve& curve) { return node_diameter(curve.nodes()); }

ClosedCurve reversed(const ClosedCurve& curve) {
  auto p = curve.nodes();
  const std::size_t n = p.size();
  std::vector<Vec2> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = p[(n - i) % n];
  return ClosedCurve(std::move(out), curve.param_kind());
}

std::vector<double> node_arclength(const ClosedCurve& curve) {
  const std::size_t n = curve.size();
  std::vector<double> s(n);
  if (curve.param_kind() == ParamKind::ConstantSpeed) {
    const double ds = curve.length() / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) s[i] = ds * static_cast<double>(i);
    return s;
  }
  auto d1 = spectral::derivative(curve.nodes(), 1);
  std::vector<double> speed(n);
  for (std::size_t i = 0; i < n; ++i) speed[i] = norm(d1[i]);
  spectral::RealSeries series(speed);
  for (std::size_t i = 0; i < n; ++i) s[i] = series.integral(static_cast<double>(i) / static_cast<double>(n));
  return s;
}

}  // namespace gsqg
