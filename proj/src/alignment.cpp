#include "gsqg/alignment.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

#include "gsqg/errors.hpp"
#include "gsqg/kernel.hpp"
#include "gsqg/metrics.hpp"
#include "gsqg/spectral.hpp"

namespace gsqg {

using std::numbers::pi;
using spectral::cplx;

namespace {

double bump(double u) {
  const double a = std::abs(u);
  return a >= 1.0 ? 0.0 : 1.0 - chi(a, 0.0);
}

double integrate(const std::function<double(double)>& f, double a, double b) {
  gsl_set_error_handler_off();
  struct Ctx {
    const std::function<double(double)>* f;
  } ctx{&f};
  gsl_function g{[](double x, void* p) { return (*static_cast<Ctx*>(p)->f)(x); }, &ctx};
  gsl_integration_workspace* ws = gsl_integration_workspace_alloc(2000);
  double res = 0.0, err = 0.0;
  gsl_integration_qag(&g, a, b, 1e-15, 1e-12, 2000, GSL_INTEG_GAUSS61, ws, &res, &err);
  gsl_integration_workspace_free(ws);
  return res;
}

struct BumpIntegrals {
  double mass, square;
};

const BumpIntegrals& bump_integrals() {
  static const BumpIntegrals b{2.0 * integrate(bump, 0.0, 1.0),
                               2.0 * integrate([](double u) { return bump(u) * bump(u); }, 0.0, 1.0)};
  return b;
}

}  // namespace

Mollifier::Mollifier(double l) {
  if (!(l > 0.0)) throw InvalidArgument("mollifier length must be positive");
  const auto& b = bump_integrals();
  mass_ = b.mass;
  width_ = l * b.square / (b.mass * b.mass);
}

double Mollifier::operator()(double x) const { return bump(x / width_) / (width_ * mass_); }

double Mollifier::l2_norm() const { return std::sqrt(bump_integrals().square / (width_ * mass_ * mass_)); }

double Mollifier::transform(double r, double omega) const {
  const double a = omega * r * width_;
  if (a == 0.0) return 1.0;
  return 2.0 / mass_ * integrate([a](double u) { return bump(u) * std::cos(a * u); }, 0.0, 1.0);
}

namespace {

// Trigonometric series of period len in symmetric order, evaluated with a power recurrence.
class Series {
 public:
  Series(std::span<const cplx> values, double len, const std::function<double(long)>& multiplier)
      : len_(len) {
    const std::size_t n = values.size();
    const auto c = spectral::forward(values);
    kmax_ = static_cast<long>(n / 2);
    pos_.assign(static_cast<std::size_t>(kmax_) + 1, 0.0);
    neg_.assign(static_cast<std::size_t>(kmax_) + 1, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      const long k = spectral::wavenumber(j, n);
      const double m = multiplier(std::abs(k));
      if (j == n / 2) {
        pos_[static_cast<std::size_t>(k)] += 0.5 * m * c[j];
        neg_[static_cast<std::size_t>(k)] += 0.5 * m * c[j];
      } else if (k >= 0) {
        pos_[static_cast<std::size_t>(k)] += m * c[j];
      } else {
        neg_[static_cast<std::size_t>(-k)] += m * c[j];
      }
    }
  }

  // value and the first two s-derivatives
  void eval(double s, cplx& v, cplx& d1, cplx& d2) const {
    const double th = 2.0 * pi * s / len_;
    const cplx w(std::cos(th), std::sin(th));
    cplx p(1.0, 0.0);
    v = pos_[0];
    cplx a1 = 0.0, a2 = 0.0;
    for (long k = 1; k <= kmax_; ++k) {
      p *= w;
      const cplx plus = pos_[static_cast<std::size_t>(k)] * p;
      const cplx minus = neg_[static_cast<std::size_t>(k)] * std::conj(p);
      const double kk = static_cast<double>(k);
      v += plus + minus;
      a1 += kk * (plus - minus);
      a2 += kk * kk * (plus + minus);
    }
    const double f = 2.0 * pi / len_;
    d1 = cplx(0.0, f) * a1;
    d2 = -(f * f) * a2;
  }

  Vec2 point(double s) const {
    cplx v, d1, d2;
    eval(s, v, d1, d2);
    return {v.real(), v.imag()};
  }

 private:
  double len_;
  long kmax_ = 0;
  std::vector<cplx> pos_, neg_;
};

Vec2 to_vec(cplx z) { return {z.real(), z.imag()}; }

ClosedCurve arclength_curve(const ClosedCurve& c) {
  if (c.has_geometry()) return c;
  return prepare(c, c.size());
}

std::function<double(long)> multiplier(double r, double len, const Mollifier& sigma) {
  if (r == 0.0) return [](long) { return 1.0; };
  return [r, len, &sigma](long k) { return sigma.transform(r, 2.0 * pi * static_cast<double>(k) / len); };
}

}  // namespace

ClosedCurve mollify_curve(const ClosedCurve& curve_in, double r, const Mollifier& sigma) {
  if (!(r >= 0.0)) throw InvalidArgument("mollification scale must be non-negative");
  const ClosedCurve curve = arclength_curve(curve_in);
  const double len = curve.length();
  if (2.0 * r * sigma.width() > len) throw ScaleTooLarge("mollifier support exceeds one period");
  const auto z = spectral::to_complex(curve.nodes());
  auto c = spectral::forward(z);
  const std::size_t n = c.size();
  const auto m = multiplier(r, len, sigma);
  for (std::size_t j = 0; j < n; ++j) c[j] *= m(std::abs(spectral::wavenumber(j, n)));
  return ClosedCurve(spectral::to_vec2(spectral::inverse(c)));
}

std::vector<double> mollify_samples(const std::vector<double>& f, double l, double r, const Mollifier& sigma) {
  if (2.0 * r * sigma.width() > l) throw ScaleTooLarge("mollifier support exceeds one period");
  std::vector<cplx> z(f.begin(), f.end());
  auto c = spectral::forward(z);
  const std::size_t n = c.size();
  const auto m = multiplier(r, l, sigma);
  for (std::size_t j = 0; j < n; ++j) c[j] *= m(std::abs(spectral::wavenumber(j, n)));
  const auto back = spectral::inverse(c);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = back[i].real();
  return out;
}

std::string to_string(AlignmentRegime r) {
  switch (r) {
    case AlignmentRegime::Theoretical: return "theoretical";
    case AlignmentRegime::Practical: return "practical";
    case AlignmentRegime::Unverified: return "unverified";
  }
  return "?";
}

std::vector<double> nearest_point_map(const ClosedCurve& c1, const ClosedCurve& c2) {
  const double l2 = c2.length();
  const double n2 = static_cast<double>(c2.size());
  std::vector<double> out(c1.size());
  for (std::size_t i = 0; i < c1.size(); ++i) {
    const auto p = closest_on_polyline(c1[i], c2);
    out[i] = l2 * (static_cast<double>(p.segment) + p.t) / n2;
  }
  return out;
}

namespace {

// Monotone initial map from the discrete Frechet coupling of spectrally refined curves.
std::vector<double> coupling_map(const ClosedCurve& c1, const ClosedCurve& c2, std::size_t refine, double& dist) {
  const std::size_t n1 = c1.size(), n2 = c2.size();
  const std::size_t ra = std::max<std::size_t>(refine, 1);
  ClosedCurve a(spectral::upsample(c1.nodes(), n1 * ra));
  ClosedCurve b(spectral::upsample(c2.nodes(), n2 * ra));
  const auto fr = frechet_coupling(a, b);
  dist = fr.distance;
  const double l2 = c2.length();
  const double m = static_cast<double>(b.size());
  std::vector<double> sum(n1, 0.0), cnt(n1, 0.0);
  for (const auto& [i, j] : fr.coupling) {
    if (i % ra != 0 || i / ra >= n1) continue;
    sum[i / ra] += l2 * static_cast<double>(fr.shift + j) / m;
    cnt[i / ra] += 1.0;
  }
  std::vector<double> psi(n1);
  for (std::size_t i = 0; i < n1; ++i) psi[i] = sum[i] / cnt[i];
  return psi;
}

bool strictly_increasing(const std::vector<double>& eta, double l2) {
  for (std::size_t i = 0; i + 1 < eta.size(); ++i)
    if (!(eta[i + 1] > eta[i])) return false;
  return eta.front() + l2 > eta.back();
}

}  // namespace

AlignmentResult align(const ClosedCurve& c1_in, const ClosedCurve& c2_in, const AlignOptions& opt) {
  const ClosedCurve c1 = arclength_curve(c1_in), c2 = arclength_curve(c2_in);
  const std::size_t n1 = c1.size();
  const double l1 = c1.length(), l2 = c2.length();
  const double h1 = l1 / static_cast<double>(n1);
  AlignmentResult res;

  std::vector<double> psi = coupling_map(c1, c2, opt.frechet_refine, res.frechet);
  const double dF = res.frechet;
  const double k1 = h2_seminorm(c1), k2 = h2_seminorm(c2);
  res.R1 = l1;
  {
    const double h = 1.0 / (k2 * k2);
    const double inv_delta = h <= 0.5 * l2 ? 1.0 / self_distance(c2, h) : 0.0;
    res.R2 = std::sqrt(std::max(k1 * k1, inv_delta));
  }
  const double R2sq = res.R2 * res.R2;
  res.delta_theoretical =
      std::min(1.0 / (512.0 * R2sq), 1.0 / (std::pow(2.0, 56) * std::pow(3.0, 10) * std::pow(res.R1, 6) *
                                            std::pow(res.R2, 14)));
  res.delta_practical = 1e-3 * std::min(l1, 1.0 / R2sq);
  res.regime = dF <= res.delta_theoretical   ? AlignmentRegime::Theoretical
               : dF <= res.delta_practical ? AlignmentRegime::Practical
                                           : AlignmentRegime::Unverified;
  res.r = 64.0 * k2 * k2 * dF * dF / l1;

  const Mollifier sigma(l1);
  if (2.0 * res.r * sigma.width() > std::min(l1, l2)) throw ScaleTooLarge("curves too far apart for alignment");
  const auto z1 = spectral::to_complex(c1.nodes()), z2 = spectral::to_complex(c2.nodes());
  const Series g1(z1, l1, multiplier(res.r, l1, sigma));
  const Series g2(z2, l2, multiplier(res.r, l2, sigma));

  // smooth the staircase of the coupling over a couple of grid cells
  {
    std::vector<double> periodic(n1);
    for (std::size_t i = 0; i < n1; ++i) periodic[i] = psi[i] - l2 / l1 * h1 * static_cast<double>(i);
    const double rs = std::max(res.r, 2.0 * h1 / sigma.width());
    periodic = mollify_samples(periodic, l1, rs, sigma);
    for (std::size_t i = 0; i < n1; ++i) psi[i] = periodic[i] + l2 / l1 * h1 * static_cast<double>(i);
    const double base = std::floor(psi[0] / l2) * l2;
    for (auto& v : psi) v -= base;
  }
  if (!strictly_increasing(psi, l2)) throw MonotonicityLost("initial coupling map is not increasing");

  std::vector<Vec2> target(n1);
  for (std::size_t i = 0; i < n1; ++i) target[i] = g1.point(h1 * static_cast<double>(i));

  auto field = [&](const std::vector<double>& eta, std::vector<double>& f, std::vector<double>* dist) {
    f.resize(n1);
    if (dist) dist->resize(n1);
    for (std::size_t i = 0; i < n1; ++i) {
      cplx v, d1, d2;
      g2.eval(eta[i], v, d1, d2);
      const Vec2 diff = target[i] - to_vec(v);
      f[i] = dot(diff, to_vec(d1));
      if (dist) (*dist)[i] = norm(diff);
    }
  };
  auto sup = [](const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
  };

  std::vector<double> eta = psi, f0, f, dist;
  field(eta, f0, &dist);
  f = f0;
  res.residual = sup(f);
  double dt = opt.step, t = 0.0;
  const double scale = std::max(l1, l2);
  std::vector<double> k[4], trial(n1), fn, dn;
  while (res.residual > opt.tolerance && res.steps < opt.max_steps) {
    k[0] = f;
    auto stage = [&](const std::vector<double>& kk, double a, std::vector<double>& out) {
      for (std::size_t i = 0; i < n1; ++i) trial[i] = eta[i] + a * kk[i];
      field(trial, out, nullptr);
    };
    stage(k[0], 0.5 * dt, k[1]);
    stage(k[1], 0.5 * dt, k[2]);
    stage(k[2], dt, k[3]);
    for (std::size_t i = 0; i < n1; ++i) trial[i] = eta[i] + dt / 6.0 * (k[0][i] + 2.0 * k[1][i] + 2.0 * k[2][i] + k[3][i]);
    field(trial, fn, &dn);
    const double rn = sup(fn);
    bool increased = false;
    for (std::size_t i = 0; i < n1; ++i)
      if (dn[i] > dist[i] + 1e-14 * scale) increased = true;
    if ((increased || rn > res.residual) && dt > 1e-6) {
      dt *= 0.5;
      continue;
    }
    if (increased) res.monotone_distance = false;
    eta = trial;
    f = fn;
    dist = dn;
    res.residual = rn;
    t += dt;
    ++res.steps;
    for (std::size_t i = 0; i < n1; ++i)
      if (std::abs(f[i]) > std::exp(-0.5 * t) * std::abs(f0[i]) * (1.0 + 1e-6) + 1e-13 * scale) res.decay_bound = false;
    if (!strictly_increasing(eta, l2)) throw MonotonicityLost("alignment map stopped increasing");
  }
  res.flow_time = t;
  if (res.residual > opt.tolerance)
    throw FlowStalled("alignment flow did not converge, best residual " + std::to_string(res.residual));

  res.phi = eta;
  double lo = INFINITY, hi = -INFINITY;
  for (std::size_t i = 0; i < n1; ++i) {
    const double next = i + 1 < n1 ? eta[i + 1] : eta[0] + l2;
    const double d = (next - eta[i]) / h1;
    lo = std::min(lo, d);
    hi = std::max(hi, d);
  }
  res.phi_prime_range = {lo, hi};

  // properties on the unmollified curves
  auto& p = res.properties;
  const Series raw2(z2, l2, [](long) { return 1.0; });
  double l2sum = 0.0, tsum = 0.0;
  for (std::size_t i = 0; i < n1; ++i) {
    cplx v, d1, d2;
    raw2.eval(eta[i], v, d1, d2);
    const Vec2 dev = c1[i] - to_vec(v);
    p.sup_dev = std::max(p.sup_dev, norm(dev));
    l2sum += norm2(dev);
    const double tang = dot(dev, to_vec(d1));
    tsum += tang * tang;
  }
  p.l2_dev = std::sqrt(l2sum * h1);
  p.tangential = std::sqrt(tsum * h1);
  p.tangential_bound = 1e5 * std::pow(res.R1, 0.9) * std::pow(res.R2, 4.2) * std::pow(p.l2_dev, 1.8);
  const double slack = 1.1;
  const double floor = 1e-12 * scale;  // identical inputs give round-off on both sides
  p.a = p.sup_dev <= 2.0 * dF * slack + floor;
  p.c = lo >= (1.0 / 3.0) / slack && hi <= 3.0 * slack;
  p.e = p.tangential <= p.tangential_bound * slack + floor;
  const auto nearest = nearest_point_map(c1, c2);
  const double grid = l2 / static_cast<double>(c2.size());
  p.locality_excess = -INFINITY;
  for (std::size_t i = 0; i < n1; ++i) {
    double gap = std::fmod(std::abs(nearest[i] - eta[i]), l2);
    gap = std::min(gap, l2 - gap);
    const double d = closest_on_polyline(c1[i], c2).distance;
    p.locality_excess = std::max(p.locality_excess, gap - (3.0 * d + 342.0 * R2sq * dF * dF) * slack - grid);
  }
  p.f = p.locality_excess <= 0.0;
  return res;
}

}  // namespace gsqg
