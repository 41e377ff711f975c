#include "gsqg/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gsqg/errors.hpp"
#include "gsqg/simd/kernels.hpp"
#include "gsqg/spectral.hpp"

namespace gsqg {
namespace {

double point_segment_distance(Vec2 x, Vec2 a, Vec2 b, double* tout = nullptr) {
  const Vec2 ab = b - a;
  const double t = std::clamp(dot(x - a, ab) / norm2(ab), 0.0, 1.0);
  if (tout) *tout = t;
  return dist(x, a + t * ab);
}

int orient(Vec2 a, Vec2 b, Vec2 c) {
  const double v = cross(b - a, c - a);
  return (v > 0.0) - (v < 0.0);
}

bool on_segment(Vec2 a, Vec2 b, Vec2 p) {
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
         p.y <= std::max(a.y, b.y);
}

bool segments_intersect(Vec2 p1, Vec2 p2, Vec2 q1, Vec2 q2) {
  const int o1 = orient(p1, p2, q1), o2 = orient(p1, p2, q2);
  const int o3 = orient(q1, q2, p1), o4 = orient(q1, q2, p2);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_segment(p1, p2, q1)) return true;
  if (o2 == 0 && on_segment(p1, p2, q2)) return true;
  if (o3 == 0 && on_segment(q1, q2, p1)) return true;
  if (o4 == 0 && on_segment(q1, q2, p2)) return true;
  return false;
}

double segment_segment_distance(Vec2 p1, Vec2 p2, Vec2 q1, Vec2 q2) {
  if (segments_intersect(p1, p2, q1, q2)) return 0.0;
  return std::min({point_segment_distance(p1, q1, q2), point_segment_distance(p2, q1, q2),
                   point_segment_distance(q1, p1, p2), point_segment_distance(q2, p1, p2)});
}

struct Soa {
  std::vector<double> x, y;
  explicit Soa(std::span<const Vec2> p, std::size_t copies = 1) {
    x.reserve(p.size() * copies);
    y.reserve(p.size() * copies);
    for (std::size_t c = 0; c < copies; ++c)
      for (const auto& v : p) {
        x.push_back(v.x);
        y.push_back(v.y);
      }
  }
};

}  // namespace

double max_chord(const ClosedCurve& curve) {
  auto p = curve.nodes();
  double m = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) m = std::max(m, dist(p[i], p[(i + 1) % p.size()]));
  return m;
}

PairDistance pair_distance_detail(const ClosedCurve& c1, const ClosedCurve& c2) {
  auto a = c1.nodes();
  auto b = c2.nodes();
  const std::size_t n = a.size(), m = b.size();
  // node-pair minimum first, then segment refinement of anything that could beat it
  Soa sb(b);
  double best_node = INFINITY;
  for (std::size_t i = 0; i < n; ++i)
    best_node = std::min(best_node, std::sqrt(simd::nearest(a[i], sb.x.data(), sb.y.data(), m).d2));
  const double reach = best_node + max_chord(c1) + max_chord(c2);
  PairDistance best{best_node, 0, 0};
  bool found = false;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 p1 = a[i], p2 = a[(i + 1) % n];
    for (std::size_t j = 0; j < m; ++j) {
      const Vec2 q1 = b[j];
      if (dist(p1, q1) > reach) continue;
      const double d = segment_segment_distance(p1, p2, q1, b[(j + 1) % m]);
      if (!found || d < best.distance) {
        best = {d, i, j};
        found = true;
      }
    }
  }
  return best;
}

double pair_distance(const ClosedCurve& c1, const ClosedCurve& c2) { return pair_distance_detail(c1, c2).distance; }

SelfDistance self_distance_detail(const ClosedCurve& curve, double h) {
  const std::size_t n = curve.size();
  const double len = curve.length();
  if (!(h > 0.0) || h > 0.5 * len * (1.0 + 1e-12))
    throw InvalidWindow("window must lie in (0, l/2]");
  auto p = curve.nodes();
  SelfDistance best{INFINITY, 0, 0};
  if (curve.param_kind() == ParamKind::ConstantSpeed) {
    const double ds = len / static_cast<double>(n);
    auto k0 = static_cast<std::size_t>(std::ceil(h / ds - 1e-9));
    k0 = std::max<std::size_t>(k0, 1);
    const std::size_t k1 = n / 2;
    if (k0 > k1) k0 = k1;
    Soa s(p, 2);
    for (std::size_t i = 0; i < n; ++i) {
      const auto r = simd::nearest(p[i], s.x.data() + i + k0, s.y.data() + i + k0, k1 - k0 + 1);
      const double d = std::sqrt(r.d2);
      if (d < best.distance) best = {d, i, (i + k0 + r.index) % n};
    }
    return best;
  }
  auto s = node_arclength(curve);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double sep = std::min(s[j] - s[i], len - (s[j] - s[i]));
      if (sep < h * (1.0 - 1e-12)) continue;
      const double d = dist(p[i], p[j]);
      if (d < best.distance) best = {d, i, j};
    }
  return best;
}

double self_distance(const ClosedCurve& curve, double h) { return self_distance_detail(curve, h).distance; }

namespace {

// Squared-distance DP over closed sequences a[0..n-1],a[0] and b[k..k+m-1],b[k].
// Aborts early once every entry of a row exceeds `bound`.
double frechet_dp(std::span<const Vec2> a, std::span<const Vec2> b, std::size_t k, double bound,
                  std::vector<double>* table) {
  const std::size_t n = a.size(), m = b.size();
  auto d2 = [&](std::size_t i, std::size_t j) {
    const Vec2 u = a[i % n], v = b[(k + j) % m];
    const double dx = u.x - v.x, dy = u.y - v.y;
    return dx * dx + dy * dy;
  };
  const std::size_t w = m + 1;
  std::vector<double> prev(w), cur(w);
  if (table) table->assign((n + 1) * w, 0.0);
  for (std::size_t i = 0; i <= n; ++i) {
    double row_min = INFINITY;
    for (std::size_t j = 0; j <= m; ++j) {
      double reach;
      if (i == 0 && j == 0) reach = 0.0;
      else if (i == 0) reach = cur[j - 1];
      else if (j == 0) reach = prev[0];
      else reach = std::min({prev[j], cur[j - 1], prev[j - 1]});
      cur[j] = std::max(d2(i, j), reach);
      row_min = std::min(row_min, cur[j]);
    }
    if (table) std::copy(cur.begin(), cur.end(), table->begin() + static_cast<long>(i * w));
    if (row_min > bound) return INFINITY;
    std::swap(prev, cur);
  }
  return prev[m];
}

FrechetResult frechet_impl(std::span<const Vec2> a, std::span<const Vec2> b, bool want_coupling) {
  const std::size_t n = a.size(), m = b.size();
  std::vector<std::pair<double, std::size_t>> order(m);
  for (std::size_t k = 0; k < m; ++k) order[k] = {norm2(a[0] - b[k]), k};
  std::stable_sort(order.begin(), order.end(),
                   [](const auto& x, const auto& y) { return x.first < y.first; });
  double best = INFINITY;
  std::size_t best_k = 0;
  for (const auto& [start, k] : order) {
    if (start > best) break;
    const double v = frechet_dp(a, b, k, best, nullptr);
    if (v < best || (v == best && k < best_k)) {
      best = v;
      best_k = k;
    }
  }
  FrechetResult out;
  out.distance = std::sqrt(best);
  out.shift = best_k;
  if (want_coupling) {
    std::vector<double> t;
    frechet_dp(a, b, best_k, INFINITY, &t);
    const std::size_t w = m + 1;
    std::size_t i = n, j = m;
    std::vector<std::pair<std::size_t, std::size_t>> path;
    path.emplace_back(i, j);
    while (i > 0 || j > 0) {
      if (i == 0) --j;
      else if (j == 0) --i;
      else {
        const double d = t[(i - 1) * w + (j - 1)], u = t[(i - 1) * w + j], l = t[i * w + (j - 1)];
        if (d <= u && d <= l) { --i; --j; }
        else if (u <= l) --i;
        else --j;
      }
      path.emplace_back(i, j);
    }
    std::reverse(path.begin(), path.end());
    out.coupling = std::move(path);
  }
  return out;
}

}  // namespace

double frechet_distance(const ClosedCurve& c1, const ClosedCurve& c2, std::size_t refine) {
  if (refine <= 1) return frechet_impl(c1.nodes(), c2.nodes(), false).distance;
  auto a = spectral::upsample(c1.nodes(), c1.size() * refine);
  auto b = spectral::upsample(c2.nodes(), c2.size() * refine);
  return frechet_impl(a, b, false).distance;
}

FrechetResult frechet_coupling(const ClosedCurve& c1, const ClosedCurve& c2) {
  return frechet_impl(c1.nodes(), c2.nodes(), true);
}

PolylinePoint closest_on_polyline(Vec2 x, const ClosedCurve& curve) {
  auto p = curve.nodes();
  const std::size_t n = p.size();
  PolylinePoint best{INFINITY, 0, 0.0};
  for (std::size_t j = 0; j < n; ++j) {
    double t;
    const double d = point_segment_distance(x, p[j], p[(j + 1) % n], &t);
    if (d < best.distance) best = {d, j, t};
  }
  // a segment endpoint at t = 1 is the next segment's start; report the smaller arclength
  if (best.t == 1.0) {
    const std::size_t next = (best.segment + 1) % n;
    if (next > best.segment) best = {best.distance, next, 0.0};
  }
  return best;
}

double hausdorff_distance(const ClosedCurve& c1, const ClosedCurve& c2) {
  auto directed = [](const ClosedCurve& a, const ClosedCurve& b) {
    double m = 0.0;
    for (const auto& x : a.nodes()) m = std::max(m, closest_on_polyline(x, b).distance);
    return m;
  };
  return std::max(directed(c1, c2), directed(c2, c1));
}

double l2_deviation(const ClosedCurve& c1, const ClosedCurve& c2) {
  if (c1.param_kind() != ParamKind::ConstantSpeed)
    throw WrongParametrization("l2_deviation needs a constant-speed first curve");
  double s = 0.0;
  for (const auto& x : c1.nodes()) {
    const double d = closest_on_polyline(x, c2).distance;
    s += d * d;
  }
  return s * c1.length() / static_cast<double>(c1.size());
}

bool polylines_cross(const ClosedCurve& c1, const ClosedCurve& c2) {
  auto a = c1.nodes();
  auto b = c2.nodes();
  const double reach = max_chord(c1) + max_chord(c2);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (dist(a[i], b[j]) > reach) continue;
      if (segments_intersect(a[i], a[(i + 1) % a.size()], b[j], b[(j + 1) % b.size()])) return true;
    }
  return false;
}

bool is_simple(const ClosedCurve& curve) {
  auto p = curve.nodes();
  const std::size_t n = p.size();
  const double reach = 2.0 * max_chord(curve);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;
      if (dist(p[i], p[j]) > reach) continue;
      if (segments_intersect(p[i], p[(i + 1) % n], p[j], p[(j + 1) % n])) return false;
    }
  return true;
}

std::string to_string(RelationKind k) {
  switch (k) {
    case RelationKind::Nested1In2: return "nested_1_in_2";
    case RelationKind::Nested2In1: return "nested_2_in_1";
    case RelationKind::Disjoint: return "disjoint";
    case RelationKind::Overlapping: return "overlapping";
  }
  return "?";
}

Relation classify_relation(const ClosedCurve& c1, const ClosedCurve& c2) {
  const double spacing = std::max(max_chord(c1), max_chord(c2));
  Relation rel{RelationKind::Disjoint, pair_distance(c1, c2) < 10.0 * spacing};
  // Nodes inside a one-spacing band around the other curve are ambiguous at the discrete
  // level (tangential contact); only nodes clear of it vote. A genuine polyline crossing
  // leaves voters on both sides.
  auto vote = [&](const ClosedCurve& a, const ClosedCurve& b, int& in, int& out) {
    in = out = 0;
    for (const auto& x : a.nodes()) {
      if (closest_on_polyline(x, b).distance <= spacing) continue;
      (winding_number(b, x) != 0 ? in : out)++;
    }
  };
  int in1, out1, in2, out2;
  vote(c1, c2, in1, out1);
  vote(c2, c1, in2, out2);
  if ((in1 > 0 && out1 > 0) || (in2 > 0 && out2 > 0) || (in1 > 0 && in2 > 0)) {
    rel.kind = RelationKind::Overlapping;
  } else if (in1 > 0) {
    rel.kind = RelationKind::Nested1In2;
  } else if (in2 > 0) {
    rel.kind = RelationKind::Nested2In1;
  } else if (out1 > 0 || out2 > 0) {
    rel.kind = RelationKind::Disjoint;
  } else {
    rel.kind = RelationKind::Nested1In2;  // coincident
  }
  return rel;
}

SigmaSet sigma_set(const PatchFamily& family, std::size_t lambda) {
  SigmaSet out;
  const double th = family[lambda].strength;
  for (std::size_t mu = 0; mu < family.size(); ++mu) {
    if (mu == lambda) {
      out.members.push_back(mu);
      continue;
    }
    const auto rel = classify_relation(family[lambda].curve, family[mu].curve);
    const double sign = th * family[mu].strength;
    if (rel.kind == RelationKind::Overlapping) {
      out.overlapping.push_back(mu);
      continue;
    }
    const bool nested = rel.kind == RelationKind::Nested1In2 || rel.kind == RelationKind::Nested2In1;
    if ((sign > 0.0 && nested) || (sign < 0.0 && rel.kind == RelationKind::Disjoint)) out.members.push_back(mu);
  }
  return out;
}

}  // namespace gsqg
