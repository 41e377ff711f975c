#pragma once

// Separation functionals and distances between discrete closed curves. Point-to-curve
// distances are taken to the polyline through the nodes.

#include <utility>
#include <vector>

#include "gsqg/curve.hpp"
#include "gsqg/family.hpp"

namespace gsqg {

struct PairDistance {
  double distance;
  std::size_t i, j;  // segment indices realizing it, lowest pair on ties
};

PairDistance pair_distance_detail(const ClosedCurve& c1, const ClosedCurve& c2);
double pair_distance(const ClosedCurve& c1, const ClosedCurve& c2);

struct SelfDistance {
  double distance;
  std::size_t i, j;
};

// Min chord over node pairs whose cyclic arclength separation lies in [h, l/2].
SelfDistance self_distance_detail(const ClosedCurve& curve, double h);
double self_distance(const ClosedCurve& curve, double h);

struct FrechetResult {
  double distance = 0.0;
  std::size_t shift = 0;
  // monotone coupling (index in c1, index in c2 after shift) of the closed sequences
  std::vector<std::pair<std::size_t, std::size_t>> coupling;
};

// Discrete Frechet distance of the cyclic node sequences, minimized over cyclic shifts of
// c2 (orientation preserving). With refine > 1 both curves are first spectrally upsampled
// by that factor, which tightens the upper bound on the continuum distance.
double frechet_distance(const ClosedCurve& c1, const ClosedCurve& c2, std::size_t refine = 1);
FrechetResult frechet_coupling(const ClosedCurve& c1, const ClosedCurve& c2);

struct PolylinePoint {
  double distance;
  std::size_t segment;
  double t;  // position within the segment, [0, 1]
};

PolylinePoint closest_on_polyline(Vec2 x, const ClosedCurve& curve);
double hausdorff_distance(const ClosedCurve& c1, const ClosedCurve& c2);
// D(c1, c2) = integral over c1 of dist(c1(s), image c2)^2 ds.
double l2_deviation(const ClosedCurve& c1, const ClosedCurve& c2);

bool polylines_cross(const ClosedCurve& c1, const ClosedCurve& c2);
bool is_simple(const ClosedCurve& curve);
double max_chord(const ClosedCurve& curve);

enum class RelationKind { Nested1In2, Nested2In1, Disjoint, Overlapping };
std::string to_string(RelationKind k);

struct Relation {
  RelationKind kind;
  bool touching;  // pair distance below 10 max grid spacings
};

Relation classify_relation(const ClosedCurve& c1, const ClosedCurve& c2);

struct SigmaSet {
  std::vector<std::size_t> members;      // includes lambda itself
  std::vector<std::size_t> overlapping;  // crossing pairs, excluded with a warning
};

SigmaSet sigma_set(const PatchFamily& family, std::size_t lambda);

}  // namespace gsqg
