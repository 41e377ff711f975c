#pragma once

#include <vector>

#include "gsqg/curve.hpp"

namespace gsqg {

struct Patch {
  ClosedCurve curve;
  double strength = 1.0;
};

// Indexed family of patch boundaries with nonzero strengths.
class PatchFamily {
 public:
  PatchFamily() = default;
  explicit PatchFamily(std::vector<Patch> patches);

  std::size_t size() const { return patches_.size(); }
  const Patch& operator[](std::size_t i) const { return patches_[i]; }
  const std::vector<Patch>& patches() const { return patches_; }

  double abs_strength_sum() const;
  double min_abs_strength() const;
  double min_spacing() const;
  double max_spacing() const;
  std::size_t total_nodes() const;

  // Geometry filled, positively oriented, simple; throws otherwise.
  void validate() const;

 private:
  std::vector<Patch> patches_;
};

// Resample every boundary to n nodes with geometry.
PatchFamily prepare(const PatchFamily& family, std::size_t n);

}  // namespace gsqg
