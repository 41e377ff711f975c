#include "gsqg/family.hpp"

#include <algorithm>
#include <cmath>

#include "gsqg/errors.hpp"
#include "gsqg/metrics.hpp"

namespace gsqg {

PatchFamily::PatchFamily(std::vector<Patch> patches) : patches_(std::move(patches)) {
  for (std::size_t i = 0; i < patches_.size(); ++i) {
    const double th = patches_[i].strength;
    if (!(std::isfinite(th) && th != 0.0))
      throw InvalidArgument("patch " + std::to_string(i) + " has zero or non-finite strength");
  }
}

double PatchFamily::abs_strength_sum() const {
  double s = 0.0;
  for (const auto& p : patches_) s += std::abs(p.strength);
  return s;
}

double PatchFamily::min_abs_strength() const {
  double m = INFINITY;
  for (const auto& p : patches_) m = std::min(m, std::abs(p.strength));
  return m;
}

double PatchFamily::min_spacing() const {
  double m = INFINITY;
  for (const auto& p : patches_) m = std::min(m, p.curve.spacing());
  return m;
}

double PatchFamily::max_spacing() const {
  double m = 0.0;
  for (const auto& p : patches_) m = std::max(m, max_chord(p.curve));
  return m;
}

std::size_t PatchFamily::total_nodes() const {
  std::size_t n = 0;
  for (const auto& p : patches_) n += p.curve.size();
  return n;
}

void PatchFamily::validate() const {
  for (std::size_t i = 0; i < patches_.size(); ++i) {
    const auto& c = patches_[i].curve;
    const std::string tag = "patch " + std::to_string(i);
    if (!c.has_geometry()) throw WrongParametrization(tag + " has no geometry fields");
    if (!is_simple(c)) throw NotSimple(tag + " is not simple");
    if (!is_positively_oriented(c)) throw InvalidArgument(tag + " is not positively oriented");
  }
}

PatchFamily prepare(const PatchFamily& family, std::size_t n) {
  std::vector<Patch> out;
  out.reserve(family.size());
  for (const auto& p : family.patches()) out.push_back({prepare(p.curve, n), p.strength});
  return PatchFamily(std::move(out));
}

}  // namespace gsqg
