#include "pdlab/region.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace pdlab {

std::string describe_region_defect(const std::vector<Interval>& stripes) {
  if (stripes.empty()) return "region must contain at least one stripe";
  std::ostringstream os;
  for (std::size_t j = 0; j < stripes.size(); ++j) {
    const auto& s = stripes[j];
    if (!std::isfinite(s.lo) || !std::isfinite(s.hi)) {
      os << "stripe " << j << " has a non-finite endpoint";
      return os.str();
    }
    if (!(s.lo < s.hi)) {
      os << "stripe " << j << " is empty or reversed (" << s.lo << " >= " << s.hi << ")";
      return os.str();
    }
    if (j > 0 && !(stripes[j - 1].hi < s.lo)) {
      os << "stripes " << j - 1 << " and " << j << " are out of order or overlap";
      return os.str();
    }
  }
  return {};
}

UndampedRegion::UndampedRegion(std::vector<Interval> stripes) : stripes_(std::move(stripes)) {
  if (auto defect = describe_region_defect(stripes_); !defect.empty()) throw RegionError(defect);
}

UndampedRegion UndampedRegion::centered(double half_width) {
  return UndampedRegion({Interval{-half_width, half_width}});
}

double UndampedRegion::total_length() const noexcept {
  double total = 0.0;
  for (const auto& s : stripes_) total += s.length();
  return total;
}

double UndampedRegion::min_width() const noexcept {
  double w = std::numeric_limits<double>::infinity();
  for (const auto& s : stripes_) w = std::min(w, s.length());
  return w;
}

bool UndampedRegion::contains(double x) const noexcept {
  return std::any_of(stripes_.begin(), stripes_.end(),
                     [x](const Interval& s) { return s.contains(x); });
}

}  // namespace pdlab
