#ifndef PDLAB_REGION_HPP_
#define PDLAB_REGION_HPP_

#include <stdexcept>
#include <string>
#include <vector>

namespace pdlab {

/// Closed interval [lo, hi] on the real line.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  [[nodiscard]] double length() const noexcept { return hi - lo; }
  [[nodiscard]] bool contains(double x) const noexcept { return lo <= x && x <= hi; }
  [[nodiscard]] double center() const noexcept { return 0.5 * (lo + hi); }
  [[nodiscard]] double half_width() const noexcept { return 0.5 * (hi - lo); }

  friend bool operator==(const Interval&, const Interval&) = default;
};

class RegionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The undamped set: a sorted union of disjoint closed stripes. Damping is
/// active everywhere outside of it.
class UndampedRegion {
 public:
  /// Throws RegionError when the stripes are empty, unsorted, overlapping or
  /// degenerate.
  explicit UndampedRegion(std::vector<Interval> stripes);

  /// The symmetric single stripe [-R, R].
  static UndampedRegion centered(double half_width);

  [[nodiscard]] const std::vector<Interval>& stripes() const noexcept { return stripes_; }
  [[nodiscard]] std::size_t size() const noexcept { return stripes_.size(); }
  [[nodiscard]] bool is_single_stripe() const noexcept { return stripes_.size() == 1; }

  /// Sum of stripe lengths.
  [[nodiscard]] double total_length() const noexcept;
  [[nodiscard]] double min_width() const noexcept;
  [[nodiscard]] double lower() const noexcept { return stripes_.front().lo; }
  [[nodiscard]] double upper() const noexcept { return stripes_.back().hi; }

  [[nodiscard]] bool contains(double x) const noexcept;

 private:
  std::vector<Interval> stripes_;
};

/// Returns a reason string when the stripes violate the region invariants,
/// empty otherwise.
std::string describe_region_defect(const std::vector<Interval>& stripes);

}  // namespace pdlab

#endif  // PDLAB_REGION_HPP_
