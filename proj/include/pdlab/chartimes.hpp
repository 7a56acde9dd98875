#ifndef PDLAB_CHARTIMES_HPP_
#define PDLAB_CHARTIMES_HPP_

#include <optional>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "pdlab/model.hpp"
#include "pdlab/region.hpp"

// Characteristic-time calculus for  d_t v_i + lambda_i d_x v_i = ...  with an
// undamped region. Every quantity here is a closed form in the speeds and the
// stripe geometry; sup_undamped_measure is the brute-force scan used to check
// them.

namespace pdlab {

/// Time window [t_en, t_ex] inside [0, t0] that the characteristic through
/// (x0, t0) spends in one stripe.
struct CharacteristicWindow {
  double t_en = 0.0;
  double t_ex = 0.0;

  [[nodiscard]] double length() const noexcept { return t_ex - t_en; }
};

struct UndampedUnion {
  std::vector<Interval> intervals;  // sorted, disjoint
  double measure = 0.0;
};

/// Sampling of the x axis for the brute-force oracle. step == 0 requests the
/// automatic range and step.
struct ScanSpec {
  double x_min = 0.0;
  double x_max = 0.0;
  double step = 0.0;

  [[nodiscard]] bool is_auto() const noexcept { return step == 0.0; }
};

struct SupResult {
  double sup = 0.0;
  double argmax = 0.0;
};

enum class ThreeSpeedCase { kOverlap, kGap, kGeometric };

const char* to_string(ThreeSpeedCase c) noexcept;

/// Corner points of three same-sign characteristics crossing [-R, R], speeds
/// given as magnitudes s1 > s2 > s3 > 0.
struct ThreeSpeedGeometry {
  double s1 = 0.0, s2 = 0.0, s3 = 0.0;
  double R = 0.0;
  double x2 = 0.0, t2 = 0.0;  // slow exit meets middle entry
  double x1 = 0.0, t1 = 0.0;  // middle exit meets fast entry
  double t_lambda = 0.0;      // overlap of middle and fast windows at (x2, t2)
  ThreeSpeedCase kind = ThreeSpeedCase::kOverlap;
};

struct TauStarBounds {
  double lemma_lower = 0.0;
  bool lemma_defined = false;
  std::optional<double> exact_three_speed;
  double upper = 0.0;
};

class ChartimesError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

CharacteristicWindow crossing_window(double lambda, const Interval& stripe, double x0, double t0);

/// Total time over all stripes.
double residence_time(double lambda, const UndampedRegion& region, double x0, double t0);

/// I(x0, t0): union over every component and stripe of the crossing windows.
UndampedUnion undamped_union(const Eigen::VectorXd& speeds, const UndampedRegion& region,
                             double x0, double t0);

/// Merges closed intervals with one sweep over sorted left endpoints.
/// Zero-length intervals are dropped.
UndampedUnion merge_intervals(std::vector<Interval> intervals);

/// Automatic scan: range covers every characteristic that can meet the region
/// by time t, step = narrowest stripe / 400.
ScanSpec auto_scan(const Eigen::VectorXd& speeds, const UndampedRegion& region, double t);

/// sup over x of |I(x, t)| by scanning x, then polishing near the best sample
/// with the breakpoints of the piecewise-linear map x -> |I(x, t)|.
SupResult sup_undamped_measure(const Eigen::VectorXd& speeds, const UndampedRegion& region,
                               double t, ScanSpec scan = {});

/// Largest total residence of one sign group: single stripe gives the exact
/// delay, several stripes give the additive bound.
double tau_bar(const Eigen::VectorXd& speeds, const UndampedRegion& region);

/// Bounds on the conservation time tau*. Requires a single stripe.
TauStarBounds tau_star_bounds(const Eigen::VectorXd& speeds, const UndampedRegion& region);

/// Consecutive speed ratios of the sign group attaining tau_bar are equal.
bool geometric_ratio_holds(const Eigen::VectorXd& speeds, const UndampedRegion& region);

ThreeSpeedGeometry three_speed_geometry(double s1, double s2, double s3, double R);

/// t - sup_x |I(x, t)|.
double sharp_delay(const Eigen::VectorXd& speeds, const UndampedRegion& region, double t,
                   ScanSpec scan = {});

/// t - |I(x(t), t)| along the slow characteristic x(t) that enters the single
/// stripe at t = 0 (upstream edge, slowest member of the tau_bar group).
double corridor_delay(const Eigen::VectorXd& speeds, const UndampedRegion& region, double t);

/// Speeds belonging to the sign group that attains tau_bar, as magnitudes
/// sorted descending. Ties go to the positive group.
std::vector<double> dominant_group(const Eigen::VectorXd& speeds, const UndampedRegion& region);
bool dominant_group_is_positive(const Eigen::VectorXd& speeds, const UndampedRegion& region);

}  // namespace pdlab

#endif  // PDLAB_CHARTIMES_HPP_
