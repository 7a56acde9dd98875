#include "pdlab/chartimes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace pdlab {

namespace {

void require_nonzero(double lambda) {
  if (lambda == 0.0 || !std::isfinite(lambda))
    throw ChartimesError("characteristic speed must be finite and nonzero");
}

// Entry/exit endpoints of a window are affine in x0:  t - (x0 - beta) / lambda.
struct AffineEndpoint {
  double beta;
  double lambda;
};

double lipschitz_bound(const Eigen::VectorXd& speeds, const UndampedRegion& region) {
  double inv = 0.0;
  for (Eigen::Index i = 0; i < speeds.size(); ++i) inv += 1.0 / std::abs(speeds(i));
  return 2.0 * inv * static_cast<double>(region.size());
}

std::vector<double> breakpoints(const Eigen::VectorXd& speeds, const UndampedRegion& region,
                                double t, double lo, double hi) {
  std::vector<AffineEndpoint> ends;
  for (Eigen::Index i = 0; i < speeds.size(); ++i) {
    for (const auto& s : region.stripes()) {
      ends.push_back({s.lo, speeds(i)});
      ends.push_back({s.hi, speeds(i)});
    }
  }
  std::vector<double> xs;
  auto keep = [&xs, lo, hi](double x) {
    if (std::isfinite(x) && x >= lo && x <= hi) xs.push_back(x);
  };
  for (std::size_t a = 0; a < ends.size(); ++a) {
    keep(ends[a].beta);                         // endpoint == t0
    keep(ends[a].beta + ends[a].lambda * t);    // endpoint == 0
    for (std::size_t b = a + 1; b < ends.size(); ++b) {
      const double ia = 1.0 / ends[a].lambda;
      const double ib = 1.0 / ends[b].lambda;
      if (ia == ib) continue;
      keep((ends[b].beta * ib - ends[a].beta * ia) / (ib - ia));
    }
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  return xs;
}

double group_sum(const Eigen::VectorXd& speeds, const UndampedRegion& region, bool positive) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < speeds.size(); ++i) {
    if ((speeds(i) > 0.0) != positive) continue;
    for (const auto& s : region.stripes()) total += s.length() / std::abs(speeds(i));
  }
  return total;
}

}  // namespace

const char* to_string(ThreeSpeedCase c) noexcept {
  switch (c) {
    case ThreeSpeedCase::kOverlap:
      return "overlap";
    case ThreeSpeedCase::kGap:
      return "gap";
    case ThreeSpeedCase::kGeometric:
      return "geometric";
  }
  return "unknown";
}

CharacteristicWindow crossing_window(double lambda, const Interval& stripe, double x0, double t0) {
  require_nonzero(lambda);
  if (!(t0 >= 0.0)) throw ChartimesError("observation time must be non-negative");
  const double c = stripe.center();
  const double r = stripe.half_width();
  const double sign = lambda > 0.0 ? 1.0 : -1.0;
  const double raw_en = t0 - (x0 - c + r * sign) / lambda;
  const double raw_ex = t0 - (x0 - c - r * sign) / lambda;
  CharacteristicWindow w;
  w.t_en = std::clamp(raw_en, 0.0, t0);
  w.t_ex = std::clamp(raw_ex, 0.0, t0);
  return w;
}

double residence_time(double lambda, const UndampedRegion& region, double x0, double t0) {
  double total = 0.0;
  for (const auto& s : region.stripes()) total += crossing_window(lambda, s, x0, t0).length();
  return total;
}

UndampedUnion merge_intervals(std::vector<Interval> intervals) {
  std::erase_if(intervals, [](const Interval& i) { return !(i.hi > i.lo); });
  std::sort(intervals.begin(), intervals.end(),
            [](const Interval& a, const Interval& b) { return a.lo < b.lo || (a.lo == b.lo && a.hi < b.hi); });
  UndampedUnion out;
  for (const auto& i : intervals) {
    if (!out.intervals.empty() && i.lo <= out.intervals.back().hi)
      out.intervals.back().hi = std::max(out.intervals.back().hi, i.hi);
    else
      out.intervals.push_back(i);
  }
  for (const auto& i : out.intervals) out.measure += i.length();
  return out;
}

UndampedUnion undamped_union(const Eigen::VectorXd& speeds, const UndampedRegion& region,
                             double x0, double t0) {
  std::vector<Interval> windows;
  windows.reserve(static_cast<std::size_t>(speeds.size()) * region.size());
  for (Eigen::Index i = 0; i < speeds.size(); ++i) {
    for (const auto& s : region.stripes()) {
      const auto w = crossing_window(speeds(i), s, x0, t0);
      windows.push_back({w.t_en, w.t_ex});
    }
  }
  return merge_intervals(std::move(windows));
}

ScanSpec auto_scan(const Eigen::VectorXd& speeds, const UndampedRegion& region, double t) {
  const double reach = speeds.cwiseAbs().maxCoeff() * t + region.total_length();
  return ScanSpec{region.lower() - reach, region.upper() + reach, region.min_width() / 400.0};
}

SupResult sup_undamped_measure(const Eigen::VectorXd& speeds, const UndampedRegion& region,
                               double t, ScanSpec scan) {
  if (speeds.size() == 0) throw ChartimesError("no characteristic speeds given");
  for (Eigen::Index i = 0; i < speeds.size(); ++i) require_nonzero(speeds(i));
  if (scan.is_auto()) scan = auto_scan(speeds, region, t);
  if (!(scan.step > 0.0) || !(scan.x_max >= scan.x_min))
    throw ChartimesError("empty scan range");

  const auto samples = static_cast<long>(std::floor((scan.x_max - scan.x_min) / scan.step)) + 1;
  std::vector<double> values(static_cast<std::size_t>(samples));
  double best = -1.0;
  for (long k = 0; k < samples; ++k) {
    const double x = scan.x_min + static_cast<double>(k) * scan.step;
    values[static_cast<std::size_t>(k)] = undamped_union(speeds, region, x, t).measure;
    best = std::max(best, values[static_cast<std::size_t>(k)]);
  }

  const double tie = 1e-12 * std::max(1.0, best);
  SupResult result{-1.0, 0.0};
  auto offer = [&result, tie](double x, double v) {
    if (v > result.sup + tie)
      result = {v, x};
    else if (v >= result.sup - tie && x < result.argmax)
      result = {std::max(v, result.sup), x};
  };

  const double slack = lipschitz_bound(speeds, region) * scan.step;
  const auto kinks = breakpoints(speeds, region, t, scan.x_min, scan.x_max);
  for (long k = 0; k < samples; ++k) {
    const double v = values[static_cast<std::size_t>(k)];
    const double x = scan.x_min + static_cast<double>(k) * scan.step;
    offer(x, v);
    if (v < best - slack) continue;
    auto it = std::lower_bound(kinks.begin(), kinks.end(), x - scan.step);
    for (; it != kinks.end() && *it <= x + scan.step; ++it)
      offer(*it, undamped_union(speeds, region, *it, t).measure);
  }
  return result;
}

double tau_bar(const Eigen::VectorXd& speeds, const UndampedRegion& region) {
  return std::max(group_sum(speeds, region, false), group_sum(speeds, region, true));
}

bool dominant_group_is_positive(const Eigen::VectorXd& speeds, const UndampedRegion& region) {
  return group_sum(speeds, region, true) >= group_sum(speeds, region, false);
}

std::vector<double> dominant_group(const Eigen::VectorXd& speeds, const UndampedRegion& region) {
  const bool positive = dominant_group_is_positive(speeds, region);
  std::vector<double> group;
  for (Eigen::Index i = 0; i < speeds.size(); ++i)
    if ((speeds(i) > 0.0) == positive) group.push_back(std::abs(speeds(i)));
  std::sort(group.begin(), group.end(), std::greater<>());
  return group;
}

ThreeSpeedGeometry three_speed_geometry(double s1, double s2, double s3, double R) {
  if (!(s1 > s2 && s2 > s3 && s3 > 0.0))
    throw ChartimesError("three-speed geometry needs speeds s1 > s2 > s3 > 0");
  if (!(R > 0.0)) throw ChartimesError("three-speed geometry needs R > 0");
  ThreeSpeedGeometry g;
  g.s1 = s1;
  g.s2 = s2;
  g.s3 = s3;
  g.R = R;
  g.x2 = R * (s2 + s3) / (s2 - s3);
  g.t2 = 2.0 * R * s2 / (s3 * (s2 - s3));
  g.x1 = R * (s1 + s2) / (s1 - s2);
  g.t1 = 2.0 * R * s1 / (s3 * (s1 - s2));
  const double disc = s2 * s2 - s1 * s3;
  if (std::abs(disc) <= 1e-12 * s2 * s2) {
    g.kind = ThreeSpeedCase::kGeometric;
    g.t_lambda = 0.0;
  } else if (disc > 0.0) {
    g.kind = ThreeSpeedCase::kOverlap;
    g.t_lambda = 2.0 * R * disc / (s1 * s2 * (s2 - s3));
  } else {
    g.kind = ThreeSpeedCase::kGap;
    g.t_lambda = 0.0;
  }
  return g;
}

TauStarBounds tau_star_bounds(const Eigen::VectorXd& speeds, const UndampedRegion& region) {
  if (!region.is_single_stripe())
    throw ChartimesError("tau* bounds are defined for a single undamped stripe");
  const double width = region.stripes().front().length();
  TauStarBounds b;
  b.upper = tau_bar(speeds, region);

  const auto group = dominant_group(speeds, region);
  if (group.size() >= 2) {
    const auto m = group.size();
    b.lemma_lower = width / group[m - 1] + width / group[m - 2];
    b.lemma_defined = true;
  }

  if (speeds.size() == 3 && group.size() == 3) {
    const auto g = three_speed_geometry(group[0], group[1], group[2], 0.5 * width);
    if (g.kind == ThreeSpeedCase::kGap)
      b.exact_three_speed = width / group[2] + width / group[1];
    else
      b.exact_three_speed = b.upper - g.t_lambda;
  }
  return b;
}

bool geometric_ratio_holds(const Eigen::VectorXd& speeds, const UndampedRegion& region) {
  const auto group = dominant_group(speeds, region);
  for (std::size_t i = 0; i + 2 < group.size(); ++i) {
    const double r0 = group[i] / group[i + 1];
    const double r1 = group[i + 1] / group[i + 2];
    if (std::abs(r0 - r1) > 1e-12 * std::max(r0, r1)) return false;
  }
  return true;
}

double sharp_delay(const Eigen::VectorXd& speeds, const UndampedRegion& region, double t,
                   ScanSpec scan) {
  return t - sup_undamped_measure(speeds, region, t, scan).sup;
}

double corridor_delay(const Eigen::VectorXd& speeds, const UndampedRegion& region, double t) {
  if (!region.is_single_stripe())
    throw ChartimesError("corridor delay is defined for a single undamped stripe");
  const bool positive = dominant_group_is_positive(speeds, region);
  const auto group = dominant_group(speeds, region);
  const double slow = group.back();
  const auto& stripe = region.stripes().front();
  const double x = positive ? stripe.lo + slow * t : stripe.hi - slow * t;
  return t - undamped_union(speeds, region, x, t).measure;
}

}  // namespace pdlab
