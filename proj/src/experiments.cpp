#include "pdlab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace pdlab {

namespace {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  int samples = 0;
};

LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const auto n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    mx += x[k];
    my += y[k];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sxx += (x[k] - mx) * (x[k] - mx);
    sxy += (x[k] - mx) * (y[k] - my);
    syy += (y[k] - my) * (y[k] - my);
  }
  LineFit f;
  f.samples = static_cast<int>(x.size());
  f.slope = sxx > 0.0 ? sxy / sxx : 0.0;
  f.intercept = my - f.slope * mx;
  double ss_res = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double r = y[k] - (f.intercept + f.slope * x[k]);
    ss_res += r * r;
  }
  f.r_squared = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  return f;
}

std::pair<std::vector<double>, std::vector<double>> select_log_samples(
    const std::vector<double>& t, const std::vector<double>& value, double t_start, double t_end,
    bool log_time) {
  if (t.size() != value.size()) throw FitError("time and value series differ in length");
  std::vector<double> xs, ys;
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (t[k] < t_start || t[k] > t_end) continue;
    if (!(value[k] > 0.0)) throw FitError("nonpositive value at t = " + std::to_string(t[k]));
    if (log_time && !(t[k] > 0.0)) throw FitError("power-law fit needs t > 0");
    xs.push_back(log_time ? std::log(t[k]) : t[k]);
    ys.push_back(std::log(value[k]));
  }
  if (xs.size() < 10)
    throw FitError("insufficient samples: " + std::to_string(xs.size()) + " in the fit window (need 10)");
  return {xs, ys};
}

}  // namespace

DecayFit fit_decay_rate(const std::vector<double>& t, const std::vector<double>& value,
                        double t_start, double t_end) {
  const auto [xs, ys] = select_log_samples(t, value, t_start, t_end, false);
  const auto line = least_squares(xs, ys);
  return {-line.slope, line.intercept, line.r_squared, line.samples};
}

PowerFit fit_power_law(const std::vector<double>& t, const std::vector<double>& value,
                       double t_start, double t_end) {
  const auto [xs, ys] = select_log_samples(t, value, t_start, t_end, true);
  const auto line = least_squares(xs, ys);
  return {line.slope, line.intercept, line.r_squared, line.samples};
}

// ---------------------------------------------------------------------------

CheckResult check_system(const HyperbolicSystem& sys) {
  CheckResult r;
  r.validation = validate_system(sys);
  const auto B = full_damping(sys);
  const auto sym = 0.5 * (sys.A + sys.A.transpose());
  r.sk_eigvec = sk_check_eigvec(diagonalize(sym), B);
  r.sk_kalman = sk_check_kalman(sys.A, B);
  return r;
}

std::vector<double> time_grid(double start, double stop, double step) {
  if (!(step > 0.0) || stop < start) throw std::invalid_argument("time grid needs step > 0 and stop >= start");
  std::vector<double> out;
  const auto count = static_cast<long>(std::floor((stop - start) / step + 1e-9));
  for (long k = 0; k <= count; ++k) out.push_back(start + static_cast<double>(k) * step);
  return out;
}

TimesReport times_report(const HyperbolicSystem& sys, const std::vector<double>& t_grid) {
  const auto eigs = diagonalize(sys.A);
  const auto& speeds = eigs.lambdas;
  const auto& region = sys.region;
  TimesReport rep;
  rep.tau_bar = tau_bar(speeds, region);
  rep.geometric = geometric_ratio_holds(speeds, region);
  if (region.is_single_stripe()) {
    rep.tau_star = tau_star_bounds(speeds, region);
    const auto group = dominant_group(speeds, region);
    if (speeds.size() == 3 && group.size() == 3) {
      const auto& stripe = region.stripes().front();
      auto g = three_speed_geometry(group[0], group[1], group[2], stripe.half_width());
      // Formulas are for rightward movers through [-R, R]; map to the actual stripe.
      const bool rightward = dominant_group_is_positive(speeds, region);
      g.x1 = rightward ? stripe.center() + g.x1 : stripe.center() - g.x1;
      g.x2 = rightward ? stripe.center() + g.x2 : stripe.center() - g.x2;
      rep.three_speed = g;
    }
  }
  for (double t : t_grid) {
    const auto s = sup_undamped_measure(speeds, region, t);
    rep.delays.push_back({t, s.sup, s.argmax, t - s.sup});
  }
  return rep;
}

// ---------------------------------------------------------------------------

Simulation prepare_simulation(const Scenario& sc, bool full_damping_everywhere) {
  auto eigs = diagonalize(sc.system.A);
  Eigen::MatrixXd source = source_matrix(eigs, full_damping(sc.system));
  std::optional<UndampedRegion> region;
  if (!full_damping_everywhere) region = sc.system.region;
  Grid grid = build_grid(sc.domain, eigs.lambdas, region, sc.t_final);
  State initial = sample_initial(sc.initial, grid, sc.t_final);
  TransportSolver solver(std::move(grid), source);
  return Simulation{std::move(eigs), std::move(source), std::move(solver), std::move(initial)};
}

Trajectory simulate(const Scenario& sc, bool full_damping_everywhere, bool keep_final_state) {
  auto sim = prepare_simulation(sc, full_damping_everywhere);
  return run(sim.solver, std::move(sim.initial), {sc.t_final, sc.stride, keep_final_state});
}

Calibration calibrate(const Trajectory& reference, double gamma, double safety) {
  if (reference.samples.empty()) throw std::invalid_argument("missing calibration: empty reference run");
  const auto& first = reference.samples.front();
  if (!(first.l2_total > 0.0) || !(first.l1 > 0.0))
    throw std::invalid_argument("missing calibration: reference run has zero initial data");
  Calibration c;
  c.gamma = gamma;
  c.safety = safety;
  for (const auto& s : reference.samples) {
    const double t = s.t - first.t;
    c.c_high = std::max(c.c_high, s.l2_high * std::exp(gamma * t) / first.l2_total);
    if (t > 0.0) c.c_low = std::max(c.c_low, s.linf_low * std::sqrt(t) / first.l1);
  }
  c.c_high *= safety;
  c.c_low *= safety;
  return c;
}

std::optional<double> decay_onset(const Trajectory& traj, double epsilon) {
  if (traj.samples.empty()) return std::nullopt;
  const double threshold = (1.0 - epsilon) * traj.samples.front().l2_total;
  for (const auto& s : traj.samples)
    if (s.l2_total < threshold) return s.t - traj.samples.front().t;
  return std::nullopt;
}

EnvelopeReport verify_envelope(const Trajectory& traj, const Calibration& calib, double tau_bar,
                               double slack) {
  if (!(calib.c_high > 0.0) || !(calib.c_low > 0.0))
    throw std::invalid_argument("missing calibration: constants must be positive");
  if (traj.samples.empty()) throw std::invalid_argument("empty trajectory");
  EnvelopeReport rep;
  rep.gamma = calib.gamma;
  rep.c_high = calib.c_high;
  rep.c_low = calib.c_low;
  rep.tau_bar = tau_bar;
  rep.slack = slack;
  rep.check_from = tau_bar + traj.sample_interval();

  const auto& first = traj.samples.front();
  const double limit = std::log1p(slack);
  for (const auto& s : traj.samples) {
    const double t = s.t - first.t;
    const double bound = std::log(calib.c_high * first.l2_total) - calib.gamma * (t - tau_bar);
    const double margin = std::log(s.l2_high) - bound;
    rep.margins.emplace_back(t, margin);
    if (t > tau_bar) {
      const double low_bound = std::log(calib.c_low * first.l1) - 0.5 * std::log(t - tau_bar);
      const double low_margin = std::log(s.linf_low) - low_bound;
      rep.low_margins.emplace_back(t, low_margin);
      if (t >= rep.check_from - 1e-12 && low_margin > limit) ++rep.low_violations;
    }
    if (t >= rep.check_from - 1e-12) {
      ++rep.checked;
      if (margin > limit) ++rep.violations;
    }
  }
  rep.onset = decay_onset(traj, rep.onset_epsilon);
  return rep;
}

// ---------------------------------------------------------------------------

int slowest_dominant_component(const EigenStructure& eigs, const UndampedRegion& region) {
  const bool positive = dominant_group_is_positive(eigs.lambdas, region);
  int best = -1;
  for (Eigen::Index i = 0; i < eigs.lambdas.size(); ++i) {
    if ((eigs.lambdas(i) > 0.0) != positive) continue;
    if (best < 0 || std::abs(eigs.lambdas(i)) < std::abs(eigs.lambdas(best))) best = static_cast<int>(i);
  }
  if (best < 0) throw std::invalid_argument("no component in the dominant sign group");
  return best;
}

Bump corridor_bump(const EigenStructure& eigs, const UndampedRegion& region, int component,
                   double width, BumpShape shape, double amplitude) {
  if (component < 0 || component >= eigs.n()) throw std::invalid_argument("component out of range");
  Bump b;
  b.component = component;
  b.shape = shape;
  b.width = width;
  b.amplitude = amplitude;
  b.center = 0.0;
  const double half = b.support().half_width();
  // Trailing edge on the upstream stripe edge: the whole bump starts undamped.
  if (eigs.lambdas(component) > 0.0)
    b.center = region.stripes().front().lo + half;
  else
    b.center = region.stripes().back().hi - half;
  return b;
}

ProbeReport conservation_probe(const Scenario& sc, double epsilon) {
  if (sc.initial.size() != 1)
    throw std::invalid_argument("conservation probe needs exactly one corridor bump");
  const auto eigs = diagonalize(sc.system.A);
  const Bump& bump = sc.initial.front();
  const double lambda = eigs.lambdas(bump.component);
  const auto support = bump.support();
  const double lead = lambda > 0.0 ? support.hi : support.lo;
  const double trail = lambda > 0.0 ? support.lo : support.hi;

  // First stripe met downstream by the leading edge; the bump leaves it over
  // [t_ex(lead), t_ex(trail)].
  ProbeReport rep;
  const double T = sc.t_final;
  bool found = false;
  const auto& stripes = sc.system.region.stripes();
  for (std::size_t k = 0; k < stripes.size(); ++k) {
    const auto& stripe = lambda > 0.0 ? stripes[k] : stripes[stripes.size() - 1 - k];
    const bool downstream = lambda > 0.0 ? stripe.hi >= lead : stripe.lo <= lead;
    if (!downstream) continue;
    rep.predicted_onset = crossing_window(lambda, stripe, lead + lambda * T, T).t_ex;
    rep.predicted_end = crossing_window(lambda, stripe, trail + lambda * T, T).t_ex;
    found = true;
    break;
  }
  if (!found) rep.predicted_onset = rep.predicted_end = 0.0;

  rep.trajectory = simulate(sc);
  rep.sample_interval = rep.trajectory.sample_interval();
  rep.onset = decay_onset(rep.trajectory, epsilon);
  const double l2_0 = rep.trajectory.samples.front().l2_total;
  rep.plateau_ratio = 1.0;
  for (const auto& s : rep.trajectory.samples) {
    if (s.t > rep.predicted_onset + 1e-12) break;
    rep.plateau_ratio = std::min(rep.plateau_ratio, s.l2_total / l2_0);
  }
  return rep;
}

VerifyResult verify_pipeline(const Scenario& sc, double slack) {
  VerifyResult r;
  r.spectrum = gamma_estimate(sc.system);
  r.reference = simulate(sc, /*full_damping=*/true);
  r.calibration = calibrate(r.reference, r.spectrum.gamma);
  r.trajectory = simulate(sc);
  const auto eigs = diagonalize(sc.system.A);
  r.envelope = verify_envelope(r.trajectory, r.calibration, tau_bar(eigs.lambdas, sc.system.region), slack);
  if (sc.system.region.is_single_stripe())
    r.envelope.tau_star = tau_star_bounds(eigs.lambdas, sc.system.region);
  return r;
}

}  // namespace pdlab
