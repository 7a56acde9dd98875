#ifndef PDLAB_EXPERIMENTS_HPP_
#define PDLAB_EXPERIMENTS_HPP_

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pdlab/chartimes.hpp"
#include "pdlab/model.hpp"
#include "pdlab/scenario.hpp"
#include "pdlab/solver.hpp"
#include "pdlab/spectral.hpp"

namespace pdlab {

class FitError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct DecayFit {
  double rate = 0.0;  // positive means decay
  double intercept = 0.0;
  double r_squared = 0.0;
  int samples = 0;
};

/// Least squares of log(value) against t over t_start <= t <= t_end.
DecayFit fit_decay_rate(const std::vector<double>& t, const std::vector<double>& value,
                        double t_start, double t_end = std::numeric_limits<double>::infinity());

struct PowerFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  int samples = 0;
};

/// Least squares of log(value) against log(t) over t_start <= t <= t_end.
PowerFit fit_power_law(const std::vector<double>& t, const std::vector<double>& value,
                       double t_start, double t_end = std::numeric_limits<double>::infinity());

// ---------------------------------------------------------------------------

struct CheckResult {
  ValidationReport validation;
  bool sk_eigvec = false;
  bool sk_kalman = false;

  [[nodiscard]] bool passed() const noexcept {
    return validation.passed() && sk_eigvec && sk_kalman;
  }
};

CheckResult check_system(const HyperbolicSystem& sys);

struct DelayRow {
  double t = 0.0;
  double sup = 0.0;
  double argmax = 0.0;
  double delay = 0.0;
};

struct TimesReport {
  double tau_bar = 0.0;
  std::optional<TauStarBounds> tau_star;
  bool geometric = false;
  std::optional<ThreeSpeedGeometry> three_speed;
  std::vector<DelayRow> delays;
};

/// Inclusive time grid start, start + step, ... <= stop.
std::vector<double> time_grid(double start, double stop, double step);

TimesReport times_report(const HyperbolicSystem& sys, const std::vector<double>& t_grid);

// ---------------------------------------------------------------------------

/// Grid, solver and initial state for one scenario. full_damping replaces the
/// undamped region by damping everywhere.
struct Simulation {
  EigenStructure eigs;
  Eigen::MatrixXd source;
  TransportSolver solver;
  State initial;
};

Simulation prepare_simulation(const Scenario& sc, bool full_damping = false);

Trajectory simulate(const Scenario& sc, bool full_damping = false, bool keep_final_state = false);

struct Calibration {
  double gamma = 0.0;
  double c_high = 0.0;  // ||V^h(t)|| <= c_high e^{-gamma t} ||V_0||
  double c_low = 0.0;   // ||V^l(t)||_inf <= c_low t^{-1/2} ||V_0||_{L1}
  double safety = 1.1;
};

/// Constants from a fully damped reference trajectory, inflated by `safety`.
Calibration calibrate(const Trajectory& reference, double gamma, double safety = 1.1);

struct EnvelopeReport {
  double gamma = 0.0;
  double c_high = 0.0;
  double c_low = 0.0;
  double tau_bar = 0.0;
  std::optional<TauStarBounds> tau_star;
  double slack = 0.05;
  double check_from = 0.0;  // tau_bar + one sampling interval
  std::vector<std::pair<double, double>> margins;      // (t, high-frequency log margin)
  std::vector<std::pair<double, double>> low_margins;  // (t, low-frequency log margin)
  int violations = 0;
  int low_violations = 0;
  int checked = 0;
  double onset_epsilon = 0.01;
  std::optional<double> onset;  // first t with L2 < (1 - eps) L2(0)

  [[nodiscard]] bool passed() const noexcept { return violations == 0 && low_violations == 0; }
};

/// Delayed-envelope check of a trajectory. Violations are counted only for
/// t >= tau_bar + one sampling interval; the margin must stay below
/// log(1 + slack).
EnvelopeReport verify_envelope(const Trajectory& traj, const Calibration& calib, double tau_bar,
                               double slack = 0.05);

/// First sample time with l2_total < (1 - epsilon) * l2_total(0).
std::optional<double> decay_onset(const Trajectory& traj, double epsilon = 0.01);

struct ProbeReport {
  double predicted_onset = 0.0;  // leading edge of the bump leaves the undamped region
  double predicted_end = 0.0;    // trailing edge leaves it
  std::optional<double> onset;
  double plateau_ratio = 0.0;    // min L2(t)/L2(0) over t <= predicted_onset
  double sample_interval = 0.0;
  Trajectory trajectory;
};

/// Runs a single-bump scenario and compares the measured decay onset with the
/// characteristic exit time of the bump's leading edge.
ProbeReport conservation_probe(const Scenario& sc, double epsilon = 0.01);

/// Bump on `component` (0-based) whose support starts at the upstream edge of
/// the first stripe, so it rides the undamped region from t = 0 until its
/// leading edge exits at 2R/|lambda| - width.
Bump corridor_bump(const EigenStructure& eigs, const UndampedRegion& region, int component,
                   double width, BumpShape shape = BumpShape::kCosineBump, double amplitude = 1.0);

/// Index (0-based) of the slowest member of the sign group attaining tau_bar.
int slowest_dominant_component(const EigenStructure& eigs, const UndampedRegion& region);

struct VerifyResult {
  SpectralScan spectrum;
  Calibration calibration;
  Trajectory reference;
  Trajectory trajectory;
  EnvelopeReport envelope;
};

/// Spectral gamma, full-damping calibration, localized run, envelope check.
VerifyResult verify_pipeline(const Scenario& sc, double slack = 0.05);

}  // namespace pdlab

#endif  // PDLAB_EXPERIMENTS_HPP_
